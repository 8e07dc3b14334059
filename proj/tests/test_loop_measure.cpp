#include "corpus.hpp"

#include "loopsoup/loop_measure.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

using namespace loopsoup;

namespace {

double product(const std::vector<int>& walk, const TransitionMatrix& p) {
  double w = 1.0;
  for (std::size_t i = 0; i < walk.size(); ++i) w *= p(walk[i], walk[(i + 1) % walk.size()]);
  return w;
}

OneForm random_form(const WeightedGraph& g, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  OneForm a(g);
  for (const auto& e : g.edges()) a.set(e.u, e.v, z(gen));
  return a;
}

}  // namespace

TEST(Loops, RootedLoopValidation) {
  EXPECT_THROW(RootedLoop({0}), std::invalid_argument);
  const auto g = corpus::c4();
  EXPECT_NO_THROW(RootedLoop({0, 1, 2, 3}).validate(g));
  EXPECT_THROW(RootedLoop({0, 2}).validate(g), std::invalid_argument);
  EXPECT_THROW(RootedLoop({0, 1, 2}).validate(g), std::invalid_argument);  // 2 -> 0 is not an edge
}

TEST(Loops, CanonicalRotationAndPeriod) {
  const std::vector<int> a = {2, 0, 1};
  const std::vector<int> b = {1, 2, 0};
  EXPECT_EQ(UnrootedLoop(a), UnrootedLoop(b));
  EXPECT_EQ(UnrootedLoop(a).vertices()[0], 0);
  EXPECT_EQ(UnrootedLoop(a).period(), 1);
  const std::vector<int> periodic = {1, 0, 1, 0};
  const UnrootedLoop p(periodic);
  EXPECT_EQ(p.period(), 2);
  EXPECT_EQ(p.vertices()[0], 0);
  const std::vector<int> triple = {0, 1, 0, 1, 0, 1};
  EXPECT_EQ(UnrootedLoop(triple).period(), 3);
  const std::vector<int> ties = {0, 1, 0, 2};
  EXPECT_EQ(minimal_rotation(ties), 0u);
  const std::vector<int> ties2 = {0, 2, 0, 1};
  EXPECT_EQ(minimal_rotation(ties2), 2u);
}

TEST(Loops, RootedWeights) {
  const auto p = build_transition(corpus::k3());
  EXPECT_NEAR(rooted_weight(RootedLoop({0, 1}), p), 1.0 / 18.0, 1e-16);
  EXPECT_NEAR(rooted_weight(RootedLoop({0, 1, 2}), p), 1.0 / 81.0, 1e-16);
  EXPECT_DOUBLE_EQ(rooted_weight(RootedLoop({1, 2, 0}), p), rooted_weight(RootedLoop({0, 1, 2}), p));
  EXPECT_THROW(rooted_weight(RootedLoop({0, 1, 0, 0}), p), std::invalid_argument);
}

TEST(Loops, UnrootedMassIsSumOverDistinctRotations) {
  const auto p3 = build_transition(corpus::k3());
  const auto p4 = build_transition(corpus::c4());
  const std::vector<int> edge = {0, 1};
  const std::vector<int> tri = {0, 1, 2};
  const std::vector<int> back_forth = {0, 1, 0, 1};
  EXPECT_NEAR(mu_of_unrooted(UnrootedLoop(edge), p3), 1.0 / 9.0, 1e-16);
  EXPECT_NEAR(mu_of_unrooted(UnrootedLoop(tri), p3), 1.0 / 27.0, 1e-16);
  EXPECT_NEAR(mu_of_unrooted(UnrootedLoop(back_forth), p4), 1.0 / 162.0, 1e-16);

  // Oracle: sum w_r over the distinct rotations, listed explicitly.
  for (const auto& word : {back_forth, std::vector<int>{0, 1, 2, 3}, std::vector<int>{0, 1, 0, 3}}) {
    std::set<std::vector<int>> rotations;
    for (std::size_t s = 0; s < word.size(); ++s) {
      std::vector<int> r(word.begin() + static_cast<long>(s), word.end());
      r.insert(r.end(), word.begin(), word.begin() + static_cast<long>(s));
      rotations.insert(r);
    }
    double sum = 0.0;
    for (const auto& r : rotations) sum += rooted_weight(RootedLoop(r), p4);
    EXPECT_NEAR(mu_of_unrooted(UnrootedLoop(word), p4), sum, 1e-16);
  }
}

TEST(Loops, LengthMass) {
  const auto p = build_transition(corpus::k3());
  EXPECT_NEAR(length_mass(p, 2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(length_mass(p, 3), 2.0 / 27.0, 1e-15);
  EXPECT_THROW(length_mass(p, 1), std::invalid_argument);
  for (const auto& [name, g] : corpus::graphs()) {
    const auto pg = build_transition(g);
    for (int k = 2; k <= 10; ++k) {
      double trace = 0.0;
      corpus::for_each_rooted_walk(g, k, [&](const std::vector<int>& w) { trace += product(w, pg); });
      EXPECT_NEAR(length_mass(pg, k), trace / k, 1e-12) << name << " k=" << k;
    }
  }
}

TEST(Loops, TotalMass) {
  EXPECT_NEAR(total_mass(build_transition(corpus::k3())), std::log(27.0 / 16.0), 1e-14);
  EXPECT_NEAR(total_mass(build_transition(WeightedGraph(2, {{0, 1}}, {1, 1}))), std::log(4.0 / 3.0), 1e-14);
  const auto p = build_transition(corpus::k3());
  double partial = 0.0;
  for (int k = 2; k <= 20; ++k) partial += length_mass(p, k);
  EXPECT_LE(std::abs(partial - std::log(27.0 / 16.0)), 10.0 * std::pow(2.0 / 3.0, 21));
}

TEST(Charfn, TriangleAtPi) {
  const auto p = build_transition(corpus::k3());
  const auto a = corpus::unit_form(p.graph());
  // Independent oracle: Laplace expansion of the two 3x3 determinants.
  const ComplexMatrix i3 = ComplexMatrix::Identity(3, 3);
  const Complex num = corpus::laplace_det(i3 - perturbed_transition(p, a, std::numbers::pi));
  const Complex den = corpus::laplace_det(i3 - p.matrix().cast<Complex>());
  EXPECT_NEAR(num.real(), 20.0 / 27.0, 1e-15);
  EXPECT_NEAR(den.real(), 16.0 / 27.0, 1e-15);
  EXPECT_NEAR(std::abs(exact_charfn(p, a, std::numbers::pi, 1.0) - 0.8), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(exact_charfn(p, a, std::numbers::pi, 2.0) - 0.64), 0.0, 1e-12);
  EXPECT_EQ(exact_charfn(p, a, 0.0, 3.7), Complex(1.0, 0.0));
  EXPECT_THROW(exact_charfn(p, a, 1.0, 0.0), std::invalid_argument);
}

TEST(Charfn, ModulusAndConjugation) {
  std::mt19937_64 gen(23);
  for (const auto& [name, g] : corpus::graphs()) {
    const auto p = build_transition(g);
    const auto a = random_form(g, gen);
    for (double beta = -std::numbers::pi; beta <= std::numbers::pi; beta += 0.25) {
      const Complex plus = exact_charfn(p, a, beta, 1.3);
      const Complex minus = exact_charfn(p, a, -beta, 1.3);
      EXPECT_LE(std::abs(plus), 1.0 + 1e-12) << name;
      EXPECT_LE(std::abs(plus - std::conj(minus)), 1e-12) << name;
    }
  }
}

TEST(Charfn, EnumerationOracleWithinTailBound) {
  const int k_max = 16;
  std::mt19937_64 gen(29);
  for (const auto& [name, g] : corpus::graphs()) {
    const auto p = build_transition(g);
    const auto a = random_form(g, gen);
    const auto loops = enumerate_loops(p, k_max);
    const double tail = tail_bound(p, k_max);
    for (double beta : {0.3, 1.0, 2.5, -std::numbers::pi}) {
      for (double lambda : {0.5, 1.0, 2.0}) {
        Complex sum = 0.0;
        for (const auto& wl : loops) sum += wl.weight * (std::exp(Complex(0.0, beta * a.integrate(wl.loop.vertices()))) - 1.0);
        const Complex residual = lambda * sum + lambda * log_det_ratio(p, a, beta);
        EXPECT_LE(std::abs(residual), 2.0 * lambda * tail) << name << " beta=" << beta;
      }
    }
  }
}

TEST(Enumeration, SmallCases) {
  const auto p3 = build_transition(corpus::k3());
  std::map<int, std::vector<double>> by_length;
  for (const auto& wl : enumerate_loops(p3, 3)) by_length[wl.loop.length()].push_back(wl.weight);
  ASSERT_EQ(by_length[2].size(), 3u);
  ASSERT_EQ(by_length[3].size(), 2u);
  double sum = 0.0;
  for (double w : by_length[2]) {
    EXPECT_NEAR(w, 1.0 / 9.0, 1e-16);
    sum += w;
  }
  for (double w : by_length[3]) {
    EXPECT_NEAR(w, 1.0 / 27.0, 1e-16);
    sum += w;
  }
  EXPECT_NEAR(sum, 1.0 / 3.0 + 2.0 / 27.0, 1e-15);

  std::map<int, int> c4_counts;
  for (const auto& wl : enumerate_loops(build_transition(corpus::c4()), 3)) ++c4_counts[wl.loop.length()];
  EXPECT_EQ(c4_counts[2], 4);
  EXPECT_EQ(c4_counts.count(3), 0u);
}

TEST(Enumeration, EachClassOnceAndMassesMatchTraces) {
  for (const auto& [name, g] : corpus::graphs()) {
    const auto p = build_transition(g);
    const int k_max = 10;
    std::set<UnrootedLoop> seen;
    std::map<int, double> mass;
    LoopEnumerator(p, k_max).for_each([&](const UnrootedLoop& loop, double w) {
      EXPECT_TRUE(seen.insert(loop).second) << name;
      mass[loop.length()] += w;
    });
    for (int k = 2; k <= k_max; ++k) EXPECT_NEAR(mass[k], length_mass(p, k), 1e-12) << name << " k=" << k;
  }
}

TEST(Enumeration, CapIsEnforced) {
  EXPECT_THROW(enumerate_loops(build_transition(WeightedGraph::grid(3, 3, 1.0)), 16, 1000), std::length_error);
  EXPECT_THROW(enumerate_loops(build_transition(corpus::k3()), 1), std::invalid_argument);
}

TEST(Clt, TriangleVariance) {
  const auto p = build_transition(corpus::k3());
  const auto g = greens_function(p);
  const auto a = corpus::unit_form(p.graph());
  EXPECT_NEAR(clt_variance(p, g, a), 1.0 / 8.0, 1e-12);
  EXPECT_NEAR(clt_limit_charfn(p, g, a, 1.0), std::exp(-1.0 / 16.0), 1e-12);
  EXPECT_EQ(clt_limit_charfn(p, g, a, 0.0), 1.0);
  EXPECT_EQ(clt_variance(p, g, OneForm(p.graph())), 0.0);

  // Hand-expanded traces with G = (3/4)(I + J): the one-point term is
  // 2 * (1/3) * (3/4) = 1/2 and the two-point term is -3/8.
  const RealMatrix pa = hadamard(p.matrix(), a.matrix());
  EXPECT_NEAR((hadamard(pa, a.matrix()) * g.matrix()).trace(), 0.5, 1e-15);
  EXPECT_NEAR((pa * g.matrix() * pa * g.matrix()).trace(), -3.0 / 8.0, 1e-15);
}

TEST(Clt, CycleVariance) {
  const auto p = build_transition(corpus::c4());
  const auto g = greens_function(p);
  const auto a = corpus::unit_form(p.graph());
  EXPECT_NEAR(clt_variance(p, g, a), 2.0 / 45.0, 1e-12);
  EXPECT_NEAR(clt_limit_charfn(p, g, a, 3.0), std::exp(-0.2), 1e-12);
}

TEST(Clt, EnumerationPartialSums) {
  struct Case {
    WeightedGraph graph;
    double target;
  };
  for (const auto& c : {Case{corpus::k3(), 1.0 / 8.0}, Case{corpus::c4(), 2.0 / 45.0}}) {
    const auto p = build_transition(c.graph);
    const auto a = corpus::unit_form(c.graph);
    double sum = 0.0;
    for (const auto& wl : enumerate_loops(p, 16)) {
      const double x = a.integrate(wl.loop.vertices());
      sum += wl.weight * x * x;
    }
    // (int A)^2 <= k^2 on a loop of length k; the tail is bounded by
    // sum_{k > 16} n rho^k k.
    const double rho = spectral_radius_bound(p);
    double tail = 0.0;
    for (int k = 17; k < 5000; ++k) tail += c.graph.vertex_count() * std::pow(rho, k) * k;
    EXPECT_LE(sum, c.target + 1e-15);
    EXPECT_LE(c.target - sum, tail);
  }
}

TEST(Clt, FiniteDifferenceOfLogCharfn) {
  std::mt19937_64 gen(31);
  for (const auto& [name, g] : corpus::graphs()) {
    const auto p = build_transition(g);
    const auto green = greens_function(p);
    const auto a = random_form(g, gen);
    const double h = 1e-3;
    const double f0 = std::real(log_det_ratio(p, a, 0.0));
    const double fp = std::real(log_det_ratio(p, a, h));
    const double fm = std::real(log_det_ratio(p, a, -h));
    const double second = (fp - 2.0 * f0 + fm) / (h * h);
    const double sigma2 = clt_variance(p, green, a);
    EXPECT_LE(std::abs(second - sigma2), 1e-5 * sigma2) << name;
  }
}

TEST(Clt, PolarizationAndScaling) {
  std::mt19937_64 gen(37);
  for (const auto& [name, g] : corpus::graphs()) {
    const auto p = build_transition(g);
    const auto green = greens_function(p);
    const auto a = random_form(g, gen);
    const auto b = random_form(g, gen);
    const double ab = clt_variance(p, green, a + b) - clt_variance(p, green, a) - clt_variance(p, green, b);
    const double ba = clt_variance(p, green, b + a) - clt_variance(p, green, b) - clt_variance(p, green, a);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_NEAR(ab, 2.0 * clt_covariance(p, green, a, b), 1e-12);
    EXPECT_NEAR(clt_covariance(p, green, a, b), clt_covariance(p, green, b, a), 1e-12);
    const double s = clt_variance(p, green, a);
    EXPECT_GE(s, -1e-10);
    EXPECT_NEAR(clt_variance(p, green, 2.5 * a), 6.25 * s, 1e-12 * s);
  }
}

TEST(Clt, TraceIdentity) {
  const auto p3 = build_transition(corpus::k3());
  const auto a3 = corpus::unit_form(p3.graph());
  EXPECT_LE(trace_identity_residual(p3, greens_function(p3), a3, a3), 1e-14);
  const auto p4 = build_transition(corpus::c4());
  const auto a4 = corpus::unit_form(p4.graph());
  EXPECT_LE(trace_identity_residual(p4, greens_function(p4), a4, a4), 1e-14);
  EXPECT_EQ(trace_identity_residual(p4, greens_function(p4), OneForm(p4.graph()), OneForm(p4.graph())), 0.0);

  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> kappa(0.2, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    // Regular graphs with constant killing give symmetric P.
    const WeightedGraph g = trial % 2 ? WeightedGraph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}, std::vector<double>(5, kappa(gen)))
                                      : WeightedGraph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, std::vector<double>(4, kappa(gen)));
    const auto p = build_transition(g);
    EXPECT_LE(trace_identity_residual(p, greens_function(p), random_form(g, gen), random_form(g, gen)), 1e-10);
  }

  const auto path = build_transition(WeightedGraph(2, {{0, 1}}, {1.0, 0.0}));
  const auto ap = corpus::unit_form(path.graph());
  EXPECT_THROW(trace_identity_residual(path, greens_function(path), ap, ap), std::invalid_argument);
}

TEST(TailBound, MatchesDirectSum) {
  const auto p = build_transition(corpus::k3());
  const double rho = spectral_radius_bound(p);
  EXPECT_GT(rho, 2.0 / 3.0);
  EXPECT_LT(rho, 2.0 / 3.0 * 1.02);
  double direct = 0.0;
  for (int k = 11; k < 2000; ++k) direct += 3.0 * std::pow(rho, k) / k;
  EXPECT_NEAR(tail_bound(3, rho, 10), direct, 1e-14);
}
