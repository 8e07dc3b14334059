#include "corpus.hpp"

#include "loopsoup/holonomy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace loopsoup;

namespace {

const Complex I(0.0, 1.0);

ComplexMatrix pauli(int which) {
  ComplexMatrix s(2, 2);
  if (which == 1) s << 0, 1, 1, 0;
  if (which == 2) s << 0, -I, I, 0;
  if (which == 3) s << 1, 0, 0, -1;
  return s;
}

ComplexMatrix random_hermitian(int d, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = {z(gen), z(gen)};
  return 0.5 * (a + a.adjoint());
}

ComplexMatrix random_unitary(int d, std::mt19937_64& gen) {
  return matrix_exp_hermitian(random_hermitian(d, gen), 1.0);
}

Connection random_connection(const WeightedGraph& g, int d, std::mt19937_64& gen, double scale = 1.0) {
  Connection c(g, d);
  for (const auto& e : g.edges()) c.set(e.u, e.v, scale * random_hermitian(d, gen));
  return c;
}

Connection scalar_connection(const OneForm& a, const WeightedGraph& g) {
  Connection c(g, 1);
  for (const auto& e : g.edges()) c.set(e.u, e.v, ComplexMatrix::Constant(1, 1, a(e.u, e.v)));
  return c;
}

/// Graphs whose transition matrix is symmetric.
std::vector<corpus::Named> symmetric_corpus() {
  const auto base = WeightedGraph::grid(3, 3, 1.0);
  std::vector<double> kappa(9);
  for (int x = 0; x < 9; ++x) kappa[static_cast<std::size_t>(x)] = 4.5 - base.degree(x);
  return {{"K3", corpus::k3()},
          {"C4", corpus::c4()},
          {"grid2x2", WeightedGraph::grid(2, 2, 1.0)},
          {"grid3x3_flat", WeightedGraph(9, base.edges(), kappa)}};
}

}  // namespace

TEST(MatrixExp, Examples) {
  EXPECT_TRUE(matrix_exp_hermitian(ComplexMatrix::Zero(3, 3), 2.0).isApprox(ComplexMatrix::Identity(3, 3)));
  const ComplexMatrix a = ComplexMatrix::Constant(1, 1, 0.7);
  EXPECT_LE(std::abs(matrix_exp_hermitian(a, 1.3)(0, 0) - std::exp(I * 0.91)), 1e-15);
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 0.4;
  diag(1, 1) = -1.1;
  const ComplexMatrix e = matrix_exp_hermitian(diag, 0.5);
  EXPECT_LE(std::abs(e(0, 0) - std::exp(I * 0.2)), 1e-15);
  EXPECT_LE(std::abs(e(1, 1) - std::exp(I * -0.55)), 1e-15);
  EXPECT_LE(std::abs(e(0, 1)), 1e-15);
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(matrix_exp_hermitian(bad, 1.0), std::invalid_argument);
}

TEST(MatrixExp, UnitaryAndMatchesSeries) {
  std::mt19937_64 gen(1);
  for (int d = 1; d <= 4; ++d) {
    const ComplexMatrix a = random_hermitian(d, gen);
    const ComplexMatrix u = matrix_exp_hermitian(a, 0.8);
    EXPECT_LE((u * u.adjoint() - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12);
    ComplexMatrix series = ComplexMatrix::Identity(d, d), term = ComplexMatrix::Identity(d, d);
    for (int k = 1; k < 60; ++k) {
      term = term * (I * 0.8 * a) / static_cast<double>(k);
      series += term;
    }
    EXPECT_LE((u - series).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(Connection, ValidationAndAntisymmetry) {
  const auto g = corpus::k3();
  Connection c(g, 2);
  EXPECT_THROW(Connection(g, 0), std::invalid_argument);
  EXPECT_THROW(c.set(0, 1, ComplexMatrix::Zero(3, 3)), std::invalid_argument);
  ComplexMatrix almost = pauli(1);
  almost(0, 1) += 1e-14;
  EXPECT_NO_THROW(c.set(0, 1, almost));
  EXPECT_TRUE(c.generator(0, 1).isApprox(c.generator(0, 1).adjoint()));
  EXPECT_TRUE((c.generator(1, 0) + c.generator(0, 1)).isZero(0.0));
  ComplexMatrix skew = pauli(1);
  skew(0, 1) += 1e-3;
  EXPECT_THROW(c.set(0, 1, skew), std::invalid_argument);
  EXPECT_TRUE(c.generator(1, 2).isZero(0.0));
  Connection four(corpus::c4(), 1);
  EXPECT_THROW(four.set(0, 2, ComplexMatrix::Zero(1, 1)), std::invalid_argument);
}

TEST(HolonomyTrace, Reductions) {
  const auto g = corpus::c4();
  const std::vector<int> loop = {0, 1, 2, 3, 0, 3};
  EXPECT_EQ(holonomy_trace(loop, Connection(g, 3), 1.0), Complex(1.0, 0.0));

  OneForm a(g);
  a.set(0, 1, 0.4).set(1, 2, -1.2).set(3, 0, 0.9);
  const auto scalar = scalar_connection(a, g);
  EXPECT_LE(std::abs(holonomy_trace(loop, scalar, 0.7) - std::exp(I * 0.7 * a.integrate(loop))), 1e-12);

  std::mt19937_64 gen(2);
  const auto conn = random_connection(g, 3, gen);
  const std::vector<int> rotated = {2, 3, 0, 3, 0, 1};
  const std::vector<int> reversed = {3, 0, 3, 2, 1, 0};
  const Complex t = holonomy_trace(loop, conn, 0.6);
  EXPECT_LE(std::abs(t - holonomy_trace(rotated, conn, 0.6)), 1e-12);
  EXPECT_LE(std::abs(std::conj(t) - holonomy_trace(reversed, conn, 0.6)), 1e-12);
  EXPECT_LE(std::abs(t), 1.0 + 1e-12);
}

TEST(HolonomyExpectation, TrivialAndScalarReduction) {
  for (const auto& [name, g] : symmetric_corpus()) {
    const auto p = build_transition(g);
    const auto green = greens_function(p);
    EXPECT_LE(std::abs(exact_holonomy_expectation(p, Connection(g, 2), 1.0, 1.0) - 1.0), 1e-12) << name;
    EXPECT_NEAR(holonomy_limit(p, green, Connection(g, 3)), 1.0, 1e-15) << name;

    std::mt19937_64 gen(3);
    std::normal_distribution<double> z;
    OneForm a(g);
    for (const auto& e : g.edges()) a.set(e.u, e.v, z(gen));
    const auto scalar = scalar_connection(a, g);
    for (double beta : {-2.0, 0.3, 1.0, 3.0}) {
      EXPECT_LE(std::abs(exact_holonomy_expectation(p, scalar, beta, 1.7) - exact_charfn(p, a, beta, 1.7)), 1e-12) << name;
      EXPECT_LE(std::abs(holonomy_soup_expectation(p, scalar, beta, 1.7) - exact_charfn(p, a, beta, 1.7)), 1e-12) << name;
    }
    EXPECT_NEAR(holonomy_limit(p, green, scalar), clt_limit_charfn(p, green, a, 1.0), 1e-12) << name;
  }
  const auto p = build_transition(corpus::k3());
  const auto scalar = scalar_connection(corpus::unit_form(p.graph()), p.graph());
  EXPECT_LE(std::abs(exact_holonomy_expectation(p, scalar, std::numbers::pi, 1.0) - 0.8), 1e-12);
  EXPECT_NEAR(holonomy_limit(p, greens_function(p), scalar), std::exp(-1.0 / 16.0), 1e-12);
}

TEST(HolonomyExpectation, DiagonalConnectionEnumerationOracle) {
  const int k_max = 12;
  for (const auto& [name, g] : symmetric_corpus()) {
    if (g.vertex_count() > 4) continue;
    const auto p = build_transition(g);
    std::mt19937_64 gen(4);
    std::normal_distribution<double> z;
    OneForm fa(g), fb(g);
    Connection conn(g, 2);
    for (const auto& e : g.edges()) {
      const double av = z(gen), bv = z(gen);
      fa.set(e.u, e.v, av);
      fb.set(e.u, e.v, bv);
      ComplexMatrix gen_ab = ComplexMatrix::Zero(2, 2);
      gen_ab(0, 0) = av;
      gen_ab(1, 1) = bv;
      conn.set(e.u, e.v, gen_ab);
    }
    const auto loops = enumerate_loops(p, k_max);
    const double tail = tail_bound(p, k_max);
    for (double beta : {0.5, 1.5, 3.0}) {
      Complex normalized = 0.0;
      for (const auto& wl : loops)
        normalized += wl.weight * (0.5 * (std::exp(I * beta * fa.integrate(wl.loop.vertices())) +
                                          std::exp(I * beta * fb.integrate(wl.loop.vertices()))) - 1.0);
      const double lambda = 1.0;
      // Normalized traces give the intensity-lambda soup expectation; the
      // block determinant raised to -lambda carries full traces.
      EXPECT_LE(std::abs(std::log(holonomy_soup_expectation(p, conn, beta, lambda)) - lambda * normalized), 2.0 * lambda * tail) << name;
      EXPECT_LE(std::abs(std::log(exact_holonomy_expectation(p, conn, beta, lambda)) - 2.0 * lambda * normalized), 4.0 * lambda * tail) << name;
      // Also a product of scalar charfns, each at intensity lambda.
      const Complex product = exact_charfn(p, fa, beta, lambda) * exact_charfn(p, fb, beta, lambda);
      EXPECT_LE(std::abs(exact_holonomy_expectation(p, conn, beta, lambda) - product), 1e-12) << name;
    }
  }
}

TEST(HolonomyExpectation, NonAbelianEnumerationOracle) {
  const auto g = corpus::k3();
  const auto p = build_transition(g);
  Connection conn(g, 2);
  conn.set(0, 1, pauli(1)).set(1, 2, 0.5 * pauli(2)).set(0, 2, 0.3 * pauli(3));
  const int k_max = 14;
  const double beta = 1.1;
  Complex sum = 0.0;
  for (const auto& wl : enumerate_loops(p, k_max)) sum += wl.weight * (holonomy_trace(wl.loop.vertices(), conn, beta) - 1.0);
  EXPECT_LE(std::abs(std::log(holonomy_soup_expectation(p, conn, beta, 1.0)) - sum), 2.0 * tail_bound(p, k_max));
}

TEST(HolonomyExpectation, ModulusConjugationAndGauge) {
  std::mt19937_64 gen(5);
  for (const auto& [name, g] : symmetric_corpus()) {
    const auto p = build_transition(g);
    const auto green = greens_function(p);
    const auto conn = random_connection(g, 2, gen, 0.7);
    const ComplexMatrix v = random_unitary(2, gen);
    const auto rotated = conn.conjugated(v);
    Connection conjugate(g, 2);
    for (const auto& e : g.edges()) conjugate.set(e.u, e.v, conn.generator(e.u, e.v).conjugate());
    const std::vector<int> loop = {0, 1, 0, 1};
    for (double beta : {0.4, 1.3}) {
      const Complex e = exact_holonomy_expectation(p, conn, beta, 0.8);
      EXPECT_LE(std::abs(e), 1.0 + 1e-12) << name;
      // Reversed loops carry adjoint holonomies and equal mass, so the block
      // matrix is Hermitian and the expectation is real.
      EXPECT_LE(std::abs(e.imag()), 1e-12) << name;
      EXPECT_LE(std::abs(exact_holonomy_expectation(p, conn, -beta, 0.8) - std::conj(exact_holonomy_expectation(p, conjugate, beta, 0.8))), 1e-12) << name;
      EXPECT_LE(std::abs(exact_holonomy_expectation(p, rotated, beta, 0.8) - e), 1e-10) << name;
      EXPECT_LE(std::abs(holonomy_trace(loop, rotated, beta) - holonomy_trace(loop, conn, beta)), 1e-10) << name;
    }
    EXPECT_NEAR(holonomy_limit(p, green, rotated), holonomy_limit(p, green, conn), 1e-10) << name;
    const double limit = holonomy_limit(p, green, conn);
    EXPECT_GT(limit, 0.0);
    EXPECT_LE(limit, 1.0);
  }
}

TEST(HolonomyLimit, FiniteLambdaConvergence) {
  const auto k3 = corpus::k3();
  const auto c4 = corpus::c4();
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = -0.5;
  struct Case {
    std::string name;
    WeightedGraph graph;
    Connection conn;
  };
  std::vector<Case> cases;
  cases.push_back({"K3 su2", k3, Connection(k3, 2)});
  cases.back().conn.set(0, 1, pauli(1)).set(1, 2, 0.5 * pauli(2)).set(0, 2, 0.3 * pauli(3));
  cases.push_back({"C4 su2", c4, Connection(c4, 2)});
  cases.back().conn.set(0, 1, pauli(1)).set(1, 2, 0.5 * pauli(2)).set(2, 3, 0.3 * pauli(3)).set(3, 0, 0.8 * pauli(1));
  cases.push_back({"K3 diagonal", k3, Connection(k3, 2)});
  cases.back().conn.set(0, 1, diag).set(1, 2, 0.7 * diag);
  cases.push_back({"C4 diagonal", c4, Connection(c4, 2)});
  cases.back().conn.set(0, 1, diag).set(2, 3, 0.4 * diag);
  for (const auto& c : cases) {
    const auto p = build_transition(c.graph);
    const double limit = holonomy_limit(p, greens_function(p), c.conn);
    double previous = INFINITY;
    for (double lambda : {1e2, 1e3, 1e4}) {
      const double err = std::abs(exact_holonomy_expectation(p, c.conn, 1.0 / std::sqrt(lambda), lambda) - limit);
      EXPECT_LT(err, previous) << c.name << " lambda=" << lambda;
      previous = err;
    }
    EXPECT_LE(std::abs(exact_holonomy_expectation(p, c.conn, 1e-3, 1e6) - limit), 1e-2 * limit) << c.name;
  }
}

TEST(HolonomyLimit, NonAbelianErrorIsOrderInverseRootLambda) {
  // For generic generators the cubic term of the loop expansion survives
  // (loop and reverse contribute 2i Im Tr(A1 A2 A3) times i^3), so the error
  // behaves like c1 / sqrt(lambda) + c2 / lambda and may change sign at
  // moderate lambda. Only the asymptotic regime is monotone.
  std::mt19937_64 gen(6);
  for (const auto& [name, g] : symmetric_corpus()) {
    const auto p = build_transition(g);
    const auto conn = random_connection(g, 2, gen);
    const double limit = holonomy_limit(p, greens_function(p), conn);
    double previous = INFINITY;
    for (double lambda : {1e4, 1e5, 1e6}) {
      const double err = std::abs(exact_holonomy_expectation(p, conn, 1.0 / std::sqrt(lambda), lambda) - limit);
      EXPECT_LT(err, previous) << name << " lambda=" << lambda;
      EXPECT_LT(err * std::sqrt(lambda), 1.0) << name;
      previous = err;
    }
  }
}

TEST(HolonomyLimit, CommutingChannelsDecouple) {
  // A diagonal connection splits into two scalar problems, so S1 + S2 is the
  // sum of the two scalar variances.
  const auto g = corpus::c4();
  const auto p = build_transition(g);
  const auto green = greens_function(p);
  OneForm fa(g), fb(g);
  fa.set(0, 1, 1.0).set(2, 3, 0.5);
  fb.set(1, 2, -0.7).set(3, 0, 0.2);
  Connection conn(g, 2);
  for (const auto& e : g.edges()) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = fa(e.u, e.v);
    m(1, 1) = fb(e.u, e.v);
    conn.set(e.u, e.v, m);
  }
  const auto q = holonomy_quadratic(p, green, conn);
  EXPECT_NEAR(q.total(), clt_variance(p, green, fa) + clt_variance(p, green, fb), 1e-13);
}

TEST(Holonomy, RequiresSymmetricTransition) {
  const auto g = WeightedGraph::grid(2, 3, 1.0);
  const auto p = build_transition(g);
  ASSERT_FALSE(p.is_symmetric());
  const Connection conn(g, 2);
  EXPECT_THROW(exact_holonomy_expectation(p, conn, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(holonomy_limit(p, greens_function(p), conn), std::invalid_argument);
  EXPECT_THROW(exact_holonomy_expectation(build_transition(corpus::k3()), Connection(corpus::k3(), 1), 1.0, 0.0),
               std::invalid_argument);
}
