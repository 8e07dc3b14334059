#include "loopsoup/spitzer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace loopsoup::spitzer;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<double> s_grid() {
  std::vector<double> s;
  for (int i = 0; i <= 40; ++i) s.push_back(-5.0 + 0.25 * i);
  return s;
}
}  // namespace

TEST(Spitzer, AnnulusExamples) {
  const AnnulusWindingParams params{0.01, 1.0, 1.0};
  EXPECT_EQ(annulus_charfn(params, 0.0), 1.0);
  EXPECT_NEAR(annulus_charfn(params, pi), std::pow(1.0 / 0.01, -0.25), 1e-15);
  EXPECT_NEAR(annulus_charfn(params, 2.0 * pi), 1.0, 1e-15);
  EXPECT_THROW(annulus_charfn({1.0, 0.5, 1.0}, 1.0), std::invalid_argument);
  EXPECT_THROW(annulus_charfn({0.1, 1.0, 0.0}, 1.0), std::invalid_argument);
}

TEST(Spitzer, PeriodicAndReflectionSymmetric) {
  const AnnulusWindingParams params{1e-3, 2.0, 1.7};
  for (double b = 0.05; b < 2.0 * pi; b += 0.37) {
    EXPECT_NEAR(annulus_charfn(params, b), annulus_charfn(params, b + 2.0 * pi), 1e-14);
    EXPECT_NEAR(annulus_charfn(params, b), annulus_charfn(params, b - 6.0 * pi), 1e-14);
    EXPECT_NEAR(annulus_charfn(params, b), annulus_charfn(params, 2.0 * pi - b), 1e-14);
    const double v = annulus_charfn(params, b);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_EQ(reduce_angle(-0.5), 2.0 * pi - 0.5);
  EXPECT_LT(reduce_angle(std::nextafter(2.0 * pi, 0.0)), 2.0 * pi);
}

TEST(Spitzer, ScaledAndLimit) {
  EXPECT_EQ(scaled_charfn({1e-6, 1.0, 2.0}, 0.0), 1.0);
  EXPECT_THROW(scaled_charfn({1.5, 3.0, 1.0}, 1.0), std::invalid_argument);
  EXPECT_NEAR(cauchy_limit_charfn(2.0 * pi, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_EQ(cauchy_limit_charfn(3.0, 0.0), 1.0);
  EXPECT_NEAR(cauchy_limit_charfn(6.0, 0.8), std::pow(cauchy_limit_charfn(3.0, 0.8), 2), 1e-15);
  EXPECT_NEAR(CauchyLaw(2.0 * pi).scale, 1.0, 1e-15);
  EXPECT_THROW(CauchyLaw(0.0), std::invalid_argument);

  double previous = INFINITY;
  for (double delta : {1e-2, 1e-4, 1e-8, 1e-12, 1e-100}) {
    const double err = std::abs(scaled_charfn({delta, 1.0, 2.0 * pi}, 1.0) - std::exp(-1.0));
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(Spitzer, SymmetricInS) {
  // b(2 pi - b) is invariant under b -> 2 pi - b, so the reduced exponent is
  // symmetric in s up to round-off at every delta, not only in the limit.
  for (double delta : {1e-2, 1e-4, 1e-8, 1e-16}) {
    const AnnulusWindingParams params{delta, 1.0, 2.0 * pi};
    for (double s : s_grid()) EXPECT_NEAR(scaled_charfn(params, s), scaled_charfn(params, -s), 1e-13);
  }
}

TEST(Spitzer, ConvergenceReport) {
  const auto s = s_grid();
  std::vector<double> deltas;
  for (int e = 2; e <= 12; ++e) deltas.push_back(std::pow(10.0, -e));
  const auto report = convergence_report(2.0 * pi, 1.0, s, deltas);
  EXPECT_EQ(report.rows.size(), s.size() * deltas.size());
  EXPECT_TRUE(report.sup_error_decreasing());
  EXPECT_GE(report.sup_error[2] / report.sup_error[10], 2.0);  // 1e-4 vs 1e-12
  for (const auto& row : report.rows) {
    EXPECT_GT(row.scaled, 0.0);
    EXPECT_LE(row.scaled, 1.0);
  }
}

TEST(Spitzer, ErrorGrowsWithRange) {
  const std::vector<double> deltas = {1e-6};
  const std::vector<double> narrow = {-1.0, -0.5, 0.5, 1.0};
  const std::vector<double> wide = {-5.0, -2.5, 2.5, 5.0};
  EXPECT_LT(convergence_report(2.0 * pi, 1.0, narrow, deltas).sup_error[0],
            convergence_report(2.0 * pi, 1.0, wide, deltas).sup_error[0]);
}

TEST(Spitzer, OuterScaleWashesOut) {
  const auto s = s_grid();
  const std::vector<double> deltas = {1e-4, 1e-40, 1e-200};
  const auto a = convergence_report(2.0, 1.0, s, deltas);
  const auto b = convergence_report(2.0, 0.1, s, deltas);
  double previous = INFINITY;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    double gap = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) gap = std::max(gap, std::abs(a.rows[i * s.size() + j].scaled - b.rows[i * s.size() + j].scaled));
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LT(previous, 1e-2);
}
