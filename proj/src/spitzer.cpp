#include "loopsoup/spitzer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loopsoup::spitzer {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

void AnnulusWindingParams::validate() const {
  if (!(delta > 0.0 && delta < d_z)) throw std::invalid_argument("annulus: need 0 < delta < d_z");
  if (!(lambda > 0.0)) throw std::invalid_argument("annulus: lambda must be > 0");
}

CauchyLaw::CauchyLaw(double lambda) : scale(lambda / two_pi) {
  if (!(lambda > 0.0)) throw std::invalid_argument("cauchy: lambda must be > 0");
}

double CauchyLaw::charfn(double s) const { return std::exp(-scale * std::abs(s)); }

double reduce_angle(double beta) {
  double b = beta - two_pi * std::floor(beta / two_pi);
  if (b >= two_pi) b -= two_pi;  // floor round-off just below a multiple
  return b;
}

double annulus_charfn(const AnnulusWindingParams& params, double beta) {
  params.validate();
  const double b = reduce_angle(beta);
  const double exponent = params.lambda * b * (two_pi - b) / (two_pi * two_pi);
  return std::exp(-exponent * std::log(params.d_z / params.delta));
}

double scaled_charfn(const AnnulusWindingParams& params, double s) {
  if (!(params.delta < 1.0)) throw std::invalid_argument("scaled_charfn: delta must be < 1");
  return annulus_charfn(params, s / std::log(params.delta));
}

double cauchy_limit_charfn(double lambda, double s) { return CauchyLaw(lambda).charfn(s); }

bool ConvergenceReport::sup_error_decreasing() const {
  for (std::size_t i = 1; i < sup_error.size(); ++i)
    if (!(sup_error[i] < sup_error[i - 1])) return false;
  return true;
}

ConvergenceReport convergence_report(double lambda, double d_z, std::span<const double> s_grid,
                                     std::span<const double> delta_grid) {
  ConvergenceReport report;
  for (double delta : delta_grid) {
    const AnnulusWindingParams params{delta, d_z, lambda};
    double sup = 0.0;
    for (double s : s_grid) {
      const double scaled = scaled_charfn(params, s);
      const double limit = cauchy_limit_charfn(lambda, s);
      const double err = std::abs(scaled - limit);
      report.rows.push_back({delta, s, scaled, limit, err});
      sup = std::max(sup, err);
    }
    report.deltas.push_back(delta);
    report.sup_error.push_back(sup);
  }
  return report;
}

}  // namespace loopsoup::spitzer
