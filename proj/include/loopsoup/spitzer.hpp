#ifndef LOOPSOUP_SPITZER_HPP
#define LOOPSOUP_SPITZER_HPP

#include <span>
#include <vector>

namespace loopsoup::spitzer {

/// Brownian loops with diameter in [delta, d_z) around a point at distance
/// d_z from the boundary, at intensity lambda.
struct AnnulusWindingParams {
  double delta = 0.5;
  double d_z = 1.0;
  double lambda = 1.0;

  /// Throws std::invalid_argument unless 0 < delta < d_z and lambda > 0.
  void validate() const;
};

/// Cauchy law with location 0 and scale lambda / (2 pi).
struct CauchyLaw {
  double scale;

  explicit CauchyLaw(double lambda);
  double charfn(double s) const;
};

/// beta - 2 pi floor(beta / 2 pi), in [0, 2 pi).
double reduce_angle(double beta);

/// E[exp(i beta W^{delta, d_z})] = (d_z / delta)^{-lambda b (2 pi - b) / (4 pi^2)},
/// b = beta mod 2 pi.
double annulus_charfn(const AnnulusWindingParams& params, double beta);

/// annulus_charfn at beta = s / log(delta). Requires delta < 1.
double scaled_charfn(const AnnulusWindingParams& params, double s);

/// exp(-lambda |s| / (2 pi)).
double cauchy_limit_charfn(double lambda, double s);

struct ConvergenceRow {
  double delta;
  double s;
  double scaled;
  double limit;
  double abs_error;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// sup over the s-grid of |scaled - limit|, one entry per delta.
  std::vector<double> sup_error;
  std::vector<double> deltas;

  bool sup_error_decreasing() const;
};

/// Only the annulus factor is evaluated; the independent factor from loops
/// larger than d_z has a fixed characteristic function evaluated at
/// s / log(delta) -> 0 and so tends to one.
ConvergenceReport convergence_report(double lambda, double d_z, std::span<const double> s_grid,
                                     std::span<const double> delta_grid);

}  // namespace loopsoup::spitzer

#endif  // LOOPSOUP_SPITZER_HPP
