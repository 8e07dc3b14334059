#ifndef LOOPSOUP_STATS_HPP
#define LOOPSOUP_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace loopsoup::stats {

/// Mean and batch-means standard error of a sequence, batches formed from
/// consecutive blocks in sample order.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

Estimate batch_means(std::span<const double> samples, std::size_t batches = 100);

/// Batch-means estimate of the covariance of two aligned sequences.
Estimate batch_covariance(std::span<const double> x, std::span<const double> y, std::size_t batches = 100);

double normal_cdf(double z);

/// Kolmogorov-Smirnov distance between the empirical law of `samples`
/// standardized by (mean, sd) and the standard normal.
double ks_normal_distance(std::span<const double> samples, double mean, double sd);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// Asymptotic critical value of the two-sample statistic at level alpha.
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

/// Upper quantile of chi-square(df) at probability p via the Wilson-Hilferty
/// cube-root approximation.
double chi_square_quantile(double df, double p);

/// Standard normal quantile (Acklam's rational approximation refined by one
/// Newton step).
double normal_quantile(double p);

}  // namespace loopsoup::stats

#endif  // LOOPSOUP_STATS_HPP
