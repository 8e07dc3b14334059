#include "loopsoup/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loopsoup::stats {

namespace {

std::vector<double> block_means(std::span<const double> samples, std::size_t batches) {
  const std::size_t n = samples.size();
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t lo = b * n / batches;
    const std::size_t hi = (b + 1) * n / batches;
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += samples[i];
    means[b] = sum / static_cast<double>(hi - lo);
  }
  return means;
}

}  // namespace

Estimate batch_means(std::span<const double> samples, std::size_t batches) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("batch_means: no samples");
  batches = std::min(batches, n);
  if (batches < 2) throw std::invalid_argument("batch_means: need at least two batches");
  Estimate est;
  est.n = n;
  double sum = 0.0;
  for (double x : samples) sum += x;
  est.mean = sum / static_cast<double>(n);
  const auto means = block_means(samples, batches);
  double bm = 0.0;
  for (double m : means) bm += m;
  bm /= static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) ss += (m - bm) * (m - bm);
  est.std_error = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  return est;
}

Estimate batch_covariance(std::span<const double> x, std::span<const double> y, std::size_t batches) {
  if (x.size() != y.size()) throw std::invalid_argument("batch_covariance: length mismatch");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  std::vector<double> products(n);
  for (std::size_t i = 0; i < n; ++i) products[i] = (x[i] - mx) * (y[i] - my);
  Estimate est = batch_means(products, batches);
  // Unbiased normalization for the plug-in means.
  if (n > 1) est.mean *= static_cast<double>(n) / static_cast<double>(n - 1);
  return est;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double ks_normal_distance(std::span<const double> samples, double mean, double sd) {
  if (samples.empty() || !(sd > 0.0)) throw std::invalid_argument("ks_normal_distance: need samples and sd > 0");
  std::vector<double> z(samples.begin(), samples.end());
  for (double& v : z) v = (v - mean) / sd;
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf(z[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  double x;
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - 0.02425) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double chi_square_quantile(double df, double p) {
  if (!(df > 0.0)) throw std::invalid_argument("chi_square_quantile: df must be > 0");
  const double z = normal_quantile(p);
  const double h = 2.0 / (9.0 * df);
  const double cube = 1.0 - h + z * std::sqrt(h);
  return df * cube * cube * cube;
}

}  // namespace loopsoup::stats
