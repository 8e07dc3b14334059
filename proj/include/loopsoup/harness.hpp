#ifndef LOOPSOUP_HARNESS_HPP
#define LOOPSOUP_HARNESS_HPP

#include "loopsoup/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace loopsoup::harness {

enum class Kind { charfn, clt, winding_cov, holonomy, spitzer, oracle };

std::string kind_name(Kind kind);
/// Accepts the CLI spellings "charfn", "clt", "winding-cov", "holonomy",
/// "spitzer", "oracle".
Kind parse_kind(const std::string& name);

/// Fields shared by every experiment. Problem-specific fields (graph, map,
/// one-form, connection, grids) stay in `raw` and are parsed by the runner
/// with field paths in every error.
struct ExperimentConfig {
  Kind kind = Kind::charfn;
  io::Json raw;
  std::uint64_t seed = 0;
  std::vector<double> lambdas;
  long samples = 0;
  int batches = 100;
  double epsilon = 1e-12;
  int streams = 1;
  int workers = 1;
};

/// Throws io::ConfigError. A "kind" field, when present, must agree with
/// `kind`; a "seed" field is used unless `seed_override` is set.
ExperimentConfig parse_config(const io::Json& j, Kind kind, std::optional<std::uint64_t> seed_override = std::nullopt);

/// 64-bit FNV-1a of the canonical (sorted-key, compact) JSON dump.
std::uint64_t config_hash(const io::Json& j);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

enum class Verdict { pass, fail, skipped };

/// A pass/fail judgement. `source` says where the target comes from:
/// "oracle" (independent computation), "identity" (exact algebraic fact),
/// "reference" (published closed form) or "property" (qualitative trend).
struct Gate {
  std::string name;
  Verdict verdict = Verdict::pass;
  double observed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string source;
  std::string note;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Judges |observed - target| <= tolerance.
Gate near_gate(std::string name, double observed, double target, double tolerance, std::string source);
/// Judges observed <= bound (stored as target, tolerance 0).
Gate below_gate(std::string name, double observed, double bound, std::string source);

struct Histogram {
  std::string title;
  double lo = 0.0;
  double width = 1.0;
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;
  /// Standard deviation of a centered Gaussian drawn over the bars; 0 for none.
  double gaussian_sd = 0.0;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

Histogram make_histogram(std::string title, const std::vector<double>& values, int bins, double gaussian_sd);

struct Report {
  std::string kind;
  std::string version;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::vector<Table> tables;
  std::vector<Gate> gates;
  std::vector<Histogram> histograms;

  bool passed() const;
  friend bool operator==(const Report&, const Report&) = default;
};

io::Json report_to_json(const Report& r);
Report report_from_json(const io::Json& j);

enum class Format { csv, json, svg };

/// Writes <dir>/<kind>.csv (plus <kind>_<table>.csv for further tables),
/// <dir>/<kind>.json and, when the report holds histograms, <dir>/<kind>.svg.
/// Returns the written paths. I/O failures throw std::runtime_error naming
/// the path.
std::vector<std::string> emit_report(const Report& r, const std::string& dir, const std::vector<Format>& formats);

std::string to_csv(const Table& t);
std::string to_svg(const Report& r);

/// Report with the metadata of `cfg` filled in and nothing else.
Report start_report(const ExperimentConfig& cfg);

Report run_charfn_experiment(const ExperimentConfig& cfg);
/// Handles both "clt" (one-form integrals) and "winding-cov" (face windings).
Report run_clt_experiment(const ExperimentConfig& cfg);
Report run_holonomy_experiment(const ExperimentConfig& cfg);
Report run_spitzer_experiment(const ExperimentConfig& cfg);
Report run_oracle_suite(const ExperimentConfig& cfg);

Report run_experiment(const ExperimentConfig& cfg);

/// Calls f(i) for i in [0, n) on `workers` threads. Results must be written
/// by index so that the outcome is independent of scheduling. The first
/// exception thrown by any task is rethrown.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& f) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  constexpr std::size_t chunk = 32;
  auto work = [&] {
    for (;;) {
      const std::size_t lo = next.fetch_add(chunk);
      if (lo >= n) return;
      const std::size_t hi = std::min(n, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto count = static_cast<std::size_t>(workers) < n ? static_cast<std::size_t>(workers) : n;
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace loopsoup::harness

#endif  // LOOPSOUP_HARNESS_HPP
