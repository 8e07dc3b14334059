#include "loopsoup/harness.hpp"
#include "loopsoup/holonomy.hpp"
#include "loopsoup/spitzer.hpp"
#include "loopsoup/stats.hpp"
#include "loopsoup/winding.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace loopsoup::harness {

namespace {

using io::ConfigError;
using io::Json;

constexpr double kStderrGate = 4.0;
constexpr int kHistogramBins = 40;

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// The graph behind an experiment, either bare or with a planar embedding.
struct Source {
  std::optional<PlanarMap> map;
  std::optional<TransitionMatrix> plain;

  const TransitionMatrix& p() const { return map ? map->transition() : *plain; }
  const WeightedGraph& graph() const { return p().graph(); }
};

Source load_source(const Json& raw) {
  Source s;
  if (raw.contains("map")) s.map.emplace(io::planar_map_from_json(raw["map"], "map"));
  else if (raw.contains("graph")) s.plain.emplace(build_transition(io::graph_from_json(raw["graph"], "graph")));
  else throw ConfigError("config", "missing field \"graph\" or \"map\"");
  return s;
}

// Faces are given by index or as a directed edge [u, v] with the face on its
// left; the default is every finite face.
std::vector<int> load_faces(const Json& raw, const PlanarMap& map) {
  if (!raw.contains("faces")) return map.finite_faces();
  const Json& faces = raw["faces"];
  if (!faces.is_array() || faces.empty()) throw ConfigError("faces", "expected a non-empty array");
  std::vector<int> out;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string p = "faces[" + std::to_string(i) + "]";
    int f;
    if (faces[i].is_array()) {
      if (faces[i].size() != 2) throw ConfigError(p, "expected a face index or [u, v]");
      const int u = io::as_int(faces[i][0], p + "[0]");
      const int v = io::as_int(faces[i][1], p + "[1]");
      try {
        f = map.left_face(u, v);
      } catch (const std::exception& e) {
        throw ConfigError(p, e.what());
      }
    } else {
      f = io::as_int(faces[i], p);
    }
    if (f < 0 || f >= map.face_count() || f == map.infinite_face()) throw ConfigError(p, "not a finite face");
    out.push_back(f);
  }
  return out;
}

OneForm load_form(const Json& raw, const Source& src) {
  if (raw.contains("one_form")) return io::one_form_from_json(raw["one_form"], src.graph(), "one_form");
  if (src.map && raw.contains("faces")) {
    const auto faces = load_faces(raw, *src.map);
    std::vector<double> t(faces.size(), 1.0);
    if (raw.contains("t")) {
      const Json& jt = raw["t"];
      if (!jt.is_array() || jt.size() != faces.size()) throw ConfigError("t", "expected one weight per face");
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = io::as_double(jt[i], "t[" + std::to_string(i) + "]");
    }
    const auto cuts = default_cuts(*src.map, faces);
    return cut_one_form(*src.map, cuts, t);
  }
  throw ConfigError("config", "missing field \"one_form\" (or \"faces\" with a map)");
}

// {"min": a, "max": b, "points": n} or an explicit list.
std::vector<double> load_grid(const Json& raw, const char* key, double lo, double hi, int points) {
  if (raw.contains(key)) {
    const Json& g = raw[key];
    const std::string path = key;
    if (g.is_array()) {
      if (g.empty()) throw ConfigError(path, "expected a non-empty array");
      std::vector<double> out;
      for (std::size_t i = 0; i < g.size(); ++i) out.push_back(io::as_double(g[i], path + "[" + std::to_string(i) + "]"));
      return out;
    }
    if (!g.is_object()) throw ConfigError(path, "expected {min, max, points} or an array");
    lo = io::as_double(io::require(g, "min", path), path + ".min");
    hi = io::as_double(io::require(g, "max", path), path + ".max");
    points = io::as_int(io::require(g, "points", path), path + ".points");
    if (points < 1) throw ConfigError(path + ".points", "must be >= 1");
    if (points > 1 && !(hi > lo)) throw ConfigError(path, "max must exceed min");
  }
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return out;
}

SoupConfig replica_config(const ExperimentConfig& cfg, double lambda, std::size_t lambda_index, std::size_t replica) {
  SoupConfig s;
  s.lambda = lambda;
  s.epsilon = cfg.epsilon;
  s.streams = cfg.streams;
  s.seed = stream_seed(stream_seed(cfg.seed, lambda_index), replica);
  return s;
}

// sum over the soup of the loop integrals of `form`, one value per replica.
std::vector<double> sample_integrals(const ExperimentConfig& cfg, const PowerCache& cache, const OneForm& form,
                                     double lambda, std::size_t lambda_index, long samples) {
  std::vector<double> x(static_cast<std::size_t>(samples));
  parallel_for(x.size(), cfg.workers, [&](std::size_t r) {
    double sum = 0.0;
    for_each_soup_loop(replica_config(cfg, lambda, lambda_index, r), cache,
                       [&](std::span<const int> loop) { sum += form.integrate(loop); });
    x[r] = sum;
  });
  return x;
}

Gate skipped_gate(std::string name, std::string note) {
  Gate g{std::move(name), Verdict::skipped, NAN, NAN, NAN, "property", std::move(note)};
  return g;
}

// Gate on a sequence that must strictly decrease: observed is the largest
// successive difference, judged against 0.
Gate decreasing_gate(std::string name, const std::vector<double>& values, std::string source) {
  double worst = -INFINITY;
  for (std::size_t i = 1; i < values.size(); ++i) worst = std::max(worst, values[i] - values[i - 1]);
  Gate g = below_gate(std::move(name), worst, 0.0, std::move(source));
  if (worst == 0.0) g.verdict = Verdict::fail;
  g.note = "largest successive difference; must be negative";
  return g;
}

void require_kind(const ExperimentConfig& cfg, std::initializer_list<Kind> kinds, const char* who) {
  for (Kind k : kinds)
    if (cfg.kind == k) return;
  throw std::invalid_argument(std::string(who) + ": wrong experiment kind " + kind_name(cfg.kind));
}

Report run_winding_cov(const ExperimentConfig& cfg) {
  Source src = load_source(cfg.raw);
  if (!src.map) throw ConfigError("config", "winding-cov needs a \"map\"");
  const PlanarMap& map = *src.map;
  const auto faces = load_faces(cfg.raw, map);
  const auto cuts = default_cuts(map, faces);
  const WindingTable table(map, cuts);
  const auto g = greens_function(map.transition());
  const RealMatrix kernel = covariance_matrix(map, g, cuts);
  const PowerCache cache(map.transition(), cfg.epsilon);
  const std::size_t nf = faces.size();

  Report r = start_report(cfg);
  Table cov{"covariance", {"face_i", "face_j", "K_exact", "K_mc", "stderr", "lambda"}, {}};
  Table normal{"normality", {"lambda", "face", "ks_distance"}, {}};
  std::vector<double> ks_first, worst_error, worst_se;
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    const auto n = static_cast<std::size_t>(cfg.samples);
    std::vector<std::vector<double>> w(nf, std::vector<double>(n));
    parallel_for(n, cfg.workers, [&](std::size_t rep) {
      std::vector<long> acc(nf, 0);
      for_each_soup_loop(replica_config(cfg, lambda, li, rep), cache,
                         [&](std::span<const int> loop) { table.accumulate(loop, acc); });
      for (std::size_t f = 0; f < nf; ++f) w[f][rep] = static_cast<double>(acc[f]) / std::sqrt(lambda);
    });
    double err = 0.0, err_se = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      for (std::size_t j = i; j < nf; ++j) {
        const auto est = stats::batch_covariance(w[i], w[j], static_cast<std::size_t>(cfg.batches));
        const double exact = kernel(static_cast<Index>(i), static_cast<Index>(j));
        if (std::abs(est.mean - exact) >= err) {
          err = std::abs(est.mean - exact);
          err_se = est.std_error;
        }
        cov.rows.push_back({std::int64_t{faces[i]}, std::int64_t{faces[j]}, exact, est.mean, est.std_error, lambda});
        r.gates.push_back(near_gate("K(" + std::to_string(faces[i]) + "," + std::to_string(faces[j]) + ") " +
                                        fmt("lambda=%g", lambda),
                                    est.mean, exact, kStderrGate * est.std_error + 1e-12, "oracle"));
      }
    }
    worst_error.push_back(err);
    worst_se.push_back(err_se);
    for (std::size_t f = 0; f < nf; ++f) {
      const double sd = std::sqrt(kernel(static_cast<Index>(f), static_cast<Index>(f)));
      const double ks = stats::ks_normal_distance(w[f], 0.0, sd);
      normal.rows.push_back({lambda, std::int64_t{faces[f]}, ks});
      if (f == 0) ks_first.push_back(ks);
    }
    r.histograms.push_back(make_histogram("W(" + std::to_string(faces[0]) + ")/sqrt(lambda), " + fmt("lambda=%g", lambda),
                                          w[0], kHistogramBins, std::sqrt(kernel(0, 0))));
  }
  if (worst_error.size() >= 2) {
    // The covariance is unbiased at every lambda, so this only checks that
    // the error does not grow beyond sampling noise.
    double excess = -INFINITY;
    for (std::size_t i = 1; i < worst_error.size(); ++i)
      excess = std::max(excess, worst_error[i] - worst_error[i - 1] - 2.0 * worst_se[i]);
    Gate gate = below_gate("covariance error non-increasing in lambda up to 2 stderr", excess, 0.0, "property");
    gate.note = "largest growth of the worst-entry error beyond 2 stderr";
    r.gates.push_back(std::move(gate));
  }
  if (ks_first.size() >= 2)
    r.gates.push_back(decreasing_gate("KS distance of face " + std::to_string(faces[0]) + " decreasing in lambda",
                                      ks_first, "property"));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = i; j < nf; ++j) {
      const double direct = two_point_direct(map, g, cuts[i], cuts[j]);
      const double k = kernel(static_cast<Index>(i), static_cast<Index>(j));
      Gate gate = near_gate("direct two-point formula (" + std::to_string(faces[i]) + "," +
                                std::to_string(faces[j]) + ")",
                            direct, k, 1e-10, "identity");
      r.gates.push_back(std::move(gate));
    }
  r.tables = {std::move(cov), std::move(normal)};
  return r;
}

}  // namespace

Report run_charfn_experiment(const ExperimentConfig& cfg) {
  require_kind(cfg, {Kind::charfn}, "run_charfn_experiment");
  const Source src = load_source(cfg.raw);
  const OneForm form = load_form(cfg.raw, src);
  const auto betas = load_grid(cfg.raw, "beta", -std::numbers::pi, std::numbers::pi, 21);
  const PowerCache cache(src.p(), cfg.epsilon);

  Report r = start_report(cfg);
  Table t{"charfn", {"lambda", "beta", "re_exact", "im_exact", "re_mc", "im_mc", "stderr", "n"}, {}};
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    const auto x = sample_integrals(cfg, cache, form, lambda, li, cfg.samples);
    std::vector<double> c(x.size()), s(x.size());
    for (double beta : betas) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        c[i] = std::cos(beta * x[i]);
        s[i] = std::sin(beta * x[i]);
      }
      const auto re = stats::batch_means(c, static_cast<std::size_t>(cfg.batches));
      const auto im = stats::batch_means(s, static_cast<std::size_t>(cfg.batches));
      const Complex exact = exact_charfn(src.p(), form, beta, lambda);
      const double se = std::max(re.std_error, im.std_error);
      t.rows.push_back({lambda, beta, exact.real(), exact.imag(), re.mean, im.mean, se,
                        static_cast<std::int64_t>(x.size())});
      Gate g = near_gate(fmt("charfn lambda=%g beta=%.6f", lambda, beta),
                         std::max(std::abs(re.mean - exact.real()), std::abs(im.mean - exact.imag())), 0.0,
                         kStderrGate * se + 1e-12, "oracle");
      g.note = "largest componentwise deviation from the determinant formula";
      r.gates.push_back(std::move(g));
    }
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report run_clt_experiment(const ExperimentConfig& cfg) {
  require_kind(cfg, {Kind::clt, Kind::winding_cov}, "run_clt_experiment");
  if (cfg.kind == Kind::winding_cov) return run_winding_cov(cfg);

  const Source src = load_source(cfg.raw);
  const OneForm form = load_form(cfg.raw, src);
  const auto g = greens_function(src.p());
  const double var_exact = clt_variance(src.p(), g, form);
  const PowerCache cache(src.p(), cfg.epsilon);

  Report r = start_report(cfg);
  Table t{"clt", {"lambda", "var_exact", "var_mc", "stderr", "ks_distance", "n"}, {}};
  std::vector<double> ks;
  bool degenerate = false;
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    auto x = sample_integrals(cfg, cache, form, lambda, li, cfg.samples);
    for (double& v : x) v /= std::sqrt(lambda);
    const auto n = static_cast<std::int64_t>(x.size());
    const bool all_zero = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
    const std::string name = fmt("variance lambda=%g", lambda);
    if (all_zero || !(var_exact > 0.0)) {
      degenerate = true;
      t.rows.push_back({lambda, var_exact, 0.0, 0.0, NAN, n});
      r.gates.push_back(skipped_gate(name, "degenerate observable: every sample is zero"));
      continue;
    }
    const auto est = stats::batch_covariance(x, x, static_cast<std::size_t>(cfg.batches));
    const double d = stats::ks_normal_distance(x, 0.0, std::sqrt(var_exact));
    ks.push_back(d);
    t.rows.push_back({lambda, var_exact, est.mean, est.std_error, d, n});
    r.gates.push_back(near_gate(name, est.mean, var_exact, kStderrGate * est.std_error + 1e-12, "oracle"));
    r.histograms.push_back(make_histogram(fmt("X/sqrt(lambda), lambda=%g", lambda), x, kHistogramBins,
                                          std::sqrt(var_exact)));
  }
  if (degenerate)
    r.gates.push_back(skipped_gate("KS distance decreasing in lambda", "degenerate observable"));
  else if (ks.size() >= 2)
    r.gates.push_back(decreasing_gate("KS distance decreasing in lambda", ks, "property"));
  r.tables.push_back(std::move(t));
  return r;
}

Report run_holonomy_experiment(const ExperimentConfig& cfg) {
  require_kind(cfg, {Kind::holonomy}, "run_holonomy_experiment");
  const Source src = load_source(cfg.raw);
  const TransitionMatrix& p = src.p();
  if (!p.is_symmetric(1e-12)) throw ConfigError("graph", "holonomy needs a symmetric transition matrix (kappa_x + d_x constant)");
  const Connection conn = io::connection_from_json(io::require(cfg.raw, "connection", "config"), src.graph());
  const auto g = greens_function(p);
  const double limit = holonomy_limit(p, g, conn);

  Report r = start_report(cfg);
  Table t{"holonomy", {"lambda", "beta", "re_exact", "im_exact", "limit", "abs_error"}, {}};
  std::vector<double> errors;
  for (double lambda : cfg.lambdas) {
    const double beta = 1.0 / std::sqrt(lambda);
    const Complex z = exact_holonomy_expectation(p, conn, beta, lambda);
    const double err = std::abs(z - Complex(limit, 0.0));
    errors.push_back(err);
    t.rows.push_back({lambda, beta, z.real(), z.imag(), limit, err});
    if (conn.fiber_dim() == 1) {
      OneForm form(src.graph());
      for (const auto& e : src.graph().edges()) form.set(e.u, e.v, conn.generator(e.u, e.v)(0, 0).real());
      const Complex scalar = exact_charfn(p, form, beta, lambda);
      r.gates.push_back(near_gate(fmt("rank-one reduction lambda=%g", lambda), std::abs(z - scalar), 0.0, 1e-12,
                                  "identity"));
    }
  }
  if (errors.size() >= 2) {
    Gate gate = decreasing_gate("distance to the limit decreasing in lambda", errors, "property");
    if (std::all_of(errors.begin(), errors.end(), [](double e) { return e < 1e-14; })) {
      gate.verdict = Verdict::skipped;
      gate.note = "expectation equals its limit to round-off at every lambda";
    }
    r.gates.push_back(std::move(gate));
  }
  r.tables.push_back(std::move(t));

  if (cfg.raw.contains("enumeration")) {
    const Json& e = cfg.raw["enumeration"];
    const int k_max = io::as_int(io::require(e, "k_max", "enumeration"), "enumeration.k_max");
    if (k_max < 2) throw ConfigError("enumeration.k_max", "must be >= 2");
    const double beta = e.contains("beta") ? io::as_double(e["beta"], "enumeration.beta") : 1.0;
    const double lambda = e.contains("lambda") ? io::as_double(e["lambda"], "enumeration.lambda") : 1.0;
    const double d = conn.fiber_dim();
    Complex sum = 0.0;
    for (const auto& wl : enumerate_loops(p, k_max))
      sum += wl.weight * (holonomy_trace(wl.loop.vertices(), conn, beta) - 1.0);
    sum *= lambda;
    const Complex exact = std::log(holonomy_soup_expectation(p, conn, beta, lambda));
    // |Tr U / d - 1| <= 2 on every loop.
    const double tol = 2.0 * lambda * tail_bound(p, k_max);
    Table et{"enumeration", {"k_max", "beta", "lambda", "re_log_exact", "im_log_exact", "re_log_enum", "im_log_enum", "tail"}, {}};
    et.rows.push_back({std::int64_t{k_max}, beta, lambda, exact.real(), exact.imag(), sum.real(), sum.imag(), tol});
    r.tables.push_back(std::move(et));
    Gate gate = near_gate("loop enumeration vs block determinant", std::abs(sum - exact), 0.0, tol, "oracle");
    gate.note = fmt("fiber dimension %g", d);
    r.gates.push_back(std::move(gate));
  }

  if (cfg.raw.contains("monte_carlo")) {
    const Json& m = cfg.raw["monte_carlo"];
    const double lambda = io::as_double(io::require(m, "lambda", "monte_carlo"), "monte_carlo.lambda");
    const double beta = io::as_double(io::require(m, "beta", "monte_carlo"), "monte_carlo.beta");
    const int samples = io::as_int(io::require(m, "samples", "monte_carlo"), "monte_carlo.samples");
    if (!(lambda > 0.0)) throw ConfigError("monte_carlo.lambda", "must be > 0");
    if (samples < 2) throw ConfigError("monte_carlo.samples", "must be >= 2 to estimate a standard error");
    const PowerCache cache(p, cfg.epsilon);
    std::vector<double> re(static_cast<std::size_t>(samples)), im(re.size());
    // Replicas use lambda index cfg.lambdas.size(), disjoint from any sampled sweep.
    const std::size_t stream = cfg.lambdas.size();
    parallel_for(re.size(), cfg.workers, [&](std::size_t rep) {
      Complex prod = 1.0;
      for_each_soup_loop(replica_config(cfg, lambda, stream, rep), cache,
                         [&](std::span<const int> loop) { prod *= holonomy_trace(loop, conn, beta); });
      re[rep] = prod.real();
      im[rep] = prod.imag();
    });
    const auto er = stats::batch_means(re, static_cast<std::size_t>(cfg.batches));
    const auto ei = stats::batch_means(im, static_cast<std::size_t>(cfg.batches));
    const Complex exact = holonomy_soup_expectation(p, conn, beta, lambda);
    const double se = std::max(er.std_error, ei.std_error);
    Table mt{"monte_carlo", {"lambda", "beta", "re_exact", "im_exact", "re_mc", "im_mc", "stderr", "n"}, {}};
    mt.rows.push_back({lambda, beta, exact.real(), exact.imag(), er.mean, ei.mean, se, std::int64_t{samples}});
    r.tables.push_back(std::move(mt));
    Gate gate = near_gate("sampled holonomy product", std::max(std::abs(er.mean - exact.real()), std::abs(ei.mean - exact.imag())),
                          0.0, kStderrGate * se + 1e-12, "oracle");
    gate.note = "largest componentwise deviation";
    r.gates.push_back(std::move(gate));
  }
  return r;
}

Report run_spitzer_experiment(const ExperimentConfig& cfg) {
  require_kind(cfg, {Kind::spitzer}, "run_spitzer_experiment");
  const Json& raw = cfg.raw;
  const double d_z = raw.contains("d_z") ? io::as_double(raw["d_z"], "d_z") : 1.0;
  const auto s_grid = load_grid(raw, "s", -5.0, 5.0, 101);
  std::vector<double> deltas;
  if (raw.contains("delta")) {
    deltas = load_grid(raw, "delta", 0.0, 0.0, 1);
  } else {
    for (int e = 2; e <= 12; ++e) deltas.push_back(std::pow(10.0, -e));
  }
  Report r = start_report(cfg);
  Table t{"spitzer", {"lambda", "delta", "s", "scaled_charfn", "limit_charfn", "abs_error"}, {}};
  Table sup{"sup_error", {"lambda", "delta", "sup_error"}, {}};
  for (double lambda : cfg.lambdas) {
    spitzer::ConvergenceReport rep;
    try {
      rep = spitzer::convergence_report(lambda, d_z, s_grid, deltas);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("delta", e.what());
    }
    for (const auto& row : rep.rows) t.rows.push_back({lambda, row.delta, row.s, row.scaled, row.limit, row.abs_error});
    for (std::size_t i = 0; i < rep.deltas.size(); ++i) sup.rows.push_back({lambda, rep.deltas[i], rep.sup_error[i]});
    if (rep.deltas.size() >= 2)
      r.gates.push_back(decreasing_gate(fmt("sup error decreasing in delta, lambda=%g", lambda), rep.sup_error, "property"));
    // Ratio between delta = 1e-4 and delta = 1e-12, when both are on the grid.
    auto find = [&](double d) -> std::optional<double> {
      for (std::size_t i = 0; i < rep.deltas.size(); ++i)
        if (std::abs(rep.deltas[i] / d - 1.0) < 1e-9) return rep.sup_error[i];
      return std::nullopt;
    };
    const auto coarse = find(1e-4), fine = find(1e-12);
    if (coarse && fine) {
      Gate gate{fmt("error ratio delta=1e-4 over 1e-12, lambda=%g", lambda), Verdict::fail, *coarse / *fine, 2.0, 0.0,
                "property", "must be at least the target"};
      if (*coarse >= 2.0 * *fine) gate.verdict = Verdict::pass;
      r.gates.push_back(std::move(gate));
    }
  }
  r.tables = {std::move(t), std::move(sup)};
  return r;
}

}  // namespace loopsoup::harness
