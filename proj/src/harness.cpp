#include "loopsoup/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace loopsoup::harness {

namespace {

constexpr const char* kVersion = "loopsoup 0.1.0";

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// JSON has no infinities; they are stored as strings and restored on read.
io::Json number_to_json(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double number_from_json(const io::Json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return NAN;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: return "skipped";
  }
  return "fail";
}

Verdict parse_verdict(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "skipped") return Verdict::skipped;
  return Verdict::fail;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::charfn: return "charfn";
    case Kind::clt: return "clt";
    case Kind::winding_cov: return "winding-cov";
    case Kind::holonomy: return "holonomy";
    case Kind::spitzer: return "spitzer";
    case Kind::oracle: return "oracle";
  }
  return "unknown";
}

Kind parse_kind(const std::string& name) {
  for (Kind k : {Kind::charfn, Kind::clt, Kind::winding_cov, Kind::holonomy, Kind::spitzer, Kind::oracle})
    if (kind_name(k) == name) return k;
  throw io::ConfigError("kind", "unknown experiment \"" + name + "\"");
}

ExperimentConfig parse_config(const io::Json& j, Kind kind, std::optional<std::uint64_t> seed_override) {
  if (!j.is_object()) throw io::ConfigError("config", "expected a JSON object");
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.raw = j;
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw io::ConfigError("kind", "expected a string");
    if (j["kind"].get<std::string>() != kind_name(kind))
      throw io::ConfigError("kind", "config is for \"" + j["kind"].get<std::string>() + "\", not \"" + kind_name(kind) + "\"");
  }
  if (seed_override) {
    cfg.seed = *seed_override;
  } else if (j.contains("seed")) {
    const auto& seed = j["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
      throw io::ConfigError("seed", "expected an unsigned integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  const bool sampled = kind == Kind::charfn || kind == Kind::clt || kind == Kind::winding_cov;
  if (j.contains("lambda")) {
    const auto& l = j["lambda"];
    if (l.is_number()) {
      cfg.lambdas = {io::as_double(l, "lambda")};
    } else if (l.is_array()) {
      for (std::size_t i = 0; i < l.size(); ++i) cfg.lambdas.push_back(io::as_double(l[i], "lambda[" + std::to_string(i) + "]"));
    } else {
      throw io::ConfigError("lambda", "expected a number or an array of numbers");
    }
    if (cfg.lambdas.empty()) throw io::ConfigError("lambda", "at least one value is required");
    for (std::size_t i = 0; i < cfg.lambdas.size(); ++i)
      if (!(cfg.lambdas[i] > 0.0) || !std::isfinite(cfg.lambdas[i]))
        throw io::ConfigError("lambda[" + std::to_string(i) + "]", "must be a finite value > 0");
  } else if (kind != Kind::oracle) {
    throw io::ConfigError("config", "missing field \"lambda\"");
  }

  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer()) throw io::ConfigError("samples", "expected an integer");
    cfg.samples = j["samples"].get<long>();
  } else if (sampled) {
    throw io::ConfigError("config", "missing field \"samples\"");
  }
  if (sampled && cfg.samples < 2) throw io::ConfigError("samples", "must be >= 2 to estimate a standard error");
  if (cfg.samples < 0) throw io::ConfigError("samples", "must be >= 0");

  if (j.contains("batches")) cfg.batches = io::as_int(j["batches"], "batches");
  if (cfg.batches < 2) throw io::ConfigError("batches", "must be >= 2");
  if (j.contains("epsilon")) cfg.epsilon = io::as_double(j["epsilon"], "epsilon");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw io::ConfigError("epsilon", "must lie in (0, 1)");
  if (j.contains("streams")) cfg.streams = io::as_int(j["streams"], "streams");
  if (cfg.streams < 1) throw io::ConfigError("streams", "must be >= 1");
  return cfg;
}

std::uint64_t config_hash(const io::Json& j) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Gate near_gate(std::string name, double observed, double target, double tolerance, std::string source) {
  Gate g{std::move(name), Verdict::fail, observed, target, tolerance, std::move(source), ""};
  if (std::abs(observed - target) <= tolerance) g.verdict = Verdict::pass;
  return g;
}

Gate below_gate(std::string name, double observed, double bound, std::string source) {
  Gate g{std::move(name), Verdict::fail, observed, bound, 0.0, std::move(source), ""};
  if (observed <= bound) g.verdict = Verdict::pass;
  return g;
}

Histogram make_histogram(std::string title, const std::vector<double>& values, int bins, double gaussian_sd) {
  Histogram h;
  h.title = std::move(title);
  h.n = static_cast<std::int64_t>(values.size());
  h.gaussian_sd = gaussian_sd;
  if (values.empty() || bins < 1) return h;
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  h.lo = lo;
  h.width = (hi - lo) / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / h.width);
    if (b >= h.counts.size()) b = h.counts.size() - 1;
    ++h.counts[b];
  }
  return h;
}

bool Report::passed() const {
  for (const auto& g : gates)
    if (g.verdict == Verdict::fail) return false;
  return true;
}

io::Json report_to_json(const Report& r) {
  io::Json tables = io::Json::array();
  for (const auto& t : r.tables) {
    io::Json rows = io::Json::array();
    for (const auto& row : t.rows) {
      io::Json cells = io::Json::array();
      for (const auto& c : row) {
        if (const auto* i = std::get_if<std::int64_t>(&c)) cells.push_back(*i);
        else if (const auto* d = std::get_if<double>(&c)) cells.push_back(io::Json{{"f", number_to_json(*d)}});
        else cells.push_back(std::get<std::string>(c));
      }
      rows.push_back(cells);
    }
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  io::Json gates = io::Json::array();
  for (const auto& g : r.gates)
    gates.push_back({{"name", g.name},
                     {"verdict", verdict_name(g.verdict)},
                     {"observed", number_to_json(g.observed)},
                     {"target", number_to_json(g.target)},
                     {"tolerance", number_to_json(g.tolerance)},
                     {"source", g.source},
                     {"note", g.note}});
  io::Json hists = io::Json::array();
  for (const auto& h : r.histograms)
    hists.push_back({{"title", h.title},
                     {"lo", h.lo},
                     {"width", h.width},
                     {"counts", h.counts},
                     {"n", h.n},
                     {"gaussian_sd", h.gaussian_sd}});
  return {{"metadata", {{"kind", r.kind}, {"version", r.version}, {"config_hash", r.config_hash}, {"seed", r.seed}}},
          {"passed", r.passed()},
          {"tables", tables},
          {"gates", gates},
          {"histograms", hists}};
}

Report report_from_json(const io::Json& j) {
  Report r;
  const auto& meta = j.at("metadata");
  r.kind = meta.at("kind").get<std::string>();
  r.version = meta.at("version").get<std::string>();
  r.config_hash = meta.at("config_hash").get<std::uint64_t>();
  r.seed = meta.at("seed").get<std::uint64_t>();
  for (const auto& t : j.at("tables")) {
    Table table;
    table.name = t.at("name").get<std::string>();
    table.columns = t.at("columns").get<std::vector<std::string>>();
    for (const auto& row : t.at("rows")) {
      std::vector<Cell> cells;
      for (const auto& c : row) {
        if (c.is_number_integer()) cells.emplace_back(c.get<std::int64_t>());
        else if (c.is_object()) cells.emplace_back(number_from_json(c.at("f")));
        else cells.emplace_back(c.get<std::string>());
      }
      table.rows.push_back(std::move(cells));
    }
    r.tables.push_back(std::move(table));
  }
  for (const auto& g : j.at("gates"))
    r.gates.push_back({g.at("name").get<std::string>(), parse_verdict(g.at("verdict").get<std::string>()),
                       number_from_json(g.at("observed")), number_from_json(g.at("target")),
                       number_from_json(g.at("tolerance")), g.at("source").get<std::string>(),
                       g.at("note").get<std::string>()});
  for (const auto& h : j.at("histograms"))
    r.histograms.push_back({h.at("title").get<std::string>(), h.at("lo").get<double>(), h.at("width").get<double>(),
                            h.at("counts").get<std::vector<std::int64_t>>(), h.at("n").get<std::int64_t>(),
                            h.at("gaussian_sd").get<double>()});
  return r;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* v = std::get_if<std::int64_t>(&row[i])) out += std::to_string(*v);
      else if (const auto* d = std::get_if<double>(&row[i])) out += format_double(*d);
      else out += csv_field(std::get<std::string>(row[i]));
    }
    out += '\n';
  }
  return out;
}

std::string to_svg(const Report& r) {
  // One panel per histogram, stacked vertically: bars of the empirical
  // density and, when requested, the centered Gaussian density on top.
  const double width = 640, panel = 320, margin = 40;
  std::ostringstream svg;
  const double height = panel * static_cast<double>(r.histograms.size());
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  for (std::size_t k = 0; k < r.histograms.size(); ++k) {
    const auto& h = r.histograms[k];
    const double top = panel * static_cast<double>(k);
    const double plot_w = width - 2 * margin, plot_h = panel - 2 * margin;
    const double span = h.width * static_cast<double>(h.counts.size());
    auto density = [&](std::int64_t c) { return static_cast<double>(c) / (static_cast<double>(h.n) * h.width); };
    double peak = 0.0;
    for (auto c : h.counts) peak = std::max(peak, density(c));
    if (h.gaussian_sd > 0) peak = std::max(peak, 1.0 / (h.gaussian_sd * std::sqrt(2.0 * std::numbers::pi)));
    if (peak <= 0) peak = 1.0;
    auto sx = [&](double x) { return margin + (x - h.lo) / span * plot_w; };
    auto sy = [&](double y) { return top + margin + plot_h * (1.0 - y / peak); };
    svg << "<text x=\"" << margin << "\" y=\"" << top + 20 << "\" font-family=\"sans-serif\" font-size=\"14\">"
        << xml_escape(h.title) << "</text>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << sy(0) << "\" x2=\"" << margin + plot_w << "\" y2=\"" << sy(0)
        << "\" stroke=\"black\"/>\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      const double x0 = sx(h.lo + h.width * static_cast<double>(b));
      const double y = sy(density(h.counts[b]));
      svg << "<rect x=\"" << format_double(x0) << "\" y=\"" << format_double(y) << "\" width=\""
          << format_double(plot_w / static_cast<double>(h.counts.size())) << "\" height=\"" << format_double(sy(0) - y)
          << "\" fill=\"steelblue\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
    }
    if (h.gaussian_sd > 0) {
      svg << "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"2\" points=\"";
      for (int i = 0; i <= 200; ++i) {
        const double x = h.lo + span * i / 200.0;
        const double y = std::exp(-0.5 * x * x / (h.gaussian_sd * h.gaussian_sd)) /
                         (h.gaussian_sd * std::sqrt(2.0 * std::numbers::pi));
        svg << format_double(sx(x)) << ',' << format_double(sy(y)) << ' ';
      }
      svg << "\"/>\n";
    }
    svg << "<text x=\"" << margin << "\" y=\"" << top + panel - 10 << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double(h.lo) << "</text>\n";
    svg << "<text x=\"" << margin + plot_w - 60 << "\" y=\"" << top + panel - 10
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(h.lo + span) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> emit_report(const Report& r, const std::string& dir, const std::vector<Format>& formats) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
  std::vector<std::string> written;
  for (Format f : formats) {
    if (f == Format::csv) {
      for (std::size_t i = 0; i < r.tables.size(); ++i) {
        const std::string name = i == 0 ? r.kind : r.kind + "_" + r.tables[i].name;
        const fs::path path = fs::path(dir) / (name + ".csv");
        write_file(path, to_csv(r.tables[i]));
        written.push_back(path.string());
      }
    } else if (f == Format::json) {
      const fs::path path = fs::path(dir) / (r.kind + ".json");
      write_file(path, report_to_json(r).dump(2) + "\n");
      written.push_back(path.string());
    } else if (f == Format::svg && !r.histograms.empty()) {
      const fs::path path = fs::path(dir) / (r.kind + ".svg");
      write_file(path, to_svg(r));
      written.push_back(path.string());
    }
  }
  return written;
}

Report run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case Kind::charfn: return run_charfn_experiment(cfg);
    case Kind::clt:
    case Kind::winding_cov: return run_clt_experiment(cfg);
    case Kind::holonomy: return run_holonomy_experiment(cfg);
    case Kind::spitzer: return run_spitzer_experiment(cfg);
    case Kind::oracle: return run_oracle_suite(cfg);
  }
  throw std::logic_error("run_experiment: unknown kind");
}

Report start_report(const ExperimentConfig& cfg) {
  Report r;
  r.kind = kind_name(cfg.kind);
  r.version = kVersion;
  r.config_hash = config_hash(cfg.raw);
  r.seed = cfg.seed;
  return r;
}

}  // namespace loopsoup::harness
