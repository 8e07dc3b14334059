#include "loopsoup/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace harness = loopsoup::harness;

int main(int argc, char** argv) {
  CLI::App app{"Random walk loop soups: exact formulas, enumeration and Monte Carlo"};
  app.require_subcommand(1);

  std::string config_file, out_dir = ".";
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::vector<std::string> formats{"csv", "json", "svg"};
  bool quiet = false;

  for (const char* name : {"charfn", "clt", "winding-cov", "holonomy", "spitzer", "oracle"}) {
    auto* sub = app.add_subcommand(name);
    auto* cfg_opt = sub->add_option("--config", config_file, "JSON experiment configuration");
    if (std::string(name) != "oracle") cfg_opt->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--format", formats, "output formats")->check(CLI::IsMember({"csv", "json", "svg"}))->delimiter(',');
    sub->add_flag("-q,--quiet", quiet, "print only the final verdict");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string kind_name = app.get_subcommands().front()->get_name();
  harness::Report report;
  try {
    const harness::Kind kind = harness::parse_kind(kind_name);
    const auto json = config_file.empty() ? loopsoup::io::Json::object() : loopsoup::io::read_json_file(config_file);
    auto cfg = harness::parse_config(json, kind, seed);
    cfg.workers = workers;
    report = harness::run_experiment(cfg);
  } catch (const loopsoup::io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  std::vector<harness::Format> fmts;
  for (const auto& f : formats) fmts.push_back(f == "csv" ? harness::Format::csv : f == "json" ? harness::Format::json : harness::Format::svg);
  try {
    for (const auto& path : harness::emit_report(report, out_dir, fmts))
      if (!quiet) std::cout << "wrote " << path << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  int failed = 0, skipped = 0;
  for (const auto& g : report.gates) {
    const char* v = g.verdict == harness::Verdict::pass ? "PASS" : g.verdict == harness::Verdict::fail ? "FAIL" : "SKIP";
    if (g.verdict == harness::Verdict::fail) ++failed;
    if (g.verdict == harness::Verdict::skipped) ++skipped;
    if (!quiet || g.verdict == harness::Verdict::fail)
      std::printf("%s  %-60s observed %.6g  target %.6g  tol %.3g  [%s]\n", v, g.name.c_str(), g.observed, g.target,
                  g.tolerance, g.source.c_str());
  }
  std::printf("%s: %zu gates, %d failed, %d skipped\n", kind_name.c_str(), report.gates.size(), failed, skipped);
  return failed == 0 ? 0 : 1;
}
