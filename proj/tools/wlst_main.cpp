#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wlst/bench.hpp"
#include "wlst/config.hpp"
#include "wlst/engine.hpp"

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw wlst::ConfigError("cannot write '" + path.string() + "'");
  return os;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const std::uint64_t* seed) {
  wlst::RunConfig cfg = wlst::load_run_config_file(config_path);
  if (seed) cfg.seed = *seed;
  const wlst::RunResult res = wlst::run(cfg);
  fs::create_directories(out_dir);
  {
    auto os = open_out(fs::path(out_dir) / "trace.csv");
    res.trace.write_csv(os);
  }
  {
    auto os = open_out(fs::path(out_dir) / "summary.txt");
    res.summary.write(os);
  }
  res.summary.write(std::cout);
  return 0;
}

int cmd_bench(const std::string& figure, const std::string& out_dir, std::uint64_t seed,
              int replicates, std::vector<long> n_grid, bool full_scale) {
  std::vector<wlst::VariantSpec> variants;
  if (figure == "schedules") {
    variants = wlst::schedule_figure_variants();
  } else if (figure == "adaptive") {
    variants = wlst::adaptive_figure_variants();
  } else {
    variants = wlst::scaling_variants();
  }
  if (replicates <= 0) replicates = full_scale ? 1000 : 100;
  if (n_grid.empty()) {
    n_grid = {1000, 10000, 100000};
    if (full_scale) n_grid.push_back(1000000);
  }

  const auto results = wlst::run_benchmark(variants, n_grid, replicates, seed);

  fs::create_directories(out_dir);
  {
    auto os = open_out(fs::path(out_dir) / "results.csv");
    wlst::write_results_csv(os, results);
  }
  {
    auto os = open_out(fs::path(out_dir) / "timings.csv");
    wlst::write_timings_csv(os, results);
  }
  {
    auto os = open_out(fs::path(out_dir) / "estimates.csv");
    wlst::write_estimates_csv(os, results);
  }
  wlst::write_results_csv(std::cout, results);
  std::cerr << "wrote " << (fs::path(out_dir) / "results.csv").string() << ", timings.csv, "
            << "estimates.csv\n";
  return 0;
}

int cmd_report(const std::string& figure, bool speedup, const std::string& out_dir) {
  const fs::path results_path = fs::path(out_dir) / "results.csv";
  std::ifstream in(results_path);
  if (!in) throw wlst::ConfigError("cannot open '" + results_path.string() + "'");
  std::vector<wlst::BenchResult> results;
  try {
    results = wlst::read_results_csv(in, results_path.string());
    const fs::path timings_path = fs::path(out_dir) / "timings.csv";
    std::ifstream tin(timings_path);
    if (tin) wlst::read_timings_csv(tin, timings_path.string(), results);
  } catch (const std::invalid_argument& e) {
    throw wlst::ConfigError(e.what());
  }

  if (!figure.empty()) {
    const wlst::FigureTable table = wlst::figure_data(results, figure);
    if (!table.missing.empty()) {
      std::cerr << "warning: " << table.missing.size()
                << " missing variant/N combinations for figure '" << figure << "':\n";
      for (const auto& m : table.missing) std::cerr << "  " << m << '\n';
    }
    auto os = open_out(fs::path(out_dir) / ("figure_" + figure + ".csv"));
    os << table.csv;
    std::cout << table.csv;
  }
  if (speedup) {
    // a missing M=1 baseline is a contract violation, not a config error
    std::cout << wlst::speedup_report(results);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated tempering driven by a parallel Wang-Landau bias estimator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int replicates = 0;
  std::vector<long> n_grid;
  std::string bench_figure;
  std::string report_figure;
  bool full_scale = false;
  bool speedup = false;

  CLI::App* run_cmd = app.add_subcommand("run", "one run from a config file");
  run_cmd->add_option("--config", config_path, "run config file (INI)")->required();
  run_cmd->add_option("--out", out_dir, "output directory (trace.csv, summary.txt)");
  CLI::Option* seed_opt = run_cmd->add_option("--seed", seed, "override engine.seed");

  CLI::App* bench_cmd = app.add_subcommand("bench", "replicate sweep over an experiment matrix");
  bench_cmd->add_option("--figure", bench_figure, "variant set: schedules, adaptive or scaling")
      ->default_val("schedules")
      ->check(CLI::IsMember({"schedules", "adaptive", "scaling"}));
  bench_cmd->add_option("--out", out_dir, "output directory (results/timings/estimates.csv)");
  bench_cmd->add_option("--seed", seed, "base seed; replicate r uses seed + r");
  bench_cmd->add_option("--replicates", replicates, "replicates per variant (default 100)");
  bench_cmd->add_option("--n-grid", n_grid, "chain lengths, comma separated")->delimiter(',');
  bench_cmd->add_flag("--full-paper-scale", full_scale,
                      "1000 replicates and the 10^3..10^6 grid");

  CLI::App* report_cmd = app.add_subcommand("report", "figure tables from a bench output dir");
  report_cmd->add_option("--out", out_dir, "directory holding results.csv / timings.csv");
  report_cmd->add_option("--figure", report_figure, "emit figure_<name>.csv: schedules or adaptive")
      ->check(CLI::IsMember({"schedules", "adaptive"}));
  report_cmd->add_flag("--speedup", speedup, "print the particle-count speedup table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(run_cmd)) {
      return cmd_run(config_path, out_dir, *seed_opt ? &seed : nullptr);
    }
    if (app.got_subcommand(bench_cmd)) {
      return cmd_bench(bench_figure, out_dir, seed, replicates, n_grid, full_scale);
    }
    if (report_figure.empty() && !speedup) {
      throw wlst::ConfigError("report requires --figure or --speedup");
    }
    return cmd_report(report_figure, speedup, out_dir);
  } catch (const wlst::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
