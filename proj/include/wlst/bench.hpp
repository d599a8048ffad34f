#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "wlst/engine.hpp"

namespace wlst {

// plain_st freezes theta uniform (no bias update at all); sa_deterministic
// runs the t0/max(t0, t) gain; wang_landau runs the flat-histogram gain.
enum class Algorithm { plain_st, sa_deterministic, wang_landau };

// A t0 that may depend on the run length, resolved against N just before
// execution.
struct T0Expr {
  enum class Kind { literal, quarter_n, half_n };

  Kind kind = Kind::literal;
  long value = 1;

  static T0Expr literal(long v);
  static T0Expr quarter_n();
  static T0Expr half_n();

  long resolve(long n) const;
  std::string label() const;  // "1", "N/4", "N/2"
};

// One cell of the experiment matrix. All variants run the bimodal
// benchmark mixture on the 10-rung arithmetic ladder 1..10 with initial
// sigma 10, cold rung start, x ~ N(0, 1).
struct VariantSpec {
  std::string name;
  Algorithm algorithm = Algorithm::wang_landau;
  double c = 0.1;  // wang_landau only
  T0Expr t0;       // sa_deterministic only
  bool adaptive_proposal = true;
  int particles = 1;
  bool split = false;

  RunConfig to_run_config(long n, std::uint64_t seed) const;
};

struct BenchResult {
  std::string variant;
  long n = 0;
  int replicates = 0;
  int particles = 1;
  double rmse = 0.0;
  double mean_wall_clock_s = 0.0;
  std::vector<double> estimates;  // per replicate, in replicate order
};

// sqrt((1/R) sum_r (est_r - true_mean)^2); at least one estimate required.
double rmse(const std::vector<double>& estimates, double true_mean);

using RunFn = std::function<Summary(const RunConfig&)>;

// One BenchResult per (variant, N). Replicate r of every variant uses seed
// base_seed + r, so comparisons across variants are paired. A replicate
// with no cold-rung samples aborts with the variant and replicate named.
std::vector<BenchResult> run_benchmark(const std::vector<VariantSpec>& variants,
                                       const std::vector<long>& n_grid, int replicates,
                                       std::uint64_t base_seed);

// Test seam: same contract, runs through the supplied runner.
std::vector<BenchResult> run_benchmark_with(const RunFn& runner,
                                            const std::vector<VariantSpec>& variants,
                                            const std::vector<long>& n_grid, int replicates,
                                            std::uint64_t base_seed);

// Long-format plot data for one figure, rows sorted by (figure, variant,
// N). Combinations expected for the figure but absent from results are
// listed in missing; the partial table is still usable.
struct FigureTable {
  std::string csv;  // header figure,variant,N,rmse,runtime_s plus data rows
  std::vector<std::string> missing;
};
FigureTable figure_data(const std::vector<BenchResult>& results, const std::string& figure);

// Wall-clock and RMSE ratios against the particles = 1 baseline, with the
// ideal 1/sqrt(M) column, grouped by N. Throws when a group lacks the
// baseline.
std::string speedup_report(const std::vector<BenchResult>& results);

// The experiment matrices behind the two figures and the scaling study.
std::vector<VariantSpec> schedule_figure_variants();  // plain ST, SA t0 grid, WL c grid
std::vector<VariantSpec> adaptive_figure_variants();  // WL / plain ST x adaptive / fixed
std::vector<VariantSpec> scaling_variants();          // WL c = 0.1 at M = 1, 10, 100

// results.csv: variant,N,replicates,particles,rmse (deterministic given the
// base seed). timings.csv: variant,N,mean_wall_clock_s (not deterministic).
// estimates.csv: variant,N,replicate,estimate.
void write_results_csv(std::ostream& os, const std::vector<BenchResult>& results);
void write_timings_csv(std::ostream& os, const std::vector<BenchResult>& results);
void write_estimates_csv(std::ostream& os, const std::vector<BenchResult>& results);

// Parses what write_results_csv wrote (estimates and timings stay empty).
std::vector<BenchResult> read_results_csv(std::istream& in, const std::string& origin);
// Fills mean_wall_clock_s on matching (variant, N) rows.
void read_timings_csv(std::istream& in, const std::string& origin,
                      std::vector<BenchResult>& results);

}  // namespace wlst
