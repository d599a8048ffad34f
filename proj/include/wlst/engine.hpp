#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "wlst/bias.hpp"
#include "wlst/kernels.hpp"
#include "wlst/ladder.hpp"
#include "wlst/rng.hpp"
#include "wlst/target.hpp"

namespace wlst {

// One walker on the extended space: position and ladder rung.
struct ParticleState {
  double x = 0.0;
  int rung = 0;
};

// Initial distribution for x. The normal kind consumes one normal draw
// per particle; the point kind consumes none.
struct InitSpec {
  enum class Kind { normal, point };

  Kind kind = Kind::normal;
  double mean = 0.0;
  double sd = 1.0;
  double value = 0.0;

  static InitSpec normal(double mean, double sd);
  static InitSpec point(double value);
};

enum class RungInit { cold, uniform };

// Which kernel moves run each sweep. alternate does the x move on odd
// sweeps and the rung move on even ones.
enum class MoveComposition { both, x_only, alternate };

struct RunConfig {
  GaussianMixture target = GaussianMixture::bimodal_benchmark();
  std::vector<double> temperatures{1.0};

  // Absent schedule freezes theta at uniform for the whole run (the plain
  // simulated-tempering baseline).
  std::optional<StepSchedule> schedule;

  double sigma0 = 10.0;
  double target_rate = 0.234;
  double adapt_exponent = 0.6;
  bool adapt = true;
  MoveComposition composition = MoveComposition::both;

  long iterations = 0;  // sweeps
  int particles = 1;
  std::uint64_t seed = 1;
  InitSpec init;
  RungInit rung_init = RungInit::cold;
  long record_stride = 1;
  bool store_trace = true;
  long trailing_window = 10000;
  int threads = 1;

  SplitPolicy split;
  long split_check_every = 0;  // 0: evaluate only when the flat histogram fires
  int split_window = 256;

  // Throws std::invalid_argument naming the offending config key.
  void validate() const;
};

struct TraceRecord {
  long t = 0;
  int particle = 0;
  double x = 0.0;
  int rung = 0;
  bool accepted_x = false;
  bool accepted_rung = false;
  double sigma = 0.0;   // after this sweep's barrier
  double gamma = 0.0;   // step size used in this sweep's bias update
  int fh_events = 0;    // after this sweep's flat-histogram check
};

// Strided record stream plus the final bias and ladder. Holds exactly
// particles * floor(iterations / record_stride) records when storing is on.
struct Trace {
  std::vector<TraceRecord> records;
  std::vector<double> final_log_theta;
  std::vector<double> final_temperatures;

  static const char* csv_header();  // t,particle,x,rung,acc_x,acc_rung,sigma,gamma,fh_events
  void write_csv(std::ostream& os) const;
};

// Mean of x over all recorded cold-rung (T = 1) states. Throws
// std::runtime_error("no T=1 samples") when the trace has none.
double posterior_mean(const Trace& trace);

struct Summary {
  long iterations = 0;
  int particles = 0;
  std::uint64_t seed = 0;
  double sigma_final = 0.0;
  int fh_events = 0;
  double acc_x_rate = 0.0;
  double acc_rung_rate = 0.0;
  double trailing_acc_x = 0.0;  // realized x acceptance over the trailing window
  long n_cold_samples = 0;      // recorded cold-rung states
  double posterior_mean = std::numeric_limits<double>::quiet_NaN();
  double wall_clock_s = 0.0;
  std::vector<double> temperatures;
  std::vector<double> theta;
  std::vector<double> occupation;  // fraction of particle-sweeps per rung

  void write(std::ostream& os) const;  // flat "key = value" block
};

// M lock-step particles advanced sweep by sweep. Between barriers the
// particle moves read an immutable snapshot (theta, sigma, ladder) and may
// be executed by any number of workers; each particle owns a private RNG
// stream keyed by (seed, particle id + 1), stream id 0 belongs to the
// engine, so the trace is bit-identical for any thread count. The barrier
// is single-writer: hit aggregation, bias update, flat-histogram check,
// scale adaptation, split evaluation, recording.
class Engine {
 public:
  explicit Engine(const RunConfig& cfg);

  void sweep();
  long iteration() const { return t_; }

  const std::vector<ParticleState>& particles() const { return particles_; }
  const TemperatureLadder& ladder() const { return ladder_; }
  const BiasState& bias() const { return bias_; }
  const ProposalState& proposal() const { return proposal_; }
  const Trace& trace() const { return trace_; }

  Summary summarize(double wall_clock_s) const;
  Trace release_trace();  // moves the trace out, stamping final theta/ladder

 private:
  void move_range(int lo, int hi, bool do_x, bool do_rung, double sigma);
  void apply_split(const SplitResult& res);

  RunConfig cfg_;
  TemperatureLadder ladder_;
  BiasState bias_;
  ProposalState proposal_;
  SplitTracker tracker_;
  std::vector<RngStream> streams_;  // one per particle
  RngStream engine_rng_;            // stream id 0, reserved for shared draws
  std::vector<ParticleState> particles_;
  std::vector<double> log_pi_;  // cached base log-density per particle

  long t_ = 0;
  Trace trace_;

  // per-sweep scratch, sized to the current ladder
  std::vector<double> bias_weight_;
  std::vector<long> rung_hits_;
  std::vector<double> alpha_;
  std::vector<char> acc_x_, acc_rung_;

  // running tallies
  std::vector<long long> occupation_;
  long long acc_x_total_ = 0, moves_x_total_ = 0;
  long long acc_rung_total_ = 0, moves_rung_total_ = 0;
  std::vector<double> trail_;  // ring of per-sweep realized x acceptance
  long long trail_n_ = 0;
  long long cold_n_ = 0;
  double cold_sum_ = 0.0;
};

struct RunResult {
  Trace trace;
  Summary summary;
};

// Validate, init, run all sweeps, summarize (with wall-clock time).
RunResult run(const RunConfig& cfg);

}  // namespace wlst
