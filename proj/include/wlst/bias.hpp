#pragma once

#include <vector>

namespace wlst {

// Gain sequence for the stochastic-approximation weight update. Either a
// deterministic decay t0/max(t0, t), or a flat-histogram schedule that
// keeps gamma0 * decay^f where f counts flat-histogram events.
struct StepSchedule {
  enum class Kind { deterministic, flat_histogram };

  Kind kind = Kind::flat_histogram;
  long t0 = 1;          // deterministic only
  double c = 0.1;       // flat-histogram threshold, in (0, 1]
  double gamma0 = 1.0;  // >= 0
  double decay = 0.5;   // in (0, 1)

  static StepSchedule deterministic(long t0);
  static StepSchedule flat_histogram(double c, double gamma0 = 1.0, double decay = 0.5);

  void validate() const;
};

// Step size at iteration t. The deterministic variant ignores fh_events;
// the flat-histogram variant ignores t. Requires t >= 1.
double step_size(const StepSchedule& s, long t, int fh_events);

// max_i |nu_counts[i]/total - 1/d| < c/d, with all-zero counts never flat.
bool flat_histogram_met(const std::vector<long>& nu_counts, double c);

// Learned rung weights theta (log domain, normalized to sum 1), occupancy
// counts since the last flat-histogram event, and the update counter.
// One logical writer updates it at engine barriers; kernel evaluations
// read a consistent snapshot between barriers.
class BiasState {
 public:
  explicit BiasState(int rungs);  // uniform theta, zero counts

  int size() const { return static_cast<int>(log_theta_.size()); }
  double log_theta(int rung) const;
  double theta(int rung) const;
  const std::vector<double>& log_thetas() const { return log_theta_; }
  std::vector<double> thetas() const;
  const std::vector<long>& nu_counts() const { return nu_; }
  long iteration() const { return t_; }
  int fh_events() const { return fh_events_; }

  // log theta[i] += gamma * (rung_hits[i]/m - 1/d), then renormalize so the
  // weights sum to 1; occupancy counts absorb the hits and t advances.
  // rung_hits must sum to m (the particle count).
  void update(const std::vector<long>& rung_hits, int m, double gamma);

  // -log theta[rung]: the pseudo-prior weight that equalizes occupation.
  double biased_log_weight(int rung) const;

  // Flat-histogram event: bump the event counter and reset occupancy.
  void note_flat_histogram();

  // Move entries through an order-preserving mapping after a ladder split;
  // the new rung inherits the parent's theta and everything renormalizes.
  // Occupancy counts reset (the old histogram is no longer comparable).
  // A negative new_rung requires the identity mapping and is a no-op.
  void remap_on_split(const std::vector<int>& mapping, int parent_rung, int new_rung);

 private:
  void normalize();

  std::vector<double> log_theta_;
  std::vector<long> nu_;
  long t_ = 0;
  int fh_events_ = 0;
};

}  // namespace wlst
