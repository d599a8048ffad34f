#pragma once

#include <vector>

namespace wlst {

class TemperatureLadder;
struct SplitPolicy;
struct RungHalfCounts;
struct SplitResult;

// Inserts at most one rung per call; the lowest qualifying rung wins. A rung
// qualifies when its half counts total at least min_samples and the larger
// half holds at least skew_threshold of the visits. The new temperature is
// the midpoint of the gap above the rung (the top rung splits its lower
// gap). Never grows the ladder beyond max_rungs.
SplitResult maybe_split(TemperatureLadder& ladder, const SplitPolicy& policy,
                        const std::vector<RungHalfCounts>& half_counts);

// Ordered temperature ladder with the cold rung pinned at T = 1. The rung
// index is the reaction coordinate that partitions the extended state
// space. A single-rung ladder is allowed for degenerate (plain MH) runs.
class TemperatureLadder {
 public:
  explicit TemperatureLadder(std::vector<double> temps);

  // Arithmetic ladder 1, 1+step, ..., t_max with the given rung count.
  static TemperatureLadder arithmetic(double t_max, int rungs);

  int size() const { return static_cast<int>(temps_.size()); }
  double temperature(int k) const;
  const std::vector<double>& temperatures() const { return temps_; }

 private:
  void insert_temperature(int index, double temp);

  friend SplitResult maybe_split(TemperatureLadder&, const SplitPolicy&,
                                 const std::vector<RungHalfCounts>&);

  std::vector<double> temps_;
};

// Identity on valid rung indices; exists so callers treat the reaction
// coordinate abstractly rather than assuming it is the ladder position.
int rung_index(const TemperatureLadder& ladder, int k);

// {k-1, k+1} clipped to the ladder.
std::vector<int> neighbors(const TemperatureLadder& ladder, int k);

struct SplitPolicy {
  bool enabled = false;
  double skew_threshold = 0.75;  // in (0.5, 1)
  int min_samples = 200;         // >= 10
  int max_rungs = 64;

  void validate(int current_rungs) const;
};

struct RungHalfCounts {
  long below = 0;
  long above = 0;
};

struct SplitResult {
  bool split_occurred = false;
  std::vector<int> mapping;  // old rung index -> new rung index; identity when no split
  int parent_rung = -1;      // old index of the rung whose weight seeds the new rung
  int new_rung = -1;         // new index of the inserted rung
};

// Per-rung windowed median of |x| plus counts of how recent visits fall
// around it. Feeds maybe_split; counting starts once a rung's window has
// filled, and refresh() re-freezes the median after every split evaluation.
class SplitTracker {
 public:
  SplitTracker(int rungs, int window);

  void observe(int rung, double abs_x);
  std::vector<RungHalfCounts> half_counts() const;

  // Recompute each rung's median from its buffer and zero the counts.
  void refresh();

  // Remap buffers after a ladder split; the inserted rung starts empty.
  void on_split(const std::vector<int>& mapping, int new_rung);

  // NaN until the rung's window has filled once.
  double median(int rung) const;

 private:
  struct Window {
    std::vector<double> values;  // ring buffer
    std::size_t next = 0;
    bool full = false;
    double median_value;
    RungHalfCounts counts;
  };

  static double compute_median(const Window& w);

  int window_;
  std::vector<Window> rungs_;
};

}  // namespace wlst
