#include "wlst/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wlst {

TemperatureLadder::TemperatureLadder(std::vector<double> temps) : temps_(std::move(temps)) {
  if (temps_.empty()) {
    throw std::invalid_argument("TemperatureLadder: at least one temperature required");
  }
  if (temps_[0] != 1.0) {
    throw std::invalid_argument("TemperatureLadder: the cold rung must be exactly T = 1");
  }
  for (std::size_t i = 1; i < temps_.size(); ++i) {
    if (!(temps_[i - 1] < temps_[i])) {
      throw std::invalid_argument("TemperatureLadder: temperatures must be strictly increasing");
    }
  }
}

TemperatureLadder TemperatureLadder::arithmetic(double t_max, int rungs) {
  if (rungs < 1) {
    throw std::invalid_argument("TemperatureLadder: rung count must be >= 1");
  }
  if (rungs == 1) {
    if (t_max != 1.0) {
      throw std::invalid_argument("TemperatureLadder: a single-rung ladder must have t_max = 1");
    }
    return TemperatureLadder({1.0});
  }
  if (!(t_max > 1.0)) {
    throw std::invalid_argument("TemperatureLadder: t_max must be > 1");
  }
  std::vector<double> temps(static_cast<std::size_t>(rungs));
  const double step = (t_max - 1.0) / static_cast<double>(rungs - 1);
  for (int i = 0; i < rungs; ++i) temps[static_cast<std::size_t>(i)] = 1.0 + step * i;
  temps.front() = 1.0;
  temps.back() = t_max;
  return TemperatureLadder(std::move(temps));
}

double TemperatureLadder::temperature(int k) const {
  if (k < 0 || k >= size()) {
    throw std::out_of_range("TemperatureLadder: rung index " + std::to_string(k) +
                            " out of range [0, " + std::to_string(size()) + ")");
  }
  return temps_[static_cast<std::size_t>(k)];
}

void TemperatureLadder::insert_temperature(int index, double temp) {
  temps_.insert(temps_.begin() + index, temp);
}

int rung_index(const TemperatureLadder& ladder, int k) {
  if (k < 0 || k >= ladder.size()) {
    throw std::out_of_range("rung_index: index " + std::to_string(k) + " out of range [0, " +
                            std::to_string(ladder.size()) + ")");
  }
  return k;
}

std::vector<int> neighbors(const TemperatureLadder& ladder, int k) {
  rung_index(ladder, k);
  std::vector<int> out;
  if (k - 1 >= 0) out.push_back(k - 1);
  if (k + 1 < ladder.size()) out.push_back(k + 1);
  return out;
}

void SplitPolicy::validate(int current_rungs) const {
  if (!enabled) return;
  if (!(skew_threshold > 0.5 && skew_threshold < 1.0)) {
    throw std::invalid_argument("SplitPolicy: skew_threshold must be in (0.5, 1)");
  }
  if (min_samples < 10) {
    throw std::invalid_argument("SplitPolicy: min_samples must be >= 10");
  }
  if (max_rungs < current_rungs) {
    throw std::invalid_argument("SplitPolicy: max_rungs must be >= the current rung count");
  }
}

SplitResult maybe_split(TemperatureLadder& ladder, const SplitPolicy& policy,
                        const std::vector<RungHalfCounts>& half_counts) {
  const int d = ladder.size();
  SplitResult result;
  result.mapping.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) result.mapping[static_cast<std::size_t>(i)] = i;

  if (!policy.enabled) return result;
  if (static_cast<int>(half_counts.size()) != d) {
    throw std::invalid_argument("maybe_split: half_counts length must match the ladder");
  }
  if (d >= policy.max_rungs || d < 2) return result;

  int chosen = -1;
  for (int k = 0; k < d; ++k) {
    const auto& hc = half_counts[static_cast<std::size_t>(k)];
    const long total = hc.below + hc.above;
    if (total < policy.min_samples) continue;
    const long larger = std::max(hc.below, hc.above);
    if (static_cast<double>(larger) >= policy.skew_threshold * static_cast<double>(total)) {
      chosen = k;
      break;
    }
  }
  if (chosen < 0) return result;

  // Split the gap above the chosen rung; the top rung splits its lower gap.
  const int gap_low = (chosen == d - 1) ? d - 2 : chosen;
  const double mid = 0.5 * (ladder.temperature(gap_low) + ladder.temperature(gap_low + 1));
  const int insert_at = gap_low + 1;
  ladder.insert_temperature(insert_at, mid);

  result.split_occurred = true;
  result.parent_rung = chosen;
  result.new_rung = insert_at;
  for (int i = 0; i < d; ++i) {
    result.mapping[static_cast<std::size_t>(i)] = (i < insert_at) ? i : i + 1;
  }
  return result;
}

SplitTracker::SplitTracker(int rungs, int window) : window_(std::max(window, 16)) {
  if (rungs < 1) throw std::invalid_argument("SplitTracker: rung count must be >= 1");
  rungs_.resize(static_cast<std::size_t>(rungs));
  for (auto& w : rungs_) {
    w.values.reserve(static_cast<std::size_t>(window_));
    w.median_value = std::numeric_limits<double>::quiet_NaN();
  }
}

double SplitTracker::compute_median(const Window& w) {
  if (w.values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> tmp(w.values);
  const std::size_t mid = tmp.size() / 2;
  std::nth_element(tmp.begin(), tmp.begin() + mid, tmp.end());
  return tmp[mid];
}

void SplitTracker::observe(int rung, double abs_x) {
  auto& w = rungs_.at(static_cast<std::size_t>(rung));
  if (!std::isnan(w.median_value)) {
    if (abs_x < w.median_value) {
      ++w.counts.below;
    } else {
      ++w.counts.above;
    }
  }
  if (w.values.size() < static_cast<std::size_t>(window_)) {
    w.values.push_back(abs_x);
    if (w.values.size() == static_cast<std::size_t>(window_) && !w.full) {
      w.full = true;
      w.median_value = compute_median(w);
    }
  } else {
    w.values[w.next] = abs_x;
    w.next = (w.next + 1) % static_cast<std::size_t>(window_);
  }
}

std::vector<RungHalfCounts> SplitTracker::half_counts() const {
  std::vector<RungHalfCounts> out;
  out.reserve(rungs_.size());
  for (const auto& w : rungs_) out.push_back(w.counts);
  return out;
}

void SplitTracker::refresh() {
  for (auto& w : rungs_) {
    if (!w.values.empty()) w.median_value = compute_median(w);
    w.counts = RungHalfCounts{};
  }
}

void SplitTracker::on_split(const std::vector<int>& mapping, int new_rung) {
  if (mapping.size() != rungs_.size()) {
    throw std::invalid_argument("SplitTracker: mapping length mismatch");
  }
  std::vector<Window> remapped(rungs_.size() + 1);
  for (auto& w : remapped) {
    w.values.reserve(static_cast<std::size_t>(window_));
    w.median_value = std::numeric_limits<double>::quiet_NaN();
  }
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    remapped.at(static_cast<std::size_t>(mapping[i])) = std::move(rungs_[i]);
  }
  remapped.at(static_cast<std::size_t>(new_rung)) = Window{};
  remapped[static_cast<std::size_t>(new_rung)].median_value =
      std::numeric_limits<double>::quiet_NaN();
  rungs_ = std::move(remapped);
  refresh();
}

double SplitTracker::median(int rung) const {
  return rungs_.at(static_cast<std::size_t>(rung)).median_value;
}

}  // namespace wlst
