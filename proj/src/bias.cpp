#include "wlst/bias.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wlst {

StepSchedule StepSchedule::deterministic(long t0) {
  StepSchedule s;
  s.kind = Kind::deterministic;
  s.t0 = t0;
  s.validate();
  return s;
}

StepSchedule StepSchedule::flat_histogram(double c, double gamma0, double decay) {
  StepSchedule s;
  s.kind = Kind::flat_histogram;
  s.c = c;
  s.gamma0 = gamma0;
  s.decay = decay;
  s.validate();
  return s;
}

void StepSchedule::validate() const {
  if (kind == Kind::deterministic) {
    if (t0 < 1) throw std::invalid_argument("StepSchedule: t0 must be >= 1");
  } else {
    if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("StepSchedule: c must be in (0, 1]");
    if (!(gamma0 >= 0.0)) throw std::invalid_argument("StepSchedule: gamma0 must be >= 0");
    if (!(decay > 0.0 && decay < 1.0)) {
      throw std::invalid_argument("StepSchedule: decay must be in (0, 1)");
    }
  }
}

double step_size(const StepSchedule& s, long t, int fh_events) {
  if (t < 1) throw std::invalid_argument("step_size: t must be >= 1");
  if (fh_events < 0) throw std::invalid_argument("step_size: fh_events must be >= 0");
  if (s.kind == StepSchedule::Kind::deterministic) {
    return static_cast<double>(s.t0) / static_cast<double>(std::max(s.t0, t));
  }
  return s.gamma0 * std::pow(s.decay, fh_events);
}

bool flat_histogram_met(const std::vector<long>& nu_counts, double c) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw std::invalid_argument("flat_histogram_met: c must be in (0, 1]");
  }
  if (nu_counts.empty()) return false;
  long total = 0;
  for (const long n : nu_counts) {
    if (n < 0) throw std::invalid_argument("flat_histogram_met: counts must be non-negative");
    total += n;
  }
  if (total == 0) return false;
  const double d = static_cast<double>(nu_counts.size());
  double max_dev = 0.0;
  for (const long n : nu_counts) {
    const double nu = static_cast<double>(n) / static_cast<double>(total);
    max_dev = std::max(max_dev, std::abs(nu - 1.0 / d));
  }
  return max_dev < c / d;
}

BiasState::BiasState(int rungs) {
  if (rungs < 1) throw std::invalid_argument("BiasState: rung count must be >= 1");
  log_theta_.assign(static_cast<std::size_t>(rungs), -std::log(static_cast<double>(rungs)));
  nu_.assign(static_cast<std::size_t>(rungs), 0);
}

double BiasState::log_theta(int rung) const {
  if (rung < 0 || rung >= size()) {
    throw std::out_of_range("BiasState: rung " + std::to_string(rung) + " out of range");
  }
  return log_theta_[static_cast<std::size_t>(rung)];
}

double BiasState::theta(int rung) const { return std::exp(log_theta(rung)); }

std::vector<double> BiasState::thetas() const {
  std::vector<double> out(log_theta_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(log_theta_[i]);
  return out;
}

void BiasState::normalize() {
  double m = -std::numeric_limits<double>::infinity();
  for (const double lt : log_theta_) m = std::max(m, lt);
  double s = 0.0;
  for (const double lt : log_theta_) s += std::exp(lt - m);
  const double lse = m + std::log(s);
  for (double& lt : log_theta_) lt -= lse;
}

void BiasState::update(const std::vector<long>& rung_hits, int m, double gamma) {
  if (rung_hits.size() != log_theta_.size()) {
    throw std::invalid_argument("update_bias: rung_hits length must match the rung count");
  }
  if (m < 1) throw std::invalid_argument("update_bias: particle count must be >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("update_bias: gamma must be >= 0");
  long total = 0;
  for (const long h : rung_hits) {
    if (h < 0) throw std::invalid_argument("update_bias: rung_hits must be non-negative");
    total += h;
  }
  if (total != m) {
    throw std::invalid_argument("update_bias: rung_hits must sum to the particle count");
  }

  const double inv_d = 1.0 / static_cast<double>(size());
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < log_theta_.size(); ++i) {
    const double mean_indicator = static_cast<double>(rung_hits[i]) * inv_m;
    log_theta_[i] += gamma * (mean_indicator - inv_d);
  }
  normalize();
  for (std::size_t i = 0; i < nu_.size(); ++i) nu_[i] += rung_hits[i];
  ++t_;
}

double BiasState::biased_log_weight(int rung) const { return -log_theta(rung); }

void BiasState::note_flat_histogram() {
  ++fh_events_;
  std::fill(nu_.begin(), nu_.end(), 0);
}

void BiasState::remap_on_split(const std::vector<int>& mapping, int parent_rung, int new_rung) {
  const int d = size();
  if (static_cast<int>(mapping.size()) != d) {
    throw std::invalid_argument("remap_on_split: mapping length mismatch");
  }
  if (new_rung < 0) {
    for (int i = 0; i < d; ++i) {
      if (mapping[static_cast<std::size_t>(i)] != i) {
        throw std::invalid_argument("remap_on_split: no-split remap requires the identity mapping");
      }
    }
    return;
  }

  const int d_new = d + 1;
  if (parent_rung < 0 || parent_rung >= d) {
    throw std::invalid_argument("remap_on_split: parent rung out of range");
  }
  if (new_rung >= d_new) {
    throw std::invalid_argument("remap_on_split: new rung out of range");
  }
  int prev = -1;
  for (const int to : mapping) {
    if (to <= prev || to >= d_new) {
      throw std::invalid_argument("remap_on_split: mapping must be injective and order-preserving");
    }
    if (to == new_rung) {
      throw std::invalid_argument("remap_on_split: mapping may not cover the inserted rung");
    }
    prev = to;
  }

  std::vector<double> remapped(static_cast<std::size_t>(d_new), 0.0);
  for (int i = 0; i < d; ++i) {
    remapped[static_cast<std::size_t>(mapping[static_cast<std::size_t>(i)])] =
        log_theta_[static_cast<std::size_t>(i)];
  }
  remapped[static_cast<std::size_t>(new_rung)] = log_theta_[static_cast<std::size_t>(parent_rung)];
  log_theta_ = std::move(remapped);
  normalize();
  nu_.assign(static_cast<std::size_t>(d_new), 0);
}

}  // namespace wlst
