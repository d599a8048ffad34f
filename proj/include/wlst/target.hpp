#pragma once

#include <vector>

namespace wlst {

// A target density known up to normalization, evaluated in the log domain.
// Implementations must be deterministic and finite for finite x.
class TargetDensity {
 public:
  virtual ~TargetDensity() = default;
  virtual double log_density(double x) const = 0;
};

struct MixtureComponent {
  double weight;
  double mean;
  double sd;
};

// Finite Gaussian mixture. Weights must sum to 1 (within 1e-12) and all
// component sds must be strictly positive.
class GaussianMixture final : public TargetDensity {
 public:
  explicit GaussianMixture(std::vector<MixtureComponent> components);

  // log sum_j w_j phi(x; mu_j, sd_j) via log-sum-exp; stays finite far
  // into the tails (no underflow for |x| in the hundreds).
  double log_density(double x) const override;

  const std::vector<MixtureComponent>& components() const { return comps_; }

  // 0.5 N(-15, 1) + 0.5 N(15, 1): the bimodal benchmark target.
  static GaussianMixture bimodal_benchmark();
  static GaussianMixture standard_normal();

 private:
  std::vector<MixtureComponent> comps_;
  std::vector<double> log_coeff_;  // log w_j - log sd_j - log(2 pi)/2
};

// pi(x)^{1/T} for a temperature T >= 1. T = 1 reproduces the base density.
class TemperedDensity {
 public:
  TemperedDensity(const TargetDensity& base, double temperature);

  double log_density(double x) const { return base_->log_density(x) / temperature_; }
  double temperature() const { return temperature_; }
  const TargetDensity& base() const { return *base_; }

 private:
  const TargetDensity* base_;
  double temperature_;
};

// log of int_lo^hi exp(t.log_density(x)) dx by composite Simpson quadrature
// on n_points subintervals (rounded up to even), accumulated in the log
// domain. Used as a partition-function oracle; [lo, hi] must contain all
// of the density's mass. Requires lo < hi and n_points >= 1000.
double log_partition_quadrature(const TemperedDensity& t, double lo, double hi, long n_points);

}  // namespace wlst
