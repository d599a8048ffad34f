#include "wlst/target.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wlst {

namespace {
constexpr double kHalfLogTwoPi = 0.9189385332046727418;
}

GaussianMixture::GaussianMixture(std::vector<MixtureComponent> components)
    : comps_(std::move(components)) {
  if (comps_.empty()) {
    throw std::invalid_argument("GaussianMixture: at least one component required");
  }
  double wsum = 0.0;
  for (const auto& c : comps_) {
    if (!(c.weight > 0.0)) {
      throw std::invalid_argument("GaussianMixture: component weights must be positive");
    }
    if (!(c.sd > 0.0)) {
      throw std::invalid_argument("GaussianMixture: component sds must be strictly positive");
    }
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw std::invalid_argument("GaussianMixture: weights must sum to 1 within 1e-12");
  }
  log_coeff_.reserve(comps_.size());
  for (const auto& c : comps_) {
    log_coeff_.push_back(std::log(c.weight) - std::log(c.sd) - kHalfLogTwoPi);
  }
}

double GaussianMixture::log_density(double x) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    const double z = (x - comps_[j].mean) / comps_[j].sd;
    const double term = log_coeff_[j] - 0.5 * z * z;
    if (term > m) m = term;
  }
  double s = 0.0;
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    const double z = (x - comps_[j].mean) / comps_[j].sd;
    s += std::exp(log_coeff_[j] - 0.5 * z * z - m);
  }
  return m + std::log(s);
}

GaussianMixture GaussianMixture::bimodal_benchmark() {
  return GaussianMixture({{0.5, -15.0, 1.0}, {0.5, 15.0, 1.0}});
}

GaussianMixture GaussianMixture::standard_normal() {
  return GaussianMixture({{1.0, 0.0, 1.0}});
}

TemperedDensity::TemperedDensity(const TargetDensity& base, double temperature)
    : base_(&base), temperature_(temperature) {
  if (!(temperature >= 1.0)) {
    throw std::invalid_argument("TemperedDensity: temperature must be >= 1");
  }
}

double log_partition_quadrature(const TemperedDensity& t, double lo, double hi, long n_points) {
  if (!(lo < hi)) {
    throw std::invalid_argument("log_partition_quadrature: lo must be < hi");
  }
  if (n_points < 1000) {
    throw std::invalid_argument("log_partition_quadrature: n_points must be >= 1000");
  }
  const long n = n_points + (n_points % 2);
  const double h = (hi - lo) / static_cast<double>(n);

  // Simpson weights 1,4,2,...,4,1; sum in the log domain so tiny tail
  // values cannot underflow the accumulator.
  std::vector<double> terms(static_cast<std::size_t>(n) + 1);
  double m = -std::numeric_limits<double>::infinity();
  for (long i = 0; i <= n; ++i) {
    const double x = lo + h * static_cast<double>(i);
    const double w = (i == 0 || i == n) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
    const double term = std::log(w) + t.log_density(x);
    terms[static_cast<std::size_t>(i)] = term;
    if (term > m) m = term;
  }
  double s = 0.0;
  for (const double term : terms) s += std::exp(term - m);
  return m + std::log(s) + std::log(h / 3.0);
}

}  // namespace wlst
