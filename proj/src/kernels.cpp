#include "wlst/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wlst {

ProposalState ProposalState::with_sigma(double sigma, double target_rate,
                                        double adapt_rate_exponent) {
  if (!(sigma > 0.0)) throw std::invalid_argument("ProposalState: sigma must be positive");
  if (!(target_rate > 0.0 && target_rate < 1.0))
    throw std::invalid_argument("ProposalState: target_rate must lie in (0, 1)");
  if (!(adapt_rate_exponent > 0.5 && adapt_rate_exponent <= 1.0))
    throw std::invalid_argument("ProposalState: adapt_rate_exponent must lie in (0.5, 1]");
  ProposalState p;
  p.log_sigma = std::log(sigma);
  p.target_rate = target_rate;
  p.adapt_rate_exponent = adapt_rate_exponent;
  return p;
}

double ProposalState::sigma() const { return std::exp(log_sigma); }

double log_accept_x(const TargetDensity& target, double temperature, double x, double x_prop) {
  if (!(temperature >= 1.0))
    throw std::invalid_argument("log_accept_x: temperature must be >= 1");
  return log_accept_x_from(target.log_density(x), target.log_density(x_prop), temperature);
}

double log_accept_rung(const TargetDensity& target, const TemperatureLadder& ladder,
                       const BiasState& bias, double x, int k, int k_prop) {
  const int d = ladder.size();
  if (k < 0 || k >= d) throw std::invalid_argument("log_accept_rung: k out of range");
  if (k_prop < 0 || k_prop >= d) return -std::numeric_limits<double>::infinity();
  const int dk = k_prop - k;
  if (dk != 1 && dk != -1)
    throw std::invalid_argument("log_accept_rung: k_prop must be adjacent to k");
  return log_accept_rung_from(target.log_density(x), ladder.temperature(k),
                              ladder.temperature(k_prop), bias.biased_log_weight(k),
                              bias.biased_log_weight(k_prop));
}

double propose_x(double x, double sigma, RngStream& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("propose_x: sigma must be >= 0");
  return x + sigma * rng.normal();
}

void adapt_scale(ProposalState& p, double alpha, long t) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("adapt_scale: alpha must lie in [0, 1], got " +
                                std::to_string(alpha));
  if (t < 1) throw std::invalid_argument("adapt_scale: t must be >= 1");
  const double rho = std::pow(static_cast<double>(t), -p.adapt_rate_exponent);
  p.log_sigma += rho * (alpha - p.target_rate);
}

}  // namespace wlst
