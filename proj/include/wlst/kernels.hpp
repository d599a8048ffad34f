#pragma once

#include "wlst/bias.hpp"
#include "wlst/ladder.hpp"
#include "wlst/rng.hpp"
#include "wlst/target.hpp"

namespace wlst {

// Random-walk proposal scale (log domain) plus the adaptation targets.
// Shared by all rungs and all particles; mutated only at engine barriers.
struct ProposalState {
  double log_sigma = 0.0;
  double target_rate = 0.234;
  double adapt_rate_exponent = 0.6;

  static ProposalState with_sigma(double sigma, double target_rate = 0.234,
                                  double adapt_rate_exponent = 0.6);

  double sigma() const;
};

// Per-particle record of one sweep's moves, for diagnostics and adaptation.
struct MoveOutcome {
  double new_x = 0.0;
  int new_rung = 0;
  bool accepted_x = false;
  bool accepted_rung = false;
  double log_alpha_x = 0.0;     // <= 0
  double log_alpha_rung = 0.0;  // <= 0; -inf when the proposal left the ladder
};

// Log acceptance probability of a symmetric within-rung move on the
// tempered target: min(0, (log pi(x') - log pi(x)) / T).
double log_accept_x(const TargetDensity& target, double temperature, double x, double x_prop);

// Same, from cached log densities.
inline double log_accept_x_from(double log_pi_x, double log_pi_prop, double temperature) {
  const double delta = (log_pi_prop - log_pi_x) / temperature;
  return delta < 0.0 ? delta : 0.0;
}

// Log acceptance probability of a rung move at fixed x, combining the
// tempered density ratio with the pseudo-prior weights. Proposals are the
// symmetric +/-1 steps; one that leaves the ladder returns -inf (auto
// reject), which keeps the proposal kernel symmetric with no Hastings
// correction. k_prop must be adjacent to k.
double log_accept_rung(const TargetDensity& target, const TemperatureLadder& ladder,
                       const BiasState& bias, double x, int k, int k_prop);

// Same, from the pieces; used where temperatures or weights are synthetic.
inline double log_accept_rung_from(double log_pi_x, double temp_k, double temp_prop,
                                   double bias_weight_k, double bias_weight_prop) {
  const double log_ratio =
      log_pi_x * (1.0 / temp_prop - 1.0 / temp_k) + bias_weight_prop - bias_weight_k;
  return log_ratio < 0.0 ? log_ratio : 0.0;
}

// x + sigma * z with z one standard normal draw from the stream. Exactly
// one draw is consumed even in the sigma = 0 limit.
double propose_x(double x, double sigma, RngStream& rng);

// Diminishing Robbins-Monro adaptation of the proposal scale toward the
// target acceptance rate: log sigma += t^{-exponent} * (alpha - target).
// alpha is the acceptance probability of the completed x-move (or the mean
// over particles at a barrier), in [0, 1]; t >= 1.
void adapt_scale(ProposalState& p, double alpha, long t);

}  // namespace wlst
