#include "wlst/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "wlst/format.hpp"

namespace wlst {

InitSpec InitSpec::normal(double mean, double sd) {
  InitSpec s;
  s.kind = Kind::normal;
  s.mean = mean;
  s.sd = sd;
  return s;
}

InitSpec InitSpec::point(double value) {
  InitSpec s;
  s.kind = Kind::point;
  s.value = value;
  return s;
}

void RunConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("engine.iterations must be >= 1");
  if (particles < 1) throw std::invalid_argument("engine.particles must be >= 1");
  if (record_stride < 1) throw std::invalid_argument("engine.record_stride must be >= 1");
  if (trailing_window < 1) throw std::invalid_argument("engine.trailing_window must be >= 1");
  if (threads < 1) throw std::invalid_argument("engine.threads must be >= 1");
  if (init.kind == InitSpec::Kind::normal && !(init.sd > 0.0)) {
    throw std::invalid_argument("engine.init_sd must be > 0");
  }
  if (!(sigma0 > 0.0)) throw std::invalid_argument("proposal.sigma0 must be > 0");
  if (!(target_rate > 0.0 && target_rate < 1.0)) {
    throw std::invalid_argument("proposal.target_rate must lie in (0, 1)");
  }
  if (!(adapt_exponent > 0.5 && adapt_exponent <= 1.0)) {
    throw std::invalid_argument("proposal.adapt_exponent must lie in (0.5, 1]");
  }
  try {
    TemperatureLadder probe(temperatures);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("ladder.temperatures: ") + e.what());
  }
  if (schedule) {
    try {
      schedule->validate();
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("schedule: ") + e.what());
    }
  }
  try {
    split.validate(static_cast<int>(temperatures.size()));
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("split: ") + e.what());
  }
  if (split_check_every < 0) throw std::invalid_argument("split.check_every must be >= 0");
  if (split.enabled && split_window < 16) {
    throw std::invalid_argument("split.window must be >= 16");
  }
}

const char* Trace::csv_header() { return "t,particle,x,rung,acc_x,acc_rung,sigma,gamma,fh_events"; }

void Trace::write_csv(std::ostream& os) const {
  os << csv_header() << '\n';
  for (const auto& r : records) {
    os << r.t << ',' << r.particle << ',' << g17(r.x) << ',' << r.rung << ','
       << (r.accepted_x ? 1 : 0) << ',' << (r.accepted_rung ? 1 : 0) << ',' << g17(r.sigma) << ','
       << g17(r.gamma) << ',' << r.fh_events << '\n';
  }
}

double posterior_mean(const Trace& trace) {
  long long n = 0;
  double sum = 0.0;
  for (const auto& r : trace.records) {
    if (r.rung == 0) {
      ++n;
      sum += r.x;
    }
  }
  if (n == 0) throw std::runtime_error("no T=1 samples");
  return sum / static_cast<double>(n);
}

void Summary::write(std::ostream& os) const {
  os << "iterations = " << iterations << '\n';
  os << "particles = " << particles << '\n';
  os << "seed = " << seed << '\n';
  os << "rungs = " << temperatures.size() << '\n';
  os << "sigma_final = " << g17(sigma_final) << '\n';
  os << "fh_events = " << fh_events << '\n';
  os << "acc_x_rate = " << g17(acc_x_rate) << '\n';
  os << "acc_rung_rate = " << g17(acc_rung_rate) << '\n';
  os << "trailing_acc_x = " << g17(trailing_acc_x) << '\n';
  os << "n_cold_samples = " << n_cold_samples << '\n';
  os << "posterior_mean = " << g17(posterior_mean) << '\n';
  os << "wall_clock_s = " << g17(wall_clock_s) << '\n';
  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    os << "temperature_" << i << " = " << g17(temperatures[i]) << '\n';
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    os << "theta_" << i << " = " << g17(theta[i]) << '\n';
  }
  for (std::size_t i = 0; i < occupation.size(); ++i) {
    os << "occupation_" << i << " = " << g17(occupation[i]) << '\n';
  }
}

namespace {
const RunConfig& validated(const RunConfig& cfg) {
  cfg.validate();
  return cfg;
}
}  // namespace

Engine::Engine(const RunConfig& cfg)
    : cfg_(validated(cfg)),
      ladder_(cfg_.temperatures),
      bias_(static_cast<int>(cfg_.temperatures.size())),
      proposal_(ProposalState::with_sigma(cfg_.sigma0, cfg_.target_rate, cfg_.adapt_exponent)),
      tracker_(static_cast<int>(cfg_.temperatures.size()), cfg_.split_window),
      engine_rng_(cfg_.seed, 0) {
  const int m = cfg_.particles;
  const int d = ladder_.size();
  streams_.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    streams_.emplace_back(cfg_.seed, static_cast<std::uint64_t>(i) + 1);
  }
  particles_.resize(static_cast<std::size_t>(m));
  log_pi_.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& p = particles_[static_cast<std::size_t>(i)];
    if (cfg_.init.kind == InitSpec::Kind::normal) {
      p.x = cfg_.init.mean + cfg_.init.sd * streams_[static_cast<std::size_t>(i)].normal();
    } else {
      p.x = cfg_.init.value;
    }
    p.rung = (cfg_.rung_init == RungInit::cold)
                 ? 0
                 : streams_[static_cast<std::size_t>(i)].uniform_int(d);
    log_pi_[static_cast<std::size_t>(i)] = cfg_.target.log_density(p.x);
  }
  bias_weight_.resize(static_cast<std::size_t>(d));
  rung_hits_.assign(static_cast<std::size_t>(d), 0);
  alpha_.assign(static_cast<std::size_t>(m), 0.0);
  acc_x_.assign(static_cast<std::size_t>(m), 0);
  acc_rung_.assign(static_cast<std::size_t>(m), 0);
  occupation_.assign(static_cast<std::size_t>(d), 0);
  trail_.assign(static_cast<std::size_t>(cfg_.trailing_window), 0.0);
  if (cfg_.store_trace) {
    const long long n_records =
        static_cast<long long>(m) * (cfg_.iterations / cfg_.record_stride);
    if (n_records > 0 && n_records <= (1LL << 26)) {
      trace_.records.reserve(static_cast<std::size_t>(n_records));
    }
  }
}

void Engine::move_range(int lo, int hi, bool do_x, bool do_rung, double sigma) {
  const int d = ladder_.size();
  const std::vector<double>& temps = ladder_.temperatures();
  for (int ii = lo; ii < hi; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    RngStream& rng = streams_[i];
    ParticleState& p = particles_[i];
    double lp = log_pi_[i];
    char ax = 0;
    char ar = 0;
    double alpha = 0.0;
    if (do_x) {
      const double xp = propose_x(p.x, sigma, rng);
      const double lpp = cfg_.target.log_density(xp);
      const double la = log_accept_x_from(lp, lpp, temps[static_cast<std::size_t>(p.rung)]);
      alpha = std::exp(la);
      const double u = rng.uniform();
      if (u < alpha) {
        p.x = xp;
        lp = lpp;
        ax = 1;
      }
    }
    if (do_rung) {
      const double u_dir = rng.uniform();
      const int kp = p.rung + (u_dir < 0.5 ? -1 : 1);
      double la;
      if (kp < 0 || kp >= d) {
        la = -std::numeric_limits<double>::infinity();
      } else {
        la = log_accept_rung_from(lp, temps[static_cast<std::size_t>(p.rung)],
                                  temps[static_cast<std::size_t>(kp)],
                                  bias_weight_[static_cast<std::size_t>(p.rung)],
                                  bias_weight_[static_cast<std::size_t>(kp)]);
      }
      const double u = rng.uniform();
      if (u < std::exp(la)) {
        p.rung = kp;
        ar = 1;
      }
    }
    log_pi_[i] = lp;
    alpha_[i] = alpha;
    acc_x_[i] = ax;
    acc_rung_[i] = ar;
  }
}

void Engine::apply_split(const SplitResult& res) {
  bias_.remap_on_split(res.mapping, res.parent_rung, res.new_rung);
  tracker_.on_split(res.mapping, res.new_rung);
  for (auto& p : particles_) p.rung = res.mapping[static_cast<std::size_t>(p.rung)];
  const auto d_new = static_cast<std::size_t>(ladder_.size());
  std::vector<long long> occ(d_new, 0);
  for (std::size_t k = 0; k < res.mapping.size(); ++k) {
    occ[static_cast<std::size_t>(res.mapping[k])] = occupation_[k];
  }
  occupation_ = std::move(occ);
  bias_weight_.resize(d_new);
  rung_hits_.resize(d_new);
}

void Engine::sweep() {
  const long t = t_ + 1;
  bool do_x = true;
  bool do_rung = true;
  if (cfg_.composition == MoveComposition::x_only) {
    do_rung = false;
  } else if (cfg_.composition == MoveComposition::alternate) {
    do_x = (t % 2) == 1;
    do_rung = !do_x;
  }

  const int m = cfg_.particles;
  const int d = ladder_.size();
  const double sigma = proposal_.sigma();
  for (int k = 0; k < d; ++k) {
    bias_weight_[static_cast<std::size_t>(k)] = bias_.biased_log_weight(k);
  }

  const int workers = std::min(cfg_.threads, m);
  if (workers <= 1) {
    move_range(0, m, do_x, do_rung, sigma);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const int chunk = (m + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(m, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(
          [this, lo, hi, do_x, do_rung, sigma] { move_range(lo, hi, do_x, do_rung, sigma); });
    }
    for (auto& th : pool) th.join();
  }

  // barrier: single logical writer below
  std::fill(rung_hits_.begin(), rung_hits_.end(), 0L);
  for (int i = 0; i < m; ++i) ++rung_hits_[static_cast<std::size_t>(particles_[static_cast<std::size_t>(i)].rung)];
  for (int k = 0; k < d; ++k) occupation_[static_cast<std::size_t>(k)] += rung_hits_[static_cast<std::size_t>(k)];

  double gamma = 0.0;
  bool fh_fired = false;
  if (cfg_.schedule) {
    gamma = step_size(*cfg_.schedule, t, bias_.fh_events());
    bias_.update(rung_hits_, m, gamma);
    if (cfg_.schedule->kind == StepSchedule::Kind::flat_histogram &&
        flat_histogram_met(bias_.nu_counts(), cfg_.schedule->c)) {
      bias_.note_flat_histogram();
      fh_fired = true;
    }
  }

  if (do_x) {
    long acc = 0;
    double alpha_sum = 0.0;
    for (int i = 0; i < m; ++i) {
      acc += acc_x_[static_cast<std::size_t>(i)];
      alpha_sum += alpha_[static_cast<std::size_t>(i)];
    }
    acc_x_total_ += acc;
    moves_x_total_ += m;
    trail_[static_cast<std::size_t>(trail_n_ % cfg_.trailing_window)] =
        static_cast<double>(acc) / static_cast<double>(m);
    ++trail_n_;
    if (cfg_.adapt) adapt_scale(proposal_, alpha_sum / static_cast<double>(m), t);
  }
  if (do_rung) {
    long acc = 0;
    for (int i = 0; i < m; ++i) acc += acc_rung_[static_cast<std::size_t>(i)];
    acc_rung_total_ += acc;
    moves_rung_total_ += m;
  }

  if (cfg_.split.enabled) {
    for (const auto& p : particles_) tracker_.observe(p.rung, std::abs(p.x));
    const bool check =
        (cfg_.split_check_every > 0) ? (t % cfg_.split_check_every == 0) : fh_fired;
    if (check) {
      const SplitResult res = maybe_split(ladder_, cfg_.split, tracker_.half_counts());
      if (res.split_occurred) {
        apply_split(res);
      } else {
        tracker_.refresh();
      }
    }
  }

  if (t % cfg_.record_stride == 0) {
    const double sigma_now = proposal_.sigma();
    const int fh_now = bias_.fh_events();
    for (int i = 0; i < m; ++i) {
      const auto& p = particles_[static_cast<std::size_t>(i)];
      if (p.rung == 0) {
        ++cold_n_;
        cold_sum_ += p.x;
      }
      if (cfg_.store_trace) {
        trace_.records.push_back({t, i, p.x, p.rung, acc_x_[static_cast<std::size_t>(i)] != 0,
                                  acc_rung_[static_cast<std::size_t>(i)] != 0, sigma_now, gamma,
                                  fh_now});
      }
    }
  }
  t_ = t;
}

Summary Engine::summarize(double wall_clock_s) const {
  Summary s;
  s.iterations = t_;
  s.particles = cfg_.particles;
  s.seed = cfg_.seed;
  s.sigma_final = proposal_.sigma();
  s.fh_events = bias_.fh_events();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.acc_x_rate =
      moves_x_total_ > 0 ? static_cast<double>(acc_x_total_) / static_cast<double>(moves_x_total_)
                         : nan;
  s.acc_rung_rate = moves_rung_total_ > 0 ? static_cast<double>(acc_rung_total_) /
                                                static_cast<double>(moves_rung_total_)
                                          : nan;
  const long long live = std::min<long long>(trail_n_, cfg_.trailing_window);
  if (live > 0) {
    double sum = 0.0;
    for (long long i = 0; i < live; ++i) sum += trail_[static_cast<std::size_t>(i)];
    s.trailing_acc_x = sum / static_cast<double>(live);
  } else {
    s.trailing_acc_x = nan;
  }
  s.n_cold_samples = cold_n_;
  s.posterior_mean = cold_n_ > 0 ? cold_sum_ / static_cast<double>(cold_n_) : nan;
  s.wall_clock_s = wall_clock_s;
  s.temperatures = ladder_.temperatures();
  s.theta = bias_.thetas();
  long long total = 0;
  for (const long long n : occupation_) total += n;
  s.occupation.resize(occupation_.size());
  for (std::size_t k = 0; k < occupation_.size(); ++k) {
    s.occupation[k] =
        total > 0 ? static_cast<double>(occupation_[k]) / static_cast<double>(total) : 0.0;
  }
  return s;
}

Trace Engine::release_trace() {
  trace_.final_log_theta = bias_.log_thetas();
  trace_.final_temperatures = ladder_.temperatures();
  return std::move(trace_);
}

RunResult run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Engine engine(cfg);
  for (long t = 0; t < cfg.iterations; ++t) engine.sweep();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  RunResult out;
  out.summary = engine.summarize(elapsed.count());
  out.trace = engine.release_trace();
  return out;
}

}  // namespace wlst
