#include "wlst/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wlst/format.hpp"
#include "wlst/ladder.hpp"

namespace wlst {

T0Expr T0Expr::literal(long v) {
  if (v < 1) throw std::invalid_argument("T0Expr: t0 must be >= 1");
  T0Expr e;
  e.kind = Kind::literal;
  e.value = v;
  return e;
}

T0Expr T0Expr::quarter_n() {
  T0Expr e;
  e.kind = Kind::quarter_n;
  return e;
}

T0Expr T0Expr::half_n() {
  T0Expr e;
  e.kind = Kind::half_n;
  return e;
}

long T0Expr::resolve(long n) const {
  switch (kind) {
    case Kind::literal:
      return value;
    case Kind::quarter_n:
      return std::max(1L, n / 4);
    case Kind::half_n:
      return std::max(1L, n / 2);
  }
  return 1;
}

std::string T0Expr::label() const {
  switch (kind) {
    case Kind::literal:
      return std::to_string(value);
    case Kind::quarter_n:
      return "N/4";
    case Kind::half_n:
      return "N/2";
  }
  return "?";
}

RunConfig VariantSpec::to_run_config(long n, std::uint64_t seed) const {
  RunConfig cfg;
  cfg.target = GaussianMixture::bimodal_benchmark();
  cfg.temperatures = TemperatureLadder::arithmetic(10.0, 10).temperatures();
  switch (algorithm) {
    case Algorithm::plain_st:
      cfg.schedule.reset();
      break;
    case Algorithm::sa_deterministic:
      cfg.schedule = StepSchedule::deterministic(t0.resolve(n));
      break;
    case Algorithm::wang_landau:
      cfg.schedule = StepSchedule::flat_histogram(c);
      break;
  }
  cfg.sigma0 = 10.0;
  cfg.adapt = adaptive_proposal;
  cfg.iterations = n;
  cfg.particles = particles;
  cfg.seed = seed;
  cfg.init = InitSpec::normal(0.0, 1.0);
  cfg.rung_init = RungInit::cold;
  cfg.record_stride = 1;
  cfg.store_trace = false;
  cfg.split.enabled = split;
  return cfg;
}

double rmse(const std::vector<double>& estimates, double true_mean) {
  if (estimates.empty()) throw std::invalid_argument("rmse: at least one estimate required");
  double ss = 0.0;
  for (const double e : estimates) {
    const double d = e - true_mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(estimates.size()));
}

std::vector<BenchResult> run_benchmark_with(const RunFn& runner,
                                            const std::vector<VariantSpec>& variants,
                                            const std::vector<long>& n_grid, int replicates,
                                            std::uint64_t base_seed) {
  if (variants.empty()) throw std::invalid_argument("run_benchmark: no variants");
  if (n_grid.empty()) throw std::invalid_argument("run_benchmark: empty N grid");
  for (const long n : n_grid) {
    if (n < 1) throw std::invalid_argument("run_benchmark: every N must be >= 1");
  }
  if (replicates < 1) throw std::invalid_argument("run_benchmark: replicates must be >= 1");
  std::set<std::string> names;
  for (const auto& v : variants) {
    if (v.name.empty() || v.name.find(',') != std::string::npos ||
        v.name.find('\n') != std::string::npos) {
      throw std::invalid_argument("run_benchmark: variant names must be non-empty and CSV-safe");
    }
    if (!names.insert(v.name).second) {
      throw std::invalid_argument("run_benchmark: duplicate variant name '" + v.name + "'");
    }
  }

  std::vector<BenchResult> results;
  results.reserve(variants.size() * n_grid.size());
  for (const auto& v : variants) {
    for (const long n : n_grid) {
      BenchResult res;
      res.variant = v.name;
      res.n = n;
      res.replicates = replicates;
      res.particles = v.particles;
      res.estimates.reserve(static_cast<std::size_t>(replicates));
      double wall = 0.0;
      for (int r = 0; r < replicates; ++r) {
        const RunConfig cfg = v.to_run_config(n, base_seed + static_cast<std::uint64_t>(r));
        Summary s;
        try {
          s = runner(cfg);
        } catch (const std::exception& e) {
          throw std::runtime_error("bench: variant '" + v.name + "' N=" + std::to_string(n) +
                                   " replicate " + std::to_string(r) + ": " + e.what());
        }
        if (std::isnan(s.posterior_mean)) {
          throw std::runtime_error("bench: variant '" + v.name + "' N=" + std::to_string(n) +
                                   " replicate " + std::to_string(r) + ": no T=1 samples");
        }
        res.estimates.push_back(s.posterior_mean);
        wall += s.wall_clock_s;
      }
      res.rmse = rmse(res.estimates, 0.0);
      res.mean_wall_clock_s = wall / static_cast<double>(replicates);
      results.push_back(std::move(res));
    }
  }
  return results;
}

std::vector<BenchResult> run_benchmark(const std::vector<VariantSpec>& variants,
                                       const std::vector<long>& n_grid, int replicates,
                                       std::uint64_t base_seed) {
  return run_benchmark_with([](const RunConfig& cfg) { return run(cfg).summary; }, variants,
                            n_grid, replicates, base_seed);
}

namespace {

std::vector<std::string> figure_variant_names(const std::string& figure) {
  std::vector<VariantSpec> set;
  if (figure == "schedules") {
    set = schedule_figure_variants();
  } else if (figure == "adaptive") {
    set = adaptive_figure_variants();
  } else {
    throw std::invalid_argument("figure must be 'schedules' or 'adaptive', got '" + figure + "'");
  }
  std::vector<std::string> names;
  names.reserve(set.size());
  for (const auto& v : set) names.push_back(v.name);
  return names;
}

}  // namespace

FigureTable figure_data(const std::vector<BenchResult>& results, const std::string& figure) {
  const std::vector<std::string> names = figure_variant_names(figure);

  std::set<long> n_seen;
  std::map<std::pair<std::string, long>, const BenchResult*> cell;
  for (const auto& r : results) {
    if (std::find(names.begin(), names.end(), r.variant) == names.end()) continue;
    n_seen.insert(r.n);
    cell[{r.variant, r.n}] = &r;
  }

  FigureTable table;
  std::ostringstream os;
  os << "figure,variant,N,rmse,runtime_s\n";
  std::vector<std::string> sorted_names = names;
  std::sort(sorted_names.begin(), sorted_names.end());
  for (const auto& name : sorted_names) {
    for (const long n : n_seen) {
      const auto it = cell.find({name, n});
      if (it == cell.end()) {
        table.missing.push_back(name + " N=" + std::to_string(n));
        continue;
      }
      const BenchResult& r = *it->second;
      os << figure << ',' << name << ',' << n << ',' << g17(r.rmse) << ','
         << g17(r.mean_wall_clock_s) << '\n';
    }
  }
  table.csv = os.str();
  return table;
}

std::string speedup_report(const std::vector<BenchResult>& results) {
  std::set<long> n_values;
  for (const auto& r : results) n_values.insert(r.n);
  std::ostringstream os;
  char buf[160];
  for (const long n : n_values) {
    std::vector<const BenchResult*> group;
    for (const auto& r : results) {
      if (r.n == n) group.push_back(&r);
    }
    std::stable_sort(group.begin(), group.end(),
                     [](const BenchResult* a, const BenchResult* b) {
                       return a->particles < b->particles;
                     });
    const BenchResult* base = nullptr;
    for (const auto* r : group) {
      if (r->particles == 1) {
        base = r;
        break;
      }
    }
    if (!base) {
      throw std::invalid_argument("speedup_report: missing M=1 baseline for N=" +
                                  std::to_string(n));
    }
    os << "N = " << n << '\n';
    os << "  M      rmse   rmse_ratio   ideal   time_ratio\n";
    for (const auto* r : group) {
      const double rr = r->rmse / base->rmse;
      const double ideal = 1.0 / std::sqrt(static_cast<double>(r->particles));
      const double tr = r->mean_wall_clock_s / base->mean_wall_clock_s;
      std::snprintf(buf, sizeof buf, "%3d  %8.4f   %10.3f   %5.3f   %10.3f\n", r->particles,
                    r->rmse, rr, ideal, tr);
      os << buf;
    }
  }
  return os.str();
}

std::vector<VariantSpec> schedule_figure_variants() {
  std::vector<VariantSpec> out;
  VariantSpec v;
  v.adaptive_proposal = true;
  v.particles = 1;

  v.name = "plain_st";
  v.algorithm = Algorithm::plain_st;
  out.push_back(v);

  v.algorithm = Algorithm::sa_deterministic;
  v.name = "sa_t0_1";
  v.t0 = T0Expr::literal(1);
  out.push_back(v);
  v.name = "sa_t0_N4";
  v.t0 = T0Expr::quarter_n();
  out.push_back(v);
  v.name = "sa_t0_N2";
  v.t0 = T0Expr::half_n();
  out.push_back(v);

  v.algorithm = Algorithm::wang_landau;
  v.t0 = T0Expr::literal(1);
  v.name = "wl_c_0.01";
  v.c = 0.01;
  out.push_back(v);
  v.name = "wl_c_0.1";
  v.c = 0.1;
  out.push_back(v);
  v.name = "wl_c_0.5";
  v.c = 0.5;
  out.push_back(v);
  return out;
}

std::vector<VariantSpec> adaptive_figure_variants() {
  std::vector<VariantSpec> out;
  VariantSpec v;
  v.particles = 1;

  v.name = "wl_adaptive";
  v.algorithm = Algorithm::wang_landau;
  v.c = 0.1;
  v.adaptive_proposal = true;
  out.push_back(v);
  v.name = "wl_fixed";
  v.adaptive_proposal = false;
  out.push_back(v);

  v.algorithm = Algorithm::plain_st;
  v.name = "st_adaptive";
  v.adaptive_proposal = true;
  out.push_back(v);
  v.name = "st_fixed";
  v.adaptive_proposal = false;
  out.push_back(v);
  return out;
}

std::vector<VariantSpec> scaling_variants() {
  std::vector<VariantSpec> out;
  VariantSpec v;
  v.algorithm = Algorithm::wang_landau;
  v.c = 0.1;
  v.adaptive_proposal = true;
  for (const int m : {1, 10, 100}) {
    v.name = "wl_m" + std::to_string(m);
    v.particles = m;
    out.push_back(v);
  }
  return out;
}

void write_results_csv(std::ostream& os, const std::vector<BenchResult>& results) {
  os << "variant,N,replicates,particles,rmse\n";
  for (const auto& r : results) {
    os << r.variant << ',' << r.n << ',' << r.replicates << ',' << r.particles << ','
       << g17(r.rmse) << '\n';
  }
}

void write_timings_csv(std::ostream& os, const std::vector<BenchResult>& results) {
  os << "variant,N,mean_wall_clock_s\n";
  for (const auto& r : results) {
    os << r.variant << ',' << r.n << ',' << g17(r.mean_wall_clock_s) << '\n';
  }
}

void write_estimates_csv(std::ostream& os, const std::vector<BenchResult>& results) {
  os << "variant,N,replicate,estimate\n";
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.estimates.size(); ++i) {
      os << r.variant << ',' << r.n << ',' << i << ',' << g17(r.estimates[i]) << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void csv_fail(const std::string& origin, int line, const std::string& msg) {
  throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_csv_double(const std::string& origin, int line, const std::string& raw) {
  try {
    std::size_t idx = 0;
    const double v = std::stod(raw, &idx);
    if (idx != raw.size()) csv_fail(origin, line, "bad number '" + raw + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    csv_fail(origin, line, "bad number '" + raw + "'");
  }
}

long parse_csv_long(const std::string& origin, int line, const std::string& raw) {
  try {
    std::size_t idx = 0;
    const long v = std::stol(raw, &idx);
    if (idx != raw.size()) csv_fail(origin, line, "bad integer '" + raw + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    csv_fail(origin, line, "bad integer '" + raw + "'");
  }
}

}  // namespace

std::vector<BenchResult> read_results_csv(std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line) || line != "variant,N,replicates,particles,rmse") {
    csv_fail(origin, 1, "expected header 'variant,N,replicates,particles,rmse'");
  }
  ++lineno;
  std::vector<BenchResult> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 5) csv_fail(origin, lineno, "expected 5 fields");
    BenchResult r;
    r.variant = f[0];
    r.n = parse_csv_long(origin, lineno, f[1]);
    r.replicates = static_cast<int>(parse_csv_long(origin, lineno, f[2]));
    r.particles = static_cast<int>(parse_csv_long(origin, lineno, f[3]));
    r.rmse = parse_csv_double(origin, lineno, f[4]);
    out.push_back(std::move(r));
  }
  return out;
}

void read_timings_csv(std::istream& in, const std::string& origin,
                      std::vector<BenchResult>& results) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line) || line != "variant,N,mean_wall_clock_s") {
    csv_fail(origin, 1, "expected header 'variant,N,mean_wall_clock_s'");
  }
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 3) csv_fail(origin, lineno, "expected 3 fields");
    const long n = parse_csv_long(origin, lineno, f[1]);
    const double w = parse_csv_double(origin, lineno, f[2]);
    for (auto& r : results) {
      if (r.variant == f[0] && r.n == n) r.mean_wall_clock_s = w;
    }
  }
}

}  // namespace wlst
