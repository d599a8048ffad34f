#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wlst/bench.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace wlst;

namespace {

Summary stub_summary(double estimate, double wall = 0.5) {
  Summary s;
  s.posterior_mean = estimate;
  s.wall_clock_s = wall;
  return s;
}

VariantSpec wl_variant(const std::string& name, double c = 0.1, int particles = 1) {
  VariantSpec v;
  v.name = name;
  v.algorithm = Algorithm::wang_landau;
  v.c = c;
  v.particles = particles;
  return v;
}

BenchResult make_result(const std::string& variant, long n, int particles, double rm,
                        double wall) {
  BenchResult r;
  r.variant = variant;
  r.n = n;
  r.replicates = 10;
  r.particles = particles;
  r.rmse = rm;
  r.mean_wall_clock_s = wall;
  return r;
}

std::string results_csv(const std::vector<BenchResult>& results) {
  std::ostringstream os;
  write_results_csv(os, results);
  return os.str();
}

}  // namespace

TEST_CASE("rmse definition") {
  CHECK(rmse({0.0}, 0.0) == 0.0);
  CHECK(rmse({1.0, -1.0}, 0.0) == 1.0);
  CHECK(rmse({3.0}, 3.0) == 0.0);
  CHECK(rmse({2.0, 2.0, 2.0}, 0.0) == 2.0);
  CHECK(rmse({1.0, 3.0}, 2.0) == 1.0);
  CHECK_THROWS_AS(rmse({}, 0.0), std::invalid_argument);

  // mirrors the definition on an arbitrary vector
  const std::vector<double> est = {0.3, -1.7, 2.9, 0.0, -0.4};
  double ss = 0.0;
  for (const double e : est) ss += (e - 0.25) * (e - 0.25);
  CHECK(rmse(est, 0.25) == std::sqrt(ss / 5.0));
}

TEST_CASE("t0 expressions resolve against the run length") {
  CHECK(T0Expr::literal(1).resolve(1000000) == 1);
  CHECK(T0Expr::literal(1).label() == "1");
  CHECK(T0Expr::literal(700).resolve(10) == 700);
  CHECK(T0Expr::quarter_n().resolve(10000) == 2500);
  CHECK(T0Expr::quarter_n().resolve(2) == 1);  // clamped
  CHECK(T0Expr::quarter_n().label() == "N/4");
  CHECK(T0Expr::half_n().resolve(10000) == 5000);
  CHECK(T0Expr::half_n().resolve(1) == 1);
  CHECK(T0Expr::half_n().label() == "N/2");
  CHECK_THROWS_AS(T0Expr::literal(0), std::invalid_argument);
}

TEST_CASE("variant run configs pin the benchmark protocol") {
  VariantSpec v = wl_variant("wl", 0.05, 4);
  RunConfig cfg = v.to_run_config(5000, 123);
  CHECK(cfg.iterations == 5000);
  CHECK(cfg.seed == 123);
  CHECK(cfg.particles == 4);
  REQUIRE(cfg.temperatures.size() == 10);
  CHECK(cfg.temperatures.front() == 1.0);
  CHECK(cfg.temperatures.back() == 10.0);
  REQUIRE(cfg.schedule.has_value());
  CHECK(cfg.schedule->kind == StepSchedule::Kind::flat_histogram);
  CHECK(cfg.schedule->c == 0.05);
  CHECK(cfg.sigma0 == 10.0);
  CHECK(cfg.adapt);
  CHECK(cfg.init.kind == InitSpec::Kind::normal);
  CHECK(cfg.init.mean == 0.0);
  CHECK(cfg.init.sd == 1.0);
  CHECK(cfg.rung_init == RungInit::cold);
  CHECK(cfg.record_stride == 1);
  CHECK_FALSE(cfg.store_trace);
  CHECK_FALSE(cfg.split.enabled);

  VariantSpec st;
  st.name = "st";
  st.algorithm = Algorithm::plain_st;
  st.adaptive_proposal = false;
  cfg = st.to_run_config(100, 7);
  CHECK_FALSE(cfg.schedule.has_value());
  CHECK_FALSE(cfg.adapt);

  VariantSpec sa;
  sa.name = "sa";
  sa.algorithm = Algorithm::sa_deterministic;
  sa.t0 = T0Expr::half_n();
  cfg = sa.to_run_config(10000, 7);
  REQUIRE(cfg.schedule.has_value());
  CHECK(cfg.schedule->kind == StepSchedule::Kind::deterministic);
  CHECK(cfg.schedule->t0 == 5000);
}

TEST_CASE("benchmark replicates use paired seeds across variants") {
  std::vector<std::uint64_t> seeds;
  const RunFn runner = [&seeds](const RunConfig& cfg) {
    seeds.push_back(cfg.seed);
    return stub_summary(static_cast<double>(cfg.seed));
  };
  const std::vector<VariantSpec> variants = {wl_variant("a"), wl_variant("b", 0.5)};
  const auto results = run_benchmark_with(runner, variants, {100, 200}, 3, 40);

  REQUIRE(results.size() == 4);  // 2 variants x 2 Ns
  // call order is variant-major, N inner, replicates innermost
  const std::vector<std::uint64_t> expect = {40, 41, 42, 40, 41, 42, 40, 41, 42, 40, 41, 42};
  CHECK(seeds == expect);

  // identical estimates per cell because the stub depends only on the seed
  for (const auto& r : results) {
    CHECK(r.estimates == std::vector<double>({40.0, 41.0, 42.0}));
    CHECK(r.replicates == 3);
  }
  CHECK(results[0].variant == "a");
  CHECK(results[0].n == 100);
  CHECK(results[1].n == 200);
  CHECK(results[2].variant == "b");
  // paired seeding makes the cells bitwise comparable
  CHECK(results[0].rmse == results[2].rmse);
}

TEST_CASE("benchmark rmse stub examples") {
  // single replicate estimating exactly the truth
  auto one = run_benchmark_with([](const RunConfig&) { return stub_summary(0.0); },
                                {wl_variant("v")}, {10}, 1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].rmse == 0.0);

  // two replicates at +1 / -1
  auto two = run_benchmark_with(
      [](const RunConfig& cfg) { return stub_summary(cfg.seed == 0 ? 1.0 : -1.0); },
      {wl_variant("v")}, {10}, 2, 0);
  REQUIRE(two.size() == 1);
  CHECK(two[0].estimates == std::vector<double>({1.0, -1.0}));
  CHECK(two[0].rmse == 1.0);
}

TEST_CASE("benchmark wall clocks average over replicates") {
  int call = 0;
  auto res = run_benchmark_with(
      [&call](const RunConfig&) { return stub_summary(0.0, ++call % 2 ? 1.0 : 3.0); },
      {wl_variant("v")}, {10}, 2, 1);
  CHECK(res[0].mean_wall_clock_s == 2.0);
}

TEST_CASE("benchmark surfaces replicate failures with context") {
  const RunFn nan_runner = [](const RunConfig& cfg) {
    return stub_summary(cfg.seed == 6 ? std::numeric_limits<double>::quiet_NaN() : 0.0);
  };
  try {
    run_benchmark_with(nan_runner, {wl_variant("wl_bad")}, {500}, 3, 5);
    FAIL("expected a runtime_error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("wl_bad") != std::string::npos);
    CHECK(msg.find("N=500") != std::string::npos);
    CHECK(msg.find("replicate 1") != std::string::npos);
    CHECK(msg.find("no T=1 samples") != std::string::npos);
  }

  const RunFn throwing = [](const RunConfig&) -> Summary {
    throw std::runtime_error("boom");
  };
  try {
    run_benchmark_with(throwing, {wl_variant("wl_throw")}, {10}, 1, 1);
    FAIL("expected a runtime_error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("wl_throw") != std::string::npos);
    CHECK(msg.find("boom") != std::string::npos);
  }
}

TEST_CASE("benchmark argument validation") {
  const RunFn ok = [](const RunConfig&) { return stub_summary(0.0); };
  CHECK_THROWS_AS(run_benchmark_with(ok, {}, {10}, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_benchmark_with(ok, {wl_variant("v")}, {}, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_benchmark_with(ok, {wl_variant("v")}, {0}, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_benchmark_with(ok, {wl_variant("v")}, {10}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_benchmark_with(ok, {wl_variant("v"), wl_variant("v")}, {10}, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_benchmark_with(ok, {wl_variant("a,b")}, {10}, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_benchmark_with(ok, {wl_variant("")}, {10}, 1, 1), std::invalid_argument);
}

TEST_CASE("benchmark tables are deterministic given the base seed") {
  const RunFn runner = [](const RunConfig& cfg) {
    return stub_summary(std::sin(static_cast<double>(cfg.seed)) /
                        static_cast<double>(cfg.iterations));
  };
  const std::vector<VariantSpec> variants = {wl_variant("a"), wl_variant("b", 0.5)};
  const auto r1 = run_benchmark_with(runner, variants, {100, 1000}, 5, 9);
  const auto r2 = run_benchmark_with(runner, variants, {100, 1000}, 5, 9);
  CHECK(results_csv(r1) == results_csv(r2));

  std::ostringstream e1, e2;
  write_estimates_csv(e1, r1);
  write_estimates_csv(e2, r2);
  CHECK(e1.str() == e2.str());
}

TEST_CASE("the experiment matrices are pinned") {
  const auto sched = schedule_figure_variants();
  REQUIRE(sched.size() == 7);
  CHECK(sched[0].name == "plain_st");
  CHECK(sched[0].algorithm == Algorithm::plain_st);
  CHECK(sched[1].name == "sa_t0_1");
  CHECK(sched[2].name == "sa_t0_N4");
  CHECK(sched[3].name == "sa_t0_N2");
  CHECK(sched[3].algorithm == Algorithm::sa_deterministic);
  CHECK(sched[3].t0.label() == "N/2");
  CHECK(sched[4].name == "wl_c_0.01");
  CHECK(sched[4].c == 0.01);
  CHECK(sched[5].name == "wl_c_0.1");
  CHECK(sched[6].name == "wl_c_0.5");
  CHECK(sched[6].c == 0.5);
  for (const auto& v : sched) {
    CHECK(v.particles == 1);
    CHECK(v.adaptive_proposal);
  }

  const auto adap = adaptive_figure_variants();
  REQUIRE(adap.size() == 4);
  CHECK(adap[0].name == "wl_adaptive");
  CHECK(adap[0].adaptive_proposal);
  CHECK(adap[1].name == "wl_fixed");
  CHECK_FALSE(adap[1].adaptive_proposal);
  CHECK(adap[2].name == "st_adaptive");
  CHECK(adap[2].algorithm == Algorithm::plain_st);
  CHECK(adap[3].name == "st_fixed");
  CHECK_FALSE(adap[3].adaptive_proposal);

  const auto scal = scaling_variants();
  REQUIRE(scal.size() == 3);
  CHECK(scal[0].name == "wl_m1");
  CHECK(scal[0].particles == 1);
  CHECK(scal[1].name == "wl_m10");
  CHECK(scal[1].particles == 10);
  CHECK(scal[2].name == "wl_m100");
  CHECK(scal[2].particles == 100);
}

TEST_CASE("figure_data: empty results give a header-only table") {
  const FigureTable t = figure_data({}, "adaptive");
  CHECK(t.csv == "figure,variant,N,rmse,runtime_s\n");
  CHECK(t.missing.empty());
}

TEST_CASE("figure_data: partial grids report the missing cells") {
  std::vector<BenchResult> results;
  results.push_back(make_result("wl_adaptive", 10000, 1, 0.5, 2.0));
  results.push_back(make_result("wl_adaptive", 1000, 1, 1.5, 0.2));
  results.push_back(make_result("unrelated", 1000, 1, 9.9, 9.9));

  const FigureTable t = figure_data(results, "adaptive");
  CHECK(t.csv ==
        "figure,variant,N,rmse,runtime_s\n"
        "adaptive,wl_adaptive,1000,1.5,0.20000000000000001\n"
        "adaptive,wl_adaptive,10000,0.5,2\n");
  // 3 other adaptive-figure variants x 2 Ns
  REQUIRE(t.missing.size() == 6);
  CHECK(t.missing[0] == "st_adaptive N=1000");
  CHECK(t.missing[1] == "st_adaptive N=10000");
  CHECK(t.missing[2] == "st_fixed N=1000");
  CHECK(t.missing[5] == "wl_fixed N=10000");
}

TEST_CASE("figure_data rows are sorted by variant then N") {
  std::vector<BenchResult> results;
  results.push_back(make_result("wl_c_0.1", 10000, 1, 0.3, 1.0));
  results.push_back(make_result("plain_st", 10000, 1, 3.0, 1.0));
  results.push_back(make_result("wl_c_0.1", 1000, 1, 0.9, 0.1));
  results.push_back(make_result("plain_st", 1000, 1, 4.0, 0.1));

  const FigureTable t = figure_data(results, "schedules");
  std::istringstream is(t.csv);
  std::string line;
  std::getline(is, line);  // header
  std::vector<std::string> rows;
  while (std::getline(is, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("schedules,plain_st,1000,", 0) == 0);
  CHECK(rows[1].rfind("schedules,plain_st,10000,", 0) == 0);
  CHECK(rows[2].rfind("schedules,wl_c_0.1,1000,", 0) == 0);
  CHECK(rows[3].rfind("schedules,wl_c_0.1,10000,", 0) == 0);
  // the rest of the matrix is reported missing, sorted
  CHECK(t.missing.size() == 10);  // 5 remaining variants x 2 Ns
  CHECK(t.missing.front() == "sa_t0_1 N=1000");
}

TEST_CASE("figure_data round-trips rmse at full precision") {
  std::vector<BenchResult> results;
  const double v = 0.12345678901234567;
  results.push_back(make_result("wl_adaptive", 1000, 1, v, 0.25));
  const FigureTable t = figure_data(results, "adaptive");
  std::istringstream is(t.csv);
  std::string line;
  std::getline(is, line);
  REQUIRE(std::getline(is, line));
  const std::size_t p3 = line.rfind(',');
  const std::size_t p2 = line.rfind(',', p3 - 1);
  const double parsed = std::stod(line.substr(p2 + 1, p3 - p2 - 1));
  CHECK(parsed == v);
}

TEST_CASE("figure_data rejects unknown figures") {
  CHECK_THROWS_AS(figure_data({}, "scaling"), std::invalid_argument);
  CHECK_THROWS_AS(figure_data({}, ""), std::invalid_argument);
}

TEST_CASE("speedup report: equal wall clocks give unit time ratios") {
  std::vector<BenchResult> results;
  results.push_back(make_result("wl_m1", 1000, 1, 2.0, 4.0));
  results.push_back(make_result("wl_m10", 1000, 10, 0.6324555320336759, 4.0));
  results.push_back(make_result("wl_m100", 1000, 100, 0.2, 4.0));

  const std::string rep = speedup_report(results);
  CHECK(rep.find("N = 1000") != std::string::npos);
  CHECK(rep.find("rmse_ratio") != std::string::npos);

  std::istringstream is(rep);
  std::string line;
  std::getline(is, line);  // N = 1000
  std::getline(is, line);  // column header
  int m;
  double rm, ratio, ideal, tratio;
  std::getline(is, line);
  REQUIRE(std::sscanf(line.c_str(), "%d %lf %lf %lf %lf", &m, &rm, &ratio, &ideal, &tratio) == 5);
  CHECK(m == 1);
  CHECK(ratio == doctest::Approx(1.0));
  CHECK(ideal == doctest::Approx(1.0));
  CHECK(tratio == doctest::Approx(1.0));
  std::getline(is, line);
  REQUIRE(std::sscanf(line.c_str(), "%d %lf %lf %lf %lf", &m, &rm, &ratio, &ideal, &tratio) == 5);
  CHECK(m == 10);
  CHECK(ideal == doctest::Approx(0.316));
  CHECK(ratio == doctest::Approx(0.316).epsilon(0.01));
  CHECK(tratio == doctest::Approx(1.0));
  std::getline(is, line);
  REQUIRE(std::sscanf(line.c_str(), "%d %lf %lf %lf %lf", &m, &rm, &ratio, &ideal, &tratio) == 5);
  CHECK(m == 100);
  CHECK(ideal == doctest::Approx(0.1));
  CHECK(tratio == doctest::Approx(1.0));
}

TEST_CASE("speedup report groups by N and needs a baseline") {
  std::vector<BenchResult> results;
  results.push_back(make_result("wl_m1", 1000, 1, 2.0, 1.0));
  results.push_back(make_result("wl_m10", 1000, 10, 0.7, 1.0));
  results.push_back(make_result("wl_m1", 2000, 1, 1.5, 2.0));
  results.push_back(make_result("wl_m10", 2000, 10, 0.5, 2.0));
  const std::string rep = speedup_report(results);
  CHECK(rep.find("N = 1000") != std::string::npos);
  CHECK(rep.find("N = 2000") != std::string::npos);

  std::vector<BenchResult> nobase;
  nobase.push_back(make_result("wl_m10", 1000, 10, 0.7, 1.0));
  CHECK_THROWS_AS(speedup_report(nobase), std::invalid_argument);
}

TEST_CASE("results CSV round-trips bitwise") {
  std::vector<BenchResult> results;
  results.push_back(make_result("wl_c_0.1", 1000, 1, 0.12345678901234567, 3.25));
  results.push_back(make_result("plain_st", 100000, 1, 2.7182818284590452, 0.125));

  const std::string csv = results_csv(results);
  std::istringstream is(csv);
  const auto parsed = read_results_csv(is, "mem");
  REQUIRE(parsed.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(parsed[i].variant == results[i].variant);
    CHECK(parsed[i].n == results[i].n);
    CHECK(parsed[i].replicates == results[i].replicates);
    CHECK(parsed[i].particles == results[i].particles);
    CHECK(parsed[i].rmse == results[i].rmse);
    CHECK(parsed[i].estimates.empty());
  }
  // writing the parsed results reproduces the file byte for byte
  CHECK(results_csv(parsed) == csv);
}

TEST_CASE("timings CSV joins onto parsed results") {
  std::vector<BenchResult> results;
  results.push_back(make_result("a", 100, 1, 1.0, 0.75));
  results.push_back(make_result("b", 100, 1, 2.0, 1.5));

  std::ostringstream t;
  write_timings_csv(t, results);

  std::istringstream rin(results_csv(results));
  auto parsed = read_results_csv(rin, "mem");
  CHECK(parsed[0].mean_wall_clock_s == 0.0);
  std::istringstream tin(t.str());
  read_timings_csv(tin, "mem", parsed);
  CHECK(parsed[0].mean_wall_clock_s == 0.75);
  CHECK(parsed[1].mean_wall_clock_s == 1.5);
}

TEST_CASE("estimates CSV lists every replicate in order") {
  BenchResult r = make_result("v", 10, 1, 0.0, 0.0);
  r.estimates = {0.5, -0.25, 0.125};
  std::ostringstream os;
  write_estimates_csv(os, {r});
  CHECK(os.str() ==
        "variant,N,replicate,estimate\n"
        "v,10,0,0.5\n"
        "v,10,1,-0.25\n"
        "v,10,2,0.125\n");
}

TEST_CASE("CSV readers reject malformed input with the line number") {
  std::istringstream bad_header("wrong\n");
  CHECK_THROWS_AS(read_results_csv(bad_header, "f.csv"), std::invalid_argument);
  try {
    std::istringstream h("wrong\n");
    read_results_csv(h, "f.csv");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("f.csv:1") != std::string::npos);
  }

  std::istringstream short_row("variant,N,replicates,particles,rmse\nv,10,1\n");
  try {
    read_results_csv(short_row, "f.csv");
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("f.csv:2") != std::string::npos);
    CHECK(std::string(e.what()).find("expected 5 fields") != std::string::npos);
  }

  std::istringstream bad_number("variant,N,replicates,particles,rmse\nv,10,1,1,abc\n");
  CHECK_THROWS_AS(read_results_csv(bad_number, "f.csv"), std::invalid_argument);

  std::vector<BenchResult> sink;
  std::istringstream bad_timing_header("nope\n");
  CHECK_THROWS_AS(read_timings_csv(bad_timing_header, "t.csv", sink), std::invalid_argument);
}

TEST_CASE("a tiny real benchmark is reproducible end to end") {
  const std::vector<VariantSpec> variants = {wl_variant("wl_small", 0.5)};
  const auto r1 = run_benchmark(variants, {60}, 3, 4);
  const auto r2 = run_benchmark(variants, {60}, 3, 4);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].replicates == 3);
  CHECK(r1[0].estimates.size() == 3);
  CHECK(std::isfinite(r1[0].rmse));
  CHECK(results_csv(r1) == results_csv(r2));
  CHECK(r1[0].estimates == r2[0].estimates);
}
