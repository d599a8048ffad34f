#include "wlst/config.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace wlst {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
  bool consumed = false;
};

struct Ini {
  std::string origin;
  std::vector<Entry> entries;
  std::vector<std::pair<std::string, int>> sections;  // in file order

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
  }

  Entry* find(const std::string& section, const std::string& key) {
    for (auto& e : entries) {
      if (e.section == section && e.key == key) return &e;
    }
    return nullptr;
  }

  std::optional<std::string> take(const std::string& section, const std::string& key) {
    Entry* e = find(section, key);
    if (!e) return std::nullopt;
    e->consumed = true;
    return e->value;
  }

  // Every remaining entry or section is unknown; report the first in file order.
  void finish(const std::vector<std::string>& known_sections) const {
    for (const auto& [name, line] : sections) {
      bool known = false;
      for (const auto& k : known_sections) {
        if (k == name) {
          known = true;
          break;
        }
      }
      if (!known) fail(line, "unknown section [" + name + "]");
    }
    for (const auto& e : entries) {
      if (!e.consumed) fail(e.line, "unknown key '" + e.key + "' in [" + e.section + "]");
    }
  }
};

Ini parse_ini(std::istream& in, const std::string& origin) {
  Ini ini;
  ini.origin = origin;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') ini.fail(lineno, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) ini.fail(lineno, "empty section name");
      ini.sections.emplace_back(section, lineno);
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) ini.fail(lineno, "expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) ini.fail(lineno, "empty key");
    if (section.empty()) ini.fail(lineno, "key '" + key + "' appears before any [section]");
    for (const auto& e : ini.entries) {
      if (e.section == section && e.key == key) {
        ini.fail(lineno, "duplicate key '" + key + "' in [" + section + "]");
      }
    }
    ini.entries.push_back({section, key, value, lineno, false});
  }
  return ini;
}

[[noreturn]] void bad_value(const Ini& ini, const std::string& section, const std::string& key,
                            const std::string& expected, const std::string& got) {
  throw ConfigError(ini.origin + ": " + section + "." + key + ": expected " + expected +
                    ", got '" + got + "'");
}

double parse_double(const Ini& ini, const std::string& section, const std::string& key,
                    const std::string& raw) {
  try {
    std::size_t idx = 0;
    const double v = std::stod(raw, &idx);
    if (idx != raw.size()) bad_value(ini, section, key, "a number", raw);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(ini, section, key, "a number", raw);
  }
}

long parse_long(const Ini& ini, const std::string& section, const std::string& key,
                const std::string& raw) {
  try {
    std::size_t idx = 0;
    const long v = std::stol(raw, &idx);
    if (idx != raw.size()) bad_value(ini, section, key, "an integer", raw);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(ini, section, key, "an integer", raw);
  }
}

std::uint64_t parse_u64(const Ini& ini, const std::string& section, const std::string& key,
                        const std::string& raw) {
  if (!raw.empty() && raw[0] == '-') {
    bad_value(ini, section, key, "a non-negative integer", raw);
  }
  try {
    std::size_t idx = 0;
    const unsigned long long v = std::stoull(raw, &idx);
    if (idx != raw.size()) bad_value(ini, section, key, "a non-negative integer", raw);
    return static_cast<std::uint64_t>(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(ini, section, key, "a non-negative integer", raw);
  }
}

bool parse_bool(const Ini& ini, const std::string& section, const std::string& key,
                const std::string& raw) {
  if (raw == "true" || raw == "yes" || raw == "on" || raw == "1") return true;
  if (raw == "false" || raw == "no" || raw == "off" || raw == "0") return false;
  bad_value(ini, section, key, "a boolean (true/false)", raw);
}

std::vector<double> parse_double_list(const Ini& ini, const std::string& section,
                                      const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) bad_value(ini, section, key, "a comma-separated list of numbers", raw);
    out.push_back(parse_double(ini, section, key, t));
  }
  if (out.empty()) bad_value(ini, section, key, "a comma-separated list of numbers", raw);
  return out;
}

double take_double(Ini& ini, const std::string& sec, const std::string& key, double def) {
  const auto v = ini.take(sec, key);
  return v ? parse_double(ini, sec, key, *v) : def;
}

long take_long(Ini& ini, const std::string& sec, const std::string& key, long def) {
  const auto v = ini.take(sec, key);
  return v ? parse_long(ini, sec, key, *v) : def;
}

bool take_bool(Ini& ini, const std::string& sec, const std::string& key, bool def) {
  const auto v = ini.take(sec, key);
  return v ? parse_bool(ini, sec, key, *v) : def;
}

// A key that is only meaningful in one mode; setting it in any other mode
// is an error, same as an unknown key.
void forbid(Ini& ini, const std::string& sec, const std::string& key, const std::string& why) {
  if (ini.take(sec, key)) {
    throw ConfigError(ini.origin + ": " + sec + "." + key + " only applies when " + why);
  }
}

}  // namespace

RunConfig load_run_config(std::istream& in, const std::string& origin) {
  Ini ini = parse_ini(in, origin);
  RunConfig cfg;

  // [target]
  {
    const std::string kind = ini.take("target", "kind").value_or("bimodal");
    if (kind == "bimodal") {
      cfg.target = GaussianMixture::bimodal_benchmark();
      forbid(ini, "target", "weights", "kind = mixture");
      forbid(ini, "target", "means", "kind = mixture");
      forbid(ini, "target", "sds", "kind = mixture");
    } else if (kind == "standard_normal") {
      cfg.target = GaussianMixture::standard_normal();
      forbid(ini, "target", "weights", "kind = mixture");
      forbid(ini, "target", "means", "kind = mixture");
      forbid(ini, "target", "sds", "kind = mixture");
    } else if (kind == "mixture") {
      const auto w = ini.take("target", "weights");
      const auto mu = ini.take("target", "means");
      const auto sd = ini.take("target", "sds");
      if (!w || !mu || !sd) {
        throw ConfigError(origin + ": target.kind = mixture requires weights, means and sds");
      }
      const auto ws = parse_double_list(ini, "target", "weights", *w);
      const auto mus = parse_double_list(ini, "target", "means", *mu);
      const auto sds = parse_double_list(ini, "target", "sds", *sd);
      if (ws.size() != mus.size() || ws.size() != sds.size()) {
        throw ConfigError(origin + ": target weights, means and sds must have equal lengths");
      }
      std::vector<MixtureComponent> comps(ws.size());
      for (std::size_t i = 0; i < ws.size(); ++i) comps[i] = {ws[i], mus[i], sds[i]};
      try {
        cfg.target = GaussianMixture(std::move(comps));
      } catch (const std::exception& e) {
        throw ConfigError(origin + ": target: " + e.what());
      }
    } else {
      throw ConfigError(origin + ": target.kind must be bimodal, standard_normal or mixture");
    }
  }

  // [ladder]
  {
    const auto temps = ini.take("ladder", "temperatures");
    const auto rungs = ini.take("ladder", "rungs");
    const auto t_max = ini.take("ladder", "t_max");
    if (temps && (rungs || t_max)) {
      throw ConfigError(origin + ": ladder.temperatures excludes ladder.rungs / ladder.t_max");
    }
    if (temps) {
      cfg.temperatures = parse_double_list(ini, "ladder", "temperatures", *temps);
    } else if (rungs || t_max) {
      if (!rungs || !t_max) {
        throw ConfigError(origin + ": ladder.rungs and ladder.t_max must be given together");
      }
      const long n = parse_long(ini, "ladder", "rungs", *rungs);
      const double tm = parse_double(ini, "ladder", "t_max", *t_max);
      try {
        cfg.temperatures = TemperatureLadder::arithmetic(tm, static_cast<int>(n)).temperatures();
      } catch (const std::exception& e) {
        throw ConfigError(origin + ": ladder: " + e.what());
      }
    } else {
      cfg.temperatures = {1.0};
    }
  }

  // [schedule]
  {
    const std::string type = ini.take("schedule", "type").value_or("none");
    if (type == "none") {
      cfg.schedule.reset();
      forbid(ini, "schedule", "t0", "type = deterministic");
      forbid(ini, "schedule", "c", "type = wang_landau");
      forbid(ini, "schedule", "gamma0", "type = wang_landau");
      forbid(ini, "schedule", "decay", "type = wang_landau");
    } else if (type == "deterministic") {
      StepSchedule s;
      s.kind = StepSchedule::Kind::deterministic;
      const auto t0 = ini.take("schedule", "t0");
      if (!t0) throw ConfigError(origin + ": schedule.t0 is required for type = deterministic");
      s.t0 = parse_long(ini, "schedule", "t0", *t0);
      cfg.schedule = s;
      forbid(ini, "schedule", "c", "type = wang_landau");
      forbid(ini, "schedule", "gamma0", "type = wang_landau");
      forbid(ini, "schedule", "decay", "type = wang_landau");
    } else if (type == "wang_landau") {
      StepSchedule s;
      s.kind = StepSchedule::Kind::flat_histogram;
      const auto c = ini.take("schedule", "c");
      if (!c) throw ConfigError(origin + ": schedule.c is required for type = wang_landau");
      s.c = parse_double(ini, "schedule", "c", *c);
      s.gamma0 = take_double(ini, "schedule", "gamma0", 1.0);
      s.decay = take_double(ini, "schedule", "decay", 0.5);
      cfg.schedule = s;
      forbid(ini, "schedule", "t0", "type = deterministic");
    } else {
      throw ConfigError(origin + ": schedule.type must be none, deterministic or wang_landau");
    }
  }

  // [proposal]
  cfg.sigma0 = take_double(ini, "proposal", "sigma0", 10.0);
  cfg.target_rate = take_double(ini, "proposal", "target_rate", 0.234);
  cfg.adapt = take_bool(ini, "proposal", "adapt", true);
  cfg.adapt_exponent = take_double(ini, "proposal", "adapt_exponent", 0.6);

  // [engine]
  {
    const auto iters = ini.take("engine", "iterations");
    if (!iters) throw ConfigError(origin + ": engine.iterations is required");
    cfg.iterations = parse_long(ini, "engine", "iterations", *iters);
    cfg.particles = static_cast<int>(take_long(ini, "engine", "particles", 1));
    const auto seed = ini.take("engine", "seed");
    cfg.seed = seed ? parse_u64(ini, "engine", "seed", *seed) : 1;

    const std::string init = ini.take("engine", "init").value_or("normal");
    if (init == "normal") {
      cfg.init.kind = InitSpec::Kind::normal;
      cfg.init.mean = take_double(ini, "engine", "init_mean", 0.0);
      cfg.init.sd = take_double(ini, "engine", "init_sd", 1.0);
      forbid(ini, "engine", "init_value", "init = point");
    } else if (init == "point") {
      cfg.init.kind = InitSpec::Kind::point;
      cfg.init.value = take_double(ini, "engine", "init_value", 0.0);
      forbid(ini, "engine", "init_mean", "init = normal");
      forbid(ini, "engine", "init_sd", "init = normal");
    } else {
      throw ConfigError(origin + ": engine.init must be normal or point");
    }

    const std::string ri = ini.take("engine", "rung_init").value_or("cold");
    if (ri == "cold") {
      cfg.rung_init = RungInit::cold;
    } else if (ri == "uniform") {
      cfg.rung_init = RungInit::uniform;
    } else {
      throw ConfigError(origin + ": engine.rung_init must be cold or uniform");
    }

    const std::string comp = ini.take("engine", "composition").value_or("both");
    if (comp == "both") {
      cfg.composition = MoveComposition::both;
    } else if (comp == "x_only") {
      cfg.composition = MoveComposition::x_only;
    } else if (comp == "alternate") {
      cfg.composition = MoveComposition::alternate;
    } else {
      throw ConfigError(origin + ": engine.composition must be both, x_only or alternate");
    }

    cfg.record_stride = take_long(ini, "engine", "record_stride", 1);
    cfg.store_trace = take_bool(ini, "engine", "store_trace", true);
    cfg.trailing_window = take_long(ini, "engine", "trailing_window", 10000);
    cfg.threads = static_cast<int>(take_long(ini, "engine", "threads", 1));
  }

  // [split]
  cfg.split.enabled = take_bool(ini, "split", "enabled", false);
  cfg.split.skew_threshold = take_double(ini, "split", "skew_threshold", 0.75);
  cfg.split.min_samples = static_cast<int>(take_long(ini, "split", "min_samples", 200));
  cfg.split.max_rungs = static_cast<int>(take_long(ini, "split", "max_rungs", 64));
  cfg.split_window = static_cast<int>(take_long(ini, "split", "window", 256));
  cfg.split_check_every = take_long(ini, "split", "check_every", 0);

  static const std::vector<std::string> known = {"target",   "ladder", "schedule",
                                                 "proposal", "engine", "split"};
  ini.finish(known);

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig load_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return load_run_config(in, path);
}

}  // namespace wlst
