#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "wlst/engine.hpp"

namespace wlst {

// Anything wrong with a config file: syntax, unknown section or key, bad
// value, failed cross-field validation. The CLI maps this to exit code 1;
// everything else that escapes a run maps to 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Parse an INI-style run config. Sections: [target], [ladder], [schedule],
// [proposal], [engine], [split]. engine.iterations is required; every other
// key has a default. Unknown sections and keys are hard errors, as are keys
// that do not apply to the selected mode (e.g. schedule.t0 with
// type = wang_landau). origin names the source in error messages.
RunConfig load_run_config(std::istream& in, const std::string& origin);
RunConfig load_run_config_file(const std::string& path);

}  // namespace wlst
