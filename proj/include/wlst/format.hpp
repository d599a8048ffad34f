#pragma once

#include <cstdio>
#include <string>

namespace wlst {

// Shortest decimal that round-trips a double (17 significant digits).
// Every CSV and summary number goes through this so files re-parse to
// bit-identical values.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

}  // namespace wlst
