#pragma once

#include <string>

#include "tourpow/errors.hpp"

namespace tourpow {

/// strict: the proved constants are preconditions (infeasible at desk
/// scale).  opportunistic: sizes shrink to what the instance supports, while
/// every output is still verified.
enum class Mode { strict, opportunistic };

inline const char* to_string(Mode m) { return m == Mode::strict ? "strict" : "opportunistic"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "strict") return Mode::strict;
  if (s == "opportunistic") return Mode::opportunistic;
  throw InputError("unknown mode '" + s + "'");
}

}  // namespace tourpow
