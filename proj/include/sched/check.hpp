#pragma once

#include <stdexcept>
#include <string>

namespace sched {

[[noreturn]] inline void check_fail(const char* expr, const std::string& msg) {
  std::string full = "internal invariant violated: ";
  full += expr;
  if (!msg.empty()) {
    full += " (";
    full += msg;
    full += ")";
  }
  throw std::logic_error(full);
}

}  // namespace sched

// Always-on internal consistency check. Engine and policy bugs must surface
// loudly in simulations, so this is not compiled out in release builds.
#define SCHED_CHECK(cond, msg)                 \
  do {                                         \
    if (!(cond)) ::sched::check_fail(#cond, (msg)); \
  } while (0)
