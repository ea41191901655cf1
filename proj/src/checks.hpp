#pragma once

#include <ostream>

namespace relsim {

/// Built-in invariant suite (walk-sum oracle, integrator unitarity, locality
/// discipline, distance identities). Prints one line per check and returns
/// the number of failures.
int run_self_checks(std::ostream& out);

}  // namespace relsim
