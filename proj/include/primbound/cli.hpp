#pragma once

#include <ostream>

#include "primbound/bounds.hpp"
#include "primbound/cache.hpp"

namespace primbound {

/// Exit statuses of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

/// Loads or builds every table `config` needs and evaluates it.
BoundReport evaluate_bound(const BoundConfig& config, TableStore& store);

/// Quick self-check suites; one PASS/FAIL line each. Returns true if all pass.
bool run_verify(std::ostream& out, unsigned threads = 1);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace primbound
