#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cobarlie/report.hpp"

namespace cobarlie::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInvalidInput = 2, kBudgetExceeded = 3 };

// Group-ring, D-category and free Lie identity suites up to the given sizes.
// With flip_sign the third factor of w_n changes sign (mutation testing).
std::vector<report::IdentityResult> run_verify(int n_max, int pq_max, bool flip_sign = false);

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cobarlie::cli
