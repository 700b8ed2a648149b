#pragma once

#include <iosfwd>

namespace diot {

// Exit codes: 0 success / verification passed, 1 verification failed or LP
// infeasible, 2 inconclusive, 3 error (reported as "ERROR <CODE> <detail>").
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitError = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diot
