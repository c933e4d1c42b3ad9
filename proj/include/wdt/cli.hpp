#pragma once

#include <iosfwd>

namespace wdt {

// Full command-line entry point; writes results to `out` and diagnostics to
// `err`.  Exit codes: 0 success, 2 flag/usage errors, 3 numerical failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wdt
