#ifndef MITEST_CLI_HPP
#define MITEST_CLI_HPP

#include <iosfwd>

namespace mitest::cli {

/// Runs one CLI invocation. Exit codes: 0 success, 1 data or numeric
/// error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

} // namespace mitest::cli

#endif
