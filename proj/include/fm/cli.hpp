#ifndef FM_CLI_HPP
#define FM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fm {

enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 1,
    exit_input = 2,
    exit_empty = 3,
    exit_oracle_limit = 4,
    exit_mismatch = 5,
};

/// Runs `fm <subcommand> ...` with args excluding the program name and
/// returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fm

#endif // FM_CLI_HPP
