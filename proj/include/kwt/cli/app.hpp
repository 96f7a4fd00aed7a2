#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kwt::cli {

enum ExitCode : int {
    success = 0,
    check_failed = 1,     // validate-schedule: some condition violated
    config_error = 2,     // unreadable/invalid config or command line
    runtime_failure = 3,  // I/O or numerical failure while running
    strict_warning = 4,   // a warning was raised under --strict
};

inline constexpr const char* version = "0.3.0";

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kwt::cli
