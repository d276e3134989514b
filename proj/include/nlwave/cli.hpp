#pragma once

#include <string>
#include <vector>

namespace nlwave {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitRuntime = 1,
  kExitStability = 2,
  kExitConfig = 3,
};

/// Parses argv (program name first) and runs the selected subcommand.
int cli_dispatch(const std::vector<std::string>& args);
int cli_dispatch(int argc, char** argv);

}  // namespace nlwave
