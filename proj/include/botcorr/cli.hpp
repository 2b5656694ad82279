#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "botcorr/detector.hpp"

namespace botcorr::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitDataError = 1,  ///< I/O failure or unusable input data
  kExitUsage = 2,
  kExitDetection = 3,  ///< analyze found at least one process with keylogging activity
};

/// Runs `botcorr <args...>` (program name excluded) and returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// analyze flags that reproduce `config`.
std::vector<std::string> config_to_args(const DetectorConfig& config);

}  // namespace botcorr::cli
