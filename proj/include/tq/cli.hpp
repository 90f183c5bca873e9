#pragma once

// Command-line front end: parses a subcommand invocation, runs the matching
// library operation, and packages the outcome as a JSON report (stdout) plus
// a one-line human summary (stderr).  Re-running a command with the same
// inputs yields byte-identical output.

#include <string>
#include <vector>

#include "tq/json_io.hpp"

namespace tq {
namespace cli {

struct RunReport {
  int exit_code = 0;      // 0 success, 1 usage error, 2 domain error
  jsonio::Json report;    // {"command", "context", "result", "checksum"}
  std::string summary;    // human-readable one-liner
};

RunReport dispatch(const std::vector<std::string>& args);

}  // namespace cli
}  // namespace tq
