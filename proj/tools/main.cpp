#include <iostream>
#include <string>
#include <vector>

#include "tq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  tq::cli::RunReport rr = tq::cli::dispatch(args);
  std::cout << rr.report.dump(2) << std::endl;
  if (!rr.summary.empty()) std::cerr << rr.summary << std::endl;
  return rr.exit_code;
}
