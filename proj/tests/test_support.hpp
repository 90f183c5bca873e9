#pragma once

// Shared doctest main for the test binaries: accepts --seed=<n> ahead of the
// usual doctest flags so randomized property tests are reproducible, and
// exposes the golden-file directory wired in by the build.

#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testsup {

inline std::uint64_t seed = 20240801;

inline std::mt19937_64 make_rng(std::uint64_t salt = 0) {
  return std::mt19937_64(seed + salt);
}

inline std::string golden_path(const std::string& name) {
#ifdef TQ_GOLDEN_DIR
  return std::string(TQ_GOLDEN_DIR) + "/" + name;
#else
  return "tests/golden/" + name;
#endif
}

}  // namespace testsup

int main(int argc, char** argv) {
  std::vector<const char*> pass;
  for (int i = 0; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--seed=", 0) == 0) {
      testsup::seed = std::stoull(arg.substr(7));
    } else {
      pass.push_back(argv[i]);
    }
  }
  doctest::Context ctx(static_cast<int>(pass.size()),
                       const_cast<char**>(pass.data()));
  return ctx.run();
}
