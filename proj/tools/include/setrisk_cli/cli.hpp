#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "setrisk/error.hpp"

namespace setrisk::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,       // malformed scenario or invalid configuration
  kResolution = 3,  // unknown set, measure or sequence name
  kDimension = 4,
  kInfeasible = 5,
  kRefusal = 6,  // refused, unsupported or over a cost guard
};

int exit_code_for(Errc code) noexcept;

/// Seed from SETRISK_SEED when set and valid, else 42.
std::uint64_t default_seed();

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`; the return value is the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace setrisk::cli
