#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace pinsker::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kComputationError = 2,
  kVerificationFailed = 3,
};

/// Runs the command line; all output goes to `out` (results) and `err`
/// (diagnostics). Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SuiteResult {
  nlohmann::json report;
  bool hard_failure = false;
};

/// suite: beta-inequalities | mc | identities | convergence | all
SuiteResult run_suite(const std::string& suite, std::uint64_t seed);

}  // namespace pinsker::cli
