#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fourbar/cli/config.hpp"

namespace fourbar::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kIoError = 3 };

/// Writes the sweep CSV and/or SVG selected by config.format.
int run_sweep(const RunConfig& config, std::ostream& log);

/// Minimum-norm against minimum-torque on the same grid.
int run_compare(const RunConfig& config, std::ostream& log);

enum class Status { Pass, Fail, Skipped };

struct InvariantResult {
  std::string name;
  Status status;
  double worst;      // largest residual seen (or the value tested)
  double tolerance;
  std::string note;  // reason for SKIPPED, or a short description of a failure
};

struct VerifyOptions {
  /// Test hook: perturbs the Gram-assembled coupling block before it is
  /// compared with its closed form.
  bool corrupt_coupling_block = false;
};

std::vector<InvariantResult> verify_invariants(const RunConfig& config, const VerifyOptions& options = {});

/// Prints one line per invariant and a summary; exit 0 iff nothing failed.
int run_verify(const RunConfig& config, std::ostream& out, const VerifyOptions& options = {});

}  // namespace fourbar::cli
