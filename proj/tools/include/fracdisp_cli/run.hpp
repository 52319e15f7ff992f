#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracdisp_cli/config.hpp"
#include "fracdisp_cli/output.hpp"

namespace fracdisp::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitValidation = 2, kExitConvergence = 3 };

/// Executes one experiment; exceptions propagate (ValidationError, ConvergenceError).
/// Sets `partial_failure` when a stage failed but partial results were kept.
OutputSet execute(const ExperimentConfig& config, bool& partial_failure);

/// Full command-line entry point. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracdisp::cli
