#pragma once

#include <ostream>

#include "config.hpp"

namespace wsr {

enum ExitCode : int { kSuccess = 0, kAssertionFailed = 1, kUsageError = 2 };

// Each command writes its files under cfg.output.directory and a short
// summary to out. Diagnostics that decide the exit code go to err.
int cmd_exact(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_couple(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bounds(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// The certificate the couple, bounds and verify commands share: certify at
/// the configured epsilon, or optimise over the configured grid.
warmstandby::BoundResult config_certificate(const ExperimentConfig& cfg);

}  // namespace wsr
