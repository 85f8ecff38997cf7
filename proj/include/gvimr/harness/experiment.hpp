#pragma once

#include "gvimr/harness/config.hpp"
#include "gvimr/harness/report.hpp"
#include "gvimr/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace gvimr::harness {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNotConverged = 2;

struct ExperimentResult {
    int exit_code = kExitNotConverged;
    IterationTrace trace;
    VerificationReport report;
    /// filled on the last trace row
    std::optional<double> vi_residual;
    std::string message;
};

/// Runs the configured scheme and evaluates the report checks. Validation
/// failures throw; numerical failures come back with exit code 2.
ExperimentResult execute(const ExperimentConfig& config);

/// Header n,alpha_n,step_norm,fp_residual,inner_iters,dist_to_ref,vi_residual
/// with 17 significant digits; absent values are empty fields.
void write_trace_csv(std::ostream& out, const IterationTrace& trace, std::optional<double> vi_residual);

/// Loads the config, runs it and writes trace and report. Returns the exit
/// code; diagnostics go to `log`.
int run_experiment(const std::filesystem::path& config_path, std::ostream& log);

} // namespace gvimr::harness
