#pragma once

#include "gvimr/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gvimr::harness {

struct SweepCell {
    std::size_t index = 0;
    std::string variant;
    std::optional<double> a, p, gamma;
    /// converged | not_converged | error
    std::string status;
    std::size_t iterations = 0;
    std::optional<double> final_fp_residual;
    std::optional<double> final_step_norm;
    std::string message;
    IterationTrace trace;
};

/// Grid cells in nesting order variant > step.a > step.p > gamma. Keys of the
/// "grid" object not present fall back to the base config.
std::vector<SweepCell> run_sweep(const nlohmann::json& tree, std::uint64_t config_hash, unsigned threads = 0);

/// index,variant,a,p,gamma,status,iterations,final_fp_residual,final_step_norm,message
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

/// Exit 0 when every cell converged, 2 when some did not or errored, 1 on a
/// config error of the sweep file itself.
int sweep(const std::filesystem::path& config_path, std::ostream& log, unsigned threads = 0);

} // namespace gvimr::harness
