#pragma once

#include "gvimr/applications.hpp"
#include "gvimr/error.hpp"
#include "gvimr/operators.hpp"
#include "gvimr/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gvimr::harness {

/// Unreadable, malformed or out-of-range configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class ProblemKind { fixed_point, vip, fredholm, evolution };

std::string_view to_string(ProblemKind kind);

struct ProblemInstance {
    ProblemKind kind;
    Nonexpansive S;
    HilbertPoint x0;
    std::optional<VIProblem> vip;
    std::optional<FredholmProblem> fredholm;
    std::optional<EvolutionProblem> evolution;
    OdeSolveOptions ode{};
    double post_check_tol = 1e-6;
};

struct OutputPaths {
    std::filesystem::path trace;
    std::filesystem::path report;
    std::filesystem::path summary;
};

/// How the dist_to_ref column is filled.
enum class ReferenceMode { none, target, explicit_point };

struct ExperimentConfig {
    ProblemInstance problem;
    Variant variant;
    SchemeConfig scheme;
    ReferenceMode reference_mode;
    OutputPaths output;
    std::uint64_t seed;
    std::uint64_t config_hash;
    /// certified Fix(S) samples for the VI residual check
    std::size_t vi_samples;
    double sample_radius;
};

/// Relative paths are placed under GVIMR_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output_path(std::filesystem::path path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Parses JSON text; syntax errors become ConfigError with "line:column".
nlohmann::json parse_tree(std::string_view text, std::string_view source_name = "<config>");

/// Builds an experiment from a parsed tree. Relative output paths are taken
/// against GVIMR_OUTPUT_DIR when that variable is set.
ExperimentConfig build_config(const nlohmann::json& tree, std::uint64_t config_hash);

ExperimentConfig parse_config(std::string_view text, std::string_view source_name = "<config>");

/// Reads the file and returns its bytes; ConfigError when unreadable.
std::string read_text(const std::filesystem::path& path);

ExperimentConfig load_config(const std::filesystem::path& path);

} // namespace gvimr::harness
