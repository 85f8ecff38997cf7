#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gvimr::harness {

enum class CheckStatus { pass, fail, non_conclusive };

std::string_view to_string(CheckStatus status);

struct Check {
    std::string name;
    CheckStatus status;
    double measured;
    /// one of <=, >=, <, >
    std::string relation;
    double threshold;
    /// the inequality being checked, as a formula
    std::string anchor;
    std::string note;
};

/// pass when `measured relation threshold` holds, fail otherwise.
Check make_check(std::string name, double measured, std::string_view relation, double threshold,
                 std::string anchor);

/// Same comparison, but a failure is reported as non-conclusive.
Check make_advisory_check(std::string name, double measured, std::string_view relation, double threshold,
                          std::string anchor, std::string note);

struct Provenance {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

struct VerificationReport {
    std::string title;
    std::vector<Check> checks;
    Provenance provenance;
    /// free-form key/value facts printed before the checks, in order
    std::vector<std::pair<std::string, std::string>> facts;

    bool all_pass() const;
    std::size_t count(CheckStatus status) const;
};

std::string hex64(std::uint64_t value);

/// Pretty-printed JSON with a fixed key order.
std::string to_text(const VerificationReport& report);

void write_report(const VerificationReport& report, const std::filesystem::path& path);

} // namespace gvimr::harness
