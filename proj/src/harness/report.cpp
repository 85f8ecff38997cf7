#include "gvimr/harness/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gvimr::harness {

namespace {

bool holds(double measured, std::string_view relation, double threshold) {
    if (relation == "<=") return measured <= threshold;
    if (relation == ">=") return measured >= threshold;
    if (relation == "<") return measured < threshold;
    if (relation == ">") return measured > threshold;
    throw std::invalid_argument("unknown relation");
}

// JSON has no inf/nan; keep them readable as strings.
nlohmann::ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

} // namespace

std::string_view to_string(CheckStatus status) {
    switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::non_conclusive: return "non-conclusive";
    }
    return "unknown";
}

Check make_check(std::string name, double measured, std::string_view relation, double threshold,
                 std::string anchor) {
    const auto status = holds(measured, relation, threshold) ? CheckStatus::pass : CheckStatus::fail;
    return {std::move(name), status, measured, std::string(relation), threshold, std::move(anchor), {}};
}

Check make_advisory_check(std::string name, double measured, std::string_view relation, double threshold,
                          std::string anchor, std::string note) {
    auto c = make_check(std::move(name), measured, relation, threshold, std::move(anchor));
    if (c.status == CheckStatus::fail) c.status = CheckStatus::non_conclusive;
    c.note = std::move(note);
    return c;
}

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.status != CheckStatus::fail; });
}

std::size_t VerificationReport::count(CheckStatus status) const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [status](const Check& c) { return c.status == status; }));
}

std::string hex64(std::uint64_t value) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string to_text(const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["title"] = report.title;
    j["provenance"] = {{"config_hash", hex64(report.provenance.config_hash)}, {"seed", report.provenance.seed}};
    auto facts = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.facts) facts[k] = v;
    j["facts"] = facts;
    j["summary"] = {{"pass", report.count(CheckStatus::pass)},
                    {"fail", report.count(CheckStatus::fail)},
                    {"non_conclusive", report.count(CheckStatus::non_conclusive)}};
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json row;
        row["name"] = c.name;
        row["status"] = to_string(c.status);
        row["measured"] = number(c.measured);
        row["relation"] = c.relation;
        row["threshold"] = number(c.threshold);
        row["anchor"] = c.anchor;
        if (!c.note.empty()) row["note"] = c.note;
        checks.push_back(std::move(row));
    }
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

void write_report(const VerificationReport& report, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report '" + path.string() + "'");
    out << to_text(report);
}

} // namespace gvimr::harness
