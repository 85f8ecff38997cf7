#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace gvimr {

/// Step sizes alpha_n in (0, 1) driving the viscosity term.
class StepSequence {
public:
    enum class Family { power, explicit_list };

    /// alpha_n = a / (n + 1)^p with a in (0, 1) and p in (0, 1].
    static StepSequence power(double a = 0.9, double p = 1.0);
    /// Finite list; every entry must lie in (0, 1).
    static StepSequence explicit_list(std::vector<double> values);

    double value(std::size_t n) const;
    double operator()(std::size_t n) const { return value(n); }

    Family family() const noexcept { return family_; }
    double a() const noexcept { return a_; }
    double p() const noexcept { return p_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    StepSequence() = default;

    Family family_ = Family::power;
    double a_ = 0.9;
    double p_ = 1.0;
    std::vector<double> values_;
};

std::string_view to_string(StepSequence::Family family);

struct ConditionVerdict {
    bool holds = false;
    /// false for finite-evidence heuristics
    bool conclusive = false;
    double measured = 0.0;
};

/// Verdicts for: (i) alpha_n -> 0, (ii) sum alpha_n = infinity,
/// (iii) sum |alpha_n - alpha_{n-1}| < infinity or alpha_{n+1}/alpha_n -> 1.
struct ConditionReport {
    ConditionVerdict vanishing;
    ConditionVerdict divergent_sum;
    ConditionVerdict slow_variation;

    bool all_hold() const noexcept {
        return vanishing.holds && divergent_sum.holds && slow_variation.holds;
    }
    /// A conclusive verdict that fails.
    bool analytic_failure() const noexcept;
};

/// Power family: analytic verdicts. Explicit lists: heuristics over the first
/// `horizon` terms, flagged non-conclusive. Requires horizon >= 10.
ConditionReport check_conditions(const StepSequence& seq, std::size_t horizon);

} // namespace gvimr
