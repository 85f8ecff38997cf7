#include "gvimr/stepseq.hpp"

#include "gvimr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gvimr {

StepSequence StepSequence::power(double a, double p) {
    if (!(a > 0.0 && a < 1.0)) throw ParameterError("step scale a must lie in (0, 1) so alpha_0 < 1");
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("step exponent p must lie in (0, 1]");
    StepSequence s;
    s.family_ = Family::power;
    s.a_ = a;
    s.p_ = p;
    return s;
}

StepSequence StepSequence::explicit_list(std::vector<double> values) {
    if (values.empty()) throw StructuralError("explicit step list is empty");
    for (double v : values)
        if (!(v > 0.0 && v < 1.0)) throw ParameterError("every step alpha_n must lie in (0, 1)");
    StepSequence s;
    s.family_ = Family::explicit_list;
    s.values_ = std::move(values);
    return s;
}

double StepSequence::value(std::size_t n) const {
    if (family_ == Family::power) {
        const double base = static_cast<double>(n) + 1.0;
        return p_ == 1.0 ? a_ / base : a_ / std::pow(base, p_);
    }
    if (n >= values_.size())
        throw StructuralError("step index " + std::to_string(n) + " past explicit list of length " +
                              std::to_string(values_.size()));
    return values_[n];
}

std::string_view to_string(StepSequence::Family family) {
    return family == StepSequence::Family::power ? "power" : "explicit";
}

bool ConditionReport::analytic_failure() const noexcept {
    for (const auto* v : {&vanishing, &divergent_sum, &slow_variation})
        if (v->conclusive && !v->holds) return true;
    return false;
}

ConditionReport check_conditions(const StepSequence& seq, std::size_t horizon) {
    if (horizon < 10) throw ParameterError("condition check horizon must be >= 10");
    ConditionReport r;
    if (seq.family() == StepSequence::Family::power) {
        r.vanishing = {true, true, seq.value(horizon)};
        r.divergent_sum = {seq.p() <= 1.0, true, 0.0};
        r.slow_variation = {true, true, seq.value(horizon) / seq.value(horizon - 1)};
        return r;
    }

    const auto& v = seq.values();
    if (horizon > v.size())
        throw StructuralError("horizon " + std::to_string(horizon) + " exceeds explicit list length " +
                              std::to_string(v.size()));
    // the last tenth of the horizon stands in for the tail
    const std::size_t tail = std::max<std::size_t>(1, horizon / 10);
    const std::size_t start = horizon - tail;

    double tail_max = 0.0, tail_sum = 0.0, ratio_dev = 0.0;
    for (std::size_t n = start; n < horizon; ++n) {
        tail_max = std::max(tail_max, v[n]);
        tail_sum += v[n];
        if (n > 0) ratio_dev = std::max(ratio_dev, std::abs(v[n] / v[n - 1] - 1.0));
    }
    const double growth_per_1000 = tail_sum * 1000.0 / static_cast<double>(tail);

    r.vanishing = {tail_max < 1e-3, false, tail_max};
    r.divergent_sum = {growth_per_1000 > 1e-6, false, growth_per_1000};
    r.slow_variation = {ratio_dev <= 1e-3, false, ratio_dev};
    return r;
}

} // namespace gvimr
