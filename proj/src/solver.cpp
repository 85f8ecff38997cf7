#include "gvimr/solver.hpp"

#include "gvimr/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace gvimr {

namespace {

constexpr double kScaleSlack = 1e-12;
constexpr double kTargetTol = 1e-12;
constexpr std::size_t kTargetMaxIter = 10'000'000;

void require_step(double alpha_n, double weight_norm) {
    if (!(alpha_n > 0.0 && alpha_n < 1.0))
        throw ParameterError("step alpha_n must lie in (0, 1), got " + std::to_string(alpha_n));
    if (alpha_n * weight_norm > 1.0 + kScaleSlack)
        throw ParameterError("step violates alpha_n * ||B|| <= 1 (alpha_n = " + std::to_string(alpha_n) +
                             ", ||B|| = " + std::to_string(weight_norm) + ")");
}

void require_conditions(const StepSequence& steps, std::size_t max_outer) {
    std::size_t horizon = 1000;
    if (steps.family() == StepSequence::Family::explicit_list)
        horizon = std::min(steps.values().size(), std::max<std::size_t>(max_outer, 10));
    if (horizon < 10) return;
    const auto report = check_conditions(steps, horizon);
    if (report.analytic_failure())
        throw ParameterError("step sequence fails the convergence conditions on alpha_n");
}

Recurrence gvimr_recurrence(const SchemeConfig& cfg, bool midpoint) {
    return Recurrence{
        [Q = cfg.Q, gamma = cfg.gamma](const HilbertPoint& x) { return gamma * Q(x); },
        cfg.B.is_identity() ? std::nullopt
                            : std::optional<PointMap>([B = cfg.B](const HilbertPoint& x) { return B.apply(x); }),
        cfg.B.norm(),
        midpoint,
    };
}

// Inner map T(y) = base + (I - alpha W) S(eval(y)), base = alpha anchor(x_n).
class StepMap {
public:
    StepMap(const Recurrence& rec, const Nonexpansive& S, const HilbertPoint& x_n, double alpha_n)
        : rec_(rec), S_(S), x_n_(x_n), alpha_(alpha_n), base_(alpha_n * rec.anchor(x_n)) {}

    HilbertPoint blend(const HilbertPoint& s) const {
        if (rec_.weight) return s - alpha_ * (*rec_.weight)(s);
        return (1.0 - alpha_) * s;
    }

    HilbertPoint operator()(const HilbertPoint& y) const {
        const HilbertPoint s = rec_.midpoint ? S_(0.5 * (x_n_ + y)) : S_(x_n_);
        return base_ + blend(s);
    }

private:
    const Recurrence& rec_;
    const Nonexpansive& S_;
    const HilbertPoint& x_n_;
    double alpha_;
    HilbertPoint base_;
};

ImplicitStepResult advance(const Recurrence& rec, const Nonexpansive& S, const HilbertPoint& x_n,
                           double alpha_n, const InnerSolve& inner) {
    const StepMap T(rec, S, x_n, alpha_n);
    if (!rec.midpoint) return {T(x_n), 0, 0.0, 0.0};

    HilbertPoint y = x_n;
    double diff = std::numeric_limits<double>::infinity();
    double gap = 0.0;
    for (std::size_t k = 1; k <= inner.max_iter; ++k) {
        HilbertPoint next = T(y);
        diff = distance(next, y);
        if (k == 1) gap = diff;
        y = std::move(next);
        if (diff <= inner.tol) return {std::move(y), k, diff, gap};
    }
    throw NumericalError("implicit step: inner iteration exceeded " + std::to_string(inner.max_iter) +
                             " iterations (last difference " + std::to_string(diff) + ")",
                         diff);
}

} // namespace

HypothesisReport check_hypotheses(const SchemeConfig& cfg) {
    HypothesisReport r;
    const double alpha = cfg.Q.alpha();
    const double gbar = cfg.B.gamma_bar();
    r.gamma_limit = gbar / alpha;
    r.gamma_bound = cfg.gamma > 0.0 && cfg.gamma < r.gamma_limit;
    r.upper_bracket = r.gamma_limit < cfg.gamma + 1.0 / alpha;
    r.step_scale = cfg.steps.value(0) * cfg.B.norm() <= 1.0 + kScaleSlack;
    return r;
}

void validate(const SchemeConfig& cfg) {
    const auto h = check_hypotheses(cfg);
    if (!h.gamma_bound)
        throw ParameterError("hypothesis 0 < gamma < gamma_bar/alpha violated: gamma = " +
                             std::to_string(cfg.gamma) + ", gamma_bar/alpha = " + std::to_string(h.gamma_limit));
    if (!h.step_scale)
        throw ParameterError("hypothesis alpha_0 * ||B|| <= 1 violated: alpha_0 = " +
                             std::to_string(cfg.steps.value(0)) + ", ||B|| = " + std::to_string(cfg.B.norm()));
    if (cfg.inner.tol <= 0.0 || cfg.inner.max_iter == 0)
        throw ParameterError("inner solve needs tol > 0 and max_iter >= 1");
    if (cfg.stop.max_outer == 0) throw ParameterError("max_outer must be >= 1");
}

PointMap make_inner_map(const HilbertPoint& x_n, double alpha_n, const SchemeConfig& cfg) {
    auto rec = std::make_shared<Recurrence>(gvimr_recurrence(cfg, true));
    auto S = std::make_shared<Nonexpansive>(cfg.S);
    auto x = std::make_shared<HilbertPoint>(x_n);
    auto T = std::make_shared<StepMap>(*rec, *S, *x, alpha_n);
    return [rec, S, x, T](const HilbertPoint& y) { return (*T)(y); };
}

ImplicitStepResult implicit_step(const HilbertPoint& x_n, double alpha_n, const SchemeConfig& cfg) {
    require_step(alpha_n, cfg.B.norm());
    return advance(gvimr_recurrence(cfg, true), cfg.S, x_n, alpha_n, cfg.inner);
}

IterationTrace run_recurrence(const Recurrence& rec, const Nonexpansive& S, const StepSequence& steps,
                              const InnerSolve& inner, const OuterStop& stop,
                              const std::optional<HilbertPoint>& reference, const HilbertPoint& x0,
                              bool keep_iterates) {
    if (reference) require_same_space(*reference, x0);
    IterationTrace trace;
    HilbertPoint x = x0;
    if (keep_iterates) trace.iterates.push_back(x);
    std::size_t rows = stop.max_outer;
    if (steps.family() == StepSequence::Family::explicit_list) rows = std::min(rows, steps.values().size());
    for (std::size_t n = 0; n < rows; ++n) {
        const double alpha = steps.value(n);
        require_step(alpha, rec.weight_norm);
        const double fp = distance(x, S(x));

        ImplicitStepResult step;
        try {
            step = advance(rec, S, x, alpha, inner);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " at outer step " + std::to_string(n),
                                 e.last_residual(), n);
        }

        TraceRow row;
        row.n = n;
        row.alpha_n = alpha;
        row.step_norm = distance(step.point, x);
        row.fp_residual = fp;
        row.inner_iters = step.inner_iters;
        row.inner_initial_gap = step.initial_gap;
        if (reference) row.dist_to_ref = distance(x, *reference);
        trace.rows.push_back(row);

        x = std::move(step.point);
        if (keep_iterates) trace.iterates.push_back(x);
        if (stop.fp_residual_tol >= 0.0 && fp <= stop.fp_residual_tol && row.step_norm <= stop.step_tol) {
            trace.converged = true;
            break;
        }
    }
    trace.limit = std::move(x);
    return trace;
}

IterationTrace run_gvimr(const SchemeConfig& cfg, const HilbertPoint& x0) {
    validate(cfg);
    require_conditions(cfg.steps, cfg.stop.max_outer);
    return run_recurrence(gvimr_recurrence(cfg, true), cfg.S, cfg.steps, cfg.inner, cfg.stop,
                          cfg.reference_solution, x0, cfg.keep_iterates);
}

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::gvimr: return "gvimr";
    case Variant::moudafi: return "moudafi";
    case Variant::marino_xu: return "marino_xu";
    case Variant::alghamdi_imr: return "alghamdi_imr";
    case Variant::xu_vimr: return "xu_vimr";
    }
    return "unknown";
}

std::optional<Variant> variant_from_string(std::string_view name) {
    static constexpr std::array all{Variant::gvimr, Variant::moudafi, Variant::marino_xu,
                                    Variant::alghamdi_imr, Variant::xu_vimr};
    for (auto v : all)
        if (to_string(v) == name) return v;
    return std::nullopt;
}

IterationTrace run_variant(Variant variant, const SchemeConfig& cfg, const HilbertPoint& x0) {
    if (variant == Variant::gvimr) return run_gvimr(cfg, x0);

    Recurrence rec;
    switch (variant) {
    case Variant::marino_xu:
        validate(cfg);
        rec = gvimr_recurrence(cfg, false);
        break;
    case Variant::moudafi:
        rec = Recurrence{[Q = cfg.Q](const HilbertPoint& x) { return Q(x); }, std::nullopt, 1.0, false};
        break;
    case Variant::xu_vimr:
        rec = Recurrence{[Q = cfg.Q](const HilbertPoint& x) { return Q(x); }, std::nullopt, 1.0, true};
        break;
    case Variant::alghamdi_imr:
        rec = Recurrence{[](const HilbertPoint& x) { return x; }, std::nullopt, 1.0, true};
        break;
    case Variant::gvimr: break;
    }
    if (cfg.inner.tol <= 0.0 || cfg.inner.max_iter == 0)
        throw ParameterError("inner solve needs tol > 0 and max_iter >= 1");
    require_conditions(cfg.steps, cfg.stop.max_outer);
    return run_recurrence(rec, cfg.S, cfg.steps, cfg.inner, cfg.stop, cfg.reference_solution, x0,
                          cfg.keep_iterates);
}

HilbertPoint solve_target(const SchemeConfig& cfg, const PointMap& fix_projection, const HilbertPoint& origin) {
    const double rho = std::min(1.0, 1.0 / cfg.B.norm());
    const double rate = 1.0 - rho * (cfg.B.gamma_bar() - cfg.gamma * cfg.Q.alpha());
    if (!(rate < 1.0))
        throw ParameterError("target map is not a contraction (rate " + std::to_string(rate) +
                             "): hypothesis gamma < gamma_bar/alpha violated");
    HilbertPoint z = HilbertPoint::zeros_like(origin);
    double diff = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kTargetMaxIter; ++k) {
        HilbertPoint next = fix_projection(z - rho * (cfg.B.apply(z) - cfg.gamma * cfg.Q(z)));
        diff = distance(next, z);
        z = std::move(next);
        if (diff <= kTargetTol) return z;
    }
    throw NumericalError("target fixed-point iteration did not converge", diff);
}

ViResidual check_vi_residual(const HilbertPoint& z, std::span<const HilbertPoint> fix_samples,
                             const SchemeConfig& cfg) {
    if (fix_samples.empty()) return {std::numeric_limits<double>::infinity(), true};
    const HilbertPoint w = cfg.B.apply(z) - cfg.gamma * cfg.Q(z);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : fix_samples) best = std::min(best, inner(w, x - z));
    return {best, false};
}

double boundedness_radius(const SchemeConfig& cfg, const HilbertPoint& p, const HilbertPoint& x0) {
    const double gap = cfg.B.gamma_bar() - cfg.gamma * cfg.Q.alpha();
    const double drift = distance(cfg.gamma * cfg.Q(p), cfg.B.apply(p));
    return std::max(distance(x0, p), drift / gap);
}

} // namespace gvimr
