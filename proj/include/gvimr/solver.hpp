#pragma once

#include "gvimr/hilbert.hpp"
#include "gvimr/operators.hpp"
#include "gvimr/stepseq.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace gvimr {

/// Picard iteration settings for the implicit equation of one outer step.
struct InnerSolve {
    double tol = 1e-12;
    std::size_t max_iter = 200;
};

/// The outer loop stops once ||x_n - S x_n|| <= fp_residual_tol and
/// ||x_{n+1} - x_n|| <= step_tol, or after max_outer rows. A negative
/// fp_residual_tol disables early stopping. An explicit step list also ends
/// the run when it is exhausted.
struct OuterStop {
    double fp_residual_tol = 1e-8;
    double step_tol = 1e-10;
    std::size_t max_outer = 1'000'000;
};

struct SchemeConfig {
    Contraction Q;
    Nonexpansive S;
    StrongPositiveOperator B;
    double gamma;
    StepSequence steps = StepSequence::power();
    InnerSolve inner{};
    OuterStop stop{};
    std::optional<HilbertPoint> reference_solution{};
    bool keep_iterates = false;
};

struct HypothesisReport {
    /// 0 < gamma < gamma_bar / alpha
    bool gamma_bound = false;
    /// gamma_bar / alpha < gamma + 1 / alpha; informational only
    bool upper_bracket = false;
    /// alpha_0 * ||B|| <= 1
    bool step_scale = false;
    double gamma_limit = 0.0;
};

HypothesisReport check_hypotheses(const SchemeConfig& cfg);

/// Throws ParameterError naming the first violated hypothesis (the upper
/// bracket is never enforced).
void validate(const SchemeConfig& cfg);

struct TraceRow {
    std::size_t n = 0;
    double alpha_n = 0.0;
    double step_norm = 0.0;   ///< ||x_{n+1} - x_n||
    double fp_residual = 0.0; ///< ||x_n - S x_n||
    std::size_t inner_iters = 0;
    std::optional<double> dist_to_ref;
    /// ||T(x_n) - x_n|| for the first inner correction; not exported
    double inner_initial_gap = 0.0;
};

struct IterationTrace {
    std::vector<TraceRow> rows;
    HilbertPoint limit;
    bool converged = false;
    /// x_0, x_1, ... when SchemeConfig::keep_iterates is set
    std::vector<HilbertPoint> iterates;
};

struct ImplicitStepResult {
    HilbertPoint point;
    std::size_t inner_iters = 0;
    /// last successive difference of the inner iteration
    double residual = 0.0;
    double initial_gap = 0.0;
};

/// Solves y = alpha_n gamma Q(x_n) + (I - alpha_n B) S((x_n + y) / 2) by
/// Picard iteration from y = x_n.
ImplicitStepResult implicit_step(const HilbertPoint& x_n, double alpha_n, const SchemeConfig& cfg);

/// The inner map T of implicit_step, for contraction checks.
PointMap make_inner_map(const HilbertPoint& x_n, double alpha_n, const SchemeConfig& cfg);

IterationTrace run_gvimr(const SchemeConfig& cfg, const HilbertPoint& x0);

enum class Variant { gvimr, moudafi, marino_xu, alghamdi_imr, xu_vimr };

std::string_view to_string(Variant v);
std::optional<Variant> variant_from_string(std::string_view name);

/// Runs one of the ancestor recurrences. Fields of `cfg` the variant does not
/// use (B and gamma for moudafi / xu_vimr / alghamdi_imr, Q for
/// alghamdi_imr) are ignored.
IterationTrace run_variant(Variant variant, const SchemeConfig& cfg, const HilbertPoint& x0);

/// General recurrence
///   x_{n+1} = alpha_n anchor(x_n) + (I - alpha_n W) S(e_n),
/// with e_n = (x_n + x_{n+1}) / 2 when `midpoint`, else e_n = x_n, and W = I
/// when `weight` is empty. Every scheme above is an instance; `anchor` need
/// not be a contraction. `weight_norm` is ||W||, used to enforce
/// alpha_n ||W|| <= 1 at every step.
struct Recurrence {
    PointMap anchor;
    std::optional<PointMap> weight;
    double weight_norm = 1.0;
    bool midpoint = true;
};

IterationTrace run_recurrence(const Recurrence& rec, const Nonexpansive& S, const StepSequence& steps,
                              const InnerSolve& inner, const OuterStop& stop,
                              const std::optional<HilbertPoint>& reference, const HilbertPoint& x0,
                              bool keep_iterates = false);

/// Fixed point z = P_Fix(S)(z - rho (B z - gamma Q z)) with rho = min(1, 1/||B||),
/// iterated from `origin` until successive differences fall to 1e-12. With
/// ||B|| <= 1 this is z = P_Fix(S)(I - B + gamma Q) z.
HilbertPoint solve_target(const SchemeConfig& cfg, const PointMap& fix_projection,
                          const HilbertPoint& origin);

struct ViResidual {
    /// min over samples of <(B - gamma Q) z, x - z>; +inf when no samples
    double value;
    bool empty_samples = false;
};

ViResidual check_vi_residual(const HilbertPoint& z, std::span<const HilbertPoint> fix_samples,
                             const SchemeConfig& cfg);

/// max{ ||x_0 - p||, ||gamma Q(p) - B p|| / (gamma_bar - gamma alpha) }
double boundedness_radius(const SchemeConfig& cfg, const HilbertPoint& p, const HilbertPoint& x0);

} // namespace gvimr
