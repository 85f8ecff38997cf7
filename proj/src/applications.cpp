#include "gvimr/applications.hpp"

#include "gvimr/error.hpp"

#include <string>

namespace gvimr {

VIProblem::VIProblem(ConvexSet K_, MonotoneOperator A_, double lambda_)
    : K(std::move(K_)), A(std::move(A_)), lambda(lambda_) {
    if (!(lambda > 0.0 && lambda < 2.0 * A.mu()))
        throw ParameterError("VIP step lambda must lie in (0, 2 mu) = (0, " + std::to_string(2.0 * A.mu()) + ")");
}

StepSequence default_application_steps() { return StepSequence::power(1e-4, 1.0); }

SchemeConfig application_scheme(Nonexpansive S, const HilbertPoint& like, const SchemeOverrides& o) {
    return SchemeConfig{
        o.Q ? *o.Q : Contraction::scaled(0.5),
        std::move(S),
        o.B ? *o.B : StrongPositiveOperator::identity(like.dim(), like.weights()),
        o.gamma.value_or(1.0),
        o.steps ? *o.steps : default_application_steps(),
        o.inner.value_or(InnerSolve{}),
        o.stop.value_or(OuterStop{}),
        o.reference_solution,
        o.keep_iterates,
    };
}

Solution solve_vip(const VIProblem& problem, const SchemeOverrides& overrides, std::optional<HilbertPoint> x0) {
    const HilbertPoint start = x0 ? *x0 : HilbertPoint::zeros(problem.K.dim());
    auto cfg = application_scheme(make_vip_operator(problem.K, problem.A, problem.lambda), start, overrides);
    auto trace = run_gvimr(cfg, start);
    auto point = trace.limit;
    return {std::move(point), std::move(trace)};
}

double natural_residual(const VIProblem& problem, const HilbertPoint& z) {
    return distance(z, project(problem.K, z - problem.lambda * problem.A(z)));
}

Solution solve_fredholm(const FredholmProblem& problem, const SchemeOverrides& overrides,
                        std::optional<HilbertPoint> x0) {
    const HilbertPoint start = x0 ? *x0 : HilbertPoint::zeros(problem.grid_m, problem.weights());
    auto cfg = application_scheme(make_fredholm_operator(problem), start, overrides);
    auto trace = run_gvimr(cfg, start);
    auto point = trace.limit;
    return {std::move(point), std::move(trace)};
}

HilbertPoint fredholm_oracle(const FredholmProblem& problem) {
    if (!problem.is_linear()) throw StructuralError("fredholm_oracle needs a linear kernel k(t, s)");
    const std::size_t m = problem.grid_m;
    const auto t = problem.nodes();
    const auto w = problem.weights();
    std::vector<double> a(m * m), rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        rhs[i] = problem.g(t[i]);
        for (std::size_t j = 0; j < m; ++j)
            a[i * m + j] = (i == j ? 1.0 : 0.0) - w[j] * problem.linear_kernel(t[i], t[j]);
    }
    return HilbertPoint(solve_linear(m, std::move(a), std::move(rhs)), w);
}

PeriodicSolution find_periodic(const EvolutionProblem& problem, const SchemeOverrides& overrides,
                               std::optional<HilbertPoint> v0, double post_check_tol, OdeSolveOptions ode) {
    const HilbertPoint start = v0 ? *v0 : HilbertPoint::zeros(problem.dim);
    auto cfg = application_scheme(make_poincare_map(problem, ode), start, overrides);
    auto trace = run_gvimr(cfg, start);
    HilbertPoint v = trace.limit;
    const auto end = v.with_coords(integrate_period(problem, v.coords(), ode));
    const double residual = distance(end, v);
    if (residual > post_check_tol)
        throw NumericalError("periodicity post-check failed: ||u(omega) - v|| = " + std::to_string(residual), residual);
    return {std::move(v), std::move(trace), residual};
}

} // namespace gvimr
