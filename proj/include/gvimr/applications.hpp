#pragma once

#include "gvimr/hilbert.hpp"
#include "gvimr/operators.hpp"
#include "gvimr/problems.hpp"
#include "gvimr/solver.hpp"

#include <optional>

namespace gvimr {

/// Find x* in K with <A x*, x - x*> >= 0 for all x in K, solved through the
/// fixed points of P_K(I - lambda A).
struct VIProblem {
    ConvexSet K;
    MonotoneOperator A;
    double lambda;

    /// Requires 0 < lambda < 2 mu.
    VIProblem(ConvexSet K, MonotoneOperator A, double lambda);
};

/// Scheme parameters left open by the applications. Unset fields take the
/// defaults Q(x) = x/2, B = I, gamma = 1, steps = default_application_steps(),
/// x0 = 0.
struct SchemeOverrides {
    std::optional<Contraction> Q;
    std::optional<StrongPositiveOperator> B;
    std::optional<double> gamma;
    std::optional<StepSequence> steps;
    std::optional<InnerSolve> inner;
    std::optional<OuterStop> stop;
    std::optional<HilbertPoint> reference_solution;
    bool keep_iterates = false;
};

/// alpha_n = 1e-4 / (n + 1). The application maps are strict contractions
/// near their fixed points, and the fixed-point residual of the iterates
/// decays like alpha_n ||gamma Q(z) - B z||, so a small scale converges
/// fastest.
StepSequence default_application_steps();

/// Assembles a full scheme around S on the space of `like`.
SchemeConfig application_scheme(Nonexpansive S, const HilbertPoint& like, const SchemeOverrides& overrides);

struct Solution {
    HilbertPoint point;
    IterationTrace trace;
};

Solution solve_vip(const VIProblem& problem, const SchemeOverrides& overrides = {},
                   std::optional<HilbertPoint> x0 = std::nullopt);

/// ||z - P_K(z - lambda A z)||
double natural_residual(const VIProblem& problem, const HilbertPoint& z);

/// Grid solution in the trapezoid-weighted space.
Solution solve_fredholm(const FredholmProblem& problem, const SchemeOverrides& overrides = {},
                        std::optional<HilbertPoint> x0 = std::nullopt);

/// Direct solve of (I - K_w) x = g, (K_w)_ij = w_j k(t_i, t_j), by Gaussian
/// elimination. Linear kernels only.
HilbertPoint fredholm_oracle(const FredholmProblem& problem);

struct PeriodicSolution {
    HilbertPoint initial_value;
    IterationTrace trace;
    /// ||u(omega) - v|| from one more integration
    double post_check_residual = 0.0;
};

/// Initial value of an omega-periodic solution. Throws NumericalError when
/// the post-check exceeds `post_check_tol`.
PeriodicSolution find_periodic(const EvolutionProblem& problem, const SchemeOverrides& overrides = {},
                               std::optional<HilbertPoint> v0 = std::nullopt, double post_check_tol = 1e-6,
                               OdeSolveOptions ode = {});

} // namespace gvimr
