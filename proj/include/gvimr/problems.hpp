#pragma once

#include "gvimr/hilbert.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace gvimr {

/// x(t) = g(t) + \int_0^1 F(t, s, x(s)) ds on a uniform grid of [0, 1].
///
/// The kernel must be 1-Lipschitz in its third argument. When the kernel is
/// linear, F(t, s, x) = k(t, s) x, keep `linear_kernel` so the discretized
/// operator can be assembled once as a matrix.
struct FredholmProblem {
    using Kernel = std::function<double(double t, double s, double x)>;
    using LinearKernel = std::function<double(double t, double s)>;
    using Source = std::function<double(double t)>;

    Kernel kernel;
    Source g;
    std::size_t grid_m = 101;
    LinearKernel linear_kernel;

    FredholmProblem(Kernel kernel, Source g, std::size_t grid_m);
    static FredholmProblem linear(LinearKernel k, Source g, std::size_t grid_m);

    bool is_linear() const noexcept { return static_cast<bool>(linear_kernel); }
    std::vector<double> nodes() const;
    Weights weights() const { return Weights::trapezoid(grid_m); }
    /// g sampled on the grid, as a point of the weighted space.
    HilbertPoint sampled_source() const;
};

/// du/dt + A(t) u = f(t, u), with A and f periodic of period omega.
struct EvolutionProblem {
    using MatrixFn = std::function<LinearOperator(double t)>;
    using Forcing = std::function<std::vector<double>(double t, std::span<const double> u)>;

    std::size_t dim;
    MatrixFn A;
    Forcing f;
    double omega;
    std::size_t ode_steps;

    /// Validates omega > 0, ode_steps >= 100 and spot-checks periodicity of
    /// A and f to 1e-10.
    EvolutionProblem(std::size_t dim, MatrixFn A, Forcing f, double omega,
                     std::size_t ode_steps = 1000);
};

} // namespace gvimr
