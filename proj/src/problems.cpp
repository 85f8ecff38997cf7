#include "gvimr/problems.hpp"

#include "gvimr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gvimr {

FredholmProblem::FredholmProblem(Kernel kernel_, Source g_, std::size_t grid_m_)
    : kernel(std::move(kernel_)), g(std::move(g_)), grid_m(grid_m_) {
    if (!kernel || !g) throw StructuralError("Fredholm problem needs a kernel and a source term");
    if (grid_m < 2) throw ParameterError("Fredholm grid needs m >= 2 nodes");
}

FredholmProblem FredholmProblem::linear(LinearKernel k, Source g, std::size_t grid_m) {
    if (!k) throw StructuralError("linear kernel is empty");
    FredholmProblem p([k](double t, double s, double x) { return k(t, s) * x; }, std::move(g), grid_m);
    p.linear_kernel = std::move(k);
    return p;
}

std::vector<double> FredholmProblem::nodes() const {
    std::vector<double> t(grid_m);
    for (std::size_t i = 0; i < grid_m; ++i) t[i] = static_cast<double>(i) / static_cast<double>(grid_m - 1);
    return t;
}

HilbertPoint FredholmProblem::sampled_source() const {
    auto t = nodes();
    for (double& v : t) v = g(v);
    return HilbertPoint(std::move(t), weights());
}

EvolutionProblem::EvolutionProblem(std::size_t dim_, MatrixFn A_, Forcing f_, double omega_,
                                   std::size_t ode_steps_)
    : dim(dim_), A(std::move(A_)), f(std::move(f_)), omega(omega_), ode_steps(ode_steps_) {
    if (dim == 0) throw StructuralError("evolution problem needs dimension >= 1");
    if (!A || !f) throw StructuralError("evolution problem needs A(t) and f(t, u)");
    if (!(omega > 0.0)) throw ParameterError("period omega must be > 0");
    if (ode_steps < 100) throw ParameterError("Poincare map needs at least 100 ODE steps");

    const auto a0 = A(0.0);
    const auto aw = A(omega);
    if (a0.dim() != dim || aw.dim() != dim) throw StructuralError("A(t) dimension mismatch");
    for (std::size_t k = 0; k < dim * dim; ++k)
        if (std::abs(a0.data()[k] - aw.data()[k]) > 1e-10)
            throw ParameterError("A(t) is not periodic with period omega");

    // deterministic spot-check of f at a few states
    for (double scale : {0.0, 0.5, -1.3, 2.0}) {
        std::vector<double> u(dim);
        for (std::size_t i = 0; i < dim; ++i) u[i] = scale * (1.0 + 0.25 * static_cast<double>(i));
        const auto f0 = f(0.0, u);
        const auto fw = f(omega, u);
        if (f0.size() != dim || fw.size() != dim) throw StructuralError("f(t, u) dimension mismatch");
        double diff = 0.0;
        for (std::size_t i = 0; i < dim; ++i) diff += (f0[i] - fw[i]) * (f0[i] - fw[i]);
        if (std::sqrt(diff) > 1e-10) throw ParameterError("f(t, u) is not periodic with period omega");
    }
}

} // namespace gvimr
