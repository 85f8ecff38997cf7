#pragma once

#include "gvimr/hilbert.hpp"
#include "gvimr/problems.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gvimr {

using PointMap = std::function<HilbertPoint(const HilbertPoint&)>;

// ------------------------------------------------------------ convex sets

struct Box {
    std::vector<double> lo, hi;
};
struct Ball {
    std::vector<double> center;
    double radius;
};
/// { x : <a, x> <= b }
struct Halfspace {
    std::vector<double> a;
    double b;
};
/// offset + span(basis)
struct AffineSubspace {
    std::vector<std::vector<double>> basis;
    std::vector<double> offset;
};

/// Closed convex set with a closed-form metric projection.
class ConvexSet {
public:
    using Shape = std::variant<Box, Ball, Halfspace, AffineSubspace>;

    /// Validates lo <= hi, radius > 0, a != 0 and consistent dimensions.
    explicit ConvexSet(Shape shape);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t dim() const noexcept { return dim_; }
    std::string_view tag() const;

    /// Membership up to `tol` (in the norm of x's space).
    bool contains(const HilbertPoint& x, double tol = 1e-12) const;

private:
    Shape shape_;
    std::size_t dim_;
};

/// Nearest point of K to x in the inner product of x's space.
HilbertPoint project(const ConvexSet& K, const HilbertPoint& x);

// ------------------------------------------------------------- map classes

/// Map with declared Lipschitz constant alpha in (0, 1).
class Contraction {
public:
    Contraction(PointMap rule, double alpha);

    /// x -> factor * x, alpha = |factor|.
    static Contraction scaled(double factor);
    /// x -> value (Lipschitz 0); alpha is the declared constant.
    static Contraction constant(std::vector<double> value, double alpha = 0.01);
    /// x -> M x + shift, alpha = operator norm of M unless declared.
    static Contraction affine(LinearOperator M, std::vector<double> shift,
                              std::optional<double> alpha = std::nullopt);

    HilbertPoint operator()(const HilbertPoint& x) const { return rule_(x); }
    double alpha() const noexcept { return alpha_; }

private:
    PointMap rule_;
    double alpha_;
};

enum class NonexpansiveKind {
    identity,
    negation,
    projection,
    averaged,
    vip,
    fredholm,
    poincare,
    composition,
};

std::string_view to_string(NonexpansiveKind kind);
std::optional<NonexpansiveKind> nonexpansive_kind_from_string(std::string_view name);

/// Map with ||S x - S y|| <= ||x - y||. Carries the metric projection onto
/// Fix(S) when it is known in closed form.
class Nonexpansive {
public:
    Nonexpansive(NonexpansiveKind kind, PointMap rule,
                 std::optional<PointMap> fix_projection = std::nullopt);

    static Nonexpansive identity();
    static Nonexpansive negation();
    static Nonexpansive projection(ConvexSet K);
    /// (1 - theta) I + theta T, theta in (0, 1]. Fix is that of T.
    static Nonexpansive averaged(double theta, const Nonexpansive& inner);
    /// maps[0] applied first.
    static Nonexpansive composition(std::vector<Nonexpansive> maps);

    HilbertPoint operator()(const HilbertPoint& x) const { return rule_(x); }
    NonexpansiveKind kind() const noexcept { return kind_; }
    const PointMap& rule() const noexcept { return rule_; }
    const std::optional<PointMap>& fix_projection() const noexcept { return fix_projection_; }

private:
    NonexpansiveKind kind_;
    PointMap rule_;
    std::optional<PointMap> fix_projection_;
};

/// Self-adjoint B with <Bx, x> >= gamma_bar ||x||^2, gamma_bar > 0.
class StrongPositiveOperator {
public:
    /// gamma_bar is the smallest eigenvalue (inverse power iteration). In a
    /// weighted space the matrix must be self-adjoint for that inner product.
    explicit StrongPositiveOperator(LinearOperator op,
                                    std::optional<Weights> weights = std::nullopt);

    static StrongPositiveOperator identity(std::size_t d,
                                           std::optional<Weights> weights = std::nullopt);

    const LinearOperator& op() const noexcept { return op_; }
    double gamma_bar() const noexcept { return gamma_bar_; }
    /// Operator norm in the space's inner product.
    double norm() const noexcept { return norm_; }
    bool is_identity() const noexcept { return is_identity_; }
    const std::optional<Weights>& weights() const noexcept { return weights_; }

    HilbertPoint apply(const HilbertPoint& x) const;
    HilbertPoint operator()(const HilbertPoint& x) const { return apply(x); }

private:
    LinearOperator op_;
    std::optional<Weights> weights_;
    double gamma_bar_;
    double norm_;
    bool is_identity_;
    std::optional<std::vector<double>> diag_;
};

/// theta-Lipschitz, mu-inverse-strongly-monotone single-valued map:
/// <Ax - Ay, x - y> >= mu ||Ax - Ay||^2.
class MonotoneOperator {
public:
    MonotoneOperator(PointMap rule, double theta, double mu);

    /// A(x) = M x - shift. For symmetric positive semidefinite M the
    /// constants default to theta = ||M|| and mu = 1 / ||M||.
    static MonotoneOperator affine(LinearOperator M, std::vector<double> shift,
                                   std::optional<double> theta = std::nullopt,
                                   std::optional<double> mu = std::nullopt);
    /// A = 0, which is mu-ism for every mu.
    static MonotoneOperator zero(double mu = 1.0);

    HilbertPoint operator()(const HilbertPoint& x) const { return rule_(x); }
    double theta() const noexcept { return theta_; }
    double mu() const noexcept { return mu_; }

private:
    PointMap rule_;
    double theta_;
    double mu_;
};

// ------------------------------------------------------------ constructors

/// S = P_K (I - lambda A). Requires 0 < lambda < 2 mu.
Nonexpansive make_vip_operator(const ConvexSet& K, const MonotoneOperator& A, double lambda);

/// (S x)_i = g(t_i) + sum_j w_j F(t_i, t_j, x_j) with trapezoid weights w.
Nonexpansive make_fredholm_operator(const FredholmProblem& problem);

/// Settings of the implicit midpoint ODE integrator used by the Poincare map.
struct OdeSolveOptions {
    double tol = 1e-12;
    std::size_t max_iter = 500;
};

/// S v = u(omega) where u solves the evolution problem with u(0) = v,
/// integrated by the implicit midpoint rule with problem.ode_steps steps.
Nonexpansive make_poincare_map(const EvolutionProblem& problem, OdeSolveOptions options = {});

/// One implicit midpoint integration over [0, omega]; exposed for post-checks.
std::vector<double> integrate_period(const EvolutionProblem& problem, std::span<const double> v,
                                     OdeSolveOptions options = {});

/// Largest ||map(x) - map(y)|| / ||x - y|| over `samples` random pairs drawn
/// uniformly from the box [lo, hi]. Deterministic for a given seed.
double estimate_lipschitz(const PointMap& map, std::size_t samples, std::span<const double> lo,
                          std::span<const double> hi, std::uint64_t seed = 0x5eed,
                          std::optional<Weights> weights = std::nullopt);

} // namespace gvimr
