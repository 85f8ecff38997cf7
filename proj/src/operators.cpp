#include "gvimr/operators.hpp"

#include "gvimr/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace gvimr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(std::size_t expected, const HilbertPoint& x, const char* what) {
    if (x.dim() != expected) {
        throw StructuralError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                              ", got " + std::to_string(x.dim()));
    }
}

// Orthonormal basis of span(basis) in the inner product of `like`'s space.
std::vector<HilbertPoint> orthonormalize(const std::vector<std::vector<double>>& basis,
                                         const HilbertPoint& like) {
    std::vector<HilbertPoint> out;
    for (const auto& b : basis) {
        HilbertPoint v = like.with_coords(b);
        for (const auto& e : out) v -= inner(v, e) * e;
        const double n = norm(v);
        if (n > 1e-12) out.push_back((1.0 / n) * v);
    }
    return out;
}

} // namespace

// ------------------------------------------------------------- ConvexSet

ConvexSet::ConvexSet(Shape shape) : shape_(std::move(shape)), dim_(0) {
    dim_ = std::visit(
        overloaded{
            [](const Box& b) {
                if (b.lo.empty() || b.lo.size() != b.hi.size())
                    throw StructuralError("box bounds must have equal, non-zero length");
                for (std::size_t i = 0; i < b.lo.size(); ++i)
                    if (!(b.lo[i] <= b.hi[i])) throw ParameterError("box requires lo <= hi");
                return b.lo.size();
            },
            [](const Ball& b) {
                if (b.center.empty()) throw StructuralError("ball center must be non-empty");
                if (!(b.radius > 0.0)) throw ParameterError("ball requires radius > 0");
                return b.center.size();
            },
            [](const Halfspace& h) {
                if (h.a.empty()) throw StructuralError("halfspace normal must be non-empty");
                if (std::all_of(h.a.begin(), h.a.end(), [](double v) { return v == 0.0; }))
                    throw ParameterError("halfspace requires a != 0");
                return h.a.size();
            },
            [](const AffineSubspace& s) {
                if (s.offset.empty()) throw StructuralError("affine offset must be non-empty");
                for (const auto& b : s.basis)
                    if (b.size() != s.offset.size())
                        throw StructuralError("affine basis vectors must match the offset dimension");
                return s.offset.size();
            },
        },
        shape_);
}

std::string_view ConvexSet::tag() const {
    return std::visit(overloaded{
                          [](const Box&) { return std::string_view("box"); },
                          [](const Ball&) { return std::string_view("ball"); },
                          [](const Halfspace&) { return std::string_view("halfspace"); },
                          [](const AffineSubspace&) { return std::string_view("affine"); },
                      },
                      shape_);
}

bool ConvexSet::contains(const HilbertPoint& x, double tol) const {
    require_dim(dim_, x, "ConvexSet::contains");
    return std::visit(
        overloaded{
            [&](const Box& b) {
                for (std::size_t i = 0; i < dim_; ++i)
                    if (x[i] < b.lo[i] - tol || x[i] > b.hi[i] + tol) return false;
                return true;
            },
            [&](const Ball& b) { return distance(x, x.with_coords(b.center)) <= b.radius + tol; },
            [&](const Halfspace& h) {
                const auto a = x.with_coords(h.a);
                return inner(a, x) <= h.b + tol * norm(a);
            },
            [&](const AffineSubspace&) { return distance(x, project(*this, x)) <= tol; },
        },
        shape_);
}

HilbertPoint project(const ConvexSet& K, const HilbertPoint& x) {
    require_dim(K.dim(), x, "project");
    return std::visit(
        overloaded{
            [&](const Box& b) {
                std::vector<double> c(x.coords().begin(), x.coords().end());
                for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::clamp(c[i], b.lo[i], b.hi[i]);
                return x.with_coords(std::move(c));
            },
            [&](const Ball& b) {
                const auto center = x.with_coords(b.center);
                const auto diff = x - center;
                const double n = norm(diff);
                if (n <= b.radius) return x;
                return center + (b.radius / n) * diff;
            },
            [&](const Halfspace& h) {
                const auto a = x.with_coords(h.a);
                const double excess = inner(a, x) - h.b;
                if (excess <= 0.0) return x;
                return x - (excess / inner(a, a)) * a;
            },
            [&](const AffineSubspace& s) {
                const auto offset = x.with_coords(s.offset);
                const auto rel = x - offset;
                HilbertPoint out = offset;
                for (const auto& e : orthonormalize(s.basis, x)) out += inner(rel, e) * e;
                return out;
            },
        },
        K.shape());
}

// ------------------------------------------------------------ Contraction

Contraction::Contraction(PointMap rule, double alpha) : rule_(std::move(rule)), alpha_(alpha) {
    if (!rule_) throw StructuralError("contraction rule is empty");
    if (!(alpha_ > 0.0 && alpha_ < 1.0))
        throw ParameterError("contraction constant alpha must lie in (0, 1), got " +
                             std::to_string(alpha_));
}

Contraction Contraction::scaled(double factor) {
    return Contraction([factor](const HilbertPoint& x) { return factor * x; }, std::abs(factor));
}

Contraction Contraction::constant(std::vector<double> value, double alpha) {
    return Contraction(
        [value = std::move(value)](const HilbertPoint& x) {
            require_dim(value.size(), x, "constant contraction");
            return x.with_coords(value);
        },
        alpha);
}

Contraction Contraction::affine(LinearOperator M, std::vector<double> shift,
                                std::optional<double> alpha) {
    if (shift.size() != M.dim()) throw StructuralError("affine contraction: shift dimension mismatch");
    const double a = alpha ? *alpha : operator_norm(M);
    return Contraction(
        [M = std::move(M), shift = std::move(shift)](const HilbertPoint& x) {
            return M.apply(x) + x.with_coords(shift);
        },
        a);
}

// ----------------------------------------------------------- Nonexpansive

std::string_view to_string(NonexpansiveKind kind) {
    switch (kind) {
    case NonexpansiveKind::identity: return "identity";
    case NonexpansiveKind::negation: return "negation";
    case NonexpansiveKind::projection: return "projection";
    case NonexpansiveKind::averaged: return "averaged";
    case NonexpansiveKind::vip: return "vip";
    case NonexpansiveKind::fredholm: return "fredholm";
    case NonexpansiveKind::poincare: return "poincare";
    case NonexpansiveKind::composition: return "composition";
    }
    return "unknown";
}

std::optional<NonexpansiveKind> nonexpansive_kind_from_string(std::string_view name) {
    static constexpr std::array kinds{
        NonexpansiveKind::identity, NonexpansiveKind::negation, NonexpansiveKind::projection,
        NonexpansiveKind::averaged, NonexpansiveKind::vip,      NonexpansiveKind::fredholm,
        NonexpansiveKind::poincare, NonexpansiveKind::composition,
    };
    for (auto k : kinds)
        if (to_string(k) == name) return k;
    return std::nullopt;
}

Nonexpansive::Nonexpansive(NonexpansiveKind kind, PointMap rule, std::optional<PointMap> fix_projection)
    : kind_(kind), rule_(std::move(rule)), fix_projection_(std::move(fix_projection)) {
    if (!rule_) throw StructuralError("nonexpansive rule is empty");
}

Nonexpansive Nonexpansive::identity() {
    PointMap id = [](const HilbertPoint& x) { return x; };
    return Nonexpansive(NonexpansiveKind::identity, id, id);
}

Nonexpansive Nonexpansive::negation() {
    return Nonexpansive(
        NonexpansiveKind::negation, [](const HilbertPoint& x) { return -x; },
        PointMap([](const HilbertPoint& x) { return HilbertPoint::zeros_like(x); }));
}

Nonexpansive Nonexpansive::projection(ConvexSet K) {
    PointMap p = [K = std::move(K)](const HilbertPoint& x) { return project(K, x); };
    return Nonexpansive(NonexpansiveKind::projection, p, p);
}

Nonexpansive Nonexpansive::averaged(double theta, const Nonexpansive& inner_map) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ParameterError("averaging weight must lie in (0, 1]");
    return Nonexpansive(
        NonexpansiveKind::averaged,
        [theta, T = inner_map.rule()](const HilbertPoint& x) { return (1.0 - theta) * x + theta * T(x); },
        inner_map.fix_projection());
}

Nonexpansive Nonexpansive::composition(std::vector<Nonexpansive> maps) {
    if (maps.empty()) throw StructuralError("composition needs at least one map");
    std::vector<PointMap> rules;
    for (const auto& m : maps) rules.push_back(m.rule());
    std::optional<PointMap> fix;
    if (maps.size() == 1) fix = maps.front().fix_projection();
    return Nonexpansive(
        NonexpansiveKind::composition,
        [rules = std::move(rules)](const HilbertPoint& x) {
            HilbertPoint y = x;
            for (const auto& r : rules) y = r(y);
            return y;
        },
        std::move(fix));
}

// ------------------------------------------------- StrongPositiveOperator

StrongPositiveOperator::StrongPositiveOperator(LinearOperator op, std::optional<Weights> weights)
    : op_(std::move(op)), weights_(std::move(weights)), gamma_bar_(0.0), norm_(0.0), is_identity_(false) {
    const std::size_t d = op_.dim();
    if (weights_ && weights_->size() != d) throw StructuralError("B dimension does not match weights");
    bool diagonal = true;
    for (std::size_t i = 0; i < d && diagonal; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j && op_(i, j) != 0.0) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        std::vector<double> dg(d);
        for (std::size_t i = 0; i < d; ++i) dg[i] = op_(i, i);
        gamma_bar_ = *std::min_element(dg.begin(), dg.end());
        norm_ = std::abs(*std::max_element(dg.begin(), dg.end(),
                                           [](double a, double b) { return std::abs(a) < std::abs(b); }));
        is_identity_ = std::all_of(dg.begin(), dg.end(), [](double v) { return v == 1.0; });
        diag_ = std::move(dg);
    } else {
        // self-adjointness in <u, v> = sum w_i u_i v_i means W M symmetric
        double scale = 0.0;
        for (double v : op_.data()) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                const double wi = weights_ ? (*weights_)[i] : 1.0;
                const double wj = weights_ ? (*weights_)[j] : 1.0;
                if (std::abs(wi * op_(i, j) - wj * op_(j, i)) > 1e-12 * scale * std::max(wi, wj))
                    throw ParameterError("B must be self-adjoint in the space's inner product");
            }
        gamma_bar_ = smallest_eigenvalue(op_, weights_);
        norm_ = operator_norm(op_, weights_);
    }
    if (!(gamma_bar_ > 0.0))
        throw ParameterError("B is not strongly positive: smallest eigenvalue " + std::to_string(gamma_bar_));
}

StrongPositiveOperator StrongPositiveOperator::identity(std::size_t d, std::optional<Weights> weights) {
    return StrongPositiveOperator(LinearOperator::identity(d), std::move(weights));
}

HilbertPoint StrongPositiveOperator::apply(const HilbertPoint& x) const {
    if (is_identity_) {
        require_dim(op_.dim(), x, "B");
        return x;
    }
    if (diag_) {
        require_dim(op_.dim(), x, "B");
        std::vector<double> c(x.coords().begin(), x.coords().end());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] *= (*diag_)[i];
        return x.with_coords(std::move(c));
    }
    return op_.apply(x);
}

// ------------------------------------------------------- MonotoneOperator

MonotoneOperator::MonotoneOperator(PointMap rule, double theta, double mu)
    : rule_(std::move(rule)), theta_(theta), mu_(mu) {
    if (!rule_) throw StructuralError("monotone operator rule is empty");
    if (!(theta_ > 0.0)) throw ParameterError("Lipschitz constant theta must be > 0");
    if (!(mu_ > 0.0)) throw ParameterError("inverse strong monotonicity constant mu must be > 0");
}

MonotoneOperator MonotoneOperator::affine(LinearOperator M, std::vector<double> shift,
                                          std::optional<double> theta, std::optional<double> mu) {
    if (shift.size() != M.dim()) throw StructuralError("affine monotone operator: shift dimension mismatch");
    if ((!theta || !mu) && !M.symmetric())
        throw ParameterError("non-symmetric monotone operator needs declared theta and mu");
    const double n = (!theta || !mu) ? operator_norm(M) : 0.0;
    if ((!theta || !mu) && n == 0.0) throw ParameterError("zero matrix: use MonotoneOperator::zero");
    const double th = theta ? *theta : n;
    const double m = mu ? *mu : 1.0 / n;
    return MonotoneOperator(
        [M = std::move(M), shift = std::move(shift)](const HilbertPoint& x) {
            return M.apply(x) - x.with_coords(shift);
        },
        th, m);
}

MonotoneOperator MonotoneOperator::zero(double mu) {
    return MonotoneOperator([](const HilbertPoint& x) { return HilbertPoint::zeros_like(x); }, 1.0, mu);
}

// ----------------------------------------------------------- constructors

Nonexpansive make_vip_operator(const ConvexSet& K, const MonotoneOperator& A, double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("VIP step lambda must be > 0");
    if (!(lambda < 2.0 * A.mu()))
        throw ParameterError("VIP step lambda must be < 2 mu = " + std::to_string(2.0 * A.mu()));
    return Nonexpansive(NonexpansiveKind::vip, [K, A, lambda](const HilbertPoint& x) {
        return project(K, x - lambda * A(x));
    });
}

Nonexpansive make_fredholm_operator(const FredholmProblem& problem) {
    const std::size_t m = problem.grid_m;
    const auto t = problem.nodes();
    const auto w = problem.weights();
    const auto g = problem.sampled_source();
    auto check = [m, w](const HilbertPoint& x) {
        if (x.dim() != m) throw StructuralError("Fredholm operator expects a grid vector of size " + std::to_string(m));
        if (!x.weights() || !(*x.weights() == w))
            throw StructuralError("Fredholm operator expects trapezoid-weighted grid vectors");
    };
    if (problem.is_linear()) {
        std::vector<double> kw(m * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) kw[i * m + j] = w[j] * problem.linear_kernel(t[i], t[j]);
        return Nonexpansive(NonexpansiveKind::fredholm, [m, kw = std::move(kw), g, check](const HilbertPoint& x) {
            check(x);
            HilbertPoint y = g;
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0.0;
                const double* row = kw.data() + i * m;
                for (std::size_t j = 0; j < m; ++j) s += row[j] * x[j];
                y[i] += s;
            }
            return y;
        });
    }
    return Nonexpansive(NonexpansiveKind::fredholm, [m, t, w, g, F = problem.kernel, check](const HilbertPoint& x) {
        check(x);
        HilbertPoint y = g;
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += w[j] * F(t[i], t[j], x[j]);
            y[i] += s;
        }
        return y;
    });
}

std::vector<double> integrate_period(const EvolutionProblem& problem, std::span<const double> v,
                                     OdeSolveOptions options) {
    const std::size_t d = problem.dim;
    if (v.size() != d) throw StructuralError("initial value dimension mismatch");
    const double h = problem.omega / static_cast<double>(problem.ode_steps);
    std::vector<double> u(v.begin(), v.end()), y(d), mid(d), next(d);
    auto enorm = [](const std::vector<double>& a) {
        double s = 0.0;
        for (double c : a) s += c * c;
        return std::sqrt(s);
    };
    for (std::size_t k = 0; k < problem.ode_steps; ++k) {
        const double tm = (static_cast<double>(k) + 0.5) * h;
        const LinearOperator Am = problem.A(tm);
        y = u;
        double damping = 1.0;
        double prev_diff = std::numeric_limits<double>::infinity();
        double diff = prev_diff;
        bool done = false;
        for (std::size_t it = 0; it < options.max_iter; ++it) {
            for (std::size_t i = 0; i < d; ++i) mid[i] = 0.5 * (u[i] + y[i]);
            const auto f = problem.f(tm, mid);
            diff = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                double am = 0.0;
                for (std::size_t j = 0; j < d; ++j) am += Am(i, j) * mid[j];
                const double target = u[i] + h * (f[i] - am);
                next[i] = (1.0 - damping) * y[i] + damping * target;
                diff += (next[i] - y[i]) * (next[i] - y[i]);
            }
            diff = std::sqrt(diff);
            y.swap(next);
            if (diff <= options.tol * std::max(1.0, enorm(y))) {
                done = true;
                break;
            }
            if (diff > prev_diff) damping *= 0.5;
            prev_diff = diff;
        }
        if (!done)
            throw NumericalError("implicit midpoint ODE step " + std::to_string(k) + " did not converge", diff, k);
        u = y;
    }
    return u;
}

Nonexpansive make_poincare_map(const EvolutionProblem& problem, OdeSolveOptions options) {
    return Nonexpansive(NonexpansiveKind::poincare, [problem, options](const HilbertPoint& v) {
        return v.with_coords(integrate_period(problem, v.coords(), options));
    });
}

double estimate_lipschitz(const PointMap& map, std::size_t samples, std::span<const double> lo,
                          std::span<const double> hi, std::uint64_t seed, std::optional<Weights> weights) {
    if (samples < 2) throw ParameterError("estimate_lipschitz needs at least 2 samples");
    if (lo.size() != hi.size() || lo.empty()) throw StructuralError("sampling box bounds mismatch");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] {
        std::vector<double> c(lo.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
        return HilbertPoint(std::move(c), weights);
    };
    double best = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const auto x = draw();
        const auto y = draw();
        const double dx = distance(x, y);
        if (dx == 0.0) continue;
        best = std::max(best, distance(map(x), map(y)) / dx);
    }
    return best;
}

} // namespace gvimr
