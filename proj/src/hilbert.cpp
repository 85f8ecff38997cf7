#include "gvimr/hilbert.hpp"

#include "gvimr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gvimr {

namespace {

constexpr double kPowerTol = 1e-12;
constexpr std::size_t kPowerMaxSteps = 10'000;

double weighted_dot(std::span<const double> u, std::span<const double> v,
                    const std::optional<Weights>& w) {
    double s = 0.0;
    if (w) {
        for (std::size_t i = 0; i < u.size(); ++i) s += (*w)[i] * u[i] * v[i];
    } else {
        for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    }
    return s;
}

void check_weights(const LinearOperator& op, const std::optional<Weights>& weights) {
    if (weights && weights->size() != op.dim()) {
        throw StructuralError("operator dimension " + std::to_string(op.dim()) +
                              " does not match weight dimension " +
                              std::to_string(weights->size()));
    }
}

std::vector<double> matvec(const LinearOperator& op, std::span<const double> x) {
    const std::size_t d = op.dim();
    std::vector<double> y(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += op(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

} // namespace

// ---------------------------------------------------------------- Weights

Weights::Weights(std::vector<double> values) {
    if (values.empty()) throw StructuralError("weights must be non-empty");
    for (double w : values) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw ParameterError("quadrature weights must be strictly positive");
        }
    }
    values_ = std::make_shared<const std::vector<double>>(std::move(values));
}

Weights Weights::trapezoid(std::size_t m) {
    if (m < 2) throw ParameterError("trapezoid grid needs m >= 2 nodes");
    const double h = 1.0 / static_cast<double>(m - 1);
    std::vector<double> w(m, h);
    w.front() = w.back() = 0.5 * h;
    return Weights(std::move(w));
}

bool operator==(const Weights& a, const Weights& b) {
    if (a.values_ == b.values_) return true;
    return *a.values_ == *b.values_;
}

// ----------------------------------------------------------- HilbertPoint

HilbertPoint::HilbertPoint(std::vector<double> coords, std::optional<Weights> weights)
    : coords_(std::move(coords)), weights_(std::move(weights)) {
    if (coords_.empty()) throw StructuralError("a point needs dimension >= 1");
    if (weights_ && weights_->size() != coords_.size()) {
        throw StructuralError("point of dimension " + std::to_string(coords_.size()) +
                              " given " + std::to_string(weights_->size()) + " weights");
    }
}

HilbertPoint HilbertPoint::zeros(std::size_t d, std::optional<Weights> weights) {
    return HilbertPoint(std::vector<double>(d, 0.0), std::move(weights));
}

HilbertPoint HilbertPoint::zeros_like(const HilbertPoint& like) {
    return zeros(like.dim(), like.weights());
}

HilbertPoint HilbertPoint::with_coords(std::vector<double> coords) const {
    return HilbertPoint(std::move(coords), weights_);
}

HilbertPoint& HilbertPoint::operator+=(const HilbertPoint& other) {
    require_same_space(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

HilbertPoint& HilbertPoint::operator-=(const HilbertPoint& other) {
    require_same_space(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

HilbertPoint& HilbertPoint::operator*=(double s) {
    for (double& c : coords_) c *= s;
    return *this;
}

bool operator==(const HilbertPoint& a, const HilbertPoint& b) {
    return same_space(a, b) && a.coords_ == b.coords_;
}

bool same_space(const HilbertPoint& u, const HilbertPoint& v) {
    if (u.dim() != v.dim()) return false;
    if (u.weights().has_value() != v.weights().has_value()) return false;
    return !u.weights() || *u.weights() == *v.weights();
}

void require_same_space(const HilbertPoint& u, const HilbertPoint& v) {
    if (u.dim() != v.dim()) {
        throw StructuralError("dimension mismatch: " + std::to_string(u.dim()) + " vs " +
                              std::to_string(v.dim()));
    }
    if (!same_space(u, v)) throw StructuralError("weight mismatch between points");
}

double inner(const HilbertPoint& u, const HilbertPoint& v) {
    require_same_space(u, v);
    return weighted_dot(u.coords(), v.coords(), u.weights());
}

double norm(const HilbertPoint& u) {
    return std::sqrt(weighted_dot(u.coords(), u.coords(), u.weights()));
}

double distance(const HilbertPoint& u, const HilbertPoint& v) { return norm(u - v); }

double sup_norm(const HilbertPoint& u) {
    double m = 0.0;
    for (double c : u.coords()) m = std::max(m, std::abs(c));
    return m;
}

// --------------------------------------------------------- LinearOperator

LinearOperator::LinearOperator(std::size_t d, std::vector<double> row_major, bool symmetric)
    : d_(d), m_(std::move(row_major)), symmetric_(symmetric) {
    if (d_ == 0) throw StructuralError("operator dimension must be >= 1");
    if (m_.size() != d_ * d_) throw StructuralError("operator data is not d x d");
    if (symmetric_) {
        for (std::size_t i = 0; i < d_; ++i)
            for (std::size_t j = i + 1; j < d_; ++j)
                if (m_[i * d_ + j] != m_[j * d_ + i])
                    throw StructuralError("operator flagged symmetric but is not");
    }
}

LinearOperator LinearOperator::identity(std::size_t d) {
    std::vector<double> m(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
    return LinearOperator(d, std::move(m), true);
}

LinearOperator LinearOperator::diagonal(std::span<const double> diag) {
    const std::size_t d = diag.size();
    std::vector<double> m(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = diag[i];
    return LinearOperator(d, std::move(m), true);
}

LinearOperator LinearOperator::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t d = rows.size();
    std::vector<double> m;
    m.reserve(d * d);
    for (const auto& r : rows) {
        if (r.size() != d) throw StructuralError("matrix rows must have length d");
        m.insert(m.end(), r.begin(), r.end());
    }
    return LinearOperator(d, std::move(m), false);
}

LinearOperator LinearOperator::symmetric_from_upper(const std::vector<std::vector<double>>& rows) {
    const std::size_t d = rows.size();
    std::vector<double> m(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) throw StructuralError("matrix rows must have length d");
        for (std::size_t j = i; j < d; ++j) m[i * d + j] = m[j * d + i] = rows[i][j];
    }
    return LinearOperator(d, std::move(m), true);
}

HilbertPoint LinearOperator::apply(const HilbertPoint& x) const {
    if (x.dim() != d_) {
        throw StructuralError("operator of dimension " + std::to_string(d_) +
                              " applied to point of dimension " + std::to_string(x.dim()));
    }
    return x.with_coords(matvec(*this, x.coords()));
}

LinearOperator LinearOperator::adjoint(const std::optional<Weights>& weights) const {
    check_weights(*this, weights);
    std::vector<double> t(d_ * d_);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) {
            const double scale = weights ? (*weights)[j] / (*weights)[i] : 1.0;
            t[i * d_ + j] = m_[j * d_ + i] * scale;
        }
    return LinearOperator(d_, std::move(t), symmetric_ && !weights);
}

LinearOperator LinearOperator::shifted(double a, double b) const {
    std::vector<double> m(m_.size());
    for (std::size_t k = 0; k < m_.size(); ++k) m[k] = b * m_[k];
    for (std::size_t i = 0; i < d_; ++i) m[i * d_ + i] += a;
    return LinearOperator(d_, std::move(m), symmetric_);
}

// ------------------------------------------------------- spectral helpers

namespace {

// Power iteration on op*op for the largest singular value starting from v.
// Returns nullopt if the iterate collapses to zero.
std::optional<double> power_iterate(const LinearOperator& op, const LinearOperator& adj,
                                    std::vector<double> v, const std::optional<Weights>& w) {
    const double n0 = std::sqrt(weighted_dot(v, v, w));
    for (double& c : v) c /= n0;
    double sigma = 0.0;
    for (std::size_t step = 0; step < kPowerMaxSteps; ++step) {
        auto lv = matvec(op, v);
        const double next = std::sqrt(weighted_dot(lv, lv, w));
        if (next == 0.0) return step == 0 ? std::nullopt : std::optional<double>(0.0);
        if (step > 0 && std::abs(next - sigma) <= kPowerTol * next) return next;
        sigma = next;
        v = matvec(adj, lv);
        const double nv = std::sqrt(weighted_dot(v, v, w));
        if (nv == 0.0) return sigma;
        for (double& c : v) c /= nv;
    }
    throw NumericalError("power iteration did not converge in 10000 steps", sigma);
}

// Second start for the spectral helpers. All-ones is an eigenvector of many
// structured matrices and can hide the extreme eigenvalue.
std::vector<double> generic_start(std::size_t d) {
    std::vector<double> v(d);
    for (std::size_t k = 0; k < d; ++k) v[k] = 1.0 + 0.5 * std::sin(1.0 + 2.399963229728653 * static_cast<double>(k));
    return v;
}

} // namespace


double operator_norm(const LinearOperator& op, const std::optional<Weights>& weights) {
    check_weights(op, weights);
    const std::size_t d = op.dim();
    const auto adj = op.adjoint(weights);
    const auto first = power_iterate(op, adj, std::vector<double>(d, 1.0), weights);
    const auto second = power_iterate(op, adj, generic_start(d), weights);
    if (first || second) return std::max(first.value_or(0.0), second.value_or(0.0));
    double best = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> e(d, 0.0);
        e[k] = 1.0;
        best = std::max(best, power_iterate(op, adj, std::move(e), weights).value_or(0.0));
    }
    return best;
}

namespace {

double inverse_iterate(const LinearOperator& op, std::vector<double> v, const std::optional<Weights>& weights,
                       double shift = 0.0) {
    const std::size_t d = op.dim();
    std::vector<double> m(op.data().begin(), op.data().end());
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] -= shift;
    const double n0 = std::sqrt(weighted_dot(v, v, weights));
    for (double& c : v) c /= n0;
    double lambda = 0.0;
    for (std::size_t step = 0; step < kPowerMaxSteps; ++step) {
        auto next = solve_linear(d, m, v);
        const double nn = std::sqrt(weighted_dot(next, next, weights));
        for (double& c : next) c /= nn;
        const auto bv = matvec(op, next);
        const double rq = weighted_dot(bv, next, weights);
        if (step > 0 && std::abs(rq - lambda) <= kPowerTol * std::abs(rq)) return rq;
        lambda = rq;
        v = std::move(next);
    }
    throw NumericalError("inverse power iteration did not converge in 10000 steps", lambda);
}

// Cholesky of W M, which is symmetric when M is self-adjoint for <., .>_W.
bool positive_definite(const LinearOperator& op, const std::optional<Weights>& weights) {
    const std::size_t d = op.dim();
    std::vector<double> a(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a[i * d + j] = (weights ? (*weights)[i] : 1.0) * op(i, j);
    for (std::size_t j = 0; j < d; ++j) {
        double s = a[j * d + j];
        for (std::size_t k = 0; k < j; ++k) s -= a[j * d + k] * a[j * d + k];
        if (!(s > 0.0)) return false;
        const double l = std::sqrt(s);
        a[j * d + j] = l;
        for (std::size_t i = j + 1; i < d; ++i) {
            double t = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k) t -= a[i * d + k] * a[j * d + k];
            a[i * d + j] = t / l;
        }
    }
    return true;
}

} // namespace

double smallest_eigenvalue(const LinearOperator& op, const std::optional<Weights>& weights) {
    check_weights(op, weights);
    const std::size_t d = op.dim();
    if (!positive_definite(op, weights)) {
        // spectrum lies in [-s, s]; shifting by -1.5 s makes the smallest eigenvalue nearest the shift
        const double shift = -1.5 * operator_norm(op, weights);
        if (shift == 0.0) return 0.0;
        return std::min(inverse_iterate(op, std::vector<double>(d, 1.0), weights, shift),
                        inverse_iterate(op, generic_start(d), weights, shift));
    }
    return std::min(inverse_iterate(op, std::vector<double>(d, 1.0), weights),
                    inverse_iterate(op, generic_start(d), weights));
}

std::vector<double> solve_linear(std::size_t d, std::vector<double> a, std::vector<double> b,
                                 double singular_tol) {
    if (a.size() != d * d || b.size() != d) throw StructuralError("linear system shape mismatch");
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(a[r * d + col]) > std::abs(a[piv * d + col])) piv = r;
        if (std::abs(a[piv * d + col]) < singular_tol) {
            throw NumericalError("singular linear system", std::abs(a[piv * d + col]), col);
        }
        if (piv != col) {
            for (std::size_t k = 0; k < d; ++k) std::swap(a[col * d + k], a[piv * d + k]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < d; ++r) {
            const double f = a[r * d + col] / a[col * d + col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < d; ++k) a[r * d + k] -= f * a[col * d + k];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(d);
    for (std::size_t i = d; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < d; ++k) s -= a[i * d + k] * x[k];
        x[i] = s / a[i * d + i];
    }
    return x;
}

} // namespace gvimr
