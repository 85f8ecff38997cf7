#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace gvimr {

/// Positive quadrature weights defining a diagonal inner product
/// <u, v> = sum_i w_i u_i v_i. Shared between points so copies are cheap.
class Weights {
public:
    explicit Weights(std::vector<double> values);

    /// Composite trapezoid weights on m uniform nodes of [0, 1].
    static Weights trapezoid(std::size_t m);

    std::size_t size() const noexcept { return values_->size(); }
    std::span<const double> values() const noexcept { return *values_; }
    double operator[](std::size_t i) const { return (*values_)[i]; }

    friend bool operator==(const Weights& a, const Weights& b);

private:
    std::shared_ptr<const std::vector<double>> values_;
};

/// Element of a finite-dimensional real Hilbert space: plain R^d when no
/// weights are attached, a grid-discretized L^2[0,1] otherwise.
class HilbertPoint {
public:
    HilbertPoint() = default;
    explicit HilbertPoint(std::vector<double> coords,
                          std::optional<Weights> weights = std::nullopt);

    static HilbertPoint zeros(std::size_t d, std::optional<Weights> weights = std::nullopt);
    /// Zero point living in the same space as `like`.
    static HilbertPoint zeros_like(const HilbertPoint& like);

    std::size_t dim() const noexcept { return coords_.size(); }
    std::span<const double> coords() const noexcept { return coords_; }
    std::span<double> coords() noexcept { return coords_; }
    const std::optional<Weights>& weights() const noexcept { return weights_; }

    double operator[](std::size_t i) const { return coords_[i]; }
    double& operator[](std::size_t i) { return coords_[i]; }

    /// Same point in the same space with coordinates replaced.
    HilbertPoint with_coords(std::vector<double> coords) const;

    HilbertPoint& operator+=(const HilbertPoint& other);
    HilbertPoint& operator-=(const HilbertPoint& other);
    HilbertPoint& operator*=(double s);

    friend HilbertPoint operator+(HilbertPoint a, const HilbertPoint& b) { return a += b; }
    friend HilbertPoint operator-(HilbertPoint a, const HilbertPoint& b) { return a -= b; }
    friend HilbertPoint operator*(double s, HilbertPoint a) { return a *= s; }
    friend HilbertPoint operator*(HilbertPoint a, double s) { return a *= s; }
    friend HilbertPoint operator-(HilbertPoint a) { return a *= -1.0; }

    /// Exact coordinate and space equality.
    friend bool operator==(const HilbertPoint& a, const HilbertPoint& b);

private:
    std::vector<double> coords_;
    std::optional<Weights> weights_;
};

/// Throws StructuralError unless u and v live in the same space.
void require_same_space(const HilbertPoint& u, const HilbertPoint& v);
bool same_space(const HilbertPoint& u, const HilbertPoint& v);

double inner(const HilbertPoint& u, const HilbertPoint& v);
double norm(const HilbertPoint& u);
double distance(const HilbertPoint& u, const HilbertPoint& v);
/// max_i |u_i| (unweighted).
double sup_norm(const HilbertPoint& u);

/// Dense square matrix acting on coordinates.
class LinearOperator {
public:
    LinearOperator(std::size_t d, std::vector<double> row_major, bool symmetric = false);

    static LinearOperator identity(std::size_t d);
    static LinearOperator diagonal(std::span<const double> diag);
    static LinearOperator from_rows(const std::vector<std::vector<double>>& rows);
    /// Symmetric matrix built from the upper triangle of `rows`; the lower
    /// triangle of the input is ignored.
    static LinearOperator symmetric_from_upper(const std::vector<std::vector<double>>& rows);

    std::size_t dim() const noexcept { return d_; }
    bool symmetric() const noexcept { return symmetric_; }
    double operator()(std::size_t i, std::size_t j) const { return m_[i * d_ + j]; }
    std::span<const double> data() const noexcept { return m_; }

    HilbertPoint apply(const HilbertPoint& x) const;
    HilbertPoint operator()(const HilbertPoint& x) const { return apply(x); }

    /// Adjoint with respect to the weighted inner product: W^{-1} M^T W.
    LinearOperator adjoint(const std::optional<Weights>& weights = std::nullopt) const;

    /// a*I + b*M
    LinearOperator shifted(double a, double b) const;

private:
    std::size_t d_;
    std::vector<double> m_;
    bool symmetric_;
};

/// Operator norm induced by the (optionally weighted) inner product, by power
/// iteration on L*L from the normalized all-ones vector. Relative tolerance
/// 1e-12, at most 10,000 steps.
double operator_norm(const LinearOperator& op, const std::optional<Weights>& weights = std::nullopt);

/// Smallest eigenvalue of a symmetric positive definite operator, by inverse
/// power iteration (Rayleigh quotient, relative tolerance 1e-12).
double smallest_eigenvalue(const LinearOperator& op, const std::optional<Weights>& weights = std::nullopt);

/// Solves M x = b by Gaussian elimination with partial pivoting.
/// Throws NumericalError when a pivot underflows `singular_tol`.
std::vector<double> solve_linear(std::size_t d, std::vector<double> row_major,
                                 std::vector<double> rhs, double singular_tol = 1e-14);

} // namespace gvimr
