#include "gvimr/harness/verify.hpp"

#include "gvimr/catalog.hpp"
#include "gvimr/hilbert.hpp"
#include "gvimr/operators.hpp"
#include "gvimr/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace gvimr::harness {

namespace {

constexpr double kTol = 1e-10;

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t dim(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    std::vector<double> vec(std::size_t d, double scale = 1.0) {
        std::vector<double> v(d);
        for (auto& x : v) x = uniform(-scale, scale);
        return v;
    }

    // Unweighted on even draws, random positive weights otherwise.
    std::optional<Weights> space(std::size_t d) {
        if (uniform(0.0, 1.0) < 0.5) return std::nullopt;
        std::vector<double> w(d);
        for (auto& x : w) x = uniform(0.25, 2.0);
        return Weights(std::move(w));
    }

    HilbertPoint point(std::size_t d, const std::optional<Weights>& w, double scale = 1.0) {
        return HilbertPoint(vec(d, scale), w);
    }

    ConvexSet set(std::size_t d) {
        switch (dim(0, 3)) {
        case 0: {
            auto lo = vec(d), hi = lo;
            for (auto& h : hi) h += uniform(0.0, 1.5);
            return ConvexSet(Box{lo, hi});
        }
        case 1: return ConvexSet(Ball{vec(d), uniform(0.2, 1.5)});
        case 2: {
            auto a = vec(d);
            a[0] += a[0] >= 0 ? 0.1 : -0.1;
            return ConvexSet(Halfspace{a, uniform(-0.5, 0.5)});
        }
        default: {
            std::vector<std::vector<double>> basis;
            for (std::size_t k = 0, n = dim(0, d > 1 ? d - 1 : 0); k < n; ++k) basis.push_back(vec(d));
            return ConvexSet(AffineSubspace{basis, vec(d)});
        }
        }
    }

    LinearOperator spd(std::size_t d) {
        std::vector<double> m(d * d);
        for (auto& x : m) x = uniform(-1.0, 1.0);
        std::vector<double> b(d * d, 0.0);
        const double shift = uniform(0.05, 1.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < d; ++k) s += m[k * d + i] * m[k * d + j];
                b[i * d + j] = s + (i == j ? shift : 0.0);
            }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < i; ++j) b[i * d + j] = b[j * d + i];
        return LinearOperator(d, std::move(b), true);
    }

private:
    std::mt19937_64 rng_;
};

Eigen::VectorXd spectrum(const LinearOperator& B) {
    const auto d = static_cast<Eigen::Index>(B.dim());
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = B(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

// Excess of ||I - rho B|| over 1 - rho gamma_bar. Both sides come from a
// dense eigensolve: with small rho every eigenvalue of I - rho B is near 1
// and power iteration stalls.
double strong_positive_excess(const LinearOperator& B, double rho) {
    const auto ev = spectrum(B);
    const double gbar = ev.minCoeff();
    const double lhs = std::max(std::abs(1.0 - rho * ev.minCoeff()), std::abs(1.0 - rho * ev.maxCoeff()));
    return lhs - (1.0 - rho * gbar);
}

void hilbert_checks(VerificationReport& rep, Sampler& s, std::size_t trials) {
    double bilinear = 0.0, cs = 0.0, sum_bound = -1.0, convex = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto d = s.dim(1, 8);
        const auto w = s.space(d);
        const auto x = s.point(d, w), y = s.point(d, w), z = s.point(d, w);
        const double a = s.uniform(-2.0, 2.0), b = s.uniform(-2.0, 2.0);
        bilinear = std::max({bilinear, std::abs(inner(x, y) - inner(y, x)),
                             std::abs(inner(a * x + b * z, y) - a * inner(x, y) - b * inner(z, y))});
        cs = std::max(cs, std::abs(inner(x, y)) - norm(x) * norm(y));
        const double nxy = norm(x + y);
        sum_bound = std::max(sum_bound, nxy * nxy - (norm(x) * norm(x) + 2.0 * inner(y, x + y)));
        for (double lambda : {0.1, 0.5, 0.9, s.uniform(0.0, 1.0)}) {
            const double lhs = std::pow(norm(lambda * x + (1.0 - lambda) * y), 2);
            const double rhs = lambda * std::pow(norm(x), 2) + (1.0 - lambda) * std::pow(norm(y), 2) -
                               lambda * (1.0 - lambda) * std::pow(norm(x - y), 2);
            convex = std::max(convex, std::abs(lhs - rhs));
        }
    }
    rep.checks.push_back(make_check("inner_product_bilinear_symmetric", bilinear, "<=", 1e-12,
                                    "<x, y> = <y, x>, <a x + b z, y> = a <x, y> + b <z, y>"));
    rep.checks.push_back(make_check("cauchy_schwarz", cs, "<=", 1e-12, "|<x, y>| <= ||x|| ||y||"));
    rep.checks.push_back(make_check("norm_sum_bound", sum_bound, "<=", kTol, "||x + y||^2 <= ||x||^2 + 2 <y, x + y>"));
    rep.checks.push_back(make_check(
        "convex_combination_identity", convex, "<=", kTol,
        "||l x + (1 - l) y||^2 = l ||x||^2 + (1 - l) ||y||^2 - l (1 - l) ||x - y||^2"));
}

void projection_checks(VerificationReport& rep, Sampler& s, std::size_t trials) {
    double nearest = -1.0, variational = -1.0, firm = -1.0, member = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto d = s.dim(1, 8);
        const auto w = s.space(d);
        const ConvexSet K = s.set(d);
        const auto x = s.point(d, w, 3.0), x2 = s.point(d, w, 3.0);
        const auto px = project(K, x), px2 = project(K, x2);
        const auto y = project(K, s.point(d, w, 3.0));
        member = std::max(member, distance(project(K, px), px));
        nearest = std::max(nearest, distance(x, px) - distance(x, y));
        variational = std::max(variational, inner(x - px, y - px));
        const double dp = distance(px, px2);
        firm = std::max(firm, dp * dp - inner(x - x2, px - px2));
    }
    rep.checks.push_back(make_check("projection_idempotent", member, "<=", kTol, "P_K P_K x = P_K x"));
    rep.checks.push_back(
        make_check("projection_nearest_point", nearest, "<=", kTol, "||x - P_K x|| <= ||x - y|| for y in K"));
    rep.checks.push_back(make_check("projection_variational", variational, "<=", kTol,
                                    "<x - P_K x, y - P_K x> <= 0 for y in K"));
    rep.checks.push_back(make_check("projection_firmly_nonexpansive", firm, "<=", kTol,
                                    "||P_K x - P_K y||^2 <= <x - y, P_K x - P_K y>"));
}

void strong_positive_checks(VerificationReport& rep, Sampler& s, std::size_t trials) {
    const std::string anchor = "||I - rho B|| <= 1 - rho gamma_bar, 0 < rho <= 1/||B||";
    rep.checks.push_back(make_check("strong_positive_identity_rho_1",
                                    strong_positive_excess(LinearOperator::identity(3), 1.0), "<=", kTol, anchor));
    const std::vector<double> diag{1.0, 2.0};
    rep.checks.push_back(make_check("strong_positive_diag_1_2_rho_half",
                                    strong_positive_excess(LinearOperator::diagonal(diag), 0.5), "<=", kTol, anchor));
    double worst = -1.0;
    std::size_t failures = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto B = s.spd(s.dim(1, 8));
        const double bn = spectrum(B).maxCoeff();
        const double rho = t % 4 == 0 ? 1.0 / bn : s.uniform(1e-3, 1.0) / bn;
        const double e = strong_positive_excess(B, rho);
        worst = std::max(worst, e);
        failures += e > kTol ? 1 : 0;
    }
    auto c = make_check("strong_positive_random_spd", worst, "<=", kTol, anchor);
    c.note = std::to_string(trials) + " instances, " + std::to_string(failures) + " failures";
    rep.checks.push_back(std::move(c));
}

void contraction_checks(VerificationReport& rep, Sampler& s) {
    constexpr std::size_t kPairs = 1000;
    double worst = -1.0;
    std::size_t problems = 0;
    for (const auto& p : fixed_point_catalog()) {
        ++problems;
        const double gbar = p.config.B.gamma_bar();
        for (std::size_t n : {std::size_t{0}, std::size_t{9}, std::size_t{999}}) {
            const double alpha = p.config.steps.value(n);
            const double bound = (1.0 - alpha * gbar) / 2.0;
            const std::size_t d = p.x0.dim();
            auto box = [&] {
                std::vector<double> c(d);
                for (std::size_t i = 0; i < d; ++i) c[i] = s.uniform(p.sample_lo[i], p.sample_hi[i]);
                return p.x0.with_coords(std::move(c));
            };
            const auto T = make_inner_map(box(), alpha, p.config);
            for (std::size_t k = 0; k < kPairs / 3 + 1; ++k) {
                const auto u = box(), v = box();
                const double dist = distance(u, v);
                if (dist == 0.0) continue;
                worst = std::max(worst, distance(T(u), T(v)) / dist - bound);
            }
        }
    }
    auto c = make_check("inner_map_contraction", worst, "<=", kTol,
                        "||T y - T y'|| <= (1 - alpha_n gamma_bar)/2 ||y - y'||");
    c.note = std::to_string(problems) + " catalog problems";
    rep.checks.push_back(std::move(c));
}

} // namespace

std::size_t sequence_lemma_steps(double threshold, std::size_t limit) {
    double a = 1.0;
    for (std::size_t n = 1; n <= limit; ++n) {
        const double b = 1.0 / static_cast<double>(n + 1);
        a = (1.0 - b) * a + b / static_cast<double>(n);
        if (a < threshold) return n;
    }
    return limit + 1;
}

VerificationReport verify_lemmas(std::uint64_t seed, std::size_t trials) {
    VerificationReport rep;
    rep.title = "lemma self-check";
    rep.provenance = {0, seed};
    if (trials == 0) trials = 1;
    rep.facts = {{"trials", std::to_string(trials)}};
    Sampler s(seed);
    hilbert_checks(rep, s, trials);
    projection_checks(rep, s, trials);
    strong_positive_checks(rep, s, trials);
    contraction_checks(rep, s);
    const auto steps = sequence_lemma_steps(1e-3, 1'000'000);
    rep.checks.push_back(make_check("sequence_lemma", static_cast<double>(steps), "<=", 1e6,
                                    "a_{n+1} <= (1 - b_n) a_n + d_n, sum b_n = inf, d_n / b_n -> 0 => a_n -> 0"));
    return rep;
}

} // namespace gvimr::harness
