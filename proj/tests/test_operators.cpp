#include "gvimr/catalog.hpp"
#include "gvimr/error.hpp"
#include "gvimr/operators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gvimr;

namespace {

HilbertPoint pt(std::vector<double> c, std::optional<Weights> w = std::nullopt) { return HilbertPoint(std::move(c), w); }

void expect_point(const HilbertPoint& got, std::vector<double> want, double tol) {
    ASSERT_EQ(got.dim(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "coordinate " << i;
}

std::vector<ConvexSet> sample_sets() {
    return {
        ConvexSet(Box{{0.0, -1.0, 0.5}, {1.0, 1.0, 0.5}}),
        ConvexSet(Ball{{0.5, -0.5, 1.0}, 1.3}),
        ConvexSet(Halfspace{{1.0, 2.0, -1.0}, 0.3}),
        ConvexSet(AffineSubspace{{{1.0, 1.0, 0.0}, {0.0, 1.0, 2.0}}, {1.0, 0.0, 0.0}}),
        ConvexSet(AffineSubspace{{}, {1.0, 2.0, 3.0}}),
    };
}

} // namespace

TEST(Project, SpecExamples) {
    expect_point(project(ConvexSet(Box{{0, 0}, {1, 1}}), pt({2, -1})), {1, 0}, 0.0);
    expect_point(project(ConvexSet(Ball{{0, 0}, 1.0}), pt({3, 4})), {0.6, 0.8}, 1e-15);
    expect_point(project(ConvexSet(Halfspace{{1, 0}, 0.0}), pt({2, 5})), {0, 5}, 1e-15);
}

TEST(Project, HalfspaceMatchesGridSearch) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> a{u(rng), u(rng)};
        const double b = u(rng);
        const std::vector<double> x{u(rng), u(rng)};
        const auto want = oracle::halfspace_grid_projection(a, b, x);
        // the scan resolves the minimizer only to about sqrt(machine epsilon)
        expect_point(project(ConvexSet(Halfspace{a, b}), pt(x)), want, 1e-7);
    }
}

TEST(Project, MembershipAndBadShapes) {
    EXPECT_THROW(ConvexSet(Box{{0, 1}, {1, 0}}), ParameterError);
    EXPECT_THROW(ConvexSet(Ball{{0, 0}, 0.0}), ParameterError);
    EXPECT_THROW(ConvexSet(Halfspace{{0, 0}, 1.0}), ParameterError);
    EXPECT_THROW(project(ConvexSet(Ball{{0, 0}, 1.0}), pt({1, 2, 3})), StructuralError);
    const ConvexSet K(Ball{{0, 0}, 1.0});
    EXPECT_TRUE(K.contains(pt({0.6, 0.8})));
    EXPECT_FALSE(K.contains(pt({0.7, 0.8})));
}

TEST(Project, CharacterizationsOnRandomPoints) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    const std::optional<Weights> spaces[] = {std::nullopt, Weights({0.5, 2.0, 1.25})};
    for (const auto& K : sample_sets())
        for (const auto& w : spaces) {
            auto rnd = [&] { return pt({u(rng), u(rng), u(rng)}, w); };
            for (int k = 0; k < 200; ++k) {
                const auto x = rnd(), x2 = rnd();
                const auto px = project(K, x), px2 = project(K, x2);
                const auto y = project(K, rnd());
                EXPECT_TRUE(K.contains(px, 1e-9)) << K.tag();
                EXPECT_LE(distance(x, px), distance(x, y) + 1e-10) << K.tag();
                EXPECT_LE(inner(x - px, y - px), 1e-10) << K.tag();
                EXPECT_GE(inner(x - x2, px - px2), std::pow(distance(px, px2), 2) - 1e-10) << K.tag();
                EXPECT_LE(distance(project(K, px), px), 1e-12) << K.tag();
            }
        }
}

TEST(Contraction, DeclaredConstantsHoldOnSamples) {
    const std::vector<double> lo{-3, -3}, hi{3, 3};
    EXPECT_THROW(Contraction::scaled(1.0), ParameterError);
    EXPECT_THROW(Contraction::constant({1.0}, 0.0), ParameterError);
    const auto scaled = Contraction::scaled(-0.4);
    EXPECT_DOUBLE_EQ(scaled.alpha(), 0.4);
    EXPECT_LE(estimate_lipschitz([&](const HilbertPoint& x) { return scaled(x); }, 500, lo, hi), 0.4 + 1e-10);
    const auto aff = Contraction::affine(LinearOperator::from_rows({{0.3, 0.2}, {-0.1, 0.4}}), {1, 2});
    EXPECT_LT(aff.alpha(), 1.0);
    EXPECT_LE(estimate_lipschitz([&](const HilbertPoint& x) { return aff(x); }, 500, lo, hi), aff.alpha() + 1e-10);
    expect_point(Contraction::constant({1, 2})(pt({7, 7})), {1, 2}, 0.0);
}

TEST(Nonexpansive, KindNamesRoundTrip) {
    for (auto k : {NonexpansiveKind::identity, NonexpansiveKind::negation, NonexpansiveKind::projection,
                   NonexpansiveKind::averaged, NonexpansiveKind::vip, NonexpansiveKind::fredholm,
                   NonexpansiveKind::poincare, NonexpansiveKind::composition})
        EXPECT_EQ(nonexpansive_kind_from_string(to_string(k)), k);
    EXPECT_FALSE(nonexpansive_kind_from_string("rotation").has_value());
}

TEST(Nonexpansive, CompositionAppliesFirstMapFirst) {
    const auto S = Nonexpansive::composition(
        {Nonexpansive::projection(ConvexSet(Box{{0, 0}, {1, 1}})), Nonexpansive::negation()});
    expect_point(S(pt({2, -3})), {-1, 0}, 0.0);
    EXPECT_FALSE(S.fix_projection().has_value());
    EXPECT_THROW(Nonexpansive::composition({}), StructuralError);
}

TEST(Nonexpansive, AveragedKeepsFixedSetProjection) {
    EXPECT_THROW(Nonexpansive::averaged(0.0, Nonexpansive::negation()), ParameterError);
    const auto S = Nonexpansive::averaged(0.5, Nonexpansive::projection(ConvexSet(Ball{{0, 0}, 1.0})));
    expect_point(S(pt({3, 4})), {1.8, 2.4}, 1e-15);
    ASSERT_TRUE(S.fix_projection().has_value());
    expect_point((*S.fix_projection())(pt({3, 4})), {0.6, 0.8}, 1e-15);
}

TEST(StrongPositive, SpectralBoundsHoldOnSamples) {
    const StrongPositiveOperator B(LinearOperator::symmetric_from_upper({{2, 0.5, 0}, {0, 1, 0.2}, {0, 0, 3}}));
    EXPECT_GT(B.gamma_bar(), 0.0);
    EXPECT_LE(B.gamma_bar(), B.norm());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 500; ++k) {
        const auto x = pt({u(rng), u(rng), u(rng)});
        EXPECT_GE(inner(B(x), x), B.gamma_bar() * std::pow(norm(x), 2) - 1e-10);
        EXPECT_LE(norm(B(x)), B.norm() * norm(x) + 1e-10);
    }
    EXPECT_THROW(StrongPositiveOperator(LinearOperator::symmetric_from_upper({{1, 2}, {0, 1}})), ParameterError);
    EXPECT_THROW(StrongPositiveOperator(LinearOperator::symmetric_from_upper({{-2, 3}, {0, -2}})), ParameterError);
    const std::vector<double> diag{0.6, 0.8, 1.0};
    const StrongPositiveOperator D(LinearOperator::diagonal(diag));
    EXPECT_DOUBLE_EQ(D.gamma_bar(), 0.6);
    EXPECT_DOUBLE_EQ(D.norm(), 1.0);
    EXPECT_TRUE(StrongPositiveOperator::identity(4).is_identity());
}

TEST(Monotone, AffineConstantsHoldOnSamples) {
    const auto A = MonotoneOperator::affine(LinearOperator::symmetric_from_upper({{2, 1}, {0, 1}}), {1, 0});
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 500; ++k) {
        const auto x = pt({u(rng), u(rng)}), y = pt({u(rng), u(rng)});
        const auto d = A(x) - A(y);
        EXPECT_LE(norm(d), A.theta() * distance(x, y) + 1e-10);
        EXPECT_GE(inner(d, x - y), A.mu() * inner(d, d) - 1e-10);
    }
    EXPECT_THROW(MonotoneOperator::affine(LinearOperator::from_rows({{0, 1}, {-1, 0}}), {0, 0}), ParameterError);
}

TEST(VipOperator, SpecExamples) {
    const ConvexSet K(Box{{0, 0}, {1, 1}});
    const auto A = MonotoneOperator::affine(LinearOperator::identity(2), {2, 0.5});
    EXPECT_DOUBLE_EQ(A.mu(), 1.0);
    const auto S = make_vip_operator(K, A, 1.0);
    EXPECT_EQ(S.kind(), NonexpansiveKind::vip);
    for (auto x : {pt({0, 0}), pt({5, -3}), pt({0.2, 0.9})}) expect_point(S(x), {1, 0.5}, 1e-15);
    EXPECT_THROW(make_vip_operator(K, A, 2.0), ParameterError);
    EXPECT_THROW(make_vip_operator(K, A, 0.0), ParameterError);
    const auto P = make_vip_operator(K, MonotoneOperator::zero(), 0.7);
    for (auto x : {pt({2, -1}), pt({0.3, 0.4})}) {
        const auto px = project(K, x);
        expect_point(P(x), {px.coords().begin(), px.coords().end()}, 0.0);
    }
}

TEST(VipOperator, NonexpansiveOnCatalog) {
    const std::vector<double> lo{-5, -5}, hi{5, 5};
    for (const auto& e : vip_catalog()) {
        const auto S = make_vip_operator(e.problem.K, e.problem.A, e.problem.lambda);
        EXPECT_LE(estimate_lipschitz(S.rule(), 1000, lo, hi), 1.0 + 1e-10) << e.name;
    }
}

TEST(FredholmOperator, SpecExamples) {
    const auto zero = FredholmProblem::linear([](double, double) { return 0.0; }, [](double t) { return t * t; }, 11);
    const auto S0 = make_fredholm_operator(zero);
    const auto g = zero.sampled_source();
    EXPECT_EQ(S0(HilbertPoint(std::vector<double>(11, 3.0), zero.weights())), g);

    const auto lin = FredholmProblem::linear([](double t, double s) { return t * s / 2; }, [](double t) { return t; }, 101);
    const auto S = make_fredholm_operator(lin);
    const auto t = lin.nodes();
    const auto y = S(HilbertPoint::zeros(101, lin.weights()));
    for (std::size_t i = 0; i < 101; ++i) EXPECT_DOUBLE_EQ(y[i], t[i]);
    EXPECT_THROW(S(HilbertPoint::zeros(101)), StructuralError);
}

TEST(FredholmOperator, NonexpansiveInWeightedNorm) {
    const auto nonlinear = FredholmProblem([](double t, double s, double x) { return t * s * std::sin(x); },
                                           [](double t) { return 1 - t; }, 41);
    const auto lin = FredholmProblem::linear([](double t, double s) { return std::exp(-(t - s) * (t - s)) * 0.9; },
                                             [](double t) { return t; }, 41);
    for (const auto* p : {&nonlinear, &lin}) {
        const auto S = make_fredholm_operator(*p);
        const std::vector<double> lo(41, -3.0), hi(41, 3.0);
        EXPECT_LE(estimate_lipschitz(S.rule(), 300, lo, hi, 17, p->weights()), 1.0 + 1e-9);
    }
}

TEST(PoincareMap, SpecExamples) {
    const EvolutionProblem decay(
        1, [](double) { return LinearOperator::identity(1); },
        [](double, std::span<const double>) { return std::vector<double>{0.0}; }, 1.0, 1000);
    const auto S = make_poincare_map(decay);
    EXPECT_NEAR(S(pt({1.0}))[0], std::exp(-1.0), 1e-4);
    EXPECT_EQ(S(pt({0.0}))[0], 0.0);
    EXPECT_THROW(EvolutionProblem(
                     1, [](double) { return LinearOperator::identity(1); },
                     [](double t, std::span<const double>) { return std::vector<double>{t}; }, 1.0, 1000),
                 ParameterError);
    EXPECT_THROW(EvolutionProblem(
                     1, [](double) { return LinearOperator::identity(1); },
                     [](double, std::span<const double>) { return std::vector<double>{0.0}; }, 1.0, 50),
                 ParameterError);
}

TEST(PoincareMap, LinearPeriodicityCondition) {
    // v = e^{-1} v + int_0^1 e^{-(1-s)} cos(2 pi s) ds  =>  v = 1 / (1 + 4 pi^2)
    const double w = 2 * std::numbers::pi;
    const EvolutionProblem forced(
        1, [](double) { return LinearOperator::identity(1); },
        [w](double t, std::span<const double>) { return std::vector<double>{std::cos(w * t)}; }, 1.0, 1000);
    const auto S = make_poincare_map(forced);
    const double v = 1.0 / (1.0 + w * w);
    EXPECT_NEAR(S(pt({v}))[0], v, 1e-5);
}

TEST(EstimateLipschitz, SpecExamples) {
    const std::vector<double> lo{-1, -1}, hi{1, 1};
    EXPECT_NEAR(estimate_lipschitz([](const HilbertPoint& x) { return x; }, 100, lo, hi), 1.0, 1e-12);
    EXPECT_NEAR(estimate_lipschitz([](const HilbertPoint& x) { return 0.5 * x; }, 100, lo, hi), 0.5, 1e-12);
    const double c = std::cos(std::numbers::pi / 6), s = std::sin(std::numbers::pi / 6);
    auto rot = [c, s](const HilbertPoint& x) { return x.with_coords({c * x[0] - s * x[1], s * x[0] + c * x[1]}); };
    EXPECT_NEAR(estimate_lipschitz(rot, 1000, lo, hi), 1.0, 1e-9);
    EXPECT_THROW(estimate_lipschitz(rot, 1, lo, hi), ParameterError);
}
