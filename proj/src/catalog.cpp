#include "gvimr/catalog.hpp"

namespace gvimr {

namespace {

HilbertPoint pt(std::vector<double> c) { return HilbertPoint(std::move(c)); }

CatalogProblem make(std::string name, Contraction Q, Nonexpansive S, StrongPositiveOperator B, double gamma,
                    HilbertPoint x0, HilbertPoint limit) {
    const std::size_t d = x0.dim();
    PointMap fix = *S.fix_projection();
    SchemeConfig cfg{std::move(Q), std::move(S), std::move(B), gamma};
    cfg.reference_solution = limit;
    return CatalogProblem{std::move(name),
                          std::move(cfg),
                          std::move(x0),
                          std::move(fix),
                          std::move(limit),
                          std::vector<double>(d, -3.0),
                          std::vector<double>(d, 3.0)};
}

} // namespace

std::vector<CatalogProblem> fixed_point_catalog() {
    std::vector<CatalogProblem> out;

    out.push_back(make("scalar_negation", Contraction::scaled(0.5), Nonexpansive::negation(),
                       StrongPositiveOperator::identity(1), 1.0, pt({1.0}), pt({0.0})));

    // Fix(S) = R^2; the limit solves B z = gamma Q(z).
    out.push_back(make("identity_constant_anchor", Contraction::constant({1.0, 2.0}), Nonexpansive::identity(),
                       StrongPositiveOperator::identity(2), 0.5, pt({0.0, 0.0}), pt({0.5, 1.0})));

    out.push_back(make("box_interior",
                       Contraction::constant({1.0, 1.0}),
                       Nonexpansive::projection(ConvexSet(Box{{0.0, 0.0}, {1.0, 1.0}})),
                       StrongPositiveOperator::identity(2), 0.5, pt({3.0, -2.0}), pt({0.5, 0.5})));

    // B (1, 1) = (1.0, 0.8) = gamma Q with gamma = 1/2.
    out.push_back(make("averaged_line",
                       Contraction::constant({2.0, 1.6}),
                       Nonexpansive::averaged(0.5, Nonexpansive::projection(ConvexSet(
                                                       AffineSubspace{{{1.0, 1.0}}, {0.0, 0.0}}))),
                       StrongPositiveOperator(LinearOperator::symmetric_from_upper({{0.9, 0.1}, {0.0, 0.7}})),
                       0.5, pt({-1.0, 2.0}), pt({1.0, 1.0})));

    {
        auto reflected = Nonexpansive::composition(
            {Nonexpansive::projection(ConvexSet(Ball{{0.0, 0.0}, 2.0})), Nonexpansive::negation()});
        PointMap zero = [](const HilbertPoint& x) { return HilbertPoint::zeros_like(x); };
        SchemeConfig cfg{Contraction::scaled(0.5), std::move(reflected), StrongPositiveOperator::identity(2), 1.0};
        cfg.reference_solution = pt({0.0, 0.0});
        out.push_back(CatalogProblem{"reflected_ball", std::move(cfg), pt({3.0, 1.0}), zero, pt({0.0, 0.0}),
                                     {-3.0, -3.0}, {3.0, 3.0}});
    }

    out.push_back(make("negation_diagonal_B",
                       Contraction::affine(LinearOperator::from_rows({{0.0, 0.5, 0.0}, {-0.5, 0.0, 0.0}, {0.0, 0.0, 0.5}}),
                                           {0.0, 0.0, 0.0}),
                       Nonexpansive::negation(), StrongPositiveOperator(LinearOperator::diagonal(std::vector{0.6, 0.8, 1.0})),
                       1.0, pt({1.0, -1.0, 2.0}), pt({0.0, 0.0, 0.0})));

    return out;
}

CatalogProblem biased_line_problem() {
    return make("biased_line", Contraction::constant({1.0, 2.0}),
                Nonexpansive::projection(ConvexSet(AffineSubspace{{{1.0, 0.0}}, {0.0, 0.0}})),
                StrongPositiveOperator::identity(2), 0.5, pt({0.0, 0.0}), pt({0.5, 0.0}));
}

std::vector<VipCatalogEntry> vip_catalog() {
    std::vector<VipCatalogEntry> out;
    const auto I2 = LinearOperator::identity(2);
    // unconstrained minimizer (2, 0.5) clipped to the box
    out.push_back({"box", VIProblem(ConvexSet(Box{{0.0, 0.0}, {1.0, 1.0}}), MonotoneOperator::affine(I2, {2.0, 0.5}), 0.5),
                   pt({1.0, 0.5})});
    // unconstrained minimizer (3, 4) scaled onto the unit sphere
    out.push_back({"ball", VIProblem(ConvexSet(Ball{{0.0, 0.0}, 1.0}), MonotoneOperator::affine(I2, {3.0, 4.0}), 0.5),
                   pt({0.6, 0.8})});
    out.push_back({"halfspace",
                   VIProblem(ConvexSet(Halfspace{{1.0, 1.0}, 1.0}), MonotoneOperator::affine(I2, {2.0, 1.0}), 0.5),
                   pt({1.0, 0.0})});
    out.push_back({"zero_operator", VIProblem(ConvexSet(Box{{0.0, 0.0}, {1.0, 1.0}}), MonotoneOperator::zero(), 1.0),
                   std::nullopt});
    return out;
}

} // namespace gvimr
