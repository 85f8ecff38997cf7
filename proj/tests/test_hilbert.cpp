#include "gvimr/error.hpp"
#include "gvimr/hilbert.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gvimr;

namespace {

HilbertPoint pt(std::vector<double> c, std::optional<Weights> w = std::nullopt) { return HilbertPoint(std::move(c), w); }

} // namespace

TEST(Inner, SpecExamples) {
    EXPECT_DOUBLE_EQ(inner(pt({1, 0}), pt({0, 1})), 0.0);
    EXPECT_DOUBLE_EQ(inner(pt({1, 2}), pt({3, 4})), 11.0);
    const Weights half({0.5, 0.5});
    EXPECT_DOUBLE_EQ(inner(pt({1, 1}, half), pt({1, 1}, half)), 1.0);
}

TEST(Norm, SpecExamples) {
    EXPECT_DOUBLE_EQ(norm(pt({3, 4})), 5.0);
    EXPECT_DOUBLE_EQ(norm(pt({0, 0, 0})), 0.0);
    EXPECT_DOUBLE_EQ(norm(pt({1, 1}, Weights({0.25, 0.75}))), 1.0);
}

TEST(HilbertPoint, MismatchedSpacesAreRejected) {
    EXPECT_THROW(inner(pt({1, 2}), pt({1, 2, 3})), StructuralError);
    EXPECT_THROW(inner(pt({1, 2}), pt({1, 2}, Weights({0.5, 0.5}))), StructuralError);
    EXPECT_THROW(pt({1, 2}, Weights({0.5, 0.25})) + pt({1, 2}, Weights({0.5, 0.5})), StructuralError);
    EXPECT_NO_THROW(pt({1, 2}, Weights::trapezoid(2)) + pt({1, 2}, Weights::trapezoid(2)));
}

TEST(Weights, MustBePositive) {
    EXPECT_THROW(Weights({1.0, 0.0}), ParameterError);
    EXPECT_THROW(Weights({1.0, -2.0}), ParameterError);
    EXPECT_THROW(Weights::trapezoid(1), ParameterError);
    const auto w = Weights::trapezoid(5);
    double s = 0.0;
    for (double v : w.values()) s += v;
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(w[0], 0.125);
    EXPECT_DOUBLE_EQ(w[2], 0.25);
}

TEST(LinearOperator, SymmetricFlagIsExact) {
    EXPECT_THROW(LinearOperator(2, {1, 2, 2.0000001, 1}, true), StructuralError);
    const auto s = LinearOperator::symmetric_from_upper({{1, 2}, {99, 3}});
    EXPECT_TRUE(s.symmetric());
    EXPECT_EQ(s(1, 0), 2.0);
    EXPECT_THROW(LinearOperator::from_rows({{1, 2}, {3}}), StructuralError);
}

TEST(OperatorNorm, SpecExamples) {
    for (std::size_t d : {1u, 3u, 7u}) EXPECT_NEAR(operator_norm(LinearOperator::identity(d)), 1.0, 1e-12);
    const std::vector<double> diag{1.0, 2.0};
    EXPECT_NEAR(operator_norm(LinearOperator::diagonal(diag)), 2.0, 1e-12);
    EXPECT_NEAR(operator_norm(LinearOperator::diagonal(diag), Weights({0.5, 0.5})), 2.0, 1e-12);
    EXPECT_NEAR(oracle::brute_force_operator_norm(LinearOperator::diagonal(diag), Weights({0.5, 0.5})), 2.0, 1e-9);
}

TEST(OperatorNorm, ZeroAndNullspaceStart) {
    EXPECT_EQ(operator_norm(LinearOperator(2, {0, 0, 0, 0})), 0.0);
    // all-ones lies in the kernel of this operator
    EXPECT_NEAR(operator_norm(LinearOperator(2, {1, -1, 1, -1})), 2.0, 1e-12);
}

TEST(OperatorNorm, AllOnesEigenvectorWithSmallEigenvalue) {
    // eigenvalues -1 (all-ones) and 3
    EXPECT_NEAR(operator_norm(LinearOperator::symmetric_from_upper({{1, -2}, {0, 1}})), 3.0, 1e-10);
}

TEST(OperatorNorm, AgreesWithBruteForce) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0), wd(0.2, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = 1 + trial % 5;
        std::vector<double> m(d * d);
        for (auto& x : m) x = u(rng);
        const LinearOperator L(d, m);
        std::optional<Weights> w;
        if (trial % 2) {
            std::vector<double> wv(d);
            for (auto& x : wv) x = wd(rng);
            w = Weights(wv);
        }
        const double power = operator_norm(L, w);
        const double brute = oracle::brute_force_operator_norm(L, w, 100 + trial);
        EXPECT_NEAR(power, brute, 1e-6 * brute) << "trial " << trial;
        EXPECT_GE(power, brute * (1 - 1e-10));
    }
}

TEST(SmallestEigenvalue, KnownSpectra) {
    const std::vector<double> diag{3.0, 0.5, 2.0};
    EXPECT_NEAR(smallest_eigenvalue(LinearOperator::diagonal(diag)), 0.5, 1e-12);
    // eigenvalues 1 and 3
    EXPECT_NEAR(smallest_eigenvalue(LinearOperator::symmetric_from_upper({{2, 1}, {0, 2}})), 1.0, 1e-12);
    // eigenvalues 1 and -5: smallest magnitude is not smallest value
    EXPECT_NEAR(smallest_eigenvalue(LinearOperator::symmetric_from_upper({{-2, 3}, {0, -2}})), -5.0, 1e-9);
    EXPECT_NEAR(smallest_eigenvalue(LinearOperator::symmetric_from_upper({{1, 2}, {0, 1}})), -1.0, 1e-9);
}

TEST(SolveLinear, SmallSystems) {
    const auto x = solve_linear(2, {0, 1, 2, 1}, {1, 4});
    EXPECT_NEAR(x[0], 1.5, 1e-15);
    EXPECT_NEAR(x[1], 1.0, 1e-15);
    EXPECT_THROW(solve_linear(2, {1, 2, 2, 4}, {1, 1}), NumericalError);
}

TEST(HilbertProperties, IdentitiesOnRandomPoints) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0), wd(0.1, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + trial % 8;
        std::optional<Weights> w;
        if (trial % 3 == 0) {
            std::vector<double> wv(d);
            for (auto& x : wv) x = wd(rng);
            w = Weights(wv);
        }
        auto rnd = [&] {
            std::vector<double> c(d);
            for (auto& x : c) x = u(rng);
            return HilbertPoint(c, w);
        };
        const auto x = rnd(), y = rnd(), z = rnd();
        const double a = u(rng), b = u(rng);
        EXPECT_NEAR(inner(x, y), inner(y, x), 1e-12);
        EXPECT_NEAR(inner(a * x + b * z, y), a * inner(x, y) + b * inner(z, y), 1e-12);
        EXPECT_LE(std::abs(inner(x, y)), norm(x) * norm(y) + 1e-12);
        EXPECT_LE(std::pow(norm(x + y), 2), std::pow(norm(x), 2) + 2 * inner(y, x + y) + 1e-12);
        for (double l : {0.1, 0.5, 0.9}) {
            const double lhs = std::pow(norm(l * x + (1 - l) * y), 2);
            const double rhs = l * std::pow(norm(x), 2) + (1 - l) * std::pow(norm(y), 2) -
                               l * (1 - l) * std::pow(norm(x - y), 2);
            EXPECT_NEAR(lhs, rhs, 1e-10);
        }
    }
}
