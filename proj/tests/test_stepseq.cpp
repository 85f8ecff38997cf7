#include "gvimr/error.hpp"
#include "gvimr/stepseq.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gvimr;

TEST(StepSequence, SpecExamples) {
    const auto s = StepSequence::power();
    EXPECT_DOUBLE_EQ(s.value(0), 0.9);
    EXPECT_DOUBLE_EQ(s.value(8), 0.1);
    EXPECT_DOUBLE_EQ(StepSequence::power(0.5, 0.5).value(3), 0.25);
}

TEST(StepSequence, PowerMatchesFormula) {
    for (double a : {0.1, 0.5, 0.99})
        for (double p : {0.25, 0.5, 1.0}) {
            const auto s = StepSequence::power(a, p);
            for (std::size_t n : {0u, 1u, 7u, 1000u, 999999u})
                EXPECT_NEAR(s(n), a / std::pow(n + 1.0, p), 1e-15 * a) << a << " " << p << " " << n;
        }
}

TEST(StepSequence, RejectsBadParameters) {
    EXPECT_THROW(StepSequence::power(1.0, 1.0), ParameterError);
    EXPECT_THROW(StepSequence::power(0.0, 1.0), ParameterError);
    EXPECT_THROW(StepSequence::power(0.5, 0.0), ParameterError);
    EXPECT_THROW(StepSequence::power(0.5, 1.5), ParameterError);
    EXPECT_THROW(StepSequence::explicit_list({0.5, 1.0}), ParameterError);
    EXPECT_THROW(StepSequence::explicit_list({}), StructuralError);
}

TEST(StepSequence, ExplicitIndexPastEnd) {
    const auto s = StepSequence::explicit_list({0.5, 0.25});
    EXPECT_DOUBLE_EQ(s(1), 0.25);
    EXPECT_THROW(s(2), StructuralError);
}

TEST(Conditions, PowerFamilyIsConclusive) {
    const auto r = check_conditions(StepSequence::power(0.9, 0.5), 100);
    EXPECT_TRUE(r.all_hold());
    EXPECT_FALSE(r.analytic_failure());
    for (const auto* v : {&r.vanishing, &r.divergent_sum, &r.slow_variation}) EXPECT_TRUE(v->conclusive);
    EXPECT_THROW(check_conditions(StepSequence::power(), 9), ParameterError);
}

TEST(Conditions, ConstantListFailsVanishing) {
    const auto r = check_conditions(StepSequence::explicit_list(std::vector<double>(100, 0.5)), 100);
    EXPECT_FALSE(r.vanishing.holds);
    EXPECT_FALSE(r.vanishing.conclusive);
    EXPECT_DOUBLE_EQ(r.vanishing.measured, 0.5);
    EXPECT_FALSE(r.analytic_failure());
}

TEST(Conditions, GeometricListFailsSumAndVariation) {
    std::vector<double> v(50);
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = std::pow(2.0, -static_cast<double>(n + 1));
    const auto r = check_conditions(StepSequence::explicit_list(v), 50);
    EXPECT_TRUE(r.vanishing.holds);
    EXPECT_FALSE(r.divergent_sum.holds);
    EXPECT_FALSE(r.slow_variation.holds);
    EXPECT_NEAR(r.slow_variation.measured, 0.5, 1e-12);
}

TEST(Conditions, HarmonicListPasses) {
    std::vector<double> v(100000);
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = 0.9 / (n + 1.0);
    const auto r = check_conditions(StepSequence::explicit_list(v), v.size());
    EXPECT_TRUE(r.all_hold());
    EXPECT_THROW(check_conditions(StepSequence::explicit_list(v), v.size() + 1), StructuralError);
}

TEST(StepSequence, PartialSumsGrowWithoutBound) {
    for (double p : {0.5, 1.0}) {
        const auto s = StepSequence::power(0.9, p);
        double sum = 0.0, last_checkpoint = 0.0;
        for (std::size_t n = 0; n < 1'000'000; ++n) {
            sum += s(n);
            if ((n + 1) % 100'000 == 0) {
                EXPECT_GT(sum, last_checkpoint + 0.09) << "p = " << p << " n = " << n;
                last_checkpoint = sum;
            }
        }
    }
}
