#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cliffordt/analysis.hpp"
#include "cliffordt/rng.hpp"

using namespace cliffordt;

namespace {

EntropySeries cooling(std::vector<double> v) { return {std::move(v), Phase::Cooling}; }

}  // namespace

TEST(Variance, Examples) {
    EXPECT_EQ(temporal_variance(cooling({3, 3, 3})), 0.0);
    EXPECT_DOUBLE_EQ(temporal_variance(cooling({0, 1})), 0.25);
    EXPECT_DOUBLE_EQ(temporal_variance(cooling({1, 2, 3, 4})), 1.25);
}

TEST(Variance, Errors) {
    EXPECT_THROW(temporal_variance(cooling({1.0})), InsufficientData);
    EXPECT_THROW(temporal_variance(cooling({})), InsufficientData);
    EXPECT_THROW(temporal_variance(EntropySeries{{1, 2, 3}, Phase::Heating}), UsageError);
}

TEST(Variance, TranslationAndScaling) {
    RandomEngine rng(1);
    std::vector<double> v(257);
    for (auto& x : v) x = std::ldexp(static_cast<double>(uniform_index(rng, 1 << 20)), -20);
    const double base = temporal_variance(cooling(v));
    auto shifted = v;
    for (auto& x : shifted) x += 3.0;
    EXPECT_EQ(temporal_variance(cooling(shifted)), base);
    auto scaled = v;
    for (auto& x : scaled) x *= 4.0;
    EXPECT_EQ(temporal_variance(cooling(scaled)), 16.0 * base);
    auto scaled3 = v;
    for (auto& x : scaled3) x *= 3.0;
    EXPECT_NEAR(temporal_variance(cooling(scaled3)), 9.0 * base, 1e-14);
}

TEST(Stats, MeanAndStandardError) {
    const std::vector<double> xs{1, 2, 3, 4};
    const auto s = sample_stats(xs);
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_NEAR(s.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
    EXPECT_EQ(s.count, 4u);
    const std::vector<double> one{7.0};
    EXPECT_EQ(sample_stats(one).std_error, 0.0);
}

TEST(Fits, DklExamples) {
    EXPECT_NEAR(dkl_universal(18), 0.17351, 1e-4);
    EXPECT_NEAR(dkl_universal(18), 24.0 / std::pow(262144.0, 0.6) + 0.16, 1e-15);
    EXPECT_NEAR(dkl_fit(1e6, 18).value, dkl_universal(18), 1e-12);
    EXPECT_NEAR(dkl_fit(8, 8).value, 24.0 * (1.0 + std::pow(256.0, -0.6)) + 0.16, 1e-12);
    EXPECT_NEAR(dkl_fit(16, 8).value, 24.0 * (std::pow(256.0, -1.25) + std::pow(256.0, -0.6)) + 0.16, 1e-14);
    EXPECT_TRUE(dkl_fit(16, 8).within_validity);
    EXPECT_FALSE(dkl_fit(7, 8).within_validity);
}

TEST(Fits, VarianceExamples) {
    EXPECT_NEAR(var_fit(1e4, 8), 0.2 / std::pow(256.0, 1.25), 1e-18);
    EXPECT_NEAR(var_universal(8), 1.953125e-4, 1e-12);
    EXPECT_NEAR(var_fit(0, 8), 0.1 / std::pow(256.0, 0.2) + 0.2 / std::pow(256.0, 1.25), 1e-15);
    for (int n : {8, 12, 18}) {
        for (double t = 0; t < 60; t += 0.5) EXPECT_LT(var_fit(t + 0.5, n), var_fit(t, n));
    }
    EXPECT_THROW(var_fit(-1, 8), UsageError);
}

TEST(Fits, ReversibilityExamples) {
    EXPECT_NEAR(reversibility_gamma(18), 13.581799474873903, 1e-10);
    EXPECT_NEAR(reversibility_fit(1e4, 18), var_universal(18), 1e-15);
    for (int t = 0; t < 40; ++t) EXPECT_LT(reversibility_fit(t + 1, 18), reversibility_fit(t, 18));
    EXPECT_TRUE(std::isnan(reversibility_fit(0, 8)));
    EXPECT_TRUE(std::isfinite(reversibility_fit(0, 14)));
}

TEST(MinDoping, Examples) {
    EXPECT_EQ(min_doping(DopingKind::ESS, 16), 18.0);
    EXPECT_NEAR(min_doping(DopingKind::Variance, 18), 39.553333333333333, 1e-12);
    EXPECT_NEAR(min_doping(DopingKind::Reversibility, 18), 0.7 * std::pow(39.553333333333333, 1.4), 1e-10);
}

TEST(MinDoping, VarianceSolveMatchesScan) {
    for (int n = 8; n <= 40; ++n) {
        int scan = -1;
        const double floor = 0.2 / std::pow(std::ldexp(1.0, n), 1.25);
        for (int t = 0; t <= 200; ++t) {
            if (0.1 / std::pow(std::ldexp(1.0, n), 0.2) * std::exp(-t / 3.15) < floor) {
                scan = t;
                break;
            }
        }
        ASSERT_EQ(solve_min_doping_from_fit(DopingKind::Variance, n), scan) << "N=" << n;
        EXPECT_LE(std::abs(scan - min_doping(DopingKind::Variance, n)), 1.0) << "N=" << n;
    }
}

TEST(MinDoping, EssSolveFrozen) {
    // Smallest n_T with 24 d^(1.25 (1 - n_T/N)) < 24 / d^0.6 + 0.16.
    const std::vector<std::pair<int, int>> frozen{{8, 12}, {12, 17}, {16, 22}, {24, 30}, {40, 46}};
    for (const auto& [n, t] : frozen) EXPECT_EQ(solve_min_doping_from_fit(DopingKind::ESS, n), t) << "N=" << n;
    int prev = 0;
    for (int n = 8; n <= 40; ++n) {
        const int t = solve_min_doping_from_fit(DopingKind::ESS, n);
        EXPECT_GE(t, prev);
        prev = t;
    }
    EXPECT_THROW(solve_min_doping_from_fit(DopingKind::Reversibility, 8), UsageError);
}

TEST(MinDoping, GrowthSlopes) {
    EXPECT_NEAR(growth_order_slope(DopingKind::Reversibility, 1000, 100000), 1.4, 0.05);
    EXPECT_NEAR(growth_order_slope(DopingKind::Reversibility, 8, 40), 1.4597677531197994, 1e-9);
    EXPECT_NEAR(growth_order_slope(DopingKind::Variance, 1000, 100000), 1.0, 0.01);
}

TEST(Ensemble, PermutationInvariant) {
    EnsembleResult e;
    RandomEngine rng(4);
    for (std::size_t i = 0; i < 30; ++i) {
        RealizationRecord r;
        r.index = i;
        r.temporal_var = uniform_unit(rng);
        r.final_entropy = uniform_unit(rng);
        r.reached_zero = uniform_index(rng, 2) == 0;
        e.records.push_back(r);
    }
    e.recompute();
    auto shuffled = e;
    std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
    shuffled.recompute();
    EXPECT_NEAR(shuffled.variance.mean, e.variance.mean, 1e-15);
    EXPECT_NEAR(shuffled.variance.std_error, e.variance.std_error, 1e-15);
    EXPECT_NEAR(shuffled.final_entropy.mean, e.final_entropy.mean, 1e-15);
    EXPECT_NEAR(shuffled.success_fraction, e.success_fraction, 1e-15);
}
