#include "ontic/stats.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "ontic/rng.hpp"

using namespace ontic;

TEST(Stats, z_score_formula) {
    EXPECT_NEAR(stats::z_score(0.51, 0.5, 10'000), 2.0, 1e-12);
    EXPECT_NEAR(stats::z_score(0.75, 0.75, 100), 0.0, 1e-15);
    EXPECT_TRUE(std::isnan(stats::z_score(1.0, 1.0, 10)));
    EXPECT_TRUE(std::isnan(stats::z_score(0.0, 0.0, 10)));
}

TEST(Stats, normal_cdf_reference_values) {
    EXPECT_NEAR(stats::normal_cdf(0.0), 0.5, 1e-15);
    EXPECT_NEAR(stats::normal_cdf(1.959963984540054), 0.975, 1e-12);
    EXPECT_NEAR(stats::normal_cdf(-5.0), 2.866515718791939e-07, 1e-18);
}

TEST(Stats, binomial_test_reference_values) {
    // 5 successes of 10 at p = 1/2 is the mode; two-sided p-value capped at 1
    EXPECT_NEAR(stats::binomial_two_sided_p(5, 10, 0.5), 1.0, 1e-12);
    // P[X <= 1] = 11 / 1024, doubled
    EXPECT_NEAR(stats::binomial_two_sided_p(1, 10, 0.5), 22.0 / 1024.0, 1e-12);
    EXPECT_NEAR(stats::binomial_two_sided_p(9, 10, 0.5), 22.0 / 1024.0, 1e-12);
    EXPECT_LT(stats::binomial_two_sided_p(600'000, 1'000'000, 0.5), 1e-100);
    EXPECT_THROW(stats::binomial_two_sided_p(11, 10, 0.5), std::invalid_argument);
}

TEST(Stats, ks_accepts_normal_and_rejects_shifted) {
    Rng rng(1);
    std::vector<double> xs(2'000);
    for (auto& x : xs) x = rng.normal();
    EXPECT_GT(stats::ks_p_value(stats::ks_statistic_normal(xs), xs.size()), 1e-3);
    for (auto& x : xs) x += 0.3;
    EXPECT_LT(stats::ks_p_value(stats::ks_statistic_normal(xs), xs.size()), 1e-3);
}

TEST(Stats, ks_p_value_reference) {
    // lambda = 1.36 is the classic 5% critical value of the Kolmogorov distribution
    const std::size_t n = 1'000'000;
    const double sn = std::sqrt(static_cast<double>(n));
    const double d = 1.358 / (sn + 0.12 + 0.11 / sn);
    EXPECT_NEAR(stats::ks_p_value(d, n), 0.05, 1e-3);
    EXPECT_DOUBLE_EQ(stats::ks_p_value(0.0, 10), 1.0);
}
