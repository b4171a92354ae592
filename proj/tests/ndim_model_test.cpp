#include "ontic/ndim_model.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

using namespace ontic;

namespace {

/// Brute-force region test written from the definition, independent of positivity_check.
bool in_region_oracle(const AmplitudeVector& psi, const AmplitudeVector& phi, const WeightScheme& r) {
    for (std::size_t n = 0; n < psi.dim(); ++n)
        for (std::size_t m = 0; m < psi.dim(); ++m) {
            const Complex a = std::conj(psi[n]) * psi[m];
            const Complex b = std::conj(phi[n]) * phi[m];
            const double d2 = (a.real() - b.real()) * (a.real() - b.real()) + (a.imag() - b.imag()) * (a.imag() - b.imag());
            if (!(d2 < 2.0 * r(n, m))) return false;
        }
    return true;
}

/// |<phi|psi>|^2 by explicit sums of real and imaginary parts.
double overlap_oracle(const AmplitudeVector& psi, const AmplitudeVector& phi) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < psi.dim(); ++n) {
        re += phi[n].real() * psi[n].real() + phi[n].imag() * psi[n].imag();
        im += phi[n].real() * psi[n].imag() - phi[n].imag() * psi[n].real();
    }
    return re * re + im * im;
}

/// Pair with |psi_n - phi_n|^2 < R/2 for every n, by rejection.
std::pair<AmplitudeVector, AmplitudeVector> sufficient_pair(std::size_t dim, double r_const, Rng& rng) {
    auto psi = random_amplitudes(dim, rng);
    const double radius = std::sqrt(r_const / 2.0);
    for (;;) {
        std::vector<Complex> amps(psi.amplitudes().begin(), psi.amplitudes().end());
        for (auto& a : amps) a += std::polar(radius * std::sqrt(rng.uniform()), rng.uniform(0.0, kTwoPi));
        auto phi = AmplitudeVector::normalize(std::move(amps));
        if (sufficient_condition(psi, phi, r_const)) return {std::move(psi), std::move(phi)};
    }
}

}  // namespace

TEST(NdimModel, uniform_weights_values) {
    const auto r = uniform_weights(2);
    for (double w : r.weights()) EXPECT_DOUBLE_EQ(w, 0.25);
    EXPECT_DOUBLE_EQ(r.constant_value(), 0.25);
    EXPECT_THROW(uniform_weights(1), std::invalid_argument);
}

TEST(NdimModel, ground_weighted_values) {
    const auto r = ground_weighted(2, 0.6);
    EXPECT_NEAR(r(0, 0), 0.2, 1e-15);
    EXPECT_NEAR(r(0, 1), 0.2, 1e-15);
    EXPECT_NEAR(r(1, 0), 0.2, 1e-15);
    EXPECT_NEAR(r(1, 1), 0.4, 1e-15);
    EXPECT_TRUE(std::isnan(r.constant_value()));
    EXPECT_THROW(ground_weighted(3, 0.0), std::invalid_argument);
    EXPECT_THROW(ground_weighted(3, 1.0), std::invalid_argument);
    EXPECT_THROW(ground_weighted(3, -0.2), std::invalid_argument);
}

TEST(NdimModel, schemes_are_normalized) {
    for (std::size_t n : {2u, 3u, 4u, 8u, 17u}) {
        for (const auto& r : {uniform_weights(n), ground_weighted(n, 0.3), ground_weighted(n, 0.9)}) {
            double s = 0.0;
            for (double w : r.weights()) {
                EXPECT_GT(w, 0.0);
                s += w;
            }
            EXPECT_NEAR(s, 1.0, 1e-12);
        }
    }
}

TEST(NdimModel, weight_scheme_validation) {
    EXPECT_THROW(WeightScheme(2, {0.5, 0.5, 0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(WeightScheme(2, {0.3, 0.3, 0.3, 0.3}), std::invalid_argument);
    EXPECT_THROW(WeightScheme(2, {1.0}), std::invalid_argument);
}

TEST(NdimModel, sample_basis_state) {
    const AmplitudeVector psi({{1, 0}, {0, 0}});
    const auto r = uniform_weights(2);
    Rng rng(1);
    for (int i = 0; i < 1'000; ++i) {
        const auto s = sample_ndim(psi, r, rng);
        const Complex expected = (s.n == 0 && s.m == 0) ? Complex{1, 0} : Complex{0, 0};
        ASSERT_EQ(s.value, expected);
    }
}

TEST(NdimModel, sampled_value_is_exact_coherence) {
    Rng rng(2);
    const auto r = ground_weighted(5, 0.4);
    for (int i = 0; i < 10'000; ++i) {
        const auto psi = random_amplitudes(5, rng);
        const auto s = sample_ndim(psi, r, rng);
        ASSERT_EQ(s.value, std::conj(psi[s.n]) * psi[s.m]);
    }
}

TEST(NdimModel, sampled_indices_follow_weights) {
    Rng rng(3);
    const auto r = ground_weighted(3, 0.5);
    const auto psi = random_amplitudes(3, rng);
    constexpr int n = 1'000'000;
    std::vector<int> counts(9, 0);
    for (int i = 0; i < n; ++i) {
        const auto s = sample_ndim(psi, r, rng);
        ++counts[s.n * 3 + s.m];
    }
    for (std::size_t k = 0; k < 9; ++k) {
        const double p = r.weights()[k];
        EXPECT_NEAR(static_cast<double>(counts[k]) / n, p, 4 * std::sqrt(p * (1 - p) / n)) << "cell " << k;
    }
}

TEST(NdimModel, conditional_probability_examples) {
    const AmplitudeVector e0({{1, 0}, {0, 0}});
    const AmplitudeVector e1({{0, 0}, {1, 0}});
    const auto r = uniform_weights(2);
    // 1 - |0 - 1|^2 / (2 * 1/4) = -1
    EXPECT_DOUBLE_EQ(conditional_probability_ndim(e1, {0, 0, {1, 0}}, r), -1.0);
    Rng rng(4);
    const auto psi = random_amplitudes(2, rng);
    for (std::size_t n = 0; n < 2; ++n)
        for (std::size_t m = 0; m < 2; ++m)
            EXPECT_DOUBLE_EQ(conditional_probability_ndim(psi, {n, m, coherence(psi, n, m)}, r), 1.0);
    EXPECT_THROW(conditional_probability_ndim(e0, {0, 0, {1, 0}}, uniform_weights(3)), std::invalid_argument);
}

TEST(NdimModel, positivity_check_examples) {
    const AmplitudeVector e0({{1, 0}, {0, 0}});
    const AmplitudeVector e1({{0, 0}, {1, 0}});
    const auto r = uniform_weights(2);
    const auto same = positivity_check(e0, e0, r);
    EXPECT_TRUE(same.ok);
    EXPECT_DOUBLE_EQ(same.margin, 0.5);
    const auto bad = positivity_check(e0, e1, r);
    EXPECT_FALSE(bad.ok);
    EXPECT_DOUBLE_EQ(bad.margin, -0.5);
    EXPECT_EQ(bad.worst_n, 0u);
    EXPECT_EQ(bad.worst_m, 0u);
}

TEST(NdimModel, positivity_check_agrees_with_oracle) {
    Rng rng(5);
    int inside = 0;
    for (int i = 0; i < 5'000; ++i) {
        const std::size_t dim = 2 + i % 3;
        const auto r = (i % 2) ? uniform_weights(dim) : ground_weighted(dim, 0.5);
        const auto psi = random_amplitudes(dim, rng);
        std::vector<Complex> amps(psi.amplitudes().begin(), psi.amplitudes().end());
        for (auto& a : amps) a += std::polar(0.3 * rng.uniform(), rng.uniform(0.0, kTwoPi));
        const auto phi = AmplitudeVector::normalize(std::move(amps));
        const bool ok = positivity_check(psi, phi, r).ok;
        ASSERT_EQ(ok, in_region_oracle(psi, phi, r));
        inside += ok;
    }
    EXPECT_GT(inside, 0);
    EXPECT_LT(inside, 5'000);
}

TEST(NdimModel, sufficient_condition_threshold_at_n2) {
    // R = 1/4 at N = 2: |psi_n - phi_n| < 1 / (2 sqrt 2)
    const double threshold = 1.0 / (2.0 * std::sqrt(2.0));
    EXPECT_NEAR(std::sqrt(0.25 / 2.0), threshold, 1e-15);
    EXPECT_NEAR(threshold, 1.0 / (std::sqrt(2.0) * 2), 1e-15);
    Rng rng(6);
    const auto psi = random_amplitudes(2, rng);
    EXPECT_TRUE(sufficient_condition(psi, psi, 0.25));
    const AmplitudeVector e0({{1, 0}, {0, 0}});
    const AmplitudeVector e1({{0, 0}, {1, 0}});
    EXPECT_FALSE(sufficient_condition(e0, e1, 0.25));
}

TEST(NdimModel, sufficient_condition_implies_positivity) {
    Rng rng(7);
    int failures = 0;
    for (int i = 0; i < 1'000; ++i) {
        const std::size_t dim = 2 + i % 7;
        const double r_const = 1.0 / static_cast<double>(dim * dim);
        auto [psi, phi] = sufficient_pair(dim, r_const, rng);
        if (!positivity_check(psi, phi, uniform_weights(dim)).ok) ++failures;
    }
    EXPECT_EQ(failures, 0);
}

TEST(NdimModel, sufficient_condition_is_phase_sensitive) {
    Rng rng(8);
    const auto psi = random_amplitudes(3, rng);
    std::vector<Complex> rotated(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto& a : rotated) a *= std::polar(1.0, 2.0);
    const AmplitudeVector phi(std::move(rotated));
    // same ray, so positivity holds, but the literal componentwise test fails
    EXPECT_TRUE(positivity_check(psi, phi, uniform_weights(3)).ok);
    EXPECT_FALSE(sufficient_condition(psi, phi, 1.0 / 9.0));
}

TEST(NdimModel, exact_probability_gated_and_ungated) {
    Rng rng(9);
    for (std::size_t dim : {2u, 3u, 4u, 8u}) {
        const auto r = uniform_weights(dim);
        for (int i = 0; i < 200; ++i) {
            const auto pair = make_in_region_pair(dim, r, rng);
            ASSERT_NEAR(exact_event_probability_ndim(pair.psi, pair.phi, r), overlap_oracle(pair.psi, pair.phi), 1e-12);
            ASSERT_NEAR(exact_event_probability_ndim(pair.psi, pair.psi, r), 1.0, 1e-12);
            const auto a = random_amplitudes(dim, rng);
            const auto b = random_amplitudes(dim, rng);
            ASSERT_NEAR(weighted_event_sum(a, b, r), overlap_oracle(a, b), 1e-12);
        }
    }
}

TEST(NdimModel, exact_probability_reports_worst_cell) {
    const AmplitudeVector e0({{1, 0}, {0, 0}});
    const AmplitudeVector e1({{0, 0}, {1, 0}});
    try {
        exact_event_probability_ndim(e0, e1, uniform_weights(2));
        FAIL() << "expected PositivityViolation";
    } catch (const PositivityViolation& e) {
        EXPECT_FALSE(e.result.ok);
        EXPECT_LT(e.result.margin, 0.0);
    }
    // the ungated sum still reproduces the overlap
    EXPECT_NEAR(weighted_event_sum(e0, e1, uniform_weights(2)), 0.0, 1e-15);
}

TEST(NdimModel, in_region_conditionals_lie_in_unit_interval) {
    Rng rng(10);
    for (std::size_t dim : {2u, 3u, 4u, 8u}) {
        const auto r = ground_weighted(dim, 0.5);
        for (int i = 0; i < 200; ++i) {
            const auto pair = make_in_region_pair(dim, r, rng);
            for (int k = 0; k < 20; ++k) {
                const double p = conditional_probability_ndim(pair.phi, sample_ndim(pair.psi, r, rng), r);
                ASSERT_GT(p, 0.0);
                ASSERT_LE(p, 1.0);
            }
        }
    }
}

TEST(NdimModel, make_in_region_pair_properties) {
    Rng rng(11);
    const auto r = uniform_weights(2);
    std::size_t rejections = 0;
    for (int i = 0; i < 1'000; ++i) {
        const auto pair = make_in_region_pair(2, r, rng, 0.1);
        ASSERT_TRUE(positivity_check(pair.psi, pair.phi, r).ok);
        ASSERT_NEAR(pair.psi.norm_squared(), 1.0, 1e-12);
        ASSERT_NEAR(pair.phi.norm_squared(), 1.0, 1e-12);
        rejections += pair.rejections;
    }
    // acceptance rate strictly positive: 1000 pairs found in finitely many tries
    EXPECT_LT(rejections, 1'000u * kDefaultMaxAttempts);
}

TEST(NdimModel, make_in_region_pair_gives_up) {
    Rng rng(12);
    EXPECT_THROW(make_in_region_pair(8, uniform_weights(8), rng, 50.0, 20), RegionSamplingError);
    EXPECT_THROW(make_in_region_pair(3, uniform_weights(2), rng), std::invalid_argument);
}

TEST(NdimModel, monte_carlo_frequency_matches_overlap) {
    Rng rng(13);
    const auto r = uniform_weights(3);
    for (int i = 0; i < 3; ++i) {
        const auto pair = make_in_region_pair(3, r, rng);
        const double p = born_probability_ndim(pair.psi, pair.phi);
        constexpr int n = 1'000'000;
        int hits = 0;
        for (int k = 0; k < n; ++k) {
            hits += rng.bernoulli(conditional_probability_ndim(pair.phi, sample_ndim(pair.psi, r, rng), r));
        }
        EXPECT_NEAR(static_cast<double>(hits) / n, p, 5 * std::sqrt(p * (1 - p) / n));
    }
}
