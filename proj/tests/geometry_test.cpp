#include "ontic/geometry.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace ontic;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_vec_near(const BlochVector& a, const BlochVector& b, double tol) {
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    EXPECT_NEAR(a.z, b.z, tol);
}

}  // namespace

TEST(Geometry, to_spherical_reference_points) {
    auto north = to_spherical({0, 0, 1});
    EXPECT_EQ(north.theta, 0.0);
    EXPECT_EQ(north.phi, 0.0);

    auto xaxis = to_spherical({1, 0, 0});
    EXPECT_NEAR(xaxis.theta, kPi / 2, 1e-15);
    EXPECT_EQ(xaxis.phi, 0.0);

    auto south = to_spherical({0, 0, -1});
    EXPECT_NEAR(south.theta, kPi, 1e-15);
    EXPECT_EQ(south.phi, 0.0);

    auto negy = to_spherical({0, -1, 0});
    EXPECT_NEAR(negy.phi, 3 * kPi / 2, 1e-15);
}

TEST(Geometry, from_spherical_reference_points) {
    expect_vec_near(from_spherical({0.0, 2.3}), {0, 0, 1}, 1e-15);
    expect_vec_near(from_spherical({kPi / 2, kPi / 2}), {0, 1, 0}, 1e-15);
    // sin(arccos(3/5)) = 4/5
    expect_vec_near(from_spherical({std::acos(0.6), 0.0}), {0.8, 0.0, 0.6}, 1e-15);
}

TEST(Geometry, spherical_round_trip_on_random_vectors) {
    Rng rng(7);
    for (int i = 0; i < 10'000; ++i) {
        const BlochVector v = random_bloch(rng);
        ASSERT_TRUE(is_unit(v));
        const auto a = to_spherical(v);
        ASSERT_GE(a.theta, 0.0);
        ASSERT_LE(a.theta, kPi);
        ASSERT_GE(a.phi, 0.0);
        ASSERT_LT(a.phi, 2 * kPi);
        expect_vec_near(from_spherical(a), v, 1e-12);
        const auto back = to_spherical(from_spherical(a));
        ASSERT_NEAR(back.theta, a.theta, 1e-12);
        ASSERT_NEAR(back.phi, a.phi, 1e-12);
    }
}

TEST(Geometry, pole_pins_azimuth_to_zero) {
    const auto a = to_spherical({1e-16, 1e-16, 1.0});
    EXPECT_EQ(a.phi, 0.0);
    expect_vec_near(from_spherical(a), {0, 0, 1}, 1e-15);
}

TEST(Geometry, born_probability_qubit_examples) {
    const BlochVector z{0, 0, 1};
    EXPECT_DOUBLE_EQ(born_probability_qubit(z, z), 1.0);
    EXPECT_DOUBLE_EQ(born_probability_qubit(z, -z), 0.0);
    EXPECT_DOUBLE_EQ(born_probability_qubit(z, {1, 0, 0}), 0.5);
}

TEST(Geometry, born_qubit_complement_sums_to_one) {
    Rng rng(11);
    for (int i = 0; i < 10'000; ++i) {
        const auto v = random_bloch(rng);
        const auto w = random_bloch(rng);
        ASSERT_NEAR(born_probability_qubit(v, w) + born_probability_qubit(v, -w), 1.0, 1e-15);
    }
}

TEST(Geometry, born_probability_ndim_examples) {
    const auto a = AmplitudeVector({{1, 0}, {0, 0}});
    const auto b = AmplitudeVector({{0, 0}, {1, 0}});
    const auto plus = AmplitudeVector::normalize({{1, 0}, {1, 0}});
    EXPECT_NEAR(born_probability_ndim(a, a), 1.0, 1e-15);
    EXPECT_NEAR(born_probability_ndim(a, b), 0.0, 1e-15);
    EXPECT_NEAR(born_probability_ndim(plus, a), 0.5, 1e-15);
}

TEST(Geometry, born_probability_ndim_rejects_dimension_mismatch) {
    const auto a = AmplitudeVector({{1, 0}, {0, 0}});
    const auto c = AmplitudeVector({{1, 0}, {0, 0}, {0, 0}});
    EXPECT_THROW(born_probability_ndim(a, c), std::invalid_argument);
}

TEST(Geometry, amplitude_vector_invariants) {
    EXPECT_THROW(AmplitudeVector(std::vector<Complex>{Complex{1, 0}}), std::invalid_argument);
    EXPECT_THROW(AmplitudeVector({{1, 0}, {1, 0}}), std::invalid_argument);
    EXPECT_THROW(AmplitudeVector::normalize({{0, 0}, {0, 0}}), std::invalid_argument);
    Rng rng(3);
    EXPECT_THROW(random_amplitudes(1, rng), std::invalid_argument);
}

TEST(Geometry, born_ndim_symmetric_and_matches_qubit_formula) {
    Rng rng(5);
    for (int i = 0; i < 2'000; ++i) {
        const auto psi = random_amplitudes(2, rng);
        const auto phi = random_amplitudes(2, rng);
        const double p = born_probability_ndim(psi, phi);
        ASSERT_NEAR(p, born_probability_ndim(phi, psi), 1e-15);
        const auto v = bloch_from_amplitudes(psi);
        const auto w = bloch_from_amplitudes(phi);
        ASSERT_TRUE(is_unit(v));
        ASSERT_NEAR(p, born_probability_qubit(v, w), 1e-12);
        ASSERT_NEAR(born_probability_ndim(amplitudes_from_bloch(v), psi), 1.0, 1e-12);
    }
}

TEST(Geometry, haar_sphere_mean_vz_is_zero) {
    Rng rng(2024);
    double sum = 0.0;
    constexpr int n = 1'000'000;
    for (int i = 0; i < n; ++i) sum += random_bloch(rng).z;
    EXPECT_NEAR(sum / n, 0.0, 0.005);
}

TEST(Geometry, haar_amplitudes_component_weight_is_one_over_n) {
    Rng rng(99);
    double sum = 0.0;
    constexpr int n = 100'000;
    for (int i = 0; i < n; ++i) {
        const auto psi = random_amplitudes(4, rng);
        ASSERT_NEAR(psi.norm_squared(), 1.0, 1e-12);
        sum += std::norm(psi[0]);
    }
    EXPECT_NEAR(sum / n, 0.25, 0.01);
}

TEST(Geometry, seeded_sequences_repeat) {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 1000; ++i) {
        const auto va = random_bloch(a);
        const auto vb = random_bloch(b);
        ASSERT_EQ(va, vb);
    }
    EXPECT_EQ(random_amplitudes(5, a), random_amplitudes(5, b));
}

TEST(Geometry, case_streams_are_independent_of_order) {
    Rng first = Rng::for_case(42, 3);
    Rng other = Rng::for_case(42, 4);
    (void)other.bits();
    Rng again = Rng::for_case(42, 3);
    EXPECT_EQ(first.bits(), again.bits());
    EXPECT_NE(Rng::for_case(42, 3).bits(), Rng::for_case(42, 4).bits());
    EXPECT_NE(Rng::for_case(42, 3).bits(), Rng::for_case(43, 3).bits());
}

TEST(Geometry, cap_sampling_stays_inside_cap) {
    Rng rng(8);
    for (int i = 0; i < 10'000; ++i) {
        const auto v = random_bloch_in_cap(rng, 0.5);
        ASSERT_LT(to_spherical(v).theta, 0.5 + 1e-15);
        ASSERT_TRUE(is_unit(v));
    }
}
