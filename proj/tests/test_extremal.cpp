#include <doctest.h>

#include <cmath>

#include "newman/extremal.hpp"
#include "test_support.hpp"

using namespace newman;

namespace {

// Direct evaluation of the polynomial on M points, O(n M).
double l1_oracle(const std::vector<cplx>& a, std::size_t m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double t = kTwoPi * double(j) / double(m);
        cplx p = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) p += a[k] * std::polar(1.0, t * double(k));
        acc += std::abs(p);
    }
    return acc / double(m);
}

std::vector<cplx> newman_coeffs(std::size_t n) {
    std::vector<cplx> a(n + 1);
    for (std::size_t k = 0; k <= n; ++k) a[k] = std::polar(1.0, kTwoPi * double(k * k) / double(n + 1));
    return a;
}

// Brute-force synthesis on a very dense grid.
double crest_oracle(const std::vector<double>& m, const std::vector<double>& phi, std::size_t samples) {
    double peak = 0.0, power = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = double(j) / double(samples);
        double s = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) s += m[k] * std::cos(kTwoPi * double(k + 1) * t + phi[k]);
        peak = std::max(peak, std::abs(s));
        power += s * s;
    }
    return 20.0 * std::log10(peak / std::sqrt(power / double(samples)));
}

}  // namespace

TEST_CASE("degree zero has unit L1 norm") {
    const auto r = newman_polynomial_l1(0);
    CHECK(r.l1_estimate == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.upper_bound == 1.0);
    CHECK(r.ratio_to_sqrt_n == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("L1 estimate matches direct evaluation") {
    for (std::size_t n : {1u, 2u, 7u, 20u, 63u}) {
        const auto a = newman_coeffs(n);
        for (std::size_t os : {4u, 8u, 32u})
            CHECK(polynomial_l1(a, os) == doctest::Approx(l1_oracle(a, os * (n + 1))).epsilon(1e-11));
        CHECK(newman_polynomial_l1(n, 16).l1_estimate == doctest::Approx(polynomial_l1(a, 16)).epsilon(1e-12));
    }
}

TEST_CASE("L1 bounds") {
    const auto r = newman_polynomial_l1(63);
    CHECK(r.l1_estimate <= std::sqrt(64.0) + 1e-9);
    CHECK(r.l1_estimate <= r.upper_bound + 1e-9);
    CHECK(r.ratio_to_sqrt_n > 0.8);
    CHECK(r.sqrt_n_minus_l1 == doctest::Approx(std::sqrt(63.0) - r.l1_estimate));

    const auto big = newman_polynomial_l1(1023);
    CHECK(std::abs(big.ratio_to_sqrt_n - 1.0) < std::abs(r.ratio_to_sqrt_n - 1.0));

    // Random unimodular coefficients: the Cauchy-Schwarz bound still holds.
    RandomStream rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cplx> a(1 + rng.uniform_int(0, 100));
        for (auto& c : a) c = std::polar(1.0, rng.uniform(0.0, kTwoPi));
        CHECK(polynomial_l1(a, 8) <= std::sqrt(double(a.size())) + 1e-9);
    }
}

TEST_CASE("quadrature refinement settles") {
    for (std::size_t n : {63u, 255u}) {
        const double a = newman_polynomial_l1(n, 8).l1_estimate;
        const double b = newman_polynomial_l1(n, 16).l1_estimate;
        const double c = newman_polynomial_l1(n, 32).l1_estimate;
        const double d = newman_polynomial_l1(n, 64).l1_estimate;
        CHECK(std::abs(d - c) < std::abs(b - a));
        CHECK(std::abs(d - c) / d < 1e-2);
    }
}

TEST_CASE("L1 is invariant under coefficient rotation and conjugation") {
    RandomStream rng(9);
    std::vector<cplx> a(40);
    for (auto& c : a) c = std::polar(rng.uniform(0.5, 1.5), rng.uniform(0.0, kTwoPi));
    const double base = polynomial_l1(a, 16);
    auto rotated = a;
    for (auto& c : rotated) c *= std::polar(1.0, 1.234);
    CHECK(polynomial_l1(rotated, 16) == doctest::Approx(base).epsilon(1e-12));
    auto conj = a;
    for (auto& c : conj) c = std::conj(c);
    CHECK(polynomial_l1(conj, 16) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("chirp coefficients approach sqrt(n) from below") {
    const auto r = newman_polynomial_l1(255, 32, CoefficientPhase::Chirp);
    CHECK(r.coefficients == CoefficientPhase::Chirp);
    CHECK(r.ratio_to_sqrt_n > 0.99);
    CHECK(r.l1_estimate <= r.upper_bound);
    CHECK(parse_coefficient_phase(to_string(CoefficientPhase::Chirp)) == CoefficientPhase::Chirp);
    CHECK_THROWS_AS(parse_coefficient_phase("rudin"), InvalidArgument);
}

TEST_CASE("L1 argument checks") {
    CHECK_THROWS_AS(newman_polynomial_l1(10, 2), InvalidArgument);
    CHECK_THROWS_AS(polynomial_l1(std::vector<cplx>{}, 8), InvalidArgument);
}

TEST_CASE("crest factor of a single tone is 3.0103 dB") {
    const auto r = crest_factor(Spectrum({1.0}), PhaseSequence({0.0}));
    CHECK(r.crest_factor_db == doctest::Approx(3.0103).epsilon(0.001 / 3.0103));
    CHECK(r.n_tones == 1);
}

TEST_CASE("crest factor matches direct synthesis") {
    RandomStream rng(10);
    for (std::size_t n : {2u, 5u, 16u}) {
        std::vector<double> m(n), phi(n);
        for (std::size_t k = 0; k < n; ++k) {
            m[k] = rng.uniform(0.1, 1.0);
            phi[k] = rng.uniform(0.0, kTwoPi);
        }
        const auto r = crest_factor(Spectrum(m), PhaseSequence(phi), 16);
        CHECK(std::abs(r.crest_factor_db - crest_oracle(m, phi, 8192 * n)) < 1e-4);
    }
}

TEST_CASE("quadratic phases keep the crest factor low") {
    for (std::size_t n : {16u, 64u, 256u}) {
        const auto r = crest_factor(Spectrum(std::vector<double>(n, 1.0)), newman_phase(n));
        CHECK(r.crest_factor_db < 6.0);
    }
    // Zero phase: all tones align at t = 0, so the peak is N and rms sqrt(N/2).
    const std::size_t n = 64;
    const auto zero = crest_factor(Spectrum(std::vector<double>(n, 1.0)), PhaseSequence(std::vector<double>(n, 0.0)));
    CHECK(zero.crest_factor_db == doctest::Approx(20.0 * std::log10(std::sqrt(2.0 * n))).epsilon(1e-9));
}

TEST_CASE("crest factor is scale invariant and stable under oversampling") {
    const std::size_t n = 64;
    const auto phi = newman_phase(n);
    const auto a = crest_factor(Spectrum(std::vector<double>(n, 1.0)), phi);
    const auto b = crest_factor(Spectrum(std::vector<double>(n, 3.5)), phi);
    CHECK(a.crest_factor_db == doctest::Approx(b.crest_factor_db).epsilon(1e-12));
    const auto fine = crest_factor(Spectrum(std::vector<double>(n, 1.0)), phi, 32);
    CHECK(std::abs(fine.crest_factor_db - a.crest_factor_db) < 0.05);
    CHECK(fine.crest_factor_db >= a.crest_factor_db - 1e-12);
}

TEST_CASE("crest factor argument checks") {
    CHECK_THROWS_AS(crest_factor(Spectrum({0.0, 0.0}), PhaseSequence({0.0, 0.0})), InvalidArgument);
    CHECK_THROWS_AS(crest_factor(Spectrum({1.0}), PhaseSequence({0.0, 0.0})), InvalidArgument);
    CHECK_THROWS_AS(crest_factor(Spectrum({1.0}), PhaseSequence({0.0}), 4), InvalidArgument);
}
