#include <doctest.h>

#include <cmath>

#include "newman/phase_opt.hpp"
#include "test_support.hpp"

using namespace newman;

namespace {

Ensemble default_ensemble(std::size_t n = 64, std::size_t count = 8, std::uint64_t seed = 2025) {
    EnsembleSpec spec;
    spec.count = count;
    spec.seed = seed;
    return make_ensemble(spec, n);
}

PhaseVector random_theta(std::size_t n, RandomStream& rng) {
    PhaseVector t;
    t.theta.resize(n);
    for (double& v : t.theta) v = rng.uniform(0.0, kTwoPi);
    return t;
}

double relative_norm_error(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return norm2(d) / norm2(b);
}

}  // namespace

TEST_CASE("objective vanishes on an exact reconstruction") {
    // Constant spectra reconstruct exactly under the quadratic phase at even N.
    for (auto rev : {ReversalConvention::Flip, ReversalConvention::Modular}) {
        const Ensemble e({Spectrum(std::vector<double>(64, 1.5))}, {Normalization::Unitary, rev});
        CHECK(objective(initial_theta({InitKind::Newman}, 64), e) < 1e-13);
    }
}

TEST_CASE("objective is non-negative and invariant under a global phase shift") {
    const Ensemble e = default_ensemble();
    RandomStream rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        auto theta = random_theta(64, rng);
        const double f = objective(theta, e);
        CHECK(f >= 0.0);
        const double c = rng.uniform(-20.0, 20.0);
        for (double& t : theta.theta) t += c;
        CHECK(std::abs(objective(theta, e) - f) <= 1e-10 * f);
    }
}

TEST_CASE("objective is 2 pi periodic per coordinate") {
    const Ensemble e = default_ensemble(32, 3);
    RandomStream rng(2);
    auto theta = random_theta(32, rng);
    const double f = objective(theta, e);
    theta.theta[5] += kTwoPi;
    theta.theta[17] -= 2 * kTwoPi;
    CHECK(objective(theta, e) == doctest::Approx(f).epsilon(1e-12));
}

TEST_CASE("Newman phase beats random phases on the ensemble objective") {
    const Ensemble e = default_ensemble();
    const double newman = objective(initial_theta({InitKind::Newman}, 64), e);
    RandomStream rng(77);
    int wins = 0;
    for (int r = 0; r < 100; ++r) wins += newman < objective(random_theta(64, rng), e);
    CHECK(wins >= 95);
}

TEST_CASE("analytic gradient matches central differences") {
    for (auto norm : {Normalization::Unitary, Normalization::InverseScaled}) {
        for (auto rev : {ReversalConvention::Flip, ReversalConvention::Modular}) {
            EnsembleSpec spec;
            spec.count = 8;
            spec.seed = 11;
            const Ensemble e = make_ensemble(spec, 64, {norm, rev});
            RandomStream rng(3);
            for (int trial = 0; trial < 3; ++trial) {
                const auto theta = trial == 0 ? initial_theta({InitKind::Newman}, 64) : random_theta(64, rng);
                const auto g = objective_gradient(theta, e);
                const auto fd = fd_gradient(theta, e, 1e-6);
                CHECK(relative_norm_error(g, fd) < 1e-6);
            }
        }
    }
}

TEST_CASE("gradient is orthogonal to the all-ones direction") {
    const Ensemble e = default_ensemble();
    RandomStream rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = objective_gradient(random_theta(64, rng), e);
        double s = 0;
        for (double v : g) s += v;
        CHECK(std::abs(s) / std::sqrt(64.0) < 1e-8 * std::max(1.0, norm2(g)));
    }
}

TEST_CASE("delta targets give a flat objective") {
    std::vector<Spectrum> deltas;
    for (std::size_t k0 : {0u, 5u, 20u}) deltas.push_back(delta_spectrum(32, k0, 2.0));
    const Ensemble e(deltas);
    RandomStream rng(6);
    const auto g = objective_gradient(random_theta(32, rng), e);
    CHECK(norm2(g) < 1e-12);
}

TEST_CASE("fd_gradient on a quadratic") {
    // f(x) = sum (i+1) x_i^2 + x_0 x_1: central differences are exact up to rounding.
    auto f = [](std::span<const double> x) {
        double v = x[0] * x[1];
        for (std::size_t i = 0; i < x.size(); ++i) v += double(i + 1) * x[i] * x[i];
        return v;
    };
    const std::vector<double> x{0.3, -1.2, 2.0};
    const auto g = fd_gradient(f, x, 1e-3);
    CHECK(g[0] == doctest::Approx(2 * 0.3 - 1.2).epsilon(1e-9));
    CHECK(g[1] == doctest::Approx(4 * -1.2 + 0.3).epsilon(1e-9));
    CHECK(g[2] == doctest::Approx(6 * 2.0).epsilon(1e-9));
    CHECK_THROWS_AS(fd_gradient(f, x, 0.0), InvalidArgument);
}

TEST_CASE("finite-difference error shrinks with h, then hits the rounding floor") {
    const Ensemble e = default_ensemble(64, 8);
    RandomStream rng(12);
    const auto theta = random_theta(64, rng);
    const auto g = objective_gradient(theta, e);
    const double err_coarse = relative_norm_error(fd_gradient(theta, e, 1e-2), g);
    const double err_mid = relative_norm_error(fd_gradient(theta, e, 1e-4), g);
    const double err_fine = relative_norm_error(fd_gradient(theta, e, 1e-6), g);
    const double err_tiny = relative_norm_error(fd_gradient(theta, e, 1e-10), g);
    CHECK(err_mid < err_coarse);
    CHECK(err_fine < 1e-6);
    CHECK(err_tiny > err_fine);  // cancellation dominates
}

TEST_CASE("dimension mismatches are rejected") {
    const Ensemble e = default_ensemble(16, 2);
    PhaseVector bad;
    bad.theta.assign(15, 0.0);
    CHECK_THROWS_AS(objective(bad, e), InvalidArgument);
    CHECK_THROWS_AS(objective_gradient(bad, e), InvalidArgument);
    CHECK_THROWS_AS(Ensemble({Spectrum({1.0}), Spectrum({1.0, 2.0})}), InvalidArgument);
    CHECK_THROWS_AS(Ensemble(std::vector<Spectrum>{}), InvalidArgument);
}

TEST_CASE("minimize stops immediately at a stationary point") {
    // Delta targets make J independent of theta.
    const Ensemble e({delta_spectrum(64, 7), delta_spectrum(64, 30, 0.5)});
    OptimizerOptions opts;
    opts.gradient_tolerance = 1e-6;
    const auto report = minimize(initial_theta({InitKind::Newman}, 64), e, opts, {InitKind::Newman});
    CHECK(report.converged);
    CHECK(report.steps_taken() == 0);
    CHECK(report.stop_reason == StopReason::GradientTolerance);
}

TEST_CASE("minimize from a random start") {
    const Ensemble e = default_ensemble();
    OptimizerOptions opts;
    opts.max_iters = 200;
    const InitSpec init{InitKind::Random, 0.0, 5};
    const auto report = minimize(initial_theta(init, 64), e, opts, init);

    CHECK(report.final_objective() <= 0.5 * report.initial_objective());
    for (std::size_t i = 1; i < report.iterations.size(); ++i) {
        CHECK(report.iterations[i].objective <= report.iterations[i - 1].objective);
        CHECK(report.iterations[i].step_size > 0.0);
    }
    for (double t : report.final_theta.theta) {
        CHECK(t >= 0.0);
        CHECK(t < kTwoPi);
    }
    // The wrapped result scores the same as the unwrapped iterate.
    CHECK(objective(report.final_theta, e) == doctest::Approx(report.final_objective()).epsilon(1e-9));
}

TEST_CASE("optimizer options and init specs") {
    OptimizerOptions o;
    o.gradient_tolerance = 0;
    CHECK_THROWS_AS(o.validate(), InvalidArgument);
    o = {};
    o.backtrack = 1.0;
    CHECK_THROWS_AS(o.validate(), InvalidArgument);

    const auto a = initial_theta({InitKind::NewmanPerturbed, 0.1, 9}, 32);
    const auto b = initial_theta({InitKind::NewmanPerturbed, 0.1, 9}, 32);
    const auto n = initial_theta({InitKind::Newman}, 32);
    CHECK(a.theta == b.theta);
    for (std::size_t k = 0; k < 32; ++k) CHECK(std::abs(a.theta[k] - n.theta[k]) <= 0.1);

    CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
    CHECK(wrap_angle(kTwoPi) == 0.0);
    CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));
}

TEST_CASE("stationarity report") {
    const Ensemble e = default_ensemble();
    const auto r1 = stationarity_report(e, 30, 99);
    const auto r2 = stationarity_report(e, 30, 99);
    CHECK(r1.grad_norm_at_newman == r2.grad_norm_at_newman);
    CHECK(r1.random_grad_norms == r2.random_grad_norms);
    CHECK(r1.grad_norm_at_newman < r1.random_grad_norms.median);

    const auto one = stationarity_report(e, 1, 5);
    CHECK(one.random_grad_norms.min == one.random_grad_norms.max);
    CHECK_THROWS_AS(stationarity_report(e, 0, 5), InvalidArgument);
}
