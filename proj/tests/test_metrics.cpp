#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "newman/metrics.hpp"
#include "test_support.hpp"

using namespace newman;

namespace {

// Independent quantile oracle: nth_element on copies, interpolated between
// ranks floor(h) and ceil(h), h = p (n - 1).
double quantile_oracle(std::vector<double> v, double p) {
    const double h = p * double(v.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
    std::nth_element(v.begin(), v.begin() + lo, v.end());
    const double a = v[lo];
    std::nth_element(v.begin(), v.begin() + hi, v.end());
    const double b = v[hi];
    return a + (h - double(lo)) * (b - a);
}

}  // namespace

TEST_CASE("sup_error and rms_error examples") {
    const std::vector<double> a{1, 2}, b{1, 5}, z{0, 0}, c{3, 4};
    CHECK(sup_error(a, a) == 0.0);
    CHECK(rms_error(a, a) == 0.0);
    CHECK(sup_error(a, b) == 3.0);
    CHECK(rms_error(z, c) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
    CHECK_THROWS_AS(sup_error(std::vector<double>{1}, b), InvalidArgument);
    CHECK_THROWS_AS(rms_error(std::vector<double>{1}, b), InvalidArgument);
}

TEST_CASE("delta reconstruction vs delta target") {
    const auto target = delta_spectrum(8, 3);
    const auto recon = reconstruct(target, newman_phase(8));
    CHECK(sup_error(recon, target) == doctest::Approx(1.0 - 1.0 / std::sqrt(8.0)).epsilon(1e-14));
}

TEST_CASE("rms_error never exceeds sup_error") {
    RandomStream rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng.uniform_int(0, 200);
        std::vector<double> a(n), b(n);
        const double scale = std::pow(10.0, rng.uniform(-200, 200));
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = scale * rng.uniform01();
            b[k] = trial % 5 == 0 ? a[k] + scale * 0.25 : scale * rng.uniform01();
        }
        CHECK(rms_error(a, b) <= sup_error(a, b));
        CHECK(std::isfinite(rms_error(a, b)));
    }
}

TEST_CASE("quantiles") {
    const auto one = quantiles(std::vector<double>{5});
    CHECK(one == BoxStats{5, 5, 5, 5, 5, 1});
    const auto four = quantiles(std::vector<double>{4, 1, 3, 2});
    CHECK(four.median == 2.5);
    CHECK(four.q1 == 1.75);
    CHECK(four.q3 == 3.25);
    CHECK_THROWS_AS(quantiles(std::vector<double>{}), InvalidArgument);

    RandomStream rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.uniform_int(0, 60);
        std::vector<double> v(n);
        for (auto& x : v) x = rng.uniform(-5, 5);
        if (trial % 3 == 0) v[n / 2] = v[0];  // ties
        const auto b = quantiles(v);
        CHECK(b.count == n);
        CHECK(b.min == *std::min_element(v.begin(), v.end()));
        CHECK(b.max == *std::max_element(v.begin(), v.end()));
        CHECK(b.q1 == doctest::Approx(quantile_oracle(v, 0.25)).epsilon(1e-14));
        CHECK(b.median == doctest::Approx(quantile_oracle(v, 0.5)).epsilon(1e-14));
        CHECK(b.q3 == doctest::Approx(quantile_oracle(v, 0.75)).epsilon(1e-14));
        CHECK(b.min <= b.q1);
        CHECK(b.q1 <= b.median);
        CHECK(b.median <= b.q3);
        CHECK(b.q3 <= b.max);
    }
}

TEST_CASE("gibbs_profile on constructed inputs") {
    std::vector<double> t(16, 1.0);
    std::fill(t.begin() + 8, t.end(), 2.0);
    const Spectrum target(t);
    const std::vector<std::size_t> jumps{8};

    auto reports = gibbs_profile(target, target, jumps, 2);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].max_overshoot == 0.0);
    CHECK(reports[0].jump_size == 1.0);
    CHECK(reports[0].far_field_sup_error == 0.0);

    auto r = t;
    r[8] = 2.2;
    reports = gibbs_profile(Spectrum(r), target, jumps, 2);
    CHECK(reports[0].max_overshoot == doctest::Approx(0.2));
    CHECK(reports[0].far_field_sup_error == 0.0);

    // Error outside the window lands in the far field.
    r[2] = 1.5;
    reports = gibbs_profile(Spectrum(r), target, jumps, 2);
    CHECK(reports[0].far_field_sup_error == doctest::Approx(0.5));

    // Windows wrap around the ends; overlapping windows are flagged.
    const std::vector<std::size_t> two{0, 8};
    reports = gibbs_profile(target, target, two, 3);
    CHECK_FALSE(reports[0].overlaps_other_window);
    reports = gibbs_profile(target, target, two, 5);
    CHECK(reports[0].overlaps_other_window);
    CHECK(reports[1].overlaps_other_window);

    CHECK_THROWS_AS(gibbs_profile(target, target, std::vector<std::size_t>{16}, 2), InvalidArgument);
    CHECK_THROWS_AS(gibbs_profile(target, target, jumps, 0), InvalidArgument);
    CHECK(find_jumps(target) == std::vector<std::size_t>{0, 8});
}

TEST_CASE("gibbs ripple persists while the far field converges") {
    const NamedPreset step{"step"};
    std::vector<GibbsReport> small, large;
    for (std::size_t n : {std::size_t{1} << 10, std::size_t{1} << 14}) {
        const auto target = sample_function(step, n);
        const auto recon = reconstruct(target, newman_phase(n));
        const auto jumps = find_jumps(target);
        REQUIRE(jumps.size() == 2);
        (n == 1024 ? small : large) = gibbs_profile(recon, target, jumps, default_gibbs_halfwidth(n));
    }
    CHECK(large[0].far_field_sup_error < small[0].far_field_sup_error);
    CHECK(large[1].max_overshoot > 0.5 * small[1].max_overshoot);
    CHECK(small[1].max_overshoot > 0.1);
}

TEST_CASE("convergence_sweep") {
    PipelineSettings settings;
    const std::vector<std::size_t> sizes{512, 1024, 2048, 4096, 8192, 16384};
    const auto smooth = convergence_sweep(NamedPreset{"smooth"}, sizes, settings, 4);
    REQUIRE(smooth.size() == sizes.size());
    int decreases = 0;
    for (std::size_t i = 1; i < smooth.size(); ++i) decreases += smooth[i].sup_error < smooth[i - 1].sup_error;
    CHECK(decreases >= 4);
    for (const auto& r : smooth) {
        CHECK(r.rms_error <= r.sup_error);
        CHECK(r.descriptor_id == "preset:smooth");
        CHECK(r.normalization == Normalization::Unitary);
        CHECK(r.reversal == ReversalConvention::Modular);
    }

    const std::vector<std::size_t> small_sizes{4, 16, 64, 256, 1024};
    for (const auto& r : convergence_sweep(DiscreteDelta{1, 1.0}, small_sizes, settings))
        CHECK(r.sup_error >= 1.0 - 1.0 / std::sqrt(double(r.n)) - 1e-12);

    const std::vector<std::size_t> const_sizes{256, 4096};
    // Both sizes reconstruct a constant exactly; only rounding remains.
    const auto flat = convergence_sweep(NamedPreset{"constant"}, const_sizes, settings);
    CHECK(flat[0].sup_error < 1e-12);
    CHECK(flat[1].sup_error < 1e-11);

    // Threads do not change results.
    CHECK(convergence_sweep(NamedPreset{"smooth"}, sizes, settings, 1)[3].sup_error == smooth[3].sup_error);

    CHECK_THROWS_AS(convergence_sweep(NamedPreset{"smooth"}, std::vector<std::size_t>{}, settings), InvalidArgument);
    CHECK_THROWS_AS(convergence_sweep(NamedPreset{"smooth"}, std::vector<std::size_t>{1}, settings), InvalidArgument);
}

TEST_CASE("ensemble_study") {
    PipelineSettings settings;
    EnsembleSpec spec;
    spec.count = 1;
    spec.seed = 3;
    const std::vector<std::size_t> sizes{32, 256};
    const auto single = ensemble_study(spec, sizes, settings);
    CHECK(single.at(32).rms.min == single.at(32).rms.median);
    CHECK(single.at(32).rms.max == single.at(32).rms.median);

    spec.count = 40;
    const auto serial = ensemble_study(spec, sizes, settings, 1);
    const auto parallel = ensemble_study(spec, sizes, settings, 8);
    for (std::size_t n : sizes) {
        CHECK(serial.at(n).rms == parallel.at(n).rms);
        for (std::size_t j = 0; j < spec.count; ++j) {
            CHECK(serial.at(n).records[j].rms_error == parallel.at(n).records[j].rms_error);
            CHECK(*serial.at(n).records[j].seed_index == j);
        }
    }

    // Aggregation does not depend on evaluation order.
    std::vector<double> rms;
    for (const auto& r : serial.at(256).records) rms.push_back(r.rms_error);
    std::reverse(rms.begin(), rms.end());
    CHECK(quantiles(rms) == serial.at(256).rms);

    CHECK(serial.at(256).rms.median < serial.at(32).rms.median);
}
