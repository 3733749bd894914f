#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "newman/random.hpp"
#include "newman/spectral.hpp"

namespace newman::testing {

inline ComplexSpectrum random_complex(std::size_t n, RandomStream& rng) {
    ComplexSpectrum x;
    x.values.resize(n);
    for (auto& v : x.values) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return x;
}

inline Spectrum random_spectrum(std::size_t n, RandomStream& rng, double high = 1.0) {
    std::vector<double> v(n);
    for (auto& e : v) e = rng.uniform(0.0, high);
    return Spectrum(std::move(v));
}

inline PhaseSequence random_phase(std::size_t n, RandomStream& rng) {
    std::vector<double> v(n);
    for (auto& e : v) e = rng.uniform(0.0, kTwoPi);
    return PhaseSequence(std::move(v));
}

/// max |a - b| / max |b|
inline double relative_error(std::span<const cplx> a, std::span<const cplx> b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace newman::testing
