#include "newman/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "newman/detail/fft.hpp"

namespace newman {

std::string_view to_string(CoefficientPhase p) {
    return p == CoefficientPhase::Newman ? "newman" : "chirp";
}

CoefficientPhase parse_coefficient_phase(std::string_view s) {
    if (s == "newman") return CoefficientPhase::Newman;
    if (s == "chirp") return CoefficientPhase::Chirp;
    throw InvalidArgument("unknown coefficient phase '" + std::string(s) + "'");
}

double polynomial_l1(std::span<const cplx> coeffs, std::size_t oversample) {
    if (coeffs.empty()) throw InvalidArgument("polynomial_l1: no coefficients");
    if (oversample < 4) throw InvalidArgument("polynomial_l1: oversample must be >= 4");
    const std::size_t m = oversample * coeffs.size();
    std::vector<cplx> values(m, cplx{0.0, 0.0});
    std::copy(coeffs.begin(), coeffs.end(), values.begin());
    detail::dft_inplace(values, detail::Direction::Inverse);
    double acc = 0.0;
    for (const cplx& v : values) acc += std::abs(v);
    return acc / static_cast<double>(m);
}

L1Report newman_polynomial_l1(std::size_t degree_n, std::size_t oversample,
                              CoefficientPhase coefficients) {
    const std::size_t len = degree_n + 1;
    const std::uint64_t period = (coefficients == CoefficientPhase::Newman ? 1 : 2) * len;
    std::vector<cplx> a(len);
    for (std::size_t k = 0; k < len; ++k) {
        // 2 pi k^2 / (n+1) = 2 pi (k^2 mod (n+1)) / (n+1); the chirp uses period 2(n+1).
        const std::uint64_t r = (static_cast<std::uint64_t>(k) * k) % period;
        const double angle = kTwoPi * static_cast<double>(r) / static_cast<double>(period);
        a[k] = {std::cos(angle), std::sin(angle)};
    }

    L1Report rep;
    rep.degree_n = degree_n;
    rep.oversample = oversample;
    rep.coefficients = coefficients;
    rep.l1_estimate = polynomial_l1(a, oversample);
    const double root_n = std::sqrt(static_cast<double>(degree_n));
    rep.ratio_to_sqrt_n = rep.l1_estimate / std::max(root_n, 1.0);
    rep.upper_bound = std::sqrt(static_cast<double>(len));
    rep.sqrt_n_minus_l1 = root_n - rep.l1_estimate;
    return rep;
}

namespace {

constexpr std::size_t kPeakCandidates = 16;

// |s(t)| for s(t) = sum_k m[k] cos(2 pi (k+1) t + phi[k]), summed directly.
double multitone_abs(const Spectrum& m, const PhaseSequence& phi, double t) {
    double v = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k)
        v += m[k] * std::cos(kTwoPi * static_cast<double>(k + 1) * t + phi[k]);
    return std::abs(v);
}

// Golden-section search for the maximum of |s| on [a, b].
double refine_peak(const Spectrum& m, const PhaseSequence& phi, double a, double b) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = multitone_abs(m, phi, c), fd = multitone_abs(m, phi, d);
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = multitone_abs(m, phi, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = multitone_abs(m, phi, d);
        }
    }
    return std::max(fc, fd);
}

}  // namespace

CrestReport crest_factor(const Spectrum& m, const PhaseSequence& phi, std::size_t oversample) {
    if (m.size() != phi.size()) throw InvalidArgument("crest_factor: length mismatch");
    if (oversample < 8) throw InvalidArgument("crest_factor: oversample must be >= 8");
    if (std::all_of(m.begin(), m.end(), [](double v) { return v == 0.0; }))
        throw InvalidArgument("crest_factor: all-zero spectrum has no defined RMS");

    const std::size_t n = m.size();
    const std::size_t len = oversample * n;
    std::vector<cplx> s(len, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) s[k] = m[k] * cplx(std::cos(phi[k]), std::sin(phi[k]));
    detail::dft_inplace(s, detail::Direction::Inverse);

    // Shift every bin up one harmonic: multiply sample j by exp(2 pi i j / len).
    std::vector<double> a(len);
    double energy = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
        const double angle = kTwoPi * static_cast<double>(j) / static_cast<double>(len);
        const double v = std::real(s[j] * cplx(std::cos(angle), std::sin(angle)));
        a[j] = std::abs(v);
        energy += v * v;
    }

    // The grid maximum can sit up to half a sample off the true peak, which at
    // oversample 16 costs ~0.1 dB. Refine the largest grid local maxima on the
    // continuous signal; the grid is exact for the RMS.
    std::vector<std::size_t> maxima;
    for (std::size_t j = 0; j < len; ++j) {
        const double left = a[(j + len - 1) % len], right = a[(j + 1) % len];
        if (a[j] >= left && a[j] >= right) maxima.push_back(j);
    }
    const std::size_t keep = std::min(kPeakCandidates, maxima.size());
    std::partial_sort(maxima.begin(), maxima.begin() + static_cast<std::ptrdiff_t>(keep), maxima.end(),
                      [&](std::size_t x, std::size_t y) { return a[x] > a[y] || (a[x] == a[y] && x < y); });
    double peak = *std::max_element(a.begin(), a.end());
    const double dt = 1.0 / static_cast<double>(len);
    for (std::size_t i = 0; i < keep; ++i) {
        const double t = static_cast<double>(maxima[i]) * dt;
        peak = std::max(peak, refine_peak(m, phi, t - dt, t + dt));
    }

    CrestReport rep;
    rep.n_tones = n;
    rep.oversample = oversample;
    rep.peak = peak;
    rep.rms = std::sqrt(energy / static_cast<double>(len));
    rep.crest_factor_db = 20.0 * std::log10(rep.peak / rep.rms);
    return rep;
}

}  // namespace newman
