// Classical extremal properties of quadratic-phase sequences: the L1 norm of
// Newman's unimodular polynomial on the unit circle, and the crest factor of
// quadratic-phase multitones.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "newman/spectral.hpp"

namespace newman {

/// Coefficient phase of the unimodular polynomial sum_{k=0..n} a_k z^k.
enum class CoefficientPhase {
    Newman,  // a_k = exp(2 pi i k^2 / (n+1))
    Chirp,   // a_k = exp(pi i k^2 / (n+1)), single-sweep chirp
};

std::string_view to_string(CoefficientPhase p);
CoefficientPhase parse_coefficient_phase(std::string_view s);

struct L1Report {
    std::size_t degree_n = 0;
    std::size_t oversample = 0;
    double l1_estimate = 0.0;
    double ratio_to_sqrt_n = 0.0;  // l1 / sqrt(max(n, 1))
    double upper_bound = 0.0;      // sqrt(n + 1)
    double sqrt_n_minus_l1 = 0.0;  // measured c in l1 >= sqrt(n) - c
    CoefficientPhase coefficients = CoefficientPhase::Newman;
};

struct CrestReport {
    std::size_t n_tones = 0;
    std::size_t oversample = 0;
    double crest_factor_db = 0.0;
    double peak = 0.0;
    double rms = 0.0;
};

inline constexpr std::size_t kDefaultL1Oversample = 32;
inline constexpr std::size_t kDefaultCrestOversample = 16;

/// Mean of |P(e^{i theta_j})| over M = oversample * len(coeffs) equispaced points
/// (the trapezoid rule on the circle), evaluated with one length-M transform.
double polynomial_l1(std::span<const cplx> coeffs, std::size_t oversample);

L1Report newman_polynomial_l1(std::size_t degree_n, std::size_t oversample = kDefaultL1Oversample,
                              CoefficientPhase coefficients = CoefficientPhase::Newman);

/// s(t) = Re sum_k m[k] exp(i (2 pi (k+1) t + phi[k])): bin k drives harmonic k+1,
/// so a single bin is a pure cosine. Sampled on oversample * N points of one period
/// (exact RMS); the peak is then refined around the largest grid maxima.
CrestReport crest_factor(const Spectrum& m, const PhaseSequence& phi,
                         std::size_t oversample = kDefaultCrestOversample);

}  // namespace newman
