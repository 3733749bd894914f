// Spectral core: quadratic phase construction, phase attachment, inverse DFT,
// magnitude and time reversal, composed into the reconstruction operator
//
//   recon = reverse( | c_N * IDFT( m * exp(i*phi) ) | )
//
// All functions are pure; scratch buffers are allocated per call.

#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace newman {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Invalid sizes, mismatched lengths, out-of-range indices, bad configs.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite values or other failures of a numerical procedure.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-negative magnitude spectrum of length N >= 1.
class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    Spectrum scaled(double c) const;

    friend bool operator==(const Spectrum&, const Spectrum&) = default;

private:
    std::vector<double> values_;
};

/// Phase angles in radians, stored unreduced.
class PhaseSequence {
public:
    PhaseSequence() = default;
    explicit PhaseSequence(std::vector<double> angles);

    std::size_t size() const noexcept { return angles_.size(); }
    std::span<const double> angles() const noexcept { return angles_; }
    double operator[](std::size_t i) const noexcept { return angles_[i]; }

    friend bool operator==(const PhaseSequence&, const PhaseSequence&) = default;

private:
    std::vector<double> angles_;
};

struct ComplexSpectrum {
    std::vector<cplx> values;
};

struct TimeSignal {
    std::vector<cplx> values;
};

enum class Normalization {
    Unitary,        // 1/sqrt(N)
    InverseScaled,  // 1/N
    Unscaled,       // 1
};

enum class ReversalConvention {
    Modular,  // out[k] = in[(N-k) mod N]
    Flip,     // out[k] = in[N-1-k]
};

enum class PhaseKind {
    Newman,
    NewmanPlusLinear,
    NewmanOriginal,
    Custom,
};

double normalization_factor(Normalization norm, std::size_t n);

std::string_view to_string(Normalization norm);
std::string_view to_string(ReversalConvention conv);
std::string_view to_string(PhaseKind kind);
Normalization parse_normalization(std::string_view s);
ReversalConvention parse_reversal(std::string_view s);
PhaseKind parse_phase_kind(std::string_view s);

// angles[k] = pi k^2 / N
PhaseSequence newman_phase(std::size_t n_samples);
// angles[k] = 2 pi k^2 / N, the coefficient phases of Newman's extremal polynomial
// with N = degree + 1.
PhaseSequence newman_original_phase(std::size_t n_samples);
PhaseSequence linear_phase(std::size_t n_samples, double slope);
PhaseSequence add_phases(const PhaseSequence& a, const PhaseSequence& b);

ComplexSpectrum attach_phase(const Spectrum& m, const PhaseSequence& phi);

/// x[n] = c_N sum_k X[k] exp(2 pi i k n / N). O(N log N) for every N.
TimeSignal inverse_dft(const ComplexSpectrum& x, Normalization norm);

inline constexpr std::size_t kDefaultOracleCap = 4096;

/// Direct O(N^2) evaluation of the same sum; refuses N above `cap`.
TimeSignal naive_inverse_dft(const ComplexSpectrum& x, Normalization norm,
                             std::size_t cap = kDefaultOracleCap);

Spectrum magnitude(const TimeSignal& x);

Spectrum reverse(const Spectrum& m, ReversalConvention conv);
std::size_t reversed_index(std::size_t k, std::size_t n, ReversalConvention conv);

Spectrum reconstruct(const Spectrum& m, const PhaseSequence& phi,
                     Normalization norm = Normalization::Unitary,
                     ReversalConvention conv = ReversalConvention::Modular);

/// Everything needed to run the pipeline at an arbitrary size.
struct PipelineSettings {
    Normalization normalization = Normalization::Unitary;
    ReversalConvention reversal = ReversalConvention::Modular;
    PhaseKind phase = PhaseKind::Newman;
    double linear_slope = kPi;  // used by NewmanPlusLinear

    friend bool operator==(const PipelineSettings&, const PipelineSettings&) = default;
};

/// Phase sequence of length n for the settings' phase kind. Custom is rejected.
PhaseSequence phase_for(const PipelineSettings& settings, std::size_t n);

Spectrum reconstruct(const Spectrum& m, const PipelineSettings& settings);

}  // namespace newman
