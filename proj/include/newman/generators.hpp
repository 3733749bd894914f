// Discrete magnitude spectra from continuous descriptions on [-pi, pi):
// uniform sampling at omega_k = -pi + 2 pi k / N, the randomized
// sum-of-sinusoids family, and the Kronecker delta.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "newman/spectral.hpp"

namespace newman {

struct SinusoidTerm {
    double amplitude = 0.0;
    std::int64_t frequency = 0;  // whole cycles over [-pi, pi]
    double phase = 0.0;

    friend bool operator==(const SinusoidTerm&, const SinusoidTerm&) = default;
};

/// m(w) = bias + sum amplitude * sin(frequency * w + phase); bias >= sum |amplitude|.
struct SumOfSinusoids {
    std::vector<SinusoidTerm> terms;
    double bias = 0.0;

    friend bool operator==(const SumOfSinusoids&, const SumOfSinusoids&) = default;
};

/// levels[i] on [breakpoints[i-1], breakpoints[i]); levels.size() == breakpoints.size() + 1.
struct PiecewiseConstant {
    std::vector<double> breakpoints;
    std::vector<double> levels;

    friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;
};

/// m(w) = sum coefficients[i] * w^i. Non-negativity is checked per sample.
struct Polynomial {
    std::vector<double> coefficients;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

/// "smooth": 2 + sin w + 0.5 cos 3w;  "constant": 1;  "step": 1 on [-pi, 0), 2 on [0, pi).
struct NamedPreset {
    std::string name;

    friend bool operator==(const NamedPreset&, const NamedPreset&) = default;
};

/// Kronecker delta at a fixed grid index; not a sampled function.
struct DiscreteDelta {
    std::size_t index = 0;
    double height = 1.0;

    friend bool operator==(const DiscreteDelta&, const DiscreteDelta&) = default;
};

using FunctionDescriptor =
    std::variant<SumOfSinusoids, PiecewiseConstant, Polynomial, NamedPreset, DiscreteDelta>;

/// Thrown when a sampled value is negative; carries the offending grid index.
class NegativeSampleError : public InvalidArgument {
public:
    NegativeSampleError(std::size_t index, double value);
    std::size_t index() const noexcept { return index_; }
    double value() const noexcept { return value_; }

private:
    std::size_t index_;
    double value_;
};

struct EnsembleSpec {
    std::size_t count = 1;
    std::uint64_t seed = 0;
    std::size_t term_count = 3;
    double amplitude_low = 0.5;
    double amplitude_high = 1.5;
    std::int64_t frequency_low = 1;
    std::int64_t frequency_high = 10;
    double bias_margin = 1.0;

    friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

void validate(const FunctionDescriptor& d);
void validate(const EnsembleSpec& spec);

/// Expands a NamedPreset into its concrete descriptor; other variants pass through.
FunctionDescriptor resolve(const FunctionDescriptor& d);

std::string descriptor_id(const FunctionDescriptor& d);

/// Grid point omega_k = -pi + 2 pi k / N.
double grid_point(std::size_t k, std::size_t n_samples);

double evaluate(const FunctionDescriptor& d, double omega);

Spectrum sample_function(const FunctionDescriptor& d, std::size_t n_samples);

/// Terms concatenated, biases added.
SumOfSinusoids combine(const SumOfSinusoids& a, const SumOfSinusoids& b);

SumOfSinusoids random_sos(const EnsembleSpec& spec, std::size_t index);

Spectrum delta_spectrum(std::size_t n_samples, std::size_t k0, double height = 1.0);

}  // namespace newman
