#include "newman/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "newman/random.hpp"

namespace newman {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double amplitude_sum(const SumOfSinusoids& s) {
    double total = 0.0;
    for (const auto& t : s.terms) total += std::abs(t.amplitude);
    return total;
}

double eval_sos(const SumOfSinusoids& s, double omega) {
    double v = s.bias;
    for (const auto& t : s.terms)
        v += t.amplitude * std::sin(static_cast<double>(t.frequency) * omega + t.phase);
    // bias >= sum |a| makes the function non-negative; only rounding can push below zero.
    return std::max(v, 0.0);
}

double eval_piecewise(const PiecewiseConstant& p, double omega) {
    const auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), omega);
    return p.levels[static_cast<std::size_t>(it - p.breakpoints.begin())];
}

double eval_polynomial(const Polynomial& p, double omega) {
    double v = 0.0;
    for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) v = v * omega + *it;
    return v;
}

}  // namespace

NegativeSampleError::NegativeSampleError(std::size_t index, double value)
    : InvalidArgument([&] {
          std::ostringstream os;
          os << "descriptor is negative at grid index " << index << " (value " << value << ")";
          return os.str();
      }()),
      index_(index),
      value_(value) {}

void validate(const FunctionDescriptor& d) {
    std::visit(overloaded{
                   [](const SumOfSinusoids& s) {
                       if (!std::isfinite(s.bias))
                           throw InvalidArgument("sum_of_sinusoids: bias must be finite");
                       for (const auto& t : s.terms)
                           if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase))
                               throw InvalidArgument("sum_of_sinusoids: non-finite term");
                       if (s.bias < amplitude_sum(s))
                           throw InvalidArgument(
                               "sum_of_sinusoids: bias must be >= sum of |amplitude|");
                   },
                   [](const PiecewiseConstant& p) {
                       if (p.levels.size() != p.breakpoints.size() + 1)
                           throw InvalidArgument(
                               "piecewise_constant: need exactly one more level than breakpoints");
                       for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
                           const double b = p.breakpoints[i];
                           if (!(b > -kPi && b < kPi))
                               throw InvalidArgument("piecewise_constant: breakpoints must lie in (-pi, pi)");
                           if (i > 0 && !(b > p.breakpoints[i - 1]))
                               throw InvalidArgument(
                                   "piecewise_constant: breakpoints must be strictly increasing");
                       }
                       for (double l : p.levels)
                           if (!(l >= 0.0) || !std::isfinite(l))
                               throw InvalidArgument("piecewise_constant: levels must be >= 0");
                   },
                   [](const Polynomial& p) {
                       if (p.coefficients.empty())
                           throw InvalidArgument("polynomial: no coefficients");
                       for (double c : p.coefficients)
                           if (!std::isfinite(c))
                               throw InvalidArgument("polynomial: non-finite coefficient");
                   },
                   [](const NamedPreset& p) { (void)resolve(p); },
                   [](const DiscreteDelta& d) {
                       if (!(d.height > 0.0) || !std::isfinite(d.height))
                           throw InvalidArgument("delta: height must be positive");
                   },
               },
               d);
}

void validate(const EnsembleSpec& spec) {
    if (spec.count == 0) throw InvalidArgument("ensemble: count must be >= 1");
    if (spec.term_count == 0) throw InvalidArgument("ensemble: term_count must be >= 1");
    if (!(spec.amplitude_low <= spec.amplitude_high) || !std::isfinite(spec.amplitude_low) ||
        !std::isfinite(spec.amplitude_high))
        throw InvalidArgument("ensemble: amplitude_range must satisfy low <= high");
    if (spec.frequency_low > spec.frequency_high)
        throw InvalidArgument("ensemble: frequency_range must satisfy low <= high");
    if (!(spec.bias_margin > 0.0) || !std::isfinite(spec.bias_margin))
        throw InvalidArgument("ensemble: bias_margin must be positive");
}

FunctionDescriptor resolve(const FunctionDescriptor& d) {
    const auto* preset = std::get_if<NamedPreset>(&d);
    if (!preset) return d;
    if (preset->name == "smooth")
        return SumOfSinusoids{{{1.0, 1, 0.0}, {0.5, 3, kPi / 2}}, 2.0};
    if (preset->name == "constant") return SumOfSinusoids{{}, 1.0};
    if (preset->name == "step") return PiecewiseConstant{{0.0}, {1.0, 2.0}};
    throw InvalidArgument("unknown preset '" + preset->name + "'");
}

std::string descriptor_id(const FunctionDescriptor& d) {
    return std::visit(overloaded{
                          [](const SumOfSinusoids&) -> std::string { return "sum_of_sinusoids"; },
                          [](const PiecewiseConstant&) -> std::string { return "piecewise_constant"; },
                          [](const Polynomial&) -> std::string { return "polynomial"; },
                          [](const NamedPreset& p) { return "preset:" + p.name; },
                          [](const DiscreteDelta& p) { return "delta:" + std::to_string(p.index); },
                      },
                      d);
}

double grid_point(std::size_t k, std::size_t n_samples) {
    // pi * (2k - N) / N equals -pi + 2 pi k / N and is exact at k = N/2.
    const double num = 2.0 * static_cast<double>(k) - static_cast<double>(n_samples);
    return kPi * num / static_cast<double>(n_samples);
}

double evaluate(const FunctionDescriptor& d, double omega) {
    const FunctionDescriptor r = resolve(d);
    return std::visit(overloaded{
                          [&](const SumOfSinusoids& s) { return eval_sos(s, omega); },
                          [&](const PiecewiseConstant& p) { return eval_piecewise(p, omega); },
                          [&](const Polynomial& p) { return eval_polynomial(p, omega); },
                          [](const NamedPreset&) -> double { return 0.0; },  // resolved above
                          [](const DiscreteDelta&) -> double {
                              throw InvalidArgument("delta has no continuous evaluation");
                          },
                      },
                      r);
}

Spectrum sample_function(const FunctionDescriptor& d, std::size_t n_samples) {
    if (n_samples == 0) throw InvalidArgument("sample_function: size must be >= 1");
    validate(d);
    const FunctionDescriptor r = resolve(d);
    if (const auto* delta = std::get_if<DiscreteDelta>(&r))
        return delta_spectrum(n_samples, delta->index, delta->height);

    std::vector<double> out(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double v = evaluate(r, grid_point(k, n_samples));
        if (!(v >= 0.0)) throw NegativeSampleError(k, v);
        out[k] = v;
    }
    return Spectrum(std::move(out));
}

SumOfSinusoids combine(const SumOfSinusoids& a, const SumOfSinusoids& b) {
    SumOfSinusoids out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    out.bias += b.bias;
    return out;
}

SumOfSinusoids random_sos(const EnsembleSpec& spec, std::size_t index) {
    validate(spec);
    if (index >= spec.count)
        throw InvalidArgument("random_sos: index " + std::to_string(index) +
                              " out of range for count " + std::to_string(spec.count));
    RandomStream rng(spec.seed, index);
    SumOfSinusoids s;
    s.terms.reserve(spec.term_count);
    for (std::size_t i = 0; i < spec.term_count; ++i) {
        SinusoidTerm t;
        t.amplitude = rng.uniform(spec.amplitude_low, spec.amplitude_high);
        t.frequency = rng.uniform_int(spec.frequency_low, spec.frequency_high);
        t.phase = rng.uniform(0.0, kTwoPi);
        s.terms.push_back(t);
    }
    s.bias = amplitude_sum(s) + spec.bias_margin;
    return s;
}

Spectrum delta_spectrum(std::size_t n_samples, std::size_t k0, double height) {
    if (n_samples == 0) throw InvalidArgument("delta_spectrum: size must be >= 1");
    if (k0 >= n_samples)
        throw InvalidArgument("delta_spectrum: index " + std::to_string(k0) +
                              " out of range for N=" + std::to_string(n_samples));
    if (!(height > 0.0)) throw InvalidArgument("delta_spectrum: height must be positive");
    std::vector<double> out(n_samples, 0.0);
    out[k0] = height;
    return Spectrum(std::move(out));
}

}  // namespace newman
