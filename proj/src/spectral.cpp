#include "newman/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "newman/detail/fft.hpp"

namespace newman {
namespace {

void require_size(std::size_t n, const char* what) {
    if (n == 0) throw InvalidArgument(std::string(what) + ": size must be >= 1");
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw InvalidArgument(std::string(what) + ": length mismatch (" + std::to_string(a) +
                              " vs " + std::to_string(b) + ")");
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    require_size(values_.size(), "Spectrum");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
            throw InvalidArgument("Spectrum: entry " + std::to_string(i) +
                                  " is negative or not finite");
    }
}

Spectrum Spectrum::scaled(double c) const {
    if (!(c >= 0.0)) throw InvalidArgument("Spectrum::scaled: factor must be >= 0");
    std::vector<double> out(values_);
    for (double& v : out) v *= c;
    return Spectrum(std::move(out));
}

PhaseSequence::PhaseSequence(std::vector<double> angles) : angles_(std::move(angles)) {
    for (std::size_t i = 0; i < angles_.size(); ++i) {
        if (!std::isfinite(angles_[i]))
            throw InvalidArgument("PhaseSequence: angle " + std::to_string(i) + " is not finite");
    }
}

double normalization_factor(Normalization norm, std::size_t n) {
    switch (norm) {
        case Normalization::Unitary: return 1.0 / std::sqrt(static_cast<double>(n));
        case Normalization::InverseScaled: return 1.0 / static_cast<double>(n);
        case Normalization::Unscaled: return 1.0;
    }
    return 1.0;
}

std::string_view to_string(Normalization norm) {
    switch (norm) {
        case Normalization::Unitary: return "unitary";
        case Normalization::InverseScaled: return "inverse_n";
        case Normalization::Unscaled: return "unscaled";
    }
    return "?";
}

std::string_view to_string(ReversalConvention conv) {
    return conv == ReversalConvention::Modular ? "modular" : "flip";
}

std::string_view to_string(PhaseKind kind) {
    switch (kind) {
        case PhaseKind::Newman: return "newman";
        case PhaseKind::NewmanPlusLinear: return "newman_plus_linear";
        case PhaseKind::NewmanOriginal: return "newman_original";
        case PhaseKind::Custom: return "custom";
    }
    return "?";
}

Normalization parse_normalization(std::string_view s) {
    if (s == "unitary") return Normalization::Unitary;
    if (s == "inverse_n") return Normalization::InverseScaled;
    if (s == "unscaled") return Normalization::Unscaled;
    throw InvalidArgument("unknown normalization '" + std::string(s) + "'");
}

ReversalConvention parse_reversal(std::string_view s) {
    if (s == "modular") return ReversalConvention::Modular;
    if (s == "flip") return ReversalConvention::Flip;
    throw InvalidArgument("unknown reversal '" + std::string(s) + "'");
}

PhaseKind parse_phase_kind(std::string_view s) {
    if (s == "newman") return PhaseKind::Newman;
    if (s == "newman_plus_linear") return PhaseKind::NewmanPlusLinear;
    if (s == "newman_original") return PhaseKind::NewmanOriginal;
    if (s == "custom") return PhaseKind::Custom;
    throw InvalidArgument("unknown phase kind '" + std::string(s) + "'");
}

PhaseSequence newman_phase(std::size_t n_samples) {
    require_size(n_samples, "newman_phase");
    std::vector<double> angles(n_samples);
    const double n = static_cast<double>(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double kk = static_cast<double>(k);
        angles[k] = kPi * kk * kk / n;
    }
    return PhaseSequence(std::move(angles));
}

PhaseSequence newman_original_phase(std::size_t n_samples) {
    require_size(n_samples, "newman_original_phase");
    std::vector<double> angles(n_samples);
    const double n = static_cast<double>(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double kk = static_cast<double>(k);
        angles[k] = kTwoPi * kk * kk / n;
    }
    return PhaseSequence(std::move(angles));
}

PhaseSequence linear_phase(std::size_t n_samples, double slope) {
    require_size(n_samples, "linear_phase");
    std::vector<double> angles(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) angles[k] = slope * static_cast<double>(k);
    return PhaseSequence(std::move(angles));
}

PhaseSequence add_phases(const PhaseSequence& a, const PhaseSequence& b) {
    require_same_length(a.size(), b.size(), "add_phases");
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
    return PhaseSequence(std::move(out));
}

ComplexSpectrum attach_phase(const Spectrum& m, const PhaseSequence& phi) {
    require_same_length(m.size(), phi.size(), "attach_phase");
    ComplexSpectrum out;
    out.values.resize(m.size());
    for (std::size_t k = 0; k < m.size(); ++k)
        out.values[k] = m[k] * cplx(std::cos(phi[k]), std::sin(phi[k]));
    return out;
}

TimeSignal inverse_dft(const ComplexSpectrum& x, Normalization norm) {
    require_size(x.values.size(), "inverse_dft");
    TimeSignal out{x.values};
    detail::dft_inplace(out.values, detail::Direction::Inverse);
    const double c = normalization_factor(norm, out.values.size());
    if (c != 1.0)
        for (cplx& v : out.values) v *= c;
    return out;
}

TimeSignal naive_inverse_dft(const ComplexSpectrum& x, Normalization norm, std::size_t cap) {
    const std::size_t n = x.values.size();
    require_size(n, "naive_inverse_dft");
    if (n > cap)
        throw InvalidArgument("naive_inverse_dft: N=" + std::to_string(n) +
                              " exceeds oracle cap " + std::to_string(cap));

    // Table of exp(2 pi i r / N); the exponent index k*n is reduced mod N exactly.
    std::vector<cplx> roots(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double angle = kTwoPi * static_cast<double>(r) / static_cast<double>(n);
        roots[r] = {std::cos(angle), std::sin(angle)};
    }

    const double c = normalization_factor(norm, n);
    TimeSignal out;
    out.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) acc += x.values[k] * roots[(k * t) % n];
        out.values[t] = c * acc;
    }
    return out;
}

Spectrum magnitude(const TimeSignal& x) {
    std::vector<double> out(x.values.size());
    std::transform(x.values.begin(), x.values.end(), out.begin(),
                   [](const cplx& v) { return std::abs(v); });
    return Spectrum(std::move(out));
}

std::size_t reversed_index(std::size_t k, std::size_t n, ReversalConvention conv) {
    if (conv == ReversalConvention::Modular) return (n - k) % n;
    return n - 1 - k;
}

Spectrum reverse(const Spectrum& m, ReversalConvention conv) {
    const std::size_t n = m.size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = m[reversed_index(k, n, conv)];
    return Spectrum(std::move(out));
}

Spectrum reconstruct(const Spectrum& m, const PhaseSequence& phi, Normalization norm,
                     ReversalConvention conv) {
    return reverse(magnitude(inverse_dft(attach_phase(m, phi), norm)), conv);
}

PhaseSequence phase_for(const PipelineSettings& settings, std::size_t n) {
    switch (settings.phase) {
        case PhaseKind::Newman: return newman_phase(n);
        case PhaseKind::NewmanPlusLinear:
            return add_phases(newman_phase(n), linear_phase(n, settings.linear_slope));
        case PhaseKind::NewmanOriginal: return newman_original_phase(n);
        case PhaseKind::Custom: break;
    }
    throw InvalidArgument("phase_for: custom phase sequences must be supplied explicitly");
}

Spectrum reconstruct(const Spectrum& m, const PipelineSettings& settings) {
    return reconstruct(m, phase_for(settings, m.size()), settings.normalization, settings.reversal);
}

}  // namespace newman
