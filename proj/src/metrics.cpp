#include "newman/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "newman/parallel.hpp"

namespace newman {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw InvalidArgument(std::string(what) + ": length mismatch (" + std::to_string(a) +
                              " vs " + std::to_string(b) + ")");
}

void require_sizes(std::span<const std::size_t> sizes, std::size_t min_size, const char* what) {
    if (sizes.empty()) throw InvalidArgument(std::string(what) + ": sizes must be non-empty");
    for (std::size_t n : sizes)
        if (n < min_size)
            throw InvalidArgument(std::string(what) + ": every size must be >= " +
                                  std::to_string(min_size));
}

double quantile_sorted(std::span<const double> sorted, double p) {
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double sup_error(std::span<const double> recon, std::span<const double> target) {
    require_same_length(recon.size(), target.size(), "sup_error");
    double worst = 0.0;
    for (std::size_t k = 0; k < recon.size(); ++k)
        worst = std::max(worst, std::abs(recon[k] - target[k]));
    return worst;
}

double rms_error(std::span<const double> recon, std::span<const double> target) {
    require_same_length(recon.size(), target.size(), "rms_error");
    if (recon.empty()) return 0.0;
    // Scaled by the largest deviation: no overflow, and rms <= sup holds in floating point.
    const double scale = sup_error(recon, target);
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < recon.size(); ++k) {
        const double d = (recon[k] - target[k]) / scale;
        acc += d * d;
    }
    return scale * std::sqrt(acc / static_cast<double>(recon.size()));
}

double sup_error(const Spectrum& recon, const Spectrum& target) {
    return sup_error(recon.values(), target.values());
}

double rms_error(const Spectrum& recon, const Spectrum& target) {
    return rms_error(recon.values(), target.values());
}

ErrorRecord evaluate_reconstruction(const Spectrum& target, const PhaseSequence& phase,
                                    const PipelineSettings& settings, PhaseKind kind,
                                    std::string descriptor_id) {
    const Spectrum recon = reconstruct(target, phase, settings.normalization, settings.reversal);
    ErrorRecord rec;
    rec.n = target.size();
    rec.sup_error = sup_error(recon, target);
    rec.rms_error = rms_error(recon, target);
    rec.normalization = settings.normalization;
    rec.reversal = settings.reversal;
    rec.phase_kind = kind;
    rec.descriptor_id = std::move(descriptor_id);
    return rec;
}

std::vector<ErrorRecord> convergence_sweep(const FunctionDescriptor& d,
                                           std::span<const std::size_t> sizes,
                                           const PipelineSettings& settings, unsigned threads) {
    require_sizes(sizes, 2, "convergence_sweep");
    validate(d);
    const std::string id = descriptor_id(d);
    std::vector<ErrorRecord> out(sizes.size());
    parallel_for(sizes.size(), threads, [&](std::size_t i) {
        const Spectrum target = sample_function(d, sizes[i]);
        out[i] = evaluate_reconstruction(target, phase_for(settings, sizes[i]), settings,
                                         settings.phase, id);
    });
    return out;
}

std::map<std::size_t, EnsembleLevel> ensemble_study(const EnsembleSpec& spec,
                                                    std::span<const std::size_t> sizes,
                                                    const PipelineSettings& settings,
                                                    unsigned threads) {
    validate(spec);
    require_sizes(sizes, 1, "ensemble_study");

    std::vector<SumOfSinusoids> members(spec.count);
    for (std::size_t j = 0; j < spec.count; ++j) members[j] = random_sos(spec, j);

    // One slot per (size, member); the flattened order fixes the output order.
    const std::size_t per_size = spec.count;
    std::vector<ErrorRecord> slots(sizes.size() * per_size);
    std::vector<PhaseSequence> phases(sizes.size());
    for (std::size_t s = 0; s < sizes.size(); ++s) phases[s] = phase_for(settings, sizes[s]);

    parallel_for(slots.size(), threads, [&](std::size_t flat) {
        const std::size_t s = flat / per_size;
        const std::size_t j = flat % per_size;
        const Spectrum target = sample_function(members[j], sizes[s]);
        ErrorRecord rec = evaluate_reconstruction(target, phases[s], settings, settings.phase,
                                                  "sos#" + std::to_string(j));
        rec.seed_index = j;
        slots[flat] = std::move(rec);
    });

    std::map<std::size_t, EnsembleLevel> out;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        EnsembleLevel level;
        level.records.assign(slots.begin() + static_cast<std::ptrdiff_t>(s * per_size),
                             slots.begin() + static_cast<std::ptrdiff_t>((s + 1) * per_size));
        std::vector<double> rms;
        rms.reserve(per_size);
        for (const auto& r : level.records) rms.push_back(r.rms_error);
        level.rms = quantiles(rms);
        out[sizes[s]] = std::move(level);
    }
    return out;
}

BoxStats quantiles(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("quantiles: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    BoxStats b;
    b.min = sorted.front();
    b.q1 = quantile_sorted(sorted, 0.25);
    b.median = quantile_sorted(sorted, 0.5);
    b.q3 = quantile_sorted(sorted, 0.75);
    b.max = sorted.back();
    b.count = sorted.size();
    return b;
}

std::size_t default_gibbs_halfwidth(std::size_t n) { return std::max<std::size_t>(8, n / 32); }

std::vector<GibbsReport> gibbs_profile(const Spectrum& recon, const Spectrum& target,
                                       std::span<const std::size_t> jumps,
                                       std::size_t window_halfwidth) {
    const std::size_t n = target.size();
    require_same_length(recon.size(), n, "gibbs_profile");
    if (window_halfwidth < 1) throw InvalidArgument("gibbs_profile: window_halfwidth must be >= 1");
    for (std::size_t j : jumps)
        if (j >= n) throw InvalidArgument("gibbs_profile: jump index out of range");

    // cover[i]: number of windows containing index i.
    std::vector<unsigned> cover(n, 0);
    const std::size_t w = std::min(window_halfwidth, n / 2);
    auto window_index = [&](std::size_t j, std::size_t d) { return (j + n - w + d) % n; };
    for (std::size_t j : jumps)
        for (std::size_t d = 0; d <= 2 * w && d < n; ++d) ++cover[window_index(j, d)];

    double far_field = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (cover[i] == 0) far_field = std::max(far_field, std::abs(recon[i] - target[i]));

    std::vector<GibbsReport> out;
    out.reserve(jumps.size());
    for (std::size_t j : jumps) {
        GibbsReport r;
        r.jump_location = j;
        r.window_halfwidth = window_halfwidth;
        const double left = target[(j + n - 1) % n];
        const double right = target[j];
        r.jump_size = std::abs(right - left);
        const double level = std::max(left, right);
        double peak = level;
        for (std::size_t d = 0; d <= 2 * w && d < n; ++d) {
            const std::size_t i = window_index(j, d);
            peak = std::max(peak, recon[i]);
            if (cover[i] > 1) r.overlaps_other_window = true;
        }
        r.max_overshoot = peak - level;
        r.far_field_sup_error = far_field;
        out.push_back(r);
    }
    return out;
}

std::vector<std::size_t> find_jumps(const Spectrum& target, double threshold) {
    const std::size_t n = target.size();
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(target[j] - target[(j + n - 1) % n]) > threshold) out.push_back(j);
    return out;
}

}  // namespace newman
