// Error metrics between a reconstruction and its target, convergence sweeps
// over transform sizes, ensemble box statistics and Gibbs-overshoot profiles.
//
// Metric functions expect `recon` to be already reversed; the sweep and
// ensemble drivers go through reconstruct(), which applies the reversal.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newman/generators.hpp"
#include "newman/spectral.hpp"

namespace newman {

struct ErrorRecord {
    std::size_t n = 0;
    double sup_error = 0.0;
    double rms_error = 0.0;
    Normalization normalization = Normalization::Unitary;
    ReversalConvention reversal = ReversalConvention::Modular;
    PhaseKind phase_kind = PhaseKind::Newman;
    std::string descriptor_id;
    std::optional<std::size_t> seed_index;
};

struct BoxStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    std::size_t count = 0;

    friend bool operator==(const BoxStats&, const BoxStats&) = default;
};

struct GibbsReport {
    std::size_t jump_location = 0;
    double jump_size = 0.0;
    double max_overshoot = 0.0;
    std::size_t window_halfwidth = 1;
    double far_field_sup_error = 0.0;
    bool overlaps_other_window = false;
};

double sup_error(std::span<const double> recon, std::span<const double> target);
double rms_error(std::span<const double> recon, std::span<const double> target);
double sup_error(const Spectrum& recon, const Spectrum& target);
double rms_error(const Spectrum& recon, const Spectrum& target);

/// Runs the pipeline on `target` and scores it; `phase` overrides settings.phase.
ErrorRecord evaluate_reconstruction(const Spectrum& target, const PhaseSequence& phase,
                                    const PipelineSettings& settings, PhaseKind kind,
                                    std::string descriptor_id);

std::vector<ErrorRecord> convergence_sweep(const FunctionDescriptor& d,
                                           std::span<const std::size_t> sizes,
                                           const PipelineSettings& settings,
                                           unsigned threads = 1);

struct EnsembleLevel {
    BoxStats rms;
    std::vector<ErrorRecord> records;  // ordered by seed_index
};

std::map<std::size_t, EnsembleLevel> ensemble_study(const EnsembleSpec& spec,
                                                    std::span<const std::size_t> sizes,
                                                    const PipelineSettings& settings,
                                                    unsigned threads = 1);

/// Quartiles by linear interpolation between closest ranks: the p-quantile of
/// the sorted values v[0..n-1] is v[h] interpolated at h = p * (n - 1).
BoxStats quantiles(std::span<const double> values);

/// max(8, N/32) samples.
std::size_t default_gibbs_halfwidth(std::size_t n);

/// Jump at index j sits between j-1 and j (circularly). Its window covers
/// indices j-w .. j+w. Overshoot is measured above the larger of target[j-1]
/// and target[j]; the far field is everything outside all windows.
std::vector<GibbsReport> gibbs_profile(const Spectrum& recon, const Spectrum& target,
                                       std::span<const std::size_t> jumps,
                                       std::size_t window_halfwidth);

/// Grid indices where a sampled piecewise-constant target changes level, wrap included.
std::vector<std::size_t> find_jumps(const Spectrum& target, double threshold = 0.0);

}  // namespace newman
