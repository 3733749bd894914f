// Ensemble phase optimization.
//
//   J(theta) = sum_j sqrt( (1/N) sum_k ( |x_j[k](theta)| - M_j[rev(k)] )^2 ),
//   x_j(theta) = c_N * IDFT( M_j * exp(i theta) )
//
// J depends on theta only through magnitudes, so it is 2 pi periodic in every
// coordinate and invariant under theta -> theta + c * 1.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "newman/generators.hpp"
#include "newman/metrics.hpp"
#include "newman/spectral.hpp"

namespace newman {

struct PhaseVector {
    std::vector<double> theta;

    std::size_t size() const noexcept { return theta.size(); }
};

struct ObjectiveSettings {
    Normalization normalization = Normalization::Unitary;
    ReversalConvention reversal = ReversalConvention::Flip;
};

class Ensemble {
public:
    Ensemble(std::vector<Spectrum> targets, ObjectiveSettings settings = {});

    std::size_t size() const noexcept { return targets_.size(); }
    std::size_t length() const noexcept { return targets_.front().size(); }
    const std::vector<Spectrum>& targets() const noexcept { return targets_; }
    const ObjectiveSettings& settings() const noexcept { return settings_; }

private:
    std::vector<Spectrum> targets_;
    ObjectiveSettings settings_;
};

/// The first `spec.count` random sum-of-sinusoids members sampled at N.
Ensemble make_ensemble(const EnsembleSpec& spec, std::size_t n, ObjectiveSettings settings = {});

double objective(const PhaseVector& theta, const Ensemble& e);

/// Exact chain-rule gradient. Time bins with |x_k| = 0 and members with a zero
/// RMS term contribute 0 (subgradient choice).
std::vector<double> objective_gradient(const PhaseVector& theta, const Ensemble& e);

struct ValueAndGradient {
    double value = 0.0;
    std::vector<double> gradient;
};
ValueAndGradient objective_value_and_gradient(const PhaseVector& theta, const Ensemble& e);

/// Central differences (f(theta + h e_l) - f(theta - h e_l)) / 2h.
std::vector<double> fd_gradient(const PhaseVector& theta, const Ensemble& e, double h);
std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double h);

enum class InitKind { Random, Newman, NewmanPerturbed };
enum class StopReason { GradientTolerance, MaxIterations, LineSearchFailure };

std::string_view to_string(InitKind kind);
std::string_view to_string(StopReason reason);
InitKind parse_init_kind(std::string_view s);

struct InitSpec {
    InitKind kind = InitKind::Newman;
    double radius = 0.0;     // NewmanPerturbed: uniform offsets in [-radius, radius)
    std::uint64_t seed = 0;  // Random, NewmanPerturbed
};

PhaseVector initial_theta(const InitSpec& init, std::size_t n);

struct OptimizerOptions {
    std::size_t max_iters = 200;
    double gradient_tolerance = 1e-6;
    double armijo = 1e-4;           // sufficient-decrease constant
    double backtrack = 0.5;         // step shrink factor
    std::size_t max_backtracks = 60;
    double initial_step = 1.0;

    void validate() const;
};

struct IterationRecord {
    std::size_t iter = 0;
    double objective = 0.0;
    double gradient_norm = 0.0;
    double step_size = 0.0;
};

struct OptReport {
    std::vector<IterationRecord> iterations;  // entry 0 is the initial point
    PhaseVector final_theta;                  // wrapped into [0, 2 pi)
    InitSpec init;
    bool converged = false;
    StopReason stop_reason = StopReason::MaxIterations;

    std::size_t steps_taken() const noexcept { return iterations.empty() ? 0 : iterations.size() - 1; }
    double initial_objective() const { return iterations.front().objective; }
    double final_objective() const { return iterations.back().objective; }
};

/// Polak-Ribiere+ nonlinear conjugate gradient with Armijo backtracking;
/// falls back to steepest descent whenever the CG direction is not a descent
/// direction. Throws NumericalError on non-finite objective or gradient.
OptReport minimize(const PhaseVector& init, const Ensemble& e, const OptimizerOptions& opts,
                   InitSpec init_spec = {});

double wrap_angle(double a);

struct StationarityReport {
    double grad_norm_at_newman = 0.0;
    BoxStats random_grad_norms;
};

StationarityReport stationarity_report(const Ensemble& e, std::size_t n_random, std::uint64_t seed);

double norm2(std::span<const double> v);

}  // namespace newman
