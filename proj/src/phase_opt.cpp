#include "newman/phase_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "newman/detail/fft.hpp"
#include "newman/random.hpp"

namespace newman {
namespace {

void require_dims(const PhaseVector& theta, const Ensemble& e) {
    if (theta.size() != e.length())
        throw InvalidArgument("phase_opt: theta has length " + std::to_string(theta.size()) +
                              ", ensemble has length " + std::to_string(e.length()));
}

// One member's RMS term and, optionally, its gradient contribution added into `grad`.
double member_term(std::span<const double> theta, const Spectrum& m, const ObjectiveSettings& s,
                   std::vector<double>* grad) {
    const std::size_t n = m.size();
    const double c = normalization_factor(s.normalization, n);

    std::vector<cplx> spectrum(n);
    for (std::size_t l = 0; l < n; ++l)
        spectrum[l] = m[l] * cplx(std::cos(theta[l]), std::sin(theta[l]));

    std::vector<cplx> x = detail::dft(spectrum, detail::Direction::Inverse);
    std::vector<double> mag(n), resid(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] *= c;
        mag[k] = std::abs(x[k]);
        resid[k] = mag[k] - m[reversed_index(k, n, s.reversal)];
    }
    double acc = 0.0;
    for (double r : resid) acc += r * r;
    const double term = std::sqrt(acc / static_cast<double>(n));
    if (!grad || term == 0.0) return term;

    // d|x_k|/d theta_l = Re( conj(u_k) * i c X_l exp(2 pi i k l / N) ), u_k = x_k / |x_k|.
    // Summed against w_k = resid_k / (N term) this is -c Im( X_l conj(Y_l) ),
    // Y = forward DFT of w u.
    std::vector<cplx> wu(n);
    const double inv = 1.0 / (static_cast<double>(n) * term);
    for (std::size_t k = 0; k < n; ++k)
        wu[k] = mag[k] > 0.0 ? (resid[k] * inv / mag[k]) * x[k] : cplx{0.0, 0.0};
    detail::dft_inplace(wu, detail::Direction::Forward);
    for (std::size_t l = 0; l < n; ++l)
        (*grad)[l] += -c * std::imag(spectrum[l] * std::conj(wu[l]));
    return term;
}

double evaluate(std::span<const double> theta, const Ensemble& e, std::vector<double>* grad) {
    double total = 0.0;
    for (const Spectrum& m : e.targets()) total += member_term(theta, m, e.settings(), grad);
    return total;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Ensemble::Ensemble(std::vector<Spectrum> targets, ObjectiveSettings settings)
    : targets_(std::move(targets)), settings_(settings) {
    if (targets_.empty()) throw InvalidArgument("Ensemble: no targets");
    for (const auto& t : targets_)
        if (t.size() != targets_.front().size())
            throw InvalidArgument("Ensemble: targets must share one length");
}

Ensemble make_ensemble(const EnsembleSpec& spec, std::size_t n, ObjectiveSettings settings) {
    validate(spec);
    std::vector<Spectrum> targets;
    targets.reserve(spec.count);
    for (std::size_t j = 0; j < spec.count; ++j)
        targets.push_back(sample_function(random_sos(spec, j), n));
    return Ensemble(std::move(targets), settings);
}

double objective(const PhaseVector& theta, const Ensemble& e) {
    require_dims(theta, e);
    return evaluate(theta.theta, e, nullptr);
}

ValueAndGradient objective_value_and_gradient(const PhaseVector& theta, const Ensemble& e) {
    require_dims(theta, e);
    ValueAndGradient out;
    out.gradient.assign(theta.size(), 0.0);
    out.value = evaluate(theta.theta, e, &out.gradient);
    return out;
}

std::vector<double> objective_gradient(const PhaseVector& theta, const Ensemble& e) {
    return objective_value_and_gradient(theta, e).gradient;
}

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double h) {
    if (!(h > 0.0)) throw InvalidArgument("fd_gradient: h must be positive");
    std::vector<double> probe(x.begin(), x.end());
    std::vector<double> g(x.size());
    for (std::size_t l = 0; l < x.size(); ++l) {
        probe[l] = x[l] + h;
        const double up = f(probe);
        probe[l] = x[l] - h;
        const double down = f(probe);
        probe[l] = x[l];
        g[l] = (up - down) / (2.0 * h);
    }
    return g;
}

std::vector<double> fd_gradient(const PhaseVector& theta, const Ensemble& e, double h) {
    require_dims(theta, e);
    return fd_gradient([&](std::span<const double> t) { return evaluate(t, e, nullptr); },
                       theta.theta, h);
}

std::string_view to_string(InitKind kind) {
    switch (kind) {
        case InitKind::Random: return "random";
        case InitKind::Newman: return "newman";
        case InitKind::NewmanPerturbed: return "newman_perturbed";
    }
    return "?";
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::GradientTolerance: return "gradient_tolerance";
        case StopReason::MaxIterations: return "max_iterations";
        case StopReason::LineSearchFailure: return "line_search_failure";
    }
    return "?";
}

InitKind parse_init_kind(std::string_view s) {
    if (s == "random") return InitKind::Random;
    if (s == "newman") return InitKind::Newman;
    if (s == "newman_perturbed") return InitKind::NewmanPerturbed;
    throw InvalidArgument("unknown init kind '" + std::string(s) + "'");
}

PhaseVector initial_theta(const InitSpec& init, std::size_t n) {
    if (n == 0) throw InvalidArgument("initial_theta: size must be >= 1");
    PhaseVector out;
    RandomStream rng(init.seed, 0);
    switch (init.kind) {
        case InitKind::Random:
            out.theta.resize(n);
            for (double& t : out.theta) t = rng.uniform(0.0, kTwoPi);
            break;
        case InitKind::Newman: {
            const auto phi = newman_phase(n);
            out.theta.assign(phi.angles().begin(), phi.angles().end());
            break;
        }
        case InitKind::NewmanPerturbed: {
            if (!(init.radius >= 0.0)) throw InvalidArgument("initial_theta: radius must be >= 0");
            const auto phi = newman_phase(n);
            out.theta.assign(phi.angles().begin(), phi.angles().end());
            for (double& t : out.theta) t += rng.uniform(-init.radius, init.radius);
            break;
        }
    }
    return out;
}

void OptimizerOptions::validate() const {
    if (!(gradient_tolerance > 0.0)) throw InvalidArgument("optimizer: gradient_tolerance must be > 0");
    if (!(armijo > 0.0 && armijo < 1.0)) throw InvalidArgument("optimizer: armijo must lie in (0, 1)");
    if (!(backtrack > 0.0 && backtrack < 1.0))
        throw InvalidArgument("optimizer: backtrack must lie in (0, 1)");
    if (!(initial_step > 0.0)) throw InvalidArgument("optimizer: initial_step must be > 0");
    if (max_backtracks == 0) throw InvalidArgument("optimizer: max_backtracks must be >= 1");
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

OptReport minimize(const PhaseVector& init, const Ensemble& e, const OptimizerOptions& opts,
                   InitSpec init_spec) {
    opts.validate();
    require_dims(init, e);
    const std::size_t n = init.size();

    auto eval = [&](std::span<const double> t, std::vector<double>& g) {
        g.assign(n, 0.0);
        const double f = evaluate(t, e, &g);
        if (!std::isfinite(f) || !all_finite(g))
            throw NumericalError("minimize: non-finite objective or gradient");
        return f;
    };

    OptReport report;
    report.init = init_spec;

    std::vector<double> theta = init.theta;
    std::vector<double> grad;
    double f = eval(theta, grad);
    double gnorm = norm2(grad);
    report.iterations.push_back({0, f, gnorm, 0.0});

    std::vector<double> dir(n);
    for (std::size_t l = 0; l < n; ++l) dir[l] = -grad[l];
    double step0 = opts.initial_step / std::max(1.0, gnorm);

    std::vector<double> trial(n), trial_grad;
    report.stop_reason = StopReason::MaxIterations;
    for (std::size_t iter = 1;; ++iter) {
        if (gnorm <= opts.gradient_tolerance) {
            report.converged = true;
            report.stop_reason = StopReason::GradientTolerance;
            break;
        }
        if (iter > opts.max_iters) break;

        double slope = dot(grad, dir);
        if (!(slope < 0.0)) {
            for (std::size_t l = 0; l < n; ++l) dir[l] = -grad[l];
            slope = -gnorm * gnorm;
        }

        // Backtracking on the sufficient-decrease condition.
        double step = step0;
        double f_trial = 0.0;
        bool accepted = false;
        for (std::size_t bt = 0; bt < opts.max_backtracks; ++bt) {
            for (std::size_t l = 0; l < n; ++l) trial[l] = theta[l] + step * dir[l];
            f_trial = evaluate(trial, e, nullptr);
            if (!std::isfinite(f_trial)) throw NumericalError("minimize: non-finite objective");
            if (f_trial <= f + opts.armijo * step * slope && f_trial < f) {
                accepted = true;
                break;
            }
            step *= opts.backtrack;
        }
        if (!accepted) {
            report.stop_reason = StopReason::LineSearchFailure;
            break;
        }

        const double f_new = eval(trial, trial_grad);
        const double gg_old = dot(grad, grad);
        double beta = 0.0;
        for (std::size_t l = 0; l < n; ++l) beta += trial_grad[l] * (trial_grad[l] - grad[l]);
        beta = std::max(0.0, beta / gg_old);

        theta.swap(trial);
        grad.swap(trial_grad);
        f = f_new;
        gnorm = norm2(grad);
        for (std::size_t l = 0; l < n; ++l) dir[l] = -grad[l] + beta * dir[l];
        report.iterations.push_back({iter, f, gnorm, step});

        // Next trial step: keep the predicted first-order decrease of the last step.
        const double new_slope = dot(grad, dir);
        step0 = new_slope < 0.0 ? std::min(1e3, 2.0 * step * slope / new_slope) : step;
    }

    report.final_theta.theta.resize(n);
    std::transform(theta.begin(), theta.end(), report.final_theta.theta.begin(), wrap_angle);
    return report;
}

StationarityReport stationarity_report(const Ensemble& e, std::size_t n_random, std::uint64_t seed) {
    if (n_random == 0) throw InvalidArgument("stationarity_report: n_random must be >= 1");
    const std::size_t n = e.length();
    StationarityReport out;
    out.grad_norm_at_newman = norm2(objective_gradient(initial_theta({InitKind::Newman}, n), e));

    std::vector<double> norms(n_random);
    for (std::size_t r = 0; r < n_random; ++r) {
        RandomStream rng(seed, r);
        PhaseVector theta;
        theta.theta.resize(n);
        for (double& t : theta.theta) t = rng.uniform(0.0, kTwoPi);
        norms[r] = norm2(objective_gradient(theta, e));
    }
    out.random_grad_norms = quantiles(norms);
    return out;
}

}  // namespace newman
