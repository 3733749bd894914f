#include "newman/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

namespace newman {
namespace {

const json kEmptyObject = json::object();

const json& section(const json& config, const char* key) {
    const auto it = config.find(key);
    return it == config.end() ? kEmptyObject : *it;
}

std::vector<std::size_t> read_sizes(const json& config, const char* key, const RunOptions& opts,
                                    std::size_t min_size) {
    const auto it = config.find(key);
    if (it == config.end() || !it->is_array() || it->empty())
        throw ConfigError(std::string("'") + key + "' must be a non-empty array of integers");
    std::vector<std::size_t> out;
    for (const auto& v : *it) {
        if (!v.is_number_unsigned()) throw ConfigError(std::string("'") + key + "' must hold non-negative integers");
        const auto n = v.get<std::size_t>();
        if (n < min_size)
            throw ConfigError(std::string("'") + key + "' entries must be >= " + std::to_string(min_size));
        if (n > kLargeSizeLimit && !opts.allow_large)
            throw ConfigError("size " + std::to_string(n) + " exceeds 2^20; pass --allow-large");
        out.push_back(n);
    }
    return out;
}

std::size_t read_size(const json& config, const char* key, const RunOptions& opts, std::size_t min_size) {
    const auto it = config.find(key);
    if (it == config.end()) throw ConfigError(std::string("missing required field '") + key + "'");
    json wrapped = json::object();
    wrapped[key] = json::array({*it});
    return read_sizes(wrapped, key, opts, min_size).front();
}

std::size_t read_count(const json& config, const char* key, std::size_t fallback) {
    const auto it = config.find(key);
    if (it == config.end()) return fallback;
    if (!it->is_number_unsigned()) throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    return it->get<std::size_t>();
}

std::filesystem::path output_path(const json& config, const char* key, const char* fallback,
                                  const RunOptions& opts) {
    std::string name = fallback;
    if (const auto it = config.find(key); it != config.end()) {
        if (!it->is_string() || it->get<std::string>().empty())
            throw ConfigError(std::string("'") + key + "' must be a non-empty string");
        name = it->get<std::string>();
    }
    return opts.out_dir / name;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open output file " + path.string());
    return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) throw NumericalError("failed writing " + path.string());
}

EnsembleSpec ensemble_with_seed(const json& config, const RunOptions& opts) {
    EnsembleSpec spec = ensemble_spec_from_json(section(config, "ensemble"));
    if (opts.seed) spec.seed = *opts.seed;
    return spec;
}

std::vector<std::string> columns(std::initializer_list<const char*> names) {
    return {names.begin(), names.end()};
}

}  // namespace

unsigned default_thread_count() {
    if (const char* env = std::getenv("NEWMAN_LAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

RunResult cmd_reconstruct(const json& config, const RunOptions& opts) {
    require_known_keys(config, "reconstruct", {"pipeline", "descriptor", "n", "output"});
    const PipelineSettings pipeline = pipeline_from_json(section(config, "pipeline"));
    if (!config.contains("descriptor")) throw ConfigError("reconstruct: missing 'descriptor'");
    const FunctionDescriptor desc = descriptor_from_json(config.at("descriptor"));
    const std::size_t n = read_size(config, "n", opts, 1);

    Spectrum target;
    try {
        target = sample_function(desc, n);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("reconstruct: ") + e.what());
    }
    const Spectrum recon = reconstruct(target, pipeline);

    const json effective{{"pipeline", to_json(pipeline)}, {"descriptor", to_json(desc)}, {"n", n}};
    const auto path = output_path(config, "output", "reconstruct.csv", opts);
    auto os = open_output(path);
    CsvWriter csv(os, "reconstruct", config, effective, columns({"index", "target", "recon", "abs_diff"}));
    for (std::size_t k = 0; k < n; ++k) {
        csv.field(std::uint64_t{k}).field(target[k]).field(recon[k]).field(std::abs(recon[k] - target[k]));
        csv.end_row();
    }
    finish(os, path);
    return {{path}};
}

RunResult cmd_sweep(const json& config, const RunOptions& opts) {
    require_known_keys(config, "sweep", {"pipeline", "descriptor", "sizes", "output"});
    const PipelineSettings pipeline = pipeline_from_json(section(config, "pipeline"));
    if (!config.contains("descriptor")) throw ConfigError("sweep: missing 'descriptor'");
    const FunctionDescriptor desc = descriptor_from_json(config.at("descriptor"));
    const auto sizes = read_sizes(config, "sizes", opts, 2);

    std::vector<ErrorRecord> records;
    try {
        records = convergence_sweep(desc, sizes, pipeline, opts.threads);
    } catch (const NumericalError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("sweep: ") + e.what());
    }

    const json effective{{"pipeline", to_json(pipeline)}, {"descriptor", to_json(desc)}, {"sizes", sizes}};
    const auto path = output_path(config, "output", "sweep.csv", opts);
    auto os = open_output(path);
    CsvWriter csv(os, "sweep", config, effective,
                  columns({"n", "sup_error", "rms_error", "phase_kind", "normalization", "reversal", "descriptor_id"}));
    for (const auto& r : records) {
        csv.field(std::uint64_t{r.n}).field(r.sup_error).field(r.rms_error);
        csv.field(to_string(r.phase_kind)).field(to_string(r.normalization)).field(to_string(r.reversal));
        csv.field(r.descriptor_id);
        csv.end_row();
    }
    finish(os, path);
    return {{path}};
}

RunResult cmd_ensemble(const json& config, const RunOptions& opts) {
    require_known_keys(config, "ensemble", {"pipeline", "ensemble", "sizes", "output", "box_output"});
    const PipelineSettings pipeline = pipeline_from_json(section(config, "pipeline"));
    const EnsembleSpec spec = ensemble_with_seed(config, opts);
    const auto sizes = read_sizes(config, "sizes", opts, 1);

    const auto study = ensemble_study(spec, sizes, pipeline, opts.threads);

    const json effective{{"pipeline", to_json(pipeline)}, {"ensemble", to_json(spec)}, {"sizes", sizes}};
    const auto raw_path = output_path(config, "output", "ensemble.csv", opts);
    const auto box_path = output_path(config, "box_output", "ensemble_box.csv", opts);
    {
        auto os = open_output(raw_path);
        CsvWriter csv(os, "ensemble", config, effective, columns({"n", "seed_index", "rms_error"}));
        for (std::size_t n : sizes)
            for (const auto& r : study.at(n).records) {
                csv.field(std::uint64_t{n}).field(std::uint64_t{*r.seed_index}).field(r.rms_error);
                csv.end_row();
            }
        finish(os, raw_path);
    }
    {
        auto os = open_output(box_path);
        CsvWriter csv(os, "ensemble_box", config, effective,
                      columns({"n", "min", "q1", "median", "q3", "max", "count"}));
        for (std::size_t n : sizes) {
            const BoxStats& b = study.at(n).rms;
            csv.field(std::uint64_t{n}).field(b.min).field(b.q1).field(b.median).field(b.q3).field(b.max);
            csv.field(std::uint64_t{b.count});
            csv.end_row();
        }
        finish(os, box_path);
    }
    return {{raw_path, box_path}};
}

RunResult cmd_optimize(const json& config, const RunOptions& opts) {
    require_known_keys(config, "optimize",
                       {"objective", "ensemble", "n", "init", "optimizer", "output", "trace_output"});
    const ObjectiveSettings settings = objective_settings_from_json(section(config, "objective"));
    const EnsembleSpec spec = ensemble_with_seed(config, opts);
    const std::size_t n = read_size(config, "n", opts, 1);
    InitSpec init = init_spec_from_json(section(config, "init"));
    if (opts.seed) init.seed = *opts.seed;
    const OptimizerOptions options = optimizer_options_from_json(section(config, "optimizer"));

    const Ensemble ensemble = make_ensemble(spec, n, settings);
    const PhaseVector start = initial_theta(init, n);
    const OptReport report = minimize(start, ensemble, options, init);
    const double newman_objective = objective(initial_theta({InitKind::Newman}, n), ensemble);

    const json effective{{"objective", to_json(settings)},
                         {"ensemble", to_json(spec)},
                         {"n", n},
                         {"init", to_json(init)},
                         {"optimizer", to_json(options)}};

    const auto json_path = output_path(config, "output", "optimize.json", opts);
    const auto trace_path = output_path(config, "trace_output", "optimize_trace.csv", opts);
    {
        json out{{"format_version", kFormatVersion},
                 {"tool", std::string(kToolName) + " " + std::string(kToolVersion)},
                 {"config", config},
                 {"effective", effective},
                 {"init_kind", to_string(init.kind)},
                 {"init_radius", init.radius},
                 {"converged", report.converged},
                 {"stop_reason", to_string(report.stop_reason)},
                 {"steps_taken", report.steps_taken()},
                 {"initial_objective", report.initial_objective()},
                 {"final_objective", report.final_objective()},
                 {"final_gradient_norm", report.iterations.back().gradient_norm},
                 {"newman_objective", newman_objective},
                 {"final_theta", report.final_theta.theta}};
        auto os = open_output(json_path);
        os << out.dump(2) << "\n";
        finish(os, json_path);
    }
    {
        auto os = open_output(trace_path);
        CsvWriter csv(os, "optimize_trace", config, effective,
                      columns({"iter", "objective", "grad_norm", "step_size"}));
        for (const auto& it : report.iterations) {
            csv.field(std::uint64_t{it.iter}).field(it.objective).field(it.gradient_norm).field(it.step_size);
            csv.end_row();
        }
        finish(os, trace_path);
    }
    return {{json_path, trace_path}};
}

RunResult cmd_extremal(const json& config, const RunOptions& opts) {
    require_known_keys(config, "extremal",
                       {"degrees", "l1_oversample", "coefficients", "tones", "crest_oversample", "crest_phase",
                        "output", "crest_output"});
    const bool has_degrees = config.contains("degrees");
    const bool has_tones = config.contains("tones");
    if (!has_degrees && !has_tones) throw ConfigError("extremal: need 'degrees' and/or 'tones'");

    const std::size_t l1_oversample = read_count(config, "l1_oversample", kDefaultL1Oversample);
    const std::size_t crest_oversample = read_count(config, "crest_oversample", kDefaultCrestOversample);
    if (l1_oversample < 4) throw ConfigError("extremal: l1_oversample must be >= 4");
    if (crest_oversample < 8) throw ConfigError("extremal: crest_oversample must be >= 8");

    CoefficientPhase coeffs = CoefficientPhase::Newman;
    std::string crest_phase = "newman";
    try {
        if (const auto it = config.find("coefficients"); it != config.end())
            coeffs = parse_coefficient_phase(it->get<std::string>());
        if (const auto it = config.find("crest_phase"); it != config.end()) crest_phase = it->get<std::string>();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("extremal: ") + e.what());
    }
    if (crest_phase != "newman" && crest_phase != "newman_original" && crest_phase != "zero")
        throw ConfigError("extremal: crest_phase must be newman, newman_original or zero");

    json effective{{"l1_oversample", l1_oversample},
                   {"coefficients", to_string(coeffs)},
                   {"crest_oversample", crest_oversample},
                   {"crest_phase", crest_phase}};
    std::vector<std::size_t> degrees, tones;
    if (has_degrees) {
        // Degree 0 is allowed; the transform length is (n+1) * oversample.
        degrees = read_sizes(config, "degrees", RunOptions{opts.out_dir, {}, 1, true}, 0);
        for (std::size_t d : degrees)
            if ((d + 1) * l1_oversample > kLargeSizeLimit && !opts.allow_large)
                throw ConfigError("extremal: degree " + std::to_string(d) + " exceeds 2^20 samples; pass --allow-large");
        effective["degrees"] = degrees;
    }
    if (has_tones) {
        tones = read_sizes(config, "tones", opts, 1);
        for (std::size_t t : tones)
            if (t * crest_oversample > kLargeSizeLimit && !opts.allow_large)
                throw ConfigError("extremal: tone count " + std::to_string(t) + " exceeds 2^20 samples; pass --allow-large");
        effective["tones"] = tones;
    }

    RunResult result;
    if (has_degrees) {
        const auto path = output_path(config, "output", "extremal_l1.csv", opts);
        auto os = open_output(path);
        CsvWriter csv(os, "extremal_l1", config, effective,
                      columns({"degree_n", "oversample", "coefficients", "l1_estimate", "ratio_to_sqrt_n",
                               "upper_bound", "sqrt_n_minus_l1"}));
        for (std::size_t d : degrees) {
            const L1Report r = newman_polynomial_l1(d, l1_oversample, coeffs);
            csv.field(std::uint64_t{r.degree_n}).field(std::uint64_t{r.oversample}).field(to_string(r.coefficients));
            csv.field(r.l1_estimate).field(r.ratio_to_sqrt_n).field(r.upper_bound).field(r.sqrt_n_minus_l1);
            csv.end_row();
        }
        finish(os, path);
        result.outputs.push_back(path);
    }
    if (has_tones) {
        const auto path = output_path(config, "crest_output", "extremal_crest.csv", opts);
        auto os = open_output(path);
        CsvWriter csv(os, "extremal_crest", config, effective,
                      columns({"n_tones", "oversample", "phase", "crest_factor_db", "peak", "rms"}));
        for (std::size_t t : tones) {
            const Spectrum flat(std::vector<double>(t, 1.0));
            const PhaseSequence phi = crest_phase == "newman"            ? newman_phase(t)
                                      : crest_phase == "newman_original" ? newman_original_phase(t)
                                                                         : linear_phase(t, 0.0);
            const CrestReport r = crest_factor(flat, phi, crest_oversample);
            csv.field(std::uint64_t{r.n_tones}).field(std::uint64_t{r.oversample}).field(crest_phase);
            csv.field(r.crest_factor_db).field(r.peak).field(r.rms);
            csv.end_row();
        }
        finish(os, path);
        result.outputs.push_back(path);
    }
    return result;
}

RunResult run_command(std::string_view command, const json& config, const RunOptions& opts) {
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    try {
        if (command == "reconstruct") return cmd_reconstruct(config, opts);
        if (command == "sweep") return cmd_sweep(config, opts);
        if (command == "ensemble") return cmd_ensemble(config, opts);
        if (command == "optimize") return cmd_optimize(config, opts);
        if (command == "extremal") return cmd_extremal(config, opts);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    throw ConfigError("unknown command '" + std::string(command) + "'");
}

}  // namespace newman
