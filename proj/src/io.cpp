#include "newman/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

namespace newman {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& require_object(const json& j, std::string_view context) {
    if (!j.is_object()) throw ConfigError(std::string(context) + ": expected a JSON object");
    return j;
}

template <class T>
T get_or(const json& obj, std::string_view key, T fallback) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end()) return fallback;
    if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw ConfigError("'" + std::string(key) + "' must be a number");
    } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
        if (!it->is_number_unsigned())
            throw ConfigError("'" + std::string(key) + "' must be a non-negative integer");
    } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ConfigError("'" + std::string(key) + "' must be an integer");
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError("'" + std::string(key) + "' must be a string");
    }
    return it->get<T>();
}

template <class T>
T get_required(const json& obj, std::string_view key, std::string_view context) {
    if (!obj.contains(std::string(key)))
        throw ConfigError(std::string(context) + ": missing required field '" + std::string(key) + "'");
    return get_or<T>(obj, key, T{});
}

std::vector<double> number_array(const json& obj, std::string_view key, std::string_view context) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end())
        throw ConfigError(std::string(context) + ": missing required field '" + std::string(key) + "'");
    if (!it->is_array()) throw ConfigError(std::string(context) + ": '" + std::string(key) + "' must be an array");
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number()) throw ConfigError(std::string(context) + ": '" + std::string(key) + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

template <class Fn>
auto rethrow_as_config(std::string_view context, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string(context) + ": " + e.what());
    }
}

}  // namespace

void require_known_keys(const json& obj, std::string_view context,
                        std::initializer_list<std::string_view> allowed) {
    require_object(obj, context);
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(std::string(context) + ": unknown field '" + key + "'");
    }
}

json parse_config(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

FunctionDescriptor descriptor_from_json(const json& j) {
    require_object(j, "descriptor");
    const auto type = get_required<std::string>(j, "type", "descriptor");
    FunctionDescriptor d;
    if (type == "sum_of_sinusoids") {
        require_known_keys(j, "descriptor", {"type", "terms", "bias"});
        SumOfSinusoids s;
        s.bias = get_required<double>(j, "bias", "sum_of_sinusoids");
        const auto it = j.find("terms");
        if (it != j.end()) {
            if (!it->is_array()) throw ConfigError("sum_of_sinusoids: 'terms' must be an array");
            for (const auto& t : *it) {
                require_known_keys(t, "sinusoid term", {"amplitude", "frequency", "phase"});
                s.terms.push_back({get_required<double>(t, "amplitude", "sinusoid term"),
                                   get_required<std::int64_t>(t, "frequency", "sinusoid term"),
                                   get_or<double>(t, "phase", 0.0)});
            }
        }
        d = std::move(s);
    } else if (type == "piecewise_constant") {
        require_known_keys(j, "descriptor", {"type", "breakpoints", "levels"});
        d = PiecewiseConstant{number_array(j, "breakpoints", "piecewise_constant"),
                              number_array(j, "levels", "piecewise_constant")};
    } else if (type == "polynomial") {
        require_known_keys(j, "descriptor", {"type", "coefficients"});
        d = Polynomial{number_array(j, "coefficients", "polynomial")};
    } else if (type == "preset") {
        require_known_keys(j, "descriptor", {"type", "name"});
        d = NamedPreset{get_required<std::string>(j, "name", "preset")};
    } else if (type == "delta") {
        require_known_keys(j, "descriptor", {"type", "index", "height"});
        d = DiscreteDelta{get_required<std::size_t>(j, "index", "delta"), get_or<double>(j, "height", 1.0)};
    } else {
        throw ConfigError("descriptor: unknown type '" + type + "'");
    }
    rethrow_as_config("descriptor", [&] {
        validate(d);
        return 0;
    });
    return d;
}

json to_json(const FunctionDescriptor& d) {
    return std::visit(
        overloaded{
            [](const SumOfSinusoids& s) {
                json terms = json::array();
                for (const auto& t : s.terms)
                    terms.push_back({{"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}});
                return json{{"type", "sum_of_sinusoids"}, {"terms", terms}, {"bias", s.bias}};
            },
            [](const PiecewiseConstant& p) {
                return json{{"type", "piecewise_constant"}, {"breakpoints", p.breakpoints}, {"levels", p.levels}};
            },
            [](const Polynomial& p) { return json{{"type", "polynomial"}, {"coefficients", p.coefficients}}; },
            [](const NamedPreset& p) { return json{{"type", "preset"}, {"name", p.name}}; },
            [](const DiscreteDelta& p) { return json{{"type", "delta"}, {"index", p.index}, {"height", p.height}}; },
        },
        d);
}

EnsembleSpec ensemble_spec_from_json(const json& j) {
    require_known_keys(j, "ensemble",
                       {"count", "seed", "term_count", "amplitude_range", "frequency_range", "bias_margin"});
    EnsembleSpec s;
    s.count = get_or<std::size_t>(j, "count", s.count);
    s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
    s.term_count = get_or<std::size_t>(j, "term_count", s.term_count);
    s.bias_margin = get_or<double>(j, "bias_margin", s.bias_margin);
    if (j.contains("amplitude_range")) {
        const auto r = number_array(j, "amplitude_range", "ensemble");
        if (r.size() != 2) throw ConfigError("ensemble: amplitude_range must be [low, high]");
        s.amplitude_low = r[0];
        s.amplitude_high = r[1];
    }
    if (j.contains("frequency_range")) {
        const auto& r = j.at("frequency_range");
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
            throw ConfigError("ensemble: frequency_range must be [low, high] integers");
        s.frequency_low = r[0].get<std::int64_t>();
        s.frequency_high = r[1].get<std::int64_t>();
    }
    rethrow_as_config("ensemble", [&] {
        validate(s);
        return 0;
    });
    return s;
}

json to_json(const EnsembleSpec& s) {
    return json{{"count", s.count},
                {"seed", s.seed},
                {"term_count", s.term_count},
                {"amplitude_range", {s.amplitude_low, s.amplitude_high}},
                {"frequency_range", {s.frequency_low, s.frequency_high}},
                {"bias_margin", s.bias_margin}};
}

PipelineSettings pipeline_from_json(const json& j) {
    require_known_keys(j, "pipeline", {"normalization", "reversal", "phase", "linear_slope"});
    PipelineSettings p;
    rethrow_as_config("pipeline", [&] {
        p.normalization = parse_normalization(get_or<std::string>(j, "normalization", "unitary"));
        p.reversal = parse_reversal(get_or<std::string>(j, "reversal", "modular"));
        p.phase = parse_phase_kind(get_or<std::string>(j, "phase", "newman"));
        return 0;
    });
    if (p.phase == PhaseKind::Custom) throw ConfigError("pipeline: phase 'custom' is not configurable");
    p.linear_slope = get_or<double>(j, "linear_slope", p.linear_slope);
    return p;
}

json to_json(const PipelineSettings& p) {
    return json{{"normalization", to_string(p.normalization)},
                {"reversal", to_string(p.reversal)},
                {"phase", to_string(p.phase)},
                {"linear_slope", p.linear_slope}};
}

ObjectiveSettings objective_settings_from_json(const json& j) {
    require_known_keys(j, "objective", {"normalization", "reversal"});
    ObjectiveSettings s;
    rethrow_as_config("objective", [&] {
        s.normalization = parse_normalization(get_or<std::string>(j, "normalization", "unitary"));
        s.reversal = parse_reversal(get_or<std::string>(j, "reversal", "flip"));
        return 0;
    });
    return s;
}

json to_json(const ObjectiveSettings& s) {
    return json{{"normalization", to_string(s.normalization)}, {"reversal", to_string(s.reversal)}};
}

OptimizerOptions optimizer_options_from_json(const json& j) {
    require_known_keys(j, "optimizer",
                       {"max_iters", "gradient_tolerance", "armijo", "backtrack", "max_backtracks", "initial_step"});
    OptimizerOptions o;
    o.max_iters = get_or<std::size_t>(j, "max_iters", o.max_iters);
    o.gradient_tolerance = get_or<double>(j, "gradient_tolerance", o.gradient_tolerance);
    o.armijo = get_or<double>(j, "armijo", o.armijo);
    o.backtrack = get_or<double>(j, "backtrack", o.backtrack);
    o.max_backtracks = get_or<std::size_t>(j, "max_backtracks", o.max_backtracks);
    o.initial_step = get_or<double>(j, "initial_step", o.initial_step);
    rethrow_as_config("optimizer", [&] {
        o.validate();
        return 0;
    });
    return o;
}

json to_json(const OptimizerOptions& o) {
    return json{{"max_iters", o.max_iters},         {"gradient_tolerance", o.gradient_tolerance},
                {"armijo", o.armijo},               {"backtrack", o.backtrack},
                {"max_backtracks", o.max_backtracks}, {"initial_step", o.initial_step}};
}

InitSpec init_spec_from_json(const json& j) {
    require_known_keys(j, "init", {"kind", "radius", "seed"});
    InitSpec s;
    rethrow_as_config("init", [&] {
        s.kind = parse_init_kind(get_or<std::string>(j, "kind", "newman"));
        return 0;
    });
    s.radius = get_or<double>(j, "radius", 0.0);
    s.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (!(s.radius >= 0.0)) throw ConfigError("init: radius must be >= 0");
    return s;
}

json to_json(const InitSpec& s) {
    return json{{"kind", to_string(s.kind)}, {"radius", s.radius}, {"seed", s.seed}};
}

json to_json(const L1Report& r) {
    return json{{"degree_n", r.degree_n},
                {"oversample", r.oversample},
                {"coefficients", to_string(r.coefficients)},
                {"l1_estimate", r.l1_estimate},
                {"ratio_to_sqrt_n", r.ratio_to_sqrt_n},
                {"upper_bound", r.upper_bound},
                {"sqrt_n_minus_l1", r.sqrt_n_minus_l1}};
}

json to_json(const CrestReport& r) {
    return json{{"n_tones", r.n_tones},
                {"oversample", r.oversample},
                {"crest_factor_db", r.crest_factor_db},
                {"peak", r.peak},
                {"rms", r.rms}};
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string quote_csv(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(std::ostream& os, std::string_view kind, const json& config, const json& effective,
                     std::span<const std::string> columns)
    : os_(os) {
    os_ << "# newman-lab-csv-version: " << kFormatVersion << "\r\n";
    os_ << "# tool: " << kToolName << " " << kToolVersion << "\r\n";
    os_ << "# kind: " << kind << "\r\n";
    os_ << "# config: " << config.dump() << "\r\n";
    os_ << "# effective: " << effective.dump() << "\r\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os_ << ',';
        os_ << quote_csv(columns[i]);
    }
    os_ << "\r\n";
}

void CsvWriter::separator() {
    if (row_started_) os_ << ',';
    row_started_ = true;
}

CsvWriter& CsvWriter::field(std::string_view s) {
    separator();
    os_ << quote_csv(s);
    return *this;
}

CsvWriter& CsvWriter::field(double v) {
    separator();
    os_ << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t v) {
    separator();
    os_ << v;
    return *this;
}

void CsvWriter::end_row() {
    os_ << "\r\n";
    row_started_ = false;
}

CsvHeader read_csv_header(std::string_view text) {
    CsvHeader h;
    std::istringstream in{std::string(text)};
    std::string line;
    bool have_version = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# ", 0) != 0) {
            std::stringstream cols(line);
            std::string col;
            while (std::getline(cols, col, ',')) h.columns.push_back(col);
            break;
        }
        const auto colon = line.find(": ");
        if (colon == std::string::npos) continue;
        const std::string key = line.substr(2, colon - 2);
        const std::string value = line.substr(colon + 2);
        if (key == "newman-lab-csv-version") {
            try {
                h.format_version = std::stoi(value);
            } catch (const std::exception&) {
                throw ConfigError("csv: malformed format version '" + value + "'");
            }
            have_version = true;
        } else if (key == "kind") {
            h.kind = value;
        } else if (key == "config") {
            h.config = value;
        }
    }
    if (!have_version) throw ConfigError("csv: missing format version tag");
    if (h.format_version != kFormatVersion)
        throw ConfigError("csv: unsupported format version " + std::to_string(h.format_version));
    return h;
}

}  // namespace newman
