// JSON config ingestion (strict: unknown keys are errors) and the versioned
// CSV format shared by every command output. Schemas: docs/formats.md.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "newman/extremal.hpp"
#include "newman/generators.hpp"
#include "newman/metrics.hpp"
#include "newman/phase_opt.hpp"
#include "newman/spectral.hpp"

namespace newman {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kToolName = "newman_lab";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Malformed or semantically invalid configuration.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Throws ConfigError naming the first key of `obj` not in `allowed`.
void require_known_keys(const json& obj, std::string_view context,
                        std::initializer_list<std::string_view> allowed);

json parse_config(std::string_view text);

FunctionDescriptor descriptor_from_json(const json& j);
json to_json(const FunctionDescriptor& d);

EnsembleSpec ensemble_spec_from_json(const json& j);
json to_json(const EnsembleSpec& spec);

PipelineSettings pipeline_from_json(const json& j);
json to_json(const PipelineSettings& p);

ObjectiveSettings objective_settings_from_json(const json& j);
json to_json(const ObjectiveSettings& s);

OptimizerOptions optimizer_options_from_json(const json& j);
json to_json(const OptimizerOptions& o);

InitSpec init_spec_from_json(const json& j);
json to_json(const InitSpec& init);

json to_json(const L1Report& r);
json to_json(const CrestReport& r);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Writes the "#"-prefixed provenance header followed by an RFC-4180 body.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::string_view kind, const json& config, const json& effective,
              std::span<const std::string> columns);

    CsvWriter& field(std::string_view s);
    CsvWriter& field(double v);
    CsvWriter& field(std::uint64_t v);
    void end_row();

private:
    void separator();

    std::ostream& os_;
    bool row_started_ = false;
};

/// Parsed header of a CSV produced by CsvWriter.
struct CsvHeader {
    int format_version = 0;
    std::string kind;
    std::string config;
    std::vector<std::string> columns;
};

/// Reads the header lines of `text`; throws ConfigError when the version tag
/// is missing or differs from kFormatVersion.
CsvHeader read_csv_header(std::string_view text);

std::string quote_csv(std::string_view s);

}  // namespace newman
