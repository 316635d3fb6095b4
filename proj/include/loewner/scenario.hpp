#pragma once

// Scenario runner behind the loewner-lab CLI: a structured config (JSON or
// TOML) names an operation, its field/chain/map inputs, an interval and a
// sampling plan; the result is a JSON report plus optional CSV of samples.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "loewner/errors.hpp"
#include "loewner/sampling.hpp"

namespace loewner::scenario {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "loewner-lab";
inline constexpr const char* kToolVersion = "0.1.0";

/// Config that does not match the schema; what() names the offending field path.
class SchemaError : public InputError {
public:
    SchemaError(const std::string& path, const std::string& what)
        : InputError(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }
    const char* kind() const noexcept override { return "schema"; }

private:
    std::string path_;
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

const std::vector<std::string>& operations();

/// Parses config text; TOML when `toml` is set, JSON otherwise.
Json parse_config(const std::string& text, bool toml);
/// Reads a config file; the format follows the extension (.toml or JSON).
Json load_config(const std::string& path);

/// Sampling plan from the optional "grid" section (SchemaError on bad fields).
SamplingPlan plan_from_config(const Json& config);

struct RunOptions {
    bool force = false;
    std::optional<std::uint64_t> seed;
    /// Overrides the operation named in the config when non-empty.
    std::string operation;
};

struct Report {
    Json json;
    int exit_code = 2;  ///< 0 pass, 1 fail, 2 error
    std::vector<std::string> csv_header;
    std::vector<std::vector<double>> csv_rows;
};

/// Validates and runs a scenario. Schema violations throw SchemaError; errors
/// raised while running are embedded in the report with exit code 2.
Report run_scenario(const Json& config, const RunOptions& opt = {});

/// Writes the JSON report; IoError if the path cannot be written.
void emit_report(const Report& report, const std::string& path);
/// Writes the per-sample CSV (values with 17 significant digits).
void emit_csv(const Report& report, const std::string& path);
/// One-paragraph plain-text summary.
std::string summary(const Report& report);

}  // namespace loewner::scenario
