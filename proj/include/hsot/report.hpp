#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hsot/experiments.hpp"

namespace hsot {

inline constexpr const char* kToolVersion = "0.1.0";

// Fully resolved experiment configuration; parse_config fills defaults so two
// configs compare equal iff their runs are identical.
struct ExperimentConfig {
    std::string experiment;  // counterexample | cap | blowup | concentration |
                             // rigidity | metric | sinkhorn-crosscheck
    int n = 2;
    std::string family = "gaussian_like";  // concentration cap base
    double beta = 1.0;
    std::string potential = "quadratic";
    double epsilon = 1.0;             // tempered base temperature (concentration)
    std::vector<double> epsilons;     // blowup temperature grid
    double rho = kHalfPi;             // concentration cap radius
    std::vector<double> radii;        // cap experiment radii
    std::vector<double> r_grid;       // concentration audit radii (empty = auto)
    int grid_size = 4096;
    long long count = 0;              // per-experiment meaning, 0 = default
    double reg_final = 1e-3;
    double tol = 0.0;                 // 0 = per-experiment default
    double growth_threshold = 10.0;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    bool plots = true;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates a JSON config document. Unknown keys and parameters
/// outside the preconditions of the dispatched experiment raise ConfigError
/// naming the field. Defaults are filled deterministically.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);

/// Round-trip companion of parse_config: parse_config(serialize_config(c)) == c.
nlohmann::json serialize_config(const ExperimentConfig& config);

struct ConcentrationBundle {
    ConcentrationResult audit;
    McConcentrationResult mc;
};

using ExperimentPayload =
    std::variant<std::monostate, CounterexampleResult, CapResult, BlowupResult,
                 ConcentrationBundle, RigiditySuiteResult, MetricEquivalenceResult,
                 SinkhornCrosscheckResult>;

struct RunReport {
    ExperimentConfig config;
    std::string version = kToolVersion;
    ExperimentPayload payload;
    std::vector<Assertion> assertions;
    // Wall-clock diagnostics; printed, never serialized, so identical runs
    // produce identical report files.
    double duration_seconds = 0.0;
};

/// Runs the configured experiment and aggregates its assertions.
RunReport dispatch_run(const ExperimentConfig& config);

/// Deterministic JSON document for report.json (configuration echo, records,
/// assertions, version; non-finite numbers become strings).
nlohmann::json report_to_json(const RunReport& report);

/// Writes report.json plus per-sweep CSV files and optional SVG plots.
/// Outputs are byte-identical for identical configs.
void write_outputs(const RunReport& report, const std::filesystem::path& dir);

bool all_passed(const RunReport& report);

}  // namespace hsot
