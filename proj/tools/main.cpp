// halfsphere-ot: runs one experiment from a JSON config and writes a
// reproducible report (report.json, per-sweep CSVs, SVG plots).
//
// Exit codes: 0 success, 1 invariant violation, 2 config error,
// 3 numerical or I/O failure.

#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsot/errors.hpp"
#include "hsot/report.hpp"

namespace {

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hsot::ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::exception& e) {
        throw hsot::ConfigError("malformed config document: " + std::string(e.what()));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal-transport experiments on the upper half-sphere"};
    app.set_version_flag("--version", hsot::kToolVersion);

    std::string experiment;
    app.add_option("experiment", experiment,
                   "counterexample | cap | blowup | concentration | rigidity | metric | "
                   "sinkhorn-crosscheck")
        ->required();
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");
    std::string out_dir;
    app.add_option("--out", out_dir, "output directory (default from config)");
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "RNG seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        nlohmann::json doc = nlohmann::json::object();
        if (!config_path.empty()) doc = load_config_file(config_path);
        if (doc.contains("experiment") &&
            doc.at("experiment").get<std::string>() != experiment)
            throw hsot::ConfigError("config file names experiment '" +
                                    doc.at("experiment").get<std::string>() +
                                    "' but the command line asked for '" + experiment + "'");
        doc["experiment"] = experiment;
        if (!out_dir.empty()) doc["output_dir"] = out_dir;
        if (seed) doc["seed"] = *seed;

        const hsot::ExperimentConfig config = hsot::parse_config(doc);
        const hsot::RunReport report = hsot::dispatch_run(config);
        hsot::write_outputs(report, config.output_dir);

        for (const hsot::Assertion& a : report.assertions)
            std::printf("[%s] %s: %s\n", a.passed ? "PASS" : "FAIL", a.name.c_str(),
                        a.detail.c_str());
        std::printf("report written to %s (%.2f s)\n", config.output_dir.c_str(),
                    report.duration_seconds);
        return hsot::all_passed(report) ? 0 : 1;
    } catch (const hsot::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const hsot::UsageError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
