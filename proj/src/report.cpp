#include "hsot/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "hsot/errors.hpp"
#include "hsot/svg.hpp"

namespace hsot {

namespace {

using nlohmann::json;

const std::set<std::string> kExperiments = {
    "counterexample", "cap", "blowup", "concentration",
    "rigidity",       "metric", "sinkhorn-crosscheck"};

const std::set<std::string> kKnownKeys = {
    "experiment", "n",      "family",   "beta",  "potential",        "epsilon",
    "epsilons",   "rho",    "radii",    "r_grid", "grid_size",       "count",
    "reg_final",  "tol",    "growth_threshold", "seed", "output_dir", "plots"};

/// 17 significant digits, scientific: lossless for doubles.
std::string csv_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

/// Doubles that JSON cannot carry become strings ("inf", "-inf", "nan").
json json_num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json json_num_array(const std::vector<double>& vs) {
    json arr = json::array();
    for (double v : vs) arr.push_back(json_num(v));
    return arr;
}

template <typename T>
T get_field(const json& doc, const std::string& key, const T& fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

void fail_field(const std::string& key, const std::string& why) {
    throw ConfigError("config field '" + key + "': " + why);
}

PotentialKind parse_potential(const std::string& name) {
    if (name == "quadratic") return PotentialKind::Quadratic;
    if (name == "linear") return PotentialKind::Linear;
    fail_field("potential", "must be 'quadratic' or 'linear'");
    return PotentialKind::Quadratic;
}

RadialDensitySpec concentration_target(const ExperimentConfig& c) {
    RadialDensitySpec base;
    if (c.family == "uniform") {
        base = RadialDensitySpec::uniform(c.n);
    } else if (c.family == "gaussian_like") {
        base = RadialDensitySpec::gaussian_like(c.n, c.beta);
    } else if (c.family == "tempered") {
        base = RadialDensitySpec::tempered(c.n, parse_potential(c.potential), c.epsilon);
    } else {
        fail_field("family", "must be 'uniform', 'gaussian_like' or 'tempered'");
    }
    return RadialDensitySpec::cap(base, c.rho);
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
    for (const auto& item : doc.items()) {
        if (!kKnownKeys.count(item.key()))
            throw ConfigError("unknown config field '" + item.key() + "'");
    }

    ExperimentConfig c;
    c.experiment = get_field<std::string>(doc, "experiment", "");
    if (!kExperiments.count(c.experiment))
        fail_field("experiment", "'" + c.experiment + "' is not a known experiment");

    c.n = get_field<int>(doc, "n", 2);
    c.family = get_field<std::string>(doc, "family", c.family);
    c.beta = get_field<double>(doc, "beta", c.beta);
    c.potential = get_field<std::string>(doc, "potential", c.potential);
    c.epsilon = get_field<double>(doc, "epsilon", c.epsilon);
    c.epsilons = get_field<std::vector<double>>(doc, "epsilons", {});
    c.rho = get_field<double>(doc, "rho", c.rho);
    c.radii = get_field<std::vector<double>>(doc, "radii", {});
    c.r_grid = get_field<std::vector<double>>(doc, "r_grid", {});
    c.grid_size = get_field<int>(doc, "grid_size", c.grid_size);
    c.count = get_field<long long>(doc, "count", 0);
    c.reg_final = get_field<double>(doc, "reg_final", c.reg_final);
    c.tol = get_field<double>(doc, "tol", 0.0);
    c.growth_threshold = get_field<double>(doc, "growth_threshold", c.growth_threshold);
    c.seed = get_field<std::uint64_t>(doc, "seed", c.seed);
    c.output_dir = get_field<std::string>(doc, "output_dir", c.output_dir);
    c.plots = get_field<bool>(doc, "plots", c.plots);

    // Generic validation.
    if (c.n < 2) fail_field("n", "must be >= 2");
    if (!(c.beta > 0.0)) fail_field("beta", "must be > 0");
    if (!(c.epsilon > 0.0)) fail_field("epsilon", "must be > 0");
    parse_potential(c.potential);
    if (c.grid_size < 64) fail_field("grid_size", "must be >= 64");
    if (!(c.rho > 0.0) || c.rho > kHalfPi + 1e-12) fail_field("rho", "must lie in (0, pi/2]");
    if (!(c.reg_final > 0.0)) fail_field("reg_final", "must be > 0");
    if (c.tol < 0.0) fail_field("tol", "must be >= 0");
    if (c.count < 0) fail_field("count", "must be >= 0");

    // Per-experiment defaults and precondition checks.
    if (c.experiment == "blowup") {
        if (c.epsilons.empty()) c.epsilons = default_blowup_epsilons();
        for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
            if (!(c.epsilons[i] > 0.0)) fail_field("epsilons", "entries must be > 0");
            if (i > 0 && !(c.epsilons[i] < c.epsilons[i - 1]))
                fail_field("epsilons", "entries must be strictly decreasing");
        }
        if (c.grid_size < 1024) fail_field("grid_size", "blowup needs grid_size >= 1024");
    }
    if (c.experiment == "cap") {
        if (c.radii.empty()) c.radii = default_cap_radii();
        for (std::size_t i = 0; i < c.radii.size(); ++i) {
            if (!(c.radii[i] > 0.0) || c.radii[i] > kHalfPi + 1e-12)
                fail_field("radii", "entries must lie in (0, pi/2]");
            if (i > 0 && !(c.radii[i] > c.radii[i - 1]))
                fail_field("radii", "entries must be strictly increasing");
        }
    }
    if (c.experiment == "concentration") {
        for (double r : c.r_grid)
            if (!(r > 0.0)) fail_field("r_grid", "entries must be > 0");
        if (c.count == 0) c.count = 100000;
        if (c.count < 1000) fail_field("count", "concentration needs count >= 1000");
    }
    if (c.experiment == "rigidity") {
        if (c.count == 0) c.count = 10000;
        if (c.grid_size < 128) fail_field("grid_size", "rigidity needs grid_size >= 128");
    }
    if (c.experiment == "metric") {
        if (c.count == 0) c.count = 100000;
        if (c.count < 100) fail_field("count", "metric needs count >= 100");
    }
    if (c.experiment == "sinkhorn-crosscheck") {
        if (c.n != 2) fail_field("n", "sinkhorn-crosscheck runs on S^2 only");
        if (c.count == 0) c.count = 2048;
        if (c.count < 16 || c.count > 4096)
            fail_field("count", "sinkhorn-crosscheck needs count in [16, 4096]");
        if (c.tol == 0.0) c.tol = 1e-7;
    }
    return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config document: ") + e.what());
    }
    return parse_config(doc);
}

json serialize_config(const ExperimentConfig& c) {
    json doc;
    doc["experiment"] = c.experiment;
    doc["n"] = c.n;
    doc["family"] = c.family;
    doc["beta"] = c.beta;
    doc["potential"] = c.potential;
    doc["epsilon"] = c.epsilon;
    doc["epsilons"] = c.epsilons;
    doc["rho"] = c.rho;
    doc["radii"] = c.radii;
    doc["r_grid"] = c.r_grid;
    doc["grid_size"] = c.grid_size;
    doc["count"] = c.count;
    doc["reg_final"] = c.reg_final;
    doc["tol"] = c.tol;
    doc["growth_threshold"] = c.growth_threshold;
    doc["seed"] = c.seed;
    doc["output_dir"] = c.output_dir;
    doc["plots"] = c.plots;
    return doc;
}

RunReport dispatch_run(const ExperimentConfig& c) {
    RunReport report;
    report.config = c;
    const auto started = std::chrono::steady_clock::now();

    try {
        if (c.experiment == "counterexample") {
            auto r = run_counterexample(c.beta, c.grid_size, c.n);
            report.assertions = r.assertions;
            report.payload = std::move(r);
        } else if (c.experiment == "cap") {
            auto r = run_cap_restriction(c.beta, c.radii, c.grid_size, c.n);
            report.assertions = r.assertions;
            report.payload = std::move(r);
        } else if (c.experiment == "blowup") {
            auto r = run_blowup(parse_potential(c.potential), c.epsilons, c.grid_size, c.n,
                                c.growth_threshold);
            report.assertions = r.assertions;
            report.payload = std::move(r);
        } else if (c.experiment == "concentration") {
            ConcentrationBundle bundle{
                run_concentration_audit(concentration_target(c), c.r_grid, c.grid_size),
                run_concentration_mc(c.n, static_cast<int>(c.count), {}, c.seed)};
            report.assertions = bundle.audit.assertions;
            report.assertions.insert(report.assertions.end(), bundle.mc.assertions.begin(),
                                     bundle.mc.assertions.end());
            report.payload = std::move(bundle);
        } else if (c.experiment == "rigidity") {
            auto r = run_rigidity_suite(c.grid_size, static_cast<int>(c.count), c.tol, c.seed);
            report.assertions = r.assertions;
            report.payload = std::move(r);
        } else if (c.experiment == "metric") {
            auto r = run_metric_equivalence(static_cast<int>(c.count), c.seed);
            report.assertions = r.assertions;
            report.payload = std::move(r);
        } else if (c.experiment == "sinkhorn-crosscheck") {
            auto r = run_sinkhorn_crosscheck(c.beta, static_cast<int>(c.count), c.reg_final,
                                             c.seed, c.grid_size, c.tol);
            report.assertions = r.assertions;
            report.payload = std::move(r);
        } else {
            throw ConfigError("unknown experiment '" + c.experiment + "'");
        }
    } catch (const UsageError& e) {
        // Dispatched preconditions are config-level contract violations.
        throw ConfigError(e.what());
    }

    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

namespace {

json lipschitz_to_json(const LipschitzReport& lip) {
    json j;
    if (lip.lip_formula) j["lip_formula"] = json_num(*lip.lip_formula);
    if (lip.lip_empirical) j["lip_empirical"] = json_num(*lip.lip_empirical);
    if (lip.argmax_location) j["argmax_location"] = json_num(*lip.argmax_location);
    if (lip.witness) {
        j["witness"] = json::array(
            {json_num_array(lip.witness->first.coords()),
             json_num_array(lip.witness->second.coords())});
    }
    return j;
}

struct PayloadJson {
    json operator()(const std::monostate&) const { return json::object(); }

    json operator()(const CounterexampleResult& r) const {
        return json{{"n", r.n},
                    {"beta", r.beta},
                    {"grid_size", r.grid_size},
                    {"lipschitz", lipschitz_to_json(r.lip)}};
    }

    json operator()(const CapResult& r) const {
        json records = json::array();
        for (const CapRecord& rec : r.records)
            records.push_back(json{{"radius", json_num(rec.radius)},
                                   {"map_end", json_num(rec.map_end)},
                                   {"lipschitz", lipschitz_to_json(rec.lip)}});
        json j{{"n", r.n}, {"beta", r.beta}, {"grid_size", r.grid_size},
               {"records", records}};
        if (r.threshold_radius) j["threshold_radius"] = json_num(*r.threshold_radius);
        return j;
    }

    json operator()(const BlowupResult& r) const {
        json records = json::array();
        for (const BlowupRecord& rec : r.records)
            records.push_back(json{{"epsilon", json_num(rec.epsilon)},
                                   {"m", json_num(rec.m)},
                                   {"r_eps", json_num(rec.r_eps)},
                                   {"R_eps", json_num(rec.big_r_eps)},
                                   {"lower_bound", json_num(rec.lower_bound)},
                                   {"lip_formula", json_num(rec.lip_formula)},
                                   {"flagged", rec.flagged}});
        return json{{"n", r.n},
                    {"potential", r.potential == PotentialKind::Quadratic ? "quadratic" : "linear"},
                    {"grid_size", r.grid_size},
                    {"growth_threshold", json_num(r.growth_threshold)},
                    {"records", records}};
    }

    json operator()(const ConcentrationBundle& r) const {
        json audit = json::array();
        for (const ConcentrationRecord& rec : r.audit.records)
            audit.push_back(json{{"r", json_num(rec.r)},
                                 {"lhs", json_num(rec.lhs)},
                                 {"rhs", json_num(rec.rhs)}});
        json mc = json::array();
        for (const McConcentrationRecord& rec : r.mc.records)
            mc.push_back(json{{"t", json_num(rec.t)},
                              {"empirical", json_num(rec.empirical)},
                              {"bound", json_num(rec.bound)}});
        return json{{"n", r.audit.n},
                    {"lip", json_num(r.audit.lip)},
                    {"rho", json_num(r.audit.rho)},
                    {"audit", audit},
                    {"monte_carlo", json{{"count", r.mc.count}, {"records", mc}}}};
    }

    json operator()(const RigiditySuiteResult& r) const {
        json canonical = json::array();
        for (const RigidityCase& rec : r.canonical)
            canonical.push_back(json{{"label", rec.label},
                                     {"classification", to_string(rec.classification)},
                                     {"deviation", json_num(rec.deviation)}});
        return json{{"nodes", r.nodes},
                    {"tol", json_num(r.tol)},
                    {"canonical", canonical},
                    {"random_total", r.random_total},
                    {"identity_count", r.identity_count},
                    {"reflection_count", r.reflection_count},
                    {"rejected_count", r.rejected_count},
                    {"max_passing_deviation", json_num(r.max_passing_deviation)}};
    }

    json operator()(const MetricEquivalenceResult& r) const {
        return json{{"quadruples", r.quadruples},
                    {"violations", r.violations},
                    {"half_angle_geo_ratio_min", json_num(r.half_angle_geo_ratio_min)},
                    {"half_angle_geo_ratio_max", json_num(r.half_angle_geo_ratio_max)},
                    {"half_angle_endpoint_norm", json_num(r.half_angle_endpoint_norm)},
                    {"endpoint_norm", json_num(r.endpoint_norm)},
                    {"euclid_endpoint_ratio", json_num(r.euclid_endpoint_ratio)}};
    }

    json operator()(const SinkhornCrosscheckResult& r) const {
        return json{{"beta", r.beta},
                    {"count", r.count},
                    {"reg_final", json_num(r.reg_final)},
                    {"max_deviation", json_num(r.max_deviation)},
                    {"lip_empirical", json_num(r.lip_empirical)},
                    {"iterations", r.iterations},
                    {"marginal_error", json_num(r.marginal_error)}};
    }
};

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("write_outputs: cannot open " + path.string());
    out << content;
    if (!out) throw NumericalError("write_outputs: write failed for " + path.string());
}

std::string cap_csv(const CapResult& r) {
    std::string s = "radius,lip_formula,argmax_location,map_end\n";
    for (const CapRecord& rec : r.records) {
        s += csv_num(rec.radius) + "," + csv_num(rec.lip.lip_formula.value_or(0.0)) + "," +
             csv_num(rec.lip.argmax_location.value_or(0.0)) + "," + csv_num(rec.map_end) +
             "\n";
    }
    return s;
}

std::string blowup_csv(const BlowupResult& r) {
    std::string s = "epsilon,m,r_eps,R_eps,lower_bound,lip_formula\n";
    for (const BlowupRecord& rec : r.records) {
        if (rec.flagged) continue;
        s += csv_num(rec.epsilon) + "," + csv_num(rec.m) + "," + csv_num(rec.r_eps) + "," +
             csv_num(rec.big_r_eps) + "," + csv_num(rec.lower_bound) + "," +
             csv_num(rec.lip_formula) + "\n";
    }
    return s;
}

std::string concentration_csv(const ConcentrationBundle& r) {
    std::string s = "r,lhs,rhs,lip\n";
    for (const ConcentrationRecord& rec : r.audit.records)
        s += csv_num(rec.r) + "," + csv_num(rec.lhs) + "," + csv_num(rec.rhs) + "," +
             csv_num(r.audit.lip) + "\n";
    return s;
}

std::string concentration_mc_csv(const McConcentrationResult& r) {
    std::string s = "t,empirical,bound\n";
    for (const McConcentrationRecord& rec : r.records)
        s += csv_num(rec.t) + "," + csv_num(rec.empirical) + "," + csv_num(rec.bound) + "\n";
    return s;
}

}  // namespace

json report_to_json(const RunReport& report) {
    json assertions = json::array();
    for (const Assertion& a : report.assertions)
        assertions.push_back(json{{"name", a.name},
                                  {"passed", a.passed},
                                  {"tolerance", json_num(a.tolerance)},
                                  {"detail", a.detail}});
    return json{{"version", report.version},
                {"experiment", report.config.experiment},
                {"config", serialize_config(report.config)},
                {"records", std::visit(PayloadJson{}, report.payload)},
                {"assertions", assertions}};
}

void write_outputs(const RunReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw NumericalError("write_outputs: cannot create " + dir.string());

    write_text_file(dir / "report.json", report_to_json(report).dump(2) + "\n");

    if (const auto* cap = std::get_if<CapResult>(&report.payload)) {
        write_text_file(dir / "cap.csv", cap_csv(*cap));
    } else if (const auto* blowup = std::get_if<BlowupResult>(&report.payload)) {
        write_text_file(dir / "blowup.csv", blowup_csv(*blowup));
        if (report.config.plots) {
            PlotSeries lower{"lower_bound", {}, {}}, lip{"lip_formula", {}, {}};
            for (const BlowupRecord& rec : blowup->records) {
                if (rec.flagged) continue;
                lower.x.push_back(rec.epsilon);
                lower.y.push_back(rec.lower_bound);
                lip.x.push_back(rec.epsilon);
                lip.y.push_back(rec.lip_formula);
            }
            write_text_file(dir / "blowup.svg",
                            render_line_chart("Lipschitz blow-up", "epsilon",
                                              "constant", {lower, lip}, true, true));
        }
    } else if (const auto* conc = std::get_if<ConcentrationBundle>(&report.payload)) {
        write_text_file(dir / "concentration.csv", concentration_csv(*conc));
        write_text_file(dir / "concentration_mc.csv", concentration_mc_csv(conc->mc));
        if (report.config.plots) {
            PlotSeries lhs{"lhs", {}, {}}, rhs{"rhs", {}, {}};
            for (const ConcentrationRecord& rec : conc->audit.records) {
                lhs.x.push_back(rec.r);
                lhs.y.push_back(rec.lhs);
                rhs.x.push_back(rec.r);
                rhs.y.push_back(rec.rhs);
            }
            write_text_file(dir / "concentration.svg",
                            render_line_chart("Boundary concentration audit", "r", "mass",
                                              {lhs, rhs}, false, false));
        }
    }
}

bool all_passed(const RunReport& report) { return all_passed(report.assertions); }

}  // namespace hsot
