/*
   Copyright 2026 The Pathfinder Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "pathfinder/cli.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pathfinder/anatomy.hpp"
#include "pathfinder/baselines.hpp"
#include "pathfinder/errors.hpp"
#include "pathfinder/evaluation.hpp"
#include "pathfinder/ipi.hpp"
#include "pathfinder/netgen.hpp"
#include "pathfinder/simulator.hpp"

namespace pathfinder {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

// Fixed file names inside a run directory.
constexpr const char* kNetworkFile = "network.txt";
constexpr const char* kSurveillanceFile = "surveillance.csv";
constexpr const char* kTruthFile = "truth.csv";
constexpr const char* kCasesFile = "cases.jsonl";
constexpr const char* kIpiTreeFile = "tree_ipi.csv";
constexpr const char* kIpiReportFile = "ipi_report.json";
constexpr const char* kEvaluationFile = "evaluation.json";
constexpr const char* kSeriesFile = "series.csv";
constexpr const char* kClassFile = "class_accuracy.csv";
constexpr const char* kWrongFile = "wrong_cases.csv";
constexpr const char* kReportFile = "report.json";
constexpr const char* kManifestFile = "manifest.json";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path require_file(const fs::path& dir, const char* name) {
    fs::path p = dir / name;
    if (!fs::is_regular_file(p)) throw UsageError("missing input file " + p.string());
    return p;
}

std::string baseline_file(const std::string& method) { return "tree_" + method + ".csv"; }

struct Step {
    std::string command;
    Json config = Json::object();
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, std::string>> outputs;  // name, content
};

/// Writes the step's outputs, then records it in the manifest. Steps of the
/// same command are replaced, and steps whose files changed are dropped.
void commit(const fs::path& dir, const Step& step) {
    fs::create_directories(dir);
    for (const auto& [name, content] : step.outputs) write_file(dir / name, content);

    Json manifest;
    const fs::path path = dir / kManifestFile;
    if (fs::is_regular_file(path)) {
        try {
            manifest = Json::parse(read_file(path));
        } catch (const std::exception&) {
            manifest = Json::object();
        }
    }
    Json steps = Json::array();
    auto current = [&](const Json& files) {
        for (const auto& [name, digest] : files.items()) {
            if (!fs::is_regular_file(dir / name) || file_digest(dir / name) != digest.get<std::string>()) return false;
        }
        return true;
    };
    if (manifest.contains("steps")) {
        for (const Json& s : manifest["steps"]) {
            if (s.value("command", "") == step.command) continue;
            if (current(s.value("inputs", Json::object())) && current(s.value("outputs", Json::object()))) {
                steps.push_back(s);
            }
        }
    }
    Json entry;
    entry["command"] = step.command;
    entry["config"] = step.config;
    entry["inputs"] = Json::object();
    for (const std::string& name : step.inputs) entry["inputs"][name] = file_digest(dir / name);
    entry["outputs"] = Json::object();
    for (const auto& [name, content] : step.outputs) entry["outputs"][name] = file_digest(dir / name);
    steps.push_back(entry);

    Json out;
    out["tool"] = "pathfinder";
    out["version"] = kVersion;
    out["components"] = {{"netgen", kVersion}, {"simulator", kVersion}, {"anatomy", kVersion}, {"estimators", kVersion},
                         {"ipi", kVersion},    {"baselines", kVersion}, {"evaluation", kVersion}};
    out["steps"] = steps;
    write_file(path, out.dump(2) + "\n");
}

struct SimFlags {
    double beta = 0.3;
    NodeId seed_node = 0;
    Count seed_count = 5;
    int ticks = 200;
    std::string stop = "all";
    std::uint64_t rng = 1;

    void add(CLI::App* app) {
        app->add_option("--beta", beta, "Infection rate per tick")->capture_default_str()->check(CLI::Range(0.0, 1e6));
        app->add_option("--seed-node", seed_node, "Initially infected node")->capture_default_str();
        app->add_option("--seed-count", seed_count, "Initially infected persons")->capture_default_str();
        app->add_option("--ticks", ticks, "Tick limit")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--stop", stop, "Stop when all nodes are infected or at the tick limit")
            ->capture_default_str()
            ->check(CLI::IsMember({"all", "ticks"}));
        app->add_option("--rng", rng, "Random seed")->capture_default_str()->envname("PATHFINDER_RNG");
    }

    SimConfig config() const {
        SimConfig c;
        c.beta = beta;
        c.seed_node = seed_node;
        c.seed_infected = seed_count;
        c.max_ticks = ticks;
        c.stop_rule = stop == "all" ? StopRule::AllInfected : StopRule::TickLimit;
        c.rng_seed = rng;
        return c;
    }

    Json json() const {
        return {{"beta", beta}, {"seed_node", seed_node}, {"seed_count", seed_count},
                {"ticks", ticks}, {"stop", stop},         {"rng", rng}};
    }
};

NodeId first_positive(const SurveillanceSeries& series) {
    if (series.ticks() == 0) return -1;
    for (NodeId i = 0; i < static_cast<NodeId>(series.node_count()); ++i) {
        if (series.infected(0, i) > 0) return i;
    }
    return -1;
}

Json tree_score_json(const TreeScore& s) {
    Json classes = Json::object();
    for (const auto& [cls, t] : s.per_class) {
        classes[std::string(to_string(cls))] = {{"correct", t.correct}, {"total", t.total}, {"accuracy", t.accuracy()}};
    }
    return {{"whole", s.whole.accuracy()},   {"whole_total", s.whole.total}, {"early", s.early.accuracy()},
            {"early_total", s.early.total},  {"per_class", classes}};
}

} // namespace

std::string file_digest(const fs::path& path) {
    const std::string bytes = read_file(path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Metapopulation epidemic simulation and invasion pathway identification", "pathfinder"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "INI/TOML file of option values; command-line flags take precedence");

    std::string dir = ".";
    int jobs = 1;
    app.add_option("--dir", dir, "Run directory")->capture_default_str();
    app.add_option("--jobs", jobs, "Worker threads")->capture_default_str()->envname("PATHFINDER_JOBS")->check(CLI::PositiveNumber);

    // generate
    NetGenConfig gen;
    std::string population_mode = "uniform";
    auto* generate = app.add_subcommand("generate", "Build a BA metapopulation network");
    generate->add_option("--nodes", gen.node_count, "Subpopulations")->capture_default_str();
    generate->add_option("--m", gen.attachment_m, "BA attachment edges per new node")->capture_default_str();
    generate->add_option("--C", gen.mobility_constant, "Total mobility rate per node")->capture_default_str();
    generate->add_option("--theta", gen.mean_theta, "Mean rate exponent")->capture_default_str();
    generate->add_option("--theta-var", gen.theta_var, "Rate exponent variance")->capture_default_str();
    generate->add_option("--population", gen.initial_population, "Persons per node")->capture_default_str();
    generate->add_option("--population-mode", population_mode, "uniform or traffic-scaled populations")
        ->capture_default_str()
        ->check(CLI::IsMember({"uniform", "traffic"}));
    generate->add_option("--population-exponent", gen.population_exponent, "N ~ T^lambda in traffic mode")
        ->capture_default_str();
    generate->add_option("--rng", gen.seed, "Random seed")->capture_default_str()->envname("PATHFINDER_RNG");

    // simulate
    SimFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Run one SI epidemic on the network");
    sim.add(simulate);

    // identify
    IpiOptions ipi;
    bool no_fast_paths = false;
    auto* identify = app.add_subcommand("identify", "Identify invasion pathways from surveillance data");
    identify->add_option("--max-solutions", ipi.max_solutions, "Joint enumeration limit per case")->capture_default_str();
    identify->add_flag("--no-fast-paths", no_fast_paths, "Always enumerate, even when a theorem settles the case");

    // baseline
    std::string method;
    int runs = 100;
    SimFlags base_sim;
    auto* baseline = app.add_subcommand("baseline", "Build an ARR, EFF or MCML tree");
    baseline->add_option("--method", method, "arr, eff or mcml")->required()->check(CLI::IsMember({"arr", "eff", "mcml"}));
    baseline->add_option("--runs", runs, "MCML simulations")->capture_default_str()->check(CLI::PositiveNumber);
    base_sim.add(baseline);

    // evaluate
    ExperimentConfig exp;
    std::vector<std::string> methods{"ipi", "arr", "eff", "mcml"};
    SimFlags eval_sim;
    bool eval_no_fast = false;
    auto* evaluate = app.add_subcommand("evaluate", "Score all methods over independent realizations");
    evaluate->add_option("--methods", methods, "Comma-separated methods")->delimiter(',')->capture_default_str()
        ->check(CLI::IsMember({"ipi", "arr", "eff", "mcml"}));
    evaluate->add_option("--realizations", exp.realizations, "Independent epidemics")->capture_default_str()
        ->check(CLI::PositiveNumber);
    evaluate->add_option("--runs", exp.mcml_runs, "MCML simulations")->capture_default_str()->check(CLI::PositiveNumber);
    evaluate->add_option("--early-cutoff", exp.early_cutoff, "Infected nodes counted as early stage (0: by size)")
        ->capture_default_str();
    evaluate->add_option("--max-solutions", exp.ipi.max_solutions, "Joint enumeration limit per case")->capture_default_str();
    evaluate->add_flag("--no-fast-paths", eval_no_fast, "Always enumerate");
    eval_sim.add(evaluate);

    // report
    std::size_t report_cutoff = 0;
    auto* report = app.add_subcommand("report", "Score every tree in the run directory against the ground truth");
    report->add_option("--early-cutoff", report_cutoff, "Infected nodes counted as early stage (0: by size)")
        ->capture_default_str();

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream cli_out, cli_err;
        const int code = app.exit(e, cli_out, cli_err);
        out << cli_out.str();
        err << cli_err.str();
        return code == 0 ? kExitOk : kExitUsage;
    }

    const fs::path run_dir(dir);
    try {
        if (*generate) {
            gen.population_mode = population_mode == "uniform" ? PopulationMode::Uniform : PopulationMode::TrafficScaled;
            check_config(gen);
            const MetapopNetwork network = generate_network(gen);
            Step step{"generate", {{"nodes", gen.node_count}, {"m", gen.attachment_m}, {"C", gen.mobility_constant},
                                   {"theta", gen.mean_theta}, {"theta_var", gen.theta_var},
                                   {"population", gen.initial_population}, {"population_mode", population_mode},
                                   {"population_exponent", gen.population_exponent}, {"rng", gen.seed}},
                      {}, {{kNetworkFile, format_network(network)}}};
            commit(run_dir, step);
            out << "network: " << network.size() << " nodes, " << network.edge_count() << " directed edges\n";
        } else if (*simulate) {
            const MetapopNetwork network = load_network(require_file(run_dir, kNetworkFile));
            const SimResult result = run(network, sim.config());
            Step step{"simulate", sim.json(), {kNetworkFile},
                      {{kSurveillanceFile, format_surveillance(result.series)}, {kTruthFile, format_truth(result.truth)}}};
            commit(run_dir, step);
            out << "simulated " << result.series.ticks() << " ticks, " << result.truth.first_arrivals.size()
                << " first arrivals\n";
            if (result.clamped_reactions) {
                err << "warning: infection probability clamped to 1 in " << result.clamped_reactions << " reactions\n";
            }
        } else if (*identify) {
            ipi.fast_paths = !no_fast_paths;
            const MetapopNetwork network = load_network(require_file(run_dir, kNetworkFile));
            const SurveillanceSeries series = load_surveillance(require_file(run_dir, kSurveillanceFile), network.size());
            if (auto v = validate(series, network); !v.empty()) {
                throw DataInconsistencyError("surveillance: " + v.front().rule + " (" + v.front().detail + ")");
            }
            const IpiRun result = identify_pathways(series, network, ipi);
            std::size_t degenerate = 0;
            for (std::size_t k = 0; k < result.results.size(); ++k) {
                if (result.results[k].resolution != Resolution::Degenerate) continue;
                ++degenerate;
                err << "case " << k << " skipped: " << result.results[k].diagnostic << "\n";
            }
            Step step{"identify", {{"max_solutions", ipi.max_solutions}, {"fast_paths", ipi.fast_paths}},
                      {kNetworkFile, kSurveillanceFile},
                      {{kCasesFile, format_case_dump(result.cases, result.views)},
                       {kIpiTreeFile, format_ipi_tree(result.tree)},
                       {kIpiReportFile, format_ipi_report(result)}}};
            commit(run_dir, step);
            out << result.events.size() << " events, " << result.cases.size() << " cases, "
                << result.tree.edges.size() << " pathway edges";
            if (degenerate) out << ", " << degenerate << " degenerate cases";
            out << "\n";
        } else if (*baseline) {
            const MetapopNetwork network = load_network(require_file(run_dir, kNetworkFile));
            const SimConfig sc = base_sim.config();
            if (sc.seed_node < 0 || static_cast<std::size_t>(sc.seed_node) >= network.size()) {
                throw ConfigError("seed node " + std::to_string(sc.seed_node) + " is not a network node");
            }
            PathwayTree tree;
            std::string params;
            Json config = {{"method", method}, {"seed_node", sc.seed_node}};
            if (method == "arr") {
                const double alpha = arr_alpha(network);
                tree = arr_tree(network, sc.seed_node, alpha);
                params = "alpha=" + format_double(alpha);
                config["alpha"] = alpha;
            } else if (method == "eff") {
                tree = eff_tree(network, sc.seed_node);
            } else {
                tree = mcml_tree(network, sc, runs, jobs);
                params = "runs=" + std::to_string(runs) + " beta=" + format_double(sc.beta) + " rng=" + std::to_string(sc.rng_seed);
                config = base_sim.json();
                config["method"] = method;
                config["runs"] = runs;
            }
            Step step{"baseline-" + method, config, {kNetworkFile},
                      {{baseline_file(method), format_tree(tree, method, params)}}};
            commit(run_dir, step);
            out << method << " tree: " << tree.edges.size() << " edges\n";
        } else if (*evaluate) {
            const MetapopNetwork network = load_network(require_file(run_dir, kNetworkFile));
            exp.sim = eval_sim.config();
            exp.methods = methods;
            exp.jobs = jobs;
            exp.ipi.fast_paths = !eval_no_fast;
            const ExperimentReport rep = run_experiment(network, exp);
            Json config = eval_sim.json();
            config["methods"] = methods;
            config["realizations"] = exp.realizations;
            config["runs"] = exp.mcml_runs;
            config["early_cutoff"] = rep.early_cutoff;
            config["max_solutions"] = exp.ipi.max_solutions;
            config["fast_paths"] = exp.ipi.fast_paths;
            Step step{"evaluate", config, {kNetworkFile},
                      {{kEvaluationFile, format_aggregate(rep)},
                       {kSeriesFile, format_series(rep)},
                       {kClassFile, format_class_accuracy(rep)},
                       {kWrongFile, format_wrong_cases(rep.misidentified)}}};
            commit(run_dir, step);
            for (const std::string& m : methods) {
                double whole = 0.0;
                int counted = 0;
                for (const auto& r : rep.realizations) {
                    if (r.no_spread) continue;
                    whole += r.scores.at(m).whole.accuracy();
                    ++counted;
                }
                out << m << ": mean accuracy " << (counted ? whole / counted : 0.0) << "\n";
            }
        } else if (*report) {
            const MetapopNetwork network = load_network(require_file(run_dir, kNetworkFile));
            const SurveillanceSeries series = load_surveillance(require_file(run_dir, kSurveillanceFile), network.size());
            const GroundTruthLog truth = parse_truth(read_file(require_file(run_dir, kTruthFile)));
            std::vector<InvasionCase> cases;
            for (const InvasionEvent& event : detect_events(series, network)) {
                for (InvasionCase& c : invasion_partition(event, network)) cases.push_back(std::move(c));
            }
            const CaseIndex index = index_cases(cases);
            const NodeId root = first_positive(series);
            const std::size_t cutoff = report_cutoff ? report_cutoff : default_early_cutoff(network.size());

            Json summary;
            summary["nodes"] = network.size();
            summary["ticks"] = series.ticks();
            summary["cases"] = cases.size();
            summary["truth_edges"] = truth_edges(truth).size();
            summary["early_cutoff"] = cutoff;
            summary["trees"] = Json::object();
            std::vector<std::string> inputs{kNetworkFile, kSurveillanceFile, kTruthFile};
            for (const std::string m : {"ipi", "arr", "eff", "mcml"}) {
                const std::string name = m == "ipi" ? kIpiTreeFile : baseline_file(m);
                if (!fs::is_regular_file(run_dir / name)) continue;
                const PathwayTree tree = parse_tree(read_file(run_dir / name));
                Json entry = tree_score_json(score_tree(tree, truth, network.size(), root, cutoff, index));
                entry["edges"] = tree.edges.size();
                if (m != "ipi") entry["arborescence_violation"] = arborescence_violation(tree, network);
                summary["trees"][m] = entry;
                inputs.push_back(name);
            }
            if (fs::is_regular_file(run_dir / kIpiReportFile)) {
                const Json ipi_report = Json::parse(read_file(run_dir / kIpiReportFile));
                summary["ipi_resolutions"] = ipi_report.value("resolutions", Json::object());
                inputs.push_back(kIpiReportFile);
            }
            Step step{"report", {{"early_cutoff", cutoff}}, inputs, {{kReportFile, summary.dump(2) + "\n"}}};
            commit(run_dir, step);
            for (const auto& [m, entry] : summary["trees"].items()) {
                out << m << ": accuracy " << entry["whole"].get<double>() << ", early " << entry["early"].get<double>()
                    << "\n";
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: line " << e.line() << ": " << e.what() << "\n";
        return kExitData;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const DataInconsistencyError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace pathfinder
