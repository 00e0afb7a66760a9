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

#include "pathfinder/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pathfinder/baselines.hpp"
#include "pathfinder/errors.hpp"
#include "pathfinder/parallel.hpp"

namespace pathfinder {

namespace {

const std::vector<std::string> kMethods{"ipi", "arr", "eff", "mcml"};

// MCML simulations must not replay the realizations being scored.
constexpr std::uint64_t kMcmlSalt = 0x4d434d4cull;

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd m;
    if (values.empty()) return m;
    for (double v : values) m.mean += v;
    m.mean /= static_cast<double>(values.size());
    for (double v : values) m.std += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(m.std / static_cast<double>(values.size()));
    return m;
}

NodeId first_positive(const SurveillanceSeries& series) {
    if (series.ticks() == 0) return -1;
    for (NodeId i = 0; i < static_cast<NodeId>(series.node_count()); ++i) {
        if (series.infected(0, i) > 0) return i;
    }
    return -1;
}

} // namespace

std::vector<TruthEdge> truth_edges(const GroundTruthLog& truth) {
    std::vector<TruthEdge> out;
    for (const FirstArrival& a : truth.first_arrivals) {
        for (const SourceCount& s : a.sources) out.push_back({a.tick, s.src, a.node, a.epoch});
    }
    return out;
}

std::vector<NodeId> infection_order(const GroundTruthLog& truth, NodeId root, std::size_t cutoff) {
    std::vector<std::pair<int, NodeId>> arrivals;
    for (const FirstArrival& a : truth.first_arrivals) {
        if (a.epoch == 0 && a.node != root) arrivals.emplace_back(a.tick, a.node);
    }
    std::sort(arrivals.begin(), arrivals.end());
    std::vector<NodeId> order;
    if (root >= 0) order.push_back(root);
    for (const auto& [tick, node] : arrivals) order.push_back(node);
    if (order.size() > cutoff) order.resize(cutoff);
    return order;
}

std::size_t default_early_cutoff(std::size_t node_count) { return node_count <= 500 ? 50 : 300; }

CaseIndex index_cases(std::span<const InvasionCase> cases) {
    CaseIndex index;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        for (NodeId j : cases[k].destinations) index.by_arrival[{cases[k].tick, j}] = k;
        index.classes.push_back(cases[k].cls);
    }
    return index;
}

TreeScore score_tree(const PathwayTree& tree, const GroundTruthLog& truth, std::size_t node_count, NodeId root,
                     std::size_t early_cutoff, const CaseIndex& cases) {
    const auto n = static_cast<NodeId>(node_count);
    std::set<std::tuple<int, NodeId, NodeId>> stamped;
    std::set<std::pair<NodeId, NodeId>> plain;
    for (const PathwayEdge& e : tree.edges) {
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
            throw ValidationError("tree edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                                  " names a node outside the network");
        }
        if (e.tick >= 0) {
            stamped.emplace(e.tick, e.src, e.dst);
        } else {
            plain.emplace(e.src, e.dst);
        }
    }
    const auto early_nodes = infection_order(truth, root, early_cutoff);
    const std::set<NodeId> early(early_nodes.begin(), early_nodes.end());

    TreeScore score;
    for (const TruthEdge& t : truth_edges(truth)) {
        const std::size_t hit = stamped.count({t.tick, t.src, t.dst}) + plain.count({t.src, t.dst}) > 0 ? 1 : 0;
        ++score.whole.total;
        score.whole.correct += hit;
        if (t.epoch == 0 && early.count(t.dst)) {
            ++score.early.total;
            score.early.correct += hit;
        }
        const auto it = cases.by_arrival.find({t.tick, t.dst});
        if (it != cases.by_arrival.end()) {
            Tally& tally = score.per_class[cases.classes[it->second]];
            ++tally.total;
            tally.correct += hit;
        }
    }
    return score;
}

std::vector<CaseOutcome> case_outcomes(const IpiRun& run, const GroundTruthLog& truth) {
    std::map<std::pair<int, NodeId>, std::set<NodeId>> sources;
    for (const TruthEdge& t : truth_edges(truth)) sources[{t.tick, t.dst}].insert(t.src);

    std::vector<CaseOutcome> out;
    for (std::size_t k = 0; k < run.cases.size(); ++k) {
        const InvasionCase& c = run.cases[k];
        const CaseResult& r = run.results[k];
        std::set<std::pair<NodeId, NodeId>> expected;
        for (NodeId j : c.destinations) {
            const auto it = sources.find({c.tick, j});
            if (it == sources.end()) continue;
            for (NodeId i : it->second) expected.emplace(i, j);
        }
        std::set<std::pair<NodeId, NodeId>> identified;
        for (std::size_t e : r.pathway.support) identified.emplace(c.edges[e].src, c.edges[e].dst);

        CaseOutcome o;
        o.case_id = k;
        o.tick = c.tick;
        o.cls = c.cls;
        o.resolution = r.resolution;
        o.correct = r.resolution != Resolution::Degenerate && identified == expected;
        o.solutions = r.pathway.solution_count;
        o.pi = r.report.pi;
        o.entropy = r.report.entropy;
        o.identifiability = r.report.identifiability;
        o.bound_violation = r.report.bound_violation;
        out.push_back(o);
    }
    return out;
}

MisidentificationStats misidentification_stats(const std::vector<std::vector<CaseOutcome>>& per_realization) {
    MisidentificationStats stats;
    for (CaseClass cls : {CaseClass::ManyToOne, CaseClass::ManyToMany}) stats.per_class[cls];
    for (std::size_t r = 0; r < per_realization.size(); ++r) {
        for (const CaseOutcome& o : per_realization[r]) {
            if (o.resolution == Resolution::Degenerate) continue;
            auto it = stats.per_class.find(o.cls);
            if (it == stats.per_class.end()) continue;
            ClassIdentifiability& c = it->second;
            if (o.correct) {
                ++c.correct;
                c.mean_correct += o.identifiability;
            } else {
                ++c.wrong;
                c.mean_wrong += o.identifiability;
                stats.wrong.push_back({static_cast<int>(r), o});
            }
        }
    }
    for (auto& [cls, c] : stats.per_class) {
        if (c.correct) c.mean_correct /= static_cast<double>(c.correct);
        if (c.wrong) c.mean_wrong /= static_cast<double>(c.wrong);
    }
    return stats;
}

RealizationResult evaluate_realization(const MetapopNetwork& network, const SimResult& sim, const IpiRun* ipi,
                                       const std::map<std::string, PathwayTree>& baselines, NodeId root,
                                       std::size_t early_cutoff) {
    RealizationResult r;
    r.ticks = static_cast<int>(sim.series.ticks());
    r.truth_edges = truth_edges(sim.truth).size();
    r.no_spread = r.truth_edges == 0;

    std::vector<InvasionCase> own_cases;
    if (!ipi) {
        for (const InvasionEvent& event : detect_events(sim.series, network)) {
            for (InvasionCase& c : invasion_partition(event, network)) own_cases.push_back(std::move(c));
        }
    }
    const CaseIndex index = index_cases(ipi ? std::span<const InvasionCase>(ipi->cases) : own_cases);

    if (ipi) {
        r.scores["ipi"] = score_tree(ipi->tree, sim.truth, network.size(), root, early_cutoff, index);
        r.cases = case_outcomes(*ipi, sim.truth);
        for (const CaseOutcome& o : r.cases) {
            r.degenerate_cases += o.resolution == Resolution::Degenerate;
            r.bound_violations += o.bound_violation;
        }
    }
    for (const auto& [method, tree] : baselines) {
        r.scores[method] = score_tree(tree, sim.truth, network.size(), root, early_cutoff, index);
    }
    return r;
}

ExperimentReport run_experiment(const MetapopNetwork& network, const ExperimentConfig& config) {
    if (config.realizations < 1) throw ConfigError("need at least one realization");
    for (const std::string& m : config.methods) {
        if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end()) {
            throw ConfigError("unknown method '" + m + "'");
        }
    }
    auto wants = [&](const std::string& m) {
        return std::find(config.methods.begin(), config.methods.end(), m) != config.methods.end();
    };

    ExperimentReport report;
    report.config = config;
    report.early_cutoff = config.early_cutoff ? config.early_cutoff : default_early_cutoff(network.size());
    const NodeId root = config.sim.seed_node;
    if (wants("arr")) report.baseline_trees["arr"] = arr_tree(network, root);
    if (wants("eff")) report.baseline_trees["eff"] = eff_tree(network, root);
    if (wants("mcml")) {
        SimConfig mc = config.sim;
        mc.rng_seed = mix_seed(config.sim.rng_seed, kMcmlSalt);
        report.baseline_trees["mcml"] = mcml_tree(network, mc, config.mcml_runs, config.jobs);
    }

    report.realizations.resize(static_cast<std::size_t>(config.realizations));
    parallel_for(report.realizations.size(), config.jobs, [&](std::size_t k) {
        SimConfig sc = config.sim;
        sc.rng_seed = mix_seed(config.sim.rng_seed, k);
        sc.record_moves = false;
        const SimResult sim = run(network, sc);
        std::optional<IpiRun> ipi;
        double seconds = 0.0;
        if (wants("ipi")) {
            const auto start = std::chrono::steady_clock::now();
            ipi = identify_pathways(sim.series, network, config.ipi);
            seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        RealizationResult r = evaluate_realization(network, sim, ipi ? &*ipi : nullptr, report.baseline_trees,
                                                   first_positive(sim.series), report.early_cutoff);
        r.index = static_cast<int>(k);
        r.seed = sc.rng_seed;
        r.ipi_seconds = seconds;
        report.realizations[k] = std::move(r);
    });

    std::vector<std::vector<CaseOutcome>> outcomes;
    for (const auto& r : report.realizations) outcomes.push_back(r.cases);
    report.misidentified = misidentification_stats(outcomes);
    return report;
}

std::string format_aggregate(const ExperimentReport& report) {
    const ExperimentConfig& c = report.config;
    nlohmann::ordered_json j;
    j["config"] = {{"beta", c.sim.beta},
                   {"seed_node", c.sim.seed_node},
                   {"seed_infected", c.sim.seed_infected},
                   {"max_ticks", c.sim.max_ticks},
                   {"master_seed", c.sim.rng_seed},
                   {"realizations", c.realizations},
                   {"methods", c.methods},
                   {"mcml_runs", c.mcml_runs},
                   {"early_cutoff", report.early_cutoff},
                   {"max_solutions", c.ipi.max_solutions},
                   {"fast_paths", c.ipi.fast_paths}};

    auto& methods = j["methods"] = nlohmann::ordered_json::object();
    for (const std::string& m : c.methods) {
        std::vector<double> whole, early;
        std::map<CaseClass, Tally> classes;
        for (const auto& r : report.realizations) {
            if (r.no_spread) continue;
            const TreeScore& s = r.scores.at(m);
            whole.push_back(s.whole.accuracy());
            early.push_back(s.early.accuracy());
            for (const auto& [cls, t] : s.per_class) classes[cls] += t;
        }
        const MeanStd w = mean_std(whole), e = mean_std(early);
        nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
        for (const auto& [cls, t] : classes) {
            per_class[std::string(to_string(cls))] = {{"correct", t.correct}, {"total", t.total}, {"accuracy", t.accuracy()}};
        }
        methods[m] = {{"whole_mean", w.mean}, {"whole_std", w.std}, {"early_mean", e.mean},
                      {"early_std", e.std},   {"per_class", per_class}};
    }

    auto& reals = j["realizations"] = nlohmann::ordered_json::array();
    for (const auto& r : report.realizations) {
        nlohmann::ordered_json scores = nlohmann::ordered_json::object();
        for (const auto& [m, s] : r.scores) {
            scores[m] = {{"whole", s.whole.accuracy()}, {"early", s.early.accuracy()},
                         {"whole_total", s.whole.total}, {"early_total", s.early.total}};
        }
        reals.push_back({{"realization", r.index},
                         {"seed", r.seed},
                         {"ticks", r.ticks},
                         {"truth_edges", r.truth_edges},
                         {"no_spread", r.no_spread},
                         {"cases", r.cases.size()},
                         {"degenerate_cases", r.degenerate_cases},
                         {"bound_violations", r.bound_violations},
                         {"scores", scores}});
    }

    auto& mis = j["misidentification"] = nlohmann::ordered_json::object();
    for (const auto& [cls, s] : report.misidentified.per_class) {
        mis[std::string(to_string(cls))] = {{"wrong", s.wrong},
                                            {"correct", s.correct},
                                            {"mean_identifiability_wrong", s.mean_wrong},
                                            {"mean_identifiability_correct", s.mean_correct}};
    }
    return j.dump(2) + "\n";
}

std::string format_series(const ExperimentReport& report) {
    std::ostringstream out;
    out << "realization,method,accuracy,early_accuracy\n";
    for (const auto& r : report.realizations) {
        for (const std::string& m : report.config.methods) {
            const TreeScore& s = r.scores.at(m);
            out << r.index << ',' << m << ',' << format_double(s.whole.accuracy()) << ','
                << format_double(s.early.accuracy()) << "\n";
        }
    }
    return out.str();
}

std::string format_class_accuracy(const ExperimentReport& report) {
    std::ostringstream out;
    out << "method,class,correct,total,accuracy\n";
    for (const std::string& m : report.config.methods) {
        std::map<CaseClass, Tally> classes;
        for (const auto& r : report.realizations) {
            for (const auto& [cls, t] : r.scores.at(m).per_class) classes[cls] += t;
        }
        for (const auto& [cls, t] : classes) {
            out << m << ',' << to_string(cls) << ',' << t.correct << ',' << t.total << ','
                << format_double(t.accuracy()) << "\n";
        }
    }
    return out.str();
}

std::string format_wrong_cases(const MisidentificationStats& stats) {
    std::ostringstream out;
    out << "realization,case_id,class,M,entropy,identifiability\n";
    for (const WrongCase& w : stats.wrong) {
        out << w.realization << ',' << w.outcome.case_id << ',' << to_string(w.outcome.cls) << ','
            << format_double(w.outcome.solutions) << ',' << format_double(w.outcome.entropy) << ','
            << format_double(w.outcome.identifiability) << "\n";
    }
    return out.str();
}

} // namespace pathfinder
