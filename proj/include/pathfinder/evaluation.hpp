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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pathfinder/anatomy.hpp"
#include "pathfinder/ipi.hpp"
#include "pathfinder/network.hpp"
#include "pathfinder/simulator.hpp"

namespace pathfinder {

/// One true invasion pathway: a source of a first arrival.
struct TruthEdge {
    int tick;
    NodeId src;
    NodeId dst;
    int epoch;
};

std::vector<TruthEdge> truth_edges(const GroundTruthLog& truth);

/// Root first, then nodes by first arrival (tick, node id), truncated to `cutoff`.
std::vector<NodeId> infection_order(const GroundTruthLog& truth, NodeId root, std::size_t cutoff);

/// Early-stage cutoff from network size: 50 infected nodes up to 500 nodes, 300 above.
std::size_t default_early_cutoff(std::size_t node_count);

struct Tally {
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
    Tally& operator+=(const Tally& o) {
        correct += o.correct;
        total += o.total;
        return *this;
    }
};

struct TreeScore {
    Tally whole;
    Tally early;
    std::map<CaseClass, Tally> per_class;
};

/// Maps (tick, newly infected node) to the case holding it.
struct CaseIndex {
    std::map<std::pair<int, NodeId>, std::size_t> by_arrival;
    std::vector<CaseClass> classes;
};

CaseIndex index_cases(std::span<const InvasionCase> cases);

/// Tick-stamped edges must match (tick, src, dst); static edges match any
/// true arrival with the same (src, dst). Throws ValidationError when the
/// tree names nodes outside 0..node_count-1.
TreeScore score_tree(const PathwayTree& tree, const GroundTruthLog& truth, std::size_t node_count, NodeId root,
                     std::size_t early_cutoff, const CaseIndex& cases);

struct CaseOutcome {
    std::size_t case_id = 0;
    int tick = 0;
    CaseClass cls = CaseClass::OneToOne;
    Resolution resolution = Resolution::Forced;
    bool correct = false;
    double solutions = 1.0;
    double pi = 1.0;
    double entropy = 0.0;
    double identifiability = 1.0;
    bool bound_violation = false;
};

/// A case is correct when its identified support equals the set of true
/// sources of its destinations at that tick.
std::vector<CaseOutcome> case_outcomes(const IpiRun& run, const GroundTruthLog& truth);

struct WrongCase {
    int realization;
    CaseOutcome outcome;
};

struct ClassIdentifiability {
    std::size_t wrong = 0;
    std::size_t correct = 0;
    double mean_wrong = 0.0;    // mean identifiability of wrongly identified cases
    double mean_correct = 0.0;
};

struct MisidentificationStats {
    std::vector<WrongCase> wrong;  // mI->S and mI->nS only
    std::map<CaseClass, ClassIdentifiability> per_class;
};

MisidentificationStats misidentification_stats(const std::vector<std::vector<CaseOutcome>>& per_realization);

struct ExperimentConfig {
    SimConfig sim;  // sim.rng_seed is the master seed
    int realizations = 20;
    std::vector<std::string> methods{"ipi", "arr", "eff", "mcml"};
    int mcml_runs = 100;
    std::size_t early_cutoff = 0;  // 0: default_early_cutoff
    int jobs = 1;
    IpiOptions ipi;
};

struct RealizationResult {
    int index = 0;
    std::uint64_t seed = 0;
    int ticks = 0;
    std::size_t truth_edges = 0;
    bool no_spread = false;
    std::map<std::string, TreeScore> scores;
    std::vector<CaseOutcome> cases;
    std::size_t degenerate_cases = 0;
    std::size_t bound_violations = 0;
    double ipi_seconds = 0.0;  // not part of any report file
};

struct ExperimentReport {
    ExperimentConfig config;
    std::size_t early_cutoff = 0;
    std::map<std::string, PathwayTree> baseline_trees;
    std::vector<RealizationResult> realizations;
    MisidentificationStats misidentified;
};

/// Realization r simulates with mix_seed(master, r); MCML simulations use an
/// independent seed family. Identical output for any jobs value.
ExperimentReport run_experiment(const MetapopNetwork& network, const ExperimentConfig& config);

/// Scores one simulated realization: the IPI tree when `ipi` is given and
/// every baseline tree.
RealizationResult evaluate_realization(const MetapopNetwork& network, const SimResult& sim, const IpiRun* ipi,
                                       const std::map<std::string, PathwayTree>& baselines, NodeId root,
                                       std::size_t early_cutoff);

std::string format_aggregate(const ExperimentReport& report);
/// CSV `realization,method,accuracy,early_accuracy`.
std::string format_series(const ExperimentReport& report);
/// CSV `method,class,correct,total,accuracy`, accumulated over realizations.
std::string format_class_accuracy(const ExperimentReport& report);
/// CSV `realization,case_id,class,M,entropy,identifiability`.
std::string format_wrong_cases(const MisidentificationStats& stats);

} // namespace pathfinder
