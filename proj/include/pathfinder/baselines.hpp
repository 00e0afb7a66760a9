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
#include <string>
#include <vector>

#include "pathfinder/ipi.hpp"
#include "pathfinder/network.hpp"
#include "pathfinder/simulator.hpp"

namespace pathfinder {

/// Shortest-path arborescence from `root` under per-edge weights aligned
/// with network.out_edges(i). Non-finite weights drop the edge. Distances
/// within a relative 1e-12 count as equal and go to the smaller parent id.
PathwayTree shortest_path_tree(const MetapopNetwork& network, NodeId root,
                               const std::vector<std::vector<double>>& weights);

/// Additive constant of the arrival-time weight: 1 + ln(mean out-flux), so
/// that ARR and EFF weights coincide when every node has the same out-flux.
double arr_alpha(const MetapopNetwork& network);

/// w_ij = alpha - ln p_ij, floored at a small positive value.
PathwayTree arr_tree(const MetapopNetwork& network, NodeId root, double alpha);
PathwayTree arr_tree(const MetapopNetwork& network, NodeId root);

/// d_ij = 1 - ln(p_ij / sum_l p_il).
PathwayTree eff_tree(const MetapopNetwork& network, NodeId root);

struct MobilityFrequencies {
    int runs = 0;
    /// f_ij aligned with network.out_edges(i): share of runs in which i was a
    /// first-arrival source of j, split evenly by mover count when j had
    /// several sources at once.
    std::vector<std::vector<double>> frequency;
};

/// Independent simulations seeded by mix_seed(config.rng_seed, run).
MobilityFrequencies estimate_frequencies(const MetapopNetwork& network, const SimConfig& config, int runs,
                                         int jobs = 1);

/// w_ij = -ln((f_ij + eps) / (1 + eps)), eps = 1 / (10 runs).
PathwayTree mcml_tree(const MetapopNetwork& network, NodeId root, const MobilityFrequencies& freq);
PathwayTree mcml_tree(const MetapopNetwork& network, const SimConfig& config, int runs, int jobs = 1);

/// Empty string when `tree` is an arborescence rooted at tree.root over
/// network nodes; otherwise the first violation.
std::string arborescence_violation(const PathwayTree& tree, const MetapopNetwork& network);

/// `# method=<name> <params>` comment, then `src,dst` rows sorted by dst.
std::string format_tree(const PathwayTree& tree, const std::string& method, const std::string& params);
PathwayTree parse_tree(const std::string& text);

} // namespace pathfinder
