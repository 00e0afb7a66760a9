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
#include <filesystem>
#include <string>
#include <vector>

#include "pathfinder/network.hpp"
#include "pathfinder/rng.hpp"

namespace pathfinder {

enum class StopRule { AllInfected, TickLimit };

struct SimConfig {
    double beta = 0.3;
    NodeId seed_node = 0;
    Count seed_infected = 5;
    int max_ticks = 200;
    std::uint64_t rng_seed = 1;
    StopRule stop_rule = StopRule::AllInfected;
    /// Keep every infected move in the log, not only first arrivals.
    bool record_moves = true;
};

struct Move {
    int tick;
    NodeId src;
    NodeId dst;
    Count count;

    bool operator==(const Move&) const = default;
};

struct SourceCount {
    NodeId src;
    Count count;

    bool operator==(const SourceCount&) const = default;
};

/// Infected arrivals into a node whose count was zero at the previous tick.
struct FirstArrival {
    int tick;
    NodeId node;
    int epoch;  // index of this arrival among the node's arrivals; >0 only after a reversion to S
    std::vector<SourceCount> sources;

    bool operator==(const FirstArrival&) const = default;
};

struct GroundTruthLog {
    std::vector<Move> moves;
    std::vector<FirstArrival> first_arrivals;

    bool operator==(const GroundTruthLog&) const = default;
};

struct SimState {
    std::vector<Count> susceptible;
    std::vector<Count> infected;

    Count population(NodeId i) const {
        return susceptible[static_cast<std::size_t>(i)] + infected[static_cast<std::size_t>(i)];
    }
};

struct ReactStats {
    Count new_infections = 0;
    /// Nodes where beta*I/N exceeded 1 and was clamped.
    int clamped = 0;
};

/// Intra-node SI step: new infections ~ Binomial(S_i, beta*I_i/N_i).
ReactStats react(SimState& state, double beta, std::uint64_t seed, int tick);

/// Synchronous multinomial mobility for S and I from the pre-step snapshot.
/// Appends one Move per (src, dst) pair with at least one infected mover.
void diffuse(SimState& state, const MetapopNetwork& network, std::uint64_t seed, int tick, std::vector<Move>& moves);

struct SimResult {
    SurveillanceSeries series;
    GroundTruthLog truth;
    int clamped_reactions = 0;
};

/// Runs react-then-diffuse per tick, recording I_i(t) after both substeps.
SimResult run(const MetapopNetwork& network, const SimConfig& config);

/// Draws (T_1..T_k) ~ Multinomial(trials, rates) via conditional binomials;
/// the remainder stays home.
void multinomial_split(Count trials, std::span<const Edge> edges, PhiloxStream& rng, std::vector<Count>& out);

/// CSV `t,src,dst,count` with one row per (first arrival, source).
std::string format_truth(const GroundTruthLog& truth);
GroundTruthLog parse_truth(const std::string& text);
std::string format_moves(const std::vector<Move>& moves);

} // namespace pathfinder
