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

#include "pathfinder/simulator.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "pathfinder/errors.hpp"

namespace pathfinder {

namespace {

enum Substep : std::uint32_t { kReact = 0, kMoveSusceptible = 1, kMoveInfected = 2 };

Count draw_binomial(PhiloxStream& rng, Count trials, double p) {
    if (trials <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    std::binomial_distribution<Count> dist(trials, p);
    return dist(rng);
}

} // namespace

ReactStats react(SimState& state, double beta, std::uint64_t seed, int tick) {
    ReactStats stats;
    for (std::size_t i = 0; i < state.infected.size(); ++i) {
        const Count I = state.infected[i];
        const Count S = state.susceptible[i];
        if (I == 0 || S == 0 || beta == 0.0) continue;
        double lambda = beta * static_cast<double>(I) / static_cast<double>(S + I);
        if (lambda > 1.0) {
            lambda = 1.0;
            ++stats.clamped;
        }
        PhiloxStream rng(seed, static_cast<std::uint32_t>(tick), static_cast<std::uint32_t>(i), kReact);
        const Count fresh = draw_binomial(rng, S, lambda);
        state.susceptible[i] -= fresh;
        state.infected[i] += fresh;
        stats.new_infections += fresh;
    }
    return stats;
}

void multinomial_split(Count trials, std::span<const Edge> edges, PhiloxStream& rng, std::vector<Count>& out) {
    out.assign(edges.size(), 0);
    Count remaining = trials;
    double mass_left = 1.0;
    for (std::size_t k = 0; k < edges.size() && remaining > 0; ++k) {
        const double q = mass_left > 0.0 ? std::clamp(edges[k].rate / mass_left, 0.0, 1.0) : 0.0;
        out[k] = draw_binomial(rng, remaining, q);
        remaining -= out[k];
        mass_left -= edges[k].rate;
    }
}

void diffuse(SimState& state, const MetapopNetwork& network, std::uint64_t seed, int tick, std::vector<Move>& moves) {
    const SimState before = state;
    std::vector<Count> split;
    for (NodeId i = 0; i < static_cast<NodeId>(network.size()); ++i) {
        const auto edges = network.out_edges(i);
        if (edges.empty()) continue;
        const auto ui = static_cast<std::size_t>(i);
        for (auto [sub, compartment, snapshot] :
             {std::tuple{kMoveSusceptible, &state.susceptible, &before.susceptible},
              std::tuple{kMoveInfected, &state.infected, &before.infected}}) {
            const Count trials = (*snapshot)[ui];
            if (trials == 0) continue;
            PhiloxStream rng(seed, static_cast<std::uint32_t>(tick), static_cast<std::uint32_t>(i), sub);
            multinomial_split(trials, edges, rng, split);
            for (std::size_t k = 0; k < edges.size(); ++k) {
                if (split[k] == 0) continue;
                (*compartment)[ui] -= split[k];
                (*compartment)[static_cast<std::size_t>(edges[k].node)] += split[k];
                if (sub == kMoveInfected) moves.push_back({tick, i, edges[k].node, split[k]});
            }
        }
    }
}

SimResult run(const MetapopNetwork& network, const SimConfig& config) {
    const auto n = network.size();
    if (config.seed_node < 0 || static_cast<std::size_t>(config.seed_node) >= n) {
        throw ConfigError("seed node " + std::to_string(config.seed_node) + " out of range");
    }
    if (!(config.beta >= 0.0)) throw ConfigError("beta must be >= 0");
    if (config.seed_infected < 1 || config.seed_infected > network.population(config.seed_node)) {
        throw ConfigError("seed_infected must lie in [1, N_seed]");
    }
    if (config.max_ticks < 0) throw ConfigError("max_ticks must be >= 0");

    SimState state;
    state.susceptible.assign(network.populations().begin(), network.populations().end());
    state.infected.assign(n, 0);
    const auto seed = static_cast<std::size_t>(config.seed_node);
    state.infected[seed] = config.seed_infected;
    state.susceptible[seed] -= config.seed_infected;

    SimResult result;
    std::vector<Count> populations;
    auto record = [&] {
        result.series.push_row(state.infected);
        for (NodeId i = 0; i < static_cast<NodeId>(n); ++i) populations.push_back(state.population(i));
    };
    record();

    std::vector<int> invasions(n, 0);
    std::vector<Move> tick_moves;
    std::map<NodeId, std::vector<SourceCount>> arrivals;

    for (int tick = 1; tick <= config.max_ticks; ++tick) {
        const std::vector<Count> previous = state.infected;
        result.clamped_reactions += react(state, config.beta, config.rng_seed, tick).clamped;
        tick_moves.clear();
        diffuse(state, network, config.rng_seed, tick, tick_moves);
        record();

        arrivals.clear();
        for (const Move& m : tick_moves) {
            if (previous[static_cast<std::size_t>(m.dst)] == 0) arrivals[m.dst].push_back({m.src, m.count});
        }
        for (NodeId j = 0; j < static_cast<NodeId>(n); ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (previous[uj] != 0 || state.infected[uj] == 0) continue;
            auto it = arrivals.find(j);
            if (it == arrivals.end()) {
                throw std::logic_error("node " + std::to_string(j) + " became infected at tick " +
                                       std::to_string(tick) + " without a logged arrival");
            }
            result.truth.first_arrivals.push_back({tick, j, invasions[uj]++, std::move(it->second)});
        }
        if (config.record_moves) result.truth.moves.insert(result.truth.moves.end(), tick_moves.begin(), tick_moves.end());

        if (config.stop_rule == StopRule::AllInfected &&
            std::all_of(state.infected.begin(), state.infected.end(), [](Count I) { return I > 0; })) {
            break;
        }
    }
    result.series.set_populations(std::move(populations));
    return result;
}

std::string format_truth(const GroundTruthLog& truth) {
    std::ostringstream out;
    out << "t,src,dst,count\n";
    for (const FirstArrival& a : truth.first_arrivals) {
        for (const SourceCount& s : a.sources) out << a.tick << ',' << s.src << ',' << a.node << ',' << s.count << "\n";
    }
    return out.str();
}

std::string format_moves(const std::vector<Move>& moves) {
    std::ostringstream out;
    out << "t,src,dst,count\n";
    for (const Move& m : moves) out << m.tick << ',' << m.src << ',' << m.dst << ',' << m.count << "\n";
    return out.str();
}

GroundTruthLog parse_truth(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    GroundTruthLog truth;
    std::map<NodeId, int> invasions;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1 || line == "t,src,dst,count") {
            if (line != "t,src,dst,count") throw ParseError("expected header `t,src,dst,count`", lineno);
            continue;
        }
        std::istringstream row(line);
        long long t = 0, src = 0, dst = 0, count = 0;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(row >> t >> c1 >> src >> c2 >> dst >> c3 >> count) || c1 != ',' || c2 != ',' || c3 != ',') {
            throw ParseError("bad truth row '" + line + "'", lineno);
        }
        auto& arrivals = truth.first_arrivals;
        if (arrivals.empty() || arrivals.back().tick != t || arrivals.back().node != dst) {
            arrivals.push_back({static_cast<int>(t), static_cast<NodeId>(dst), invasions[static_cast<NodeId>(dst)]++, {}});
        }
        arrivals.back().sources.push_back({static_cast<NodeId>(src), count});
    }
    return truth;
}

} // namespace pathfinder
