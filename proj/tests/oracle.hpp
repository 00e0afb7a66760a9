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

// Brute-force reference implementations for the tests. Nothing here calls
// the anatomy, estimator or IPI code: every quantity is recomputed from the
// raw network and surveillance rows by enumerating labeled hosts.

#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "pathfinder/network.hpp"

namespace oracle {

using pathfinder::Count;
using pathfinder::Edge;
using pathfinder::MetapopNetwork;
using pathfinder::NodeId;
using pathfinder::SurveillanceSeries;

using Vector = std::vector<Count>;

/// Distribution of a source's infected movers over `targets` at `tick`.
///
/// Hosts are labeled. When the source lost infecteds, the first
/// min(drop, I(t-1)) hosts (all of them when it emptied) are known to have
/// left, so they move through a non-observable edge with probabilities
/// renormalized over those edges. The other hosts stay or move with the raw
/// rates. No host may enter a neighbor that is zero at `tick` and is not a
/// target: such an arrival would have been seen.
inline std::map<Vector, double> source_distribution(const MetapopNetwork& net, const SurveillanceSeries& series,
                                                    int tick, NodeId source, const std::vector<NodeId>& targets) {
    const Count before = series.infected(static_cast<std::size_t>(tick - 1), source);
    const Count after = series.infected(static_cast<std::size_t>(tick), source);
    const Count confirmed = after == 0 ? before : std::max<Count>(before - after, 0);

    struct Choice {
        int slot;  // index into targets, -1 elsewhere
        double rate;
    };
    std::vector<Choice> open;
    double outflux = 0.0;
    for (const Edge& e : net.out_edges(source)) {
        outflux += e.rate;
        const auto it = std::find(targets.begin(), targets.end(), e.node);
        if (it != targets.end()) {
            open.push_back({static_cast<int>(it - targets.begin()), e.rate});
        } else if (series.infected(static_cast<std::size_t>(tick), e.node) > 0) {
            open.push_back({-1, e.rate});
        }
    }
    double leave = 0.0;
    for (const Choice& c : open) leave += c.rate;

    std::map<Vector, double> dist;
    Vector counts(targets.size(), 0);
    auto visit = [&](auto&& self, Count host, double weight) -> void {
        if (weight == 0.0) return;
        if (host == before) {
            dist[counts] += weight;
            return;
        }
        const bool known_gone = host < confirmed;
        for (const Choice& c : open) {
            if (c.slot >= 0) ++counts[static_cast<std::size_t>(c.slot)];
            self(self, host + 1, weight * (known_gone ? c.rate / leave : c.rate));
            if (c.slot >= 0) --counts[static_cast<std::size_t>(c.slot)];
        }
        if (!known_gone) self(self, host + 1, weight * (1.0 - outflux));
    };
    visit(visit, 0, 1.0);
    return dist;
}

/// Posterior over allocations (aligned with invasion edges sorted by
/// (src, dst)) given the arrival counts of every destination.
struct CasePosterior {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::map<Vector, double> allocations;
    std::map<std::vector<std::pair<NodeId, NodeId>>, double> supports;
    double mass = 0.0;  // unnormalized total
};

inline CasePosterior case_posterior(const MetapopNetwork& net, const SurveillanceSeries& series, int tick,
                                    const std::vector<NodeId>& sources, const std::vector<NodeId>& destinations,
                                    const std::vector<Count>& arrivals) {
    CasePosterior out;
    std::vector<std::vector<NodeId>> targets(sources.size());
    std::vector<std::map<Vector, double>> per_source;
    for (std::size_t s = 0; s < sources.size(); ++s) {
        for (NodeId d : destinations) {
            if (net.rate(sources[s], d)) {
                targets[s].push_back(d);
                out.edges.emplace_back(sources[s], d);
            }
        }
        per_source.push_back(source_distribution(net, series, tick, sources[s], targets[s]));
    }
    Vector joint;
    std::vector<Count> received(destinations.size(), 0);
    auto visit = [&](auto&& self, std::size_t s, double weight) -> void {
        if (s == sources.size()) {
            for (std::size_t k = 0; k < destinations.size(); ++k) {
                if (received[k] != arrivals[k]) return;
            }
            out.allocations[joint] += weight;
            return;
        }
        for (const auto& [v, w] : per_source[s]) {
            for (std::size_t e = 0; e < v.size(); ++e) {
                const auto k = std::find(destinations.begin(), destinations.end(), targets[s][e]) - destinations.begin();
                received[static_cast<std::size_t>(k)] += v[e];
            }
            joint.insert(joint.end(), v.begin(), v.end());
            self(self, s + 1, weight * w);
            joint.resize(joint.size() - v.size());
            for (std::size_t e = 0; e < v.size(); ++e) {
                const auto k = std::find(destinations.begin(), destinations.end(), targets[s][e]) - destinations.begin();
                received[static_cast<std::size_t>(k)] -= v[e];
            }
        }
    };
    visit(visit, 0, 1.0);
    for (const auto& [a, w] : out.allocations) out.mass += w;
    for (auto& [a, w] : out.allocations) {
        if (out.mass > 0.0) w /= out.mass;
        std::vector<std::pair<NodeId, NodeId>> support;
        for (std::size_t e = 0; e < a.size(); ++e) {
            if (a[e] > 0) support.push_back(out.edges[e]);
        }
        out.supports[support] += w;
    }
    return out;
}

/// A two-tick surveillance context around one invasion case: sources,
/// destinations and a few extra neighbors of the sources in every
/// observability state.
struct SmallContext {
    MetapopNetwork network;
    SurveillanceSeries series;
    std::vector<NodeId> sources;
    std::vector<NodeId> destinations;
    std::vector<Count> arrivals;
    CasePosterior truth;
};

/// Random context with at most 3 sources, 2 destinations, 4 invasion edges,
/// I(t-1) <= 4 and H <= 3, redrawn until the observations have positive
/// probability.
inline SmallContext random_context(std::mt19937_64& rng) {
    auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    for (;;) {
        const int m = uniform_int(1, 3);
        const int n = uniform_int(1, 2);
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < n; ++k) pairs.emplace_back(i, k);
        }
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(std::min<std::size_t>(pairs.size(), static_cast<std::size_t>(uniform_int(m + n - 1, 4))));
        // Connected and covering?
        std::vector<int> comp(static_cast<std::size_t>(m + n));
        for (int v = 0; v < m + n; ++v) comp[static_cast<std::size_t>(v)] = v;
        auto find = [&](int v) {
            while (comp[static_cast<std::size_t>(v)] != v) v = comp[static_cast<std::size_t>(v)];
            return v;
        };
        for (auto [i, k] : pairs) comp[static_cast<std::size_t>(find(i))] = find(m + k);
        bool connected = true;
        for (int v = 1; v < m + n; ++v) connected = connected && find(v) == find(0);
        if (!connected) continue;

        const int states[4][2] = {{0, 0}, {2, 0}, {3, 1}, {2, 3}};  // S->S, I->S, decrease, non-decrease
        std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(m + n));
        for (auto [i, k] : pairs) adj[static_cast<std::size_t>(i)].push_back(m + k);
        std::vector<Count> before(static_cast<std::size_t>(m + n), 0), after(static_cast<std::size_t>(m + n), 0);
        NodeId next = m + n;
        for (int i = 0; i < m; ++i) {
            const int extras = uniform_int(0, 2);
            for (int x = 0; x < extras; ++x) {
                const int st = uniform_int(0, 3);
                adj[static_cast<std::size_t>(i)].push_back(next++);
                adj.emplace_back();
                before.push_back(states[st][0]);
                after.push_back(states[st][1]);
            }
            if (i > 0 && uniform(0, 1) < 0.3) adj[static_cast<std::size_t>(i)].push_back(uniform_int(0, i - 1));
        }
        for (int i = 0; i < m; ++i) {
            const Count b = uniform_int(1, 4);
            before[static_cast<std::size_t>(i)] = b;
            switch (uniform_int(0, 2)) {
            case 0: after[static_cast<std::size_t>(i)] = 0; break;
            case 1: after[static_cast<std::size_t>(i)] = b > 1 ? uniform_int(1, static_cast<int>(b) - 1) : 0; break;
            default: after[static_cast<std::size_t>(i)] = b + uniform_int(0, 2); break;
            }
        }
        std::vector<NodeId> destinations;
        std::vector<Count> arrivals;
        for (int k = 0; k < n; ++k) {
            after[static_cast<std::size_t>(m + k)] = uniform_int(1, 3);
            destinations.push_back(m + k);
            arrivals.push_back(after[static_cast<std::size_t>(m + k)]);
        }

        // Rates: sources spread a random outflux over their neighbors; every
        // other link points back with a small rate.
        std::vector<std::vector<Edge>> out(adj.size());
        std::set<std::pair<NodeId, NodeId>> have;
        for (NodeId i = 0; i < m; ++i) {
            std::vector<double> raw;
            for (std::size_t e = 0; e < adj[static_cast<std::size_t>(i)].size(); ++e) raw.push_back(uniform(0.2, 1.0));
            double sum = 0.0;
            for (double r : raw) sum += r;
            const double flux = uniform(0.2, 0.9);
            for (std::size_t e = 0; e < raw.size(); ++e) {
                const NodeId j = adj[static_cast<std::size_t>(i)][e];
                out[static_cast<std::size_t>(i)].push_back({j, raw[e] / sum * flux});
                have.emplace(i, j);
            }
        }
        for (NodeId i = 0; i < m; ++i) {
            for (NodeId j : adj[static_cast<std::size_t>(i)]) {
                if (!have.count({j, i})) {
                    out[static_cast<std::size_t>(j)].push_back({i, 0.05});
                    have.emplace(j, i);
                }
            }
        }
        const std::size_t nodes = adj.size();
        MetapopNetwork net(std::vector<Count>(nodes, 100), std::move(out));
        std::vector<Count> counts(before);
        counts.insert(counts.end(), after.begin(), after.end());
        SurveillanceSeries series(nodes, counts);

        std::vector<NodeId> sources;
        for (NodeId i = 0; i < m; ++i) sources.push_back(i);
        CasePosterior truth = case_posterior(net, series, 1, sources, destinations, arrivals);
        if (truth.mass <= 1e-300) continue;
        return {std::move(net), std::move(series), std::move(sources), std::move(destinations), std::move(arrivals),
                std::move(truth)};
    }
}

} // namespace oracle
