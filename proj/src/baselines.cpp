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

#include "pathfinder/baselines.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "pathfinder/errors.hpp"
#include "pathfinder/parallel.hpp"

namespace pathfinder {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDistanceTolerance = 1e-12;
constexpr double kMinWeight = 1e-9;

void check_root(const MetapopNetwork& network, NodeId root) {
    if (root < 0 || static_cast<std::size_t>(root) >= network.size()) {
        throw ConfigError("root " + std::to_string(root) + " is not a network node");
    }
}

std::vector<std::vector<double>> weights_from(const MetapopNetwork& network, auto&& weight) {
    std::vector<std::vector<double>> w(network.size());
    for (NodeId i = 0; i < static_cast<NodeId>(network.size()); ++i) {
        for (const Edge& e : network.out_edges(i)) {
            w[static_cast<std::size_t>(i)].push_back(e.rate > 0.0 ? std::max(weight(i, e), kMinWeight) : kInf);
        }
    }
    return w;
}

} // namespace

PathwayTree shortest_path_tree(const MetapopNetwork& network, NodeId root,
                               const std::vector<std::vector<double>>& weights) {
    check_root(network, root);
    const std::size_t n = network.size();
    std::vector<double> dist(n, kInf);
    std::vector<NodeId> parent(n, -1);
    std::vector<char> settled(n, 0);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(root)] = 0.0;
    queue.emplace(0.0, root);
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (settled[static_cast<std::size_t>(u)] || d > dist[static_cast<std::size_t>(u)]) continue;
        settled[static_cast<std::size_t>(u)] = 1;
        const auto edges = network.out_edges(u);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const double w = weights[static_cast<std::size_t>(u)][k];
            const auto v = static_cast<std::size_t>(edges[k].node);
            if (!std::isfinite(w) || settled[v]) continue;
            const double candidate = d + w;
            const double slack = kDistanceTolerance * std::max(1.0, std::abs(candidate));
            if (dist[v] == kInf || candidate < dist[v] - slack) {
                dist[v] = candidate;
                parent[v] = u;
                queue.emplace(candidate, edges[k].node);
            } else if (candidate <= dist[v] + slack && u < parent[v]) {
                parent[v] = u;
            }
        }
    }
    PathwayTree tree;
    tree.root = root;
    for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] < 0) continue;
        PathwayEdge e;
        e.src = parent[v];
        e.dst = static_cast<NodeId>(v);
        tree.edges.push_back(e);
    }
    return tree;
}

double arr_alpha(const MetapopNetwork& network) {
    double total = 0.0;
    for (NodeId i = 0; i < static_cast<NodeId>(network.size()); ++i) total += network.outflux(i);
    const double mean = total / static_cast<double>(network.size());
    return mean > 0.0 ? 1.0 + std::log(mean) : 1.0;
}

PathwayTree arr_tree(const MetapopNetwork& network, NodeId root, double alpha) {
    return shortest_path_tree(network, root,
                              weights_from(network, [&](NodeId, const Edge& e) { return alpha - std::log(e.rate); }));
}

PathwayTree arr_tree(const MetapopNetwork& network, NodeId root) { return arr_tree(network, root, arr_alpha(network)); }

PathwayTree eff_tree(const MetapopNetwork& network, NodeId root) {
    std::vector<double> flux(network.size());
    for (NodeId i = 0; i < static_cast<NodeId>(network.size()); ++i) flux[static_cast<std::size_t>(i)] = network.outflux(i);
    return shortest_path_tree(network, root, weights_from(network, [&](NodeId i, const Edge& e) {
                                  return 1.0 - std::log(e.rate / flux[static_cast<std::size_t>(i)]);
                              }));
}

MobilityFrequencies estimate_frequencies(const MetapopNetwork& network, const SimConfig& config, int runs, int jobs) {
    if (runs < 1) throw ConfigError("MCML needs at least one run");
    struct Credit {
        NodeId src;
        std::size_t edge;
        double share;
    };
    std::vector<std::vector<Credit>> credits(static_cast<std::size_t>(runs));
    parallel_for(static_cast<std::size_t>(runs), jobs, [&](std::size_t r) {
        SimConfig c = config;
        c.rng_seed = mix_seed(config.rng_seed, r);
        c.record_moves = false;
        const SimResult result = run(network, c);
        for (const FirstArrival& a : result.truth.first_arrivals) {
            if (a.epoch != 0) continue;
            Count total = 0;
            for (const SourceCount& s : a.sources) total += s.count;
            for (const SourceCount& s : a.sources) {
                const auto edges = network.out_edges(s.src);
                for (std::size_t k = 0; k < edges.size(); ++k) {
                    if (edges[k].node == a.node) {
                        credits[r].push_back({s.src, k, static_cast<double>(s.count) / static_cast<double>(total)});
                    }
                }
            }
        }
    });
    MobilityFrequencies freq;
    freq.runs = runs;
    freq.frequency.resize(network.size());
    for (NodeId i = 0; i < static_cast<NodeId>(network.size()); ++i) {
        freq.frequency[static_cast<std::size_t>(i)].assign(network.degree(i), 0.0);
    }
    for (const auto& run_credits : credits) {
        for (const Credit& c : run_credits) freq.frequency[static_cast<std::size_t>(c.src)][c.edge] += c.share;
    }
    for (auto& row : freq.frequency) {
        for (double& f : row) f /= runs;
    }
    return freq;
}

PathwayTree mcml_tree(const MetapopNetwork& network, NodeId root, const MobilityFrequencies& freq) {
    const double eps = 1.0 / (10.0 * freq.runs);
    std::vector<std::vector<double>> w(network.size());
    for (NodeId i = 0; i < static_cast<NodeId>(network.size()); ++i) {
        const auto edges = network.out_edges(i);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const double f = freq.frequency[static_cast<std::size_t>(i)][k];
            w[static_cast<std::size_t>(i)].push_back(
                edges[k].rate > 0.0 ? std::max(-std::log((f + eps) / (1.0 + eps)), kMinWeight) : kInf);
        }
    }
    return shortest_path_tree(network, root, w);
}

PathwayTree mcml_tree(const MetapopNetwork& network, const SimConfig& config, int runs, int jobs) {
    return mcml_tree(network, config.seed_node, estimate_frequencies(network, config, runs, jobs));
}

std::string arborescence_violation(const PathwayTree& tree, const MetapopNetwork& network) {
    const auto n = static_cast<NodeId>(network.size());
    if (tree.root < 0 || tree.root >= n) return "root outside the network";
    std::vector<NodeId> parent(network.size(), -1);
    for (const PathwayEdge& e : tree.edges) {
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) return "edge endpoint outside the network";
        if (e.dst == tree.root) return "edge into the root";
        if (parent[static_cast<std::size_t>(e.dst)] >= 0) return "node " + std::to_string(e.dst) + " has two parents";
        if (!network.rate(e.src, e.dst)) return "edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) + " not in network";
        parent[static_cast<std::size_t>(e.dst)] = e.src;
    }
    for (const PathwayEdge& e : tree.edges) {
        NodeId v = e.dst;
        for (std::size_t steps = 0; v != tree.root; ++steps) {
            if (v < 0 || steps > network.size()) return "node " + std::to_string(e.dst) + " does not reach the root";
            v = parent[static_cast<std::size_t>(v)];
        }
    }
    return {};
}

std::string format_tree(const PathwayTree& tree, const std::string& method, const std::string& params) {
    std::ostringstream out;
    out << "# method=" << method << " root=" << tree.root;
    if (!params.empty()) out << ' ' << params;
    out << "\nsrc,dst\n";
    for (const PathwayEdge& e : tree.edges) out << e.src << ',' << e.dst << "\n";
    return out.str();
}

PathwayTree parse_tree(const std::string& text) {
    PathwayTree tree;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    bool stamped = false;
    bool header = false;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto at = line.find(" root=");
            if (at != std::string::npos) tree.root = std::stoi(line.substr(at + 6));
            continue;
        }
        if (!header) {
            if (line.rfind("src,dst", 0) == 0) {
                stamped = false;
            } else if (line.rfind("tick,src,dst", 0) == 0) {
                stamped = true;
            } else {
                throw ParseError("expected a tree header", number);
            }
            header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream row(line);
        for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
        try {
            PathwayEdge e;
            if (stamped) {
                if (fields.size() != 9) throw ParseError("expected 9 fields", number);
                e.tick = std::stoi(fields[0]);
                e.src = std::stoi(fields[1]);
                e.dst = std::stoi(fields[2]);
                e.case_id = std::stoul(fields[3]);
                e.cls = case_class_from_string(fields[4]);
                e.pi = std::stod(fields[5]);
                e.entropy = std::stod(fields[6]);
                e.identifiability = std::stod(fields[7]);
                e.unique = fields[8] == "1";
            } else {
                if (fields.size() != 2) throw ParseError("expected src,dst", number);
                e.src = std::stoi(fields[0]);
                e.dst = std::stoi(fields[1]);
            }
            tree.edges.push_back(e);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("malformed tree row", number);
        }
    }
    if (!header) throw ParseError("missing tree header", number);
    return tree;
}

} // namespace pathfinder
