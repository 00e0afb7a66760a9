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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pathfinder {

using NodeId = std::int32_t;
using Count = std::int64_t;

struct Edge {
    NodeId node;
    double rate;

    bool operator==(const Edge&) const = default;
};

/// Directed weighted graph of subpopulations. Immutable once built; node ids
/// are dense 0..n-1. Out-edges keep insertion order, in-edges are derived.
class MetapopNetwork {
public:
    MetapopNetwork() = default;
    MetapopNetwork(std::vector<Count> populations, std::vector<std::vector<Edge>> out_edges,
                   bool directed = true, std::vector<std::string> labels = {});

    std::size_t size() const noexcept { return populations_.size(); }
    bool directed() const noexcept { return directed_; }

    Count population(NodeId i) const { return populations_[static_cast<std::size_t>(i)]; }
    std::span<const Count> populations() const noexcept { return populations_; }

    std::span<const Edge> out_edges(NodeId i) const { return out_[static_cast<std::size_t>(i)]; }
    /// In-edges of i; Edge::node is the source and Edge::rate is p_{src,i}.
    std::span<const Edge> in_edges(NodeId i) const { return in_[static_cast<std::size_t>(i)]; }

    std::size_t degree(NodeId i) const { return out_[static_cast<std::size_t>(i)].size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Rate p_ij, or nullopt when there is no edge i->j.
    std::optional<double> rate(NodeId i, NodeId j) const;
    /// Sum of outgoing rates of i.
    double outflux(NodeId i) const;
    /// Residence probability 1 - sum_j p_ij.
    double stay_probability(NodeId i) const { return 1.0 - outflux(i); }

    /// External labels, empty when the file used integer ids.
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Same topology with every out-edge rate of node i replaced by rates[i][k].
    MetapopNetwork with_rates(const std::vector<std::vector<double>>& rates) const;
    MetapopNetwork with_populations(std::vector<Count> populations) const;

    bool operator==(const MetapopNetwork& other) const;

private:
    std::vector<Count> populations_;
    std::vector<std::vector<Edge>> out_;
    std::vector<std::vector<Edge>> in_;
    std::vector<std::string> labels_;
    std::size_t edge_count_ = 0;
    bool directed_ = true;
};

struct Violation {
    std::string rule;
    std::string detail;
};

/// Every invariant the network breaks; empty means valid.
std::vector<Violation> validate(const MetapopNetwork& network);

MetapopNetwork load_network(const std::filesystem::path& path);
MetapopNetwork parse_network(const std::string& text);
void save_network(const MetapopNetwork& network, const std::filesystem::path& path);
std::string format_network(const MetapopNetwork& network);

/// Per-tick infected counts I_i(t); row 0 is the initial condition.
class SurveillanceSeries {
public:
    SurveillanceSeries() = default;
    SurveillanceSeries(std::size_t node_count, std::vector<Count> counts);

    std::size_t node_count() const noexcept { return nodes_; }
    /// Number of recorded ticks including t = 0.
    std::size_t ticks() const noexcept { return nodes_ == 0 ? 0 : counts_.size() / nodes_; }

    Count infected(std::size_t t, NodeId i) const { return counts_[t * nodes_ + static_cast<std::size_t>(i)]; }
    std::span<const Count> row(std::size_t t) const { return {counts_.data() + t * nodes_, nodes_}; }

    void push_row(std::span<const Count> row);

    /// Optional per-tick populations N_i(t), same layout as the counts.
    const std::vector<Count>& populations() const noexcept { return populations_; }
    void set_populations(std::vector<Count> populations) { populations_ = std::move(populations); }

    bool operator==(const SurveillanceSeries& other) const {
        return nodes_ == other.nodes_ && counts_ == other.counts_;
    }

private:
    std::size_t nodes_ = 0;
    std::vector<Count> counts_;
    std::vector<Count> populations_;
};

/// Checks 0 <= I_i(t) <= N_i(t) (static populations when no snapshot is present).
std::vector<Violation> validate(const SurveillanceSeries& series, const MetapopNetwork& network);

/// CSV `t,node,I`: the full t = 0 row set, then every row that is nonzero or changed.
std::string format_surveillance(const SurveillanceSeries& series);
SurveillanceSeries parse_surveillance(const std::string& text, std::size_t node_count);
void save_surveillance(const SurveillanceSeries& series, const std::filesystem::path& path);
SurveillanceSeries load_surveillance(const std::filesystem::path& path, std::size_t node_count);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);
/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

} // namespace pathfinder
