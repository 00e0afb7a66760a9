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

#include "pathfinder/network.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pathfinder/errors.hpp"

namespace pathfinder {

MetapopNetwork::MetapopNetwork(std::vector<Count> populations, std::vector<std::vector<Edge>> out_edges,
                               bool directed, std::vector<std::string> labels)
    : populations_(std::move(populations)), out_(std::move(out_edges)), labels_(std::move(labels)),
      directed_(directed) {
    if (out_.size() != populations_.size()) {
        throw ValidationError("adjacency has " + std::to_string(out_.size()) + " rows for " +
                              std::to_string(populations_.size()) + " nodes");
    }
    if (!labels_.empty() && labels_.size() != populations_.size()) {
        throw ValidationError("label table size does not match node count");
    }
    const auto n = static_cast<NodeId>(populations_.size());
    in_.assign(out_.size(), {});
    for (NodeId i = 0; i < n; ++i) {
        for (const Edge& e : out_[static_cast<std::size_t>(i)]) {
            if (e.node < 0 || e.node >= n) {
                throw ValidationError("edge " + std::to_string(i) + "->" + std::to_string(e.node) +
                                      " points outside 0.." + std::to_string(n - 1));
            }
            in_[static_cast<std::size_t>(e.node)].push_back({i, e.rate});
            ++edge_count_;
        }
    }
}

std::optional<double> MetapopNetwork::rate(NodeId i, NodeId j) const {
    for (const Edge& e : out_edges(i)) {
        if (e.node == j) return e.rate;
    }
    return std::nullopt;
}

double MetapopNetwork::outflux(NodeId i) const {
    double total = 0.0;
    for (const Edge& e : out_edges(i)) total += e.rate;
    return total;
}

MetapopNetwork MetapopNetwork::with_rates(const std::vector<std::vector<double>>& rates) const {
    if (rates.size() != out_.size()) throw ValidationError("rate table does not match node count");
    auto out = out_;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rates[i].size() != out[i].size()) {
            throw ValidationError("rate row " + std::to_string(i) + " does not match degree");
        }
        for (std::size_t k = 0; k < out[i].size(); ++k) out[i][k].rate = rates[i][k];
    }
    return MetapopNetwork(populations_, std::move(out), directed_, labels_);
}

MetapopNetwork MetapopNetwork::with_populations(std::vector<Count> populations) const {
    return MetapopNetwork(std::move(populations), out_, directed_, labels_);
}

bool MetapopNetwork::operator==(const MetapopNetwork& other) const {
    return directed_ == other.directed_ && populations_ == other.populations_ && out_ == other.out_ &&
           labels_ == other.labels_;
}

std::vector<Violation> validate(const MetapopNetwork& network) {
    std::vector<Violation> out;
    const auto n = static_cast<NodeId>(network.size());
    if (n == 0) out.push_back({"empty network", "node_count must be positive"});
    for (NodeId i = 0; i < n; ++i) {
        const std::string who = "node " + std::to_string(i);
        if (network.population(i) < 1) {
            out.push_back({"population must be positive", who + " has N=" + std::to_string(network.population(i))});
        }
        std::set<NodeId> seen;
        double total = 0.0;
        for (const Edge& e : network.out_edges(i)) {
            const std::string edge = std::to_string(i) + "->" + std::to_string(e.node);
            if (e.node == i) out.push_back({"self-loop forbidden", edge});
            if (!seen.insert(e.node).second) out.push_back({"multi-edge forbidden", edge});
            if (!(e.rate >= 0.0 && e.rate < 1.0)) {
                out.push_back({"rate out of range", edge + " has p=" + format_double(e.rate)});
            }
            total += e.rate;
        }
        if (!(total < 1.0)) {
            out.push_back({"no residence mass", who + " has outflux " + format_double(total)});
        }
    }
    return out;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw std::runtime_error("cannot format double");
    return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

std::vector<std::string> tokenize(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string> tokens;
    std::istringstream ss{std::string(line)};
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    return tokens;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

struct RawEdge {
    std::string src, dst;
    double rate;
    bool both;
    int line;
};

} // namespace

MetapopNetwork parse_network(const std::string& text) {
    std::istringstream in(text);
    std::optional<std::size_t> declared;
    bool directed = true;
    std::vector<std::pair<std::string, Count>> nodes;
    std::vector<int> node_lines;
    std::vector<RawEdge> edges;

    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        const auto tok = tokenize(line);
        if (tok.empty()) continue;
        const std::string& kind = tok[0];
        if (kind == "nodes") {
            if (tok.size() != 2) throw ParseError("expected `nodes <n>`", lineno);
            auto n = parse_number<std::size_t>(tok[1]);
            if (!n) throw ParseError("bad node count '" + tok[1] + "'", lineno);
            if (declared) throw ParseError("duplicate `nodes` header", lineno);
            declared = *n;
        } else if (kind == "directed") {
            if (tok.size() != 2 || (tok[1] != "0" && tok[1] != "1")) {
                throw ParseError("expected `directed 0|1`", lineno);
            }
            directed = tok[1] == "1";
        } else if (kind == "node") {
            if (!declared) throw ParseError("`node` before `nodes` header", lineno);
            if (tok.size() != 3) throw ParseError("expected `node <id> <N>`", lineno);
            auto pop = parse_number<Count>(tok[2]);
            if (!pop) throw ParseError("bad population '" + tok[2] + "'", lineno);
            nodes.emplace_back(tok[1], *pop);
            node_lines.push_back(lineno);
        } else if (kind == "edge" || kind == "uedge") {
            if (!declared) throw ParseError("`" + kind + "` before `nodes` header", lineno);
            if (tok.size() != 4) throw ParseError("expected `" + kind + " <src> <dst> <p>`", lineno);
            auto p = parse_number<double>(tok[3]);
            if (!p) throw ParseError("bad rate '" + tok[3] + "'", lineno);
            edges.push_back({tok[1], tok[2], *p, kind == "uedge", lineno});
        } else {
            throw ParseError("unknown record '" + kind + "'", lineno);
        }
    }
    if (!declared) throw ParseError("missing `nodes <n>` header", 0);
    if (nodes.size() != *declared) {
        throw ParseError("header declares " + std::to_string(*declared) + " nodes but " +
                             std::to_string(nodes.size()) + " `node` lines found",
                         0);
    }

    const std::size_t n = nodes.size();
    // Integer ids 0..n-1 are used directly; anything else becomes a label table.
    bool integer_ids = true;
    {
        std::vector<bool> seen(n, false);
        for (const auto& [id, pop] : nodes) {
            auto v = parse_number<std::size_t>(id);
            if (!v || *v >= n || seen[*v]) {
                integer_ids = false;
                break;
            }
            seen[*v] = true;
        }
    }

    std::unordered_map<std::string, NodeId> index;
    std::vector<std::string> labels;
    std::vector<Count> populations(n, 0);
    if (integer_ids) {
        for (const auto& [id, pop] : nodes) {
            populations[*parse_number<std::size_t>(id)] = pop;
            index.emplace(id, static_cast<NodeId>(*parse_number<std::size_t>(id)));
        }
    } else {
        std::vector<std::size_t> order(n);
        for (std::size_t k = 0; k < n; ++k) order[k] = k;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return nodes[a].first < nodes[b].first; });
        for (std::size_t dense = 0; dense < n; ++dense) {
            const auto& [label, pop] = nodes[order[dense]];
            if (!index.emplace(label, static_cast<NodeId>(dense)).second) {
                throw ParseError("duplicate node label '" + label + "'", node_lines[order[dense]]);
            }
            labels.push_back(label);
            populations[dense] = pop;
        }
    }

    std::vector<std::vector<Edge>> out(n);
    auto resolve = [&](const std::string& id, int line) {
        auto it = index.find(id);
        if (it == index.end()) throw ParseError("unknown node '" + id + "'", line);
        return it->second;
    };
    for (const RawEdge& e : edges) {
        const NodeId a = resolve(e.src, e.line);
        const NodeId b = resolve(e.dst, e.line);
        out[static_cast<std::size_t>(a)].push_back({b, e.rate});
        if (e.both) out[static_cast<std::size_t>(b)].push_back({a, e.rate});
    }
    return MetapopNetwork(std::move(populations), std::move(out), directed, std::move(labels));
}

MetapopNetwork load_network(const std::filesystem::path& path) {
    MetapopNetwork network = parse_network(read_file(path));
    if (auto violations = validate(network); !violations.empty()) {
        std::string msg = path.string() + ": invalid network";
        for (const auto& v : violations) msg += "; " + v.rule + " (" + v.detail + ")";
        throw ValidationError(msg);
    }
    return network;
}

std::string format_network(const MetapopNetwork& network) {
    std::ostringstream out;
    const auto n = static_cast<NodeId>(network.size());
    const auto& labels = network.labels();
    auto name = [&](NodeId i) { return labels.empty() ? std::to_string(i) : labels[static_cast<std::size_t>(i)]; };
    out << "# metapopulation network\n";
    out << "nodes " << n << "\n";
    out << "directed " << (network.directed() ? 1 : 0) << "\n";
    for (NodeId i = 0; i < n; ++i) out << "node " << name(i) << ' ' << network.population(i) << "\n";
    for (NodeId i = 0; i < n; ++i) {
        for (const Edge& e : network.out_edges(i)) {
            out << "edge " << name(i) << ' ' << name(e.node) << ' ' << format_double(e.rate) << "\n";
        }
    }
    return out.str();
}

void save_network(const MetapopNetwork& network, const std::filesystem::path& path) {
    write_file(path, format_network(network));
}

SurveillanceSeries::SurveillanceSeries(std::size_t node_count, std::vector<Count> counts)
    : nodes_(node_count), counts_(std::move(counts)) {
    if (nodes_ == 0 || counts_.size() % nodes_ != 0) {
        throw ValidationError("surveillance counts are not a whole number of rows");
    }
}

void SurveillanceSeries::push_row(std::span<const Count> row) {
    if (nodes_ == 0) nodes_ = row.size();
    if (row.size() != nodes_) throw ValidationError("surveillance row has wrong width");
    counts_.insert(counts_.end(), row.begin(), row.end());
}

std::vector<Violation> validate(const SurveillanceSeries& series, const MetapopNetwork& network) {
    std::vector<Violation> out;
    if (series.node_count() != network.size()) {
        out.push_back({"node count mismatch", std::to_string(series.node_count()) + " vs " +
                                                  std::to_string(network.size())});
        return out;
    }
    const bool snapshots = !series.populations().empty();
    for (std::size_t t = 0; t < series.ticks(); ++t) {
        for (NodeId i = 0; i < static_cast<NodeId>(series.node_count()); ++i) {
            const Count I = series.infected(t, i);
            const Count N = snapshots ? series.populations()[t * series.node_count() + static_cast<std::size_t>(i)]
                                      : network.population(i);
            if (I < 0 || I > N) {
                out.push_back({"infected count out of range", "t=" + std::to_string(t) + " node " +
                                                                  std::to_string(i) + " I=" + std::to_string(I)});
            }
        }
    }
    return out;
}

std::string format_surveillance(const SurveillanceSeries& series) {
    std::ostringstream out;
    out << "t,node,I\n";
    const auto n = static_cast<NodeId>(series.node_count());
    for (std::size_t t = 0; t < series.ticks(); ++t) {
        for (NodeId i = 0; i < n; ++i) {
            const Count I = series.infected(t, i);
            // First and last ticks are written in full so the tick range survives.
            const bool full = t == 0 || t + 1 == series.ticks();
            if (full || I != 0 || I != series.infected(t - 1, i)) out << t << ',' << i << ',' << I << "\n";
        }
    }
    return out.str();
}

SurveillanceSeries parse_surveillance(const std::string& text, std::size_t node_count) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::map<std::size_t, std::vector<std::pair<NodeId, Count>>> rows;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "t,node,I") throw ParseError("expected header `t,node,I`", lineno);
            header = true;
            continue;
        }
        std::array<std::string_view, 3> field;
        std::string_view rest(line);
        for (int k = 0; k < 3; ++k) {
            auto comma = rest.find(',');
            if ((k < 2) != (comma != std::string_view::npos)) throw ParseError("expected 3 fields", lineno);
            field[static_cast<std::size_t>(k)] = rest.substr(0, comma);
            if (k < 2) rest = rest.substr(comma + 1);
        }
        auto t = parse_number<std::size_t>(field[0]);
        auto node = parse_number<NodeId>(field[1]);
        auto I = parse_number<Count>(field[2]);
        if (!t || !node || !I) throw ParseError("bad surveillance row '" + line + "'", lineno);
        if (*node < 0 || static_cast<std::size_t>(*node) >= node_count) {
            throw ParseError("node " + std::to_string(*node) + " out of range", lineno);
        }
        rows[*t].emplace_back(*node, *I);
    }
    if (!header) throw ParseError("missing header `t,node,I`", lineno);
    if (rows.empty() || rows.begin()->first != 0) throw ParseError("missing t=0 rows", 0);
    if (rows.at(0).size() != node_count) throw ParseError("t=0 must list every node", 0);

    const std::size_t last = rows.rbegin()->first;
    SurveillanceSeries series;
    std::vector<Count> current(node_count, 0);
    for (std::size_t t = 0; t <= last; ++t) {
        if (auto it = rows.find(t); it != rows.end()) {
            for (auto [node, I] : it->second) current[static_cast<std::size_t>(node)] = I;
        }
        series.push_row(current);
    }
    return series;
}

void save_surveillance(const SurveillanceSeries& series, const std::filesystem::path& path) {
    write_file(path, format_surveillance(series));
}

SurveillanceSeries load_surveillance(const std::filesystem::path& path, std::size_t node_count) {
    return parse_surveillance(read_file(path), node_count);
}

} // namespace pathfinder
