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

#include "pathfinder/ipi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "pathfinder/errors.hpp"

namespace pathfinder {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-12;
constexpr double kBoundTolerance = 1e-12;

using Rational = boost::multiprecision::cpp_rational;

/// [begin, end) of each source's edges inside the (src, dst)-sorted edge list.
std::vector<std::pair<std::size_t, std::size_t>> source_ranges(const InvasionCase& c) {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t k = 0;
    for (NodeId i : c.sources) {
        const std::size_t begin = k;
        while (k < c.edges.size() && c.edges[k].src == i) ++k;
        ranges.emplace_back(begin, k);
    }
    return ranges;
}

/// True when every edge of the source that is not an invasion edge leads to
/// a neighbor that provably received nothing (S->S or I->S).
bool fully_accounted(const SourceView& sv) {
    return std::all_of(sv.edge_classes.begin(), sv.edge_classes.end(),
                       [](EdgeClass e) { return e == EdgeClass::Invasion || e == EdgeClass::Observable; });
}

std::vector<std::size_t> support_of(const Allocation& a) {
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > 0) support.push_back(k);
    }
    return support;
}

/// Summary of a posterior distribution sufficient for the identifiability
/// report; lets the factorized path avoid materializing every solution.
struct PosteriorSummary {
    double log_count = 0.0;  // ln M
    double entropy = 0.0;    // nats
    double largest = 1.0;
    double second = 0.0;
    double smallest = 1.0;
};

double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

IdentifiabilityReport report_from_summary(const PosteriorSummary& s) {
    IdentifiabilityReport r;
    r.pi = s.largest;
    if (s.log_count <= 0.0) {
        r.entropy = 0.0;
        r.identifiability = r.pi;
        r.identifiability_min = r.identifiability_max = r.pi;
        r.p_min = r.p_max = r.pi;
        return r;
    }
    const double count = std::exp(s.log_count);
    const double pi = s.largest;
    r.entropy = std::clamp(s.entropy / s.log_count, 0.0, 1.0);
    r.identifiability = pi * (1.0 - r.entropy);

    // Largest entropy compatible with a winner of mass pi: uniform remainder.
    double fano = entropy_term(pi);
    if (pi < 1.0) fano += -(1.0 - pi) * (std::log1p(-pi) - std::log(count - 1.0));
    r.identifiability_min = (1.0 - std::clamp(fano / s.log_count, 0.0, 1.0)) / count;
    // Shannon entropy is at least the min-entropy -ln(pi).
    r.identifiability_max = pi + pi * std::log(pi) / s.log_count;

    r.p_max = pi / (pi + s.second);
    r.p_min = std::max(1.0 / count, pi / (s.smallest + 1.0));

    r.bound_violation = r.identifiability < r.identifiability_min - kBoundTolerance ||
                        r.identifiability > r.identifiability_max + kBoundTolerance ||
                        pi < r.p_min - kBoundTolerance || pi > r.p_max + kBoundTolerance;
    return r;
}

PosteriorSummary summarize(std::span<const double> posteriors) {
    PosteriorSummary s;
    s.log_count = std::log(static_cast<double>(posteriors.size()));
    std::vector<double> sorted(posteriors.begin(), posteriors.end());
    std::sort(sorted.begin(), sorted.end());
    s.largest = sorted.back();
    s.second = sorted.size() > 1 ? sorted[sorted.size() - 2] : 0.0;
    s.smallest = sorted.front();
    s.entropy = 0.0;
    for (double p : sorted) s.entropy += entropy_term(p);
    return s;
}

/// Winner among merged supports: largest mass, lexicographically smallest
/// support among (near-)ties.
template <typename Map>
std::pair<typename Map::const_iterator, bool> pick_support(const Map& merged) {
    double best = 0.0;
    for (const auto& [support, mass] : merged) best = std::max(best, mass);
    auto winner = merged.end();
    int contenders = 0;
    for (auto it = merged.begin(); it != merged.end(); ++it) {
        if (it->second >= best * (1.0 - kTieTolerance)) {
            if (winner == merged.end()) winner = it;
            ++contenders;
        }
    }
    return {winner, contenders > 1};
}

IdentifiedPathway unique_pathway(const Allocation& allocation) {
    IdentifiedPathway p;
    p.support = support_of(allocation);
    p.merged_posterior = 1.0;
    p.solution_count = 1.0;
    p.unique = true;
    return p;
}

void enumerate_into(const InvasionCase& c, const std::vector<std::vector<std::size_t>>& by_destination,
                    std::vector<Count>& capacity, Allocation& current, std::size_t dest, std::size_t pos,
                    Count left, double limit, std::vector<Allocation>& out) {
    if (dest == by_destination.size()) {
        if (static_cast<double>(out.size()) >= limit) {
            throw std::length_error("more than " + std::to_string(static_cast<long long>(limit)) + " allocations");
        }
        out.push_back(current);
        return;
    }
    const auto& edges = by_destination[dest];
    if (pos == edges.size()) {
        if (left == 0) {
            enumerate_into(c, by_destination, capacity, current, dest + 1, 0,
                           dest + 1 < c.arrivals.size() ? c.arrivals[dest + 1] : 0, limit, out);
        }
        return;
    }
    const std::size_t e = edges[pos];
    const std::size_t s = c.source_index(c.edges[e].src);
    const bool last = pos + 1 == edges.size();
    const Count hi = std::min(left, capacity[s]);
    for (Count v = last ? left : 0; v <= hi; ++v) {
        current[e] = v;
        capacity[s] -= v;
        enumerate_into(c, by_destination, capacity, current, dest, pos + 1, left - v, limit, out);
        capacity[s] += v;
    }
    current[e] = 0;
}

std::vector<std::vector<std::size_t>> edges_by_destination(const InvasionCase& c) {
    std::vector<std::vector<std::size_t>> by_destination(c.destinations.size());
    for (std::size_t e = 0; e < c.edges.size(); ++e) {
        by_destination[c.destination_index(c.edges[e].dst)].push_back(e);
    }
    return by_destination;
}

double log_binomial(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

} // namespace

std::vector<DestinationPosterior> factorized_posteriors(const InvasionCase& c, const ObservabilityView& view,
                                                        std::span<const SourceContext> contexts) {
    const auto ranges = source_ranges(c);
    const auto by_destination = edges_by_destination(c);
    std::vector<DestinationPosterior> out;
    for (std::size_t k = 0; k < c.destinations.size(); ++k) {
        DestinationPosterior d;
        d.edges = by_destination[k];
        const auto& edges = d.edges;
        std::vector<Allocation> local;
        Allocation current(edges.size(), 0);
        auto compose = [&](auto&& self, std::size_t pos, Count left) -> void {
            if (pos == edges.size()) {
                if (left == 0) local.push_back(current);
                return;
            }
            const std::size_t s = c.source_index(c.edges[edges[pos]].src);
            const Count hi = std::min(left, view.sources[s].before);
            for (Count v = pos + 1 == edges.size() ? left : 0; v <= hi; ++v) {
                current[pos] = v;
                self(self, pos + 1, left - v);
            }
            current[pos] = 0;
        };
        compose(compose, 0, c.arrivals[k]);
        if (local.empty()) {
            throw DataInconsistencyError("destination " + std::to_string(c.destinations[k]) +
                                         " cannot receive its arrivals from its infected neighbors");
        }

        // Marginal of one invasion edge: the source's other invasion edges
        // are lumped with its hidden edges.
        std::vector<SourceContext> marginal;
        for (std::size_t e : edges) {
            const std::size_t s = c.source_index(c.edges[e].src);
            SourceContext m = contexts[s];
            for (std::size_t j = ranges[s].first; j < ranges[s].second; ++j) {
                if (j != e) m.hidden_edge_mass += c.edges[j].rate;
            }
            m.invasion_rates = {c.edges[e].rate};
            marginal.push_back(std::move(m));
        }
        std::vector<double> logw;
        for (const Allocation& a : local) {
            double lw = 0.0;
            for (std::size_t pos = 0; pos < edges.size(); ++pos) lw += log_omega_single(marginal[pos], a[pos]);
            logw.push_back(lw);
        }
        const double norm = log_sum_exp(logw);
        if (norm == kNegInf) {
            throw DegenerateCaseError("destination " + std::to_string(c.destinations[k]) +
                                      ": every allocation has zero likelihood");
        }
        for (std::size_t j = 0; j < local.size(); ++j) {
            d.solutions.push_back({std::move(local[j]), logw[j], std::exp(logw[j] - norm)});
        }
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

/// Scores each destination on its own: compositions of H_k over its
/// in-edges, each source charged with the marginal of that single edge.
CaseResult identify_factorized(const InvasionCase& c, const ObservabilityView& view,
                               std::span<const SourceContext> contexts) {
    CaseResult result;
    result.resolution = Resolution::Factorized;
    PosteriorSummary total;
    total.largest = total.smallest = 1.0;
    double second_ratio = 0.0;  // max over k of second_k / largest_k
    IdentifiedPathway& pathway = result.pathway;
    pathway.merged_posterior = 1.0;
    pathway.solution_count = 1.0;

    for (const DestinationPosterior& d : factorized_posteriors(c, view, contexts)) {
        std::vector<double> post;
        std::map<std::vector<std::size_t>, double> merged;
        for (const CandidateSolution& x : d.solutions) {
            post.push_back(x.posterior);
            std::vector<std::size_t> support;
            for (std::size_t pos = 0; pos < d.edges.size(); ++pos) {
                if (x.allocation[pos] > 0) support.push_back(d.edges[pos]);
            }
            merged[support] += x.posterior;
        }
        const auto [winner, tie] = pick_support(merged);
        pathway.support.insert(pathway.support.end(), winner->first.begin(), winner->first.end());
        pathway.merged_posterior *= winner->second;
        pathway.tie = pathway.tie || tie;
        pathway.solution_count *= static_cast<double>(d.solutions.size());

        const PosteriorSummary s = summarize(post);
        total.log_count += s.log_count;
        total.entropy += s.entropy;
        total.largest *= s.largest;
        total.smallest *= s.smallest;
        second_ratio = std::max(second_ratio, s.second / s.largest);
    }
    total.second = total.largest * second_ratio;
    std::sort(pathway.support.begin(), pathway.support.end());
    result.report = report_from_summary(total);
    result.diagnostic = "factorized over " + std::to_string(c.destinations.size()) + " destinations";
    return result;
}

} // namespace

std::string_view to_string(Resolution r) {
    switch (r) {
    case Resolution::Forced: return "forced";
    case Resolution::Theorem1: return "theorem1";
    case Resolution::Theorem2: return "theorem2";
    case Resolution::Enumerated: return "enumerated";
    case Resolution::Factorized: return "factorized";
    case Resolution::Degenerate: return "degenerate";
    }
    return "?";
}

std::vector<SourceContext> source_contexts(const InvasionCase& c, const ObservabilityView& view,
                                           const MetapopNetwork& network) {
    const auto ranges = source_ranges(c);
    std::vector<SourceContext> out;
    for (std::size_t s = 0; s < c.sources.size(); ++s) {
        const std::span<const InvasionEdge> edges(c.edges.data() + ranges[s].first, ranges[s].second - ranges[s].first);
        out.push_back(make_source_context(view.sources[s], network, edges));
    }
    return out;
}

std::optional<Allocation> theorem1_unique(const InvasionCase& c, const ObservabilityView& view) {
    if (c.cls != CaseClass::ManyToOne) return std::nullopt;
    Allocation allocation(c.edges.size(), 0);
    Count accounted = 0;
    for (std::size_t s = 0; s < c.sources.size(); ++s) {
        const SourceView& sv = view.sources[s];
        if (sv.drop == 0 || !fully_accounted(sv)) continue;
        // One destination, so edge index == source index.
        allocation[s] = sv.drop;
        accounted += sv.drop;
    }
    if (accounted != c.arrivals.front()) return std::nullopt;
    return allocation;
}

std::optional<Allocation> theorem2_unique(const InvasionCase& c, const ObservabilityView& view) {
    if (c.cls != CaseClass::ManyToMany) return std::nullopt;
    const std::size_t m = c.sources.size();
    const std::size_t n = c.destinations.size();
    const std::size_t vars = c.edges.size();
    if (vars > n + m) return std::nullopt;
    Count drops = 0;
    for (const SourceView& sv : view.sources) {
        if (!fully_accounted(sv)) return std::nullopt;
        drops += sv.drop;
    }
    const Count arrivals = std::accumulate(c.arrivals.begin(), c.arrivals.end(), Count{0});
    if (drops != arrivals) return std::nullopt;

    // Rows: one per destination (column sums) then one per source (row sums).
    std::vector<std::vector<Rational>> a(n + m, std::vector<Rational>(vars + 1, 0));
    for (std::size_t e = 0; e < vars; ++e) {
        a[c.destination_index(c.edges[e].dst)][e] = 1;
        a[n + c.source_index(c.edges[e].src)][e] = 1;
    }
    for (std::size_t k = 0; k < n; ++k) a[k][vars] = c.arrivals[k];
    for (std::size_t s = 0; s < m; ++s) a[n + s][vars] = view.sources[s].drop;

    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < vars && rank < a.size(); ++col) {
        std::size_t piv = rank;
        while (piv < a.size() && a[piv][col] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[rank]);
        const Rational inv = 1 / a[rank][col];
        for (auto& v : a[rank]) v *= inv;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == rank || a[r][col] == 0) continue;
            const Rational f = a[r][col];
            for (std::size_t k = col; k <= vars; ++k) a[r][k] -= f * a[rank][k];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t r = rank; r < a.size(); ++r) {
        if (a[r][vars] != 0) {
            throw DataInconsistencyError("tick " + std::to_string(c.tick) +
                                         ": closed invasion case has no flow matching drops and arrivals");
        }
    }
    if (rank < vars) return std::nullopt;

    Allocation allocation(vars, 0);
    for (std::size_t r = 0; r < rank; ++r) {
        const Rational& v = a[r][vars];
        if (denominator(v) != 1 || v < 0) return std::nullopt;
        allocation[pivot_col[r]] = static_cast<Count>(numerator(v));
    }
    return allocation;
}

double solution_count_bound(const InvasionCase& c) {
    const auto by_destination = edges_by_destination(c);
    double log_bound = 0.0;
    for (std::size_t k = 0; k < by_destination.size(); ++k) {
        const double h = static_cast<double>(c.arrivals[k]);
        const double slots = static_cast<double>(by_destination[k].size());
        log_bound += log_binomial(h + slots - 1.0, slots - 1.0);
    }
    return std::exp(log_bound);
}

std::vector<Allocation> enumerate_solutions(const InvasionCase& c, const ObservabilityView& view, double limit) {
    std::vector<Count> capacity;
    for (const SourceView& sv : view.sources) capacity.push_back(sv.before);
    const auto by_destination = edges_by_destination(c);
    Allocation current(c.edges.size(), 0);
    std::vector<Allocation> out;
    enumerate_into(c, by_destination, capacity, current, 0, 0, c.arrivals.empty() ? 0 : c.arrivals[0], limit, out);
    if (out.empty()) {
        throw DataInconsistencyError("tick " + std::to_string(c.tick) +
                                     ": no allocation of arrivals fits the sources' infected counts");
    }
    return out;
}

std::vector<CandidateSolution> score_solutions(const InvasionCase& c, std::span<const SourceContext> contexts,
                                               std::vector<Allocation> allocations) {
    if (allocations.empty()) throw std::invalid_argument("no solutions to score");
    const auto ranges = source_ranges(c);
    std::vector<std::map<Allocation, double>> memo(c.sources.size());
    std::vector<CandidateSolution> out;
    out.reserve(allocations.size());
    std::vector<double> logw;
    for (Allocation& a : allocations) {
        double lw = 0.0;
        for (std::size_t s = 0; s < c.sources.size() && lw != kNegInf; ++s) {
            Allocation row(a.begin() + static_cast<std::ptrdiff_t>(ranges[s].first),
                           a.begin() + static_cast<std::ptrdiff_t>(ranges[s].second));
            auto it = memo[s].find(row);
            if (it == memo[s].end()) it = memo[s].emplace(row, log_omega_multi(contexts[s], row)).first;
            lw += it->second;
        }
        logw.push_back(lw);
        out.push_back({std::move(a), lw, 0.0});
    }
    const double norm = log_sum_exp(logw);
    if (norm == kNegInf) {
        throw DegenerateCaseError("tick " + std::to_string(c.tick) + ": every allocation has zero likelihood");
    }
    for (auto& s : out) s.posterior = std::exp(s.log_weight - norm);
    return out;
}

IdentifiedPathway merge_and_select(const InvasionCase& c, std::span<const CandidateSolution> solutions) {
    if (solutions.empty()) throw std::invalid_argument("no solutions to merge");
    std::map<std::vector<std::size_t>, double> merged;
    for (const auto& s : solutions) {
        if (s.allocation.size() != c.edges.size()) throw std::invalid_argument("allocation does not match the case");
        merged[support_of(s.allocation)] += s.posterior;
    }
    const auto [winner, tie] = pick_support(merged);
    IdentifiedPathway p;
    p.support = winner->first;
    p.merged_posterior = winner->second;
    p.solution_count = static_cast<double>(solutions.size());
    p.tie = tie;
    return p;
}

IdentifiabilityReport compute_identifiability(std::span<const double> posteriors) {
    if (posteriors.empty()) throw std::invalid_argument("identifiability needs at least one solution");
    return report_from_summary(summarize(posteriors));
}

CaseResult identify_case(const InvasionCase& c, const ObservabilityView& view, const MetapopNetwork& network,
                         const IpiOptions& options) {
    CaseResult result;
    if (c.cls == CaseClass::OneToOne || c.cls == CaseClass::OneToMany) {
        result.resolution = Resolution::Forced;
        result.pathway = unique_pathway(Allocation(c.edges.size(), 1));
        return result;
    }

    if (options.fast_paths) {
        try {
            auto unique = c.cls == CaseClass::ManyToOne ? theorem1_unique(c, view) : theorem2_unique(c, view);
            if (unique) {
                result.resolution = c.cls == CaseClass::ManyToOne ? Resolution::Theorem1 : Resolution::Theorem2;
                result.pathway = unique_pathway(*unique);
                return result;
            }
        } catch (const DataInconsistencyError& e) {
            result.diagnostic = e.what();
        }
    }

    const auto contexts = source_contexts(c, view, network);
    try {
        if (solution_count_bound(c) > options.max_solutions) {
            auto factorized = identify_factorized(c, view, contexts);
            if (!result.diagnostic.empty()) factorized.diagnostic += "; " + result.diagnostic;
            return factorized;
        }
        const auto solutions = score_solutions(c, contexts, enumerate_solutions(c, view));
        result.resolution = Resolution::Enumerated;
        result.pathway = merge_and_select(c, solutions);
        std::vector<double> posteriors;
        for (const auto& s : solutions) posteriors.push_back(s.posterior);
        result.report = compute_identifiability(posteriors);
    } catch (const DataInconsistencyError& e) {
        result = CaseResult{};
        result.resolution = Resolution::Degenerate;
        result.pathway.merged_posterior = 0.0;
        result.diagnostic = e.what();
    } catch (const DegenerateCaseError& e) {
        result = CaseResult{};
        result.resolution = Resolution::Degenerate;
        result.pathway.merged_posterior = 0.0;
        result.diagnostic = e.what();
    }
    return result;
}

PathwayTree assemble_tree(std::span<const InvasionCase> cases, std::span<const CaseResult> results, NodeId root) {
    if (cases.size() != results.size()) throw std::invalid_argument("one result per case required");
    PathwayTree tree;
    tree.root = root;
    std::vector<std::size_t> order(cases.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cases[a].tick < cases[b].tick; });
    for (std::size_t id : order) {
        const InvasionCase& c = cases[id];
        const CaseResult& r = results[id];
        for (std::size_t e : r.pathway.support) {
            PathwayEdge edge;
            edge.src = c.edges[e].src;
            edge.dst = c.edges[e].dst;
            edge.tick = c.tick;
            edge.case_id = id;
            edge.cls = c.cls;
            edge.pi = r.pathway.merged_posterior;
            edge.entropy = r.report.entropy;
            edge.identifiability = r.report.identifiability;
            edge.unique = r.pathway.unique;
            tree.edges.push_back(edge);
        }
    }
    return tree;
}

IpiRun identify_pathways(const SurveillanceSeries& series, const MetapopNetwork& network, const IpiOptions& options) {
    IpiRun run;
    NodeId root = -1;
    if (series.ticks() > 0) {
        for (NodeId i = 0; i < static_cast<NodeId>(series.node_count()); ++i) {
            if (series.infected(0, i) > 0) {
                root = i;
                break;
            }
        }
    }
    run.events = detect_events(series, network);
    for (const InvasionEvent& event : run.events) {
        for (InvasionCase& c : invasion_partition(event, network)) {
            run.views.push_back(classify_observability(c, series, network));
            run.cases.push_back(std::move(c));
        }
    }
    for (std::size_t k = 0; k < run.cases.size(); ++k) {
        run.results.push_back(identify_case(run.cases[k], run.views[k], network, options));
    }
    run.tree = assemble_tree(run.cases, run.results, root);
    return run;
}

std::string format_ipi_tree(const PathwayTree& tree) {
    std::ostringstream out;
    out << "tick,src,dst,case_id,case_class,pi,entropy,identifiability,unique\n";
    for (const PathwayEdge& e : tree.edges) {
        out << e.tick << ',' << e.src << ',' << e.dst << ',' << e.case_id << ',' << to_string(e.cls) << ','
            << format_double(e.pi) << ',' << format_double(e.entropy) << ',' << format_double(e.identifiability) << ','
            << (e.unique ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string format_ipi_report(const IpiRun& run) {
    nlohmann::json j;
    j["root"] = run.tree.root;
    j["events"] = run.events.size();
    std::map<std::string, int> by_resolution;
    auto& cases = j["cases"] = nlohmann::json::array();
    for (std::size_t k = 0; k < run.cases.size(); ++k) {
        const InvasionCase& c = run.cases[k];
        const CaseResult& r = run.results[k];
        ++by_resolution[std::string(to_string(r.resolution))];
        nlohmann::json support = nlohmann::json::array();
        for (std::size_t e : r.pathway.support) support.push_back({c.edges[e].src, c.edges[e].dst});
        cases.push_back({{"case_id", k},
                         {"tick", c.tick},
                         {"class", to_string(c.cls)},
                         {"resolution", to_string(r.resolution)},
                         {"sources", c.sources.size()},
                         {"destinations", c.destinations.size()},
                         {"solutions", r.pathway.solution_count},
                         {"support", support},
                         {"merged_posterior", r.pathway.merged_posterior},
                         {"pi", r.report.pi},
                         {"entropy", r.report.entropy},
                         {"identifiability", r.report.identifiability},
                         {"identifiability_bounds", {r.report.identifiability_min, r.report.identifiability_max}},
                         {"pi_bounds", {r.report.p_min, r.report.p_max}},
                         {"bound_violation", r.report.bound_violation},
                         {"tie", r.pathway.tie},
                         {"diagnostic", r.diagnostic}});
    }
    j["resolutions"] = by_resolution;
    return j.dump(2) + "\n";
}

} // namespace pathfinder
