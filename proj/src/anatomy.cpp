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

#include "pathfinder/anatomy.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pathfinder/errors.hpp"

namespace pathfinder {

std::string_view to_string(CaseClass cls) {
    switch (cls) {
    case CaseClass::OneToOne: return "I->S";
    case CaseClass::OneToMany: return "I->nS";
    case CaseClass::ManyToOne: return "mI->S";
    case CaseClass::ManyToMany: return "mI->nS";
    }
    return "?";
}

CaseClass case_class_from_string(std::string_view text) {
    for (CaseClass c : {CaseClass::OneToOne, CaseClass::OneToMany, CaseClass::ManyToOne, CaseClass::ManyToMany}) {
        if (to_string(c) == text) return c;
    }
    throw ParseError("unknown case class '" + std::string(text) + "'", 0);
}

CaseClass classify_shape(std::size_t sources, std::size_t destinations) {
    if (sources == 0 || destinations == 0) throw std::invalid_argument("invasion case needs both sides");
    if (sources == 1) return destinations == 1 ? CaseClass::OneToOne : CaseClass::OneToMany;
    return destinations == 1 ? CaseClass::ManyToOne : CaseClass::ManyToMany;
}

std::size_t InvasionCase::source_index(NodeId node) const {
    auto it = std::lower_bound(sources.begin(), sources.end(), node);
    if (it == sources.end() || *it != node) throw std::out_of_range("node is not a source of this case");
    return static_cast<std::size_t>(it - sources.begin());
}

std::size_t InvasionCase::destination_index(NodeId node) const {
    auto it = std::lower_bound(destinations.begin(), destinations.end(), node);
    if (it == destinations.end() || *it != node) throw std::out_of_range("node is not a destination of this case");
    return static_cast<std::size_t>(it - destinations.begin());
}

std::vector<InvasionEvent> detect_events(const SurveillanceSeries& series, const MetapopNetwork& network) {
    if (series.node_count() != network.size()) throw ValidationError("series and network sizes differ");
    std::vector<InvasionEvent> events;
    for (std::size_t t = 1; t < series.ticks(); ++t) {
        const auto before = series.row(t - 1);
        const auto after = series.row(t);
        InvasionEvent event;
        event.tick = static_cast<int>(t);
        std::set<NodeId> sources;
        for (NodeId j = 0; j < static_cast<NodeId>(network.size()); ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (before[uj] != 0 || after[uj] <= 0) continue;
            bool fed = false;
            for (const Edge& in : network.in_edges(j)) {
                if (before[static_cast<std::size_t>(in.node)] > 0) {
                    sources.insert(in.node);
                    fed = true;
                }
            }
            if (!fed) {
                throw DataInconsistencyError("tick " + std::to_string(t) + ": node " + std::to_string(j) +
                                             " turned positive with no infected neighbor");
            }
            event.newly_infected.push_back(j);
            event.arrivals.push_back(after[uj]);
        }
        if (event.newly_infected.empty()) continue;
        event.infected_neighbors.assign(sources.begin(), sources.end());
        events.push_back(std::move(event));
    }
    return events;
}

std::vector<InvasionCase> invasion_partition(const InvasionEvent& event, const MetapopNetwork& network) {
    const std::set<NodeId> infected(event.infected_neighbors.begin(), event.infected_neighbors.end());
    std::set<NodeId> remaining(event.newly_infected.begin(), event.newly_infected.end());
    auto arrivals_of = [&](NodeId j) {
        auto it = std::lower_bound(event.newly_infected.begin(), event.newly_infected.end(), j);
        return event.arrivals[static_cast<std::size_t>(it - event.newly_infected.begin())];
    };

    std::vector<InvasionCase> cases;
    while (!remaining.empty()) {
        std::set<NodeId> dst{*remaining.begin()};
        std::set<NodeId> src;
        std::vector<NodeId> frontier{*remaining.begin()};
        // Alternate: destinations pull in their infected in-neighbors, which
        // pull in their newly infected out-neighbors, until closure.
        while (!frontier.empty()) {
            std::vector<NodeId> new_sources;
            for (NodeId j : frontier) {
                for (const Edge& in : network.in_edges(j)) {
                    if (infected.count(in.node) && src.insert(in.node).second) new_sources.push_back(in.node);
                }
            }
            frontier.clear();
            for (NodeId i : new_sources) {
                for (const Edge& out : network.out_edges(i)) {
                    if (remaining.count(out.node) && dst.insert(out.node).second) frontier.push_back(out.node);
                }
            }
        }

        InvasionCase c;
        c.tick = event.tick;
        c.sources.assign(src.begin(), src.end());
        c.destinations.assign(dst.begin(), dst.end());
        for (NodeId j : c.destinations) {
            c.arrivals.push_back(arrivals_of(j));
            remaining.erase(j);
        }
        for (NodeId i : c.sources) {
            for (const Edge& out : network.out_edges(i)) {
                if (dst.count(out.node)) c.edges.push_back({i, out.node, out.rate});
            }
        }
        std::sort(c.edges.begin(), c.edges.end(),
                  [](const InvasionEdge& a, const InvasionEdge& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
        c.cls = classify_shape(c.sources.size(), c.destinations.size());
        cases.push_back(std::move(c));
    }
    return cases;
}

Transition transition_of(Count before, Count after) {
    if (before == 0) return after == 0 ? Transition::StaysSusceptible : Transition::Infection;
    if (after == 0) return Transition::Reversion;
    return after < before ? Transition::Decrease : Transition::NonDecrease;
}

Observability observability_of(Transition transition) {
    switch (transition) {
    case Transition::Decrease: return Observability::PartiallyObservable;
    case Transition::NonDecrease: return Observability::Unobservable;
    default: return Observability::Observable;
    }
}

std::string_view to_string(Transition t) {
    switch (t) {
    case Transition::StaysSusceptible: return "S->S";
    case Transition::Infection: return "S->I";
    case Transition::Reversion: return "I->S";
    case Transition::Decrease: return "I->I-";
    case Transition::NonDecrease: return "I->I+";
    }
    return "?";
}

std::string_view to_string(Observability o) {
    switch (o) {
    case Observability::Observable: return "observable";
    case Observability::PartiallyObservable: return "partially-observable";
    case Observability::Unobservable: return "unobservable";
    }
    return "?";
}

std::string_view to_string(EdgeClass e) {
    switch (e) {
    case EdgeClass::Invasion: return "invasion";
    case EdgeClass::Observable: return "observable";
    case EdgeClass::PartiallyObservable: return "partially-observable";
    case EdgeClass::Unobservable: return "unobservable";
    }
    return "?";
}

ObservabilityView classify_observability(const InvasionCase& c, const SurveillanceSeries& series,
                                         const MetapopNetwork& network) {
    const auto t = static_cast<std::size_t>(c.tick);
    if (t == 0 || t >= series.ticks()) throw std::out_of_range("case tick outside the surveillance series");
    const std::set<NodeId> destinations(c.destinations.begin(), c.destinations.end());
    const std::set<NodeId> sources(c.sources.begin(), c.sources.end());

    ObservabilityView view;
    view.tick = c.tick;
    std::set<NodeId> seen;
    for (NodeId i : c.sources) {
        SourceView sv{};
        sv.node = i;
        sv.before = series.infected(t - 1, i);
        sv.after = series.infected(t, i);
        sv.drop = std::max<Count>(sv.before - sv.after, 0);
        sv.transition = transition_of(sv.before, sv.after);
        sv.cls = observability_of(sv.transition);
        for (const Edge& e : network.out_edges(i)) {
            if (destinations.count(e.node)) {
                sv.edge_classes.push_back(EdgeClass::Invasion);
                continue;
            }
            const Transition tr = transition_of(series.infected(t - 1, e.node), series.infected(t, e.node));
            if (tr == Transition::Infection) {
                throw std::logic_error("newly infected neighbor outside its invasion case");
            }
            switch (observability_of(tr)) {
            case Observability::Observable: sv.edge_classes.push_back(EdgeClass::Observable); break;
            case Observability::PartiallyObservable: sv.edge_classes.push_back(EdgeClass::PartiallyObservable); break;
            case Observability::Unobservable: sv.edge_classes.push_back(EdgeClass::Unobservable); break;
            }
            if (!sources.count(e.node) && seen.insert(e.node).second) {
                view.neighbors.push_back({e.node, tr, observability_of(tr)});
            }
        }
        view.sources.push_back(std::move(sv));
    }
    std::sort(view.neighbors.begin(), view.neighbors.end(),
              [](const NodeObservation& a, const NodeObservation& b) { return a.node < b.node; });
    return view;
}

std::string format_case_dump(const std::vector<InvasionCase>& cases, const std::vector<ObservabilityView>& views) {
    if (cases.size() != views.size()) throw std::invalid_argument("one view per case required");
    std::ostringstream out;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const InvasionCase& c = cases[k];
        nlohmann::json j;
        j["case_id"] = k;
        j["tick"] = c.tick;
        j["class"] = to_string(c.cls);
        j["sources"] = c.sources;
        j["destinations"] = c.destinations;
        j["arrivals"] = c.arrivals;
        auto& edges = j["invasion_edges"] = nlohmann::json::array();
        for (const auto& e : c.edges) edges.push_back({{"src", e.src}, {"dst", e.dst}, {"rate", e.rate}});
        auto& srcs = j["view"]["sources"] = nlohmann::json::array();
        for (const auto& sv : views[k].sources) {
            nlohmann::json s{{"node", sv.node},
                             {"before", sv.before},
                             {"after", sv.after},
                             {"drop", sv.drop},
                             {"transition", to_string(sv.transition)},
                             {"class", to_string(sv.cls)}};
            auto& ec = s["edge_classes"] = nlohmann::json::array();
            for (EdgeClass e : sv.edge_classes) ec.push_back(to_string(e));
            srcs.push_back(std::move(s));
        }
        auto& nb = j["view"]["neighbors"] = nlohmann::json::array();
        for (const auto& o : views[k].neighbors) {
            nb.push_back({{"node", o.node}, {"transition", to_string(o.transition)}, {"class", to_string(o.cls)}});
        }
        out << j.dump() << "\n";
    }
    return out.str();
}

} // namespace pathfinder
