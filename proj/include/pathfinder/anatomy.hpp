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

#include <string>
#include <string_view>
#include <vector>

#include "pathfinder/network.hpp"

namespace pathfinder {

/// Four invasion-case shapes by (|sources|, |destinations|).
enum class CaseClass { OneToOne, OneToMany, ManyToOne, ManyToMany };

std::string_view to_string(CaseClass cls);
CaseClass case_class_from_string(std::string_view text);
CaseClass classify_shape(std::size_t sources, std::size_t destinations);

/// All nodes that turned positive at one tick.
struct InvasionEvent {
    int tick = 0;
    std::vector<NodeId> newly_infected;      // sorted
    std::vector<NodeId> infected_neighbors;  // sorted; I(t-1) > 0 with an edge into newly_infected
    std::vector<Count> arrivals;             // H_j = I_j(t), aligned with newly_infected
};

struct InvasionEdge {
    NodeId src;
    NodeId dst;
    double rate;

    bool operator==(const InvasionEdge&) const = default;
};

struct InvasionCase {
    int tick = 0;
    CaseClass cls = CaseClass::OneToOne;
    std::vector<NodeId> sources;        // sorted
    std::vector<NodeId> destinations;   // sorted
    std::vector<Count> arrivals;        // aligned with destinations
    std::vector<InvasionEdge> edges;    // sorted by (src, dst)

    std::size_t source_index(NodeId node) const;
    std::size_t destination_index(NodeId node) const;
};

/// Events at every tick with at least one 0 -> positive transition.
/// Throws DataInconsistencyError when a new node has no infected in-neighbor.
std::vector<InvasionEvent> detect_events(const SurveillanceSeries& series, const MetapopNetwork& network);

/// Splits an event into connected source/destination components, ordered
/// by smallest destination id.
std::vector<InvasionCase> invasion_partition(const InvasionEvent& event, const MetapopNetwork& network);

enum class Transition { StaysSusceptible, Infection, Reversion, Decrease, NonDecrease };
enum class Observability { Observable, PartiallyObservable, Unobservable };
enum class EdgeClass { Invasion, Observable, PartiallyObservable, Unobservable };

Transition transition_of(Count before, Count after);
Observability observability_of(Transition transition);
std::string_view to_string(Transition t);
std::string_view to_string(Observability o);
std::string_view to_string(EdgeClass e);

struct NodeObservation {
    NodeId node;
    Transition transition;
    Observability cls;
};

struct SourceView {
    NodeId node;
    Count before;  // I(t-1)
    Count after;   // I(t)
    Count drop;    // max(I(t-1) - I(t), 0)
    Transition transition;
    Observability cls;
    std::vector<EdgeClass> edge_classes;  // aligned with network.out_edges(node)
};

struct ObservabilityView {
    int tick = 0;
    std::vector<SourceView> sources;          // aligned with case.sources
    std::vector<NodeObservation> neighbors;   // out-neighbors of sources outside the case, sorted
};

ObservabilityView classify_observability(const InvasionCase& c, const SurveillanceSeries& series,
                                         const MetapopNetwork& network);

/// One JSON object per line: tick, class, sources, destinations, edges, arrivals, view.
std::string format_case_dump(const std::vector<InvasionCase>& cases, const std::vector<ObservabilityView>& views);

} // namespace pathfinder
