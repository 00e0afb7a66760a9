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

#include <span>
#include <vector>

#include "pathfinder/anatomy.hpp"
#include "pathfinder/network.hpp"

namespace pathfinder {

/// What a source's mobility looks like during one invasion case.
///
/// Rates out of the source split into invasion edges (into the case's
/// destinations), hidden edges (into partially observable or unobservable
/// neighbors), observable edges (into neighbors that provably received no
/// infected host) and the residence probability.
struct SourceContext {
    Count before = 0;  // I_i(t-1)
    Count after = 0;   // I_i(t)
    Count drop = 0;    // max(before - after, 0)
    Observability cls = Observability::Unobservable;
    std::vector<double> invasion_rates;
    double hidden_edge_mass = 0.0;
    double stay_mass = 1.0;
    double observable_mass = 0.0;

    /// sum of hidden edge rates plus the residence probability.
    double hidden_mass() const { return hidden_edge_mass + stay_mass; }
    /// Hosts known to have left: all of them for I->S, the drop when partially observable.
    Count confirmed_travelers() const;
};

/// Builds the context of one source from its observability view. `edges`
/// are the invasion edges of this source in the order the allocation uses.
SourceContext make_source_context(const SourceView& view, const MetapopNetwork& network,
                                  std::span<const InvasionEdge> edges);

/// log Omega for a single invasion edge carrying h hosts.
/// Throws std::domain_error when h > before or the context has != 1 invasion edge.
double log_omega_single(const SourceContext& ctx, Count h);
double omega_single(const SourceContext& ctx, Count h);

/// log Omega for an allocation over every invasion edge of the source.
/// With one invasion edge this is exactly log_omega_single.
double log_omega_multi(const SourceContext& ctx, std::span<const Count> h);
double omega_multi(const SourceContext& ctx, std::span<const Count> h);

namespace detail {
/// General split-sum evaluation used by log_omega_multi for two or more edges.
double log_omega_general(const SourceContext& ctx, std::span<const Count> h);
}

/// log(exp(a) + exp(b)) with -inf handled.
double log_add(double a, double b);
/// log sum exp over a range; -inf for an empty or all -inf range.
double log_sum_exp(std::span<const double> values);
/// k * log(p) with the convention 0 * log(0) = 0.
double xlogy(double k, double p);

} // namespace pathfinder
