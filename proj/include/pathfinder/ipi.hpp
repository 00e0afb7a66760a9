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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathfinder/anatomy.hpp"
#include "pathfinder/estimators.hpp"
#include "pathfinder/network.hpp"

namespace pathfinder {

/// Mover counts per invasion edge, aligned with InvasionCase::edges.
using Allocation = std::vector<Count>;

struct CandidateSolution {
    Allocation allocation;
    double log_weight = 0.0;  // sum over sources of log Omega
    double posterior = 0.0;
};

struct IdentifiedPathway {
    std::vector<std::size_t> support;  // indices into InvasionCase::edges, ascending
    double merged_posterior = 1.0;
    double solution_count = 1.0;       // M; a double because factorized cases can be huge
    bool unique = false;               // settled without scoring (single source or theorem)
    bool tie = false;                  // argmax decided by the lexicographic tie-break
};

/// Normalized entropy of the solution posterior and the derived
/// identifiability, with the lower/upper bounds it must satisfy.
struct IdentifiabilityReport {
    double entropy = 0.0;          // in [0,1], base-2 logs (base cancels)
    double pi = 1.0;               // largest single-solution posterior
    double identifiability = 1.0;  // pi * (1 - entropy)
    double identifiability_min = 1.0;
    double identifiability_max = 1.0;
    double p_min = 1.0;
    double p_max = 1.0;
    bool bound_violation = false;
};

enum class Resolution { Forced, Theorem1, Theorem2, Enumerated, Factorized, Degenerate };
std::string_view to_string(Resolution r);

struct CaseResult {
    IdentifiedPathway pathway;
    IdentifiabilityReport report;
    Resolution resolution = Resolution::Forced;
    std::string diagnostic;
};

struct IpiOptions {
    /// Above this many candidate allocations a case is scored per destination
    /// (factorized) instead of jointly.
    double max_solutions = 50000;
    bool fast_paths = true;
};

/// One context per case source, in case.sources order.
std::vector<SourceContext> source_contexts(const InvasionCase& c, const ObservabilityView& view,
                                           const MetapopNetwork& network);

/// Unique allocation when the drops of the fully accounted sources add up to
/// the arrivals (single destination). Sources with a positive drop whose other
/// neighbors are all S->S or I->S count as fully accounted.
std::optional<Allocation> theorem1_unique(const InvasionCase& c, const ObservabilityView& view);

/// Unique non-negative integral solution of {column sums = H_k, row sums =
/// drop_i} when the case is closed (every non-invasion neighbor observable)
/// and drops balance arrivals. Exact rational elimination; throws
/// DataInconsistencyError when the closed system has no solution.
std::optional<Allocation> theorem2_unique(const InvasionCase& c, const ObservabilityView& view);

/// Every non-negative integer allocation meeting the arrival counts with row
/// sums within I(t-1). Throws DataInconsistencyError when none exists and
/// std::length_error when more than `limit` exist.
std::vector<Allocation> enumerate_solutions(const InvasionCase& c, const ObservabilityView& view,
                                            double limit = 1e7);

/// Product of per-destination composition counts, ignoring row capacities.
double solution_count_bound(const InvasionCase& c);

/// Bayesian posterior over allocations. Throws DegenerateCaseError when every
/// allocation has zero likelihood.
std::vector<CandidateSolution> score_solutions(const InvasionCase& c, std::span<const SourceContext> contexts,
                                               std::vector<Allocation> allocations);

/// Groups solutions by edge support and returns the most probable support.
IdentifiedPathway merge_and_select(const InvasionCase& c, std::span<const CandidateSolution> solutions);

/// Posterior of one destination under the factorized fallback; allocations
/// are aligned with `edges` (indices into InvasionCase::edges).
struct DestinationPosterior {
    std::vector<std::size_t> edges;
    std::vector<CandidateSolution> solutions;
};

/// Per-destination posteriors used when a case is too large to score jointly.
/// Each source is charged the marginal of the single edge it uses.
std::vector<DestinationPosterior> factorized_posteriors(const InvasionCase& c, const ObservabilityView& view,
                                                        std::span<const SourceContext> contexts);

IdentifiabilityReport compute_identifiability(std::span<const double> posteriors);

/// Runs the fast paths, then enumeration (or the factorized fallback) for one case.
CaseResult identify_case(const InvasionCase& c, const ObservabilityView& view, const MetapopNetwork& network,
                         const IpiOptions& options = {});

struct PathwayEdge {
    NodeId src = 0;
    NodeId dst = 0;
    int tick = -1;              // -1 for static (baseline) trees
    std::size_t case_id = 0;
    CaseClass cls = CaseClass::OneToOne;
    double pi = 1.0;
    double entropy = 0.0;
    double identifiability = 1.0;
    bool unique = false;

    bool operator==(const PathwayEdge&) const = default;
};

struct PathwayTree {
    NodeId root = -1;
    std::vector<PathwayEdge> edges;
};

/// Chronological union of the identified supports.
PathwayTree assemble_tree(std::span<const InvasionCase> cases, std::span<const CaseResult> results, NodeId root);

struct IpiRun {
    std::vector<InvasionEvent> events;
    std::vector<InvasionCase> cases;
    std::vector<ObservabilityView> views;
    std::vector<CaseResult> results;
    PathwayTree tree;
};

/// Whole pipeline: events, partition, per-case identification, assembly.
/// The root is the node infected at t = 0 (first positive node).
IpiRun identify_pathways(const SurveillanceSeries& series, const MetapopNetwork& network,
                         const IpiOptions& options = {});

/// CSV `tick,src,dst,case_id,case_class,pi,entropy,identifiability,unique`.
std::string format_ipi_tree(const PathwayTree& tree);
/// JSON diagnostics: one entry per case.
std::string format_ipi_report(const IpiRun& run);

} // namespace pathfinder
