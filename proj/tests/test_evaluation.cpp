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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "pathfinder/baselines.hpp"
#include "pathfinder/errors.hpp"
#include "pathfinder/evaluation.hpp"
#include "pathfinder/netgen.hpp"

using namespace pathfinder;

namespace {

// 0 -> 1, 0 -> 2 at tick 1; 1 -> 3, 2 -> 4 at tick 2.
GroundTruthLog small_truth() {
    GroundTruthLog t;
    t.first_arrivals.push_back({1, 1, 0, {{0, 5}}});
    t.first_arrivals.push_back({1, 2, 0, {{0, 3}}});
    t.first_arrivals.push_back({2, 3, 0, {{1, 2}}});
    t.first_arrivals.push_back({2, 4, 0, {{2, 1}}});
    return t;
}

PathwayTree stamped(std::initializer_list<std::tuple<int, NodeId, NodeId>> edges) {
    PathwayTree t;
    t.root = 0;
    for (auto [tick, s, d] : edges) t.edges.push_back({.src = s, .dst = d, .tick = tick});
    return t;
}

NetGenConfig small_net() {
    NetGenConfig g;
    g.node_count = 80;
    g.attachment_m = 3;
    g.initial_population = 5000;
    g.seed = 9;
    return g;
}

} // namespace

TEST_CASE("scoring examples") {
    const auto truth = small_truth();
    const CaseIndex none;
    CHECK(score_tree(stamped({{1, 0, 1}, {1, 0, 2}, {2, 1, 3}, {2, 2, 4}}), truth, 5, 0, 50, none).whole.accuracy() ==
          1.0);
    CHECK(score_tree(stamped({{1, 0, 1}, {1, 0, 2}, {2, 1, 3}, {2, 1, 4}}), truth, 5, 0, 50, none).whole.accuracy() ==
          0.75);
    // Right pair, wrong tick.
    CHECK(score_tree(stamped({{2, 0, 1}}), truth, 5, 0, 50, none).whole.correct == 0);
    PathwayTree wrong;
    wrong.root = 0;
    for (auto [s, d] : {std::pair{3, 1}, {4, 2}, {0, 3}, {0, 4}}) wrong.edges.push_back({.src = s, .dst = d});
    CHECK(score_tree(wrong, truth, 5, 0, 50, none).whole.accuracy() == 0.0);
    PathwayTree right;
    right.root = 0;
    for (auto [s, d] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 4}}) right.edges.push_back({.src = s, .dst = d});
    const auto s = score_tree(right, truth, 5, 0, 50, none);
    CHECK(s.whole.accuracy() == 1.0);
    CHECK(s.whole.total == 4);
    CHECK_THROWS_AS(score_tree(stamped({{1, 0, 9}}), truth, 5, 0, 50, none), ValidationError);
}

TEST_CASE("early stage takes the root and the first arrivals") {
    const auto truth = small_truth();
    CHECK(infection_order(truth, 0, 3) == std::vector<NodeId>{0, 1, 2});
    const auto s = score_tree(stamped({{1, 0, 1}, {2, 1, 3}}), truth, 5, 0, 3, {});
    CHECK(s.early.total == 2);
    CHECK(s.early.correct == 1);
    CHECK(s.whole.correct == 2);
    CHECK(default_early_cutoff(300) == 50);
    CHECK(default_early_cutoff(3000) == 300);
}

TEST_CASE("realization scores are consistent") {
    const auto net = generate_network(small_net());
    SimConfig c;
    c.rng_seed = 21;
    const auto sim = run(net, c);
    const auto ipi = identify_pathways(sim.series, net);
    const std::map<std::string, PathwayTree> baselines{{"arr", arr_tree(net, 0)}, {"eff", eff_tree(net, 0)}};
    const auto r = evaluate_realization(net, sim, &ipi, baselines, 0, 50);
    REQUIRE_FALSE(r.no_spread);
    for (const auto& [method, score] : r.scores) {
        CAPTURE(method);
        CHECK(score.early.total <= score.whole.total);
        CHECK(score.early.correct <= score.whole.correct);
        CHECK(score.whole.total == r.truth_edges);
        std::size_t total = 0;
        for (const auto& [cls, t] : score.per_class) total += t.total;
        CHECK(total == score.whole.total);
    }
    CHECK(r.scores.at("arr").whole.correct == r.scores.at("eff").whole.correct);
    CHECK(r.cases.size() == ipi.cases.size());
}

TEST_CASE("case correctness compares supports with true sources") {
    const auto net = generate_network(small_net());
    SimConfig c;
    c.rng_seed = 3;
    const auto sim = run(net, c);
    const auto ipi = identify_pathways(sim.series, net);
    const auto outcomes = case_outcomes(ipi, sim.truth);
    std::map<std::pair<int, NodeId>, std::set<NodeId>> truth;
    for (const auto& e : truth_edges(sim.truth)) truth[{e.tick, e.dst}].insert(e.src);
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const auto& cs = ipi.cases[k];
        std::set<std::pair<NodeId, NodeId>> want, got;
        for (NodeId j : cs.destinations) {
            for (NodeId i : truth[{cs.tick, j}]) want.emplace(i, j);
        }
        for (std::size_t e : ipi.results[k].pathway.support) got.emplace(cs.edges[e].src, cs.edges[e].dst);
        CHECK(outcomes[k].correct == (want == got));
        if (cs.cls == CaseClass::OneToOne) CHECK(outcomes[k].correct);
    }
}

TEST_CASE("no spread when the seed cannot move") {
    std::vector<std::vector<Edge>> out{{{1, 0.0}}, {{0, 0.1}}};
    const MetapopNetwork net({100, 100}, out);
    ExperimentConfig x;
    x.realizations = 2;
    x.methods = {"ipi", "arr"};
    const auto report = run_experiment(net, x);
    for (const auto& r : report.realizations) CHECK(r.no_spread);
    CHECK(format_aggregate(report).find("\"no_spread\": true") != std::string::npos);
}

TEST_CASE("experiments do not depend on the job count") {
    const auto net = generate_network(small_net());
    ExperimentConfig x;
    x.realizations = 4;
    x.mcml_runs = 6;
    x.sim.rng_seed = 77;
    const auto one = run_experiment(net, x);
    x.jobs = 3;
    const auto three = run_experiment(net, x);
    CHECK(format_aggregate(one) == format_aggregate(three));
    CHECK(format_series(one) == format_series(three));
    CHECK(format_class_accuracy(one) == format_class_accuracy(three));
    CHECK(format_wrong_cases(one.misidentified) == format_wrong_cases(three.misidentified));
    CHECK(one.realizations[1].seed == mix_seed(77, 1));
    CHECK(one.baseline_trees.at("arr").edges == one.baseline_trees.at("eff").edges);
    x.sim.rng_seed = 78;
    CHECK(format_series(run_experiment(net, x)) != format_series(one));
}

TEST_CASE("misidentification statistics") {
    auto outcome = [](CaseClass cls, bool correct, double id, Resolution res = Resolution::Enumerated) {
        CaseOutcome o;
        o.cls = cls;
        o.correct = correct;
        o.identifiability = id;
        o.resolution = res;
        return o;
    };
    std::vector<std::vector<CaseOutcome>> runs{
        {outcome(CaseClass::ManyToOne, false, 0.1), outcome(CaseClass::ManyToOne, true, 0.5),
         outcome(CaseClass::OneToOne, false, 0.0)},
        {outcome(CaseClass::ManyToOne, false, 0.3), outcome(CaseClass::ManyToMany, true, 0.2),
         outcome(CaseClass::ManyToOne, false, 0.9, Resolution::Degenerate)}};
    const auto stats = misidentification_stats(runs);
    REQUIRE(stats.wrong.size() == 2);
    CHECK(stats.wrong[1].realization == 1);
    const auto& m1 = stats.per_class.at(CaseClass::ManyToOne);
    CHECK(m1.wrong == 2);
    CHECK(m1.correct == 1);
    CHECK(m1.mean_wrong == doctest::Approx(0.2));
    CHECK(m1.mean_correct == doctest::Approx(0.5));
    CHECK(stats.per_class.at(CaseClass::ManyToMany).correct == 1);
    const auto csv = format_wrong_cases(stats);
    CHECK(csv.rfind("realization,case_id,class,M,entropy,identifiability\n", 0) == 0);
}
