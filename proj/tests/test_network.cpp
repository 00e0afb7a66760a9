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

#include <filesystem>

#include "pathfinder/errors.hpp"
#include "pathfinder/network.hpp"

using namespace pathfinder;

namespace {

MetapopNetwork two_nodes() { return MetapopNetwork({100, 100}, {{{1, 0.1}}, {{0, 0.1}}}); }

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
    for (const auto& x : v) {
        if (x.rule == rule) return true;
    }
    return false;
}

} // namespace

TEST_CASE("two-node network is valid") {
    const auto net = two_nodes();
    CHECK(validate(net).empty());
    CHECK(net.size() == 2);
    CHECK(net.edge_count() == 2);
    CHECK(net.rate(0, 1) == doctest::Approx(0.1));
    CHECK_FALSE(net.rate(0, 0).has_value());
    CHECK(net.stay_probability(0) == doctest::Approx(0.9));
    REQUIRE(net.in_edges(1).size() == 1);
    CHECK(net.in_edges(1)[0].node == 0);
}

TEST_CASE("validation rules") {
    CHECK(has_rule(validate(MetapopNetwork({100, 100}, {{{1, 1.0}}, {}})), "no residence mass"));
    CHECK(has_rule(validate(MetapopNetwork({100}, {{{0, 0.1}}})), "self-loop forbidden"));
    CHECK(has_rule(validate(MetapopNetwork({100, 100}, {{{1, 0.1}, {1, 0.2}}, {}})), "multi-edge forbidden"));
    CHECK(has_rule(validate(MetapopNetwork({0, 100}, {{}, {}})), "population must be positive"));
    CHECK(has_rule(validate(MetapopNetwork({100, 100}, {{{1, -0.1}}, {}})), "rate out of range"));
    CHECK(has_rule(validate(MetapopNetwork({}, {})), "empty network"));
    CHECK_THROWS_AS(MetapopNetwork({1}, {{{3, 0.1}}}), ValidationError);
}

TEST_CASE("network text round trip") {
    const auto net = MetapopNetwork({100, 250, 7}, {{{1, 0.1}, {2, 1.0 / 3.0}}, {{0, 0.123456789012345}}, {}});
    const auto back = parse_network(format_network(net));
    CHECK(back == net);
    CHECK(format_network(back) == format_network(net));
}

TEST_CASE("network file with rate 1.5 fails validation on load") {
    const auto path = std::filesystem::temp_directory_path() / "pathfinder_bad_rate.txt";
    write_file(path, "nodes 2\ndirected 1\nnode 0 10\nnode 1 10\nedge 0 1 1.5\n");
    CHECK_THROWS_AS(load_network(path), ValidationError);
    std::filesystem::remove(path);
}

TEST_CASE("string labels map to dense ids in sorted order") {
    const auto net = parse_network("# cities\nnodes 3\nnode paris 10\nnode berlin 20\nnode rome 30\n"
                                   "uedge paris rome 0.2\n");
    REQUIRE(net.labels().size() == 3);
    CHECK(net.labels()[0] == "berlin");
    CHECK(net.labels()[1] == "paris");
    CHECK(net.population(0) == 20);
    CHECK(net.rate(1, 2) == doctest::Approx(0.2));
    CHECK(net.rate(2, 1) == doctest::Approx(0.2));
    CHECK(parse_network(format_network(net)) == net);
}

TEST_CASE("malformed network text reports the line") {
    try {
        parse_network("nodes 2\nnode 0 10\nnode 1 10\nedge 0 9 0.1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
}

TEST_CASE("surveillance round trip keeps every tick") {
    SurveillanceSeries s(3, {5, 0, 0, 4, 1, 0, 4, 1, 0, 4, 1, 0});
    REQUIRE(s.ticks() == 4);
    const auto text = format_surveillance(s);
    CHECK(text.rfind("t,node,I\n", 0) == 0);
    const auto back = parse_surveillance(text, 3);
    CHECK(back == s);
}

TEST_CASE("surveillance validation") {
    const auto net = two_nodes();
    CHECK(validate(SurveillanceSeries(2, {5, 0, 3, 2}), net).empty());
    CHECK(has_rule(validate(SurveillanceSeries(2, {101, 0}), net), "infected count out of range"));
    CHECK(has_rule(validate(SurveillanceSeries(3, {1, 0, 0}), net), "node count mismatch"));
    CHECK_THROWS_AS(parse_surveillance("t,node,I\n1,0,3\n", 2), ParseError);
    CHECK_THROWS_AS(parse_surveillance("t,node\n", 2), ParseError);
}
