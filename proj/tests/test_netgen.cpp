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

#include <cmath>
#include <map>

#include "pathfinder/errors.hpp"
#include "pathfinder/netgen.hpp"

using namespace pathfinder;

namespace {

double mean_degree(const MetapopNetwork& net) {
    return static_cast<double>(net.edge_count()) / static_cast<double>(net.size());
}

bool connected(const MetapopNetwork& net) {
    std::vector<char> seen(net.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (const Edge& e : net.out_edges(u)) {
            if (!seen[static_cast<std::size_t>(e.node)]) {
                seen[static_cast<std::size_t>(e.node)] = 1;
                ++count;
                stack.push_back(e.node);
            }
        }
    }
    return count == net.size();
}

/// Undirected topology from an edge list, rates left at zero.
MetapopNetwork topology(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& links) {
    std::vector<std::vector<Edge>> out(n);
    for (auto [a, b] : links) {
        out[static_cast<std::size_t>(a)].push_back({b, 0.0});
        out[static_cast<std::size_t>(b)].push_back({a, 0.0});
    }
    return MetapopNetwork(std::vector<Count>(n, 1000), std::move(out));
}

} // namespace

TEST_CASE("BA topology with m = 8 has mean degree 16") {
    NetGenConfig c;
    c.node_count = 3000;
    c.attachment_m = 8;
    const auto net = generate_ba_topology(c);
    CHECK(net.size() == 3000);
    CHECK(mean_degree(net) == doctest::Approx(16.0).epsilon(0.01));
    CHECK(connected(net));
    CHECK(validate(net).empty());
}

TEST_CASE("BA topology with m = 1 on 5 nodes is a tree") {
    NetGenConfig c;
    c.node_count = 5;
    c.attachment_m = 1;
    const auto net = generate_ba_topology(c);
    CHECK(net.edge_count() == 8);  // 4 undirected links
    CHECK(connected(net));
}

TEST_CASE("BA degree tail exponent is close to 3") {
    NetGenConfig c;
    c.node_count = 10000;
    c.attachment_m = 3;
    c.seed = 11;
    const auto net = generate_ba_topology(c);
    // Discrete power-law maximum likelihood estimate above k_min = 2m.
    const double kmin = 2.0 * c.attachment_m;
    double sum = 0.0;
    int tail = 0;
    for (NodeId i = 0; i < static_cast<NodeId>(net.size()); ++i) {
        const double k = static_cast<double>(net.degree(i));
        if (k < kmin) continue;
        sum += std::log(k / (kmin - 0.5));
        ++tail;
    }
    const double gamma = 1.0 + tail / sum;
    CHECK(gamma == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("configuration errors") {
    NetGenConfig c;
    c.node_count = 8;
    c.attachment_m = 8;
    CHECK_THROWS_AS(generate_ba_topology(c), ConfigError);
    c.node_count = 300;
    c.mobility_constant = 1.0;
    CHECK_THROWS_AS(check_config(c), ConfigError);
    c.mobility_constant = 0.1;
    c.theta_var = -1.0;
    CHECK_THROWS_AS(check_config(c), ConfigError);
}

TEST_CASE("rates follow the neighbor degree power") {
    // Node 0 links to node 1 (degree 2) and node 2 (degree 8).
    std::vector<std::pair<NodeId, NodeId>> links{{0, 1}, {0, 2}, {1, 3}};
    for (NodeId k = 4; k < 11; ++k) links.emplace_back(2, k);
    const auto topo = topology(11, links);
    NetGenConfig c;
    c.mobility_constant = 0.1;
    const std::vector<double> half(11, 0.5);
    const auto net = assign_diffusion_rates(topo, c, half);
    CHECK(*net.rate(0, 1) == doctest::Approx(0.1 / 3.0));
    CHECK(*net.rate(0, 2) == doctest::Approx(0.2 / 3.0));
    CHECK(*net.rate(3, 1) == doctest::Approx(0.1));  // single neighbor takes all of C

    const std::vector<double> zero(11, 0.0);
    const auto flat = assign_diffusion_rates(topo, c, zero);
    CHECK(*flat.rate(2, 5) == doctest::Approx(0.1 / 8.0));
    CHECK(*flat.rate(0, 2) == doctest::Approx(0.05));
}

TEST_CASE("every node sends exactly C") {
    NetGenConfig c;
    c.node_count = 500;
    c.theta_var = 0.2;
    const auto net = generate_network(c);
    double worst = 0.0;
    for (NodeId i = 0; i < static_cast<NodeId>(net.size()); ++i) {
        worst = std::max(worst, std::abs(net.outflux(i) - c.mobility_constant));
    }
    CHECK(worst < 1e-12);
    CHECK(validate(net).empty());
}

TEST_CASE("rates do not depend on neighbor order") {
    std::vector<std::pair<NodeId, NodeId>> links{{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 4}};
    auto reversed = links;
    std::reverse(reversed.begin(), reversed.end());
    NetGenConfig c;
    const std::vector<double> thetas{0.3, 0.7, 1.1, 0.2, 0.9};
    const auto a = assign_diffusion_rates(topology(5, links), c, thetas);
    const auto b = assign_diffusion_rates(topology(5, reversed), c, thetas);
    for (NodeId i = 0; i < 5; ++i) {
        for (const Edge& e : a.out_edges(i)) CHECK(*b.rate(i, e.node) == e.rate);
    }
}

TEST_CASE("same seed gives the same network") {
    NetGenConfig c;
    c.node_count = 400;
    c.theta_var = 0.1;
    c.seed = 99;
    CHECK(generate_network(c) == generate_network(c));
    NetGenConfig d = c;
    d.seed = 100;
    CHECK_FALSE(generate_network(c) == generate_network(d));
}

TEST_CASE("traffic-scaled populations keep the total") {
    NetGenConfig c;
    c.node_count = 300;
    c.population_mode = PopulationMode::TrafficScaled;
    const auto net = generate_network(c);
    Count total = 0;
    Count lo = net.population(0), hi = net.population(0);
    for (Count n : net.populations()) {
        total += n;
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    CHECK(static_cast<double>(total) == doctest::Approx(300.0 * 600000).epsilon(1e-3));
    CHECK(hi > lo);
}

TEST_CASE("calibration") {
    NetGenConfig c;
    c.node_count = 1000;
    std::vector<MetapopNetwork> ensemble;
    for (std::uint64_t s = 1; s <= 3; ++s) {
        c.seed = s;
        ensemble.push_back(generate_ba_topology(c));
    }

    SUBCASE("a single grid value comes back unchanged") {
        const std::vector<double> grid{0.7};
        const std::vector<double> var{0.0};
        const auto fit = calibrate_theta(ensemble, c, grid, var);
        CHECK(fit.mean_theta == 0.7);
        CHECK(fit.theta_var == 0.0);
    }

    SUBCASE("least squares agrees with a grid search and hits the target exponent") {
        const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
        const std::vector<double> var{0.0};
        const auto fit = calibrate_theta(ensemble, c, grid, var);
        // Brute-force oracle: squared residual on a fine grid.
        double best = 0.0, best_r = INFINITY;
        for (int k = 0; k <= 150; ++k) {
            const double theta = 0.01 * k;
            const double r = ensemble_exponent(ensemble, c, theta, 0.0) - c.target_exponent;
            if (r * r < best_r) {
                best_r = r * r;
                best = theta;
            }
        }
        CHECK(std::abs(fit.mean_theta - best) <= 0.005 + 1e-9);

        NetGenConfig tuned = c;
        tuned.mean_theta = fit.mean_theta;
        double slope = 0.0;
        for (std::uint64_t s = 11; s <= 13; ++s) {
            tuned.seed = s;
            slope += traffic_degree_exponent(generate_network(tuned)) / 3.0;
        }
        CHECK(slope == doctest::Approx(1.5).epsilon(0.1 / 1.5));
    }

    SUBCASE("a regular ensemble cannot be calibrated") {
        // A ring: every node has degree 2.
        std::vector<std::pair<NodeId, NodeId>> ring;
        for (NodeId i = 0; i < 20; ++i) ring.emplace_back(i, (i + 1) % 20);
        const std::vector<MetapopNetwork> flat{topology(20, ring)};
        const std::vector<double> grid{0.0, 1.0};
        const std::vector<double> var{0.0};
        CHECK_THROWS_AS(calibrate_theta(flat, c, grid, var), ConfigError);
    }
}
