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

#include "pathfinder/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pathfinder/errors.hpp"
#include "pathfinder/rng.hpp"

namespace pathfinder {

namespace {

constexpr std::uint32_t kTopologySalt = 0x746f706fu;
constexpr std::uint32_t kThetaSalt = 0x74686574u;

std::uint64_t bounded(PhiloxStream& rng, std::uint64_t range) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * range) >> 64);
}

struct Line {
    double intercept;
    double slope;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    if (!(sxx > 0.0)) throw ConfigError("degenerate regression: all abscissae equal");
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

} // namespace

void check_config(const NetGenConfig& config) {
    if (config.attachment_m < 1) throw ConfigError("attachment_m must be >= 1");
    if (config.node_count <= config.attachment_m) throw ConfigError("node_count must exceed attachment_m");
    if (!(config.mobility_constant > 0.0 && config.mobility_constant < 1.0)) {
        throw ConfigError("mobility constant C must lie in (0,1)");
    }
    if (!(config.theta_var >= 0.0)) throw ConfigError("theta variance must be >= 0");
    if (config.initial_population < 1) throw ConfigError("initial population must be >= 1");
}

MetapopNetwork generate_ba_topology(const NetGenConfig& config) {
    check_config(config);
    const auto n = static_cast<std::size_t>(config.node_count);
    const auto m = static_cast<std::size_t>(config.attachment_m);
    std::vector<std::vector<Edge>> adj(n);
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * m * n);

    auto link = [&](std::size_t a, std::size_t b) {
        adj[a].push_back({static_cast<NodeId>(b), 0.0});
        adj[b].push_back({static_cast<NodeId>(a), 0.0});
        endpoints.push_back(static_cast<NodeId>(a));
        endpoints.push_back(static_cast<NodeId>(b));
    };
    for (std::size_t a = 0; a <= m; ++a) {
        for (std::size_t b = a + 1; b <= m; ++b) link(a, b);
    }

    PhiloxStream rng(config.seed, kTopologySalt);
    std::vector<NodeId> chosen;
    for (std::size_t v = m + 1; v < n; ++v) {
        chosen.clear();
        while (chosen.size() < m) {
            const NodeId target = endpoints[bounded(rng, endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), target) == chosen.end()) chosen.push_back(target);
        }
        for (NodeId target : chosen) link(v, static_cast<std::size_t>(target));
    }
    return MetapopNetwork(std::vector<Count>(n, config.initial_population), std::move(adj), true);
}

std::vector<double> draw_thetas(const NetGenConfig& config, std::size_t node_count) {
    std::vector<double> thetas(node_count, config.mean_theta);
    if (config.theta_var > 0.0) {
        PhiloxStream rng(config.seed, kThetaSalt);
        std::normal_distribution<double> gauss(config.mean_theta, std::sqrt(config.theta_var));
        for (double& theta : thetas) theta = gauss(rng);
    }
    return thetas;
}

MetapopNetwork assign_diffusion_rates(const MetapopNetwork& topology, const NetGenConfig& config,
                                      std::span<const double> thetas) {
    if (thetas.size() != topology.size()) throw ConfigError("need one theta per node");
    const double C = config.mobility_constant;
    std::vector<std::vector<double>> rates(topology.size());
    std::vector<double> sorted;
    for (NodeId i = 0; i < static_cast<NodeId>(topology.size()); ++i) {
        const auto edges = topology.out_edges(i);
        auto& row = rates[static_cast<std::size_t>(i)];
        row.reserve(edges.size());
        const double theta = thetas[static_cast<std::size_t>(i)];
        for (const Edge& e : edges) row.push_back(std::pow(static_cast<double>(topology.degree(e.node)), theta));
        // Summing in sorted order keeps the normalizer independent of neighbor order.
        sorted = row;
        std::sort(sorted.begin(), sorted.end());
        const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
        for (double& p : row) p = p / total * C;
    }
    return topology.with_rates(rates);
}

std::vector<double> inbound_traffic(const MetapopNetwork& network) {
    std::vector<double> traffic(network.size(), 0.0);
    for (NodeId i = 0; i < static_cast<NodeId>(network.size()); ++i) {
        for (const Edge& e : network.out_edges(i)) {
            traffic[static_cast<std::size_t>(e.node)] += e.rate * static_cast<double>(network.population(i));
        }
    }
    return traffic;
}

double traffic_degree_exponent(const MetapopNetwork& network) {
    const auto traffic = inbound_traffic(network);
    std::vector<std::pair<double, double>> points;  // (log k, log T)
    for (NodeId i = 0; i < static_cast<NodeId>(network.size()); ++i) {
        const auto k = network.degree(i);
        if (k == 0 || !(traffic[static_cast<std::size_t>(i)] > 0.0)) continue;
        points.emplace_back(std::log(static_cast<double>(k)), std::log(traffic[static_cast<std::size_t>(i)]));
    }
    if (points.size() < 2) throw ConfigError("degenerate ensemble: fewer than two nodes with traffic");
    std::stable_sort(points.begin(), points.end(), [](auto& a, auto& b) { return a.first < b.first; });

    constexpr std::size_t kBins = 10;
    const std::size_t bins = std::min(kBins, points.size());
    std::vector<double> xs, ys;
    for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t lo = b * points.size() / bins;
        const std::size_t hi = (b + 1) * points.size() / bins;
        double sx = 0.0, sy = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            sx += points[k].first;
            sy += points[k].second;
        }
        xs.push_back(sx / static_cast<double>(hi - lo));
        ys.push_back(sy / static_cast<double>(hi - lo));
    }
    try {
        return least_squares(xs, ys).slope;
    } catch (const ConfigError&) {
        throw ConfigError("degenerate ensemble: every node has the same degree");
    }
}

MetapopNetwork generate_network(const NetGenConfig& config) {
    const MetapopNetwork topology = generate_ba_topology(config);
    MetapopNetwork network = assign_diffusion_rates(topology, config, draw_thetas(config, topology.size()));
    if (config.population_mode == PopulationMode::TrafficScaled) {
        const auto traffic = inbound_traffic(network);
        std::vector<double> weight(traffic.size());
        for (std::size_t i = 0; i < traffic.size(); ++i) weight[i] = std::pow(traffic[i], config.population_exponent);
        const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
        const double budget = static_cast<double>(config.initial_population) * static_cast<double>(traffic.size());
        std::vector<Count> populations(traffic.size());
        for (std::size_t i = 0; i < traffic.size(); ++i) {
            populations[i] = std::max<Count>(1, std::llround(weight[i] / total * budget));
        }
        network = network.with_populations(std::move(populations));
    }
    return network;
}

double ensemble_exponent(std::span<const MetapopNetwork> ensemble, const NetGenConfig& config, double mean_theta,
                         double theta_var) {
    if (ensemble.empty()) throw ConfigError("calibration needs at least one network");
    double total = 0.0;
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
        NetGenConfig draw = config;
        draw.mean_theta = mean_theta;
        draw.theta_var = theta_var;
        draw.seed = mix_seed(config.seed, k);
        const auto thetas = draw_thetas(draw, ensemble[k].size());
        total += traffic_degree_exponent(assign_diffusion_rates(ensemble[k], draw, thetas));
    }
    return total / static_cast<double>(ensemble.size());
}

ThetaCalibration calibrate_theta(std::span<const MetapopNetwork> ensemble, const NetGenConfig& config,
                                 std::span<const double> theta_grid, std::span<const double> variance_grid) {
    if (theta_grid.empty()) throw ConfigError("theta grid is empty");
    const double base_var = variance_grid.empty() ? config.theta_var : variance_grid.front();

    ThetaCalibration out{};
    for (double theta : theta_grid) out.grid_exponents.push_back(ensemble_exponent(ensemble, config, theta, base_var));

    if (theta_grid.size() == 1) {
        out.mean_theta = theta_grid.front();
    } else {
        const Line fit = least_squares(theta_grid, out.grid_exponents);
        if (fit.slope == 0.0) throw ConfigError("degenerate ensemble: exponent does not respond to theta");
        out.intercept = fit.intercept;
        out.slope = fit.slope;
        out.mean_theta = (config.target_exponent - fit.intercept) / fit.slope;

        // The line is only a first guess; the exponent bends with theta.
        // Refine by bisection inside the grid interval that brackets the target.
        for (std::size_t k = 0; k + 1 < theta_grid.size(); ++k) {
            const double ra = out.grid_exponents[k] - config.target_exponent;
            const double rb = out.grid_exponents[k + 1] - config.target_exponent;
            if (ra * rb > 0.0) continue;
            double lo = theta_grid[k], hi = theta_grid[k + 1];
            const bool rising = ra < rb;
            for (int step = 0; step < 40; ++step) {
                const double mid = 0.5 * (lo + hi);
                const double r = ensemble_exponent(ensemble, config, mid, base_var) - config.target_exponent;
                ((r < 0.0) == rising ? lo : hi) = mid;
            }
            out.mean_theta = 0.5 * (lo + hi);
            break;
        }
    }

    out.theta_var = base_var;
    if (variance_grid.size() > 1) {
        double best = INFINITY;
        for (double var : variance_grid) {
            const double r = ensemble_exponent(ensemble, config, out.mean_theta, var) - config.target_exponent;
            if (r * r < best) {
                best = r * r;
                out.theta_var = var;
            }
        }
    }
    return out;
}

} // namespace pathfinder
