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

#include <cstdint>
#include <span>
#include <vector>

#include "pathfinder/network.hpp"

namespace pathfinder {

enum class PopulationMode { Uniform, TrafficScaled };

struct NetGenConfig {
    int node_count = 300;
    int attachment_m = 8;
    double mean_theta = 0.5;
    double theta_var = 0.0;
    double mobility_constant = 0.1;
    Count initial_population = 600000;
    std::uint64_t seed = 1;
    double target_exponent = 1.5;
    PopulationMode population_mode = PopulationMode::Uniform;
    /// N ~ T^lambda when population_mode is TrafficScaled.
    double population_exponent = 0.5;
};

/// Throws ConfigError when the configuration cannot produce a network.
void check_config(const NetGenConfig& config);

/// Barabasi-Albert growth from a complete graph on m+1 nodes. Every
/// undirected link becomes a pair of directed edges; rates are left at 0.
MetapopNetwork generate_ba_topology(const NetGenConfig& config);

/// One theta per source node drawn from N(mean_theta, theta_var).
std::vector<double> draw_thetas(const NetGenConfig& config, std::size_t node_count);

/// p_ij = C * k_j^theta_i / sum_{l in nbr(i)} k_l^theta_i.
MetapopNetwork assign_diffusion_rates(const MetapopNetwork& topology, const NetGenConfig& config,
                                      std::span<const double> thetas);

/// Inbound traffic T_i = sum_l p_li * N_l.
std::vector<double> inbound_traffic(const MetapopNetwork& network);

/// Least-squares slope of log T against log k over degree-decile bins.
double traffic_degree_exponent(const MetapopNetwork& network);

/// Topology, rates and (optionally) traffic-scaled populations in one call.
MetapopNetwork generate_network(const NetGenConfig& config);

struct ThetaCalibration {
    double mean_theta;
    double theta_var;
    /// Mean fitted exponent at each grid theta (same order as the grid).
    std::vector<double> grid_exponents;
    /// Intercept and slope of the exponent-vs-theta least-squares line.
    double intercept = 0.0;
    double slope = 0.0;
};

/// Fits exponent(theta) ~ a + b*theta over `theta_grid` on the topology
/// ensemble and solves a + b*theta = target, then refines by bisection when
/// two grid points bracket the target. With a single grid value that
/// value is returned unchanged. `variance_grid` candidates are scored by the
/// squared exponent residual at the fitted mean; the best is returned.
ThetaCalibration calibrate_theta(std::span<const MetapopNetwork> ensemble, const NetGenConfig& config,
                                 std::span<const double> theta_grid, std::span<const double> variance_grid);

/// Mean fitted exponent over the ensemble for one (theta mean, variance) pair.
double ensemble_exponent(std::span<const MetapopNetwork> ensemble, const NetGenConfig& config, double mean_theta,
                         double theta_var);

} // namespace pathfinder
