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

#include "pathfinder/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pathfinder {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_factorial(Count n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_choose(Count n, Count k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); }

/// Relative rates of a confirmed traveler: it left through an invasion edge
/// or a hidden edge, never stayed and never took an observable edge.
double traveler_denominator(const SourceContext& ctx) {
    return std::accumulate(ctx.invasion_rates.begin(), ctx.invasion_rates.end(), 0.0) + ctx.hidden_edge_mass;
}

void check_allocation(const SourceContext& ctx, std::span<const Count> h) {
    if (h.size() != ctx.invasion_rates.size()) {
        throw std::domain_error("allocation length does not match the number of invasion edges");
    }
    Count total = 0;
    for (Count v : h) {
        if (v < 0) throw std::domain_error("negative allocation");
        total += v;
    }
    if (total > ctx.before) {
        throw std::domain_error("allocation of " + std::to_string(total) + " exceeds I(t-1) = " +
                                std::to_string(ctx.before));
    }
}

} // namespace

double xlogy(double k, double p) {
    if (k == 0.0) return 0.0;
    return p > 0.0 ? k * std::log(p) : kNegInf;
}

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_sum_exp(std::span<const double> values) {
    double hi = kNegInf;
    for (double v : values) hi = std::max(hi, v);
    if (hi == kNegInf) return kNegInf;
    double total = 0.0;
    for (double v : values) total += std::exp(v - hi);
    return hi + std::log(total);
}

Count SourceContext::confirmed_travelers() const {
    switch (cls) {
    case Observability::Observable: return before;
    case Observability::PartiallyObservable: return drop;
    case Observability::Unobservable: return 0;
    }
    return 0;
}

SourceContext make_source_context(const SourceView& view, const MetapopNetwork& network,
                                  std::span<const InvasionEdge> edges) {
    SourceContext ctx;
    ctx.before = view.before;
    ctx.after = view.after;
    ctx.drop = view.drop;
    ctx.cls = view.cls;
    for (const InvasionEdge& e : edges) {
        if (e.src != view.node) throw std::invalid_argument("invasion edge does not leave this source");
        ctx.invasion_rates.push_back(e.rate);
    }
    const auto out = network.out_edges(view.node);
    std::size_t invasion = 0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        switch (view.edge_classes[k]) {
        case EdgeClass::Invasion: ++invasion; break;
        case EdgeClass::Observable: ctx.observable_mass += out[k].rate; break;
        case EdgeClass::PartiallyObservable:
        case EdgeClass::Unobservable: ctx.hidden_edge_mass += out[k].rate; break;
        }
    }
    if (invasion != edges.size()) throw std::invalid_argument("view and case disagree on invasion edges");
    ctx.stay_mass = network.stay_probability(view.node);
    return ctx;
}

double log_omega_single(const SourceContext& ctx, Count h) {
    if (ctx.invasion_rates.size() != 1) throw std::domain_error("single-destination estimator needs one invasion edge");
    if (h < 0 || h > ctx.before) {
        throw std::domain_error("h = " + std::to_string(h) + " outside [0, I(t-1) = " + std::to_string(ctx.before) + "]");
    }
    const double p = ctx.invasion_rates.front();
    const double hm = ctx.hidden_mass();
    const Count n = ctx.before;

    if (ctx.cls == Observability::Unobservable) {
        // Multinomial marginal: h hosts over the invasion edge, the rest hidden or home.
        return log_choose(n, h) + xlogy(static_cast<double>(h), p) + xlogy(static_cast<double>(n - h), hm);
    }

    const double den = p + ctx.hidden_edge_mass;
    const Count confirmed = ctx.confirmed_travelers();
    if (den <= 0.0) return confirmed == 0 && h == 0 ? 0.0 : kNegInf;
    const double r = p / den;
    const double q = ctx.hidden_edge_mass / den;

    if (ctx.cls == Observability::Observable) {
        if (h > confirmed) return kNegInf;
        return log_choose(confirmed, h) + xlogy(static_cast<double>(h), r) +
               xlogy(static_cast<double>(confirmed - h), q);
    }

    // Partially observable: phi of the confirmed travelers miss the
    // destination, the other h - (confirmed - phi) arrivals come from the
    // hosts not known to have left.
    const Count rest = n - confirmed;
    double total = kNegInf;
    for (Count phi = 0; phi <= confirmed; ++phi) {
        const Count via_confirmed = confirmed - phi;
        const Count via_rest = h - via_confirmed;
        if (via_rest < 0 || via_rest > rest) continue;
        const Count eta = rest - via_rest;
        const double term = log_choose(confirmed, phi) + xlogy(static_cast<double>(via_confirmed), r) +
                            xlogy(static_cast<double>(phi), q) + log_choose(rest, via_rest) +
                            xlogy(static_cast<double>(via_rest), p) + xlogy(static_cast<double>(eta), hm);
        total = log_add(total, term);
    }
    return total;
}

double omega_single(const SourceContext& ctx, Count h) { return std::exp(log_omega_single(ctx, h)); }

namespace detail {

double log_omega_general(const SourceContext& ctx, std::span<const Count> h) {
    check_allocation(ctx, h);
    const std::size_t rho = h.size();
    const Count confirmed = ctx.confirmed_travelers();
    const Count rest = ctx.before - confirmed;
    const double den = traveler_denominator(ctx);
    if (confirmed > 0 && den <= 0.0) return kNegInf;
    const double hm = ctx.hidden_mass();
    const Count total_h = std::accumulate(h.begin(), h.end(), Count{0});

    // Split each h_k into c_k hosts from the confirmed travelers and h_k - c_k
    // from the rest; sum P1 (confirmed multinomial over invasion + hidden
    // edges) times P2 (rest multinomial over invasion edges, hidden, home).
    std::vector<Count> c(rho, 0);
    double total = kNegInf;
    auto visit = [&](auto&& self, std::size_t k, Count used) -> void {
        if (k == rho) {
            const Count from_rest = total_h - used;
            if (from_rest > rest) return;
            double p1 = std::lgamma(static_cast<double>(confirmed) + 1.0) -
                        std::lgamma(static_cast<double>(confirmed - used) + 1.0);
            double p2 = std::lgamma(static_cast<double>(rest) + 1.0) -
                        std::lgamma(static_cast<double>(rest - from_rest) + 1.0);
            for (std::size_t e = 0; e < rho; ++e) {
                const double rate = ctx.invasion_rates[e];
                p1 += -std::lgamma(static_cast<double>(c[e]) + 1.0) +
                      xlogy(static_cast<double>(c[e]), den > 0.0 ? rate / den : 0.0);
                p2 += -std::lgamma(static_cast<double>(h[e] - c[e]) + 1.0) + xlogy(static_cast<double>(h[e] - c[e]), rate);
            }
            p1 += xlogy(static_cast<double>(confirmed - used), den > 0.0 ? ctx.hidden_edge_mass / den : 0.0);
            p2 += xlogy(static_cast<double>(rest - from_rest), hm);
            total = log_add(total, p1 + p2);
            return;
        }
        for (Count v = 0; v <= h[k] && used + v <= confirmed; ++v) {
            c[k] = v;
            self(self, k + 1, used + v);
        }
        c[k] = 0;
    };
    visit(visit, 0, 0);
    return total;
}

} // namespace detail

double log_omega_multi(const SourceContext& ctx, std::span<const Count> h) {
    check_allocation(ctx, h);
    if (h.size() == 1) return log_omega_single(ctx, h.front());
    return detail::log_omega_general(ctx, h);
}

double omega_multi(const SourceContext& ctx, std::span<const Count> h) { return std::exp(log_omega_multi(ctx, h)); }

} // namespace pathfinder
