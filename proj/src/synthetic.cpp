#include "edgepp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "edgepp/rng.hpp"

namespace edgepp {

std::vector<double> power_law_weights(std::size_t n, double max_weight, double mean_weight) {
    if (n == 0) return {};
    if (!(mean_weight > 0.0 && mean_weight < max_weight))
        throw std::invalid_argument("power_law_weights: need 0 < mean_weight < max_weight");
    auto mean_for = [&](double a) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::pow(static_cast<double>(i + 1), -a);
        return max_weight * s / static_cast<double>(n);
    };
    // mean_for is decreasing in a.
    double lo = 0.0, hi = 8.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_for(mid) > mean_weight)
            lo = mid;
        else
            hi = mid;
    }
    const double a = 0.5 * (lo + hi);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = max_weight * std::pow(static_cast<double>(i + 1), -a);
    return w;
}

Graph weighted_random_graph(std::span<const double> weights, std::size_t num_edges,
                            std::uint64_t seed) {
    const std::size_t n = weights.size();
    if (n < 2 && num_edges > 0) throw std::invalid_argument("need at least two nodes");
    if (num_edges > n * (n - 1) / 2) throw std::invalid_argument("too many edges requested");
    std::vector<double> cumulative(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weights[i] >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
        total += weights[i];
        cumulative[i] = total;
    }
    if (num_edges > 0 && !(total > 0.0)) throw std::invalid_argument("all weights are zero");

    Rng rng(seed);
    auto draw = [&]() -> NodeId {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return static_cast<NodeId>(std::min<std::size_t>(
            static_cast<std::size_t>(it - cumulative.begin()), n - 1));
    };
    std::set<Edge> chosen;
    // Rejection stalls when heavy nodes saturate; cap the attempts and fall
    // back to uniform endpoints for the remainder.
    std::size_t attempts = 0;
    const std::size_t max_attempts = 200 * num_edges + 1000;
    while (chosen.size() < num_edges) {
        NodeId a, b;
        if (attempts++ < max_attempts) {
            a = draw();
            b = draw();
        } else {
            a = static_cast<NodeId>(rng.below(n));
            b = static_cast<NodeId>(rng.below(n));
        }
        if (a == b) continue;
        chosen.insert(a < b ? Edge{a, b} : Edge{b, a});
    }
    return Graph::from_sorted_unique(n, std::vector<Edge>(chosen.begin(), chosen.end()));
}

Graph gnm_random_graph(std::size_t n, std::size_t num_edges, std::uint64_t seed) {
    const std::vector<double> w(n, 1.0);
    return weighted_random_graph(w, num_edges, seed);
}

std::vector<double> pareto_quantile_weights(std::size_t n, double max_weight, double mean_weight) {
    if (n == 0) return {};
    if (!(mean_weight > 1.0 && mean_weight < max_weight))
        throw std::invalid_argument("pareto_quantile_weights: need 1 < mean_weight < max_weight");
    auto weights_for = [&](double a) {
        std::vector<double> w(n);
        const double tail = std::pow(max_weight, -a);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            w[i] = std::pow(1.0 - u * (1.0 - tail), -1.0 / a);
        }
        w.back() = max_weight;
        return w;
    };
    auto mean_for = [&](double a) {
        double s = 0.0;
        for (double x : weights_for(a)) s += x;
        return s / static_cast<double>(n);
    };
    // Heavier tails (smaller a) give larger means.
    double lo = 1e-3, hi = 10.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_for(mid) > mean_weight)
            lo = mid;
        else
            hi = mid;
    }
    return weights_for(0.5 * (lo + hi));
}

Graph polblogs_scale_standin(std::uint64_t seed) {
    constexpr std::size_t kNodes = 1222;
    constexpr std::size_t kEdges = 16714;
    const auto w = pareto_quantile_weights(kNodes, 351.0, 2.0 * kEdges / kNodes);
    return weighted_random_graph(w, kEdges, seed);
}

Graph desk_scale_graph(std::size_t n, std::uint64_t seed) {
    if (n < 8) throw std::invalid_argument("desk_scale_graph: need at least 8 nodes");
    const double mean = 8.0;
    const double max_w = std::min(static_cast<double>(n - 1), 4.0 * mean + std::sqrt(static_cast<double>(n)) * 2.0);
    const auto w = power_law_weights(n, max_w, mean);
    return weighted_random_graph(w, static_cast<std::size_t>(mean * static_cast<double>(n) / 2.0), seed);
}

}  // namespace edgepp
