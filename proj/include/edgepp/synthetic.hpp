#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edgepp/graph.hpp"

namespace edgepp {

/// Decreasing power-law weights w_i = w_max (i + 1)^(-a), with a chosen so the
/// mean weight equals `mean_weight`. Requires mean_weight < max_weight.
std::vector<double> power_law_weights(std::size_t n, double max_weight, double mean_weight);

/// Quantiles of a Pareto law on [1, max_weight], tail index fitted so the mean
/// equals `mean_weight`; the last weight is pinned to max_weight. Ascending.
std::vector<double> pareto_quantile_weights(std::size_t n, double max_weight, double mean_weight);

/// Chung-Lu style graph with exactly `num_edges` distinct edges: both
/// endpoints drawn proportionally to weight, self-loops and repeats redrawn.
/// Expected degrees are approximately proportional to the weights.
Graph weighted_random_graph(std::span<const double> weights, std::size_t num_edges,
                            std::uint64_t seed);

/// Uniform G(n, m).
Graph gnm_random_graph(std::size_t n, std::size_t num_edges, std::uint64_t seed);

/// Heavy-tailed stand-in at the scale of the Polblogs benchmark: 1,222 nodes,
/// 16,714 edges, Pareto-tailed expected degrees up to 351. Degree statistics
/// are only roughly matched (a few dozen nodes end up isolated); it exists so
/// that scale-dependent checks can run when the real edge list is unavailable.
Graph polblogs_scale_standin(std::uint64_t seed);

/// Small heavy-tailed graph for quick runs (mean degree about 8).
Graph desk_scale_graph(std::size_t n, std::uint64_t seed);

}  // namespace edgepp
