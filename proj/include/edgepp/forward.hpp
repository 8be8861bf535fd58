#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "edgepp/graph.hpp"

namespace edgepp {

class DiffusionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-step edge removal probabilities of the edge-removal process.
///
/// Timesteps are 1-based: beta(t), alpha(t) for t in [1, T]; alpha_bar(t) for
/// t in [0, T] with alpha_bar(0) == 1. alpha(t) == 1 - beta(t) holds exactly,
/// and alpha_bar is the running product in timestep order. The prior edge
/// probability is always 0 (edges are only ever removed).
class NoiseSchedule {
public:
    NoiseSchedule() = default;

    static NoiseSchedule from_betas(std::vector<double> betas);
    /// beta is derived as 1 - alpha and alpha is then re-derived as 1 - beta,
    /// which may move an input by at most one ulp.
    static NoiseSchedule from_alphas(std::span<const double> alphas);

    int horizon() const noexcept { return static_cast<int>(beta_.size()); }
    double beta(int t) const { return beta_.at(static_cast<std::size_t>(t) - 1); }
    double alpha(int t) const { return alpha_.at(static_cast<std::size_t>(t) - 1); }
    double alpha_bar(int t) const { return alpha_bar_.at(static_cast<std::size_t>(t)); }
    constexpr double prior_p() const noexcept { return 0.0; }

    std::span<const double> betas() const noexcept { return beta_; }
    std::span<const double> alphas() const noexcept { return alpha_; }
    /// alpha_bar(0..T), length T + 1.
    std::span<const double> alpha_bars() const noexcept { return alpha_bar_; }

    /// Posterior probability that an edge absent at t but present in A^0 was
    /// removed exactly at step t: beta_t * alpha_bar_{t-1} / (1 - alpha_bar_t).
    /// Throws DiffusionError when 1 - alpha_bar_t == 0.
    double removal_posterior(int t) const;

    friend bool operator==(const NoiseSchedule&, const NoiseSchedule&) = default;

private:
    std::vector<double> beta_;
    std::vector<double> alpha_;
    std::vector<double> alpha_bar_{1.0};
};

/// Keeps each edge of a0 independently with probability alpha_bar_t.
/// t == 0 returns a0 unchanged.
Graph forward_marginal_sample(const Graph& a0, const NoiseSchedule& sched, int t,
                              std::uint64_t seed);

struct TrajectoryStep {
    Graph graph;        ///< A^t
    ActiveMask active;  ///< s^t: nodes that lost at least one edge at step t
};

/// Full forward chain A^1..A^T (index t - 1 holds step t).
std::vector<TrajectoryStep> forward_trajectory(const Graph& a0, const NoiseSchedule& sched,
                                               std::uint64_t seed);

/// Edge and active-node counts along one trajectory without materializing the
/// intermediate graphs. Consumes the random stream exactly as
/// forward_trajectory does, so counts agree for equal seeds.
struct TrajectoryCounts {
    std::vector<std::uint32_t> edges;   ///< |E(A^t)|, index t - 1
    std::vector<std::uint32_t> active;  ///< |s^t|, index t - 1
};
TrajectoryCounts forward_trajectory_counts(const Graph& a0, const NoiseSchedule& sched,
                                           std::uint64_t seed);

/// Per-timestep first and second moments over independent trajectories.
/// Trajectory r uses seed derive_seed(seed, r).
struct ForwardMoments {
    std::size_t runs = 0;
    std::vector<double> mean_edges, var_edges;
    std::vector<double> mean_active, var_active;
};

/// OpenMP-parallel over trajectories. Accumulates in integers, so the result
/// is bit-identical to the serial reference for any thread count.
ForwardMoments simulate_forward_moments(const Graph& a0, const NoiseSchedule& sched,
                                        std::size_t runs, std::uint64_t seed);
ForwardMoments simulate_forward_moments_serial(const Graph& a0, const NoiseSchedule& sched,
                                               std::size_t runs, std::uint64_t seed);

struct BinomialParams {
    std::uint64_t trials = 0;
    double p = 0.0;
};

/// q(d^t_i | d^0_i) = Binomial(d^0_i, alpha_bar_t); t may be 0.
BinomialParams degree_marginal_params(std::uint32_t d0, int t, const NoiseSchedule& sched);

/// q(s^t_i = 1 | d^{t-1}_i) = 1 - (1 - beta_t)^{d^{t-1}_i}.
double active_prob_given_prev_degree(std::uint32_t d_prev, int t, const NoiseSchedule& sched);

/// Degree-guided posterior q(s^t_i = 1 | d^t_i, d^0_i)
///   = 1 - (1 - beta_t alpha_bar_{t-1} / (1 - alpha_bar_t))^{d0 - dt}.
/// Throws DiffusionError if dt > d0 or 1 - alpha_bar_t == 0.
double active_posterior(std::uint32_t dt, std::uint32_t d0, int t, const NoiseSchedule& sched);

/// Exact q(A^{t-1}_ij = 1 | A^t_ij, A^0_ij). Throws DiffusionError for the
/// impossible state at = 1, a0 = 0.
double oracle_edge_posterior(bool at, bool a0, int t, const NoiseSchedule& sched);

/// CSV `t,num_edges,num_active_nodes`, one row per step.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryStep> trajectory);

}  // namespace edgepp
