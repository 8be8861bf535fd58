#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "edgepp/forward.hpp"
#include "edgepp/graph.hpp"
#include "edgepp/rng.hpp"
#include "edgepp/schedule.hpp"

namespace edgepp {

class SamplerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// What an edge model sees at reverse step t.
struct StepContext {
    const Graph& current;           ///< A^t
    const DegreeSequence& degree_t;  ///< d^t, recomputed from A^t
    const DegreeSequence& degree_0;  ///< prescribed d^0
    int t;
    const NoiseSchedule& schedule;
};

/// Predicts P(A^{t-1}_ij = 1 | A^t, s^t) for pairs of active nodes.
///
/// Implementations must be deterministic and return values in [0, 1]. They
/// see the whole batch so that batch-level normalization is possible.
class EdgeModel {
public:
    virtual ~EdgeModel() = default;
    virtual std::string_view name() const = 0;
    virtual void predict(const StepContext& ctx, std::span<const Edge> pairs,
                         std::span<double> out) const = 0;
};

/// Exact reverse posterior relative to a known reference graph A^0.
class OracleEdgeModel final : public EdgeModel {
public:
    explicit OracleEdgeModel(Graph reference) : reference_(std::move(reference)) {}
    std::string_view name() const override { return "oracle"; }
    void predict(const StepContext& ctx, std::span<const Edge> pairs,
                 std::span<double> out) const override;
    const Graph& reference() const noexcept { return reference_; }

private:
    Graph reference_;
};

/// Residual-degree affinity, Chung-Lu style: a missing pair scores
/// r_i * r_j with r = max(d0 - dt, 0), divided by the largest such score in the
/// batch; pairs already present score 1.
class DegreeAffinityModel final : public EdgeModel {
public:
    std::string_view name() const override { return "degree-affinity"; }
    void predict(const StepContext& ctx, std::span<const Edge> pairs,
                 std::span<double> out) const override;
};

std::unique_ptr<EdgeModel> edge_model_oracle(Graph reference);
std::unique_ptr<EdgeModel> edge_model_degree_affinity();

struct SamplerMode {
    bool node_correction = false;  ///< rescale active-node probabilities to h_t
    bool edge_correction = false;  ///< rescale edge probabilities to Delta E_t
    /// Ablation switch: keep edges already inside the active subgraph instead
    /// of regenerating them. Off by default.
    bool keep_existing = false;
};

struct NodeProbabilities {
    std::vector<double> prob;
    double expected_active = 0.0;  ///< h_t, or sum of the raw posteriors when uncorrected
    double raw_total = 0.0;        ///< sum of the uncorrected posteriors
    std::size_t clamp_events = 0;
};

/// q_i = min(1, h / sum_j p_j * p_i); p unchanged when the sum is 0.
NodeProbabilities reweight_node_probabilities(std::vector<double> p, double h);

/// Volume-corrected node posterior: q_i = min(1, h_t / sum_j p_j * p_i) where
/// p_i is the degree-guided posterior. Nodes without remaining budget get 0.
/// Throws SamplerError if dt_i > d0_i anywhere, or if every p_i is 0 while
/// h_t > 0.
NodeProbabilities node_reweighted_posterior(const DegreeSequence& dt, const DegreeSequence& d0,
                                            int t, const NoiseSchedule& sched);

/// Delta E_t = ((alpha_bar_{t-1} - alpha_bar_t) sum_i d0_i + s^T A^t s) / 2.
double delta_edges(const DegreeSequence& d0, const Graph& at, const ActiveMask& s, int t,
                   const NoiseSchedule& sched);

struct EdgeProbabilities {
    std::vector<double> prob;
    std::size_t clamp_events = 0;
    double clamped_mass = 0.0;  ///< expected edges lost to clamping at 1
};

/// Scales raw by delta_E / sum(raw) and clamps at 1. All-zero raw with
/// delta_E == 0 yields zeros; with delta_E > 0 it throws SamplerError.
EdgeProbabilities edge_reweighted_probs(std::span<const double> raw, double delta_E);

/// Outcome of drawing s^t.
struct NodeDraw {
    ActiveMask active;
    std::size_t clamp_events = 0;
    bool degenerate = false;  ///< h_t > 0 but no node had budget left
};

/// Draws s^t from the degree-guided posterior, volume-corrected when
/// mode.node_correction is set. Over-budget nodes (dt_i > d0_i) are never active.
NodeDraw sample_active_nodes(const DegreeSequence& dt, const DegreeSequence& d0,
                             const DegreeHistogram& hist0, int t, const NoiseSchedule& sched,
                             const SamplerMode& mode, Rng& rng);

/// Outcome of drawing A^{t-1} given A^t and s^t.
struct EdgeDraw {
    Graph next;
    double delta_E = 0.0;
    double expected_generated = 0.0;  ///< sum of the final pair probabilities
    std::size_t clamp_events = 0;
    bool degenerate = false;  ///< delta_E > 0 but the model scored every pair 0
};

/// Regenerates every pair inside the active subgraph from the model
/// (Delta E-corrected when mode.edge_correction is set); pairs with an inactive
/// endpoint are copied from A^t unchanged.
EdgeDraw sample_edges(const Graph& at, const ActiveMask& s, const DegreeSequence& dt,
                      const DegreeSequence& d0, int t, const NoiseSchedule& sched,
                      const EdgeModel& model, const SamplerMode& mode, Rng& rng);

struct StepRecord {
    int t = 0;
    std::size_t active_nodes = 0;
    std::size_t edges = 0;  ///< |E(A^{t-1})| after the step
    double delta_E = 0.0;
    std::size_t clamp_events_nodes = 0;
    std::size_t clamp_events_edges = 0;
    std::size_t over_budget_nodes = 0;  ///< nodes with d^t_i > d0_i entering the step
};

struct GenerationRun {
    Graph final_graph;
    std::vector<StepRecord> per_t;  ///< in denoising order, t = t_start .. 1
    std::uint64_t seed = 0;
    std::size_t over_budget_events = 0;  ///< sum of over_budget_nodes over steps
    std::size_t final_over_budget_nodes = 0;
    std::size_t degenerate_node_steps = 0;
    std::size_t degenerate_edge_steps = 0;
};

/// Reverse process from the empty graph at t = T down to A^0.
GenerationRun sample_degree_guided(const DegreeSequence& d0, const EdgeModel& model,
                                   const NoiseSchedule& sched, const SamplerMode& mode,
                                   std::uint64_t seed);

/// Corrupts a0 forward to t_start, then denoises to A^0 with d0 = deg(a0).
/// With alpha_bar_{t_start} == 0 this reproduces sample_degree_guided for the
/// same seed exactly.
GenerationRun sample_with_eo_control(const Graph& a0, int t_start, const EdgeModel& model,
                                     const NoiseSchedule& sched, const SamplerMode& mode,
                                     std::uint64_t seed);

/// CSV `t,active_nodes,edges,delta_E,clamp_events_nodes,clamp_events_edges`.
void write_generation_csv(std::ostream& out, const GenerationRun& run);

}  // namespace edgepp
