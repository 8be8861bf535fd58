#include "edgepp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "edgepp/csv.hpp"
#include "edgepp/numeric.hpp"

namespace edgepp {

namespace {

// Below this many pairs the OpenMP fork costs more than the loop.
constexpr std::size_t kParallelPairThreshold = 4096;

std::uint32_t residual(std::uint32_t d0, std::uint32_t dt) { return d0 > dt ? d0 - dt : 0; }

bool has_noise(int t, const NoiseSchedule& sched) { return 1.0 - sched.alpha_bar(t) > 0.0; }

}  // namespace

void OracleEdgeModel::predict(const StepContext& ctx, std::span<const Edge> pairs,
                              std::span<double> out) const {
    if (reference_.num_nodes() != ctx.current.num_nodes())
        throw SamplerError("oracle reference has " + std::to_string(reference_.num_nodes()) +
                           " nodes, current graph has " + std::to_string(ctx.current.num_nodes()));
    // Posterior for (at = 0, a0 = 1) is shared by every such pair.
    const double removed = ctx.schedule.removal_posterior(ctx.t);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const bool at = ctx.current.has_edge(pairs[k].u, pairs[k].v);
        const bool a0 = reference_.has_edge(pairs[k].u, pairs[k].v);
        if (at && !a0)
            throw DiffusionError("oracle: edge (" + std::to_string(pairs[k].u) + "," +
                                 std::to_string(pairs[k].v) + ") present at t but not in reference");
        out[k] = at ? 1.0 : (a0 ? removed : 0.0);
    }
}

void DegreeAffinityModel::predict(const StepContext& ctx, std::span<const Edge> pairs,
                                  std::span<double> out) const {
    const auto& d0 = ctx.degree_0;
    const auto& dt = ctx.degree_t;
    const auto m = static_cast<std::int64_t>(pairs.size());
    double max_raw = 0.0;
#pragma omp parallel for reduction(max : max_raw) if (pairs.size() >= kParallelPairThreshold)
    for (std::int64_t k = 0; k < m; ++k) {
        const Edge e = pairs[static_cast<std::size_t>(k)];
        double score;
        if (ctx.current.has_edge(e.u, e.v)) {
            score = -1.0;  // marker: existing edge
        } else {
            score = static_cast<double>(residual(d0[e.u], dt[e.u])) *
                    static_cast<double>(residual(d0[e.v], dt[e.v]));
            max_raw = std::max(max_raw, score);
        }
        out[static_cast<std::size_t>(k)] = score;
    }
    const double inv = max_raw > 0.0 ? 1.0 / max_raw : 0.0;
#pragma omp parallel for if (pairs.size() >= kParallelPairThreshold)
    for (std::int64_t k = 0; k < m; ++k) {
        double& v = out[static_cast<std::size_t>(k)];
        v = v < 0.0 ? 1.0 : v * inv;
    }
}

std::unique_ptr<EdgeModel> edge_model_oracle(Graph reference) {
    return std::make_unique<OracleEdgeModel>(std::move(reference));
}

std::unique_ptr<EdgeModel> edge_model_degree_affinity() {
    return std::make_unique<DegreeAffinityModel>();
}

namespace {

/// Degree-guided posteriors p_i with over-budget nodes mapped to 0.
std::vector<double> raw_node_posteriors(const DegreeSequence& dt, const DegreeSequence& d0, int t,
                                        const NoiseSchedule& sched) {
    std::vector<double> p(d0.size(), 0.0);
    if (!has_noise(t, sched)) return p;
    const double base = sched.removal_posterior(t);
    for (std::size_t i = 0; i < d0.size(); ++i) p[i] = one_minus_pow1m(base, residual(d0[i], dt[i]));
    return p;
}

}  // namespace

NodeProbabilities reweight_node_probabilities(std::vector<double> p, double h) {
    NodeProbabilities r;
    r.raw_total = std::accumulate(p.begin(), p.end(), 0.0);
    r.expected_active = h;
    if (r.raw_total > 0.0) {
        const double w = h / r.raw_total;
        for (double& q : p) {
            const double scaled = w * q;
            if (scaled > 1.0) {
                ++r.clamp_events;
                q = 1.0;
            } else {
                q = scaled;
            }
        }
    }
    r.prob = std::move(p);
    return r;
}

NodeProbabilities node_reweighted_posterior(const DegreeSequence& dt, const DegreeSequence& d0,
                                            int t, const NoiseSchedule& sched) {
    if (dt.size() != d0.size()) throw SamplerError("degree sequences differ in length");
    for (std::size_t i = 0; i < d0.size(); ++i)
        if (dt[i] > d0[i])
            throw SamplerError("node " + std::to_string(i) + " exceeds its degree budget");
    if (t < 1 || t > sched.horizon()) throw SamplerError("timestep out of range");
    const double h = expected_active_step(compress_degrees(d0), sched.alpha_bar(t - 1), sched.alpha(t));
    auto p = raw_node_posteriors(dt, d0, t, sched);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (total == 0.0 && h > 0.0)
        throw SamplerError("degenerate state: no node has degree budget left but h_t = " +
                           format_g(h, 6));
    return reweight_node_probabilities(std::move(p), h);
}

double delta_edges(const DegreeSequence& d0, const Graph& at, const ActiveMask& s, int t,
                   const NoiseSchedule& sched) {
    if (t < 1 || t > sched.horizon()) throw SamplerError("timestep out of range");
    double degree_sum = 0.0;
    for (auto d : d0) degree_sum += d;
    const double fresh = (sched.alpha_bar(t - 1) - sched.alpha_bar(t)) * degree_sum;
    const double existing = 2.0 * static_cast<double>(active_subgraph_edge_count(at, s));
    return std::max(0.0, (fresh + existing) / 2.0);
}

EdgeProbabilities edge_reweighted_probs(std::span<const double> raw, double delta_E) {
    EdgeProbabilities r;
    r.prob.assign(raw.begin(), raw.end());
    const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    if (total == 0.0) {
        if (delta_E > 0.0)
            throw SamplerError("degenerate model: all pair scores are 0 but Delta E = " +
                               format_g(delta_E, 6));
        return r;
    }
    const double w = delta_E / total;
    for (double& q : r.prob) {
        const double scaled = w * q;
        if (scaled > 1.0) {
            ++r.clamp_events;
            r.clamped_mass += scaled - 1.0;
            q = 1.0;
        } else {
            q = scaled;
        }
    }
    return r;
}

NodeDraw sample_active_nodes(const DegreeSequence& dt, const DegreeSequence& d0,
                             const DegreeHistogram& hist0, int t, const NoiseSchedule& sched,
                             const SamplerMode& mode, Rng& rng) {
    NodeDraw draw;
    draw.active.assign(d0.size(), 0);
    auto p = raw_node_posteriors(dt, d0, t, sched);
    if (mode.node_correction) {
        const double h = expected_active_step(hist0, sched.alpha_bar(t - 1), sched.alpha(t));
        auto r = reweight_node_probabilities(std::move(p), h);
        draw.degenerate = r.raw_total == 0.0 && h > 0.0;
        draw.clamp_events = r.clamp_events;
        p = std::move(r.prob);
    }
    for (std::size_t i = 0; i < p.size(); ++i) draw.active[i] = rng.bernoulli(p[i]) ? 1 : 0;
    return draw;
}

EdgeDraw sample_edges(const Graph& at, const ActiveMask& s, const DegreeSequence& dt,
                      const DegreeSequence& d0, int t, const NoiseSchedule& sched,
                      const EdgeModel& model, const SamplerMode& mode, Rng& rng) {
    EdgeDraw draw;
    draw.delta_E = delta_edges(d0, at, s, t, sched);

    std::vector<NodeId> active;
    for (NodeId i = 0; i < s.size(); ++i)
        if (s[i]) active.push_back(i);

    std::vector<Edge> pairs;
    pairs.reserve(active.size() * (active.size() - (active.empty() ? 0 : 1)) / 2);
    for (std::size_t a = 0; a < active.size(); ++a)
        for (std::size_t b = a + 1; b < active.size(); ++b) pairs.push_back({active[a], active[b]});

    std::vector<double> prob(pairs.size(), 0.0);
    if (!pairs.empty()) {
        const StepContext ctx{at, dt, d0, t, sched};
        model.predict(ctx, pairs, prob);
        for (double v : prob)
            if (!(v >= 0.0 && v <= 1.0))
                throw SamplerError(std::string("edge model '") + std::string(model.name()) +
                                   "' returned a value outside [0, 1]");
    }

    // With keep_existing, present pairs are fixed at 1 and only the rest is
    // regenerated against the fresh-edge part of the budget.
    std::vector<std::size_t> pool;
    pool.reserve(pairs.size());
    double kept = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (mode.keep_existing && at.has_edge(pairs[k].u, pairs[k].v)) {
            prob[k] = 1.0;
            kept += 1.0;
        } else {
            pool.push_back(k);
        }
    }

    if (mode.edge_correction) {
        std::vector<double> raw(pool.size());
        for (std::size_t j = 0; j < pool.size(); ++j) raw[j] = prob[pool[j]];
        const double budget = std::max(0.0, draw.delta_E - kept);
        const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
        if (total == 0.0) {
            draw.degenerate = budget > 0.0;
        } else {
            auto r = edge_reweighted_probs(raw, budget);
            draw.clamp_events = r.clamp_events;
            for (std::size_t j = 0; j < pool.size(); ++j) prob[pool[j]] = r.prob[j];
        }
    }
    draw.expected_generated = std::accumulate(prob.begin(), prob.end(), 0.0);

    std::vector<Edge> next;
    next.reserve(at.num_edges() + static_cast<std::size_t>(draw.expected_generated) + 16);
    for (const Edge& e : at.edges())
        if (!(s[e.u] && s[e.v])) next.push_back(e);
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (rng.bernoulli(prob[k])) next.push_back(pairs[k]);
    std::sort(next.begin(), next.end());
    draw.next = Graph::from_sorted_unique(at.num_nodes(), std::move(next));
    return draw;
}

namespace {

GenerationRun denoise(Graph current, int t_start, const DegreeSequence& d0,
                      const EdgeModel& model, const NoiseSchedule& sched, const SamplerMode& mode,
                      Rng& rng) {
    if (current.num_nodes() != d0.size())
        throw SamplerError("graph has " + std::to_string(current.num_nodes()) +
                           " nodes but d0 has length " + std::to_string(d0.size()));
    const auto hist0 = compress_degrees(d0);
    GenerationRun run;
    run.per_t.reserve(static_cast<std::size_t>(t_start));
    for (int t = t_start; t >= 1; --t) {
        const auto dt = degree_sequence(current);
        StepRecord rec;
        rec.t = t;
        for (std::size_t i = 0; i < d0.size(); ++i)
            if (dt[i] > d0[i]) ++rec.over_budget_nodes;
        run.over_budget_events += rec.over_budget_nodes;

        auto nodes = sample_active_nodes(dt, d0, hist0, t, sched, mode, rng);
        rec.clamp_events_nodes = nodes.clamp_events;
        run.degenerate_node_steps += nodes.degenerate ? 1 : 0;
        for (auto f : nodes.active) rec.active_nodes += f;

        auto edges = sample_edges(current, nodes.active, dt, d0, t, sched, model, mode, rng);
        rec.delta_E = edges.delta_E;
        rec.clamp_events_edges = edges.clamp_events;
        run.degenerate_edge_steps += edges.degenerate ? 1 : 0;
        current = std::move(edges.next);
        rec.edges = current.num_edges();
        run.per_t.push_back(rec);
    }
    for (NodeId i = 0; i < d0.size(); ++i)
        if (current.degree(i) > d0[i]) ++run.final_over_budget_nodes;
    run.final_graph = std::move(current);
    return run;
}

void check_sum_even(const DegreeSequence& d0) {
    std::uint64_t total = 0;
    for (auto d : d0) total += d;
    if (total % 2 != 0) throw SamplerError("degree sequence has odd sum " + std::to_string(total));
}

}  // namespace

GenerationRun sample_degree_guided(const DegreeSequence& d0, const EdgeModel& model,
                                   const NoiseSchedule& sched, const SamplerMode& mode,
                                   std::uint64_t seed) {
    check_sum_even(d0);
    Rng rng(derive_seed(seed, 1));
    auto run = denoise(Graph(d0.size(), std::span<const Edge>{}), sched.horizon(), d0, model, sched,
                       mode, rng);
    run.seed = seed;
    return run;
}

GenerationRun sample_with_eo_control(const Graph& a0, int t_start, const EdgeModel& model,
                                     const NoiseSchedule& sched, const SamplerMode& mode,
                                     std::uint64_t seed) {
    if (t_start < 1 || t_start > sched.horizon())
        throw SamplerError("t_start " + std::to_string(t_start) + " outside [1, " +
                           std::to_string(sched.horizon()) + "]");
    const auto d0 = degree_sequence(a0);
    Graph start = forward_marginal_sample(a0, sched, t_start, derive_seed(seed, 0));
    Rng rng(derive_seed(seed, 1));
    auto run = denoise(std::move(start), t_start, d0, model, sched, mode, rng);
    run.seed = seed;
    return run;
}

void write_generation_csv(std::ostream& out, const GenerationRun& run) {
    out << "t,active_nodes,edges,delta_E,clamp_events_nodes,clamp_events_edges\n";
    for (const auto& r : run.per_t)
        out << r.t << ',' << r.active_nodes << ',' << r.edges << ',' << format_g(r.delta_E, 17)
            << ',' << r.clamp_events_nodes << ',' << r.clamp_events_edges << '\n';
    out << "# format = generation-run v1\n"
        << "# seed = " << run.seed << '\n'
        << "# over_budget_events = " << run.over_budget_events << '\n'
        << "# final_over_budget_nodes = " << run.final_over_budget_nodes << '\n'
        << "# degenerate_node_steps = " << run.degenerate_node_steps << '\n'
        << "# degenerate_edge_steps = " << run.degenerate_edge_steps << '\n';
}

}  // namespace edgepp
