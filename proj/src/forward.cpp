#include "edgepp/forward.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "edgepp/numeric.hpp"
#include "edgepp/rng.hpp"

namespace edgepp {

NoiseSchedule NoiseSchedule::from_betas(std::vector<double> betas) {
    NoiseSchedule s;
    s.alpha_.reserve(betas.size());
    s.alpha_bar_.reserve(betas.size() + 1);
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const double b = betas[i];
        if (!std::isfinite(b) || b < 0.0 || b > 1.0)
            throw DiffusionError("beta_" + std::to_string(i + 1) + " = " + std::to_string(b) +
                                 " outside [0, 1]");
        s.alpha_.push_back(1.0 - b);
        s.alpha_bar_.push_back(s.alpha_bar_.back() * s.alpha_.back());
    }
    s.beta_ = std::move(betas);
    return s;
}

NoiseSchedule NoiseSchedule::from_alphas(std::span<const double> alphas) {
    std::vector<double> betas;
    betas.reserve(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double a = alphas[i];
        if (!std::isfinite(a) || a < 0.0 || a > 1.0)
            throw DiffusionError("alpha_" + std::to_string(i + 1) + " = " + std::to_string(a) +
                                 " outside [0, 1]");
        betas.push_back(1.0 - a);
    }
    return from_betas(std::move(betas));
}

double NoiseSchedule::removal_posterior(int t) const {
    const double denom = 1.0 - alpha_bar(t);
    if (!(denom > 0.0))
        throw DiffusionError("no noise applied by t=" + std::to_string(t) +
                             " (1 - alpha_bar_t = 0); posterior undefined");
    // At t = 1 the ratio is beta_1 / (1 - alpha_1), identically 1.
    if (t == 1) return 1.0;
    // Capped at 1: rounding can push beta_t * alpha_bar_{t-1} a hair above
    // alpha_bar_{t-1} - alpha_bar_t.
    return std::min(1.0, beta(t) * alpha_bar(t - 1) / denom);
}

namespace {

void check_timestep(int t, const NoiseSchedule& sched, int lo) {
    if (t < lo || t > sched.horizon())
        throw DiffusionError("timestep " + std::to_string(t) + " outside [" + std::to_string(lo) +
                             ", " + std::to_string(sched.horizon()) + "]");
}

/// Runs the chain, calling on_step(t, surviving_edges, lost_edge_flags).
template <typename OnStep>
void run_chain(const Graph& a0, const NoiseSchedule& sched, std::uint64_t seed, OnStep&& on_step) {
    Rng rng(seed);
    std::vector<Edge> alive(a0.edges().begin(), a0.edges().end());
    std::vector<Edge> next;
    next.reserve(alive.size());
    ActiveMask lost(a0.num_nodes(), 0);
    for (int t = 1; t <= sched.horizon(); ++t) {
        const double beta = sched.beta(t);
        std::fill(lost.begin(), lost.end(), 0);
        next.clear();
        for (const Edge& e : alive) {
            if (rng.bernoulli(beta)) {
                lost[e.u] = 1;
                lost[e.v] = 1;
            } else {
                next.push_back(e);
            }
        }
        alive.swap(next);
        on_step(t, alive, lost);
    }
}

struct MomentSums {
    explicit MomentSums(std::size_t T) : e(T), e2(T), a(T), a2(T) {}
    std::vector<std::uint64_t> e, e2, a, a2;

    void add(const TrajectoryCounts& c) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            const std::uint64_t ei = c.edges[i], ai = c.active[i];
            e[i] += ei;
            e2[i] += ei * ei;
            a[i] += ai;
            a2[i] += ai * ai;
        }
    }
    void merge(const MomentSums& o) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] += o.e[i];
            e2[i] += o.e2[i];
            a[i] += o.a[i];
            a2[i] += o.a2[i];
        }
    }
    ForwardMoments finish(std::size_t runs) const {
        ForwardMoments m;
        m.runs = runs;
        const std::size_t T = e.size();
        m.mean_edges.resize(T);
        m.var_edges.resize(T);
        m.mean_active.resize(T);
        m.var_active.resize(T);
        if (runs == 0) return m;
        const double r = static_cast<double>(runs);
        const double dof = runs > 1 ? r - 1.0 : 1.0;
        for (std::size_t i = 0; i < T; ++i) {
            m.mean_edges[i] = static_cast<double>(e[i]) / r;
            m.var_edges[i] = std::max(0.0, (static_cast<double>(e2[i]) - r * m.mean_edges[i] * m.mean_edges[i]) / dof);
            m.mean_active[i] = static_cast<double>(a[i]) / r;
            m.var_active[i] = std::max(0.0, (static_cast<double>(a2[i]) - r * m.mean_active[i] * m.mean_active[i]) / dof);
        }
        return m;
    }
};

}  // namespace

Graph forward_marginal_sample(const Graph& a0, const NoiseSchedule& sched, int t,
                              std::uint64_t seed) {
    check_timestep(t, sched, 0);
    if (t == 0) return a0;
    const double keep = sched.alpha_bar(t);
    Rng rng(seed);
    std::vector<Edge> kept;
    kept.reserve(static_cast<std::size_t>(keep * static_cast<double>(a0.num_edges())) + 16);
    for (const Edge& e : a0.edges())
        if (rng.bernoulli(keep)) kept.push_back(e);
    return Graph::from_sorted_unique(a0.num_nodes(), std::move(kept));
}

std::vector<TrajectoryStep> forward_trajectory(const Graph& a0, const NoiseSchedule& sched,
                                               std::uint64_t seed) {
    std::vector<TrajectoryStep> out;
    out.reserve(static_cast<std::size_t>(sched.horizon()));
    run_chain(a0, sched, seed, [&](int, const std::vector<Edge>& alive, const ActiveMask& lost) {
        out.push_back({Graph::from_sorted_unique(a0.num_nodes(), alive), lost});
    });
    return out;
}

TrajectoryCounts forward_trajectory_counts(const Graph& a0, const NoiseSchedule& sched,
                                           std::uint64_t seed) {
    TrajectoryCounts c;
    c.edges.reserve(static_cast<std::size_t>(sched.horizon()));
    c.active.reserve(static_cast<std::size_t>(sched.horizon()));
    run_chain(a0, sched, seed, [&](int, const std::vector<Edge>& alive, const ActiveMask& lost) {
        c.edges.push_back(static_cast<std::uint32_t>(alive.size()));
        std::uint32_t active = 0;
        for (auto f : lost) active += f;
        c.active.push_back(active);
    });
    return c;
}

ForwardMoments simulate_forward_moments_serial(const Graph& a0, const NoiseSchedule& sched,
                                               std::size_t runs, std::uint64_t seed) {
    MomentSums sums(static_cast<std::size_t>(sched.horizon()));
    for (std::size_t r = 0; r < runs; ++r)
        sums.add(forward_trajectory_counts(a0, sched, derive_seed(seed, r)));
    return sums.finish(runs);
}

ForwardMoments simulate_forward_moments(const Graph& a0, const NoiseSchedule& sched,
                                        std::size_t runs, std::uint64_t seed) {
    const std::size_t T = static_cast<std::size_t>(sched.horizon());
    MomentSums total(T);
    const auto n_runs = static_cast<std::int64_t>(runs);
#pragma omp parallel
    {
        MomentSums local(T);
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t r = 0; r < n_runs; ++r)
            local.add(forward_trajectory_counts(a0, sched, derive_seed(seed, static_cast<std::uint64_t>(r))));
#pragma omp critical
        total.merge(local);
    }
    return total.finish(runs);
}

BinomialParams degree_marginal_params(std::uint32_t d0, int t, const NoiseSchedule& sched) {
    check_timestep(t, sched, 0);
    return {d0, sched.alpha_bar(t)};
}

double active_prob_given_prev_degree(std::uint32_t d_prev, int t, const NoiseSchedule& sched) {
    check_timestep(t, sched, 1);
    return one_minus_pow1m(sched.beta(t), d_prev);
}

double active_posterior(std::uint32_t dt, std::uint32_t d0, int t, const NoiseSchedule& sched) {
    check_timestep(t, sched, 1);
    if (dt > d0)
        throw DiffusionError("degree budget violated: d^t=" + std::to_string(dt) +
                             " > d^0=" + std::to_string(d0));
    return one_minus_pow1m(sched.removal_posterior(t), d0 - dt);
}

double oracle_edge_posterior(bool at, bool a0, int t, const NoiseSchedule& sched) {
    check_timestep(t, sched, 1);
    if (at && !a0) throw DiffusionError("edge present at t but absent from A^0: impossible under edge removal");
    if (at) return 1.0;
    if (!a0) return 0.0;
    return sched.removal_posterior(t);
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryStep> trajectory) {
    out << "t,num_edges,num_active_nodes\n";
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        std::size_t active = 0;
        for (auto f : trajectory[i].active) active += f;
        out << (i + 1) << ',' << trajectory[i].graph.num_edges() << ',' << active << '\n';
    }
}

}  // namespace edgepp
