#include "doctest.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "edgepp/sampler.hpp"
#include "edgepp/synthetic.hpp"

using namespace edgepp;

namespace {

const Graph kEmpty3(3, std::span<const Edge>{});

StepContext ctx_for(const Graph& g, const DegreeSequence& dt, const DegreeSequence& d0,
                    const NoiseSchedule& s, int t) {
    return StepContext{g, dt, d0, t, s};
}

NoiseSchedule solved_constant(const DegreeSequence& d, int T) {
    return solve_schedule(gamma_library("constant", T), d, SolverConfig{}).schedule();
}

}  // namespace

TEST_CASE("oracle model scores") {
    const Graph ref(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
    const Graph at(4, std::vector<Edge>{{0, 1}});
    const auto s = NoiseSchedule::from_betas({0.5, 0.1});
    const auto d0 = degree_sequence(ref), dt = degree_sequence(at);
    OracleEdgeModel m(ref);
    const std::vector<Edge> pairs{{0, 1}, {0, 2}, {1, 2}};
    std::vector<double> out(3);
    m.predict(ctx_for(at, dt, d0, s, 2), pairs, out);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == doctest::Approx(0.05 / 0.55));
    m.predict(ctx_for(at, dt, d0, s, 1), pairs, out);
    CHECK(out[2] == 1.0);

    const Graph bad(4, std::vector<Edge>{{0, 3}});
    CHECK_THROWS(m.predict(ctx_for(bad, dt, d0, s, 2), std::vector<Edge>{{0, 3}}, out));
}

TEST_CASE("degree affinity model") {
    const auto s = NoiseSchedule::from_betas({0.5});
    const DegreeSequence d0{3, 4, 1, 2, 5};
    const Graph at(5, std::vector<Edge>{{0, 4}});
    const auto dt = degree_sequence(at);
    // residuals: 2, 4, 1, 2, 4
    DegreeAffinityModel m;
    const std::vector<Edge> pairs{{0, 1}, {1, 2}, {0, 3}, {2, 3}, {0, 4}, {1, 4}};
    std::vector<double> out(pairs.size());
    m.predict(ctx_for(at, dt, d0, s, 1), pairs, out);
    CHECK(out[5] == 1.0);  // 4 * 4 is the batch max
    CHECK(out[0] == 0.5);
    CHECK(out[4] == 1.0);  // present pair
    CHECK(out[0] > out[3]);

    // Symmetry: the score depends on the unordered pair only.
    std::vector<double> swapped(pairs.size());
    std::vector<Edge> rev;
    for (auto e : pairs) rev.push_back({e.v, e.u});
    m.predict(ctx_for(at, dt, d0, s, 1), rev, swapped);
    CHECK(swapped == out);

    // Zero residuals score zero.
    const DegreeSequence full{1, 1, 0};
    const Graph g(3, std::vector<Edge>{{0, 1}});
    const auto dg = degree_sequence(g);
    std::vector<double> z(1);
    m.predict(ctx_for(kEmpty3, DegreeSequence{1, 1, 0}, full, s, 1), std::vector<Edge>{{0, 2}}, z);
    CHECK(z[0] == 0.0);
}

TEST_CASE("residuals (2,3) score above residuals (1,1)") {
    const auto s = NoiseSchedule::from_betas({0.5});
    const DegreeSequence d0{2, 3, 1, 1};
    const Graph at(4, std::span<const Edge>{});
    const auto dt = degree_sequence(at);
    std::vector<double> out(2);
    DegreeAffinityModel().predict(ctx_for(at, dt, d0, s, 1), std::vector<Edge>{{0, 1}, {2, 3}}, out);
    CHECK(out[0] > out[1]);
}

TEST_CASE("node reweighting") {
    SUBCASE("two nodes, p = (0.2, 0.6), h = 1") {
        const auto r = reweight_node_probabilities({0.2, 0.6}, 1.0);
        CHECK(r.prob[0] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(r.prob[1] == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(r.prob[0] + r.prob[1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(r.clamp_events == 0);
        const auto c = reweight_node_probabilities({0.2, 0.6}, 1.6);
        CHECK(c.prob[1] == 1.0);
        CHECK(c.clamp_events == 1);
    }
    SUBCASE("budget exhausted everywhere and h = 0") {
        const auto s = NoiseSchedule::from_betas({0.0, 0.5});
        const DegreeSequence d0{0, 0, 0};
        const auto r = node_reweighted_posterior(d0, d0, 2, s);
        for (double q : r.prob) CHECK(q == 0.0);
    }
    SUBCASE("h equal to the raw sum leaves the posterior unchanged") {
        // At t = 1 every node with a missing edge has posterior 1, and
        // h_1 = sum_i (1 - alpha_1^{d0_i}); pick alpha_1 = 0 so h_1 = #positive.
        const auto s = NoiseSchedule::from_betas({1.0, 0.5});
        const DegreeSequence d0{1, 2, 1}, dt{0, 0, 0};
        const auto r = node_reweighted_posterior(dt, d0, 1, s);
        CHECK(r.prob == std::vector<double>{1.0, 1.0, 1.0});
        CHECK(r.clamp_events == 0);
    }
    SUBCASE("nodes without budget get exactly zero, mass is preserved without clamping") {
        const auto s = NoiseSchedule::from_betas({0.02, 0.02, 0.02});
        const DegreeSequence d0{4, 3, 5, 2, 6, 4}, dt{4, 1, 3, 2, 5, 0};
        const auto r = node_reweighted_posterior(dt, d0, 3, s);
        CHECK(r.prob[0] == 0.0);
        CHECK(r.prob[3] == 0.0);
        if (r.clamp_events == 0) {
            const double total = std::accumulate(r.prob.begin(), r.prob.end(), 0.0);
            CHECK(total == doctest::Approx(r.expected_active).epsilon(1e-14));
        }
        CHECK(r.expected_active == doctest::Approx(expected_active_step(compress_degrees(d0), s.alpha_bar(2), s.alpha(3))));
    }
    SUBCASE("errors") {
        const auto s = NoiseSchedule::from_betas({0.3, 0.3});
        CHECK_THROWS_AS(node_reweighted_posterior(DegreeSequence{3}, DegreeSequence{2}, 2, s), SamplerError);
        CHECK_THROWS_AS(node_reweighted_posterior(DegreeSequence{2, 1}, DegreeSequence{2, 1}, 2, s),
                        SamplerError);
    }
}

TEST_CASE("delta E") {
    const Graph ref = gnm_random_graph(20, 40, 3);
    const auto d0 = degree_sequence(ref);
    const auto s = NoiseSchedule::from_betas({0.3, 0.2, 0.4, 1.0});
    const Graph empty(20, std::span<const Edge>{});
    const ActiveMask none(20, 0), all(20, 1);
    CHECK(delta_edges(d0, empty, none, 4, s) == doctest::Approx(s.alpha_bar(3) * 40));

    const auto flat = NoiseSchedule::from_betas({0.0, 0.5});
    CHECK(delta_edges(d0, empty, all, 1, flat) == 0.0);
    CHECK(delta_edges(d0, ref, all, 1, flat) == 40.0);

    double total = 0.0;
    for (int t = 1; t <= 4; ++t) total += delta_edges(d0, empty, none, t, s);
    CHECK(total == doctest::Approx(40.0).epsilon(1e-14));
}

TEST_CASE("edge reweighting") {
    auto r = edge_reweighted_probs(std::vector<double>{0.3, 0.2}, 0.5);
    CHECK(r.prob[0] == doctest::Approx(0.3));
    CHECK(r.prob[1] == doctest::Approx(0.2));

    r = edge_reweighted_probs(std::vector<double>{0.5, 0.5}, 0.5);
    CHECK(r.prob == std::vector<double>{0.25, 0.25});

    r = edge_reweighted_probs(std::vector<double>{0.9, 0.1}, 1.8);
    CHECK(r.prob[0] == 1.0);
    CHECK(r.prob[1] == doctest::Approx(0.18));
    CHECK(r.clamp_events == 1);
    CHECK(r.clamped_mass == doctest::Approx(0.62));

    r = edge_reweighted_probs(std::vector<double>{0.0, 0.0}, 0.0);
    CHECK(r.prob == std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(edge_reweighted_probs(std::vector<double>{0.0}, 1.0), SamplerError);
}

TEST_CASE("single step: generated edge count averages to Delta E") {
    const Graph ref = gnm_random_graph(40, 120, 5);
    const auto d0 = degree_sequence(ref);
    const auto s = solved_constant(d0, 16);
    const int t = 8;
    const Graph at = forward_marginal_sample(ref, s, t, 3);
    const auto dt = degree_sequence(at);
    ActiveMask mask(40, 0);
    for (NodeId i = 0; i < 40; ++i) mask[i] = dt[i] < d0[i] || i % 3 == 0;
    DegreeAffinityModel model;
    SamplerMode mode{false, true, false};

    Rng rng(1);
    const int reps = 2000;
    double sum = 0.0, sum2 = 0.0;
    EdgeDraw probe;
    for (int r = 0; r < reps; ++r) {
        auto draw = sample_edges(at, mask, dt, d0, t, s, model, mode, rng);
        std::size_t inside = 0;
        for (const Edge& e : draw.next.edges()) inside += mask[e.u] && mask[e.v];
        sum += static_cast<double>(inside);
        sum2 += static_cast<double>(inside) * inside;
        probe = std::move(draw);
    }
    REQUIRE(probe.clamp_events == 0);
    CHECK(probe.expected_generated == doctest::Approx(probe.delta_E).epsilon(1e-12));
    const double mean = sum / reps, var = (sum2 - reps * mean * mean) / (reps - 1);
    CHECK(std::fabs(mean - probe.delta_E) <= 3.0 * std::sqrt(var / reps));
}

TEST_CASE("single step: active-node count averages to h_t") {
    const Graph ref = gnm_random_graph(60, 150, 6);
    const auto d0 = degree_sequence(ref);
    const auto s = solved_constant(d0, 16);
    const auto hist = compress_degrees(d0);
    for (int t : {3, 9, 15}) {
        const auto dt = degree_sequence(forward_marginal_sample(ref, s, t, 8));
        const auto probs = node_reweighted_posterior(dt, d0, t, s);
        if (probs.clamp_events) continue;
        Rng rng(t);
        const int reps = 2000;
        double sum = 0.0, sum2 = 0.0;
        for (int r = 0; r < reps; ++r) {
            const auto draw = sample_active_nodes(dt, d0, hist, t, s, SamplerMode{true, false, false}, rng);
            double c = 0;
            for (auto f : draw.active) c += f;
            sum += c;
            sum2 += c * c;
        }
        const double mean = sum / reps, var = (sum2 - reps * mean * mean) / (reps - 1);
        CHECK(std::fabs(mean - probs.expected_active) <= 3.0 * std::sqrt(var / reps));
    }
}

TEST_CASE("inactive pairs are carried over unchanged in every mode") {
    const Graph ref = gnm_random_graph(30, 80, 2);
    const auto d0 = degree_sequence(ref);
    const auto s = solved_constant(d0, 12);
    DegreeAffinityModel model;
    for (int bits = 0; bits < 8; ++bits) {
        SamplerMode mode{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0};
        Rng rng(bits);
        const Graph at = forward_marginal_sample(ref, s, 6, bits);
        const auto dt = degree_sequence(at);
        const auto nodes = sample_active_nodes(dt, d0, compress_degrees(d0), 6, s, mode, rng);
        const auto draw = sample_edges(at, nodes.active, dt, d0, 6, s, model, mode, rng);
        for (NodeId i = 0; i < 30; ++i)
            for (NodeId j = i + 1; j < 30; ++j)
                if (!(nodes.active[i] && nodes.active[j]))
                    CHECK(at.has_edge(i, j) == draw.next.has_edge(i, j));
        if (mode.keep_existing)
            for (const Edge& e : at.edges()) CHECK(draw.next.has_edge(e.u, e.v));
    }
}

TEST_CASE("all-zero degrees give an empty graph") {
    const DegreeSequence d0(10, 0);
    const auto s = NoiseSchedule::from_betas({0.5, 0.5, 0.5});
    const auto run = sample_degree_guided(d0, DegreeAffinityModel{}, s, SamplerMode{true, true, false}, 1);
    CHECK(run.final_graph.num_edges() == 0);
    for (const auto& r : run.per_t) CHECK(r.active_nodes == 0);
    CHECK_THROWS_AS(sample_degree_guided(DegreeSequence{1, 0}, DegreeAffinityModel{}, s, SamplerMode{}, 1),
                    SamplerError);
}

TEST_CASE("oracle model, corrections off: exact reconstruction") {
    const Graph ref = desk_scale_graph(200, 4);
    const auto d0 = degree_sequence(ref);
    const auto s = solved_constant(d0, 64);
    OracleEdgeModel oracle(ref);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto run = sample_degree_guided(d0, oracle, s, SamplerMode{}, seed);
        CHECK(run.final_graph == ref);
        CHECK(degree_sequence(run.final_graph) == d0);
        CHECK(edge_overlap(run.final_graph, ref) == 1.0);
    }
}

TEST_CASE("vanilla mismatch is observable and the corrections shrink it") {
    const Graph ref = desk_scale_graph(200, 8);
    const auto d0 = degree_sequence(ref);
    const auto s = solved_constant(d0, 128);
    DegreeAffinityModel model;
    const double E0 = static_cast<double>(ref.num_edges());
    auto mare = [&](const GenerationRun& run) {
        double acc = 0.0;
        int n = 0;
        for (const auto& r : run.per_t) {
            const double target = s.alpha_bar(r.t - 1) * E0;
            acc += std::fabs(static_cast<double>(r.edges) - target) / target;
            ++n;
        }
        return acc / n;
    };
    std::size_t over = 0;
    double off = 0.0, on = 0.0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto a = sample_degree_guided(d0, model, s, SamplerMode{}, seed);
        const auto b = sample_degree_guided(d0, model, s, SamplerMode{true, true, false}, seed);
        over += a.over_budget_events;
        off += mare(a);
        on += mare(b);
    }
    CHECK(over > 0);
    CHECK(on < off);
}

TEST_CASE("EO control: full corruption reproduces unconditional sampling") {
    const Graph ref = desk_scale_graph(200, 1);
    const auto d0 = degree_sequence(ref);
    const auto s = solved_constant(d0, 64);
    REQUIRE(s.alpha_bar(64) < 1e-5);
    // Make alpha_bar_T exactly zero so the corrupted start is empty.
    std::vector<double> betas(s.betas().begin(), s.betas().end());
    betas.back() = 1.0;
    const auto s0 = NoiseSchedule::from_betas(betas);
    DegreeAffinityModel model;
    const SamplerMode mode{true, true, false};
    const auto a = sample_with_eo_control(ref, 64, model, s0, mode, 5);
    const auto b = sample_degree_guided(d0, model, s0, mode, 5);
    CHECK(a.final_graph == b.final_graph);

    CHECK_THROWS_AS(sample_with_eo_control(ref, 0, model, s0, mode, 5), SamplerError);
    CHECK_THROWS_AS(sample_with_eo_control(ref, 65, model, s0, mode, 5), SamplerError);
}

TEST_CASE("EO control: light corruption keeps almost everything") {
    const Graph ref = desk_scale_graph(200, 2);
    const auto d0 = degree_sequence(ref);
    const auto s = solved_constant(d0, 256);
    REQUIRE(s.alpha_bar(1) > 0.99);
    const auto run = sample_with_eo_control(ref, 1, DegreeAffinityModel{}, s, SamplerMode{true, true, false}, 3);
    CHECK(edge_overlap(run.final_graph, ref) > 0.97);
}

TEST_CASE("generation is deterministic and its CSV is well formed") {
    const Graph ref = desk_scale_graph(100, 3);
    const auto d0 = degree_sequence(ref);
    const auto s = solved_constant(d0, 20);
    const auto a = sample_degree_guided(d0, DegreeAffinityModel{}, s, SamplerMode{true, true, false}, 9);
    const auto b = sample_degree_guided(d0, DegreeAffinityModel{}, s, SamplerMode{true, true, false}, 9);
    CHECK(a.final_graph == b.final_graph);
    std::ostringstream oa, ob;
    write_generation_csv(oa, a);
    write_generation_csv(ob, b);
    CHECK(oa.str() == ob.str());
    CHECK(oa.str().rfind("t,active_nodes,edges,delta_E,clamp_events_nodes,clamp_events_edges\n20,", 0) == 0);
    REQUIRE(a.per_t.size() == 20);
    CHECK(a.per_t.back().t == 1);
    CHECK(a.per_t.back().edges == a.final_graph.num_edges());
}
