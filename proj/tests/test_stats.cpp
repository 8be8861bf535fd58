#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "edgepp/rng.hpp"
#include "edgepp/stats.hpp"
#include "edgepp/synthetic.hpp"
#include "oracles.hpp"

using namespace edgepp;
using oracle::Dense;
using oracle::same_real;

namespace {

Graph make(std::size_t n, std::initializer_list<Edge> e) {
    return Graph(n, std::span<const Edge>(e.begin(), e.size()));
}

Graph complete(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
    return Graph(n, e);
}

Graph cycle(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i) e.push_back({i, static_cast<NodeId>((i + 1) % n)});
    return Graph(n, e);
}

Graph random_small(Rng& rng) {
    const std::size_t n = 1 + rng.below(7);
    const double p = rng.uniform();
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) e.push_back({i, j});
    return Graph(n, e);
}

Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
    std::vector<Edge> e;
    for (const Edge& x : g.edges()) e.push_back({perm[x.u], perm[x.v]});
    return Graph(g.num_nodes(), e);
}

}  // namespace

TEST_CASE("triangle and square counts on small named graphs") {
    CHECK(triangle_count(complete(3)) == 1);
    CHECK(triangle_count(cycle(4)) == 0);
    CHECK(triangle_count(complete(4)) == 4);
    CHECK(square_count(cycle(4)) == 1);
    CHECK(square_count(complete(3)) == 0);
    CHECK(square_count(complete(4)) == 3);
    CHECK(square_count(make(3, {{0, 1}, {1, 2}})) == 0);
    CHECK(square_count(complete(5)) == 15);
}

TEST_CASE("power-law exponent") {
    CHECK(power_law_exponent(DegreeSequence{1, 1, 1, 1}) == doctest::Approx(1.0 + 1.0 / std::log(2.0)));
    CHECK(power_law_exponent(DegreeSequence{1, 1, 1, 1}) == doctest::Approx(2.4427).epsilon(1e-4));
    const DegreeSequence d{1, 3, 0, 7, 2, 2};
    DegreeSequence twice(d);
    twice.insert(twice.end(), d.begin(), d.end());
    CHECK(power_law_exponent(twice) == doctest::Approx(power_law_exponent(d)).epsilon(1e-14));
    CHECK_THROWS_AS(power_law_exponent(DegreeSequence{0, 0}), StatsError);
}

TEST_CASE("gini") {
    CHECK(gini(DegreeSequence{3, 3, 3}) == 0.0);
    CHECK(gini(DegreeSequence{0, 2}) == 0.5);
    CHECK_THROWS_AS(gini(DegreeSequence{0, 0}), StatsError);
}

TEST_CASE("assortativity") {
    const auto s3 = make(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto a = assortativity(s3);
    CHECK(a.defined);
    CHECK(a.value == doctest::Approx(-1.0).epsilon(1e-15));
    const auto r = assortativity(cycle(6));
    CHECK_FALSE(r.defined);
    CHECK(std::isnan(r.value));
}

TEST_CASE("clustering and path length") {
    CHECK(clustering(complete(3)) == 1.0);
    CHECK(clustering(make(3, {{0, 1}, {1, 2}})) == 0.0);
    CHECK(clustering(Graph(3, std::span<const Edge>{})) == 0.0);
    CHECK(characteristic_path_length(complete(3)) == 1.0);
    CHECK(characteristic_path_length(cycle(4)) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    // Two components: pairs across them are excluded.
    CHECK(characteristic_path_length(make(5, {{0, 1}, {2, 3}, {3, 4}})) ==
          doctest::Approx((1.0 + 1 + 1 + 2) / 4).epsilon(1e-15));
    CHECK_THROWS_AS(characteristic_path_length(Graph(3, std::span<const Edge>{})), StatsError);
}

TEST_CASE("compute_stats against a reference") {
    const auto g = desk_scale_graph(200, 5);
    const auto r = compute_stats(g, &g);
    REQUIRE(r.ntc);
    CHECK(r.ntc->value == 1.0);
    CHECK(r.nsc->value == 1.0);
    CHECK(*r.edge_overlap == 1.0);
    CHECK_FALSE(compute_stats(g).ntc);

    const auto tri_free = cycle(6);
    const auto q = compute_stats(cycle(6), &tri_free);
    CHECK_FALSE(q.ntc->defined);
    CHECK(q.nsc->defined == false);

    const Graph empty(200, std::span<const Edge>{});
    const auto e = compute_stats(empty, &g);
    CHECK(*e.edge_overlap == 0.0);
    CHECK_FALSE(e.ple.defined);
    CHECK_FALSE(e.cpl.defined);
    CHECK_FALSE(e.assortativity.defined);
    CHECK(e.ntc->value == 0.0);
    CHECK_THROWS_AS(compute_stats(complete(3), &g), StatsError);
}

TEST_CASE("brute-force equivalence on random graphs with up to 7 nodes") {
    Rng rng(2718);
    for (int rep = 0; rep < 2000; ++rep) {
        const auto g = random_small(rng);
        const Dense dense(g);
        CAPTURE(format_edge_list(g));
        CHECK(triangle_count(g) == dense.triangles());
        CHECK(triangle_count_serial(g) == dense.triangles());
        CHECK(square_count(g) == dense.squares());
        CHECK(square_count_serial(g) == dense.squares());
        CHECK(same_real(clustering(g), dense.clustering(), 1e-12));
        const auto ac = assortativity(g);
        CHECK(same_real(ac.defined ? ac.value : std::nan(""), dense.assortativity(), 1e-12));
        if (g.num_edges() > 0) {
            CHECK(same_real(characteristic_path_length(g), dense.cpl(), 1e-12));
            CHECK(same_real(gini(degree_sequence(g)), dense.gini(), 1e-12));
            CHECK(same_real(power_law_exponent(degree_sequence(g)), dense.ple(), 1e-12));
        }
    }
}

TEST_CASE("statistics are invariant under relabeling") {
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = gnm_random_graph(60, 150 + rng.below(100), rep);
        std::vector<NodeId> perm(60);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        const auto a = compute_stats(g), b = compute_stats(relabel(g, perm));
        CHECK(a.max_degree == b.max_degree);
        CHECK(a.triangle_count == b.triangle_count);
        CHECK(a.square_count == b.square_count);
        CHECK(a.ple.value == doctest::Approx(b.ple.value).epsilon(1e-13));
        CHECK(a.gini.value == b.gini.value);
        CHECK(same_real(a.assortativity.value, b.assortativity.value, 0.0));
        CHECK(a.clustering == b.clustering);
        CHECK(a.cpl.value == b.cpl.value);
    }
}

TEST_CASE("bounds") {
    Rng rng(6);
    for (int rep = 0; rep < 200; ++rep) {
        const auto g = random_small(rng);
        if (g.num_edges() == 0) continue;
        const auto d = degree_sequence(g);
        const double n = static_cast<double>(d.size());
        CHECK(gini(d) >= 0.0);
        CHECK(gini(d) <= 1.0 - 1.0 / n + 1e-15);
        CHECK(clustering(g) >= 0.0);
        CHECK(clustering(g) <= 1.0);
        CHECK(characteristic_path_length(g) >= 1.0);
        const auto ac = assortativity(g);
        if (ac.defined) {
            CHECK(ac.value >= -1.0 - 1e-15);
            CHECK(ac.value <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("parallel kernels agree with the serial references") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto g = desk_scale_graph(500, seed);
        CHECK(triangle_count(g) == triangle_count_serial(g));
        CHECK(square_count(g) == square_count_serial(g));
        const auto p = path_totals(g), s = path_totals_serial(g);
        CHECK(p.distance_sum == s.distance_sum);
        CHECK(p.connected_pairs == s.connected_pairs);
    }
}

TEST_CASE("text and CSV serialization") {
    const auto g = make(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    std::ostringstream text;
    write_stats_text(text, compute_stats(g, &g));
    const auto s = text.str();
    CHECK(s.find("max_degree = 2\n") != std::string::npos);
    CHECK(s.find("square_count = 1\n") != std::string::npos);
    CHECK(s.find("ntc = nan\nntc_defined = false\n") != std::string::npos);
    CHECK(s.find("cpl = 1.33333\n") != std::string::npos);
    CHECK(s.find("edge_overlap = 1\n") != std::string::npos);

    std::ostringstream csv;
    write_stats_csv_header(csv);
    write_stats_csv_row(csv, compute_stats(g));
    CHECK(csv.str() ==
          "max_degree,triangle_count,square_count,ntc,nsc,ple,gini,assortativity,clustering,cpl,edge_overlap\n"
          "2,0,1,nan,nan,1.72135,0,nan,0,1.33333,nan\n");
}
