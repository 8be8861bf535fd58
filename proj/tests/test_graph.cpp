#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "edgepp/graph.hpp"
#include "edgepp/rng.hpp"
#include "edgepp/synthetic.hpp"

using namespace edgepp;

namespace {

Graph make(std::size_t n, std::initializer_list<Edge> e) {
    return Graph(n, std::span<const Edge>(e.begin(), e.size()));
}

std::size_t parse_error_line(std::string_view text) {
    try {
        parse_edge_list(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("parse canonicalizes and infers n") {
    const auto g = parse_edge_list("0 1\n1 2");
    CHECK(g.num_nodes() == 3);
    CHECK(g == make(3, {{0, 1}, {1, 2}}));

    const auto h = parse_edge_list("1 0\n0 1");
    CHECK(h.num_nodes() == 2);
    CHECK(h.num_edges() == 1);
    CHECK(h.edges()[0] == Edge{0, 1});
}

TEST_CASE("parse accepts comments, blank lines, CRLF and a node-count header") {
    const auto g = parse_edge_list("# polblogs-like\r\nN 6\r\n\r\n2 3 # trailing\r\n0\t1\r\n");
    CHECK(g.num_nodes() == 6);
    CHECK(g.num_edges() == 2);
    CHECK(g.degree(5) == 0);
}

TEST_CASE("parse errors carry the offending line number") {
    CHECK(parse_error_line("0 1\n1 x\n") == 2);
    CHECK(parse_error_line("0 1\n\n# c\n3 3\n") == 4);
    CHECK(parse_error_line("N 3\n0 1\n1 3\n") == 3);
    CHECK(parse_error_line("0 1 2\n") == 1);
    CHECK(parse_error_line("0\n") == 1);
    CHECK(parse_error_line("-1 2\n") == 1);
}

TEST_CASE("constructor rejects self-loops and out-of-range endpoints") {
    CHECK_THROWS_AS(make(3, {{1, 1}}), GraphError);
    CHECK_THROWS_AS(make(3, {{0, 3}}), GraphError);
}

TEST_CASE("load_edge_list names a missing path") {
    try {
        load_edge_list("/nonexistent/edges.txt");
        FAIL("expected an error");
    } catch (const GraphError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/edges.txt") != std::string::npos);
    }
}

TEST_CASE("format then parse round-trips, isolated trailing nodes included") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const std::size_t n = 1 + rng.below(40);
        const std::size_t max_e = n * (n - 1) / 2;
        const auto g = gnm_random_graph(n, max_e ? rng.below(max_e + 1) : 0, seed);
        const auto text = format_edge_list(g);
        const auto back = parse_edge_list(text);
        REQUIRE(back == g);
        CHECK(format_edge_list(back) == text);
    }
    const Graph empty(4, std::span<const Edge>{});
    CHECK(parse_edge_list(format_edge_list(empty)) == empty);
}

TEST_CASE("save and load through a file") {
    const auto path = std::filesystem::temp_directory_path() / "edgepp_graph_roundtrip.txt";
    const auto g = make(7, {{0, 1}, {2, 5}, {1, 4}});
    save_edge_list(g, path.string());
    CHECK(load_edge_list(path.string()) == g);
    std::filesystem::remove(path);
}

TEST_CASE("degree sequences") {
    CHECK(degree_sequence(make(3, {{0, 1}, {1, 2}, {0, 2}})) == DegreeSequence{2, 2, 2});
    CHECK(degree_sequence(Graph(4, std::span<const Edge>{})) == DegreeSequence{0, 0, 0, 0});
    CHECK(degree_sequence(make(4, {{0, 1}, {0, 2}, {0, 3}})) == DegreeSequence{3, 1, 1, 1});

    const auto g = desk_scale_graph(200, 3);
    std::uint64_t sum = 0;
    for (auto d : degree_sequence(g)) sum += d;
    CHECK(sum == 2 * g.num_edges());
}

TEST_CASE("edge overlap") {
    const auto ref = make(3, {{0, 1}, {1, 2}});
    CHECK(edge_overlap(ref, ref) == 1.0);
    CHECK(edge_overlap(make(3, {{0, 2}}), ref) == 0.0);
    CHECK(edge_overlap(make(3, {{0, 1}}), ref) == 0.5);
    CHECK(edge_overlap(Graph(3, std::span<const Edge>{}), Graph(3, std::span<const Edge>{})) == 0.0);
    CHECK_THROWS_AS(edge_overlap(make(4, {{0, 1}}), ref), GraphError);

    // Symmetric when edge counts agree.
    const auto a = gnm_random_graph(30, 60, 1), b = gnm_random_graph(30, 60, 2);
    CHECK(edge_overlap(a, b) == edge_overlap(b, a));
}

TEST_CASE("active subgraph edge count") {
    const auto tri = make(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(active_subgraph_edge_count(tri, {1, 1, 1}) == 3);
    CHECK(active_subgraph_edge_count(tri, {0, 1, 0}) == 0);
    CHECK(active_subgraph_edge_count(make(3, {{0, 1}, {1, 2}}), {1, 1, 0}) == 1);
    CHECK_THROWS_AS(active_subgraph_edge_count(tri, {1, 1}), GraphError);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = gnm_random_graph(25, 40, seed);
        const ActiveMask all(25, 1);
        std::uint64_t sum = 0;
        for (auto d : degree_sequence(g)) sum += d;
        CHECK(2 * active_subgraph_edge_count(g, all) == sum);
    }
}

TEST_CASE("active mask between consecutive graphs") {
    const auto before = make(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto after = make(4, {{0, 1}, {2, 3}});
    CHECK(active_mask_between(before, after) == ActiveMask{0, 1, 1, 0});
}
