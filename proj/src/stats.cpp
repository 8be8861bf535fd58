#include "edgepp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "edgepp/csv.hpp"
#include "edgepp/numeric.hpp"

namespace edgepp {

Stat Stat::undefined() { return {std::numeric_limits<double>::quiet_NaN(), false}; }

namespace {

std::uint64_t triangles_at(const Graph& g, NodeId u) {
    std::uint64_t count = 0;
    const auto nu = g.neighbors(u);
    for (NodeId v : nu) {
        if (v <= u) continue;
        const auto nv = g.neighbors(v);
        // Common neighbors w > v, so each triangle u < v < w is seen once.
        auto a = std::upper_bound(nu.begin(), nu.end(), v);
        auto b = std::upper_bound(nv.begin(), nv.end(), v);
        while (a != nu.end() && b != nv.end()) {
            if (*a < *b) {
                ++a;
            } else if (*b < *a) {
                ++b;
            } else {
                ++count;
                ++a;
                ++b;
            }
        }
    }
    return count;
}

/// sum_j (A^2)_{ij}^2 for one row, using a caller-owned zeroed scratch array.
std::uint64_t closed_four_walks_at(const Graph& g, NodeId i, std::vector<std::uint32_t>& paths,
                                   std::vector<NodeId>& touched) {
    touched.clear();
    for (NodeId k : g.neighbors(i))
        for (NodeId j : g.neighbors(k)) {
            if (paths[j]++ == 0) touched.push_back(j);
        }
    std::uint64_t sum = 0;
    for (NodeId j : touched) {
        const std::uint64_t c = paths[j];
        sum += c * c;
        paths[j] = 0;
    }
    return sum;
}

std::uint64_t degree_correction(const Graph& g) {
    std::uint64_t s = 0;
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        const std::uint64_t d = g.degree(i);
        s += d * (2 * d - (d > 0 ? 1 : 0));
    }
    return s;
}

std::uint64_t squares_from_walks(std::uint64_t walks, const Graph& g) {
    return (walks - degree_correction(g)) / 8;
}

/// BFS from source; returns (sum of distances, reached count excluding source).
PathTotals bfs_from(const Graph& g, NodeId source, std::vector<std::int32_t>& dist,
                    std::vector<NodeId>& queue) {
    PathTotals t;
    queue.clear();
    queue.push_back(source);
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                t.distance_sum += static_cast<std::uint64_t>(dist[v]);
                ++t.connected_pairs;
                queue.push_back(v);
            }
        }
    }
    for (NodeId v : queue) dist[v] = -1;
    return t;
}

}  // namespace

std::uint64_t triangle_count_serial(const Graph& g) {
    std::uint64_t total = 0;
    for (NodeId u = 0; u < g.num_nodes(); ++u) total += triangles_at(g, u);
    return total;
}

std::uint64_t triangle_count(const Graph& g) {
    std::uint64_t total = 0;
    const auto n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel for schedule(dynamic, 32) reduction(+ : total)
    for (std::int64_t u = 0; u < n; ++u) total += triangles_at(g, static_cast<NodeId>(u));
    return total;
}

std::uint64_t square_count_serial(const Graph& g) {
    std::vector<std::uint32_t> paths(g.num_nodes(), 0);
    std::vector<NodeId> touched;
    std::uint64_t walks = 0;
    for (NodeId i = 0; i < g.num_nodes(); ++i) walks += closed_four_walks_at(g, i, paths, touched);
    return squares_from_walks(walks, g);
}

std::uint64_t square_count(const Graph& g) {
    std::uint64_t walks = 0;
    const auto n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel reduction(+ : walks)
    {
        std::vector<std::uint32_t> paths(g.num_nodes(), 0);
        std::vector<NodeId> touched;
#pragma omp for schedule(dynamic, 32)
        for (std::int64_t i = 0; i < n; ++i)
            walks += closed_four_walks_at(g, static_cast<NodeId>(i), paths, touched);
    }
    return squares_from_walks(walks, g);
}

PathTotals path_totals_serial(const Graph& g) {
    std::vector<std::int32_t> dist(g.num_nodes(), -1);
    std::vector<NodeId> queue;
    queue.reserve(g.num_nodes());
    PathTotals total;
    for (NodeId s = 0; s < g.num_nodes(); ++s) {
        auto t = bfs_from(g, s, dist, queue);
        total.distance_sum += t.distance_sum;
        total.connected_pairs += t.connected_pairs;
    }
    // Every unordered pair was reached from both ends.
    total.distance_sum /= 2;
    total.connected_pairs /= 2;
    return total;
}

PathTotals path_totals(const Graph& g) {
    std::uint64_t dsum = 0, pairs = 0;
    const auto n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel reduction(+ : dsum, pairs)
    {
        std::vector<std::int32_t> dist(g.num_nodes(), -1);
        std::vector<NodeId> queue;
        queue.reserve(g.num_nodes());
#pragma omp for schedule(dynamic, 8)
        for (std::int64_t s = 0; s < n; ++s) {
            auto t = bfs_from(g, static_cast<NodeId>(s), dist, queue);
            dsum += t.distance_sum;
            pairs += t.connected_pairs;
        }
    }
    return {dsum / 2, pairs / 2};
}

double power_law_exponent(const DegreeSequence& d) {
    std::size_t m = 0;
    double log_sum = 0.0;
    for (auto x : d) {
        if (x == 0) continue;
        ++m;
        log_sum += std::log(static_cast<double>(x) / 0.5);
    }
    if (m == 0) throw StatsError("power-law exponent needs at least one positive degree");
    return 1.0 + static_cast<double>(m) / log_sum;
}

double gini(const DegreeSequence& d) {
    std::uint64_t total = 0;
    for (auto x : d) total += x;
    if (total == 0) throw StatsError("gini undefined for zero degree sum");
    std::vector<std::uint32_t> s(d.begin(), d.end());
    std::sort(s.begin(), s.end());
    // sum_{i,j} |x_i - x_j| = 2 sum_i (2i - n + 1) x_(i) over ascending order.
    const auto n = static_cast<std::int64_t>(s.size());
    std::int64_t acc = 0;
    for (std::int64_t i = 0; i < n; ++i)
        acc += (2 * i - n + 1) * static_cast<std::int64_t>(s[static_cast<std::size_t>(i)]);
    return static_cast<double>(2 * acc) /
           (2.0 * static_cast<double>(n) * static_cast<double>(total));
}

Stat assortativity(const Graph& g) {
    if (g.num_edges() < 2) return Stat::undefined();
    // Exact integer moments over both orientations of every edge.
    uint128 s1 = 0, s2 = 0, s11 = 0;
    for (const Edge& e : g.edges()) {
        const uint128 a = g.degree(e.u), b = g.degree(e.v);
        s1 += a + b;
        s2 += a * a + b * b;
        s11 += 2 * a * b;
    }
    const uint128 m = 2 * static_cast<uint128>(g.num_edges());
    const int128 var = static_cast<int128>(m * s2) - static_cast<int128>(s1 * s1);
    const int128 cov = static_cast<int128>(m * s11) - static_cast<int128>(s1 * s1);
    if (var == 0) return Stat::undefined();
    return {static_cast<double>(cov) / static_cast<double>(var), true};
}

double clustering(const Graph& g) {
    std::uint64_t wedges = 0;
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        const std::uint64_t d = g.degree(i);
        wedges += d * (d - (d > 0 ? 1 : 0)) / 2;
    }
    if (wedges == 0) return 0.0;
    return 3.0 * static_cast<double>(triangle_count(g)) / static_cast<double>(wedges);
}

double characteristic_path_length(const Graph& g) {
    if (g.num_edges() == 0) throw StatsError("characteristic path length undefined without edges");
    const auto t = path_totals(g);
    return static_cast<double>(t.distance_sum) / static_cast<double>(t.connected_pairs);
}

StatsReport compute_stats(const Graph& g, const Graph* reference) {
    StatsReport r;
    const auto d = degree_sequence(g);
    for (auto x : d) r.max_degree = std::max(r.max_degree, x);
    r.triangle_count = triangle_count(g);
    r.square_count = square_count(g);

    const bool has_edges = g.num_edges() > 0;
    r.ple = has_edges ? Stat{power_law_exponent(d), true} : Stat::undefined();
    r.gini = has_edges ? Stat{gini(d), true} : Stat::undefined();
    r.assortativity = assortativity(g);
    r.clustering = clustering(g);
    r.cpl = has_edges ? Stat{characteristic_path_length(g), true} : Stat::undefined();

    if (reference) {
        if (reference->num_nodes() != g.num_nodes())
            throw StatsError("reference has " + std::to_string(reference->num_nodes()) +
                             " nodes, graph has " + std::to_string(g.num_nodes()));
        const auto rt = triangle_count(*reference);
        const auto rs = square_count(*reference);
        r.ntc = rt ? Stat{static_cast<double>(r.triangle_count) / static_cast<double>(rt), true}
                   : Stat::undefined();
        r.nsc = rs ? Stat{static_cast<double>(r.square_count) / static_cast<double>(rs), true}
                   : Stat::undefined();
        r.edge_overlap = edge_overlap(g, *reference);
    }
    return r;
}

namespace {

void put(std::ostream& out, const char* key, const Stat& s) {
    out << key << " = " << format_g(s.value, 6) << '\n';
    if (!s.defined) out << key << "_defined = false\n";
}

}  // namespace

void write_stats_text(std::ostream& out, const StatsReport& r) {
    out << "max_degree = " << r.max_degree << '\n'
        << "triangle_count = " << r.triangle_count << '\n'
        << "square_count = " << r.square_count << '\n';
    if (r.ntc) put(out, "ntc", *r.ntc);
    if (r.nsc) put(out, "nsc", *r.nsc);
    put(out, "ple", r.ple);
    put(out, "gini", r.gini);
    put(out, "assortativity", r.assortativity);
    out << "clustering = " << format_g(r.clustering, 6) << '\n';
    put(out, "cpl", r.cpl);
    if (r.edge_overlap) out << "edge_overlap = " << format_g(*r.edge_overlap, 6) << '\n';
}

std::vector<std::string> stats_csv_columns() {
    return {"max_degree", "triangle_count", "square_count", "ntc", "nsc", "ple",
            "gini", "assortativity", "clustering", "cpl", "edge_overlap"};
}

std::vector<double> stats_values(const StatsReport& r) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto opt = [&](const std::optional<Stat>& s) { return s ? s->value : nan; };
    return {static_cast<double>(r.max_degree),
            static_cast<double>(r.triangle_count),
            static_cast<double>(r.square_count),
            opt(r.ntc),
            opt(r.nsc),
            r.ple.value,
            r.gini.value,
            r.assortativity.value,
            r.clustering,
            r.cpl.value,
            r.edge_overlap.value_or(nan)};
}

void write_stats_csv_header(std::ostream& out) {
    const auto cols = stats_csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
}

void write_stats_csv_row(std::ostream& out, const StatsReport& r) {
    const auto v = stats_values(r);
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_g(v[i], 6);
    out << '\n';
}

}  // namespace edgepp
