#include "edgepp/graph.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <fstream>
#include <sstream>

namespace edgepp {

ParseError::ParseError(std::size_t line, const std::string& what)
    : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

Edge canonical(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

Graph::Graph(std::size_t n, std::span<const Edge> edges) : n_(n) {
    edges_.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.u == e.v) throw GraphError("self-loop on node " + std::to_string(e.u));
        if (e.u >= n || e.v >= n)
            throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") out of range for n=" + std::to_string(n));
        edges_.push_back(canonical(e.u, e.v));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    build_adjacency();
}

Graph::Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges)
    : Graph(n, [&] {
          std::vector<Edge> tmp;
          tmp.reserve(edges.size());
          for (auto [a, b] : edges) tmp.push_back({a, b});
          return tmp;
      }()) {}

Graph Graph::from_sorted_unique(std::size_t n, std::vector<Edge> edges) {
    assert(std::is_sorted(edges.begin(), edges.end()));
    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.build_adjacency();
    return g;
}

void Graph::build_adjacency() {
    offsets_.assign(n_ + 1, 0);
    for (const Edge& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
    adj_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u, v), so appending in order leaves every list sorted:
    // for node x, entries from edges (w, x) with w < x arrive before (x, y).
    for (const Edge& e : edges_) {
        adj_[cursor[e.u]++] = e.v;
        adj_[cursor[e.v]++] = e.u;
    }
}

bool Graph::has_edge(NodeId a, NodeId b) const noexcept {
    if (a >= n_ || b >= n_ || a == b) return false;
    if (degree(a) > degree(b)) std::swap(a, b);
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::uint64_t parse_index(std::string_view tok, std::size_t line) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line, "expected nonnegative integer, got '" + std::string(tok) + "'");
    if (value > std::uint64_t{0xFFFFFFFEu})
        throw ParseError(line, "node index too large: " + std::string(tok));
    return value;
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
    std::vector<Edge> edges;
    bool have_header = false;
    bool seen_data = false;
    std::uint64_t declared_n = 0;
    std::uint64_t max_index_plus_one = 0;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        auto tokens = split_ws(line);
        if (!seen_data && tokens.size() == 2 && tokens[0] == "N") {
            declared_n = parse_index(tokens[1], line_no);
            have_header = true;
            seen_data = true;
            continue;
        }
        seen_data = true;
        if (tokens.size() != 2)
            throw ParseError(line_no, "expected two node indices, got " +
                                          std::to_string(tokens.size()) + " tokens");
        auto a = parse_index(tokens[0], line_no);
        auto b = parse_index(tokens[1], line_no);
        if (a == b) throw ParseError(line_no, "self-loop on node " + std::to_string(a));
        if (have_header && (a >= declared_n || b >= declared_n))
            throw ParseError(line_no, "node index >= declared N " + std::to_string(declared_n));
        max_index_plus_one = std::max({max_index_plus_one, a + 1, b + 1});
        edges.push_back(canonical(static_cast<NodeId>(a), static_cast<NodeId>(b)));
    }

    const std::uint64_t n = have_header ? declared_n : max_index_plus_one;
    return Graph(static_cast<std::size_t>(n), edges);
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GraphError("cannot open edge list '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_edge_list(buf.str());
}

std::string format_edge_list(const Graph& g) {
    std::size_t implied = 0;
    for (const Edge& e : g.edges()) implied = std::max<std::size_t>(implied, e.v + 1);
    std::string out;
    out.reserve(g.num_edges() * 12 + 16);
    if (implied != g.num_nodes()) out += "N " + std::to_string(g.num_nodes()) + "\n";
    for (const Edge& e : g.edges()) {
        out += std::to_string(e.u);
        out += ' ';
        out += std::to_string(e.v);
        out += '\n';
    }
    return out;
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GraphError("cannot write edge list '" + path + "'");
    out << format_edge_list(g);
    if (!out) throw GraphError("write failed for '" + path + "'");
}

DegreeSequence degree_sequence(const Graph& g) {
    DegreeSequence d(g.num_nodes());
    for (NodeId i = 0; i < g.num_nodes(); ++i) d[i] = static_cast<std::uint32_t>(g.degree(i));
    return d;
}

double edge_overlap(const Graph& generated, const Graph& reference) {
    if (generated.num_nodes() != reference.num_nodes())
        throw GraphError("edge_overlap: node count mismatch (" +
                         std::to_string(generated.num_nodes()) + " vs " +
                         std::to_string(reference.num_nodes()) + ")");
    auto a = generated.edges();
    auto b = reference.edges();
    std::size_t common = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return static_cast<double>(common) / static_cast<double>(std::max<std::size_t>(b.size(), 1));
}

std::size_t active_subgraph_edge_count(const Graph& g, const ActiveMask& s) {
    if (s.size() != g.num_nodes())
        throw GraphError("active mask length " + std::to_string(s.size()) +
                         " does not match node count " + std::to_string(g.num_nodes()));
    std::size_t count = 0;
    for (const Edge& e : g.edges())
        if (s[e.u] && s[e.v]) ++count;
    return count;
}

ActiveMask active_mask_between(const Graph& before, const Graph& after) {
    if (before.num_nodes() != after.num_nodes())
        throw GraphError("active_mask_between: node count mismatch");
    ActiveMask s(before.num_nodes(), 0);
    for (NodeId i = 0; i < before.num_nodes(); ++i)
        s[i] = before.degree(i) != after.degree(i) ? 1 : 0;
    return s;
}

}  // namespace edgepp
