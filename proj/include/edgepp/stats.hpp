#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgepp/graph.hpp"

namespace edgepp {

class StatsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A real-valued statistic that may be undefined (0/0, zero variance, ...).
/// Undefined values carry NaN and defined == false; they are never zeroed.
struct Stat {
    double value = 0.0;
    bool defined = true;

    static Stat undefined();
    explicit operator bool() const noexcept { return defined; }
};

// Kernels with an OpenMP-parallel path and a serial reference. The two agree
// exactly: every reduction is over integers.
std::uint64_t triangle_count(const Graph& g);
std::uint64_t triangle_count_serial(const Graph& g);

/// Simple 4-cycles, each counted once:
///   (sum_{i,j} ((A^2)_ij)^2 - sum_i d_i (2 d_i - 1)) / 8.
std::uint64_t square_count(const Graph& g);
std::uint64_t square_count_serial(const Graph& g);

/// Sum of BFS distances over connected unordered pairs, and the pair count.
struct PathTotals {
    std::uint64_t distance_sum = 0;
    std::uint64_t connected_pairs = 0;
};
PathTotals path_totals(const Graph& g);
PathTotals path_totals_serial(const Graph& g);

/// Continuous MLE with d_min = 1 over positive degrees:
///   1 + m / sum_i ln(d_i / 0.5).
/// Throws StatsError when every degree is zero.
double power_law_exponent(const DegreeSequence& d);

/// sum_{i,j} |d_i - d_j| / (2 n sum_i d_i), via sorting. Throws StatsError on zero sum.
double gini(const DegreeSequence& d);

/// Degree assortativity: Pearson correlation of endpoint degrees over both
/// orientations of every edge. Undefined with fewer than 2 edges or zero variance.
Stat assortativity(const Graph& g);

/// 3 * triangles / wedges, wedges = sum_i C(d_i, 2); 0 when there are no wedges.
double clustering(const Graph& g);

/// Mean shortest-path length over connected pairs. Throws StatsError on an edgeless graph.
double characteristic_path_length(const Graph& g);

struct StatsReport {
    std::uint32_t max_degree = 0;
    std::uint64_t triangle_count = 0;
    std::uint64_t square_count = 0;
    std::optional<Stat> ntc;  ///< present only with a reference
    std::optional<Stat> nsc;
    Stat ple;
    Stat gini;
    Stat assortativity;
    double clustering = 0.0;
    Stat cpl;
    std::optional<double> edge_overlap;
};

/// All statistics; ntc, nsc and edge overlap when a reference is given.
/// Statistics whose preconditions fail (edgeless graph, zero degree sum) are
/// reported as undefined rather than throwing.
StatsReport compute_stats(const Graph& g, const Graph* reference = nullptr);

/// `key = value` lines, 6 significant digits; undefined values print `nan`
/// and add a `<key>_defined = false` line.
void write_stats_text(std::ostream& out, const StatsReport& r);

/// Column names shared by the CSV row writers.
std::vector<std::string> stats_csv_columns();
/// Values in stats_csv_columns() order; NaN for undefined or absent entries.
std::vector<double> stats_values(const StatsReport& r);
void write_stats_csv_header(std::ostream& out);
void write_stats_csv_row(std::ostream& out, const StatsReport& r);

}  // namespace edgepp
