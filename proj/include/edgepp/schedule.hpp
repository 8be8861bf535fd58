#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edgepp/forward.hpp"
#include "edgepp/graph.hpp"

namespace edgepp {

class ScheduleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Positive degrees and their multiplicities, ascending by degree.
/// Zero-degree nodes are dropped: they are never active.
struct DegreeHistogram {
    std::vector<std::uint32_t> degree;
    std::vector<std::uint64_t> count;

    bool empty() const noexcept { return degree.empty(); }
    std::uint64_t positive_nodes() const noexcept;
};

DegreeHistogram compress_degrees(std::span<const std::uint32_t> d0);

/// Expected number of nodes losing at least one edge at step t, given
/// alpha_bar_{t-1} and alpha_t:  sum_i 1 - (1 - alpha_bar_{t-1} (1 - alpha_t))^{d0_i}.
/// Exactly summed, so the value depends only on the degree multiset.
double expected_active_step(const DegreeHistogram& hist, double alpha_bar_prev, double alpha_t);

/// Same quantity summed node by node over the uncompressed sequence.
/// Bit-identical to expected_active_step on the compressed histogram.
double expected_active_step_per_node(std::span<const std::uint32_t> d0, double alpha_bar_prev,
                                     double alpha_t);

/// h_{d0}(alpha_{1:t}, t) in closed form. `alphas` holds at least t entries
/// (alpha_1..alpha_t); t >= 1.
double expected_active_nodes(std::span<const std::uint32_t> d0, std::span<const double> alphas,
                             int t);

/// h_{d0}(alpha_{1:t}, t) by the literal binomial marginalization: for t > 1,
/// sum_i sum_{k=1}^{d0_i} (1 - alpha_t^k) Bin(k; d0_i, alpha_bar_{t-1}).
/// Independent of the closed form; kept as a cross-check.
double expected_active_nodes_direct(std::span<const std::uint32_t> d0,
                                    std::span<const double> alphas, int t);

/// h for every t = 1..T of a schedule (index t - 1).
std::vector<double> expected_active_curve(std::span<const std::uint32_t> d0,
                                          const NoiseSchedule& sched);

/// sum_t (h_t - K n gamma_t)^2 with n = d0.size().
double schedule_loss(std::span<const double> alphas, double K, std::span<const double> gamma,
                     std::span<const std::uint32_t> d0);

/// Which bracket moves when a tolerance is violated during the K search.
enum class SearchDirection {
    /// Loss too high shrinks K; alpha product too high grows K.
    kLossShrinksK,
    /// The opposite assignment, as the search loop is sometimes written.
    kLossGrowsK,
};

std::string_view to_string(SearchDirection d);
SearchDirection search_direction_from_string(std::string_view s);

struct SolverConfig {
    /// Absolute loss tolerance in squared-node units. When <= 0 the tolerance
    /// is relative: (eps1_relative * mean target)^2, re-evaluated at each K.
    double eps1 = 0.0;
    double eps1_relative = 0.01;
    double eps2 = 1e-5;
    double k_min = 1e-4;
    double k_max = 10.0;
    int max_outer_iters = 60;
    double alpha_floor = 1e-6;
    SearchDirection direction = SearchDirection::kLossShrinksK;

    /// (0.01 n)^2 T. Too loose for flat schedules on graphs of a thousand
    /// nodes or more, so it is not the default; kept for comparison.
    static double default_eps1(std::size_t n, int T);
    /// Validates ranges; throws ScheduleError.
    SolverConfig resolved() const;
    /// Loss tolerance in force at scale K.
    double loss_tolerance(double K, std::span<const double> gamma, std::size_t n) const;
};

struct InnerSolution {
    std::vector<double> alphas;
    std::vector<double> expected_active;  ///< h_t at the solved alphas
    std::vector<double> target;           ///< K n gamma_t
    double loss = 0.0;
    double alpha_bar_T = 1.0;
    int clamped_low = 0;   ///< steps pinned at alpha_floor (target unreachable)
    int clamped_high = 0;  ///< steps pinned just below 1
};

/// Solves the inner problem for fixed K one timestep at a time: alpha_t is the
/// bisection root of h(alpha_{1:t}, t) = K n gamma_t given alpha_{1:t-1}.
/// Throws ScheduleError when every degree is zero.
InnerSolution solve_alphas_given_K(double K, std::span<const double> gamma,
                                   std::span<const std::uint32_t> d0, const SolverConfig& cfg);

struct SolveReport {
    bool converged = false;
    std::vector<double> alphas;
    double K = 0.0;
    double loss = 0.0;
    double alpha_bar_T = 1.0;
    std::vector<double> per_t_expected_active;
    std::vector<double> per_t_target;
    int iterations = 0;
    SolverConfig config;  ///< resolved configuration actually used
    double eps1 = 0.0;    ///< loss tolerance in force at the reported K

    NoiseSchedule schedule() const { return NoiseSchedule::from_alphas(alphas); }
};

/// Outer bisection on K until loss <= eps1 and prod alpha <= eps2, or the
/// iteration cap. On failure the report carries the best iterate found and
/// converged == false.
SolveReport solve_schedule(std::span<const double> gamma, std::span<const std::uint32_t> d0,
                           const SolverConfig& cfg);

/// Named active-node schedules: constant, poly1, poly2, poly3.
std::vector<double> gamma_library(std::string_view name, int T);

/// beta linearly interpolated from beta_start (t = 1) to beta_end (t = T).
NoiseSchedule baseline_linear_schedule(int T, double beta_start, double beta_end);

/// Schedule CSV: header `t,beta,alpha,alpha_bar,gamma,target_active,expected_active`,
/// 17 significant digits, then a `#` comment block with K, eps1, eps2, loss.
void write_schedule_csv(std::ostream& out, const SolveReport& report,
                        std::span<const double> gamma);

struct ScheduleFile {
    NoiseSchedule schedule;
    std::vector<double> gamma;
    std::vector<double> target_active;
    std::vector<double> expected_active;
    double K = 0.0, eps1 = 0.0, eps2 = 0.0, loss = 0.0;
};

ScheduleFile read_schedule_csv(std::istream& in);

}  // namespace edgepp
