#include "edgepp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "edgepp/csv.hpp"
#include "edgepp/numeric.hpp"

namespace edgepp {

namespace {

constexpr double kAlphaCeiling = 1.0 - 1e-12;
constexpr double kAlphaTolerance = 1e-12;

// Fixed point of x -> 1 - (1 - x): keeps alpha == 1 - beta exact once a
// solved alpha goes through NoiseSchedule::from_alphas.
double snap_alpha(double a) { return 1.0 - (1.0 - a); }

}  // namespace

std::uint64_t DegreeHistogram::positive_nodes() const noexcept {
    std::uint64_t total = 0;
    for (auto c : count) total += c;
    return total;
}

DegreeHistogram compress_degrees(std::span<const std::uint32_t> d0) {
    std::map<std::uint32_t, std::uint64_t> counts;
    for (auto d : d0)
        if (d > 0) ++counts[d];
    DegreeHistogram h;
    h.degree.reserve(counts.size());
    h.count.reserve(counts.size());
    for (auto [d, c] : counts) {
        h.degree.push_back(d);
        h.count.push_back(c);
    }
    return h;
}

double expected_active_step(const DegreeHistogram& hist, double alpha_bar_prev, double alpha_t) {
    const double x = alpha_bar_prev * (1.0 - alpha_t);
    ExactSum sum;
    for (std::size_t i = 0; i < hist.degree.size(); ++i)
        sum.add_scaled(one_minus_pow1m(x, hist.degree[i]), static_cast<double>(hist.count[i]));
    return sum.value();
}

double expected_active_step_per_node(std::span<const std::uint32_t> d0, double alpha_bar_prev,
                                     double alpha_t) {
    const double x = alpha_bar_prev * (1.0 - alpha_t);
    ExactSum sum;
    for (auto d : d0) sum.add(one_minus_pow1m(x, d));
    return sum.value();
}

namespace {

double alpha_bar_before(std::span<const double> alphas, int t) {
    if (t < 1 || static_cast<std::size_t>(t) > alphas.size())
        throw ScheduleError("timestep " + std::to_string(t) + " needs " + std::to_string(t) +
                            " alphas, have " + std::to_string(alphas.size()));
    double ab = 1.0;
    for (int tau = 1; tau < t; ++tau) ab *= alphas[static_cast<std::size_t>(tau) - 1];
    return ab;
}

}  // namespace

double expected_active_nodes(std::span<const std::uint32_t> d0, std::span<const double> alphas,
                             int t) {
    const double ab = alpha_bar_before(alphas, t);
    return expected_active_step(compress_degrees(d0), ab, alphas[static_cast<std::size_t>(t) - 1]);
}

double expected_active_nodes_direct(std::span<const std::uint32_t> d0,
                                    std::span<const double> alphas, int t) {
    const double ab = alpha_bar_before(alphas, t);
    const double a = alphas[static_cast<std::size_t>(t) - 1];
    const double log_a = std::log(a);
    auto one_minus_alpha_pow = [&](std::uint32_t k) {
        return k == 0 ? 0.0 : -std::expm1(static_cast<double>(k) * log_a);
    };
    double total = 0.0;
    for (auto d : d0) {
        if (t == 1) {
            total += one_minus_alpha_pow(d);
            continue;
        }
        for (std::uint32_t k = 1; k <= d; ++k)
            total += one_minus_alpha_pow(k) * binomial_pmf(k, d, ab);
    }
    return total;
}

std::vector<double> expected_active_curve(std::span<const std::uint32_t> d0,
                                          const NoiseSchedule& sched) {
    const auto hist = compress_degrees(d0);
    std::vector<double> h(static_cast<std::size_t>(sched.horizon()));
    for (int t = 1; t <= sched.horizon(); ++t)
        h[static_cast<std::size_t>(t) - 1] =
            expected_active_step(hist, sched.alpha_bar(t - 1), sched.alpha(t));
    return h;
}

double schedule_loss(std::span<const double> alphas, double K, std::span<const double> gamma,
                     std::span<const std::uint32_t> d0) {
    if (alphas.size() != gamma.size())
        throw ScheduleError("schedule_loss: " + std::to_string(alphas.size()) + " alphas vs " +
                            std::to_string(gamma.size()) + " gamma values");
    const auto hist = compress_degrees(d0);
    const double n = static_cast<double>(d0.size());
    double ab = 1.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double r = expected_active_step(hist, ab, alphas[i]) - K * n * gamma[i];
        loss += r * r;
        ab *= alphas[i];
    }
    return loss;
}

std::string_view to_string(SearchDirection d) {
    return d == SearchDirection::kLossShrinksK ? "loss-shrinks-k" : "loss-grows-k";
}

SearchDirection search_direction_from_string(std::string_view s) {
    if (s == "loss-shrinks-k") return SearchDirection::kLossShrinksK;
    if (s == "loss-grows-k") return SearchDirection::kLossGrowsK;
    throw ScheduleError("unknown search direction '" + std::string(s) + "'");
}

double SolverConfig::default_eps1(std::size_t n, int T) {
    const double scale = 0.01 * static_cast<double>(n);
    return scale * scale * static_cast<double>(T);
}

SolverConfig SolverConfig::resolved() const {
    SolverConfig c = *this;
    if (!(c.eps1 > 0.0) && !(c.eps1_relative > 0.0))
        throw ScheduleError("eps1_relative must be positive when eps1 is unset");
    if (!(c.eps2 > 0.0 && c.eps2 < 1.0)) throw ScheduleError("eps2 must lie in (0, 1)");
    if (!(c.k_min > 0.0 && c.k_min < c.k_max)) throw ScheduleError("need 0 < k_min < k_max");
    if (!(c.alpha_floor > 0.0 && c.alpha_floor < 1.0))
        throw ScheduleError("alpha_floor must lie in (0, 1)");
    if (c.max_outer_iters < 1) throw ScheduleError("max_outer_iters must be positive");
    return c;
}

double SolverConfig::loss_tolerance(double K, std::span<const double> gamma,
                                    std::size_t n) const {
    if (eps1 > 0.0) return eps1;
    double mean_gamma = 0.0;
    for (double g : gamma) mean_gamma += g;
    mean_gamma /= static_cast<double>(gamma.size());
    const double scale = eps1_relative * K * static_cast<double>(n) * mean_gamma;
    return scale * scale;
}

InnerSolution solve_alphas_given_K(double K, std::span<const double> gamma,
                                   std::span<const std::uint32_t> d0, const SolverConfig& cfg) {
    if (!(K > 0.0)) throw ScheduleError("K must be positive");
    const auto hist = compress_degrees(d0);
    if (hist.empty())
        throw ScheduleError("all degrees are zero: no node can ever be active");

    const double n = static_cast<double>(d0.size());
    const std::size_t T = gamma.size();
    InnerSolution sol;
    sol.alphas.resize(T);
    sol.expected_active.resize(T);
    sol.target.resize(T);

    double ab = 1.0;
    for (std::size_t i = 0; i < T; ++i) {
        const double target = K * n * gamma[i];
        auto h = [&](double a) { return expected_active_step(hist, ab, a); };

        double alpha;
        if (target >= h(cfg.alpha_floor)) {
            alpha = cfg.alpha_floor;
            ++sol.clamped_low;
        } else if (target <= h(kAlphaCeiling)) {
            alpha = kAlphaCeiling;
            ++sol.clamped_high;
        } else {
            // h is strictly decreasing in alpha here.
            double lo = cfg.alpha_floor, hi = kAlphaCeiling;
            while (hi - lo > kAlphaTolerance) {
                const double mid = 0.5 * (lo + hi);
                if (h(mid) > target)
                    lo = mid;
                else
                    hi = mid;
            }
            alpha = 0.5 * (lo + hi);
        }
        alpha = snap_alpha(alpha);

        const double achieved = h(alpha);
        sol.alphas[i] = alpha;
        sol.expected_active[i] = achieved;
        sol.target[i] = target;
        sol.loss += (achieved - target) * (achieved - target);
        ab *= alpha;
    }
    sol.alpha_bar_T = ab;
    return sol;
}

SolveReport solve_schedule(std::span<const double> gamma, std::span<const std::uint32_t> d0,
                           const SolverConfig& cfg_in) {
    if (gamma.empty()) throw ScheduleError("empty gamma schedule");
    for (double g : gamma)
        if (!(g > 0.0)) throw ScheduleError("gamma values must be positive");
    const SolverConfig cfg = cfg_in.resolved();
    auto tol = [&](double K) { return cfg.loss_tolerance(K, gamma, d0.size()); };

    auto violation = [&](const InnerSolution& s, double K) {
        return std::max(s.loss / tol(K), s.alpha_bar_T / cfg.eps2);
    };
    auto feasible = [&](const InnerSolution& s, double K) {
        return s.loss <= tol(K) && s.alpha_bar_T <= cfg.eps2;
    };

    double k_lo = cfg.k_min, k_hi = cfg.k_max;
    double K = 0.5 * (k_lo + k_hi);
    InnerSolution sol = solve_alphas_given_K(K, gamma, d0, cfg);
    int iterations = 1;
    InnerSolution best = sol;
    double best_K = K;

    while (!feasible(sol, K) && iterations < cfg.max_outer_iters) {
        const bool shrink = (sol.loss > tol(K)) == (cfg.direction == SearchDirection::kLossShrinksK);
        if (shrink) {
            k_hi = K;
            K = 0.5 * (K + k_lo);
        } else {
            k_lo = K;
            K = 0.5 * (K + k_hi);
        }
        sol = solve_alphas_given_K(K, gamma, d0, cfg);
        ++iterations;
        if (violation(sol, K) < violation(best, best_K)) {
            best = sol;
            best_K = K;
        }
    }

    SolveReport r;
    r.converged = feasible(sol, K);
    const InnerSolution& chosen = r.converged ? sol : best;
    r.K = r.converged ? K : best_K;
    r.alphas = chosen.alphas;
    r.loss = chosen.loss;
    r.alpha_bar_T = chosen.alpha_bar_T;
    r.per_t_expected_active = chosen.expected_active;
    r.per_t_target = chosen.target;
    r.iterations = iterations;
    r.config = cfg;
    r.eps1 = tol(r.K);
    return r;
}

std::vector<double> gamma_library(std::string_view name, int T) {
    if (T < 1) throw ScheduleError("T must be positive");
    std::vector<double> g(static_cast<std::size_t>(T));
    const double TT = static_cast<double>(T);
    for (int t = 1; t <= T; ++t) {
        const double u = static_cast<double>(t) / TT;
        double v;
        if (name == "constant") {
            v = 1.0;
        } else if (name == "poly1") {
            const double w = 0.5 * u - 0.5;
            v = w * w + 0.4;
        } else if (name == "poly2") {
            const double w = 0.5 * u - 0.5;
            v = w * w + 0.5;
        } else if (name == "poly3") {
            const double w = u - 0.3;
            v = -0.5 * w * w + 0.7;
        } else {
            throw ScheduleError("unknown gamma schedule '" + std::string(name) +
                                "' (expected constant, poly1, poly2, poly3)");
        }
        g[static_cast<std::size_t>(t) - 1] = v;
    }
    return g;
}

NoiseSchedule baseline_linear_schedule(int T, double beta_start, double beta_end) {
    if (T < 1) throw ScheduleError("T must be positive");
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0))
        throw ScheduleError("need 0 < beta_start <= beta_end < 1");
    std::vector<double> betas(static_cast<std::size_t>(T));
    for (int t = 1; t <= T; ++t) {
        const double frac = T == 1 ? 0.0 : static_cast<double>(t - 1) / static_cast<double>(T - 1);
        betas[static_cast<std::size_t>(t) - 1] = beta_start + (beta_end - beta_start) * frac;
    }
    return NoiseSchedule::from_betas(std::move(betas));
}

void write_schedule_csv(std::ostream& out, const SolveReport& report,
                        std::span<const double> gamma) {
    const auto sched = report.schedule();
    out << "t,beta,alpha,alpha_bar,gamma,target_active,expected_active\n";
    for (int t = 1; t <= sched.horizon(); ++t) {
        const auto i = static_cast<std::size_t>(t) - 1;
        out << t << ',' << format_g(sched.beta(t), 17) << ',' << format_g(sched.alpha(t), 17) << ','
            << format_g(sched.alpha_bar(t), 17) << ',' << format_g(gamma[i], 17) << ','
            << format_g(report.per_t_target[i], 17) << ','
            << format_g(report.per_t_expected_active[i], 17) << '\n';
    }
    out << "# K = " << format_g(report.K, 17) << '\n'
        << "# eps1 = " << format_g(report.eps1, 17) << '\n'
        << "# eps2 = " << format_g(report.config.eps2, 17) << '\n'
        << "# loss = " << format_g(report.loss, 17) << '\n'
        << "# alpha_bar_T = " << format_g(report.alpha_bar_T, 17) << '\n'
        << "# iterations = " << report.iterations << '\n'
        << "# converged = " << (report.converged ? "true" : "false") << '\n'
        << "# direction = " << to_string(report.config.direction) << '\n';
}

ScheduleFile read_schedule_csv(std::istream& in) {
    static constexpr std::string_view kHeader =
        "t,beta,alpha,alpha_bar,gamma,target_active,expected_active";
    std::string line;
    if (!std::getline(in, line)) throw ScheduleError("schedule file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw ScheduleError("unexpected schedule header: '" + line + "'");

    ScheduleFile f;
    std::vector<double> betas;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            key.erase(key.find_last_not_of(' ') + 1);
            auto value = line.substr(eq + 1);
            value.erase(0, value.find_first_not_of(' '));
            try {
                if (key == "K") f.K = parse_double(value);
                else if (key == "eps1") f.eps1 = parse_double(value);
                else if (key == "eps2") f.eps2 = parse_double(value);
                else if (key == "loss") f.loss = parse_double(value);
            } catch (const std::invalid_argument& e) {
                throw ScheduleError("line " + std::to_string(line_no) + ": " + e.what());
            }
            continue;
        }
        auto cols = split_csv(line);
        if (cols.size() != 7)
            throw ScheduleError("line " + std::to_string(line_no) + ": expected 7 columns");
        try {
            const auto t = static_cast<std::size_t>(parse_double(cols[0]));
            if (t != betas.size() + 1)
                throw ScheduleError("line " + std::to_string(line_no) + ": timesteps out of order");
            betas.push_back(parse_double(cols[1]));
            f.gamma.push_back(parse_double(cols[4]));
            f.target_active.push_back(parse_double(cols[5]));
            f.expected_active.push_back(parse_double(cols[6]));
        } catch (const std::invalid_argument& e) {
            throw ScheduleError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (betas.empty()) throw ScheduleError("schedule file has no rows");
    f.schedule = NoiseSchedule::from_betas(std::move(betas));
    return f;
}

}  // namespace edgepp
