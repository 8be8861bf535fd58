// edgepp: schedule solving, forward simulation, degree-guided sampling,
// edge-overlap sweeps and graph statistics from the command line.
//
// Exit status: 0 success, 1 usage error, 2 I/O error, 3 solver/sampler failure.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "edgepp/csv.hpp"
#include "edgepp/forward.hpp"
#include "edgepp/graph.hpp"
#include "edgepp/rng.hpp"
#include "edgepp/sampler.hpp"
#include "edgepp/schedule.hpp"
#include "edgepp/stats.hpp"
#include "edgepp/synthetic.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace edgepp;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string graph_path;
    std::string synthetic = "desk";
    std::size_t synthetic_nodes = 200;
    std::uint64_t synthetic_seed = 1;

    int T = 512;
    std::string gamma_name = "constant";
    std::string gamma_path;
    std::string schedule_path;
    double eps1 = 0.0;  // 0: relative tolerance
    double eps1_relative = 0.01;
    double eps2 = 1e-5;
    double k_min = 1e-4;
    double k_max = 10.0;
    int max_outer_iters = 60;
    double alpha_floor = 1e-6;
    std::string search_direction = "loss-shrinks-k";
    double baseline_beta_start = 1e-4;
    double baseline_beta_end = 0.02;

    bool node_correction = true;
    bool edge_correction = true;
    bool keep_existing = false;
    std::string model_name = "degree-affinity";

    std::uint64_t seed = 0;
    int num_samples = 8;
    int t_start = 0;  // 0: unconditional
    int delta = 25;
    int jobs = 0;
    std::string output_dir = "edgepp-out";

    std::string generated_path;
    std::string reference_path;
};

json to_json(const RunConfig& c, const std::string& command) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["graph_path"] = c.graph_path;
    j["synthetic"] = c.graph_path.empty() ? json(c.synthetic) : json(nullptr);
    j["synthetic_nodes"] = c.synthetic_nodes;
    j["synthetic_seed"] = c.synthetic_seed;
    j["T"] = c.T;
    j["gamma_name"] = c.gamma_path.empty() ? json(c.gamma_name) : json(nullptr);
    j["gamma_path"] = c.gamma_path;
    j["schedule_path"] = c.schedule_path;
    j["eps1"] = c.eps1 > 0.0 ? json(c.eps1) : json(nullptr);
    j["eps1_relative"] = c.eps1_relative;
    j["eps2"] = c.eps2;
    j["k_min"] = c.k_min;
    j["k_max"] = c.k_max;
    j["max_outer_iters"] = c.max_outer_iters;
    j["alpha_floor"] = c.alpha_floor;
    j["search_direction"] = c.search_direction;
    j["baseline_beta_start"] = c.baseline_beta_start;
    j["baseline_beta_end"] = c.baseline_beta_end;
    j["node_correction"] = c.node_correction;
    j["edge_correction"] = c.edge_correction;
    j["keep_existing"] = c.keep_existing;
    j["model_name"] = c.model_name;
    j["seed"] = c.seed;
    j["num_samples"] = c.num_samples;
    j["t_start"] = c.t_start;
    j["delta"] = c.delta;
    j["jobs"] = c.jobs;
    j["output_dir"] = c.output_dir;
    j["generated_path"] = c.generated_path;
    j["reference_path"] = c.reference_path;
    return j;
}

// ---- file helpers ----------------------------------------------------------

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_config(const RunConfig& c, const std::string& command, const json& resolved = {}) {
    ensure_dir(c.output_dir);
    json j = to_json(c, command);
    if (!resolved.is_null()) j["resolved"] = resolved;
    write_text(fs::path(c.output_dir) / "config.json", j.dump(2) + "\n");
}

Graph load_graph_file(const std::string& path) {
    try {
        return load_edge_list(path);
    } catch (const GraphError& e) {
        throw IoError(e.what());
    }
}

Graph resolve_graph(const RunConfig& c) {
    if (!c.graph_path.empty()) return load_graph_file(c.graph_path);
    if (c.synthetic == "desk") return desk_scale_graph(c.synthetic_nodes, c.synthetic_seed);
    if (c.synthetic == "polblogs-standin") return polblogs_scale_standin(c.synthetic_seed);
    throw UsageError("unknown --synthetic '" + c.synthetic + "' (expected desk or polblogs-standin)");
}

std::vector<double> resolve_gamma(const RunConfig& c, int& T, bool T_given) {
    if (c.gamma_path.empty()) {
        try {
            return gamma_library(c.gamma_name, T);
        } catch (const ScheduleError& e) {
            throw UsageError(e.what());
        }
    }
    std::istringstream in(read_text(c.gamma_path));
    std::vector<double> g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line.erase(0, line.find_first_not_of(" \t\r"));
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (line.empty()) continue;
        try {
            g.push_back(parse_double(line));
        } catch (const std::invalid_argument&) {
            throw IoError(c.gamma_path + ":" + std::to_string(line_no) + ": not a number: '" + line + "'");
        }
    }
    if (g.empty()) throw IoError("gamma file '" + c.gamma_path + "' has no values");
    if (T_given && static_cast<int>(g.size()) != T)
        throw UsageError("gamma file has " + std::to_string(g.size()) + " values but --T is " +
                         std::to_string(T));
    T = static_cast<int>(g.size());
    return g;
}

SolverConfig solver_config(const RunConfig& c) {
    SolverConfig s;
    s.eps1 = c.eps1;
    s.eps1_relative = c.eps1_relative;
    s.eps2 = c.eps2;
    s.k_min = c.k_min;
    s.k_max = c.k_max;
    s.max_outer_iters = c.max_outer_iters;
    s.alpha_floor = c.alpha_floor;
    try {
        s.direction = search_direction_from_string(c.search_direction);
        s.resolved();
    } catch (const ScheduleError& e) {
        throw UsageError(e.what());
    }
    return s;
}

std::string schedule_csv(const SolveReport& r, std::span<const double> gamma) {
    std::ostringstream out;
    write_schedule_csv(out, r, gamma);
    out << "# format = schedule v1\n";
    return out.str();
}

/// Solves, writes schedule.csv into the output directory and reports.
/// Throws SolveFailure (after writing) when the solver does not converge.
NoiseSchedule solve_and_write(const RunConfig& c, const DegreeSequence& d0, int T, bool T_given,
                              json& resolved, bool quiet) {
    int horizon = T;
    const auto gamma = resolve_gamma(c, horizon, T_given);
    const auto report = solve_schedule(gamma, d0, solver_config(c));
    ensure_dir(c.output_dir);
    write_text(fs::path(c.output_dir) / "schedule.csv", schedule_csv(report, gamma));
    resolved["T"] = horizon;
    resolved["K"] = report.K;
    resolved["eps1_effective"] = report.eps1;
    resolved["loss"] = report.loss;
    resolved["alpha_bar_T"] = report.alpha_bar_T;
    resolved["solver_iterations"] = report.iterations;
    resolved["solver_converged"] = report.converged;
    if (!quiet)
        std::printf("K = %s\nloss = %s\nalpha_bar_T = %s\niterations = %d\nconverged = %s\n",
                    format_g(report.K, 10).c_str(), format_g(report.loss, 6).c_str(),
                    format_g(report.alpha_bar_T, 6).c_str(), report.iterations,
                    report.converged ? "true" : "false");
    if (!report.converged)
        throw SolveFailure("schedule solver did not meet eps1/eps2 within " +
                           std::to_string(c.max_outer_iters) + " iterations (loss " +
                           format_g(report.loss, 6) + ", alpha_bar_T " +
                           format_g(report.alpha_bar_T, 6) + ")");
    return report.schedule();
}

NoiseSchedule load_schedule(const std::string& path) {
    std::istringstream in(read_text(path));
    try {
        return read_schedule_csv(in).schedule;
    } catch (const ScheduleError& e) {
        throw IoError(path + ": " + e.what());
    }
}

std::unique_ptr<EdgeModel> make_model(const RunConfig& c, const Graph& reference) {
    if (c.model_name == "oracle") return edge_model_oracle(reference);
    if (c.model_name == "degree-affinity") return edge_model_degree_affinity();
    throw UsageError("unknown --model-name '" + c.model_name + "' (expected oracle or degree-affinity)");
}

void apply_jobs(const RunConfig& c) {
    if (c.jobs > 0) omp_set_num_threads(c.jobs);
}

struct MeanSd {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double sd = std::numeric_limits<double>::quiet_NaN();
};

/// Mean and sample standard deviation over the defined (non-NaN) values.
MeanSd mean_sd(const std::vector<double>& v) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double x : v)
        if (!std::isnan(x)) {
            sum += x;
            ++n;
        }
    MeanSd r;
    if (n == 0) return r;
    r.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : v)
        if (!std::isnan(x)) ss += (x - r.mean) * (x - r.mean);
    r.sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    return r;
}

// ---- commands --------------------------------------------------------------

int cmd_solve_schedule(const RunConfig& c, bool T_given) {
    const auto g = resolve_graph(c);
    json resolved;
    resolved["num_nodes"] = g.num_nodes();
    resolved["num_edges"] = g.num_edges();
    try {
        solve_and_write(c, degree_sequence(g), c.T, T_given, resolved, false);
    } catch (const SolveFailure&) {
        write_config(c, "solve-schedule", resolved);
        throw;
    }
    write_config(c, "solve-schedule", resolved);
    return 0;
}

int cmd_simulate_forward(const RunConfig& c, bool baseline_given) {
    if (!c.schedule_path.empty() && baseline_given)
        throw UsageError("--schedule-path and the baseline flags are mutually exclusive");
    apply_jobs(c);
    const auto g = resolve_graph(c);
    const auto d0 = degree_sequence(g);
    NoiseSchedule sched;
    json resolved;
    if (!c.schedule_path.empty()) {
        sched = load_schedule(c.schedule_path);
        resolved["schedule_source"] = "file";
    } else {
        try {
            sched = baseline_linear_schedule(c.T, c.baseline_beta_start, c.baseline_beta_end);
        } catch (const ScheduleError& e) {
            throw UsageError(e.what());
        }
        resolved["schedule_source"] = "baseline-linear";
    }
    if (c.num_samples < 1) throw UsageError("--num-samples must be positive");
    const auto runs = static_cast<std::size_t>(c.num_samples);
    const auto m = simulate_forward_moments(g, sched, runs, c.seed);
    const auto h = expected_active_curve(d0, sched);
    const double E0 = static_cast<double>(g.num_edges());

    std::ostringstream out;
    out << "t,beta,alpha_bar,mean_edges,sd_edges,analytic_edges,mean_active_nodes,sd_active_nodes,"
           "analytic_active_nodes\n";
    for (int t = 1; t <= sched.horizon(); ++t) {
        const auto i = static_cast<std::size_t>(t) - 1;
        out << t << ',' << format_g(sched.beta(t), 17) << ',' << format_g(sched.alpha_bar(t), 17) << ','
            << format_g(m.mean_edges[i], 10) << ',' << format_g(std::sqrt(m.var_edges[i]), 10) << ','
            << format_g(sched.alpha_bar(t) * E0, 10) << ',' << format_g(m.mean_active[i], 10) << ','
            << format_g(std::sqrt(m.var_active[i]), 10) << ',' << format_g(h[i], 10) << '\n';
    }
    out << "# format = forward-simulation v1\n# runs = " << runs << '\n';
    ensure_dir(c.output_dir);
    write_text(fs::path(c.output_dir) / "forward.csv", out.str());
    resolved["T"] = sched.horizon();
    resolved["num_nodes"] = g.num_nodes();
    resolved["num_edges"] = g.num_edges();
    write_config(c, "simulate-forward", resolved);
    std::printf("wrote %s (%d timesteps, %zu trajectories)\n",
                (fs::path(c.output_dir) / "forward.csv").string().c_str(), sched.horizon(), runs);
    return 0;
}

/// Schedule for sample / eo-sweep: from file, or solved for the graph.
NoiseSchedule sampling_schedule(const RunConfig& c, const DegreeSequence& d0, bool T_given,
                                json& resolved) {
    if (!c.schedule_path.empty()) {
        resolved["schedule_source"] = "file";
        auto s = load_schedule(c.schedule_path);
        if (s.horizon() < 1) throw IoError("empty schedule");
        return s;
    }
    resolved["schedule_source"] = "solved";
    return solve_and_write(c, d0, c.T, T_given, resolved, true);
}

SamplerMode sampler_mode(const RunConfig& c) {
    return SamplerMode{c.node_correction, c.edge_correction, c.keep_existing};
}

std::string stats_header(const char* first) {
    std::string s = first;
    for (const auto& col : stats_csv_columns()) s += "," + col;
    return s + "\n";
}

int cmd_sample(const RunConfig& c, bool T_given) {
    apply_jobs(c);
    if (c.num_samples < 1) throw UsageError("--num-samples must be positive");
    const auto ref = resolve_graph(c);
    const auto d0 = degree_sequence(ref);
    json resolved;
    resolved["num_nodes"] = ref.num_nodes();
    resolved["num_edges"] = ref.num_edges();
    const auto sched = sampling_schedule(c, d0, T_given, resolved);
    resolved["T"] = sched.horizon();
    if (c.t_start < 0 || c.t_start > sched.horizon())
        throw UsageError("--t-start must lie in [1, " + std::to_string(sched.horizon()) + "] (0 = unconditional)");
    const auto model = make_model(c, ref);
    const auto mode = sampler_mode(c);

    const int n = c.num_samples;
    std::vector<GenerationRun> runs(static_cast<std::size_t>(n));
    std::vector<StatsReport> reports(static_cast<std::size_t>(n));
    std::vector<std::string> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            const auto seed = derive_seed(c.seed, i);
            runs[i] = c.t_start == 0
                          ? sample_degree_guided(d0, *model, sched, mode, seed)
                          : sample_with_eo_control(ref, c.t_start, *model, sched, mode, seed);
            reports[i] = compute_stats(runs[i].final_graph, &ref);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw SamplerError(e);

    ensure_dir(c.output_dir);
    const fs::path dir(c.output_dir);
    std::ostringstream table;
    table << stats_header("sample");
    const auto cols = stats_csv_columns();
    std::vector<std::vector<double>> by_col(cols.size());
    for (int k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        write_text(dir / ("sample_" + std::to_string(k) + ".edges"), format_edge_list(runs[i].final_graph));
        std::ostringstream run_csv;
        write_generation_csv(run_csv, runs[i]);
        write_text(dir / ("run_" + std::to_string(k) + ".csv"), run_csv.str());
        table << k;
        const auto v = stats_values(reports[i]);
        for (std::size_t j = 0; j < v.size(); ++j) {
            table << ',' << format_g(v[j], 10);
            by_col[j].push_back(v[j]);
        }
        table << '\n';
    }
    std::ostringstream summary;
    std::vector<MeanSd> agg;
    for (const auto& col : by_col) agg.push_back(mean_sd(col));
    table << "mean";
    for (const auto& a : agg) table << ',' << format_g(a.mean, 10);
    table << "\nsd";
    for (const auto& a : agg) table << ',' << format_g(a.sd, 10);
    table << "\n# format = sample-stats v1\n";
    write_text(dir / "stats.csv", table.str());

    for (std::size_t j = 0; j < cols.size(); ++j)
        summary << cols[j] << " = " << format_g(agg[j].mean, 6) << " +- " << format_g(agg[j].sd, 6) << '\n';
    write_text(dir / "summary.txt", summary.str());
    write_config(c, "sample", resolved);
    std::cout << summary.str();
    return 0;
}

int cmd_eo_sweep(const RunConfig& c, bool T_given) {
    apply_jobs(c);
    if (c.num_samples < 1) throw UsageError("--num-samples must be positive");
    if (c.delta < 1) throw UsageError("--delta must be positive");
    const auto ref = resolve_graph(c);
    const auto d0 = degree_sequence(ref);
    json resolved;
    resolved["num_nodes"] = ref.num_nodes();
    resolved["num_edges"] = ref.num_edges();
    const auto sched = sampling_schedule(c, d0, T_given, resolved);
    const int T = sched.horizon();
    resolved["T"] = T;
    const auto model = make_model(c, ref);
    const auto mode = sampler_mode(c);

    std::vector<int> starts;
    for (int t = c.delta; t <= T; t += c.delta) starts.push_back(t);
    if (starts.empty() || starts.back() != T) starts.push_back(T);
    resolved["t_starts"] = starts;

    const int per = c.num_samples;
    const int tasks = static_cast<int>(starts.size()) * per;
    std::vector<std::vector<double>> values(static_cast<std::size_t>(tasks));
    std::vector<std::string> errors(static_cast<std::size_t>(tasks));
#pragma omp parallel for schedule(dynamic, 1)
    for (int task = 0; task < tasks; ++task) {
        const auto i = static_cast<std::size_t>(task);
        const int ts = starts[static_cast<std::size_t>(task / per)];
        const auto seed = derive_seed(derive_seed(c.seed, static_cast<std::uint64_t>(ts)),
                                      static_cast<std::uint64_t>(task % per));
        try {
            const auto run = sample_with_eo_control(ref, ts, *model, sched, mode, seed);
            values[i] = stats_values(compute_stats(run.final_graph, &ref));
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw SamplerError(e);

    auto cols = stats_csv_columns();
    const std::size_t eo_col = cols.size() - 1;  // edge_overlap is last
    std::ostringstream out;
    out << "t_start,samples,mean_eo,sd_eo";
    for (std::size_t j = 0; j < eo_col; ++j) out << ',' << cols[j] << "_mean," << cols[j] << "_sd";
    out << '\n';
    for (std::size_t s = 0; s < starts.size(); ++s) {
        std::vector<std::vector<double>> by_col(cols.size());
        for (int k = 0; k < per; ++k) {
            const auto& v = values[s * static_cast<std::size_t>(per) + static_cast<std::size_t>(k)];
            for (std::size_t j = 0; j < v.size(); ++j) by_col[j].push_back(v[j]);
        }
        const auto eo = mean_sd(by_col[eo_col]);
        out << starts[s] << ',' << per << ',' << format_g(eo.mean, 10) << ',' << format_g(eo.sd, 10);
        for (std::size_t j = 0; j < eo_col; ++j) {
            const auto a = mean_sd(by_col[j]);
            out << ',' << format_g(a.mean, 10) << ',' << format_g(a.sd, 10);
        }
        out << '\n';
        std::printf("t_start = %d  mean EO = %s\n", starts[s], format_g(eo.mean, 6).c_str());
    }
    out << "# format = eo-sweep v1\n";
    ensure_dir(c.output_dir);
    write_text(fs::path(c.output_dir) / "eo_sweep.csv", out.str());
    write_config(c, "eo-sweep", resolved);
    return 0;
}

int cmd_eval(const RunConfig& c) {
    const auto gen = load_graph_file(c.generated_path);
    const auto ref = load_graph_file(c.reference_path);
    if (gen.num_nodes() != ref.num_nodes())
        throw UsageError("node count mismatch: generated has " + std::to_string(gen.num_nodes()) +
                         ", reference has " + std::to_string(ref.num_nodes()));
    std::ostringstream text;
    write_stats_text(text, compute_stats(gen, &ref));
    ensure_dir(c.output_dir);
    write_text(fs::path(c.output_dir) / "stats.txt", text.str());
    write_config(c, "eval");
    std::cout << text.str();
    return 0;
}

// ---- option wiring ---------------------------------------------------------

void add_graph_options(CLI::App* app, RunConfig& c) {
    app->add_option("--graph-path,--graph", c.graph_path,
                    "Edge-list file (whitespace pairs, # comments, optional 'N <n>' header)");
    app->add_option("--synthetic", c.synthetic,
                    "Synthetic graph when no file is given: desk or polblogs-standin")
        ->capture_default_str();
    app->add_option("--synthetic-nodes", c.synthetic_nodes, "Node count of the desk graph")
        ->capture_default_str()
        ->check(CLI::Range(8, 1000000));
    app->add_option("--synthetic-seed", c.synthetic_seed, "Seed of the synthetic graph")->capture_default_str();
}

void add_solver_options(CLI::App* app, RunConfig& c) {
    app->add_option("--T", c.T, "Diffusion horizon")->capture_default_str()->check(CLI::Range(1, 1000000));
    app->add_option("--gamma-name,--gamma", c.gamma_name, "Active-node schedule: constant, poly1, poly2, poly3")
        ->capture_default_str();
    app->add_option("--gamma-path,--gamma-file", c.gamma_path, "File with one gamma value per line");
    app->add_option("--eps1", c.eps1,
                    "Absolute loss tolerance (squared nodes); default: relative, see --eps1-relative");
    app->add_option("--eps1-relative", c.eps1_relative,
                    "Loss tolerance as a fraction of the mean target, used when --eps1 is unset")
        ->capture_default_str();
    app->add_option("--eps2", c.eps2, "Tolerance on the product of alphas")->capture_default_str();
    app->add_option("--k-min", c.k_min, "Lower K bracket")->capture_default_str();
    app->add_option("--k-max", c.k_max, "Upper K bracket")->capture_default_str();
    app->add_option("--max-outer-iters", c.max_outer_iters, "K bisection cap")->capture_default_str();
    app->add_option("--alpha-floor", c.alpha_floor, "Smallest admissible alpha")->capture_default_str();
    app->add_option("--search-direction", c.search_direction,
                    "K bisection rule: loss-shrinks-k or loss-grows-k")
        ->capture_default_str();
}

void add_sampler_options(CLI::App* app, RunConfig& c) {
    app->add_option("--schedule-path,--schedule", c.schedule_path,
                    "Schedule CSV from solve-schedule (otherwise solved here)");
    app->add_flag("--node-correction,!--no-node-correction", c.node_correction,
                  "Rescale active-node probabilities to the expected count")
        ->capture_default_str();
    app->add_flag("--edge-correction,!--no-edge-correction", c.edge_correction,
                  "Rescale edge probabilities to the edge budget")
        ->capture_default_str();
    app->add_flag("--keep-existing", c.keep_existing,
                  "Keep edges already inside the active subgraph instead of regenerating them");
    app->add_option("--model-name,--model", c.model_name, "Edge model: oracle or degree-affinity")
        ->capture_default_str();
    app->add_option("--num-samples", c.num_samples, "Samples per configuration")->capture_default_str();
}

void add_common_options(CLI::App* app, RunConfig& c) {
    app->add_option("--seed", c.seed, "Base random seed")->capture_default_str();
    app->add_option("--jobs", c.jobs, "Worker threads (0: OpenMP default)")->capture_default_str();
    app->add_option("--output-dir,--out", c.output_dir, "Output directory")
        ->envname("EDGEPP_OUTPUT_DIR")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degree-constrained edge-removal diffusion: schedules, sampling and graph statistics"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    RunConfig c;

    auto* solve = app.add_subcommand("solve-schedule", "Solve the edge noise schedule for an active-node schedule");
    add_graph_options(solve, c);
    add_solver_options(solve, c);
    add_common_options(solve, c);

    auto* sim = app.add_subcommand("simulate-forward", "Monte-Carlo forward process vs. analytic curves");
    add_graph_options(sim, c);
    sim->add_option("--schedule-path,--schedule", c.schedule_path, "Schedule CSV from solve-schedule");
    sim->add_option("--T", c.T, "Horizon of the baseline schedule")->capture_default_str();
    auto* bs = sim->add_option("--baseline-beta-start", c.baseline_beta_start, "Baseline beta at t = 1")
                   ->capture_default_str();
    auto* be = sim->add_option("--baseline-beta-end", c.baseline_beta_end, "Baseline beta at t = T")
                   ->capture_default_str();
    sim->add_option("--num-samples", c.num_samples, "Trajectories")->capture_default_str();
    add_common_options(sim, c);

    auto* sample = app.add_subcommand("sample", "Generate graphs by degree-guided reverse sampling");
    add_graph_options(sample, c);
    add_solver_options(sample, c);
    add_sampler_options(sample, c);
    sample->add_option("--t-start", c.t_start,
                       "Corrupt the input graph to this step first (edge-overlap control); 0 = from scratch")
        ->capture_default_str();
    add_common_options(sample, c);

    auto* sweep = app.add_subcommand("eo-sweep", "Edge-overlap sweep over corruption levels");
    add_graph_options(sweep, c);
    add_solver_options(sweep, c);
    add_sampler_options(sweep, c);
    sweep->add_option("--delta", c.delta, "Spacing of the t_start grid")->capture_default_str();
    add_common_options(sweep, c);

    auto* eval = app.add_subcommand("eval", "Statistics of a generated graph against a reference");
    eval->add_option("--generated", c.generated_path, "Generated edge list")->required();
    eval->add_option("--reference", c.reference_path, "Reference edge list")->required();
    eval->add_option("--output-dir,--out", c.output_dir, "Output directory")
        ->envname("EDGEPP_OUTPUT_DIR")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*solve) return cmd_solve_schedule(c, solve->count("--T") > 0);
        if (*sim) return cmd_simulate_forward(c, bs->count() > 0 || be->count() > 0);
        if (*sample) return cmd_sample(c, sample->count("--T") > 0);
        if (*sweep) return cmd_eo_sweep(c, sweep->count("--T") > 0);
        if (*eval) return cmd_eval(c);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 2;
    } catch (const GraphError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 2;
    } catch (const SolveFailure& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "failure: %s\n", e.what());
        return 3;
    }
    return 1;
}
