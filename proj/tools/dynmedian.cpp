// Command-line front end: instance generation, exact / relaxation / robust
// solves, sensitivity sweeps, and Monte-Carlo evaluation of a schedule under
// demand uncertainty. All outputs are deterministic for fixed flags and seed;
// wall-clock timing is confined to the meta.json sidecar and the sweep CSV's
// seconds column.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dynmedian/errors.hpp"
#include "dynmedian/exact.hpp"
#include "dynmedian/instance.hpp"
#include "dynmedian/lagrangian.hpp"
#include "dynmedian/robust.hpp"
#include "dynmedian/solution_io.hpp"
#include "dynmedian/util.hpp"

namespace {

using namespace dynmedian;
namespace fs = std::filesystem;

struct GlobalArgs {
    std::uint64_t seed = 12345;
    int threads = 1;
    std::string out_dir = ".";
};

struct GenerateArgs {
    bool campus = false;
    int locations = 8;
    int groups = 2;
    int horizon = 0;  // 0 = pick the mode's default (3 random, 28 campus)
    int fleet = 0;    // 0 = pick the mode's default (3 random, 18 campus)
    int demand_period = 7;
    double open_cost = 10.0;
    double close_cost = 10.0;
    std::string out_name = "instance.json";
};

struct LrArgs {
    int max_iter = 1000;
    double gap_tol = 0.1;
    double alpha_min = 1e-12;
    int stall_patience = 5;
    bool dualize_groups = false;
    bool paper_faithful_step = false;
    bool free_eq_multipliers = false;
};

struct SolveArgs {
    std::string instance_path;
    std::string out_name = "solution.json";
    bool use_lr = false;
    bool robust = false;
    double gamma = 0.0;
    double deviation = 0.1;
    std::size_t cap = 200000;
    LrArgs lr;
};

struct SweepArgs {
    std::string instance_path;
    std::string param;
    std::vector<double> values;
    std::string solver = "exact";
    double deviation = 0.1;
    std::size_t cap = 200000;
    LrArgs lr;
};

struct EvaluateArgs {
    std::string instance_path;
    std::string solution_path;
    double gamma = 0.0;
    double deviation = 0.1;
    int samples = 10000;
};

double now_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_meta(const GlobalArgs& g, const std::string& command, double seconds) {
    nlohmann::ordered_json meta;
    meta["command"] = command;
    meta["seed"] = g.seed;
    meta["threads"] = g.threads;
    meta["seconds"] = seconds;
    write_text_file((fs::path(g.out_dir) / "meta.json").string(), meta.dump(2) + "\n");
}

LrConfig make_lr_config(const GlobalArgs& g, const LrArgs& lr, std::size_t cap) {
    LrConfig config;
    config.max_iter = lr.max_iter;
    config.gap_tol = lr.gap_tol;
    config.alpha_min = lr.alpha_min;
    config.stall_patience = lr.stall_patience;
    config.dualize_groups = lr.dualize_groups;
    config.literal_step_rule = lr.paper_faithful_step;
    config.free_eq_multipliers = lr.free_eq_multipliers;
    config.catalog_cap = cap;
    config.threads = g.threads;
    return config;
}

Instance load_instance(const std::string& path) {
    Instance inst = read_instance(path);
    ValidationReport report = validate(inst);
    if (!report.ok()) throw DataError(path + ": " + report.summary());
    return inst;
}

// Swept-parameter application. Horizon values re-tile the base demand
// cyclically (the base horizon is the period), fleet values replace p,
// cost values replace both transition charges, gamma is the robust budget.
Instance apply_sweep_value(const Instance& base, const std::string& param, double value) {
    Instance inst = base;
    if (param == "horizon") {
        double rounded = std::round(value);
        if (value != rounded || rounded < 1.0) {
            throw DomainError("sweep: horizon values must be positive integers");
        }
        int T = static_cast<int>(rounded);
        inst.horizon = T;
        for (auto& row : inst.demand) {
            std::vector<double> tiled(static_cast<std::size_t>(T));
            for (int t = 0; t < T; ++t) {
                tiled[static_cast<std::size_t>(t)] =
                    row[static_cast<std::size_t>(t % base.horizon)];
            }
            row = std::move(tiled);
        }
    } else if (param == "fleet_size") {
        double rounded = std::round(value);
        if (value != rounded || rounded < 1.0) {
            throw DomainError("sweep: fleet_size values must be positive integers");
        }
        inst.fleet_size = static_cast<int>(rounded);
    } else if (param == "open_close_cost") {
        if (value < 0.0) throw DomainError("sweep: costs must be nonnegative");
        inst.open_cost = value;
        inst.close_cost = value;
    } else if (param != "gamma") {
        throw DomainError("sweep: unknown parameter " + param);
    }
    ValidationReport report = validate(inst);
    if (!report.ok()) throw DataError(report.summary());
    return inst;
}

std::string ids_cell(const std::vector<int>& ids) {
    std::string out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k > 0) out += ' ';
        out += std::to_string(ids[k]);
    }
    return out;
}

// Distinct ids opened / closed over the horizon, from the change log.
std::pair<std::vector<int>, std::vector<int>> transition_ids(const Solution& sol) {
    std::vector<int> opened, closed;
    for (const ChangeDay& d : change_days(sol)) {
        if (d.day == 1) continue;
        opened.insert(opened.end(), d.opened.begin(), d.opened.end());
        closed.insert(closed.end(), d.closed.begin(), d.closed.end());
    }
    auto dedupe = [](std::vector<int>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedupe(opened);
    dedupe(closed);
    return {opened, closed};
}

int cmd_generate(const GlobalArgs& g, const GenerateArgs& a) {
    Instance inst;
    if (a.campus) {
        int fleet = a.fleet > 0 ? a.fleet : 18;
        int horizon = a.horizon > 0 ? a.horizon : 28;
        inst = build_campus_instance(campus_profiles(), synthetic_campus_layout(), fleet,
                                     horizon, a.open_cost, a.close_cost);
    } else {
        int fleet = a.fleet > 0 ? a.fleet : 3;
        int horizon = a.horizon > 0 ? a.horizon : 3;
        inst = generate_random(g.seed, a.locations, a.groups, horizon, fleet,
                               a.demand_period);
    }
    fs::create_directories(g.out_dir);
    write_instance(inst, (fs::path(g.out_dir) / a.out_name).string());
    return 0;
}

int cmd_solve(const GlobalArgs& g, const SolveArgs& a) {
    auto start = std::chrono::steady_clock::now();
    Instance inst = load_instance(a.instance_path);

    Solution sol;
    std::string stdout_report;
    std::string convergence;
    if (a.use_lr) {
        LrConfig config = make_lr_config(g, a.lr, a.cap);
        LrResult res;
        if (a.robust) {
            UncertaintySpec spec = uniform_deviation(inst, a.deviation, a.gamma);
            res = run_lagrangian_robust(inst, spec, config);
        } else {
            res = run_lagrangian(inst, config);
        }
        sol = res.best_solution;
        double gap = (res.best_ub - res.best_lb) / std::max(1.0, std::abs(res.best_ub));
        stdout_report = "lb " + format_double(res.best_lb) + "\nub " +
                        format_double(res.best_ub) + "\ngap " + format_double(gap) +
                        "\niterations " + std::to_string(res.iterations) + "\ntermination " +
                        res.termination + "\n";
        convergence = convergence_csv(res.log);
    } else if (a.robust) {
        UncertaintySpec spec = uniform_deviation(inst, a.deviation, a.gamma);
        RobustExactResult res = solve_robust_exact(inst, spec, a.cap, g.threads);
        sol = res.solution;
        stdout_report = "objective " + format_double(res.value) + "\nnominal " +
                        format_double(sol.objective()) + "\nbeta " +
                        format_double(res.beta) + "\n";
    } else {
        ExactResult res = solve_exact(inst, a.cap, g.threads);
        sol = res.solution;
        stdout_report = "objective " + format_double(res.value) + "\n";
    }

    fs::create_directories(g.out_dir);
    write_solution(sol, (fs::path(g.out_dir) / a.out_name).string());
    write_text_file((fs::path(g.out_dir) / "changes.csv").string(), change_log_csv(sol));
    write_day_sheets(inst, sol, (fs::path(g.out_dir) / "days").string());
    if (!convergence.empty()) {
        write_text_file((fs::path(g.out_dir) / "convergence.csv").string(), convergence);
    }
    std::cout << stdout_report;
    write_meta(g, "solve", now_seconds(start));
    return 0;
}

int cmd_sweep(const GlobalArgs& g, const SweepArgs& a) {
    auto start = std::chrono::steady_clock::now();
    Instance base = load_instance(a.instance_path);
    if (a.values.empty()) throw DomainError("sweep: --values must not be empty");
    if (!std::is_sorted(a.values.begin(), a.values.end())) {
        throw DomainError("sweep: --values must be sorted ascending");
    }
    if (a.solver != "exact" && a.solver != "lr") {
        throw DomainError("sweep: --solver must be exact or lr");
    }
    if (a.param != "horizon" && a.param != "fleet_size" && a.param != "open_close_cost" &&
        a.param != "gamma") {
        throw DomainError("sweep: unknown parameter " + a.param);
    }

    fs::create_directories(g.out_dir);
    std::string csv = "value,objective,opened_ids,closed_ids,seconds,error\n";
    std::vector<std::pair<double, double>> objectives;  // (value, objective)
    for (double value : a.values) {
        auto run_start = std::chrono::steady_clock::now();
        std::string row = format_double(value);
        try {
            Instance inst = apply_sweep_value(base, a.param, value);
            double objective = 0.0;
            Solution sol;
            if (a.param == "gamma") {
                UncertaintySpec spec = uniform_deviation(inst, a.deviation, value);
                if (a.solver == "exact") {
                    RobustExactResult res = solve_robust_exact(inst, spec, a.cap, g.threads);
                    objective = res.value;
                    sol = res.solution;
                } else {
                    LrResult res =
                        run_lagrangian_robust(inst, spec, make_lr_config(g, a.lr, a.cap));
                    objective = res.best_ub;
                    sol = res.best_solution;
                }
            } else if (a.solver == "exact") {
                ExactResult res = solve_exact(inst, a.cap, g.threads);
                objective = res.value;
                sol = res.solution;
            } else {
                LrResult res = run_lagrangian(inst, make_lr_config(g, a.lr, a.cap));
                objective = res.best_ub;
                sol = res.best_solution;
            }
            auto [opened, closed] = transition_ids(sol);
            write_solution(sol, (fs::path(g.out_dir) /
                                 ("solution_" + format_double(value) + ".json"))
                                    .string());
            row += "," + format_double(objective) + "," + ids_cell(opened) + "," +
                   ids_cell(closed) + "," + format_double(now_seconds(run_start)) + ",";
            objectives.push_back({value, objective});
        } catch (const Error& e) {
            std::string msg = e.what();
            for (char& c : msg) {
                if (c == ',' || c == '\n') c = ';';
            }
            row += ",,,," + format_double(now_seconds(run_start)) + "," + msg;
        }
        csv += row + "\n";
    }
    write_text_file((fs::path(g.out_dir) / "sweep.csv").string(), csv);

    if (a.param == "horizon") {
        std::string deltas = "value,objective,delta\n";
        for (std::size_t k = 0; k < objectives.size(); ++k) {
            deltas += format_double(objectives[k].first) + "," +
                      format_double(objectives[k].second) + ",";
            if (k > 0) {
                deltas += format_double(objectives[k].second - objectives[k - 1].second);
            }
            deltas += "\n";
        }
        write_text_file((fs::path(g.out_dir) / "deltas.csv").string(), deltas);
    }
    write_meta(g, "sweep", now_seconds(start));
    return 0;
}

int cmd_evaluate(const GlobalArgs& g, const EvaluateArgs& a) {
    Instance inst = load_instance(a.instance_path);
    Solution sol = read_solution(inst, a.solution_path);
    UncertaintySpec spec = uniform_deviation(inst, a.deviation, a.gamma);

    double nominal = sol.objective();
    double worst = robust_objective(inst, spec, sol);
    double freq = monte_carlo_violation(inst, spec, sol, a.samples, g.seed, g.threads);

    int uncertain = 0;
    for (const auto& row : spec.deviation) {
        for (double v : row) uncertain += v > 0.0;
    }
    double bound = 0.0;
    if (uncertain > 0) {
        bound = violation_bound(std::min(a.gamma, static_cast<double>(uncertain)), uncertain);
    }
    std::cout << "nominal " << format_double(nominal) << "\n"
              << "worst_case " << format_double(worst) << "\n"
              << "violation_frequency " << format_double(freq) << "\n"
              << "bound " << format_double(bound) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-day facility location solver suite"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--seed", g.seed, "Random seed for generation and sampling");
    app.add_option("--threads", g.threads, "Worker threads (results are thread-independent)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out-dir", g.out_dir, "Directory for output files");

    GenerateArgs gen;
    CLI::App* c_gen = app.add_subcommand("generate", "Write a synthetic instance");
    c_gen->fallthrough();
    c_gen->add_flag("--campus", gen.campus, "91-building campus-style instance");
    c_gen->add_option("--locations", gen.locations, "Random instance: location count");
    c_gen->add_option("--groups", gen.groups, "Random instance: group count");
    c_gen->add_option("--horizon", gen.horizon, "Days in the planning horizon");
    c_gen->add_option("--fleet,--p", gen.fleet, "Stores operating each day (p)");
    c_gen->add_option("--demand-period,--period", gen.demand_period,
                      "Demand repeats with this period");
    c_gen->add_option("--open-cost", gen.open_cost, "Charge per overnight opening");
    c_gen->add_option("--close-cost", gen.close_cost, "Charge per overnight closing");
    c_gen->add_option("-o,--output", gen.out_name, "Instance file name");

    SolveArgs sol;
    CLI::App* c_solve = app.add_subcommand("solve", "Solve an instance");
    c_solve->fallthrough();
    c_solve->add_option("instance", sol.instance_path, "Instance JSON file")->required();
    c_solve->add_option("-o,--output", sol.out_name, "Solution file name");
    bool flag_exact = false;
    c_solve->add_flag("--exact", flag_exact, "Catalog dynamic-programming solver (default)");
    c_solve->add_flag("--lr", sol.use_lr, "Lagrangian relaxation solver");
    c_solve->add_flag("--robust", sol.robust, "Protect against demand deviations");
    c_solve->add_option("--gamma", sol.gamma, "Uncertainty budget (entries at full deviation)");
    c_solve->add_option("--deviation", sol.deviation,
                        "Relative demand deviation for --robust (default 0.1)");
    c_solve->add_option("--cap", sol.cap, "Catalog size cap before the solver refuses");
    c_solve->add_option("--max-iter", sol.lr.max_iter, "Relaxation: iteration budget");
    c_solve->add_option("--gap-tol", sol.lr.gap_tol, "Relaxation: absolute UB-LB stop");
    c_solve->add_option("--alpha-min", sol.lr.alpha_min, "Relaxation: smallest step scale");
    c_solve->add_option("--stall-patience", sol.lr.stall_patience,
                        "Relaxation: non-improving iterations per step halving");
    c_solve->add_flag("--dualize-groups", sol.lr.dualize_groups,
                      "Relaxation: price out the group bounds too");
    c_solve->add_flag("--paper-faithful-step", sol.lr.paper_faithful_step,
                      "Relaxation: multiplier-weighted step denominators");
    c_solve->add_flag("--free-eq-multipliers", sol.lr.free_eq_multipliers,
                      "Relaxation: skip projecting equality multipliers to >= 0");

    SweepArgs sw;
    CLI::App* c_sweep = app.add_subcommand("sweep", "Re-solve along one parameter axis");
    c_sweep->fallthrough();
    c_sweep->add_option("instance", sw.instance_path, "Base instance JSON file")->required();
    c_sweep->add_option("--param", sw.param, "horizon | fleet_size | open_close_cost | gamma")
        ->required();
    c_sweep->add_option("--values", sw.values, "Ascending parameter values")
        ->required()
        ->delimiter(',');
    c_sweep->add_option("--solver", sw.solver, "exact | lr");
    c_sweep->add_option("--deviation", sw.deviation, "Relative deviation for gamma sweeps");
    c_sweep->add_option("--cap", sw.cap, "Catalog size cap before the solver refuses");
    c_sweep->add_option("--max-iter", sw.lr.max_iter, "Relaxation: iteration budget");
    c_sweep->add_option("--gap-tol", sw.lr.gap_tol, "Relaxation: absolute UB-LB stop");
    c_sweep->add_option("--alpha-min", sw.lr.alpha_min, "Relaxation: smallest step scale");
    c_sweep->add_option("--stall-patience", sw.lr.stall_patience,
                        "Relaxation: non-improving iterations per step halving");
    c_sweep->add_flag("--dualize-groups", sw.lr.dualize_groups,
                      "Relaxation: price out the group bounds too");
    c_sweep->add_flag("--paper-faithful-step", sw.lr.paper_faithful_step,
                      "Relaxation: multiplier-weighted step denominators");
    c_sweep->add_flag("--free-eq-multipliers", sw.lr.free_eq_multipliers,
                      "Relaxation: skip projecting equality multipliers to >= 0");

    EvaluateArgs ev;
    CLI::App* c_eval = app.add_subcommand("evaluate", "Score a schedule under uncertainty");
    c_eval->fallthrough();
    c_eval->add_option("instance", ev.instance_path, "Instance JSON file")->required();
    c_eval->add_option("solution", ev.solution_path, "Solution JSON file")->required();
    c_eval->add_option("--gamma", ev.gamma, "Uncertainty budget")->required();
    c_eval->add_option("--deviation", ev.deviation, "Relative demand deviation");
    c_eval->add_option("--samples", ev.samples, "Monte-Carlo sample count")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_solve->parsed() && flag_exact && sol.use_lr) {
            throw DomainError("solve: --exact and --lr are mutually exclusive");
        }
        if (c_solve->parsed() && sol.robust && sol.gamma < 0.0) {
            throw DomainError("solve: --robust needs a nonnegative --gamma");
        }
        if (c_gen->parsed()) return cmd_generate(g, gen);
        if (c_solve->parsed()) return cmd_solve(g, sol);
        if (c_sweep->parsed()) return cmd_sweep(g, sw);
        if (c_eval->parsed()) return cmd_evaluate(g, ev);
        throw DomainError("no subcommand selected");
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
