#include "dynmedian/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dynmedian/errors.hpp"
#include "dynmedian/exact.hpp"
#include "dynmedian/util.hpp"

namespace dynmedian {

UncertaintySpec uniform_deviation(const Instance& inst, double fraction, double budget) {
    if (!(fraction >= 0.0) || !(fraction <= 1.0) || !std::isfinite(fraction)) {
        throw DomainError("uniform_deviation: fraction must lie in [0, 1]");
    }
    UncertaintySpec spec;
    spec.nominal = inst.demand;
    spec.deviation = inst.demand;
    for (auto& row : spec.deviation) {
        for (double& v : row) v *= fraction;
    }
    spec.budget = budget;
    check_uncertainty(inst, spec);
    return spec;
}

void check_uncertainty(const Instance& inst, const UncertaintySpec& spec) {
    const std::size_t B = static_cast<std::size_t>(inst.num_locations());
    const std::size_t T = static_cast<std::size_t>(inst.horizon);
    if (spec.nominal.size() != B || spec.deviation.size() != B) {
        throw DataError("uncertainty spec shape does not match the instance");
    }
    for (std::size_t i = 0; i < B; ++i) {
        if (spec.nominal[i].size() != T || spec.deviation[i].size() != T) {
            throw DataError("uncertainty spec shape does not match the instance");
        }
        for (std::size_t t = 0; t < T; ++t) {
            if (!std::isfinite(spec.nominal[i][t]) || spec.nominal[i][t] < 0.0) {
                throw DataError("uncertainty spec: nominal demand must be finite and >= 0");
            }
            if (!std::isfinite(spec.deviation[i][t]) || spec.deviation[i][t] < 0.0) {
                throw DataError("uncertainty spec: deviations must be finite and >= 0");
            }
        }
    }
    double limit = static_cast<double>(B) * static_cast<double>(T);
    if (!std::isfinite(spec.budget) || spec.budget < 0.0 || spec.budget > limit) {
        throw DomainError("uncertainty budget must lie in [0, locations * horizon]");
    }
}

namespace {

void check_magnitudes(const std::vector<double>& magnitudes, double budget) {
    for (double v : magnitudes) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("protection: magnitudes must be finite and >= 0");
        }
    }
    if (!std::isfinite(budget) || budget < 0.0 ||
        budget > static_cast<double>(magnitudes.size())) {
        throw DomainError("protection: budget must lie in [0, n]");
    }
}

}  // namespace

double protection(const std::vector<double>& magnitudes, double budget) {
    check_magnitudes(magnitudes, budget);
    std::vector<double> sorted = magnitudes;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const std::size_t whole = static_cast<std::size_t>(std::floor(budget));
    const double frac = budget - static_cast<double>(whole);
    KahanSum acc;
    for (std::size_t k = 0; k < whole; ++k) acc.add(sorted[k]);
    if (frac > 0.0 && whole < sorted.size()) acc.add(frac * sorted[whole]);
    return acc.value();
}

double dual_protection_value(const std::vector<double>& magnitudes, double budget) {
    check_magnitudes(magnitudes, budget);
    // The price beta only needs to be checked at its kinks: zero and each
    // magnitude. Everywhere else the objective is linear in beta.
    std::vector<double> candidates;
    candidates.reserve(magnitudes.size() + 1);
    candidates.push_back(0.0);
    candidates.insert(candidates.end(), magnitudes.begin(), magnitudes.end());
    double best = std::numeric_limits<double>::infinity();
    for (double beta : candidates) {
        KahanSum acc;
        acc.add(beta * budget);
        for (double v : magnitudes) acc.add(std::max(0.0, v - beta));
        best = std::min(best, acc.value());
    }
    return best;
}

RobustifiedRow robustify_row(LinearModel& model, int row,
                             const std::vector<std::pair<int, double>>& deviations,
                             double budget) {
    if (row < 0 || static_cast<std::size_t>(row) >= model.constraints.size()) {
        throw DomainError("robustify_row: row index out of range");
    }
    Constraint& target = model.constraints[static_cast<std::size_t>(row)];
    if (target.sense != Sense::LessEqual) {
        throw DomainError("robustify_row: only <= rows can be protected");
    }
    if (!std::isfinite(budget) || budget < 0.0 ||
        budget > static_cast<double>(deviations.size())) {
        throw DomainError("robustify_row: budget must lie in [0, #uncertain coefficients]");
    }
    for (const auto& [var, dev] : deviations) {
        if (var < 0 || static_cast<std::size_t>(var) >= model.variables.size()) {
            throw DomainError("robustify_row: variable index out of range");
        }
        if (!std::isfinite(dev) || dev < 0.0) {
            throw DomainError("robustify_row: deviations must be finite and >= 0");
        }
        if (model.variables[static_cast<std::size_t>(var)].lower < 0.0) {
            throw DomainError("robustify_row: protected variables must be nonnegative");
        }
    }

    const std::string base = target.name;
    RobustifiedRow handles;
    handles.beta = model.add_variable("RB_" + base, VarKind::Continuous, 0.0, kInfinity);
    handles.mu.reserve(deviations.size());
    for (const auto& [var, dev] : deviations) {
        const std::string& vn = model.variables[static_cast<std::size_t>(var)].name;
        int mu = model.add_variable("RM_" + base + "_" + vn, VarKind::Continuous, 0.0,
                                    kInfinity);
        handles.mu.push_back(mu);
        // beta + mu >= dev * var
        model.add_constraint("RL_" + base + "_" + vn,
                             {{handles.beta, 1.0}, {mu, 1.0}, {var, -dev}},
                             Sense::GreaterEqual, 0.0);
    }
    Constraint& reacquired = model.constraints[static_cast<std::size_t>(row)];
    reacquired.terms.push_back({handles.beta, budget});
    for (int mu : handles.mu) reacquired.terms.push_back({mu, 1.0});
    return handles;
}

double violation_bound(double gamma, int j_size) {
    if (j_size < 1) throw DomainError("violation_bound: row size must be >= 1");
    if (!std::isfinite(gamma) || gamma < 0.0 || gamma > static_cast<double>(j_size)) {
        throw DomainError("violation_bound: budget must lie in [0, row size]");
    }
    // 1 - Phi(z) written as erfc so that gamma = 1 lands on 0.5 exactly.
    double z = (gamma - 1.0) / std::sqrt(static_cast<double>(j_size));
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

RobustCounterpart build_robust(const Instance& inst, const UncertaintySpec& spec) {
    check_uncertainty(inst, spec);
    RobustCounterpart rc;
    rc.model = build_deterministic(inst);
    LinearModel& m = rc.model;

    const int B = inst.num_locations();
    const int T = inst.horizon;
    const DeterministicLayout layout{B, T};
    const int wb = hex_width(B);
    const int wt = hex_width(T);

    // Service cost moves under the epigraph variable; transition costs stay.
    std::vector<LinearTerm> kept;
    for (const LinearTerm& term : m.objective) {
        if (term.var >= B * B * T) kept.push_back(term);
    }
    m.objective = std::move(kept);

    rc.theta = m.add_variable("theta", VarKind::Continuous, 0.0, kInfinity);
    m.add_objective_term(rc.theta, 1.0);
    rc.pi1 = m.add_variable("P1", VarKind::Continuous, 0.0, kInfinity);

    auto make_family = [&](const char* prefix) {
        std::vector<std::vector<int>> family(static_cast<std::size_t>(B));
        for (int i = 0; i < B; ++i) {
            family[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(T));
            for (int t = 0; t < T; ++t) {
                family[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
                    m.add_variable(prefix + hex_id(i, wb) + hex_id(t, wt),
                                   VarKind::Continuous, 0.0, kInfinity);
            }
        }
        return family;
    };
    rc.pi2 = make_family("P2");
    rc.pi3 = make_family("P3");
    rc.pi4 = make_family("P4");
    rc.pi5 = make_family("P5");

    // theta certificate: budget*pi1 + sum(pi2 + pi3) + nominal service <= theta.
    {
        std::vector<LinearTerm> terms;
        if (spec.budget != 0.0) terms.push_back({rc.pi1, spec.budget});
        for (int i = 0; i < B; ++i) {
            for (int t = 0; t < T; ++t) {
                terms.push_back({rc.pi2[i][t], 1.0});
                terms.push_back({rc.pi3[i][t], 1.0});
            }
        }
        for (int i = 0; i < B; ++i) {
            for (int j = 0; j < B; ++j) {
                for (int t = 0; t < T; ++t) {
                    double coeff = spec.nominal[static_cast<std::size_t>(i)]
                                               [static_cast<std::size_t>(t)] *
                                   inst.cost[static_cast<std::size_t>(i)]
                                            [static_cast<std::size_t>(j)];
                    if (coeff != 0.0) terms.push_back({layout.x_index(i, j, t), coeff});
                }
            }
        }
        terms.push_back({rc.theta, -1.0});
        m.add_constraint("TH", std::move(terms), Sense::LessEqual, 0.0);
    }

    for (int i = 0; i < B; ++i) {
        for (int t = 0; t < T; ++t) {
            const std::string suffix = hex_id(i, wb) + hex_id(t, wt);
            // The budget price covers each entry's own price pair.
            m.add_constraint("PC" + suffix,
                             {{rc.pi1, 1.0}, {rc.pi4[i][t], -1.0}, {rc.pi5[i][t], -1.0}},
                             Sense::GreaterEqual, 0.0);
            // Price balance against the deviation-weighted service of (i, t).
            std::vector<LinearTerm> balance = {{rc.pi2[i][t], 1.0},
                                               {rc.pi3[i][t], -1.0},
                                               {rc.pi4[i][t], 1.0},
                                               {rc.pi5[i][t], -1.0}};
            double dev = spec.deviation[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            if (dev != 0.0) {
                for (int j = 0; j < B; ++j) {
                    double coeff = dev * inst.cost[static_cast<std::size_t>(i)]
                                                  [static_cast<std::size_t>(j)];
                    if (coeff != 0.0) balance.push_back({layout.x_index(i, j, t), -coeff});
                }
            }
            m.add_constraint("PB" + suffix, std::move(balance), Sense::Equal, 0.0);
        }
    }
    return rc;
}

FractionalAssignment FractionalAssignment::from_solution(const Instance& inst,
                                                         const Solution& sol) {
    const std::size_t B = static_cast<std::size_t>(inst.num_locations());
    const std::size_t T = static_cast<std::size_t>(inst.horizon);
    if (sol.assigned.size() != B) throw DataError("from_solution: assignment shape mismatch");
    FractionalAssignment plan;
    plan.entries.assign(B, {});
    for (std::size_t i = 0; i < B; ++i) {
        if (sol.assigned[i].size() != T) {
            throw DataError("from_solution: assignment shape mismatch");
        }
        plan.entries[i].assign(T, {});
        for (std::size_t t = 0; t < T; ++t) {
            int j = sol.assigned[i][t];
            if (j < 0 || static_cast<std::size_t>(j) >= B) {
                throw DataError("from_solution: assignment target out of range");
            }
            plan.entries[i][t] = {{j, 1.0}};
        }
    }
    return plan;
}

double worst_case_cost(const Instance& inst, const UncertaintySpec& spec,
                       const FractionalAssignment& plan) {
    check_uncertainty(inst, spec);
    const std::size_t B = static_cast<std::size_t>(inst.num_locations());
    const std::size_t T = static_cast<std::size_t>(inst.horizon);
    if (plan.entries.size() != B) throw DataError("worst_case_cost: plan shape mismatch");

    KahanSum nominal;
    std::vector<double> magnitudes;
    magnitudes.reserve(B * T);
    for (std::size_t i = 0; i < B; ++i) {
        if (plan.entries[i].size() != T) throw DataError("worst_case_cost: plan shape mismatch");
        for (std::size_t t = 0; t < T; ++t) {
            double unit = 0.0;
            for (const auto& [j, f] : plan.entries[i][t]) {
                unit += inst.cost[i][static_cast<std::size_t>(j)] * f;
            }
            nominal.add(spec.nominal[i][t] * unit);
            magnitudes.push_back(spec.deviation[i][t] * unit);
        }
    }
    return nominal.value() + protection(magnitudes, spec.budget);
}

double robust_objective(const Instance& inst, const UncertaintySpec& spec,
                        const Solution& sol) {
    FractionalAssignment plan = FractionalAssignment::from_solution(inst, sol);
    return worst_case_cost(inst, spec, plan) + sol.open_cost_total + sol.close_cost_total;
}

double monte_carlo_violation(const Instance& inst, const UncertaintySpec& spec,
                             const Solution& sol, int samples, std::uint64_t seed,
                             int threads) {
    if (samples < 1) throw DomainError("monte_carlo_violation: samples must be >= 1");
    FractionalAssignment plan = FractionalAssignment::from_solution(inst, sol);
    const double theta = worst_case_cost(inst, spec, plan);

    const std::size_t B = static_cast<std::size_t>(inst.num_locations());
    const std::size_t T = static_cast<std::size_t>(inst.horizon);
    Matrix unit(B, std::vector<double>(T, 0.0));
    for (std::size_t i = 0; i < B; ++i) {
        for (std::size_t t = 0; t < T; ++t) {
            double s = 0.0;
            for (const auto& [j, f] : plan.entries[i][t]) {
                s += inst.cost[i][static_cast<std::size_t>(j)] * f;
            }
            unit[i][t] = s;
        }
    }

    std::vector<std::uint8_t> violated(static_cast<std::size_t>(samples), 0);
    parallel_for(0, static_cast<std::size_t>(samples), threads, [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        KahanSum cost;
        for (std::size_t i = 0; i < B; ++i) {
            for (std::size_t t = 0; t < T; ++t) {
                double d = spec.nominal[i][t] + spec.deviation[i][t] * (2.0 * u(rng) - 1.0);
                cost.add(d * unit[i][t]);
            }
        }
        if (cost.value() > theta) violated[k] = 1;
    });
    std::size_t count = 0;
    for (std::uint8_t v : violated) count += v;
    return static_cast<double>(count) / static_cast<double>(samples);
}

RobustExactResult solve_robust_exact(const Instance& inst, const UncertaintySpec& spec,
                                     std::size_t cap, int threads) {
    check_uncertainty(inst, spec);
    FeasibleSetCatalog catalog = enumerate_feasible(inst, cap, threads);
    if (catalog.sets.empty()) {
        throw DataError("solve_robust_exact: no facility set satisfies the group bounds");
    }

    const std::size_t B = static_cast<std::size_t>(inst.num_locations());
    const std::size_t T = static_cast<std::size_t>(inst.horizon);
    const std::size_t n = catalog.sets.size();

    // Nearest-member unit cost per (set, location).
    Matrix nearest(n, std::vector<double>(B, 0.0));
    parallel_for(0, n, threads, [&](std::size_t s) {
        for (std::size_t i = 0; i < B; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j : catalog.sets[s]) {
                double c = inst.cost[i][static_cast<std::size_t>(j)];
                if (c < best) best = c;
            }
            nearest[s][i] = best;
        }
    });

    // Candidate budget prices: zero plus every deviation * unit-cost product.
    std::vector<double> candidates;
    candidates.push_back(0.0);
    for (std::size_t i = 0; i < B; ++i) {
        for (std::size_t t = 0; t < T; ++t) {
            double dev = spec.deviation[i][t];
            if (dev <= 0.0) continue;
            for (std::size_t j = 0; j < B; ++j) {
                candidates.push_back(dev * inst.cost[i][j]);
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const double work = static_cast<double>(candidates.size()) * static_cast<double>(n) *
                        static_cast<double>(T) * static_cast<double>(B);
    if (work > 5e8) {
        throw CapExceeded("solve_robust_exact: price scan too large (" +
                          std::to_string(candidates.size()) + " candidates x " +
                          std::to_string(n) + " sets); use the relaxation solver");
    }

    double best_total = std::numeric_limits<double>::infinity();
    double best_beta = 0.0;
    std::vector<int> best_chain;
    Matrix day_cost(n, std::vector<double>(T, 0.0));
    for (double beta : candidates) {
        parallel_for(0, n, threads, [&](std::size_t s) {
            for (std::size_t t = 0; t < T; ++t) {
                KahanSum acc;
                for (std::size_t i = 0; i < B; ++i) {
                    double base = spec.nominal[i][t] * nearest[s][i];
                    double extra = std::max(0.0, spec.deviation[i][t] * nearest[s][i] - beta);
                    acc.add(base + extra);
                }
                day_cost[s][t] = acc.value();
            }
        });
        auto [value, chain] = cheapest_chain(inst, catalog.sets, day_cost, threads);
        double total = value + beta * spec.budget;
        if (total < best_total) {
            best_total = total;
            best_beta = beta;
            best_chain = std::move(chain);
        }
    }

    std::vector<std::vector<std::uint8_t>> open(B, std::vector<std::uint8_t>(T, 0));
    for (std::size_t t = 0; t < T; ++t) {
        for (int j : catalog.sets[static_cast<std::size_t>(best_chain[t])]) {
            open[static_cast<std::size_t>(j)][t] = 1;
        }
    }

    RobustExactResult result;
    result.solution = evaluate(inst, open);
    result.value = best_total;
    result.beta = best_beta;
    result.schedule = std::move(best_chain);
    return result;
}

}  // namespace dynmedian
