#include "dynmedian/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "dynmedian/errors.hpp"
#include "dynmedian/exact.hpp"
#include "dynmedian/util.hpp"

namespace dynmedian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// True when every location belongs to exactly one group.
bool groups_partition(const Instance& inst) {
    std::vector<int> cover(static_cast<std::size_t>(inst.num_locations()), 0);
    for (const Group& g : inst.groups) {
        for (int j : g.members) ++cover[static_cast<std::size_t>(j)];
    }
    return std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; });
}

std::size_t binom_clamped(int n, int k, std::size_t clamp) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned long long r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
        if (r > clamp) return clamp + 1;
    }
    return static_cast<std::size_t>(r);
}

// Day catalog for the priced-out problem: with the fleet-size row relaxed,
// a day may run any group-feasible set. Its size still has hard bounds:
// at least the largest group minimum (their sum under a partition), at most
// min(locations, sum of group maxima).
std::vector<std::vector<int>> relaxed_catalog(const Instance& inst, std::size_t cap) {
    const int B = inst.num_locations();
    long long sum_min = 0;
    long long sum_max = 0;
    int max_min = 0;
    for (const Group& g : inst.groups) {
        sum_min += g.min_open;
        sum_max += g.max_open;
        max_min = std::max(max_min, g.min_open);
    }
    const bool partition = groups_partition(inst);
    const int lo = partition ? static_cast<int>(std::min<long long>(sum_min, B)) : max_min;
    const int hi = static_cast<int>(std::min<long long>(B, sum_max));
    if (lo > hi) throw DataError("relaxed catalog: group bounds admit no set size");

    std::size_t work = 0;
    for (int size = lo; size <= hi; ++size) {
        work += binom_clamped(B, size, cap);
        if (work > cap) {
            throw CapExceeded("relaxed day catalog exceeds the cap of " + std::to_string(cap) +
                              "; shrink the instance or dualize the group bounds");
        }
    }

    std::vector<std::vector<int>> sets;
    std::vector<std::uint8_t> in_set(static_cast<std::size_t>(B), 0);
    for (int size = lo; size <= hi; ++size) {
        std::vector<int> comb(static_cast<std::size_t>(size));
        std::iota(comb.begin(), comb.end(), 0);
        while (true) {
            std::fill(in_set.begin(), in_set.end(), 0);
            for (int j : comb) in_set[static_cast<std::size_t>(j)] = 1;
            bool ok = true;
            for (const Group& g : inst.groups) {
                int count = 0;
                for (int j : g.members) count += in_set[static_cast<std::size_t>(j)];
                if (count < g.min_open || count > g.max_open) {
                    ok = false;
                    break;
                }
            }
            if (ok) sets.push_back(comb);

            int i = size - 1;
            while (i >= 0 && comb[static_cast<std::size_t>(i)] == B - size + i) --i;
            if (i < 0) break;
            ++comb[static_cast<std::size_t>(i)];
            for (std::size_t k = static_cast<std::size_t>(i) + 1; k < comb.size(); ++k) {
                comb[k] = comb[k - 1] + 1;
            }
        }
    }
    if (sets.empty()) throw DataError("relaxed catalog: no set satisfies the group bounds");
    return sets;
}

void check_multipliers(const Instance& inst, const Multipliers& mult, bool dualized) {
    const std::size_t B = static_cast<std::size_t>(inst.num_locations());
    const std::size_t T = static_cast<std::size_t>(inst.horizon);
    const std::size_t K = inst.groups.size();
    if (mult.assignment.size() != B) throw DomainError("multipliers: assignment shape mismatch");
    for (const auto& row : mult.assignment) {
        if (row.size() != T) throw DomainError("multipliers: assignment shape mismatch");
    }
    if (mult.cardinality.size() != T) {
        throw DomainError("multipliers: cardinality shape mismatch");
    }
    if (dualized) {
        if (mult.group_max.size() != K || mult.group_min.size() != K) {
            throw DomainError("multipliers: group shape mismatch");
        }
        for (std::size_t k = 0; k < K; ++k) {
            if (mult.group_max[k].size() != T || mult.group_min[k].size() != T) {
                throw DomainError("multipliers: group shape mismatch");
            }
            for (std::size_t t = 0; t < T; ++t) {
                if (mult.group_max[k][t] < 0.0 || mult.group_min[k][t] < 0.0) {
                    throw DomainError("multipliers: group prices must be nonnegative");
                }
            }
        }
    }
}

// Per-facility open rewards at the current prices: w[j][t] is the objective
// change of running j on day t, service credits included.
Matrix node_costs(const Instance& inst, const Multipliers& mult, bool dualized) {
    const int B = inst.num_locations();
    const int T = inst.horizon;
    Matrix w(static_cast<std::size_t>(B), std::vector<double>(static_cast<std::size_t>(T), 0.0));
    for (int j = 0; j < B; ++j) {
        for (int t = 0; t < T; ++t) {
            double acc = -mult.cardinality[static_cast<std::size_t>(t)];
            for (int i = 0; i < B; ++i) {
                double r = inst.demand[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] *
                               inst.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                           mult.assignment[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
                if (r < 0.0) acc += r;
            }
            w[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] = acc;
        }
    }
    if (dualized) {
        for (std::size_t k = 0; k < inst.groups.size(); ++k) {
            for (int j : inst.groups[k].members) {
                for (int t = 0; t < T; ++t) {
                    w[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] +=
                        mult.group_max[k][static_cast<std::size_t>(t)] -
                        mult.group_min[k][static_cast<std::size_t>(t)];
                }
            }
        }
    }
    return w;
}

// Price constants that do not depend on the chosen plan.
double price_constant(const Instance& inst, const Multipliers& mult, bool dualized) {
    KahanSum acc;
    for (const auto& row : mult.assignment) {
        for (double v : row) acc.add(v);
    }
    for (double v : mult.cardinality) {
        acc.add(static_cast<double>(inst.fleet_size) * v);
    }
    if (dualized) {
        for (std::size_t k = 0; k < inst.groups.size(); ++k) {
            const Group& g = inst.groups[k];
            for (std::size_t t = 0; t < mult.group_max[k].size(); ++t) {
                acc.add(static_cast<double>(g.min_open) * mult.group_min[k][t] -
                        static_cast<double>(g.max_open) * mult.group_max[k][t]);
            }
        }
    }
    return acc.value();
}

// Independent open/closed chain per facility, used when the group bounds are
// priced out. Ties prefer the transition-free choice, then the closed state.
double facility_chain(const Instance& inst, const std::vector<double>& w_j,
                      std::vector<std::uint8_t>& open_j) {
    const std::size_t T = w_j.size();
    std::vector<double> closed(T, 0.0);
    std::vector<double> opened(T, 0.0);
    std::vector<std::uint8_t> from_closed_c(T, 1);
    std::vector<std::uint8_t> from_closed_o(T, 1);
    closed[0] = 0.0;
    opened[0] = w_j[0];
    for (std::size_t t = 1; t < T; ++t) {
        double stay = closed[t - 1];
        double leave = opened[t - 1] + inst.close_cost;
        from_closed_c[t] = stay <= leave;
        closed[t] = from_closed_c[t] ? stay : leave;

        double keep = opened[t - 1];
        double enter = closed[t - 1] + inst.open_cost;
        from_closed_o[t] = enter < keep;
        opened[t] = w_j[t] + (from_closed_o[t] ? enter : keep);
    }
    bool is_open = opened[T - 1] < closed[T - 1];
    double value = is_open ? opened[T - 1] : closed[T - 1];
    for (std::size_t t = T; t-- > 0;) {
        open_j[t] = is_open ? 1 : 0;
        if (t > 0) is_open = is_open ? !from_closed_o[t] : !from_closed_c[t];
    }
    return value;
}

SubproblemResult subproblem_with_catalog(const Instance& inst, const Multipliers& mult,
                                         const LrConfig& config,
                                         const std::vector<std::vector<int>>* catalog) {
    check_multipliers(inst, mult, config.dualize_groups);
    const int B = inst.num_locations();
    const int T = inst.horizon;
    const Matrix w = node_costs(inst, mult, config.dualize_groups);

    SubproblemResult sub;
    sub.open.assign(static_cast<std::size_t>(B),
                    std::vector<std::uint8_t>(static_cast<std::size_t>(T), 0));
    double plan_value = 0.0;
    if (config.dualize_groups) {
        KahanSum acc;
        std::vector<std::uint8_t> open_j(static_cast<std::size_t>(T), 0);
        for (int j = 0; j < B; ++j) {
            acc.add(facility_chain(inst, w[static_cast<std::size_t>(j)], open_j));
            sub.open[static_cast<std::size_t>(j)] = open_j;
        }
        plan_value = acc.value();
    } else {
        const std::vector<std::vector<int>>* sets = catalog;
        std::vector<std::vector<int>> own;
        if (sets == nullptr) {
            own = relaxed_catalog(inst, config.catalog_cap);
            sets = &own;
        }
        Matrix day_cost(sets->size(), std::vector<double>(static_cast<std::size_t>(T), 0.0));
        parallel_for(0, sets->size(), config.threads, [&](std::size_t s) {
            for (int t = 0; t < T; ++t) {
                double acc = 0.0;
                for (int j : (*sets)[s]) {
                    acc += w[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
                }
                day_cost[s][static_cast<std::size_t>(t)] = acc;
            }
        });
        auto [value, chain] = cheapest_chain(inst, *sets, day_cost, config.threads);
        plan_value = value;
        for (int t = 0; t < T; ++t) {
            for (int j : (*sets)[static_cast<std::size_t>(chain[static_cast<std::size_t>(t)])]) {
                sub.open[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] = 1;
            }
        }
    }

    sub.value = plan_value + price_constant(inst, mult, config.dualize_groups);

    // Served-at-price assignments: x follows y wherever the reduced cost is
    // strictly negative.
    sub.x.assign(static_cast<std::size_t>(B) * static_cast<std::size_t>(B) *
                     static_cast<std::size_t>(T),
                 0);
    sub.assign_count.assign(static_cast<std::size_t>(B),
                            std::vector<double>(static_cast<std::size_t>(T), 0.0));
    sub.open_count.assign(static_cast<std::size_t>(T), 0);
    for (int j = 0; j < B; ++j) {
        for (int t = 0; t < T; ++t) {
            if (!sub.open[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]) continue;
            ++sub.open_count[static_cast<std::size_t>(t)];
            for (int i = 0; i < B; ++i) {
                double r = inst.demand[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] *
                               inst.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                           mult.assignment[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
                if (r < 0.0) {
                    sub.x[(static_cast<std::size_t>(i) * B + static_cast<std::size_t>(j)) * T +
                          static_cast<std::size_t>(t)] = 1;
                    sub.assign_count[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] +=
                        1.0;
                }
            }
        }
    }
    return sub;
}

}  // namespace

SubproblemResult solve_subproblem(const Instance& inst, const Multipliers& mult,
                                  const LrConfig& config) {
    ValidationReport report = validate(inst);
    if (!report.ok()) throw DataError("solve_subproblem: " + report.summary());
    return subproblem_with_catalog(inst, mult, config, nullptr);
}

double lower_bound(const SubproblemResult& sub) { return sub.value; }

Solution repair(const Instance& inst, const std::vector<std::vector<std::uint8_t>>& sub_open) {
    ValidationReport report = validate(inst);
    if (!report.ok()) throw DataError("repair: " + report.summary());
    const int B = inst.num_locations();
    const int T = inst.horizon;
    const int p = inst.fleet_size;
    const std::size_t K = inst.groups.size();
    if (sub_open.size() != static_cast<std::size_t>(B)) {
        throw DataError("repair: open pattern shape mismatch");
    }
    for (const auto& row : sub_open) {
        if (row.size() != static_cast<std::size_t>(T)) {
            throw DataError("repair: open pattern shape mismatch");
        }
    }

    std::vector<std::vector<int>> member_groups(static_cast<std::size_t>(B));
    std::vector<std::vector<int>> sorted_members(K);
    for (std::size_t k = 0; k < K; ++k) {
        for (int j : inst.groups[k].members) {
            member_groups[static_cast<std::size_t>(j)].push_back(static_cast<int>(k));
        }
        // Scan pools in ascending id order so index ties resolve the same way
        // no matter how the input listed the group.
        sorted_members[k] = inst.groups[k].members;
        std::sort(sorted_members[k].begin(), sorted_members[k].end());
    }

    std::vector<std::vector<std::uint8_t>> open(
        static_cast<std::size_t>(B), std::vector<std::uint8_t>(static_cast<std::size_t>(T), 0));
    std::vector<std::uint8_t> sel(static_cast<std::size_t>(B), 0);
    std::vector<int> cnt(K, 0);
    std::vector<double> bestd(static_cast<std::size_t>(B), 0.0);

    for (int t = 0; t < T; ++t) {
        std::fill(sel.begin(), sel.end(), 0);
        std::fill(cnt.begin(), cnt.end(), 0);
        std::fill(bestd.begin(), bestd.end(), kInf);
        int count = 0;

        auto admissible = [&](int j) {
            if (sel[static_cast<std::size_t>(j)]) return false;
            for (int k : member_groups[static_cast<std::size_t>(j)]) {
                if (cnt[static_cast<std::size_t>(k)] >=
                    inst.groups[static_cast<std::size_t>(k)].max_open) {
                    return false;
                }
            }
            return true;
        };
        // Demand-weighted service improvement of adding j to the current
        // selection; an absolute cost while the selection is still empty.
        // Either way, smaller is better and comparisons stay consistent
        // within a phase.
        auto marginal = [&](int j) {
            double acc = 0.0;
            for (int i = 0; i < B; ++i) {
                double c = inst.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                double d = inst.demand[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
                if (count == 0) {
                    acc += d * c;
                } else if (c < bestd[static_cast<std::size_t>(i)]) {
                    acc += d * (c - bestd[static_cast<std::size_t>(i)]);
                }
            }
            return acc;
        };
        auto pick_best = [&](const std::vector<int>& pool) {
            int best = -1;
            int best_sug = -1;
            double best_marg = kInf;
            for (int j : pool) {
                if (!admissible(j)) continue;
                int sug = sub_open[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
                double marg = (best == -1 || sug >= best_sug) ? marginal(j) : 0.0;
                if (best == -1 || sug > best_sug ||
                    (sug == best_sug && marg < best_marg)) {
                    best = j;
                    best_sug = sug;
                    best_marg = marg;
                }
            }
            return best;
        };
        auto take = [&](int j) {
            sel[static_cast<std::size_t>(j)] = 1;
            ++count;
            for (int k : member_groups[static_cast<std::size_t>(j)]) {
                ++cnt[static_cast<std::size_t>(k)];
            }
            for (int i = 0; i < B; ++i) {
                double c = inst.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (c < bestd[static_cast<std::size_t>(i)]) {
                    bestd[static_cast<std::size_t>(i)] = c;
                }
            }
        };

        for (std::size_t k = 0; k < K; ++k) {
            while (cnt[k] < inst.groups[k].min_open) {
                int j = pick_best(sorted_members[k]);
                if (j < 0) {
                    throw DataError("repair: cannot satisfy the minimum of group " +
                                    inst.groups[k].id + " on day " + std::to_string(t + 1));
                }
                take(j);
            }
        }
        std::vector<int> everyone(static_cast<std::size_t>(B));
        std::iota(everyone.begin(), everyone.end(), 0);
        while (count < p) {
            int j = pick_best(everyone);
            if (j < 0) {
                throw DataError("repair: cannot reach the fleet size on day " +
                                std::to_string(t + 1));
            }
            take(j);
        }
        for (int j = 0; j < B; ++j) {
            open[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] =
                sel[static_cast<std::size_t>(j)];
        }
    }
    return evaluate(inst, open);
}

void update_multipliers(LrState& state, const Instance& inst, const SubproblemResult& sub,
                        const LrConfig& config) {
    check_multipliers(inst, state.multipliers, config.dualize_groups);
    const int B = inst.num_locations();
    const int T = inst.horizon;
    const std::size_t K = inst.groups.size();
    const double p = static_cast<double>(inst.fleet_size);
    const double delta = std::max(0.0, state.best_ub - sub.value);

    // Residuals of every dualized family; walking against them ascends the
    // dual. The literal rule keeps the multiplier-weighted per-family
    // denominators; the standard rule shares one step length over the squared
    // norm of the whole stacked residual vector, which keeps the two equality
    // families from doubling up on the same gap and overshooting.
    double gnorm2 = 0.0;
    double assign_literal = 0.0, card_literal = 0.0;
    for (int i = 0; i < B; ++i) {
        for (int t = 0; t < T; ++t) {
            double count = sub.assign_count[static_cast<std::size_t>(i)]
                                           [static_cast<std::size_t>(t)];
            double g = count - 1.0;
            gnorm2 += g * g;
            // Multiplier-weighted form sums (x - 1)^2 over all of i, j, t;
            // for binary x that inner sum is |B| minus the assign count.
            assign_literal += state.multipliers.assignment[static_cast<std::size_t>(i)]
                                                          [static_cast<std::size_t>(t)] *
                              (static_cast<double>(B) - count);
        }
    }
    for (int t = 0; t < T; ++t) {
        double open = static_cast<double>(sub.open_count[static_cast<std::size_t>(t)]);
        double g = open - p;
        gnorm2 += g * g;
        // Multiplier-weighted form sums (y - p)^2 over all of j, t.
        card_literal += state.multipliers.cardinality[static_cast<std::size_t>(t)] *
                        (open * (1.0 - p) * (1.0 - p) + (static_cast<double>(B) - open) * p * p);
    }
    Matrix open_in_group;
    if (config.dualize_groups) {
        open_in_group.assign(K, std::vector<double>(static_cast<std::size_t>(T), 0.0));
        for (std::size_t k = 0; k < K; ++k) {
            for (int j : inst.groups[k].members) {
                for (int t = 0; t < T; ++t) {
                    open_in_group[k][static_cast<std::size_t>(t)] +=
                        sub.open[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
                }
            }
        }
        for (std::size_t k = 0; k < K; ++k) {
            for (int t = 0; t < T; ++t) {
                double over = open_in_group[k][static_cast<std::size_t>(t)] -
                              static_cast<double>(inst.groups[k].max_open);
                double under = static_cast<double>(inst.groups[k].min_open) -
                               open_in_group[k][static_cast<std::size_t>(t)];
                gnorm2 += over * over + under * under;
            }
        }
    }

    if (gnorm2 == 0.0) {
        // The relaxed minimizer satisfies every dualized constraint; the
        // multipliers cannot move. With a gap still open that is a stall:
        // the step scale halves so the run winds down instead of spinning.
        if (delta > 0.0) {
            ++state.stalls;
            state.alpha *= 0.5;
            state.fail_streak = 0;
        }
        return;
    }

    auto apply_eq = [&](double g, double tau, double& lambda) {
        double v = lambda - tau * g;
        lambda = config.free_eq_multipliers ? v : std::max(0.0, v);
    };

    const double shared_tau = state.alpha * delta / gnorm2;

    // Assignment family: residual of "everyone is served exactly once".
    {
        double tau = config.literal_step_rule
                         ? state.alpha * delta / std::max(assign_literal, 1e-12)
                         : shared_tau;
        for (int i = 0; i < B; ++i) {
            for (int t = 0; t < T; ++t) {
                double g = sub.assign_count[static_cast<std::size_t>(i)]
                                           [static_cast<std::size_t>(t)] -
                           1.0;
                apply_eq(g, tau,
                         state.multipliers.assignment[static_cast<std::size_t>(i)]
                                                     [static_cast<std::size_t>(t)]);
            }
        }
    }

    // Cardinality family: residual of "exactly p sites run each day".
    {
        double tau = config.literal_step_rule
                         ? state.alpha * delta / std::max(card_literal, 1e-12)
                         : shared_tau;
        for (int t = 0; t < T; ++t) {
            double g = static_cast<double>(sub.open_count[static_cast<std::size_t>(t)]) - p;
            apply_eq(g, tau, state.multipliers.cardinality[static_cast<std::size_t>(t)]);
        }
    }

    // Group price families ascend toward the violated side and always stay
    // nonnegative (they price inequalities). The literal formulas cover only
    // the two equality families, so these share the standard step length.
    if (config.dualize_groups) {
        for (std::size_t k = 0; k < K; ++k) {
            for (int t = 0; t < T; ++t) {
                double over = open_in_group[k][static_cast<std::size_t>(t)] -
                              static_cast<double>(inst.groups[k].max_open);
                double under = static_cast<double>(inst.groups[k].min_open) -
                               open_in_group[k][static_cast<std::size_t>(t)];
                double& mx = state.multipliers.group_max[k][static_cast<std::size_t>(t)];
                double& mn = state.multipliers.group_min[k][static_cast<std::size_t>(t)];
                mx = std::max(0.0, mx + shared_tau * over);
                mn = std::max(0.0, mn + shared_tau * under);
            }
        }
    }
}

namespace {

Multipliers zero_multipliers(const Instance& inst, bool dualized) {
    Multipliers mult;
    const std::size_t B = static_cast<std::size_t>(inst.num_locations());
    const std::size_t T = static_cast<std::size_t>(inst.horizon);
    mult.assignment.assign(B, std::vector<double>(T, 0.0));
    mult.cardinality.assign(T, 0.0);
    if (dualized) {
        mult.group_max.assign(inst.groups.size(), std::vector<double>(T, 0.0));
        mult.group_min.assign(inst.groups.size(), std::vector<double>(T, 0.0));
    }
    return mult;
}

// Shared subgradient loop; `price_ub` may re-evaluate the repaired solution
// in place and returns the upper-bound objective to track.
template <typename PriceUb>
LrResult run_loop(const Instance& inst, const LrConfig& config, PriceUb&& price_ub) {
    ValidationReport report = validate(inst);
    if (!report.ok()) throw DataError("run_lagrangian: " + report.summary());
    if (config.max_iter < 0) throw DomainError("run_lagrangian: max_iter must be >= 0");
    if (!(config.alpha_init > 0.0)) {
        throw DomainError("run_lagrangian: alpha_init must be > 0");
    }
    if (config.stall_patience < 1) {
        throw DomainError("run_lagrangian: stall_patience must be >= 1");
    }

    std::vector<std::vector<int>> catalog;
    const std::vector<std::vector<int>>* catalog_ptr = nullptr;
    if (!config.dualize_groups) {
        catalog = relaxed_catalog(inst, config.catalog_cap);
        catalog_ptr = &catalog;
    }

    LrState state;
    state.multipliers = zero_multipliers(inst, config.dualize_groups);
    state.alpha = config.alpha_init;
    state.best_lb = -kInf;
    state.best_ub = kInf;

    LrResult result;
    for (int n = 0;; ++n) {
        SubproblemResult sub = subproblem_with_catalog(inst, state.multipliers, config,
                                                       catalog_ptr);
        const double lb_n = sub.value;
        // A stall is a full streak of stall_patience iterations without a
        // better bound; each one halves the step scale, so alpha stays at
        // alpha_init / 2^stalls throughout.
        if (lb_n > state.best_lb) {
            state.fail_streak = 0;
        } else if (++state.fail_streak >= config.stall_patience) {
            state.alpha *= 0.5;
            ++state.stalls;
            state.fail_streak = 0;
        }
        state.best_lb = std::max(state.best_lb, lb_n);

        Solution sol = repair(inst, sub.open);
        const double ub_n = price_ub(sol);
        if (ub_n < state.best_ub) {
            state.best_ub = ub_n;
            result.best_solution = sol;
        }
        state.iteration = n + 1;

        LrIterate it;
        it.iter = n + 1;
        it.lb = lb_n;
        it.ub = ub_n;
        it.gap = (state.best_ub - state.best_lb) / std::max(1.0, std::abs(state.best_ub));
        it.alpha = state.alpha;
        state.history.push_back(it);

        if (state.best_ub - state.best_lb < config.gap_tol) {
            result.termination = "gap";
            break;
        }
        // max_iter counts subproblem evaluations, but even a zero budget
        // performs the initial one so a repaired solution always exists.
        if (n + 1 >= config.max_iter) {
            result.termination = "max_iter";
            break;
        }
        if (state.alpha < config.alpha_min) {
            result.termination = "alpha_min";
            break;
        }
        update_multipliers(state, inst, sub, config);
    }

    result.best_lb = state.best_lb;
    result.best_ub = state.best_ub;
    result.iterations = state.iteration;
    result.log = std::move(state.history);
    return result;
}

}  // namespace

LrResult run_lagrangian(const Instance& inst, const LrConfig& config) {
    return run_loop(inst, config, [](const Solution& sol) { return sol.objective(); });
}

LrResult run_lagrangian_robust(const Instance& inst, const UncertaintySpec& spec,
                               const LrConfig& config) {
    check_uncertainty(inst, spec);

    // Adversarial-but-admissible demand realization: spend the budget on the
    // entries with the largest deviation * average-unit-cost impact. Any
    // fixed admissible realization keeps the relaxation a valid lower bound
    // on the protected optimum.
    const std::size_t B = static_cast<std::size_t>(inst.num_locations());
    const std::size_t T = static_cast<std::size_t>(inst.horizon);
    struct Entry {
        double score;
        std::size_t i, t;
    };
    std::vector<Entry> entries;
    entries.reserve(B * T);
    for (std::size_t i = 0; i < B; ++i) {
        double mean_cost = 0.0;
        for (std::size_t j = 0; j < B; ++j) mean_cost += inst.cost[i][j];
        mean_cost /= static_cast<double>(B);
        for (std::size_t t = 0; t < T; ++t) {
            entries.push_back({spec.deviation[i][t] * mean_cost, i, t});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.i != b.i) return a.i < b.i;
        return a.t < b.t;
    });

    Instance pessimized = inst;
    pessimized.demand = spec.nominal;
    double remaining = spec.budget;
    for (const Entry& e : entries) {
        if (remaining <= 0.0) break;
        double xi = std::min(1.0, remaining);
        pessimized.demand[e.i][e.t] += spec.deviation[e.i][e.t] * xi;
        remaining -= xi;
    }

    return run_loop(pessimized, config, [&](Solution& sol) {
        sol = evaluate(inst, sol.open);
        return robust_objective(inst, spec, sol);
    });
}

}  // namespace dynmedian
