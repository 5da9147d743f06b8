#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "dynmedian/errors.hpp"
#include "dynmedian/exact.hpp"
#include "dynmedian/instance.hpp"
#include "dynmedian/model.hpp"

using namespace dynmedian;

namespace {

// Two locations, one vehicle, demand that hops from site 0 to site 1 on day 2.
Instance hopping_demand_instance(double open_cost, double close_cost) {
    Instance inst;
    inst.locations = {"a", "b"};
    inst.horizon = 2;
    inst.fleet_size = 1;
    inst.open_cost = open_cost;
    inst.close_cost = close_cost;
    inst.cost = {{0.0, 1.0}, {1.0, 0.0}};
    inst.demand = {{10.0, 0.0}, {0.0, 10.0}};
    inst.groups = {{"all", {0, 1}, 0, 1}};
    return inst;
}

Instance open_instance(int n_locations, int p, int horizon) {
    Instance inst = generate_random(99, n_locations, 2, horizon, p, horizon);
    std::vector<int> everyone(static_cast<std::size_t>(n_locations));
    std::iota(everyone.begin(), everyone.end(), 0);
    inst.groups = {{"all", everyone, 0, n_locations}};
    inst.fleet_size = p;
    return inst;
}

// Independent check of the catalog predicate: p members, every group between
// its bounds.
bool admissible_set(const Instance& inst, const std::vector<int>& members) {
    if (static_cast<int>(members.size()) != inst.fleet_size) return false;
    for (const auto& g : inst.groups) {
        int inside = 0;
        for (int j : g.members)
            inside += std::binary_search(members.begin(), members.end(), j) ? 1 : 0;
        if (inside < g.min_open || inside > g.max_open) return false;
    }
    return true;
}

std::vector<std::vector<int>> all_subsets(int n, int p) {
    std::vector<std::vector<int>> out;
    std::vector<int> comb(static_cast<std::size_t>(p));
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
        out.push_back(comb);
        int i = p - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - p + i) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < p; ++k)
            comb[static_cast<std::size_t>(k)] = comb[static_cast<std::size_t>(k - 1)] + 1;
    }
    return out;
}

// Exhaustive schedule search. Chain values accumulate right to left in the
// same association as the production recursion, so optima compare bit for
// bit; enumeration in lexicographic order with strict improvement keeps the
// lexicographically smallest optimal chain.
std::pair<double, std::vector<int>> brute_force_chain(const Instance& inst,
                                                      const std::vector<std::vector<int>>& sets,
                                                      const Matrix& day_cost) {
    const std::size_t n = sets.size();
    const std::size_t T = day_cost[0].size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_chain;
    std::vector<int> chain(T, 0);
    while (true) {
        double value = day_cost[static_cast<std::size_t>(chain[T - 1])][T - 1];
        for (std::size_t t = T - 1; t-- > 0;) {
            value = day_cost[static_cast<std::size_t>(chain[t])][t] +
                    (transition_cost(inst, sets[static_cast<std::size_t>(chain[t])],
                                     sets[static_cast<std::size_t>(chain[t + 1])]) +
                     value);
        }
        if (value < best) {
            best = value;
            best_chain = chain;
        }
        std::size_t t = T;
        while (t-- > 0) {
            if (chain[t] + 1 < static_cast<int>(n)) {
                ++chain[t];
                std::fill(chain.begin() + static_cast<std::ptrdiff_t>(t) + 1, chain.end(), 0);
                break;
            }
            if (t == 0) return {best, best_chain};
        }
    }
}

Instance truncated(const Instance& full, int horizon) {
    Instance inst = full;
    inst.horizon = horizon;
    for (auto& row : inst.demand) row.resize(static_cast<std::size_t>(horizon));
    return inst;
}

int change_days(const ExactResult& res) {
    int changes = 0;
    for (std::size_t t = 1; t < res.schedule.size(); ++t)
        changes += res.schedule[t] != res.schedule[t - 1] ? 1 : 0;
    return changes;
}

}  // namespace

TEST_CASE("catalog with one unconstraining group lists every p-subset") {
    Instance inst = open_instance(8, 3, 2);
    FeasibleSetCatalog catalog = enumerate_feasible(inst);
    CHECK(catalog.sets.size() == 56);  // C(8, 3)
    CHECK(catalog.sets == all_subsets(8, 3));
    for (const auto& s : catalog.sets) {
        CHECK(s.size() == 3);
        CHECK(std::is_sorted(s.begin(), s.end()));
    }
    // Duplicate-free: lexicographic order is strict.
    for (std::size_t i = 1; i < catalog.sets.size(); ++i)
        CHECK(catalog.sets[i - 1] < catalog.sets[i]);
    REQUIRE(catalog.service.size() == catalog.sets.size());
    for (std::size_t s = 0; s < catalog.sets.size(); ++s) {
        REQUIRE(catalog.service[s].size() == static_cast<std::size_t>(inst.horizon));
        for (int t = 0; t < inst.horizon; ++t)
            CHECK(catalog.service[s][static_cast<std::size_t>(t)] ==
                  service_cost(inst, catalog.sets[s], t));
    }
}

TEST_CASE("catalog honors a pinned group exactly") {
    Instance inst;
    inst.locations = {"a", "b", "c", "d"};
    inst.horizon = 1;
    inst.fleet_size = 2;
    inst.open_cost = 1.0;
    inst.close_cost = 1.0;
    inst.cost = {{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}, {3, 2, 1, 0}};
    inst.demand = {{1}, {1}, {1}, {1}};
    inst.groups = {{"front", {0, 1}, 1, 1}, {"back", {2, 3}, 0, 2}};
    FeasibleSetCatalog catalog = enumerate_feasible(inst);
    const std::vector<std::vector<int>> expected = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
    CHECK(catalog.sets == expected);
    // Independent oracle: the bound predicate over every 2-subset.
    std::vector<std::vector<int>> oracle;
    for (const auto& s : all_subsets(4, 2))
        if (admissible_set(inst, s)) oracle.push_back(s);
    CHECK(catalog.sets == oracle);
}

TEST_CASE("catalog cap refusal points at the relaxation solver") {
    Instance inst = open_instance(8, 3, 2);
    CHECK_NOTHROW((void)enumerate_feasible(inst, 56));
    CHECK_THROWS_AS((void)enumerate_feasible(inst, 55), CapExceeded);
    try {
        (void)enumerate_feasible(inst, 55);
        FAIL("expected CapExceeded");
    } catch (const CapExceeded& e) {
        const std::string msg = e.what();
        CHECK(msg.find("C(8, 3)") != std::string::npos);
        CHECK(msg.find("relaxation solver") != std::string::npos);
    }
}

TEST_CASE("catalog construction rejects invalid instances upstream") {
    Instance inst = open_instance(4, 2, 2);
    inst.groups[0].min_open = 3;  // wants 3 open but the fleet is 2
    CHECK_THROWS_AS((void)enumerate_feasible(inst), DataError);
}

TEST_CASE("service cost follows the nearest-open-site formula") {
    Instance inst = hopping_demand_instance(0.5, 0.5);
    CHECK(service_cost(inst, {0}, 0) == 0.0);   // self-service on day 1
    CHECK(service_cost(inst, {0}, 1) == 10.0);  // day-2 demand crosses over
    CHECK(service_cost(inst, {1}, 0) == 10.0);
    CHECK(service_cost(inst, {0, 1}, 0) == 0.0);
    CHECK(service_cost(inst, {0, 1}, 1) == 0.0);

    Instance two;
    two.locations = {"a", "b"};
    two.horizon = 1;
    two.fleet_size = 1;
    two.open_cost = 1.0;
    two.close_cost = 1.0;
    two.cost = {{0.0, 1.0}, {1.0, 0.0}};
    two.demand = {{10.0}, {4.0}};
    two.groups = {{"all", {0, 1}, 0, 1}};
    CHECK(service_cost(two, {0}, 0) == 4.0);  // 10·0 + 4·1

    CHECK_THROWS_AS((void)service_cost(two, {0}, 1), DomainError);
    CHECK_THROWS_AS((void)service_cost(two, {0}, -1), DomainError);
    CHECK_THROWS_AS((void)service_cost(two, {}, 0), DomainError);
}

TEST_CASE("doubling every demand doubles the service cost exactly") {
    Instance inst = generate_random(5, 7, 2, 3, 3, 3);
    Instance doubled = inst;
    for (auto& row : doubled.demand)
        for (double& d : row) d *= 2.0;
    FeasibleSetCatalog catalog = enumerate_feasible(inst);
    for (const auto& s : catalog.sets)
        for (int t = 0; t < inst.horizon; ++t)
            CHECK(service_cost(doubled, s, t) == 2.0 * service_cost(inst, s, t));
}

TEST_CASE("transition cost prices closings and openings separately") {
    Instance inst = open_instance(4, 2, 2);
    inst.open_cost = 2.0;
    inst.close_cost = 3.0;
    CHECK(transition_cost(inst, {0, 1}, {0, 1}) == 0.0);
    CHECK(transition_cost(inst, {0, 1}, {1, 2}) == 5.0);   // close 0, open 2
    CHECK(transition_cost(inst, {0, 1}, {2, 3}) == 10.0);  // full swap
    CHECK(transition_cost(inst, {1, 2}, {0, 1}) == 5.0);   // reverse direction
    inst.open_cost = 7.0;
    CHECK(transition_cost(inst, {0, 1}, {1, 2}) == 10.0);  // 3 + 7
}

TEST_CASE("relocating beats staying exactly when the switch is cheap") {
    // Moving with the demand costs one open + one close; staying costs the
    // crossover service. The optimum flips between the two as fees rise.
    ExactResult cheap = solve_exact(hopping_demand_instance(0.5, 0.5));
    CHECK(cheap.value == 1.0);
    CHECK(cheap.schedule.size() == 2);
    CHECK(cheap.solution.open[0][0] == 1);
    CHECK(cheap.solution.open[1][0] == 0);
    CHECK(cheap.solution.open[0][1] == 0);
    CHECK(cheap.solution.open[1][1] == 1);

    ExactResult pricey = solve_exact(hopping_demand_instance(6.0, 6.0));
    CHECK(pricey.value == 10.0);
    CHECK(pricey.solution.open[0][0] == 1);
    CHECK(pricey.solution.open[0][1] == 1);  // stays put
}

TEST_CASE("single-day optimum is the cheapest catalog entry") {
    Instance inst = generate_random(17, 6, 2, 1, 2, 1);
    FeasibleSetCatalog catalog = enumerate_feasible(inst);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : catalog.sets) best = std::min(best, service_cost(inst, s, 0));
    ExactResult res = solve_exact(inst);
    CHECK(res.value == best);
    CHECK(res.solution.open_cost_total == 0.0);
    CHECK(res.solution.close_cost_total == 0.0);
}

TEST_CASE("forward table satisfies the recurrence it documents") {
    Instance inst = generate_random(3, 5, 2, 4, 2, 3);
    FeasibleSetCatalog catalog = enumerate_feasible(inst);
    DpTable table = compute_dp_table(inst, catalog);
    const std::size_t n = catalog.sets.size();
    REQUIRE(table.value.size() == static_cast<std::size_t>(inst.horizon));
    for (std::size_t s = 0; s < n; ++s) {
        CHECK(table.value[0][s] == catalog.service[s][0]);
        CHECK(table.parent[0][s] == -1);
    }
    for (std::size_t t = 1; t < table.value.size(); ++t) {
        for (std::size_t s = 0; s < n; ++s) {
            double best = std::numeric_limits<double>::infinity();
            int arg = -1;
            for (std::size_t prev = 0; prev < n; ++prev) {
                double cand = table.value[t - 1][prev] +
                              transition_cost(inst, catalog.sets[prev], catalog.sets[s]);
                if (cand < best) {
                    best = cand;
                    arg = static_cast<int>(prev);
                }
            }
            CHECK(table.value[t][s] == best + catalog.service[s][t]);
            CHECK(table.parent[t][s] == arg);
        }
    }
    // Forward and backward recursions are independent routes to the optimum.
    double forward_best = *std::min_element(table.value.back().begin(), table.value.back().end());
    ExactResult res = solve_exact(inst);
    CHECK(res.value == doctest::Approx(forward_best).epsilon(1e-12));
}

TEST_CASE("solver matches exhaustive schedule enumeration bit for bit") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        Instance inst = generate_random(seed, 5, 2, 3, 2, 2);
        CAPTURE(seed);
        FeasibleSetCatalog catalog = enumerate_feasible(inst);
        auto [value, chain] = brute_force_chain(inst, catalog.sets, catalog.service);
        ExactResult res = solve_exact(inst);
        CHECK(res.value == value);
        CHECK(res.schedule == chain);
    }
    // A 2-day, 4-location case with meaningful transition fees.
    Instance inst = open_instance(4, 2, 2);
    inst.open_cost = 2.5;
    inst.close_cost = 1.5;
    FeasibleSetCatalog catalog = enumerate_feasible(inst);
    auto [value, chain] = brute_force_chain(inst, catalog.sets, catalog.service);
    ExactResult res = solve_exact(inst);
    CHECK(res.value == value);
    CHECK(res.schedule == chain);
}

TEST_CASE("solution bookkeeping agrees with the reported optimum") {
    Instance inst = generate_random(29, 6, 2, 4, 2, 2);
    ExactResult res = solve_exact(inst);
    CHECK(res.solution.objective() == doctest::Approx(res.value).epsilon(1e-9));
    Solution replay = evaluate(inst, res.solution.open);
    CHECK(replay.objective() == doctest::Approx(res.value).epsilon(1e-9));
    LinearModel m = build_deterministic(inst);
    CHECK(m.objective_value(solution_point(inst, res.solution)) ==
          doctest::Approx(res.value).epsilon(1e-9));
    CHECK(m.max_violation(solution_point(inst, res.solution)) <= 1e-9);
}

TEST_CASE("weekly periodic demand adds the same cost per extra week") {
    Instance full = generate_random(21, 6, 2, 28, 2, 7);
    double v14 = solve_exact(truncated(full, 14)).value;
    double v21 = solve_exact(truncated(full, 21)).value;
    double v28 = solve_exact(full).value;
    CHECK(v21 - v14 == doctest::Approx(v28 - v21).epsilon(1e-9));
    CHECK(v14 < v21);
    CHECK(v21 < v28);
}

TEST_CASE("optimum never rises when the fleet grows") {
    Instance inst = open_instance(7, 1, 3);
    double prev = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= 5; ++p) {
        inst.fleet_size = p;
        double value = solve_exact(inst).value;
        CAPTURE(p);
        CHECK(value <= prev + 1e-12);
        prev = value;
    }
}

TEST_CASE("optimum never falls when transition fees grow") {
    Instance inst = open_instance(6, 2, 4);
    double prev = -1.0;
    int changes_free = -1;
    int changes_costly = -1;
    for (double fee : {0.0, 1.0, 5.0, 20.0}) {
        inst.open_cost = fee;
        inst.close_cost = fee;
        ExactResult res = solve_exact(inst);
        CAPTURE(fee);
        CHECK(res.value >= prev - 1e-12);
        prev = res.value;
        if (fee == 0.0) changes_free = change_days(res);
        if (fee == 20.0) changes_costly = change_days(res);
    }
    // Free moves never change the sets on fewer days than costly moves.
    CHECK(changes_free >= changes_costly);
}

TEST_CASE("results do not depend on the thread count") {
    Instance inst = generate_random(31, 7, 2, 5, 3, 4);
    ExactResult one = solve_exact(inst, 200000, 1);
    for (int threads : {2, 4, 8}) {
        ExactResult many = solve_exact(inst, 200000, threads);
        CAPTURE(threads);
        CHECK(many.value == one.value);
        CHECK(many.schedule == one.schedule);
    }
    FeasibleSetCatalog catalog = enumerate_feasible(inst, 200000, 4);
    FeasibleSetCatalog serial = enumerate_feasible(inst, 200000, 1);
    CHECK(catalog.sets == serial.sets);
    CHECK(catalog.service == serial.service);
}
