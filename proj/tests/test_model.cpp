#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "dynmedian/errors.hpp"
#include "dynmedian/instance.hpp"
#include "dynmedian/model.hpp"

using namespace dynmedian;

namespace {

Instance two_by_two_instance() {
    Instance inst;
    inst.locations = {"a", "b"};
    inst.horizon = 2;
    inst.fleet_size = 1;
    inst.open_cost = 2.0;
    inst.close_cost = 3.0;
    inst.cost = {{0.0, 1.0}, {1.0, 0.0}};
    inst.demand = {{10.0, 10.0}, {4.0, 4.0}};
    inst.groups = {{"all", {0, 1}, 1, 1}};
    return inst;
}

std::vector<std::vector<std::uint8_t>> open_plan(const Instance& inst,
                                                 const std::vector<std::vector<int>>& days) {
    // days[t] lists the open sites on day t.
    std::vector<std::vector<std::uint8_t>> open(
        static_cast<std::size_t>(inst.num_locations()),
        std::vector<std::uint8_t>(static_cast<std::size_t>(inst.horizon), 0));
    for (std::size_t t = 0; t < days.size(); ++t) {
        for (int j : days[t]) open[static_cast<std::size_t>(j)][t] = 1;
    }
    return open;
}

int count_rows_with_prefix(const LinearModel& m, char prefix) {
    return static_cast<int>(std::count_if(
        m.constraints.begin(), m.constraints.end(),
        [&](const Constraint& c) { return !c.name.empty() && c.name[0] == prefix; }));
}

}  // namespace

TEST_CASE("hex ids are fixed width and lowercase") {
    CHECK(hex_width(1) == 1);
    CHECK(hex_width(16) == 1);
    CHECK(hex_width(17) == 2);
    CHECK(hex_width(256) == 2);
    CHECK(hex_width(257) == 3);
    CHECK(hex_id(0, 2) == "00");
    CHECK(hex_id(255, 2) == "ff");
    CHECK(hex_id(10, 1) == "a");
}

TEST_CASE("two-site two-day model has the documented block sizes") {
    LinearModel m = build_deterministic(two_by_two_instance());
    int n_x = 0, n_y = 0, n_a = 0, n_b = 0;
    for (const Variable& v : m.variables) {
        switch (v.name[0]) {
            case 'x': ++n_x; CHECK(v.kind == VarKind::Continuous); break;
            case 'y': ++n_y; CHECK(v.kind == VarKind::Binary); break;
            case 'a': ++n_a; CHECK(v.kind == VarKind::Continuous); break;
            case 'b': ++n_b; CHECK(v.kind == VarKind::Continuous); break;
            default: FAIL("unexpected variable ", v.name);
        }
    }
    CHECK(n_x == 8);
    CHECK(n_y == 4);
    CHECK(n_a + n_b == 4);
    CHECK(m.variables.size() == 16);

    CHECK(count_rows_with_prefix(m, 'A') == 4);   // one assignment row per (i, t)
    CHECK(count_rows_with_prefix(m, 'K') == 2);   // one fleet row per day
    CHECK(count_rows_with_prefix(m, 'L') == 8);   // x <= y links
    CHECK(count_rows_with_prefix(m, 'C') == 2);   // overnight closings
    CHECK(count_rows_with_prefix(m, 'O') == 2);   // overnight openings
    CHECK(count_rows_with_prefix(m, 'U') == 2);   // group ceilings
    CHECK(count_rows_with_prefix(m, 'N') == 2);   // group floors
    CHECK(m.constraints.size() == 22);
}

TEST_CASE("single-day model has no transition variables") {
    Instance inst = two_by_two_instance();
    inst.horizon = 1;
    inst.demand = {{10.0}, {4.0}};
    LinearModel m = build_deterministic(inst);
    for (const Variable& v : m.variables) {
        CHECK(v.name[0] != 'a');
        CHECK(v.name[0] != 'b');
    }
    CHECK(m.variables.size() == 4 + 2);
    CHECK(count_rows_with_prefix(m, 'C') == 0);
    CHECK(count_rows_with_prefix(m, 'O') == 0);
}

TEST_CASE("campus-scale model matches the documented size convention") {
    Instance inst =
        build_campus_instance(campus_profiles(), synthetic_campus_layout(), 18, 28, 5.0, 5.0);
    LinearModel m = build_deterministic(inst);
    // 91^2*28 assignment + 91*28 open + 2*91*27 transition variables.
    CHECK(m.variables.size() == 231868u + 2548u + 4914u);
    CHECK(m.variables.size() == 239330u);
    // Assignment + fleet + linking + transitions + group rows.
    CHECK(m.constraints.size() == 2548u + 28u + 231868u + 4914u + 336u);
    CHECK(m.constraints.size() == 239694u);
    // Names stay within the 8-character budget of fixed-field exports.
    for (const Variable& v : m.variables) CHECK(v.name.size() <= 8);
    for (const Constraint& c : m.constraints) CHECK(c.name.size() <= 8);
}

TEST_CASE("build_deterministic rejects invalid instances") {
    Instance inst = two_by_two_instance();
    inst.fleet_size = 0;
    CHECK_THROWS_AS(build_deterministic(inst), DataError);
}

TEST_CASE("deterministic layout arithmetic matches the variable order") {
    Instance inst = two_by_two_instance();
    LinearModel m = build_deterministic(inst);
    DeterministicLayout lay = deterministic_layout(inst);
    CHECK(lay.num_vars() == static_cast<int>(m.variables.size()));
    CHECK(m.variables[static_cast<std::size_t>(lay.x_index(1, 0, 1))].name == "x101");
    CHECK(m.variables[static_cast<std::size_t>(lay.y_index(0, 0))].name == "y00");
    CHECK(m.variables[static_cast<std::size_t>(lay.a_index(1, 0))].name == "a10");
    CHECK(m.variables[static_cast<std::size_t>(lay.b_index(0, 0))].name == "b00");
    CHECK(m.var_index("y00") == lay.y_index(0, 0));
    CHECK(m.var_index("missing") == -1);
}

TEST_CASE("evaluate serves each location from its cheapest open site") {
    Instance inst = two_by_two_instance();
    inst.horizon = 1;
    inst.demand = {{10.0}, {4.0}};
    Solution sol = evaluate(inst, open_plan(inst, {{0}}));
    // Site 0 open: location 0 at distance 0, location 1 at distance 1.
    CHECK(sol.service_cost == 4.0);
    CHECK(sol.open_cost_total == 0.0);
    CHECK(sol.close_cost_total == 0.0);
    CHECK(sol.assigned[0][0] == 0);
    CHECK(sol.assigned[1][0] == 0);
    CHECK(sol.objective() == 4.0);
}

TEST_CASE("evaluate charges nothing when demand is zero") {
    Instance inst = two_by_two_instance();
    inst.demand = {{0.0, 0.0}, {0.0, 0.0}};
    Solution sol = evaluate(inst, open_plan(inst, {{0}, {1}}));
    CHECK(sol.service_cost == 0.0);
    // The overnight switch still costs: close 0, open 1.
    CHECK(sol.close_cost_total == 3.0);
    CHECK(sol.open_cost_total == 2.0);
}

TEST_CASE("evaluate charges no transitions for a constant schedule") {
    Instance inst = two_by_two_instance();
    Solution sol = evaluate(inst, open_plan(inst, {{0}, {0}}));
    CHECK(sol.open_cost_total == 0.0);
    CHECK(sol.close_cost_total == 0.0);
    CHECK(sol.closed_at[0][0] == 0.0);
    CHECK(sol.opened_at[1][0] == 0.0);
}

TEST_CASE("day-one placement is free; only overnight changes cost") {
    Instance inst = two_by_two_instance();
    Solution sol = evaluate(inst, open_plan(inst, {{1}, {0}}));
    // Day 1 opens site 1 for free; overnight we close 1 (3.0) and open 0 (2.0).
    CHECK(sol.close_cost_total == 3.0);
    CHECK(sol.open_cost_total == 2.0);
    CHECK(sol.closed_at[1][0] == 1.0);
    CHECK(sol.opened_at[0][0] == 1.0);
}

TEST_CASE("evaluate breaks service ties toward the lowest site index") {
    Instance inst;
    inst.locations = {"a", "b", "c"};
    inst.horizon = 1;
    inst.fleet_size = 2;
    inst.cost = {{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}};
    inst.demand = {{1.0}, {1.0}, {1.0}};
    inst.groups = {{"all", {0, 1, 2}, 0, 3}};
    Solution sol = evaluate(inst, open_plan(inst, {{1, 2}}));
    // Location 0 sees distance 1 from both open sites; index 1 wins.
    CHECK(sol.assigned[0][0] == 1);
}

TEST_CASE("evaluate rejects schedules with the wrong site count") {
    Instance inst = two_by_two_instance();
    auto open = open_plan(inst, {{0, 1}, {0}});
    CHECK_THROWS_WITH_AS(evaluate(inst, open),
                         doctest::Contains("day 1"), DataError);
}

TEST_CASE("evaluate rejects schedules that break group bounds") {
    Instance inst;
    inst.locations = {"a", "b", "c", "d"};
    inst.horizon = 1;
    inst.fleet_size = 2;
    inst.cost.assign(4, std::vector<double>(4, 1.0));
    for (int i = 0; i < 4; ++i) inst.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0.0;
    inst.demand.assign(4, std::vector<double>(1, 1.0));
    inst.groups = {{"left", {0, 1}, 1, 1}, {"right", {2, 3}, 1, 1}};
    // Both open sites in one group: its ceiling is 1.
    CHECK_THROWS_AS(evaluate(inst, open_plan(inst, {{0, 1}})), DataError);
}

TEST_CASE("evaluate matches the model objective at the solution point") {
    for (std::uint64_t seed : {3ULL, 14ULL, 159ULL, 2653ULL}) {
        Instance inst = generate_random(seed, 6, 2, 3, 2, 3);
        LinearModel m = build_deterministic(inst);
        // Take an arbitrary feasible schedule: repeat the exact day-one
        // greedy evaluation of an all-lowest-index plan is overkill; use the
        // schedule that opens the p lowest-index sites that satisfy groups by
        // construction of generate_random's contiguous partition.
        std::vector<std::vector<std::uint8_t>> open(
            static_cast<std::size_t>(inst.num_locations()),
            std::vector<std::uint8_t>(static_cast<std::size_t>(inst.horizon), 0));
        // Satisfy each group's minimum first, then fill with lowest indices.
        for (int t = 0; t < inst.horizon; ++t) {
            int count = 0;
            std::vector<char> sel(static_cast<std::size_t>(inst.num_locations()), 0);
            for (const Group& g : inst.groups) {
                for (int picked = 0; picked < g.min_open; ++picked) {
                    for (int j : g.members) {
                        if (!sel[static_cast<std::size_t>(j)]) {
                            sel[static_cast<std::size_t>(j)] = 1;
                            ++count;
                            break;
                        }
                    }
                }
            }
            auto group_count = [&](const Group& g) {
                int c = 0;
                for (int j : g.members) c += sel[static_cast<std::size_t>(j)];
                return c;
            };
            for (int j = 0; j < inst.num_locations() && count < inst.fleet_size; ++j) {
                if (sel[static_cast<std::size_t>(j)]) continue;
                bool room = true;
                for (const Group& g : inst.groups) {
                    if (std::find(g.members.begin(), g.members.end(), j) != g.members.end() &&
                        group_count(g) + 1 > g.max_open) {
                        room = false;
                    }
                }
                if (!room) continue;
                sel[static_cast<std::size_t>(j)] = 1;
                ++count;
            }
            REQUIRE(count == inst.fleet_size);
            for (int j = 0; j < inst.num_locations(); ++j) {
                open[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] =
                    sel[static_cast<std::size_t>(j)];
            }
        }
        Solution sol = evaluate(inst, open);
        std::vector<double> point = solution_point(inst, sol);
        double model_obj = m.objective_value(point);
        CHECK(model_obj == doctest::Approx(sol.objective()).epsilon(1e-9));
        CHECK(m.max_violation(point) <= 1e-9);
    }
}

TEST_CASE("evaluate objective is invariant under location relabeling") {
    Instance inst = generate_random(77, 5, 2, 3, 2, 3);
    std::vector<int> perm = {2, 0, 4, 1, 3};  // relabeling: new index -> old index
    Instance shuffled;
    shuffled.horizon = inst.horizon;
    shuffled.fleet_size = inst.fleet_size;
    shuffled.open_cost = inst.open_cost;
    shuffled.close_cost = inst.close_cost;
    shuffled.locations.resize(5);
    shuffled.cost.assign(5, std::vector<double>(5, 0.0));
    shuffled.demand.assign(5, {});
    std::vector<int> inverse(5);
    for (int n = 0; n < 5; ++n) inverse[static_cast<std::size_t>(perm[static_cast<std::size_t>(n)])] = n;
    for (int n = 0; n < 5; ++n) {
        int o = perm[static_cast<std::size_t>(n)];
        shuffled.locations[static_cast<std::size_t>(n)] = inst.locations[static_cast<std::size_t>(o)];
        shuffled.demand[static_cast<std::size_t>(n)] = inst.demand[static_cast<std::size_t>(o)];
        for (int n2 = 0; n2 < 5; ++n2) {
            shuffled.cost[static_cast<std::size_t>(n)][static_cast<std::size_t>(n2)] =
                inst.cost[static_cast<std::size_t>(o)][static_cast<std::size_t>(perm[static_cast<std::size_t>(n2)])];
        }
    }
    for (const Group& g : inst.groups) {
        Group ng = g;
        ng.members.clear();
        for (int j : g.members) ng.members.push_back(inverse[static_cast<std::size_t>(j)]);
        std::sort(ng.members.begin(), ng.members.end());
        shuffled.groups.push_back(std::move(ng));
    }
    REQUIRE(validate(shuffled).ok());

    // One feasible schedule on the original and its relabeled twin.
    Instance base = inst;
    std::vector<std::vector<std::uint8_t>> open(
        5, std::vector<std::uint8_t>(static_cast<std::size_t>(inst.horizon), 0));
    // Open each group's first min_open members, then fill from index 0 up.
    {
        std::vector<char> sel(5, 0);
        int count = 0;
        for (const Group& g : base.groups) {
            for (int picked = 0; picked < g.min_open; ++picked) {
                for (int j : g.members) {
                    if (!sel[static_cast<std::size_t>(j)]) { sel[static_cast<std::size_t>(j)] = 1; ++count; break; }
                }
            }
        }
        for (int j = 0; j < 5 && count < base.fleet_size; ++j) {
            if (!sel[static_cast<std::size_t>(j)]) { sel[static_cast<std::size_t>(j)] = 1; ++count; }
        }
        for (int j = 0; j < 5; ++j)
            for (int t = 0; t < base.horizon; ++t)
                open[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] = sel[static_cast<std::size_t>(j)];
    }
    // Group maxima might bite; only continue when the plan is feasible as-is.
    Solution sol_base;
    bool feasible = true;
    try {
        sol_base = evaluate(base, open);
    } catch (const DataError&) {
        feasible = false;
    }
    if (feasible) {
        std::vector<std::vector<std::uint8_t>> shuffled_open(
            5, std::vector<std::uint8_t>(static_cast<std::size_t>(inst.horizon), 0));
        for (int n = 0; n < 5; ++n) {
            shuffled_open[static_cast<std::size_t>(n)] = open[static_cast<std::size_t>(perm[static_cast<std::size_t>(n)])];
        }
        Solution sol_shuffled = evaluate(shuffled, shuffled_open);
        CHECK(sol_shuffled.objective() == doctest::Approx(sol_base.objective()).epsilon(1e-12));
    }
}

TEST_CASE("lowering a unit cost never raises the evaluated objective") {
    Instance inst = generate_random(31, 5, 2, 3, 2, 3);
    // Fixed feasible schedule from the exact evaluator precondition: open the
    // group-minimum sites then fill; reuse throughout.
    std::vector<std::vector<std::uint8_t>> open(
        5, std::vector<std::uint8_t>(static_cast<std::size_t>(inst.horizon), 0));
    std::vector<char> sel(5, 0);
    int count = 0;
    for (const Group& g : inst.groups) {
        for (int picked = 0; picked < g.min_open; ++picked)
            for (int j : g.members)
                if (!sel[static_cast<std::size_t>(j)]) { sel[static_cast<std::size_t>(j)] = 1; ++count; break; }
    }
    for (int j = 0; j < 5 && count < inst.fleet_size; ++j)
        if (!sel[static_cast<std::size_t>(j)]) { sel[static_cast<std::size_t>(j)] = 1; ++count; }
    for (int j = 0; j < 5; ++j)
        for (int t = 0; t < inst.horizon; ++t)
            open[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] = sel[static_cast<std::size_t>(j)];

    double base_obj = 0.0;
    bool feasible = true;
    try {
        base_obj = evaluate(inst, open).objective();
    } catch (const DataError&) {
        feasible = false;
    }
    if (feasible) {
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                if (i == j) continue;
                Instance cheaper = inst;
                cheaper.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *= 0.5;
                CHECK(evaluate(cheaper, open).objective() <= base_obj + 1e-12);
            }
        }
    }
}

TEST_CASE("models_equivalent tolerates term order but not values") {
    LinearModel a;
    a.add_variable("v0", VarKind::Continuous, 0.0, 1.0);
    a.add_variable("v1", VarKind::Continuous, 0.0, 1.0);
    a.add_constraint("r0", {{0, 1.0}, {1, 2.0}}, Sense::LessEqual, 3.0);
    a.add_objective_term(0, 5.0);

    LinearModel b;
    b.add_variable("v0", VarKind::Continuous, 0.0, 1.0);
    b.add_variable("v1", VarKind::Continuous, 0.0, 1.0);
    b.add_constraint("r0", {{1, 2.0}, {0, 1.0}}, Sense::LessEqual, 3.0);
    b.add_objective_term(0, 5.0);
    CHECK(models_equivalent(a, b));

    b.constraints[0].rhs = 4.0;
    CHECK_FALSE(models_equivalent(a, b));
    b.constraints[0].rhs = 3.0;
    b.variables[1].upper = 2.0;
    CHECK_FALSE(models_equivalent(a, b));
}

TEST_CASE("model objective includes the constant offset") {
    LinearModel m;
    m.add_variable("v", VarKind::Continuous, 0.0, 10.0);
    m.add_objective_term(0, 2.0);
    m.objective_constant = 7.0;
    CHECK(m.objective_value({3.0}) == 13.0);
}

TEST_CASE("max_violation reports bound and row slack") {
    LinearModel m;
    m.add_variable("v", VarKind::Continuous, 0.0, 1.0);
    m.add_constraint("r", {{0, 1.0}}, Sense::LessEqual, 0.5);
    CHECK(m.max_violation({0.25}) == 0.0);
    CHECK(m.max_violation({0.75}) == doctest::Approx(0.25));
    CHECK(m.max_violation({-0.5}) == doctest::Approx(0.5));
    CHECK(m.max_violation({2.0}) == doctest::Approx(1.5));
}
