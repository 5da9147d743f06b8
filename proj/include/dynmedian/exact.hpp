#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dynmedian/instance.hpp"
#include "dynmedian/model.hpp"

namespace dynmedian {

/// Every admissible single-day open set: the p-subsets of locations meeting
/// all group occupancy bounds, listed in lexicographic member order, plus the
/// per-set per-day service cost table.
struct FeasibleSetCatalog {
    std::vector<std::vector<int>> sets;
    Matrix service;  // [set][day]
};

/// Demand-weighted cost of serving every location from its nearest member of
/// `open_set` on 0-based `day`. Compensated summation over locations.
double service_cost(const Instance& inst, const std::vector<int>& open_set, int day);

/// Overnight restructuring charge between the open sets of two consecutive
/// days. Both sets must be sorted.
double transition_cost(const Instance& inst, const std::vector<int>& from,
                       const std::vector<int>& to);

/// Builds the day catalog. Refuses with CapExceeded when C(|B|, p) is larger
/// than `cap`; instances of that size belong to the relaxation solver.
FeasibleSetCatalog enumerate_feasible(const Instance& inst, std::size_t cap = 200000,
                                      int threads = 1);

/// Forward dynamic-programming table over a catalog. value[t][s] is the
/// cheapest cost of days 0..t that ends with set s operating on day t;
/// parent[t][s] is the predecessor choice (-1 on day 0).
struct DpTable {
    Matrix value;
    std::vector<std::vector<int>> parent;
};

DpTable compute_dp_table(const Instance& inst, const FeasibleSetCatalog& catalog);

/// Cheapest day chain over an arbitrary list of sorted sets with per-day set
/// costs day_cost[set][day]. Returns the optimal value and one chosen set
/// index per day. Ties resolve to the lexicographically smallest chain when
/// `sets` is sorted, and the result does not depend on `threads`.
std::pair<double, std::vector<int>> cheapest_chain(const Instance& inst,
                                                   const std::vector<std::vector<int>>& sets,
                                                   const Matrix& day_cost, int threads = 1);

struct ExactResult {
    Solution solution;
    double value = 0.0;         // chain optimum
    std::vector<int> schedule;  // catalog set index per day
};

/// Exact optimum by dynamic programming over the feasible-set catalog.
ExactResult solve_exact(const Instance& inst, std::size_t cap = 200000, int threads = 1);

}  // namespace dynmedian
