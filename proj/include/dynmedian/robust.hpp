#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dynmedian/instance.hpp"
#include "dynmedian/model.hpp"

namespace dynmedian {

/// Interval uncertainty on demand: entry (i, t) lives in
/// [nominal - deviation, nominal + deviation], and at most `budget` entries
/// (fractionally, in total) stray from nominal at once.
struct UncertaintySpec {
    Matrix nominal;    // [location][day]
    Matrix deviation;  // [location][day], nonnegative
    double budget = 0.0;
};

/// Spec with nominal = the instance demand and deviation = fraction * demand.
UncertaintySpec uniform_deviation(const Instance& inst, double fraction, double budget);

/// Throws DataError/DomainError unless `spec` matches the instance shape,
/// deviations are finite and nonnegative, and the budget lies in
/// [0, locations * horizon].
void check_uncertainty(const Instance& inst, const UncertaintySpec& spec);

/// Worst-case extra cost when at most `budget` of the `magnitudes` act at
/// full strength (the fractional remainder scales one more): the sum of the
/// floor(budget) largest entries plus frac * next. Entries must be
/// nonnegative; budget must lie in [0, n].
double protection(const std::vector<double>& magnitudes, double budget);

/// Same quantity through its dual form min_{beta >= 0} beta * budget +
/// sum_k max(0, magnitudes[k] - beta), scanning the candidate kinks
/// {0} and each entry value. Kept as an independent route on purpose.
double dual_protection_value(const std::vector<double>& magnitudes, double budget);

/// Handles to the variables a robustified row gained.
struct RobustifiedRow {
    int beta = -1;           // budget price variable
    std::vector<int> mu;     // one slack per uncertain coefficient
};

/// Replaces a <= row having uncertain coefficients with its protected form:
/// adds beta >= 0 and mu_k >= 0, puts budget * beta + sum mu_k on the row,
/// and links beta + mu_k >= deviation_k * var_k for each uncertain entry.
/// The affected variables must be nonnegative.
RobustifiedRow robustify_row(LinearModel& model, int row,
                             const std::vector<std::pair<int, double>>& deviations,
                             double budget);

/// Probability bound for a protected row being violated: with budget gamma on
/// j_size independently, symmetrically perturbed coefficients the chance is
/// at most 1 - Phi((gamma - 1) / sqrt(j_size)).
double violation_bound(double gamma, int j_size);

/// Epigraph counterpart of the full multi-period model under `spec`: the
/// objective becomes theta + transition costs, with dual prices pi1 (budget),
/// pi2..pi5 (per demand entry) certifying theta against the protected
/// service cost.
struct RobustCounterpart {
    LinearModel model;
    int theta = -1;
    int pi1 = -1;
    std::vector<std::vector<int>> pi2, pi3, pi4, pi5;  // [location][day]
};

RobustCounterpart build_robust(const Instance& inst, const UncertaintySpec& spec);

/// Service plan as assignment fractions: entries[i][t] lists (facility,
/// fraction) pairs summing to one.
struct FractionalAssignment {
    std::vector<std::vector<std::vector<std::pair<int, double>>>> entries;

    static FractionalAssignment from_solution(const Instance& inst, const Solution& sol);
};

/// Nominal service cost plus the protection term for a fixed plan.
double worst_case_cost(const Instance& inst, const UncertaintySpec& spec,
                       const FractionalAssignment& plan);

/// Full objective of a fixed schedule under the worst admissible demand:
/// worst-case service plus the schedule's transition costs.
double robust_objective(const Instance& inst, const UncertaintySpec& spec, const Solution& sol);

/// Fraction of `samples` independent uniform demand draws whose realized
/// service cost exceeds the plan's protected service cost. Sample k uses its
/// own generator seeded from (seed, k), so the result is independent of
/// `threads`.
double monte_carlo_violation(const Instance& inst, const UncertaintySpec& spec,
                             const Solution& sol, int samples, std::uint64_t seed,
                             int threads = 1);

struct RobustExactResult {
    Solution solution;
    double value = 0.0;  // protected objective of the best schedule
    double beta = 0.0;   // budget price at the optimum
    std::vector<int> schedule;
};

/// Exact minimizer of the protected objective over the feasible-set catalog.
/// For each candidate budget price the inner problem is a plain day-chain
/// optimization, so the solve scans the candidate kinks {0} and every
/// deviation * unit-cost product. Desk-scale only; throws CapExceeded when
/// the scan would be too large.
RobustExactResult solve_robust_exact(const Instance& inst, const UncertaintySpec& spec,
                                     std::size_t cap = 200000, int threads = 1);

}  // namespace dynmedian
