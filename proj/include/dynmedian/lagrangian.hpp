#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dynmedian/instance.hpp"
#include "dynmedian/model.hpp"
#include "dynmedian/robust.hpp"

namespace dynmedian {

/// Prices on the relaxed constraints. Assignment and cardinality multipliers
/// are kept nonnegative unless the run frees them; the group families exist
/// only when the group bounds are dualized too.
struct Multipliers {
    Matrix assignment;                // [location][day]
    std::vector<double> cardinality;  // [day]
    Matrix group_max;                 // [group][day]
    Matrix group_min;                 // [group][day]
};

struct LrConfig {
    int max_iter = 1000;
    double gap_tol = 0.1;           // absolute UB - LB stop
    double alpha_init = 2.0;
    double alpha_min = 1e-12;       // stop once the step scale has collapsed
    int stall_patience = 5;         // consecutive non-improving iterations per stall
    bool dualize_groups = false;    // also price the group bounds away
    bool literal_step_rule = false; // multiplier-weighted step denominators
    bool free_eq_multipliers = false;
    std::size_t catalog_cap = 200000;  // cap on the relaxed day catalog
    int threads = 1;
};

/// Minimizer of the priced-out problem at fixed multipliers.
struct SubproblemResult {
    double value = 0.0;  // relaxed optimum; a certified lower bound
    std::vector<std::vector<std::uint8_t>> open;        // y [location][day]
    std::vector<std::uint8_t> x;                        // x[(i*B + j)*T + t]
    Matrix assign_count;                                // [location][day]
    std::vector<int> open_count;                        // per day
};

SubproblemResult solve_subproblem(const Instance& inst, const Multipliers& mult,
                                  const LrConfig& config = {});

/// The relaxed optimum never exceeds the true optimum.
double lower_bound(const SubproblemResult& sub);

/// Projects a relaxed open pattern onto the feasible set day by day: first
/// satisfy every group minimum, then fill up to the fleet size respecting
/// group maxima. Sites suggested by the subproblem win; remaining ties go to
/// the best marginal service cost, then the lowest index. A feasible pattern
/// comes back unchanged (the repair is a fixed point).
Solution repair(const Instance& inst, const std::vector<std::vector<std::uint8_t>>& sub_open);

struct LrIterate {
    int iter = 0;      // 1-based
    double lb = 0.0;   // this iteration's relaxed value
    double ub = 0.0;   // this iteration's repaired objective
    double gap = 0.0;  // (best_ub - best_lb) / max(1, |best_ub|)
    double alpha = 0.0;
};

struct LrState {
    Multipliers multipliers;
    double alpha = 2.0;
    double best_lb = 0.0;
    double best_ub = 0.0;
    int iteration = 0;
    int stalls = 0;       // step-scale halvings; alpha == alpha_init / 2^stalls
    int fail_streak = 0;  // iterations since the last best-LB improvement
    std::vector<LrIterate> history;
};

/// One subgradient step from the current iterate. All dualized families share
/// one step length alpha * (best_ub - lb) / ||g||^2 where g stacks every
/// family's residual (the literal rule instead uses the multiplier-weighted
/// per-family denominators). Equality multipliers are projected back to >= 0
/// unless the config frees them; group prices stay >= 0 always. A zero stacked
/// subgradient with the gap still open leaves the multipliers unchanged and
/// registers a stall (the step scale halves, the counter advances).
void update_multipliers(LrState& state, const Instance& inst, const SubproblemResult& sub,
                        const LrConfig& config);

struct LrResult {
    Solution best_solution;
    double best_lb = 0.0;
    double best_ub = 0.0;
    int iterations = 0;        // subproblem evaluations performed
    std::string termination;   // "gap", "max_iter", or "alpha_min"
    std::vector<LrIterate> log;
};

/// Subgradient optimization: price the assignment and cardinality rows (and
/// optionally the group rows), halve the step scale after every streak of
/// stall_patience iterations without a better bound, and keep the best
/// repaired schedule seen.
LrResult run_lagrangian(const Instance& inst, const LrConfig& config = {});

/// Relaxation of the budget-protected objective. Lower bounds come from the
/// plain relaxation on one adversarial demand realization inside the budget
/// (any fixed admissible realization under-estimates the protected cost);
/// upper bounds price each repaired schedule with the full protection term.
LrResult run_lagrangian_robust(const Instance& inst, const UncertaintySpec& spec,
                               const LrConfig& config = {});

}  // namespace dynmedian
