#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynmedian/instance.hpp"
#include "dynmedian/lagrangian.hpp"
#include "dynmedian/model.hpp"

namespace dynmedian {

/// Solution JSON: {"objective", "open" (0/1 rows per location), "breakdown"}.
/// Fixed key order; canonical output round-trips byte for byte.
std::string solution_to_json(const Solution& sol);
void write_solution(const Solution& sol, const std::string& path);

/// Reads a solution file and re-derives assignments and cost breakdown
/// against `inst`. Throws DataError when the stored objective disagrees with
/// the recomputed one or the schedule is infeasible.
Solution read_solution(const Instance& inst, const std::string& path);

/// One entry of the compact schedule log: a day whose open set differs from
/// the previous day (day 1 always appears with the initial set).
struct ChangeDay {
    int day = 1;              // 1-based
    std::vector<int> open;    // full open set that day
    std::vector<int> opened;  // vs the previous day
    std::vector<int> closed;
};

std::vector<ChangeDay> change_days(const Solution& sol);

/// CSV with columns day,open,opened,closed; id lists are space-separated.
std::string change_log_csv(const Solution& sol);

/// Rebuilds the full open matrix from a change log. The log determines the
/// schedule exactly, given the location count and horizon.
std::vector<std::vector<std::uint8_t>> schedule_from_change_log(const std::string& csv,
                                                                int locations, int horizon);

/// CSV with columns iter,lb,ub,gap,alpha.
std::string convergence_csv(const std::vector<LrIterate>& log);

/// One CSV per day under `dir` (day_01.csv, ...): per-location open flag,
/// assigned site, demand, unit cost, and served cost.
void write_day_sheets(const Instance& inst, const Solution& sol, const std::string& dir);

}  // namespace dynmedian
