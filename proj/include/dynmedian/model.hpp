#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynmedian/instance.hpp"

namespace dynmedian {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = kInfinity;
};

struct LinearTerm {
    int var = 0;
    double coeff = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<LinearTerm> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

/// Sparse minimization model: variables with bounds, linear constraints, a
/// linear objective plus constant. This is a model container, not a solver.
struct LinearModel {
    std::string name = "dynmedian";
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::vector<LinearTerm> objective;
    double objective_constant = 0.0;

    int add_variable(std::string var_name, VarKind kind, double lower, double upper);
    int add_constraint(std::string row_name, std::vector<LinearTerm> terms, Sense sense,
                       double rhs);
    void add_objective_term(int var, double coeff);

    /// Index of a variable by name, -1 when absent.
    int var_index(const std::string& var_name) const;

    double objective_value(const std::vector<double>& point) const;

    /// Largest absolute violation over all constraints and variable bounds.
    double max_violation(const std::vector<double>& point) const;

private:
    std::unordered_map<std::string, int> index_;
};

/// Same variables, constraints and objective up to the order of terms inside
/// each row. Numeric fields compare exactly when tol is 0.
bool models_equivalent(const LinearModel& a, const LinearModel& b, double tol = 0.0);

/// Width in hex digits needed to print ids 0..count-1 at fixed width, and the
/// fixed-width lowercase hex rendering used in generated model names.
int hex_width(int count);
std::string hex_id(int value, int width);

/// Index arithmetic for the deterministic model's variable blocks, in order:
/// assignment x, open/closed y, overnight closings a, overnight openings b.
struct DeterministicLayout {
    int B = 0;
    int T = 0;
    int x_index(int i, int j, int t) const { return (i * B + j) * T + t; }
    int y_index(int j, int t) const { return B * B * T + j * T + t; }
    int a_index(int j, int t) const { return B * B * T + B * T + j * (T - 1) + t; }
    int b_index(int j, int t) const { return B * B * T + B * T + B * (T - 1) + j * (T - 1) + t; }
    int num_vars() const { return B * B * T + B * T + 2 * B * (T - 1); }
};

DeterministicLayout deterministic_layout(const Instance& inst);

/// Builds the full multi-day model: demand-weighted assignment costs plus
/// overnight open/close charges, single-assignment and fleet-size rows,
/// assignment-to-open linking, transition rows tying consecutive days, and
/// per-group occupancy bounds. Throws DataError when validate() fails.
LinearModel build_deterministic(const Instance& inst);

/// A concrete operating plan: which sites run each day and how demand is
/// routed. Assignments are integral (each location is served by exactly one
/// open site per day).
struct Solution {
    std::vector<std::vector<std::uint8_t>> open;  // [location][day]
    std::vector<std::vector<int>> assigned;       // [location][day] -> serving site
    std::vector<std::vector<double>> closed_at;   // [location][day], days 0..T-2
    std::vector<std::vector<double>> opened_at;   // [location][day], days 0..T-2
    double service_cost = 0.0;
    double open_cost_total = 0.0;
    double close_cost_total = 0.0;

    double objective() const { return service_cost + open_cost_total + close_cost_total; }
    double assign_fraction(int i, int j, int t) const {
        return assigned[i][t] == j ? 1.0 : 0.0;
    }
};

/// Completes a day-by-day open plan into a full solution: serves every
/// location from its cheapest open site (lowest index on ties), derives the
/// overnight transition indicators, and prices all three cost components.
/// Throws DataError when a day opens the wrong number of sites or breaks a
/// group bound.
Solution evaluate(const Instance& inst, const std::vector<std::vector<std::uint8_t>>& open);

/// Dense (x, y, a, b) point for the deterministic model's layout.
std::vector<double> solution_point(const Instance& inst, const Solution& sol);

}  // namespace dynmedian
