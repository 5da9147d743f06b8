#include "dynmedian/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dynmedian/errors.hpp"
#include "dynmedian/util.hpp"

namespace dynmedian {

int LinearModel::add_variable(std::string var_name, VarKind kind, double lower, double upper) {
    if (index_.count(var_name))
        throw DomainError("duplicate variable name: " + var_name);
    int id = static_cast<int>(variables.size());
    index_.emplace(var_name, id);
    variables.push_back({std::move(var_name), kind, lower, upper});
    return id;
}

int LinearModel::add_constraint(std::string row_name, std::vector<LinearTerm> terms,
                                Sense sense, double rhs) {
    int id = static_cast<int>(constraints.size());
    constraints.push_back({std::move(row_name), std::move(terms), sense, rhs});
    return id;
}

void LinearModel::add_objective_term(int var, double coeff) {
    objective.push_back({var, coeff});
}

int LinearModel::var_index(const std::string& var_name) const {
    auto it = index_.find(var_name);
    return it == index_.end() ? -1 : it->second;
}

double LinearModel::objective_value(const std::vector<double>& point) const {
    KahanSum acc;
    for (const auto& term : objective) acc.add(term.coeff * point.at(term.var));
    acc.add(objective_constant);
    return acc.value();
}

double LinearModel::max_violation(const std::vector<double>& point) const {
    double worst = 0.0;
    for (std::size_t v = 0; v < variables.size(); ++v) {
        worst = std::max(worst, variables[v].lower - point.at(v));
        worst = std::max(worst, point.at(v) - variables[v].upper);
    }
    for (const auto& row : constraints) {
        KahanSum lhs;
        for (const auto& term : row.terms) lhs.add(term.coeff * point.at(term.var));
        double slack = lhs.value() - row.rhs;
        switch (row.sense) {
            case Sense::LessEqual: worst = std::max(worst, slack); break;
            case Sense::GreaterEqual: worst = std::max(worst, -slack); break;
            case Sense::Equal: worst = std::max(worst, std::abs(slack)); break;
        }
    }
    return worst;
}

namespace {

// Terms keyed by variable name with duplicates combined, so models that list
// the same row in a different term order still compare equal.
std::vector<std::pair<std::string, double>> combined_terms(
    const LinearModel& m, const std::vector<LinearTerm>& terms) {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.emplace_back(m.variables[t.var].name, t.coeff);
    std::sort(out.begin(), out.end());
    std::vector<std::pair<std::string, double>> merged;
    for (const auto& t : out) {
        if (!merged.empty() && merged.back().first == t.first)
            merged.back().second += t.second;
        else
            merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto& t) { return t.second == 0.0; }),
                 merged.end());
    return merged;
}

bool terms_match(const LinearModel& a, const std::vector<LinearTerm>& ta,
                 const LinearModel& b, const std::vector<LinearTerm>& tb, double tol) {
    auto ca = combined_terms(a, ta);
    auto cb = combined_terms(b, tb);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i].first != cb[i].first) return false;
        if (std::abs(ca[i].second - cb[i].second) > tol) return false;
    }
    return true;
}

bool bound_match(double x, double y, double tol) {
    if (x == y) return true;  // covers equal infinities
    return std::abs(x - y) <= tol;
}

}  // namespace

bool models_equivalent(const LinearModel& a, const LinearModel& b, double tol) {
    // Variables are compared as name-keyed sets: serialization formats may
    // declare them in a different order than the in-memory model.
    if (a.variables.size() != b.variables.size()) return false;
    for (const auto& va : a.variables) {
        int idx = b.var_index(va.name);
        if (idx < 0) return false;
        const Variable& vb = b.variables[idx];
        if (va.kind != vb.kind) return false;
        if (!bound_match(va.lower, vb.lower, tol)) return false;
        if (!bound_match(va.upper, vb.upper, tol)) return false;
    }
    if (a.constraints.size() != b.constraints.size()) return false;
    for (std::size_t i = 0; i < a.constraints.size(); ++i) {
        const Constraint& ra = a.constraints[i];
        const Constraint& rb = b.constraints[i];
        if (ra.name != rb.name || ra.sense != rb.sense) return false;
        if (std::abs(ra.rhs - rb.rhs) > tol) return false;
        if (!terms_match(a, ra.terms, b, rb.terms, tol)) return false;
    }
    if (std::abs(a.objective_constant - b.objective_constant) > tol) return false;
    return terms_match(a, a.objective, b, b.objective, tol);
}

int hex_width(int count) {
    int w = 1;
    int v = std::max(count - 1, 0);
    while (v >= 16) {
        v /= 16;
        ++w;
    }
    return w;
}

std::string hex_id(int value, int width) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%0*x", width, value);
    return buf;
}

DeterministicLayout deterministic_layout(const Instance& inst) {
    return {inst.num_locations(), inst.horizon};
}

LinearModel build_deterministic(const Instance& inst) {
    ValidationReport report = validate(inst);
    if (!report.ok())
        throw DataError("build_deterministic: instance rejected: " + report.summary());

    int B = inst.num_locations();
    int T = inst.horizon;
    int K = static_cast<int>(inst.groups.size());
    int wb = hex_width(B);
    int wt = hex_width(T);
    int wk = hex_width(K);

    LinearModel m;
    m.variables.reserve(static_cast<std::size_t>(B) * B * T + 3u * B * T);

    // Variable names pack 0-based indices as fixed-width lowercase hex so
    // they stay inside the 8-character budget of fixed-field MPS.
    for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j)
            for (int t = 0; t < T; ++t)
                m.add_variable("x" + hex_id(i, wb) + hex_id(j, wb) + hex_id(t, wt),
                               VarKind::Continuous, 0.0, 1.0);
    for (int j = 0; j < B; ++j)
        for (int t = 0; t < T; ++t)
            m.add_variable("y" + hex_id(j, wb) + hex_id(t, wt), VarKind::Binary, 0.0, 1.0);
    for (int j = 0; j < B; ++j)
        for (int t = 0; t + 1 < T; ++t)
            m.add_variable("a" + hex_id(j, wb) + hex_id(t, wt), VarKind::Continuous, 0.0,
                           kInfinity);
    for (int j = 0; j < B; ++j)
        for (int t = 0; t + 1 < T; ++t)
            m.add_variable("b" + hex_id(j, wb) + hex_id(t, wt), VarKind::Continuous, 0.0,
                           kInfinity);

    DeterministicLayout lay = deterministic_layout(inst);

    for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j)
            for (int t = 0; t < T; ++t) {
                double c = inst.demand[i][t] * inst.cost[i][j];
                if (c != 0.0) m.add_objective_term(lay.x_index(i, j, t), c);
            }
    for (int j = 0; j < B; ++j)
        for (int t = 0; t + 1 < T; ++t) {
            if (inst.close_cost != 0.0)
                m.add_objective_term(lay.a_index(j, t), inst.close_cost);
            if (inst.open_cost != 0.0)
                m.add_objective_term(lay.b_index(j, t), inst.open_cost);
        }

    // Every location is fully served each day.
    for (int i = 0; i < B; ++i)
        for (int t = 0; t < T; ++t) {
            std::vector<LinearTerm> terms;
            terms.reserve(B);
            for (int j = 0; j < B; ++j) terms.push_back({lay.x_index(i, j, t), 1.0});
            m.add_constraint("A" + hex_id(i, wb) + hex_id(t, wt), std::move(terms),
                             Sense::Equal, 1.0);
        }

    // Exactly p sites operate each day.
    for (int t = 0; t < T; ++t) {
        std::vector<LinearTerm> terms;
        terms.reserve(B);
        for (int j = 0; j < B; ++j) terms.push_back({lay.y_index(j, t), 1.0});
        m.add_constraint("K" + hex_id(t, wt), std::move(terms), Sense::Equal,
                         inst.fleet_size);
    }

    // Assignment only to open sites.
    for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j)
            for (int t = 0; t < T; ++t)
                m.add_constraint(
                    "L" + hex_id(i, wb) + hex_id(j, wb) + hex_id(t, wt),
                    {{lay.x_index(i, j, t), 1.0}, {lay.y_index(j, t), -1.0}},
                    Sense::LessEqual, 0.0);

    // Overnight transitions: a picks up closings, b picks up openings.
    for (int j = 0; j < B; ++j)
        for (int t = 0; t + 1 < T; ++t) {
            m.add_constraint("C" + hex_id(j, wb) + hex_id(t, wt),
                             {{lay.y_index(j, t), 1.0},
                              {lay.y_index(j, t + 1), -1.0},
                              {lay.a_index(j, t), -1.0}},
                             Sense::LessEqual, 0.0);
            m.add_constraint("O" + hex_id(j, wb) + hex_id(t, wt),
                             {{lay.y_index(j, t + 1), 1.0},
                              {lay.y_index(j, t), -1.0},
                              {lay.b_index(j, t), -1.0}},
                             Sense::LessEqual, 0.0);
        }

    // Group occupancy bounds per day.
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < T; ++t) {
            std::vector<LinearTerm> up, down;
            up.reserve(inst.groups[k].members.size());
            down.reserve(inst.groups[k].members.size());
            for (int j : inst.groups[k].members) {
                up.push_back({lay.y_index(j, t), 1.0});
                down.push_back({lay.y_index(j, t), 1.0});
            }
            m.add_constraint("U" + hex_id(k, wk) + hex_id(t, wt), std::move(up),
                             Sense::LessEqual, inst.groups[k].max_open);
            m.add_constraint("N" + hex_id(k, wk) + hex_id(t, wt), std::move(down),
                             Sense::GreaterEqual, inst.groups[k].min_open);
        }

    return m;
}

Solution evaluate(const Instance& inst, const std::vector<std::vector<std::uint8_t>>& open) {
    int B = inst.num_locations();
    int T = inst.horizon;
    if (static_cast<int>(open.size()) != B)
        throw DataError("evaluate: open matrix needs one row per location");
    for (const auto& row : open)
        if (static_cast<int>(row.size()) != T)
            throw DataError("evaluate: open matrix needs one column per day");

    for (int t = 0; t < T; ++t) {
        int count = 0;
        for (int j = 0; j < B; ++j) count += open[j][t] ? 1 : 0;
        if (count != inst.fleet_size)
            throw DataError("evaluate: day " + std::to_string(t + 1) + " opens " +
                            std::to_string(count) + " sites, fleet is " +
                            std::to_string(inst.fleet_size));
        for (const auto& g : inst.groups) {
            int in_group = 0;
            for (int j : g.members) in_group += open[j][t] ? 1 : 0;
            if (in_group < g.min_open || in_group > g.max_open)
                throw DataError("evaluate: day " + std::to_string(t + 1) +
                                " breaks bounds of group " + g.id);
        }
    }

    Solution sol;
    sol.open = open;
    sol.assigned.assign(B, std::vector<int>(T, -1));
    KahanSum service;
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < B; ++i) {
            int best = -1;
            double best_cost = 0.0;
            for (int j = 0; j < B; ++j) {
                if (!open[j][t]) continue;
                if (best < 0 || inst.cost[i][j] < best_cost) {
                    best = j;
                    best_cost = inst.cost[i][j];
                }
            }
            sol.assigned[i][t] = best;
            service.add(inst.demand[i][t] * best_cost);
        }
    }
    sol.service_cost = service.value();

    sol.closed_at.assign(B, std::vector<double>(std::max(T - 1, 0), 0.0));
    sol.opened_at.assign(B, std::vector<double>(std::max(T - 1, 0), 0.0));
    long long closings = 0, openings = 0;
    for (int j = 0; j < B; ++j)
        for (int t = 0; t + 1 < T; ++t) {
            if (open[j][t] && !open[j][t + 1]) {
                sol.closed_at[j][t] = 1.0;
                ++closings;
            }
            if (!open[j][t] && open[j][t + 1]) {
                sol.opened_at[j][t] = 1.0;
                ++openings;
            }
        }
    sol.close_cost_total = inst.close_cost * static_cast<double>(closings);
    sol.open_cost_total = inst.open_cost * static_cast<double>(openings);
    return sol;
}

std::vector<double> solution_point(const Instance& inst, const Solution& sol) {
    DeterministicLayout lay = deterministic_layout(inst);
    std::vector<double> point(lay.num_vars(), 0.0);
    for (int i = 0; i < lay.B; ++i)
        for (int t = 0; t < lay.T; ++t) {
            int j = sol.assigned[i][t];
            if (j >= 0) point[lay.x_index(i, j, t)] = 1.0;
        }
    for (int j = 0; j < lay.B; ++j)
        for (int t = 0; t < lay.T; ++t) point[lay.y_index(j, t)] = sol.open[j][t] ? 1.0 : 0.0;
    for (int j = 0; j < lay.B; ++j)
        for (int t = 0; t + 1 < lay.T; ++t) {
            point[lay.a_index(j, t)] = sol.closed_at[j][t];
            point[lay.b_index(j, t)] = sol.opened_at[j][t];
        }
    return point;
}

}  // namespace dynmedian
