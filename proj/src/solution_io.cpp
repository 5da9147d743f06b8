#include "dynmedian/solution_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "dynmedian/errors.hpp"
#include "dynmedian/util.hpp"

namespace dynmedian {

namespace {

std::vector<int> open_set_on(const Solution& sol, std::size_t t) {
    std::vector<int> set;
    for (std::size_t j = 0; j < sol.open.size(); ++j) {
        if (sol.open[j][t]) set.push_back(static_cast<int>(j));
    }
    return set;
}

std::string join_ids(const std::vector<int>& ids) {
    std::string out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k > 0) out += ' ';
        out += std::to_string(ids[k]);
    }
    return out;
}

std::vector<int> split_ids(const std::string& cell) {
    std::vector<int> ids;
    std::istringstream in(cell);
    int v = 0;
    while (in >> v) ids.push_back(v);
    return ids;
}

}  // namespace

std::string solution_to_json(const Solution& sol) {
    nlohmann::ordered_json j;
    j["objective"] = sol.objective();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : sol.open) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (std::uint8_t v : row) r.push_back(static_cast<int>(v));
        rows.push_back(std::move(r));
    }
    j["open"] = std::move(rows);
    j["breakdown"] = {{"service_cost", sol.service_cost},
                      {"open_cost_total", sol.open_cost_total},
                      {"close_cost_total", sol.close_cost_total}};
    return j.dump(2) + "\n";
}

void write_solution(const Solution& sol, const std::string& path) {
    write_text_file(path, solution_to_json(sol));
}

Solution read_solution(const Instance& inst, const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("solution file " + path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("open") || !j["open"].is_array()) {
        throw FormatError("solution file " + path + ": missing \"open\" matrix");
    }
    std::vector<std::vector<std::uint8_t>> open;
    for (const auto& row : j["open"]) {
        std::vector<std::uint8_t> r;
        for (const auto& v : row) {
            if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
                throw FormatError("solution file " + path + ": open entries must be 0 or 1");
            }
            r.push_back(static_cast<std::uint8_t>(v.get<int>()));
        }
        open.push_back(std::move(r));
    }
    Solution sol = evaluate(inst, open);
    if (j.contains("objective")) {
        double stored = j["objective"].get<double>();
        double fresh = sol.objective();
        if (std::abs(stored - fresh) > 1e-6 * std::max(1.0, std::abs(fresh))) {
            throw DataError("solution file " + path +
                            ": stored objective does not match its schedule (stored " +
                            format_double(stored) + ", recomputed " + format_double(fresh) +
                            ")");
        }
    }
    return sol;
}

std::vector<ChangeDay> change_days(const Solution& sol) {
    if (sol.open.empty()) return {};
    const std::size_t T = sol.open[0].size();
    std::vector<ChangeDay> log;
    std::vector<int> prev;
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<int> cur = open_set_on(sol, t);
        if (t == 0 || cur != prev) {
            ChangeDay d;
            d.day = static_cast<int>(t) + 1;
            d.open = cur;
            if (t > 0) {
                for (int j : cur) {
                    if (!std::binary_search(prev.begin(), prev.end(), j)) d.opened.push_back(j);
                }
                for (int j : prev) {
                    if (!std::binary_search(cur.begin(), cur.end(), j)) d.closed.push_back(j);
                }
            }
            log.push_back(std::move(d));
        }
        prev = std::move(cur);
    }
    return log;
}

std::string change_log_csv(const Solution& sol) {
    std::string out = "day,open,opened,closed\n";
    for (const ChangeDay& d : change_days(sol)) {
        out += std::to_string(d.day);
        out += ',';
        out += join_ids(d.open);
        out += ',';
        out += join_ids(d.opened);
        out += ',';
        out += join_ids(d.closed);
        out += '\n';
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> schedule_from_change_log(const std::string& csv,
                                                                int locations, int horizon) {
    if (locations < 1 || horizon < 1) {
        throw DomainError("schedule_from_change_log: bad shape");
    }
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line.rfind("day,open", 0) != 0) {
        throw FormatError("change log: missing header");
    }
    std::vector<std::vector<std::uint8_t>> open(
        static_cast<std::size_t>(locations),
        std::vector<std::uint8_t>(static_cast<std::size_t>(horizon), 0));
    int prev_day = 0;
    bool first_row = true;
    std::vector<int> current;
    auto fill_through = [&](int upto) {  // days [prev_day+1, upto], 1-based
        for (int day = prev_day + 1; day <= upto; ++day) {
            for (int j : current) {
                if (j < 0 || j >= locations) {
                    throw FormatError("change log: location id out of range");
                }
                open[static_cast<std::size_t>(j)][static_cast<std::size_t>(day - 1)] = 1;
            }
        }
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string day_cell, open_cell;
        if (!std::getline(row, day_cell, ',') || !std::getline(row, open_cell, ',')) {
            throw FormatError("change log: malformed row: " + line);
        }
        int day = 0;
        try {
            day = std::stoi(day_cell);
        } catch (const std::exception&) {
            throw FormatError("change log: bad day: " + day_cell);
        }
        if (first_row && day != 1) {
            throw FormatError("change log: the first row must describe day 1");
        }
        if (day < 1 || day > horizon || (!first_row && day <= prev_day)) {
            throw FormatError("change log: days must be increasing and within the horizon");
        }
        fill_through(day - 1);
        current = split_ids(open_cell);
        prev_day = day - 1;
        first_row = false;
    }
    if (first_row) throw FormatError("change log: no rows");
    fill_through(horizon);
    return open;
}

std::string convergence_csv(const std::vector<LrIterate>& log) {
    std::string out = "iter,lb,ub,gap,alpha\n";
    for (const LrIterate& it : log) {
        out += std::to_string(it.iter);
        out += ',';
        out += format_double(it.lb);
        out += ',';
        out += format_double(it.ub);
        out += ',';
        out += format_double(it.gap);
        out += ',';
        out += format_double(it.alpha);
        out += '\n';
    }
    return out;
}

void write_day_sheets(const Instance& inst, const Solution& sol, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const int B = inst.num_locations();
    const int T = inst.horizon;
    int width = T >= 100 ? 3 : 2;
    for (int t = 0; t < T; ++t) {
        std::string csv = "location,name,open,assigned_to,demand,unit_cost,served_cost\n";
        for (int i = 0; i < B; ++i) {
            int j = sol.assigned[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            double d = inst.demand[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            double c = inst.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            csv += std::to_string(i);
            csv += ',';
            csv += inst.locations[static_cast<std::size_t>(i)];
            csv += ',';
            csv += sol.open[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] ? '1'
                                                                                      : '0';
            csv += ',';
            csv += std::to_string(j);
            csv += ',';
            csv += format_double(d);
            csv += ',';
            csv += format_double(c);
            csv += ',';
            csv += format_double(d * c);
            csv += '\n';
        }
        char name[32];
        std::snprintf(name, sizeof name, "day_%0*d.csv", width, t + 1);
        write_text_file((std::filesystem::path(dir) / name).string(), csv);
    }
}

}  // namespace dynmedian
