#include "dynmedian/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "dynmedian/errors.hpp"
#include "dynmedian/util.hpp"
#include "json.hpp"

namespace dynmedian {

namespace {

bool matrix_is_rectangular(const Matrix& m, std::size_t rows, std::size_t cols) {
    if (m.size() != rows) return false;
    for (const auto& row : m)
        if (row.size() != cols) return false;
    return true;
}

bool all_finite(const Matrix& m) {
    for (const auto& row : m)
        for (double v : row)
            if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v.code + ": " + v.message;
    }
    return out;
}

ValidationReport validate(const Instance& inst) {
    ValidationReport report;
    auto flag = [&report](const std::string& code, const std::string& message) {
        report.violations.push_back({code, message});
    };

    int b = inst.num_locations();
    if (b < 1) flag("no-locations", "instance has no locations");
    if (inst.horizon < 1) flag("bad-horizon", "horizon must be at least one day");
    if (inst.fleet_size < 1) flag("bad-fleet", "fleet_size must be at least one store");
    if (!(inst.open_cost >= 0.0) || !std::isfinite(inst.open_cost))
        flag("bad-open-cost", "open_cost must be finite and nonnegative");
    if (!(inst.close_cost >= 0.0) || !std::isfinite(inst.close_cost))
        flag("bad-close-cost", "close_cost must be finite and nonnegative");

    if (!matrix_is_rectangular(inst.cost, b, b)) {
        flag("cost-shape", "cost matrix is not square with one row per location");
    } else {
        if (!all_finite(inst.cost)) flag("cost-not-finite", "cost matrix has non-finite entries");
        for (int i = 0; i < b; ++i) {
            if (inst.cost[i][i] != 0.0) {
                flag("cost-diagonal", "cost[" + std::to_string(i) + "][" + std::to_string(i) +
                                          "] must be zero");
                break;
            }
        }
        bool negative = false;
        for (const auto& row : inst.cost)
            for (double v : row) negative = negative || v < 0.0;
        if (negative) flag("cost-negative", "cost matrix has negative entries");
    }

    if (!matrix_is_rectangular(inst.demand, b, static_cast<std::size_t>(std::max(inst.horizon, 0)))) {
        flag("demand-shape", "demand matrix must be |locations| x horizon");
    } else {
        if (!all_finite(inst.demand)) flag("demand-not-finite", "demand has non-finite entries");
        bool negative = false;
        for (const auto& row : inst.demand)
            for (double v : row) negative = negative || v < 0.0;
        if (negative) flag("demand-negative", "demand has negative entries");
    }

    std::vector<int> cover(std::max(b, 0), 0);
    long long sum_min = 0, sum_max = 0;
    for (std::size_t k = 0; k < inst.groups.size(); ++k) {
        const Group& g = inst.groups[k];
        std::string label = "group " + (g.id.empty() ? std::to_string(k) : g.id);
        if (g.members.empty()) flag("group-empty", label + " has no members");
        std::vector<int> members = g.members;
        std::sort(members.begin(), members.end());
        if (std::adjacent_find(members.begin(), members.end()) != members.end())
            flag("group-duplicate-member", label + " lists a member twice");
        for (int m : g.members) {
            if (m < 0 || m >= b) {
                flag("group-member-range", label + " member " + std::to_string(m) +
                                               " is not a location index");
            } else {
                cover[m] += 1;
            }
        }
        if (g.min_open < 0 || g.min_open > g.max_open)
            flag("group-bounds-order", label + " needs 0 <= min_open <= max_open");
        if (g.max_open > static_cast<int>(g.members.size()))
            flag("group-bounds-size", label + " max_open exceeds its member count");
        sum_min += std::max(g.min_open, 0);
        sum_max += std::max(g.max_open, 0);
    }
    for (int i = 0; i < b; ++i) {
        if (cover[i] == 0) {
            flag("uncovered-location",
                 "location " + std::to_string(i) + " belongs to no group");
        }
    }
    if (!inst.groups.empty()) {
        if (inst.fleet_size < sum_min)
            flag("fleet-below-minima", "fleet below group minima (" +
                                           std::to_string(inst.fleet_size) + " < " +
                                           std::to_string(sum_min) + ")");
        if (inst.fleet_size > sum_max)
            flag("fleet-above-maxima", "fleet above group maxima (" +
                                           std::to_string(inst.fleet_size) + " > " +
                                           std::to_string(sum_max) + ")");
    } else {
        flag("no-groups", "instance defines no groups");
    }
    return report;
}

std::pair<int, int> group_bounds(int p, int facility_count_k, int total_facilities) {
    if (p < 1) throw DomainError("group_bounds: p must be at least 1");
    if (total_facilities < 1) throw DomainError("group_bounds: total_facilities must be at least 1");
    if (facility_count_k < 1 || facility_count_k > total_facilities)
        throw DomainError("group_bounds: facility count must lie in [1, total]");
    // floor(0.7 * p * count / total) and ceil(1.3 * p * count / total) as
    // exact integer divisions 7pc/10T and 13pc/10T.
    long long num_min = 7LL * p * facility_count_k;
    long long num_max = 13LL * p * facility_count_k;
    long long den = 10LL * total_facilities;
    int lo = static_cast<int>(num_min / den);
    int hi = static_cast<int>((num_max + den - 1) / den);
    return {lo, hi};
}

double build_demand(const SegmentProfile& profile, int day) {
    if (day < 1) throw DomainError("build_demand: day is 1-based");
    if (profile.facility_count < 1)
        throw DomainError("build_demand: profile needs at least one facility");
    if (profile.total_population < 0.0)
        throw DomainError("build_demand: population must be nonnegative");
    int weekday = (day - 1) % 7;
    return profile.utilization[weekday] / 100.0 * profile.total_population /
           profile.facility_count;
}

Instance build_campus_instance(const std::vector<SegmentProfile>& profiles,
                               const std::vector<std::pair<double, double>>& coordinates,
                               int p, int horizon, double open_cost, double close_cost) {
    if (profiles.empty()) throw DomainError("build_campus_instance: no profiles");
    if (horizon < 1) throw DomainError("build_campus_instance: horizon must be positive");
    int total = 0;
    for (const auto& prof : profiles) {
        if (prof.facility_count < 1)
            throw DomainError("build_campus_instance: profile '" + prof.name +
                              "' has no facilities");
        total += prof.facility_count;
    }
    if (static_cast<int>(coordinates.size()) != total)
        throw DomainError("build_campus_instance: expected " + std::to_string(total) +
                          " coordinates, got " + std::to_string(coordinates.size()));

    Instance inst;
    inst.horizon = horizon;
    inst.fleet_size = p;
    inst.open_cost = open_cost;
    inst.close_cost = close_cost;

    inst.locations.reserve(total);
    for (const auto& prof : profiles) {
        for (int f = 0; f < prof.facility_count; ++f) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "_%02d", f + 1);
            inst.locations.push_back(prof.name + buf);
        }
    }

    inst.cost.assign(total, std::vector<double>(total, 0.0));
    for (int i = 0; i < total; ++i) {
        for (int j = 0; j < total; ++j) {
            double dx = coordinates[i].first - coordinates[j].first;
            double dy = coordinates[i].second - coordinates[j].second;
            inst.cost[i][j] = std::sqrt(dx * dx + dy * dy);
        }
    }

    inst.demand.assign(total, std::vector<double>(horizon, 0.0));
    int base = 0;
    for (const auto& prof : profiles) {
        for (int f = 0; f < prof.facility_count; ++f)
            for (int t = 0; t < horizon; ++t)
                inst.demand[base + f][t] = build_demand(prof, t + 1);
        base += prof.facility_count;
    }

    base = 0;
    for (const auto& prof : profiles) {
        Group g;
        g.id = prof.name;
        for (int f = 0; f < prof.facility_count; ++f) g.members.push_back(base + f);
        auto [lo, hi] = group_bounds(p, prof.facility_count, total);
        g.min_open = lo;
        g.max_open = std::min(hi, prof.facility_count);
        inst.groups.push_back(std::move(g));
        base += prof.facility_count;
    }
    return inst;
}

Instance generate_random(std::uint64_t seed, int n_locations, int n_groups,
                         int horizon, int p, int demand_period) {
    if (n_locations < 1) throw DomainError("generate_random: need at least one location");
    if (n_groups < 1 || n_groups > n_locations)
        throw DomainError("generate_random: group count must lie in [1, n_locations]");
    if (horizon < 1) throw DomainError("generate_random: horizon must be positive");
    if (p < 1 || p > n_locations)
        throw DomainError("generate_random: p must lie in [1, n_locations]");
    if (demand_period < 1) throw DomainError("generate_random: period must be positive");

    std::mt19937_64 rng(derive_seed(seed, 0));
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    std::uniform_real_distribution<double> dem(0.0, 5.0);
    std::uniform_real_distribution<double> swing(0.0, 2.0);

    Instance inst;
    inst.horizon = horizon;
    inst.fleet_size = p;
    inst.open_cost = swing(rng);
    inst.close_cost = swing(rng);

    inst.locations.reserve(n_locations);
    for (int i = 0; i < n_locations; ++i) inst.locations.push_back("L" + std::to_string(i));

    std::vector<std::pair<double, double>> pts(n_locations);
    for (auto& pt : pts) {
        pt.first = coord(rng);
        pt.second = coord(rng);
    }
    inst.cost.assign(n_locations, std::vector<double>(n_locations, 0.0));
    for (int i = 0; i < n_locations; ++i)
        for (int j = 0; j < n_locations; ++j) {
            double dx = pts[i].first - pts[j].first;
            double dy = pts[i].second - pts[j].second;
            inst.cost[i][j] = std::sqrt(dx * dx + dy * dy);
        }

    int period = demand_period;
    Matrix base(n_locations, std::vector<double>(period, 0.0));
    for (auto& row : base)
        for (double& v : row) v = dem(rng);
    inst.demand.assign(n_locations, std::vector<double>(horizon, 0.0));
    for (int i = 0; i < n_locations; ++i)
        for (int t = 0; t < horizon; ++t) inst.demand[i][t] = base[i][t % period];

    // Contiguous partition into n_groups chunks, sizes as even as possible.
    int chunk = n_locations / n_groups;
    int extra = n_locations % n_groups;
    int start = 0;
    for (int k = 0; k < n_groups; ++k) {
        int size = chunk + (k < extra ? 1 : 0);
        Group g;
        g.id = "G" + std::to_string(k);
        for (int f = 0; f < size; ++f) g.members.push_back(start + f);
        auto [lo, hi] = group_bounds(p, size, n_locations);
        g.min_open = lo;
        g.max_open = std::min(hi, size);
        inst.groups.push_back(std::move(g));
        start += size;
    }
    return inst;
}

std::vector<SegmentProfile> campus_profiles() {
    return {
        {"academic", 54, 37103.0, {100, 90, 90, 80, 90, 30, 30}},
        {"parking", 20, 4000.0, {100, 100, 100, 100, 100, 20, 20}},
        {"residence", 8, 5285.0, {50, 50, 50, 50, 60, 100, 100}},
        {"research_park", 6, 4100.0, {100, 90, 90, 80, 90, 10, 10}},
        {"athletic", 2, 4300.0, {50, 50, 50, 60, 50, 100, 100}},
        {"plaza", 1, 3200.0, {100, 100, 70, 80, 90, 50, 50}},
    };
}

std::vector<std::pair<double, double>> synthetic_campus_layout() {
    // Sunflower-spiral placement: deterministic, roughly uniform over a disc
    // of radius ~500 m. Synthetic stand-in coordinates, not survey data.
    std::vector<std::pair<double, double>> pts;
    pts.reserve(91);
    const double golden = 2.39996322972865332;
    for (int k = 0; k < 91; ++k) {
        double r = 500.0 * std::sqrt((k + 0.5) / 91.0);
        double a = golden * k;
        pts.emplace_back(500.0 + r * std::cos(a), 500.0 + r * std::sin(a));
    }
    return pts;
}

// --- serialization ---

namespace {

using ordered_json = nlohmann::ordered_json;

Matrix parse_matrix(const nlohmann::json& node, const std::string& key,
                    const std::string& base_dir) {
    if (node.is_string()) {
        std::string rel = node.get<std::string>();
        std::string path = base_dir.empty() ? rel : base_dir + "/" + rel;
        return read_matrix_csv(path);
    }
    if (!node.is_array())
        throw DataError("instance field '" + key + "' must be a matrix or a CSV path");
    Matrix out;
    for (const auto& row : node) {
        if (!row.is_array())
            throw DataError("instance field '" + key + "' must be a matrix of rows");
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number())
                throw DataError("instance field '" + key + "' has a non-numeric entry");
            r.push_back(v.get<double>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
    ordered_json j;
    j["horizon"] = inst.horizon;
    j["fleet_size"] = inst.fleet_size;
    j["open_cost"] = inst.open_cost;
    j["close_cost"] = inst.close_cost;
    j["locations"] = inst.locations;
    j["cost"] = inst.cost;
    j["demand"] = inst.demand;
    ordered_json groups = ordered_json::array();
    for (const auto& g : inst.groups) {
        ordered_json gj;
        gj["id"] = g.id;
        gj["members"] = g.members;
        gj["min_open"] = g.min_open;
        gj["max_open"] = g.max_open;
        groups.push_back(std::move(gj));
    }
    j["groups"] = std::move(groups);
    return j.dump() + "\n";
}

Instance instance_from_json(const std::string& text, const std::string& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("instance JSON malformed: ") + e.what());
    }
    try {
        Instance inst;
        if (!j.is_object()) throw DataError("instance JSON must be an object");
        for (const char* key :
             {"horizon", "fleet_size", "open_cost", "close_cost", "locations", "cost",
              "demand", "groups"})
            if (!j.contains(key))
                throw DataError(std::string("instance JSON missing field '") + key + "'");
        inst.horizon = j.at("horizon").get<int>();
        inst.fleet_size = j.at("fleet_size").get<int>();
        inst.open_cost = j.at("open_cost").get<double>();
        inst.close_cost = j.at("close_cost").get<double>();
        inst.locations = j.at("locations").get<std::vector<std::string>>();
        inst.cost = parse_matrix(j.at("cost"), "cost", base_dir);
        inst.demand = parse_matrix(j.at("demand"), "demand", base_dir);
        for (const auto& gj : j.at("groups")) {
            Group g;
            g.id = gj.at("id").get<std::string>();
            g.members = gj.at("members").get<std::vector<int>>();
            g.min_open = gj.at("min_open").get<int>();
            g.max_open = gj.at("max_open").get<int>();
            inst.groups.push_back(std::move(g));
        }
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("instance JSON has wrong field types: ") + e.what());
    }
}

Instance read_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string dir;
    auto cut = path.find_last_of('/');
    if (cut != std::string::npos) dir = path.substr(0, cut);
    return instance_from_json(buf.str(), dir);
}

void write_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write instance file: " + path);
    out << instance_to_json(inst);
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV matrix: " + path);
    Matrix out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError("CSV matrix " + path + " has a non-numeric cell: '" + cell + "'");
            }
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace dynmedian
