#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dynmedian {

using Matrix = std::vector<std::vector<double>>;

/// A named family of candidate sites with per-day bounds on how many of its
/// members may operate.
struct Group {
    std::string id;
    std::vector<int> members;  // location indices, sorted and unique
    int min_open = 0;
    int max_open = 0;
};

/// Multi-day facility location instance. Candidate sites and demand points
/// coincide. cost[i][j] is the unit cost of serving location i from site j,
/// demand[i][t] the demand of location i on day t (0-based in memory and in
/// the JSON form).
struct Instance {
    std::vector<std::string> locations;
    int horizon = 0;      // number of days, T >= 1
    int fleet_size = 0;   // stores operating each day, p >= 1
    double open_cost = 0.0;   // charged per site that turns on overnight
    double close_cost = 0.0;  // charged per site that turns off overnight
    Matrix cost;    // |B| x |B|
    Matrix demand;  // |B| x T
    std::vector<Group> groups;

    int num_locations() const { return static_cast<int>(locations.size()); }
};

struct Violation {
    std::string code;
    std::string message;
};

/// Outcome of checking an instance against the model's preconditions.
/// Empty violation list means the instance is usable.
struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

/// Checks every structural invariant: square nonnegative cost matrix with a
/// zero diagonal, demand shape and sign, group coverage of all locations,
/// per-group bound sanity, and sum(min) <= fleet_size <= sum(max). Collects
/// all violations instead of stopping at the first; never throws.
ValidationReport validate(const Instance& inst);

/// Per-group open-store bounds derived from the group's share of all
/// facilities: floor of 70% and ceiling of 130% of p * count/total. Computed
/// in exact integer arithmetic so boundary cases never wobble.
std::pair<int, int> group_bounds(int p, int facility_count_k, int total_facilities);

/// Demand profile of one campus segment: how many facilities it has, the
/// population using them, and a weekly utilization pattern in percent
/// (index 0 = Monday).
struct SegmentProfile {
    std::string name;
    int facility_count = 0;
    double total_population = 0.0;
    std::array<double, 7> utilization{};
};

/// Demand of a single facility of `profile` on 1-based `day`; day 1 is a
/// Monday and the pattern repeats weekly.
double build_demand(const SegmentProfile& profile, int day);

/// Assembles a campus-style instance. Facilities are laid out segment by
/// segment in profile order; `coordinates` supplies one point per facility
/// and service costs are Euclidean distances. Group bounds come from
/// group_bounds(). Demand follows each segment's weekly pattern.
Instance build_campus_instance(const std::vector<SegmentProfile>& profiles,
                               const std::vector<std::pair<double, double>>& coordinates,
                               int p, int horizon, double open_cost, double close_cost);

/// Deterministic random instance: Euclidean costs from uniform points, a
/// partition into contiguous groups with bounds from group_bounds(), and
/// demand that repeats with the given period. Same seed, same instance.
/// Always returns an instance that passes validate().
Instance generate_random(std::uint64_t seed, int n_locations, int n_groups,
                         int horizon, int p, int demand_period);

/// The built-in six-segment campus demand profiles.
std::vector<SegmentProfile> campus_profiles();

/// Synthetic coordinates for the 91-building campus layout. These points are
/// generated, not surveyed; they stand in for real building positions.
std::vector<std::pair<double, double>> synthetic_campus_layout();

// --- serialization ---

Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

/// Canonical JSON form. Fixed key order, so writing a canonical file back
/// out reproduces it byte for byte.
std::string instance_to_json(const Instance& inst);

/// Parses instance JSON. "cost" and "demand" may be embedded row arrays or a
/// string path to a CSV matrix, resolved relative to `base_dir`.
Instance instance_from_json(const std::string& text, const std::string& base_dir = "");

Matrix read_matrix_csv(const std::string& path);

}  // namespace dynmedian
