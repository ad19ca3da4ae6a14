#pragma once

// The acceptance battery: one deterministic check per criterion, run
// serially or on a worker pool with results merged by index.

#include "cqm/testspace.hpp"

#include <json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace cqm {

struct BatteryConfig {
    std::uint64_t seed = 7;
    double eps = 1e-9;
    SizeGuard guard;
    unsigned jobs = 1;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string summary;
    nlohmann::json details = nlohmann::json::object();
    /// Wall time; kept out of the JSON so reports stay byte-stable.
    double seconds = 0.0;
};

inline constexpr int kCriteria = 13;

/// Runs the selected criteria (all when empty) in id order.
std::vector<CriterionResult> run_battery(const BatteryConfig& config, const std::set<int>& only = {});
CriterionResult run_criterion(int id, const BatteryConfig& config);

nlohmann::json battery_json(const std::vector<CriterionResult>& results, const BatteryConfig& config);

/// Brute-force complement: filter all subsets by |u ∩ a| = 1, keep the maximal ones.
Family complement_oracle(std::size_t n, const Family& family);

}  // namespace cqm
