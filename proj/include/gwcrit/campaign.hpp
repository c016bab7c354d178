#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gwcrit {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct CampaignConfig {
    std::string out_dir = "reports";
    std::uint64_t seed = 42;
    std::uint64_t reps = 1'000'000;
    std::uint32_t workers = 0;
    std::uint64_t n_long = 1'000'000;  // scalar-trace ceiling (criteria 2,3,6)
    bool run_montecarlo = true;
};

struct CampaignSummary {
    std::vector<CriterionResult> criteria;
    std::vector<std::string> artifacts;  // files written under out_dir
    bool all_pass = false;
};

/// Runs the full validation battery over the two built-in families, writes one
/// CSV/JSON artifact per check plus summary.json, and evaluates every
/// acceptance criterion at its pinned tolerance.
CampaignSummary run_campaign(const CampaignConfig& cfg);

}  // namespace gwcrit
