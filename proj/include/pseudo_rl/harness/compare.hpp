#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pseudo_rl/harness/metrics.hpp"

namespace pseudo_rl {

/// Mean eval return over rows with env_step >= 0.9 * last env_step.
double final_window_mean(const MetricsTable& table);

struct GroupSummary {
    std::vector<std::pair<std::string, std::string>> key; // (config key, value)
    std::vector<std::string> runs;                         // csv paths
    std::vector<double> finals;                            // one per run
    double mean = 0.0;
    double std = 0.0; // sample std over runs, 0 for a single run
};

/// Groups runs by the given config keys (read from config.txt beside each
/// CSV) plus algo. Groups are ordered by algo, repeat, mode, then the
/// remaining keys in the order given; numeric values compare numerically.
std::vector<GroupSummary> compare_runs(const std::vector<std::filesystem::path>& csvs,
                                       const std::vector<std::string>& group_keys);

std::string format_summary_text(const std::vector<GroupSummary>& groups);
std::string format_summary_csv(const std::vector<GroupSummary>& groups);

} // namespace pseudo_rl
