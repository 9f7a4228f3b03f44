#include "pseudo_rl/harness/compare.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "pseudo_rl/core/errors.hpp"
#include "pseudo_rl/harness/run_config.hpp"

namespace pseudo_rl {

double final_window_mean(const MetricsTable& table)
{
    if (table.rows.empty()) throw InsufficientDataError("metrics table has no rows");
    const double cutoff = 0.9 * static_cast<double>(table.rows.back().env_step);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : table.rows) {
        if (static_cast<double>(r.env_step) >= cutoff) {
            sum += r.eval_return_mean;
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

namespace {

std::map<std::string, std::string> read_run_config(const std::filesystem::path& csv)
{
    const auto path = csv.parent_path() / "config.txt";
    std::ifstream in(path);
    if (!in) throw IntegrityError(csv.string() + ": no config.txt beside it");
    std::stringstream ss;
    ss << in.rdbuf();
    std::map<std::string, std::string> out;
    for (auto& [k, v] : parse_key_values(ss.str(), path.string())) out[k] = v;
    return out;
}

std::vector<std::string> ordered_keys(const std::vector<std::string>& requested)
{
    std::vector<std::string> keys;
    for (const char* k : {"algo", "repeat", "mode"}) {
        if (std::string(k) == "algo" || std::ranges::find(requested, k) != requested.end()) {
            keys.emplace_back(k);
        }
    }
    for (const auto& k : requested)
        if (std::ranges::find(keys, k) == keys.end()) keys.push_back(k);
    return keys;
}

bool as_number(const std::string& s, double& out)
{
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool value_less(const std::string& a, const std::string& b)
{
    double x = 0.0;
    double y = 0.0;
    if (as_number(a, x) && as_number(b, y) && x != y) return x < y;
    return a < b;
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::vector<GroupSummary> compare_runs(const std::vector<std::filesystem::path>& csvs,
                                       const std::vector<std::string>& group_keys)
{
    if (csvs.empty()) throw ConfigError("compare: no metrics files given");
    const auto& known = config_keys();
    for (const auto& k : group_keys) {
        if (std::ranges::find(known, k) == known.end()) {
            throw ConfigError("compare: unknown grouping key '" + k + "'");
        }
    }
    const auto keys = ordered_keys(group_keys);

    std::vector<GroupSummary> groups;
    for (const auto& csv : csvs) {
        const auto table = read_metrics_csv(csv);
        if (table.rows.empty()) throw IntegrityError(csv.string() + ": no metrics rows");
        const auto cfg = read_run_config(csv);
        GroupSummary probe;
        for (const auto& k : keys) {
            const auto it = cfg.find(k);
            if (it == cfg.end()) throw IntegrityError(csv.string() + ": config lacks key '" + k + "'");
            probe.key.emplace_back(k, it->second);
        }
        auto g = std::ranges::find_if(groups, [&](const GroupSummary& x) { return x.key == probe.key; });
        if (g == groups.end()) {
            groups.push_back(std::move(probe));
            g = groups.end() - 1;
        }
        g->runs.push_back(csv.string());
        g->finals.push_back(final_window_mean(table));
    }

    for (auto& g : groups) {
        const double n = static_cast<double>(g.finals.size());
        for (double v : g.finals) g.mean += v;
        g.mean /= n;
        if (g.finals.size() > 1) {
            double ss = 0.0;
            for (double v : g.finals) ss += (v - g.mean) * (v - g.mean);
            g.std = std::sqrt(ss / (n - 1.0));
        }
    }
    std::ranges::stable_sort(groups, [](const GroupSummary& a, const GroupSummary& b) {
        for (std::size_t i = 0; i < a.key.size(); ++i) {
            if (a.key[i].second == b.key[i].second) continue;
            return value_less(a.key[i].second, b.key[i].second);
        }
        return false;
    });
    return groups;
}

std::string format_summary_text(const std::vector<GroupSummary>& groups)
{
    std::string out;
    for (const auto& g : groups) {
        std::string label;
        for (const auto& [k, v] : g.key) label += (label.empty() ? "" : " ") + k + "=" + v;
        out += label + "  runs=" + std::to_string(g.runs.size()) + "  final=" + num(g.mean) +
               " +/- " + num(g.std) + "\n";
    }
    return out;
}

std::string format_summary_csv(const std::vector<GroupSummary>& groups)
{
    if (groups.empty()) return {};
    std::string out;
    for (const auto& [k, v] : groups.front().key) out += k + ",";
    out += "runs,final_mean,final_std\n";
    for (const auto& g : groups) {
        for (const auto& [k, v] : g.key) out += v + ",";
        out += std::to_string(g.runs.size()) + "," + num(g.mean) + "," + num(g.std) + "\n";
    }
    return out;
}

} // namespace pseudo_rl
