#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace pseudo_rl {

inline constexpr int kMetricsSchema = 1;

/// One evaluation point. Columns that do not apply to the algorithm stay
/// empty in the CSV.
struct MetricsRow {
    std::uint64_t env_step = 0;
    std::uint64_t episodes = 0;
    double eval_return_mean = 0.0;
    double eval_return_std = 0.0;
    std::optional<double> q_loss;      // mean since the previous row
    std::optional<double> policy_loss; // sac
    std::optional<double> alpha;       // sac
    std::optional<double> epsilon;     // dqn

    friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

const std::vector<std::string>& metrics_columns();

/// "# schema=1" followed by the column header, both newline-terminated.
std::string metrics_header();
std::string format_metrics_row(const MetricsRow& row);

/// Writes the header on open and flushes after every row. Rows must be
/// strictly increasing in env_step with finite entries.
class MetricsWriter {
public:
    explicit MetricsWriter(const std::filesystem::path& path);

    void append(const MetricsRow& row);
    /// Comment row recording why a run stopped.
    void write_diverged(std::uint64_t env_step, const std::string& what);

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::optional<std::uint64_t> last_step_;
};

struct MetricsTable {
    std::vector<MetricsRow> rows;
    bool diverged = false;
};

/// Throws IntegrityError naming the file on a missing schema line, a
/// different header or a malformed row.
MetricsTable read_metrics_csv(const std::filesystem::path& path);

} // namespace pseudo_rl
