#include "pseudo_rl/harness/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

const std::vector<std::string>& metrics_columns()
{
    static const std::vector<std::string> cols = {"env_step",        "episodes", "eval_return_mean",
                                                  "eval_return_std", "q_loss",   "policy_loss",
                                                  "alpha",           "epsilon"};
    return cols;
}

namespace {

std::string header_line()
{
    std::string s;
    for (const auto& c : metrics_columns()) s += (s.empty() ? "" : ",") + c;
    return s;
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

bool finite_opt(const std::optional<double>& v) { return !v || std::isfinite(*v); }

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

std::string metrics_header()
{
    return "# schema=" + std::to_string(kMetricsSchema) + "\n" + header_line() + "\n";
}

std::string format_metrics_row(const MetricsRow& r)
{
    return std::to_string(r.env_step) + "," + std::to_string(r.episodes) + "," +
           num(r.eval_return_mean) + "," + num(r.eval_return_std) + "," + opt(r.q_loss) + "," +
           opt(r.policy_loss) + "," + opt(r.alpha) + "," + opt(r.epsilon) + "\n";
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path) : path_(path), out_(path)
{
    if (!out_) throw ConfigError("cannot write metrics file " + path.string());
    out_ << metrics_header();
    out_.flush();
}

void MetricsWriter::append(const MetricsRow& row)
{
    if (last_step_ && row.env_step <= *last_step_) {
        throw ContractError("metrics rows must increase in env_step (" + std::to_string(row.env_step) +
                            " after " + std::to_string(*last_step_) + ")");
    }
    if (!std::isfinite(row.eval_return_mean) || !std::isfinite(row.eval_return_std) ||
        !finite_opt(row.q_loss) || !finite_opt(row.policy_loss) || !finite_opt(row.alpha) ||
        !finite_opt(row.epsilon)) {
        throw NumericError("non-finite metrics entry at env_step " + std::to_string(row.env_step));
    }
    out_ << format_metrics_row(row);
    out_.flush();
    if (!out_) throw IntegrityError("failed writing " + path_.string());
    last_step_ = row.env_step;
}

void MetricsWriter::write_diverged(std::uint64_t env_step, const std::string& what)
{
    out_ << "# diverged env_step=" << env_step << " " << what << "\n";
    out_.flush();
}

MetricsTable read_metrics_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IntegrityError("cannot read metrics file " + path.string());
    const auto fail = [&](const std::string& why) -> IntegrityError {
        return IntegrityError(path.string() + ": " + why);
    };
    std::string line;
    if (!std::getline(in, line) || line != "# schema=" + std::to_string(kMetricsSchema)) {
        throw fail("expected '# schema=" + std::to_string(kMetricsSchema) + "' on the first line");
    }
    if (!std::getline(in, line) || line != header_line()) throw fail("unexpected column header");

    MetricsTable table;
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.rfind("# diverged", 0) == 0) {
            table.diverged = true;
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != metrics_columns().size()) {
            throw fail("line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                       " cells");
        }
        const auto real = [&](const std::string& s) {
            try {
                std::size_t used = 0;
                const double v = std::stod(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                return v;
            } catch (const std::exception&) {
                throw fail("line " + std::to_string(lineno) + ": bad number '" + s + "'");
            }
        };
        const auto maybe = [&](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return real(s);
        };
        MetricsRow r;
        r.env_step = static_cast<std::uint64_t>(real(cells[0]));
        r.episodes = static_cast<std::uint64_t>(real(cells[1]));
        r.eval_return_mean = real(cells[2]);
        r.eval_return_std = real(cells[3]);
        r.q_loss = maybe(cells[4]);
        r.policy_loss = maybe(cells[5]);
        r.alpha = maybe(cells[6]);
        r.epsilon = maybe(cells[7]);
        table.rows.push_back(r);
    }
    return table;
}

} // namespace pseudo_rl
