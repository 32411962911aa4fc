#pragma once

#include "gbary/annealing.hpp"
#include "gbary/multiscale.hpp"
#include "gbary/oracle.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gbary {

inline constexpr std::string_view kReportSchema = "gbary-report/1";

/// Shortest round-trip decimal form.
std::string format_double(double value);

/// Ordered `key=value` lines, headed by the schema and report kind.
class KeyValueReport
{
public:
    explicit KeyValueReport(std::string_view kind);

    void put(std::string_view key, std::string_view value);
    void put(std::string_view key, const char* value) { put(key, std::string_view(value)); }
    void put(std::string_view key, const std::string& value) { put(key, std::string_view(value)); }
    void put(std::string_view key, double value);
    void put(std::string_view key, std::uint64_t value);
    void put(std::string_view key, bool value) { put(key, std::string_view(value ? "true" : "false")); }

    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
    void write(std::ostream& out) const;
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

void add_schedule(KeyValueReport& r, std::string_view prefix, const ScheduleConfig& s);
void add_estimation(KeyValueReport& r, std::string_view prefix, const EstimationReport& e, bool timing);
void add_multiscale(KeyValueReport& r, const MultiscaleReport& m, bool timing);
/// `md_scale` divides the MD figure for display; the raw value is always written too.
void add_bench(KeyValueReport& r, const MetricGraph& g, const BenchResult& b, double md_scale, bool timing);

/// One line per run: `run seed returned success [wall_seconds]`.
void write_run_records(std::ostream& out, const MetricGraph& g, const BenchResult& b, bool timing);

} // namespace gbary
