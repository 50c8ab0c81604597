#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vbs/optimizer.hpp"

namespace vbs {

/// One CSV output line. Optional numeric fields are written empty, which is
/// how infeasible sweep points are reported; `status` names the failure.
struct ResultRow {
  std::string scenario_id;
  std::string command;
  std::optional<double> rate_bps;
  std::optional<int> n_cores;
  std::optional<double> rho;
  std::optional<double> mean_queue_len;
  std::optional<double> mean_delay_s;
  std::optional<double> avg_power_w;
  std::optional<double> cost_z;
  std::string source = "analytic";
  std::optional<std::uint64_t> seed;
  std::string status = "ok";
};

inline constexpr std::array<std::string_view, 12> kResultColumns = {
    "scenario_id", "command",      "rate_bps",    "n_cores",
    "rho",         "mean_queue_len", "mean_delay_s", "avg_power_w",
    "cost_z",      "source",       "seed",        "status"};

ResultRow row_from_point(const std::string& scenario_id,
                         const std::string& command, const TradeoffPoint& p);

/// Shortest representation that reads back to the same double.
std::string format_double(double v);

void write_result_header(std::ostream& out);
void write_result_row(std::ostream& out, const ResultRow& row);

/// Reads CSV produced by write_result_*; lines starting with '#' are skipped.
/// Raises kConfig if the header differs from kResultColumns.
std::vector<ResultRow> read_result_csv(std::istream& in);

}  // namespace vbs
