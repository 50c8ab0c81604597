#include "vbs/result_row.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "vbs/errors.hpp"

namespace vbs {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> read_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    raise(ErrorKind::kConfig, "bad number '" + s + "' in result CSV");
  return v;
}

template <typename T>
void put(std::ostream& out, const std::optional<T>& v) {
  if (!v) return;
  if constexpr (std::is_floating_point_v<T>)
    out << format_double(*v);
  else
    out << *v;
}

}  // namespace

ResultRow row_from_point(const std::string& scenario_id,
                         const std::string& command, const TradeoffPoint& p) {
  ResultRow r;
  r.scenario_id = scenario_id;
  r.command = command;
  r.rate_bps = p.rate_bps;
  r.n_cores = p.n_cores;
  r.rho = p.rho;
  r.mean_queue_len = p.mean_queue_len;
  r.mean_delay_s = p.mean_delay_s;
  r.avg_power_w = p.avg_power_w;
  r.cost_z = p.cost_z;
  return r;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_result_header(std::ostream& out) {
  for (std::size_t i = 0; i < kResultColumns.size(); ++i)
    out << (i ? "," : "") << kResultColumns[i];
  out << '\n';
}

void write_result_row(std::ostream& out, const ResultRow& row) {
  out << row.scenario_id << ',' << row.command << ',';
  put(out, row.rate_bps);
  out << ',';
  put(out, row.n_cores);
  out << ',';
  put(out, row.rho);
  out << ',';
  put(out, row.mean_queue_len);
  out << ',';
  put(out, row.mean_delay_s);
  out << ',';
  put(out, row.avg_power_w);
  out << ',';
  put(out, row.cost_z);
  out << ',' << row.source << ',';
  put(out, row.seed);
  out << ',' << row.status << '\n';
}

std::vector<ResultRow> read_result_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (!header_seen) {
      bool ok = cells.size() == kResultColumns.size();
      for (std::size_t i = 0; ok && i < cells.size(); ++i)
        ok = cells[i] == kResultColumns[i];
      if (!ok) raise(ErrorKind::kConfig, "unexpected result CSV header: " + line);
      header_seen = true;
      continue;
    }
    if (cells.size() != kResultColumns.size())
      raise(ErrorKind::kConfig, "result CSV row has wrong arity: " + line);
    ResultRow r;
    r.scenario_id = cells[0];
    r.command = cells[1];
    r.rate_bps = read_double(cells[2]);
    if (auto n = read_double(cells[3])) r.n_cores = static_cast<int>(*n);
    r.rho = read_double(cells[4]);
    r.mean_queue_len = read_double(cells[5]);
    r.mean_delay_s = read_double(cells[6]);
    r.avg_power_w = read_double(cells[7]);
    r.cost_z = read_double(cells[8]);
    r.source = cells[9];
    if (!cells[10].empty()) r.seed = std::stoull(cells[10]);
    r.status = cells[11];
    rows.push_back(std::move(r));
  }
  if (!header_seen) raise(ErrorKind::kConfig, "result CSV has no header");
  return rows;
}

}  // namespace vbs
