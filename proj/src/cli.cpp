#include "vbs/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#include "vbs/comparison.hpp"
#include "vbs/errors.hpp"
#include "vbs/optimizer.hpp"
#include "vbs/result_row.hpp"
#include "vbs/scenario_file.hpp"
#include "vbs/simulator.hpp"

namespace vbs::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string output_path;
  std::string trace_path;
  bool verbose = false;
  double alpha = 0.0;
  double lambda = 0.0;
  std::string file_size;
  int cores = 0;
  int cores_max = 0;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t arrivals = 0;
  std::string var;
  bool hold_load = false;
  std::string policy = "grid";
  std::string delays = "0.05:5:60:log";

  bool has_rate = false;
  bool has_cores = false;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParameter:
    case ErrorKind::kConfig:
      return kExitUsage;
    default:
      return kExitInfeasible;
  }
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw UsageError("expected a number, got '" + s + "'");
  return v;
}

// Runs fn(i) for i in [0, n) on a few threads; results land by index so the
// output order never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn fn) {
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  if (n < 4 || workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

ResultRow failed_row(const std::string& id, const std::string& command,
                     const ModelError& e) {
  ResultRow row;
  row.scenario_id = id;
  row.command = command;
  row.status = std::string(to_string(e.kind()));
  return row;
}

class Session {
 public:
  Session(ScenarioConfig cfg, Options opts, std::ostream& out,
          std::ostream& err)
      : cfg_(std::move(cfg)), o_(std::move(opts)), out_(out), err_(err) {}

  int power() {
    if (!o_.has_rate) throw UsageError("power needs --rate");
    const TradeoffPoint p =
        evaluate_point(cfg_.scenario(), cfg_.compute.n_cores, o_.rate);
    write_result_header(out_);
    write_result_row(out_, row_from_point(cfg_.name, "power", p));
    return kExitOk;
  }

  int optimize() {
    const JointResult res = joint_optimize(cfg_.scenario(), cfg_.run.cores_max);
    write_result_header(out_);
    write_result_row(out_, row_from_point(cfg_.name, "optimize", res.best));
    if (o_.verbose)
      for (const Candidate& c : res.candidates)
        write_result_row(
            out_, row_from_point(cfg_.name,
                                 c.clamped ? "candidate-clamped" : "candidate",
                                 c.point));
    return kExitOk;
  }

  int sweep() {
    if (o_.var.empty()) throw UsageError("sweep needs --var name=start:stop:steps[:log]");
    const GridSpec spec = parse_grid_spec(o_.var, true);
    static const std::vector<std::string> known = {
        "alpha", "lambda", "file_size", "n_cores", "target_delay"};
    if (std::find(known.begin(), known.end(), spec.variable) == known.end())
      throw UsageError("unknown sweep variable '" + spec.variable +
                       "' (alpha, lambda, file_size, n_cores, target_delay)");
    const std::vector<double> values = spec.values();
    std::vector<ResultRow> rows(values.size());
    parallel_for(values.size(),
                 [&](std::size_t i) { rows[i] = sweep_point(spec, values[i]); });
    write_result_header(out_);
    for (const ResultRow& r : rows) write_result_row(out_, r);
    return kExitOk;
  }

  int compare() {
    if (!cfg_.has_earth)
      raise(ErrorKind::kConfig, "compare needs the [earth] baseline section");
    write_comparison_header(out_);
    if (o_.policy == "cbs-optimal") {
      write_comparison_row(out_, cfg_.name, compare_cbs_optimal(cfg_));
    } else if (o_.policy == "min-power") {
      write_comparison_row(out_, cfg_.name, compare_min_power(cfg_));
    } else if (o_.policy == "grid") {
      const std::vector<double> delays = parse_grid_spec(o_.delays, false).values();
      std::vector<ComparisonRow> rows(delays.size());
      parallel_for(delays.size(), [&](std::size_t i) {
        try {
          rows[i] = compare_at_delay(cfg_, delays[i]);
        } catch (const ModelError& e) {
          rows[i].policy = "grid";
          rows[i].vbs_delay_s = delays[i];
          rows[i].status = std::string(to_string(e.kind()));
        }
      });
      for (const ComparisonRow& r : rows) write_comparison_row(out_, cfg_.name, r);
    } else {
      throw UsageError("unknown --policy '" + o_.policy +
                       "' (grid, cbs-optimal, min-power)");
    }
    return kExitOk;
  }

  int simulate() {
    if (!o_.has_rate) throw UsageError("simulate needs --rate");
    const Scenario sc = cfg_.scenario();
    const int n = cfg_.compute.n_cores;
    evaluate_point(sc, n, o_.rate);  // surfaces infeasibility before running

    SimConfig sim;
    sim.traffic = cfg_.traffic;
    sim.rate_bps = o_.rate;
    sim.profile = sc.with_cores(n).profile();
    sim.size_distribution = cfg_.run.size_distribution;
    sim.n_arrivals = cfg_.run.arrivals;
    sim.warmup_fraction = cfg_.run.warmup_fraction;
    sim.rng_seed = cfg_.run.seed;
    sim.n_batches = cfg_.run.batches;
    std::ofstream trace;
    if (!o_.trace_path.empty()) {
      trace.open(o_.trace_path);
      if (!trace) throw UsageError("cannot open trace file " + o_.trace_path);
      trace.precision(17);
      trace << "time,event,queue_len,energy_j\n";
      sim.trace = &trace;
    }

    const ValidationReport rep = validate_against_analytic(sim, 0.99);
    const SimStats& s = rep.stats;
    ResultRow row;
    row.scenario_id = cfg_.name;
    row.command = "simulate";
    row.rate_bps = o_.rate;
    row.n_cores = n;
    row.rho = s.busy_fraction.mean;
    row.mean_queue_len = s.mean_queue_len.mean;
    row.mean_delay_s = s.mean_delay_s.mean;
    row.avg_power_w = s.mean_power_w.mean;
    row.cost_z = s.mean_power_w.mean + cfg_.run.alpha * s.mean_queue_len.mean;
    row.source = "simulated";
    row.seed = cfg_.run.seed;
    row.status = rep.passed ? "ok" : "validation-failed";
    write_result_header(out_);
    write_result_row(out_, row);
    out_ << "# metric,analytic,simulated,halfwidth99,inside\n";
    for (const MetricCheck& c : rep.checks)
      out_ << "# " << c.name << ',' << format_double(c.analytic) << ','
           << format_double(c.simulated) << ',' << format_double(c.halfwidth)
           << ',' << (c.inside ? "yes" : "no") << '\n';
    out_ << "# cycles," << s.cycles_observed << ",admitted," << s.flows_admitted
         << ",completed," << s.flows_completed << ",in_system,"
         << s.flows_in_system_at_end << '\n';
    if (!rep.passed) {
      err_ << "validation failed: analytic value outside the simulated 99% "
              "interval\n";
      return kExitValidation;
    }
    return kExitOk;
  }

  int config_show() {
    write_config(out_, cfg_);
    return kExitOk;
  }

 private:
  ResultRow sweep_point(const GridSpec& spec, double v) const {
    const std::string id =
        cfg_.name + ":" + spec.variable + "=" + format_double(v);
    try {
      ScenarioConfig c = cfg_;
      const double load = cfg_.traffic.offered_bps();
      if (spec.variable == "alpha") {
        c.run.alpha = v;
      } else if (spec.variable == "lambda") {
        c.traffic.arrival_rate = v;
        if (o_.hold_load) c.traffic.mean_file_size_bits = load / v;
      } else if (spec.variable == "file_size") {
        c.traffic.mean_file_size_bits = v;
        if (o_.hold_load) c.traffic.arrival_rate = load / v;
      } else if (spec.variable == "n_cores") {
        if (v != std::round(v)) raise(ErrorKind::kInvalidParameter, "n_cores must be integral");
        c.compute.n_cores = static_cast<int>(v);
      }
      const Scenario sc = c.scenario();
      sc.validate();
      if (spec.variable == "target_delay") {
        const double r = rate_for_delay(c.traffic, v);
        int n = c.compute.n_cores;
        if (!o_.has_cores) {
          n = cores_for_rate(c.compute, r);
          if (n > c.run.cores_max)
            raise(ErrorKind::kInfeasibleLoad,
                  "rate needs more than " + std::to_string(c.run.cores_max) + " cores");
        }
        return row_from_point(id, "sweep", evaluate_point(sc, n, r));
      }
      if (o_.has_rate)
        return row_from_point(id, "sweep",
                              evaluate_point(sc, c.compute.n_cores, o_.rate));
      return row_from_point(id, "sweep", joint_optimize(sc, c.run.cores_max).best);
    } catch (const ModelError& e) {
      return failed_row(id, "sweep", e);
    }
  }

  ScenarioConfig cfg_;
  Options o_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

std::vector<double> GridSpec::values() const {
  std::vector<double> v;
  if (steps == 1) return {start};
  v.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double f = static_cast<double>(i) / (steps - 1);
    if (i == steps - 1)
      v.push_back(stop);
    else if (log)
      v.push_back(start * std::pow(stop / start, f));
    else
      v.push_back(start + (stop - start) * f);
  }
  return v;
}

GridSpec parse_grid_spec(const std::string& text, bool expect_name) {
  GridSpec g;
  std::string body = text;
  if (expect_name) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("grid spec needs name=start:stop:steps[:log], got '" + text + "'");
    g.variable = text.substr(0, eq);
    body = text.substr(eq + 1);
  }
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto c = body.find(':', pos);
    parts.push_back(body.substr(pos, c - pos));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  if (parts.size() < 3 || parts.size() > 4)
    throw UsageError("grid spec needs start:stop:steps[:log], got '" + body + "'");
  g.start = parse_double(parts[0]);
  g.stop = parse_double(parts[1]);
  const double steps = parse_double(parts[2]);
  if (steps < 1 || steps != std::floor(steps) || steps > 1e7)
    throw UsageError("grid steps must be a positive integer");
  g.steps = static_cast<int>(steps);
  if (parts.size() == 4) {
    if (parts[3] != "log") throw UsageError("grid spacing must be 'log' if given");
    g.log = true;
    if (!(g.start > 0.0 && g.stop > 0.0))
      throw UsageError("log grids need positive bounds");
  }
  return g;
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Energy-delay analysis of a virtual base station", "vbsctl"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path,
                 std::string("scenario file (default: $") + kConfigEnvVar +
                     ", else built-in reference parameters)");
  app.add_option("--output", o.output_path, "write results here instead of stdout");
  app.add_flag("--verbose", o.verbose, "also print candidate points");
  auto* alpha = app.add_option("--alpha", o.alpha, "delay weight, W per queued flow");
  auto* lambda = app.add_option("--lambda", o.lambda, "flow arrival rate, 1/s");
  auto* file_size = app.add_option("--file-size", o.file_size,
                                   "mean file size, e.g. '2 MB' or bits");
  auto* cores = app.add_option("--cores", o.cores, "CPU cores");
  auto* cores_max = app.add_option("--cores-max", o.cores_max, "core limit for searches");
  auto* rate = app.add_option("--rate", o.rate, "data rate, bit/s");
  auto* seed = app.add_option("--seed", o.seed, "simulation seed");
  auto* arrivals = app.add_option("--arrivals", o.arrivals, "simulated arrivals");

  auto* power = app.add_subcommand("power", "evaluate one operating point");
  auto* optimize = app.add_subcommand("optimize", "joint rate / core-count optimum");
  auto* sweep = app.add_subcommand("sweep", "evaluate a one-dimensional grid");
  sweep->add_option("--var", o.var, "name=start:stop:steps[:log]")->required();
  sweep->add_flag("--hold-load", o.hold_load,
                  "keep lambda * file_size fixed while sweeping either");
  auto* compare = app.add_subcommand("compare", "VBS against the EARTH baseline");
  compare->add_option("--policy", o.policy, "grid | cbs-optimal | min-power");
  compare->add_option("--delays", o.delays, "delay grid start:stop:steps[:log]");
  auto* simulate = app.add_subcommand("simulate", "discrete-event cross-check");
  simulate->add_option("--trace", o.trace_path, "per-event trace CSV");
  auto* show = app.add_subcommand("config-show", "print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ScenarioConfig cfg;
    std::string path = o.config_path;
    if (path.empty())
      if (const char* env = std::getenv(kConfigEnvVar)) path = env;
    if (!path.empty()) cfg = load_config(path);

    if (*alpha) cfg.run.alpha = o.alpha;
    if (*lambda) cfg.traffic.arrival_rate = o.lambda;
    if (*file_size) {
      std::string text = o.file_size;
      if (text.find_first_not_of("0123456789.eE+-") == std::string::npos)
        text += " bit";
      apply_setting(cfg, "traffic", "file_size", text);
    }
    if (*cores) cfg.compute.n_cores = o.cores;
    if (*cores_max) cfg.run.cores_max = o.cores_max;
    if (*seed) cfg.run.seed = o.seed;
    if (*arrivals) cfg.run.arrivals = o.arrivals;
    o.has_rate = static_cast<bool>(*rate);
    o.has_cores = static_cast<bool>(*cores);
    cfg.validate();

    std::ofstream file;
    std::ostream* sink = &out;
    if (!o.output_path.empty()) {
      file.open(o.output_path);
      if (!file) throw UsageError("cannot open output file " + o.output_path);
      sink = &file;
    }
    Session session(std::move(cfg), o, *sink, err);
    if (*power) return session.power();
    if (*optimize) return session.optimize();
    if (*sweep) return session.sweep();
    if (*compare) return session.compare();
    if (*simulate) return session.simulate();
    if (*show) return session.config_show();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ModelError& e) {
    err << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace vbs::cli
