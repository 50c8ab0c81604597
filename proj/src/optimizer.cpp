#include "vbs/optimizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vbs/errors.hpp"
#include "vbs/lambert_w.hpp"

namespace vbs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvE = 1.0 / std::numbers::e;
constexpr double kStabilityGuard = 1e-9;
constexpr double kTieTolerance = 1e-9;

// Ingredients of the stationarity condition dz/dr = 0 for a busy power of the
// form static + slope r + p_out(r) / effective_pa with sleeping and switching.
struct Stationarity {
  double gain_eff;    // g eta for the VBS, g / delta_p for EARTH
  double p_s;         // static - sleep - 2 lambda E_sw
  double alpha;
  double offered;     // lambda L
  double bandwidth;
};

Stationarity vbs_stationarity(const Scenario& sc, int n_cores) {
  const ComputeParams c = sc.compute.with_cores(n_cores);
  return {sc.gain() * sc.radio.pa_efficiency,
          sleep_adjusted_power(c, sc.radio, sc.traffic), sc.alpha,
          sc.traffic.offered_bps(), sc.link.bandwidth_hz()};
}

double omega_argument(const Stationarity& st, double r) {
  const double ratio = r / (r - st.offered);
  return (st.alpha * st.gain_eff * ratio * ratio + st.gain_eff * st.p_s - 1.0) *
         kInvE;
}

double gap(const Stationarity& st, double r) {
  return lambert_w0(omega_argument(st, r)) -
         (r * std::numbers::ln2 / st.bandwidth - 1.0);
}

// Same sign as -dz/dr everywhere; below the Lambert domain z is increasing.
double descent_sign(const Stationarity& st, double r) {
  if (omega_argument(st, r) < -kInvE) return -1.0;
  return gap(st, r);
}

// Closed-form root when alpha = 0, or NaN when P_s is out of the Lambert
// domain.
double energy_optimal_candidate(const Stationarity& st) {
  const double arg = (st.gain_eff * st.p_s - 1.0) * kInvE;
  if (st.p_s < 0.0 || arg < -kInvE) return std::numeric_limits<double>::quiet_NaN();
  return st.bandwidth / std::numbers::ln2 * (lambert_w0(arg) + 1.0);
}

double bisect_stationary(const Stationarity& st, double floor) {
  double lo = floor;
  if (descent_sign(st, lo) <= 0.0) return lo;
  double hi = st.offered * (1.0 + 1e-6);
  if (hi <= lo) hi = lo * (1.0 + 1e-6);
  int doublings = 0;
  while (descent_sign(st, hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 1100)
      raise(ErrorKind::kNonConvergence, "could not bracket the optimal rate");
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (descent_sign(st, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace

void Scenario::validate() const {
  compute.validate();
  radio.validate();
  traffic.validate();
  require(alpha >= 0.0, "alpha must be non-negative");
  require(std::abs(radio.bandwidth - link.bandwidth_hz()) <=
              1e-12 * link.bandwidth_hz(),
          "radio and link bandwidths disagree");
}

Scenario Scenario::with_cores(int n) const {
  Scenario s = *this;
  s.compute.n_cores = n;
  return s;
}

BusyPowerProfile Scenario::profile() const {
  return make_vbs_profile(compute, radio, gain());
}

TradeoffPoint evaluate_point(const Scenario& sc, int n_cores, double rate_bps) {
  const Scenario s = sc.with_cores(n_cores);
  s.validate();
  const BusyPowerProfile profile = s.profile();
  const QueueMetrics m = queue_metrics(s.traffic, rate_bps);
  TradeoffPoint p;
  p.rate_bps = rate_bps;
  p.n_cores = n_cores;
  p.rho = m.rho;
  p.mean_queue_len = m.mean_queue_len;
  p.mean_delay_s = m.mean_delay;
  p.avg_power_w = average_power(profile, s.traffic, rate_bps);
  p.cost_z = p.avg_power_w + s.alpha * m.mean_queue_len;
  return p;
}

double stability_floor(const TrafficParams& t) {
  return t.offered_bps() * (1.0 + kStabilityGuard);
}

double max_supportable_rate(const ComputeParams& c) {
  const double capacity = c.n_cores * c.cpu_speed;
  if (!(capacity > c.c0))
    raise(ErrorKind::kInfeasibleScenario,
          std::to_string(c.n_cores) +
              " core(s) cannot carry the rate-independent compute load");
  return (capacity - c.c0) / c.kappa;
}

int cores_for_rate(const ComputeParams& c, double rate_bps) {
  const double needed = (c.c0 + c.kappa * rate_bps) / c.cpu_speed;
  const double n = std::ceil(needed * (1.0 - 1e-12));
  if (n > static_cast<double>(std::numeric_limits<int>::max()))
    raise(ErrorKind::kInfeasibleLoad, "rate needs too many cores");
  return n < 1.0 ? 1 : static_cast<int>(n);
}

double optimality_gap(const Scenario& sc, double rate_bps) {
  sc.validate();
  if (!(rate_bps > sc.traffic.offered_bps()))
    raise(ErrorKind::kUnstableQueue, "optimality gap needs r > lambda L");
  const Stationarity st = vbs_stationarity(sc, sc.compute.n_cores);
  if (omega_argument(st, rate_bps) < -kInvE - 1e-15)
    raise(ErrorKind::kDomain,
          "no interior stationary point: Lambert argument below -1/e at r = " +
              std::to_string(rate_bps));
  return gap(st, rate_bps);
}

ExistenceReport energy_optimal_exists(const Scenario& sc, int n_cores) {
  sc.validate();
  const ComputeParams c = sc.compute.with_cores(n_cores);
  const double headroom = static_power(c, sc.radio) - sc.radio.p_sleep;
  const double lambda = sc.traffic.arrival_rate;
  ExistenceReport rep;
  if (sc.radio.switch_energy > 0.0)
    rep.arrival_rate_bound = headroom / (2.0 * sc.radio.switch_energy);
  else
    rep.arrival_rate_bound = headroom > 0.0 ? kInf : -kInf;
  rep.file_size_bound = std::numeric_limits<double>::quiet_NaN();

  if (!(lambda < rep.arrival_rate_bound)) {
    rep.reason = "arrival rate " + std::to_string(lambda) +
                 " /s is not below the switching bound " +
                 std::to_string(rep.arrival_rate_bound) + " /s";
    return rep;
  }
  const double r_e = energy_optimal_candidate(vbs_stationarity(sc, n_cores));
  rep.file_size_bound = r_e / lambda;
  if (!(sc.traffic.mean_file_size_bits < rep.file_size_bound)) {
    rep.reason = "file size " + std::to_string(sc.traffic.mean_file_size_bits) +
                 " bit is not below the bound " +
                 std::to_string(rep.file_size_bound) + " bit";
    return rep;
  }
  rep.exists = true;
  rep.reason = "both conditions hold";
  return rep;
}

double energy_optimal_rate(const Scenario& sc, int n_cores) {
  const ExistenceReport rep = energy_optimal_exists(sc, n_cores);
  if (!rep.exists) raise(ErrorKind::kNoEnergyOptimum, rep.reason);
  return energy_optimal_candidate(vbs_stationarity(sc, n_cores));
}

double asymptotic_power(const Scenario& sc, int n_cores) {
  sc.validate();
  const ComputeParams c = sc.compute.with_cores(n_cores);
  const double offered = sc.traffic.offered_bps();
  return static_power(c, sc.radio) + bbu_rate_slope(c) * offered +
         pout_for_rate(sc.gain(), sc.link.bandwidth_hz(), offered) /
             sc.radio.pa_efficiency;
}

double profile_energy_optimal_rate(const BusyPowerProfile& profile,
                                   double gain, double bandwidth_hz,
                                   const TrafficParams& t) {
  t.validate();
  require(profile.affine.has_value(),
          "closed-form optimum needs an affine busy power profile");
  const AffineBusyForm& f = *profile.affine;
  const Stationarity st{gain / f.drive_factor,
                        f.static_w - profile.sleep_power -
                            2.0 * t.arrival_rate * profile.switch_energy,
                        0.0, t.offered_bps(), bandwidth_hz};
  const double r = energy_optimal_candidate(st);
  if (!(r > t.offered_bps()))
    raise(ErrorKind::kNoEnergyOptimum,
          "average power of profile '" + profile.name +
              "' has no interior minimum");
  return r;
}

double solve_optimal_rate(const Scenario& sc, int n_cores) {
  sc.validate();
  if (sc.alpha == 0.0) return energy_optimal_rate(sc, n_cores);
  const Stationarity st = vbs_stationarity(sc, n_cores);
  return bisect_stationary(st, stability_floor(sc.traffic));
}

double unconstrained_argmin_rate(const Scenario& sc, int n_cores) {
  sc.validate();
  if (sc.alpha > 0.0) return solve_optimal_rate(sc, n_cores);
  if (energy_optimal_exists(sc, n_cores).exists)
    return energy_optimal_rate(sc, n_cores);
  return stability_floor(sc.traffic);
}

JointResult joint_optimize(const Scenario& sc, int n_cores_max) {
  require(n_cores_max >= 1, "n_cores_max must be >= 1");
  sc.validate();
  const double floor = stability_floor(sc.traffic);
  JointResult result;
  for (int n = 1; n <= n_cores_max; ++n) {
    const ComputeParams c = sc.compute.with_cores(n);
    if (!(n * c.cpu_speed > c.c0)) continue;
    const double r_max = max_supportable_rate(c);
    // No stable operating point on this many cores.
    if (r_max < floor) continue;
    const double r_hat = unconstrained_argmin_rate(sc, n);
    if (r_hat <= r_max) {
      result.candidates.push_back({evaluate_point(sc, n, r_hat), false});
      break;
    }
    result.candidates.push_back({evaluate_point(sc, n, r_max), true});
  }
  if (result.candidates.empty())
    raise(ErrorKind::kInfeasibleScenario,
          "no core count up to " + std::to_string(n_cores_max) +
              " supports a stable rate");

  const TradeoffPoint* best = &result.candidates.front().point;
  for (const Candidate& cand : result.candidates) {
    const double z = cand.point.cost_z;
    if (z < best->cost_z - kTieTolerance * std::abs(best->cost_z))
      best = &cand.point;
  }
  result.best = *best;
  return result;
}

double rate_for_delay(const TrafficParams& t, double delay_s) {
  require(delay_s > 0.0, "target delay must be positive");
  return t.offered_bps() + t.mean_file_size_bits / delay_s;
}

std::vector<CurvePoint> tradeoff_curve(const Scenario& sc,
                                       std::optional<int> n_cores,
                                       std::span<const double> delays_s,
                                       int n_cores_max) {
  sc.validate();
  std::vector<CurvePoint> out;
  out.reserve(delays_s.size());
  for (const double d : delays_s) {
    CurvePoint cp;
    cp.target_delay_s = d;
    try {
      const double r = rate_for_delay(sc.traffic, d);
      int n = n_cores.value_or(0);
      if (!n_cores) {
        n = cores_for_rate(sc.compute, r);
        if (n > n_cores_max)
          raise(ErrorKind::kInfeasibleLoad,
                "rate needs more than " + std::to_string(n_cores_max) +
                    " cores");
      }
      cp.point = evaluate_point(sc, n, r);
    } catch (const ModelError& e) {
      cp.status = std::string(to_string(e.kind()));
    }
    out.push_back(std::move(cp));
  }
  return out;
}

}  // namespace vbs
