#include "vbs/simulator.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <random>
#include <vector>

#include "vbs/errors.hpp"

namespace vbs {

namespace {

// Stream derivation: SplitMix64 of (seed + k * golden gamma) seeds an
// mt19937_64 per stream; k = 0 inter-arrival times, k = 1 file sizes. Variates
// come from 53-bit uniforms by inversion so no library distribution (whose
// algorithms are implementation defined) is involved.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index)
      : engine_(splitmix64(seed + index * 0x9E3779B97F4A7C15ULL)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
};

double bounded_pareto_mean_factor(double shape, double span) {
  if (std::abs(shape - 1.0) < 1e-12) return std::log(span) / (1.0 - 1.0 / span);
  return shape / (shape - 1.0) * (1.0 - std::pow(span, 1.0 - shape)) /
         (1.0 - std::pow(span, -shape));
}

class SizeSampler {
 public:
  SizeSampler(const SimConfig& cfg, Stream stream)
      : kind_(cfg.size_distribution),
        mean_(cfg.traffic.mean_file_size_bits),
        shape_(cfg.pareto_shape),
        span_(cfg.pareto_span),
        stream_(std::move(stream)) {
    low_ = mean_ / bounded_pareto_mean_factor(shape_, span_);
  }

  double next() {
    switch (kind_) {
      case SizeDistribution::kExponential:
        return stream_.exponential(mean_);
      case SizeDistribution::kDeterministic:
        return mean_;
      case SizeDistribution::kBoundedPareto: {
        const double tail = 1.0 - std::pow(span_, -shape_);
        return low_ * std::pow(1.0 - stream_.uniform() * tail, -1.0 / shape_);
      }
    }
    return mean_;
  }

 private:
  SizeDistribution kind_;
  double mean_;
  double shape_;
  double span_;
  double low_ = 0.0;
  Stream stream_;
};

struct Batch {
  double area_n = 0.0;
  double busy_time = 0.0;
  double energy = 0.0;
  double delay_sum = 0.0;
  std::uint64_t delay_count = 0;
  double cycle_sum = 0.0;
  std::uint64_t cycle_count = 0;
};

struct Flow {
  double finish_tag;
  double arrival_time;
  bool measured;
  bool operator>(const Flow& o) const { return finish_tag > o.finish_tag; }
};

Estimate estimate(const std::vector<double>& values) {
  Estimate e;
  e.batches = static_cast<int>(values.size());
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / (values.size() - 1) / values.size());
  }
  return e;
}

class Run {
 public:
  explicit Run(const SimConfig& cfg)
      : cfg_(cfg),
        busy_power_(cfg.profile.busy_power(cfg.rate_bps)),
        batches_(static_cast<std::size_t>(cfg.n_batches)) {}

  SimStats execute() {
    Stream arrivals(cfg_.rng_seed, 0);
    SizeSampler sizes(cfg_, Stream(cfg_.rng_seed, 1));

    const std::uint64_t n = cfg_.n_arrivals;
    std::vector<double> arrival_times(n);
    double clock = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      clock += arrivals.exponential(1.0 / cfg_.traffic.arrival_rate);
      arrival_times[i] = clock;
    }
    const auto warmup =
        static_cast<std::uint64_t>(cfg_.warmup_fraction * static_cast<double>(n));
    window_start_ = arrival_times[warmup];
    window_end_ = arrival_times[n - 1];
    batch_len_ = (window_end_ - window_start_) / cfg_.n_batches;

    for (std::uint64_t i = 0; i < n; ++i) {
      const double ta = arrival_times[i];
      complete_until(ta);
      advance(ta);
      if (in_system_.empty()) wake(ta);
      const bool measured = ta >= window_start_ && ta < window_end_;
      in_system_.push({virtual_time_ + sizes.next(), ta, measured});
      ++admitted_;
      emit(ta, "arrival");
    }
    stats_.flows_admitted = admitted_;
    stats_.flows_completed = completed_;
    stats_.flows_in_system_at_end = in_system_.size();
    // Drain so every measured flow reports its sojourn time.
    complete_until(std::numeric_limits<double>::infinity());
    return finish();
  }

 private:
  std::size_t batch_of(double t) const {
    auto k = static_cast<std::size_t>((t - window_start_) / batch_len_);
    return k < batches_.size() ? k : batches_.size() - 1;
  }

  bool in_window(double t) const {
    return t >= window_start_ && t < window_end_;
  }

  // Moves the clock to `to`, integrating queue length, busy time and energy
  // over the part of [now_, to] inside the measurement window.
  void advance(double to) {
    const double n = static_cast<double>(in_system_.size());
    const double power = n > 0 ? busy_power_ : cfg_.profile.sleep_power;
    if (to <= window_end_) energy_total_ += power * (to - now_);
    double a = std::max(now_, window_start_);
    const double b = std::min(to, window_end_);
    std::size_t k = a < b ? batch_of(a) : 0;
    while (a < b) {
      const double edge =
          k + 1 == batches_.size()
              ? b
              : std::min(b, window_start_ + static_cast<double>(k + 1) * batch_len_);
      if (edge > a) {
        const double dt = edge - a;
        Batch& bt = batches_[k];
        bt.area_n += n * dt;
        bt.energy += power * dt;
        if (n > 0) {
          bt.busy_time += dt;
          stats_.busy_time_s += dt;
        } else {
          stats_.sleep_time_s += dt;
        }
        window_energy_ += power * dt;
        a = edge;
      }
      if (k + 1 < batches_.size()) ++k;
    }
    if (n > 0) virtual_time_ += (to - now_) * cfg_.rate_bps / n;
    now_ = to;
  }

  void complete_until(double limit) {
    while (!in_system_.empty()) {
      const Flow& head = in_system_.top();
      const double n = static_cast<double>(in_system_.size());
      const double tc =
          now_ + (head.finish_tag - virtual_time_) * n / cfg_.rate_bps;
      if (tc > limit) return;
      const Flow done = head;
      advance(tc);
      virtual_time_ = done.finish_tag;
      in_system_.pop();
      ++completed_;
      if (done.measured) {
        Batch& bt = batches_[batch_of(done.arrival_time)];
        bt.delay_sum += tc - done.arrival_time;
        ++bt.delay_count;
      }
      emit(tc, "departure");
      if (in_system_.empty()) sleep(tc);
    }
  }

  void wake(double t) {
    if (last_wake_ >= 0.0 && in_window(last_wake_)) {
      Batch& bt = batches_[batch_of(last_wake_)];
      bt.cycle_sum += t - last_wake_;
      ++bt.cycle_count;
    }
    last_wake_ = t;
    emit(t, "wake");
  }

  void sleep(double t) {
    virtual_time_ = 0.0;
    const double e = 2.0 * cfg_.profile.switch_energy;
    if (t <= window_end_) energy_total_ += e;
    if (in_window(t)) {
      batches_[batch_of(t)].energy += e;
      window_energy_ += e;
      ++stats_.cycles_observed;
    }
    emit(t, "sleep");
  }

  void emit(double t, const char* event) {
    if (cfg_.trace == nullptr) return;
    *cfg_.trace << t << ',' << event << ',' << in_system_.size() << ','
                << energy_total_ << '\n';
  }

  SimStats finish() {
    std::vector<double> q, d, p, b, c;
    for (const Batch& bt : batches_) {
      q.push_back(bt.area_n / batch_len_);
      p.push_back(bt.energy / batch_len_);
      b.push_back(bt.busy_time / batch_len_);
      if (bt.delay_count > 0) d.push_back(bt.delay_sum / bt.delay_count);
      if (bt.cycle_count > 0) c.push_back(bt.cycle_sum / bt.cycle_count);
    }
    stats_.mean_queue_len = estimate(q);
    stats_.mean_power_w = estimate(p);
    stats_.busy_fraction = estimate(b);
    stats_.mean_delay_s = estimate(d);
    stats_.mean_cycle_s = estimate(c);
    stats_.window_s = window_end_ - window_start_;
    stats_.busy_power_w = busy_power_;
    stats_.total_energy_j = window_energy_;
    return stats_;
  }

  const SimConfig& cfg_;
  double busy_power_;
  std::vector<Batch> batches_;
  std::priority_queue<Flow, std::vector<Flow>, std::greater<>> in_system_;
  double now_ = 0.0;
  double virtual_time_ = 0.0;
  double window_start_ = 0.0;
  double window_end_ = 0.0;
  double batch_len_ = 0.0;
  double last_wake_ = -1.0;
  double energy_total_ = 0.0;
  double window_energy_ = 0.0;
  std::uint64_t admitted_ = 0;
  std::uint64_t completed_ = 0;
  SimStats stats_;
};

}  // namespace

SizeDistribution parse_size_distribution(const std::string& name) {
  if (name == "exponential") return SizeDistribution::kExponential;
  if (name == "deterministic") return SizeDistribution::kDeterministic;
  if (name == "bounded-pareto") return SizeDistribution::kBoundedPareto;
  raise(ErrorKind::kConfig, "unknown size distribution '" + name + "'");
}

std::string to_string(SizeDistribution d) {
  switch (d) {
    case SizeDistribution::kExponential: return "exponential";
    case SizeDistribution::kDeterministic: return "deterministic";
    case SizeDistribution::kBoundedPareto: return "bounded-pareto";
  }
  return "exponential";
}

void SimConfig::validate() const {
  traffic.validate();
  if (!(rate_bps > traffic.offered_bps()))
    raise(ErrorKind::kUnstableQueue,
          "simulated rate must exceed the offered load");
  require(static_cast<bool>(profile.busy_power), "profile has no busy power");
  require(n_arrivals >= 1000, "need at least 1000 arrivals");
  require(warmup_fraction >= 0.0 && warmup_fraction <= 0.5,
          "warmup fraction must lie in [0, 0.5]");
  require(n_batches >= 2, "need at least two batches");
  require(pareto_shape > 0.0 && pareto_span > 1.0,
          "bounded Pareto needs shape > 0 and span > 1");
}

double Estimate::halfwidth(double confidence) const {
  if (batches < 2) return std::numeric_limits<double>::infinity();
  const boost::math::students_t dist(batches - 1);
  const double t = boost::math::quantile(dist, 0.5 + confidence / 2.0);
  return t * std_error;
}

SimStats simulate(const SimConfig& cfg) {
  cfg.validate();
  return Run(cfg).execute();
}

ValidationReport validate_against_analytic(const SimConfig& cfg,
                                           double confidence) {
  ValidationReport rep;
  rep.confidence = confidence;
  rep.stats = simulate(cfg);
  const QueueMetrics m = queue_metrics(cfg.traffic, cfg.rate_bps);
  const double power = average_power(cfg.profile, cfg.traffic, cfg.rate_bps);
  auto check = [&](const char* name, double analytic, const Estimate& est) {
    MetricCheck c;
    c.name = name;
    c.analytic = analytic;
    c.simulated = est.mean;
    c.halfwidth = est.halfwidth(confidence);
    c.inside = std::abs(analytic - est.mean) <= c.halfwidth;
    rep.checks.push_back(c);
  };
  check("mean_queue_len", m.mean_queue_len, rep.stats.mean_queue_len);
  check("mean_delay_s", m.mean_delay, rep.stats.mean_delay_s);
  check("avg_power_w", power, rep.stats.mean_power_w);
  check("rho", m.rho, rep.stats.busy_fraction);
  check("mean_cycle_s", m.mean_cycle, rep.stats.mean_cycle_s);
  rep.passed = true;
  for (const MetricCheck& c : rep.checks) rep.passed = rep.passed && c.inside;
  return rep;
}

}  // namespace vbs
