#include "vbs/scenario_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <vector>

#include "vbs/errors.hpp"

namespace vbs {

namespace {

enum class Unit {
  kCount,
  kNumber,
  kPower,
  kFrequency,
  kInstrRate,
  kEnergy,
  kLength,
  kDecibel,
  kNoiseDensity,
  kRatio,
  kArrivalRate,
  kBits,
  kAlpha,
};

struct Scale {
  std::string suffix;
  double factor;
};

const std::map<Unit, std::vector<Scale>>& scale_table() {
  static const std::map<Unit, std::vector<Scale>> table = {
      {Unit::kCount, {{"", 1.0}}},
      {Unit::kNumber, {{"", 1.0}}},
      {Unit::kPower, {{"W", 1.0}, {"mW", 1e-3}, {"kW", 1e3}}},
      {Unit::kFrequency, {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}},
      {Unit::kInstrRate,
       {{"", 1.0}, {"ips", 1.0}, {"Hz", 1.0}, {"MHz", 1e6}, {"GHz", 1e9}}},
      {Unit::kEnergy, {{"J", 1.0}, {"mJ", 1e-3}, {"kJ", 1e3}}},
      {Unit::kLength, {{"m", 1.0}, {"km", 1e3}}},
      {Unit::kDecibel, {{"dB", 1.0}}},
      {Unit::kNoiseDensity, {{"dBm/Hz", 1.0}}},
      {Unit::kRatio, {{"", 1.0}, {"%", 0.01}}},
      {Unit::kArrivalRate, {{"", 1.0}, {"/s", 1.0}, {"1/s", 1.0}}},
      {Unit::kBits,
       {{"bit", 1.0},
        {"kbit", 1e3},
        {"Mbit", 1e6},
        {"B", 8.0},
        {"kB", 8e3},
        {"MB", kBitsPerMegabyte},
        {"GB", 8e9}}},
      {Unit::kAlpha, {{"", 1.0}, {"W", 1.0}}},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& what) {
  raise(ErrorKind::kConfig, what);
}

double parse_number(const std::string& text, std::string& rest) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (t.rfind("inf", 0) == 0 || t.rfind("+inf", 0) == 0) {
    v = std::numeric_limits<double>::infinity();
    rest = trim(t.substr(t[0] == '+' ? 4 : 3));
    return v;
  }
  if (!t.empty() && t[0] == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || !std::isfinite(v))
    config_error("expected a number in '" + t + "'");
  rest = trim(std::string(res.ptr, last));
  return v;
}

double parse_with_unit(Unit unit, const std::string& text) {
  std::string suffix;
  const double v = parse_number(text, suffix);
  for (const Scale& s : scale_table().at(unit))
    if (s.suffix == suffix) return v * s.factor;
  std::string allowed;
  for (const Scale& s : scale_table().at(unit))
    allowed += (allowed.empty() ? "" : ", ") +
               (s.suffix.empty() ? std::string("<none>") : s.suffix);
  config_error("unit '" + suffix + "' not accepted here (allowed: " + allowed +
               ")");
}

std::string show_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

int to_int(double v, const std::string& key) {
  if (v != std::floor(v) || std::abs(v) > 1e9)
    config_error(key + " must be an integer");
  return static_cast<int>(v);
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(ScenarioConfig&, const std::string&)> apply;
  std::function<std::string(const ScenarioConfig&)> show;
};

// A double-valued key stored in SI units and shown in `display` units.
template <typename Get>
Key quantity(const std::string& section, const std::string& name, Unit unit,
             Get field, const std::string& display) {
  double factor = 1.0;
  for (const Scale& s : scale_table().at(unit))
    if (s.suffix == display) factor = s.factor;
  return {section, name,
          [unit, field](ScenarioConfig& c, const std::string& text) {
            field(c) = parse_with_unit(unit, text);
          },
          [field, factor, display](const ScenarioConfig& c) {
            const double v = field(const_cast<ScenarioConfig&>(c));
            return show_number(std::isinf(v) ? v : v / factor) +
                   (display.empty() ? "" : " " + display);
          }};
}

template <typename Get>
Key count(const std::string& section, const std::string& name, Get field) {
  return {section, name,
          [field, name](ScenarioConfig& c, const std::string& text) {
            field(c) = to_int(parse_with_unit(Unit::kCount, text), name);
          },
          [field](const ScenarioConfig& c) {
            return std::to_string(field(const_cast<ScenarioConfig&>(c)));
          }};
}

template <typename Get>
Key counter64(const std::string& section, const std::string& name, Get field) {
  return {section, name,
          [field, name](ScenarioConfig& c, const std::string& text) {
            const std::string t = trim(text);
            std::uint64_t v = 0;
            const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
            if (res.ec != std::errc() || res.ptr != t.data() + t.size())
              config_error(name + " must be a non-negative integer");
            field(c) = v;
          },
          [field](const ScenarioConfig& c) {
            return std::to_string(field(const_cast<ScenarioConfig&>(c)));
          }};
}

const std::vector<Key>& keys() {
  using C = ScenarioConfig;
  static const std::vector<Key> table = {
      {"scenario", "name",
       [](C& c, const std::string& t) { c.name = trim(t); },
       [](const C& c) { return c.name; }},

      count("compute", "n_cores", [](C& c) -> int& { return c.compute.n_cores; }),
      quantity("compute", "cpu_speed", Unit::kInstrRate,
               [](C& c) -> double& { return c.compute.cpu_speed; }, "GHz"),
      quantity("compute", "ref_speed", Unit::kInstrRate,
               [](C& c) -> double& { return c.compute.ref_speed; }, "GHz"),
      quantity("compute", "p_core_max", Unit::kPower,
               [](C& c) -> double& { return c.compute.p_core_max; }, "W"),
      quantity("compute", "p_core_min", Unit::kPower,
               [](C& c) -> double& { return c.compute.p_core_min; }, "W"),
      quantity("compute", "beta", Unit::kNumber,
               [](C& c) -> double& { return c.compute.beta; }, ""),
      quantity("compute", "c0", Unit::kInstrRate,
               [](C& c) -> double& { return c.compute.c0; }, ""),
      quantity("compute", "kappa", Unit::kNumber,
               [](C& c) -> double& { return c.compute.kappa; }, ""),

      quantity("radio", "pa_efficiency", Unit::kRatio,
               [](C& c) -> double& { return c.radio.pa_efficiency; }, "%"),
      quantity("radio", "p_rf", Unit::kPower,
               [](C& c) -> double& { return c.radio.p_rf; }, "W"),
      quantity("radio", "p_sleep", Unit::kPower,
               [](C& c) -> double& { return c.radio.p_sleep; }, "W"),
      quantity("radio", "p_out_max", Unit::kPower,
               [](C& c) -> double& { return c.radio.p_out_max; }, "W"),
      quantity("radio", "bandwidth", Unit::kFrequency,
               [](C& c) -> double& { return c.radio.bandwidth; }, "MHz"),
      quantity("radio", "switch_energy", Unit::kEnergy,
               [](C& c) -> double& { return c.radio.switch_energy; }, "J"),

      quantity("link", "carrier_freq", Unit::kFrequency,
               [](C& c) -> double& { return c.link.carrier_freq_hz; }, "GHz"),
      quantity("link", "cell_radius", Unit::kLength,
               [](C& c) -> double& { return c.link.cell_radius_m; }, "km"),
      quantity("link", "noise_figure", Unit::kDecibel,
               [](C& c) -> double& { return c.link.noise_figure_db; }, "dB"),
      quantity("link", "noise_density", Unit::kNoiseDensity,
               [](C& c) -> double& { return c.link.noise_density_dbm_per_hz; },
               "dBm/Hz"),

      quantity("traffic", "arrival_rate", Unit::kArrivalRate,
               [](C& c) -> double& { return c.traffic.arrival_rate; }, "/s"),
      quantity("traffic", "file_size", Unit::kBits,
               [](C& c) -> double& { return c.traffic.mean_file_size_bits; },
               "MB"),

      {"earth", "enabled",
       [](C& c, const std::string& t) {
         const std::string v = trim(t);
         if (v == "yes" || v == "true" || v == "1")
           c.has_earth = true;
         else if (v == "no" || v == "false" || v == "0")
           c.has_earth = false;
         else
           config_error("earth.enabled must be yes or no");
       },
       [](const C& c) { return std::string(c.has_earth ? "yes" : "no"); }},
      count("earth", "n_trx", [](C& c) -> int& { return c.earth.n_trx; }),
      quantity("earth", "p0", Unit::kPower,
               [](C& c) -> double& { return c.earth.p0; }, "W"),
      quantity("earth", "delta_p", Unit::kNumber,
               [](C& c) -> double& { return c.earth.delta_p; }, ""),
      quantity("earth", "p_sleep", Unit::kPower,
               [](C& c) -> double& { return c.earth.p_sleep; }, "W"),
      quantity("earth", "p_out_max", Unit::kPower,
               [](C& c) -> double& { return c.earth.p_out_max; }, "W"),
      quantity("earth", "switch_energy", Unit::kEnergy,
               [](C& c) -> double& { return c.earth.switch_energy; }, "J"),

      quantity("run", "alpha", Unit::kAlpha,
               [](C& c) -> double& { return c.run.alpha; }, "W"),
      count("run", "cores_max", [](C& c) -> int& { return c.run.cores_max; }),
      counter64("run", "seed", [](C& c) -> std::uint64_t& { return c.run.seed; }),
      counter64("run", "arrivals",
                [](C& c) -> std::uint64_t& { return c.run.arrivals; }),
      quantity("run", "warmup_fraction", Unit::kRatio,
               [](C& c) -> double& { return c.run.warmup_fraction; }, ""),
      count("run", "batches", [](C& c) -> int& { return c.run.batches; }),
      {"run", "size_distribution",
       [](C& c, const std::string& t) {
         c.run.size_distribution = parse_size_distribution(trim(t));
       },
       [](const C& c) { return to_string(c.run.size_distribution); }},
  };
  return table;
}

const Key* find_key(const std::string& section, const std::string& name) {
  for (const Key& k : keys())
    if (k.section == section && k.name == name) return &k;
  return nullptr;
}

}  // namespace

void ScenarioConfig::validate() const {
  scenario().validate();
  if (has_earth) earth.validate();
  require(run.alpha >= 0.0, "alpha must be non-negative");
  require(run.cores_max >= 1, "cores_max must be >= 1");
  require(run.warmup_fraction >= 0.0 && run.warmup_fraction <= 0.5,
          "warmup_fraction must lie in [0, 0.5]");
  require(run.batches >= 2, "batches must be >= 2");
}

Scenario ScenarioConfig::scenario() const {
  LinkInputs li = link;
  li.bandwidth_hz = radio.bandwidth;
  return Scenario{compute, radio, LinkBudget(li), traffic, run.alpha};
}

BusyPowerProfile ScenarioConfig::earth_profile() const {
  if (!has_earth) config_error("scenario has no EARTH baseline section");
  const Scenario sc = scenario();
  return make_earth_profile(earth, sc.gain(), radio.bandwidth);
}

void apply_setting(ScenarioConfig& cfg, const std::string& section,
                   const std::string& key, const std::string& text) {
  const Key* k = find_key(section, key);
  if (k == nullptr) config_error("unknown key " + section + "." + key);
  try {
    k->apply(cfg, text);
  } catch (const ModelError& e) {
    config_error(section + "." + key + ": " + e.what());
  }
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  ScenarioConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error(where() + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      const bool known = std::any_of(keys().begin(), keys().end(),
                                     [&](const Key& k) { return k.section == section; });
      if (!known) config_error(where() + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(where() + "expected key = value");
    if (section.empty()) config_error(where() + "key outside any section");
    const std::string name = trim(line.substr(0, eq));
    const Key* k = find_key(section, name);
    if (k == nullptr)
      config_error(where() + "unknown key '" + name + "' in [" + section + "]");
    if (!seen.insert(section + "." + name).second)
      config_error(where() + "duplicate key " + section + "." + name);
    try {
      k->apply(cfg, line.substr(eq + 1));
    } catch (const ModelError& e) {
      config_error(where() + section + "." + name + ": " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ModelError& e) {
    config_error(source + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

void write_config(std::ostream& out, const ScenarioConfig& cfg) {
  std::string section;
  for (const Key& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.name << " = " << k.show(cfg) << '\n';
  }
}

}  // namespace vbs
