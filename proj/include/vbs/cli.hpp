#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vbs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitValidation = 4;

/// Environment variable naming the config file used when --config is absent.
inline constexpr const char* kConfigEnvVar = "VBS_CONFIG";

/// "start:stop:steps[:log]", optionally prefixed by "name=".
struct GridSpec {
  std::string variable;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
  bool log = false;

  std::vector<double> values() const;
};

GridSpec parse_grid_spec(const std::string& text, bool expect_name);

/// Entry point shared by the vbsctl binary and the tests. Returns the process
/// exit code; never throws.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace vbs::cli
