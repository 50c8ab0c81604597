#include "vbs/errors.hpp"

namespace vbs {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kInfeasibleLoad: return "infeasible-load";
    case ErrorKind::kCapExceeded: return "cap-exceeded";
    case ErrorKind::kUnstableQueue: return "unstable-queue";
    case ErrorKind::kDomain: return "domain-error";
    case ErrorKind::kNoEnergyOptimum: return "no-energy-optimum";
    case ErrorKind::kNonConvergence: return "non-convergence";
    case ErrorKind::kInfeasibleScenario: return "infeasible-scenario";
    case ErrorKind::kConfig: return "config-error";
  }
  return "unknown";
}

void raise(ErrorKind kind, const std::string& what) {
  throw ModelError(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace vbs
