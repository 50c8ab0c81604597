#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vbs {

enum class ErrorKind {
  kInvalidParameter,
  kInfeasibleLoad,
  kCapExceeded,
  kUnstableQueue,
  kDomain,
  kNoEnergyOptimum,
  kNonConvergence,
  kInfeasibleScenario,
  kConfig,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the model library carries a kind so the CLI can map
// it onto an exit code without string matching.
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

inline void require(bool cond, const std::string& what) {
  if (!cond) raise(ErrorKind::kInvalidParameter, what);
}

}  // namespace vbs
