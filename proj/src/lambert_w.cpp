#include "vbs/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vbs/errors.hpp"

namespace vbs {

namespace {

// 1/e split into a double and its rounding residue, so x + 1/e keeps full
// precision right next to the branch point.
constexpr double kInvEHi = 0.36787944117144233;
constexpr double kInvELo = -1.2428753672788363e-17;
constexpr double kBranchSlack = 1e-15;
constexpr int kMaxIterations = 50;

// Expansion of W0 around -1/e in p = sqrt(2 (e x + 1)).
double branch_series(double p) {
  return -1.0 +
         p * (1.0 +
              p * (-1.0 / 3.0 +
                   p * (11.0 / 72.0 +
                        p * (-43.0 / 540.0 +
                             p * (769.0 / 17280.0 + p * (-221.0 / 8505.0))))));
}

double initial_guess(double x, double p) {
  if (x < -0.25) return branch_series(p);
  if (x > 3.0) {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
  }
  // Winitzki's approximation.
  const double lp = std::log1p(x);
  return lp * (1.0 - std::log1p(lp) / (2.0 + lp));
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) raise(ErrorKind::kDomain, "Lambert W of NaN");
  if (x == std::numeric_limits<double>::infinity()) return x;
  if (x == 0.0) return 0.0;

  const double offset = (x + kInvEHi) + kInvELo;
  if (offset < -kBranchSlack)
    raise(ErrorKind::kDomain,
          "Lambert W0 argument below -1/e: " + std::to_string(x));
  if (offset <= 0.0) return -1.0;

  const double p = std::sqrt(2.0 * std::numbers::e * offset);
  // The series is exact to rounding here, and Halley steps would only add
  // cancellation noise from w e^w - x.
  if (p < 1e-3) return branch_series(p);

  double w = initial_guess(x, p);
  double last_step = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kMaxIterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-15 * std::abs(w) || f == 0.0) return w;
    // Close to -1/e the residual is rounding noise amplified by 1/(w+1);
    // once steps stop shrinking we are at that floor.
    if (std::abs(step) <= 1e-10 * std::abs(w) && std::abs(step) >= last_step) return w;
    last_step = std::abs(step);
  }
  raise(ErrorKind::kNonConvergence,
        "Lambert W0 did not converge for x = " + std::to_string(x));
}

}  // namespace vbs
