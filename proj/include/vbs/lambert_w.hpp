#pragma once

namespace vbs {

/// Principal branch W0 of the Lambert W function: the w >= -1 solving
/// w e^w = x. Arguments up to 1e-15 below -1/e are treated as the branch
/// point; anything lower raises kDomain. Raises kNonConvergence if the Halley
/// refinement has not settled after 50 steps.
double lambert_w0(double x);

}  // namespace vbs
