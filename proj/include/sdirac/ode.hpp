#pragma once

#include <vector>

#include "sdirac/problem.hpp"
#include "sdirac/types.hpp"

namespace sdirac {

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
};

/// Integrates Y' = (-lambda B + B (Q_omega + Q)) Y on the real line, together with the
/// variational system Z' = A Z - B Y for Z = dY/dlambda when with_derivative is set.
///
/// Starts from y0 at x0 and returns the solution at every point of xs, which must be
/// monotone in the direction of integration. Pieces are split at the region boundaries of
/// Q_omega. The path must not contain a singularity. Integrator failures are rethrown as
/// NumericalError naming the segment.
std::vector<Jet2> integrate_system(const ProblemSpec& spec, cplx lambda, double x0, const Jet2& y0,
                                   const std::vector<double>& xs, bool with_derivative,
                                   const OdeOptions& options = {});

/// Single-target convenience wrapper.
Jet2 integrate_to(const ProblemSpec& spec, cplx lambda, double x0, const Jet2& y0, double x1,
                  bool with_derivative, const OdeOptions& options = {});

}  // namespace sdirac
