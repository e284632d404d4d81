#pragma once

#include <functional>

#include "sdirac/types.hpp"

namespace sdirac {

using ScalarFn = std::function<cplx(cplx)>;

/// Change of arg f along the straight segment z0 -> z1.
///
/// The segment is cut into pieces of length <= max_piece and bisected until every
/// sub-step turns the argument by less than pi/4. min_scaled receives the smallest
/// |f(z)| e^{-pi |Im z|} seen, so callers can detect zeros close to the path.
/// Throws NumericalError when f vanishes on the path or bisection runs out of depth.
double arg_increment(const ScalarFn& f, cplx z0, cplx z1, double max_piece = 0.25, double* min_scaled = nullptr);

/// Winding number of f around [re0, re1] x [im0, im1], i.e. the number of zeros inside
/// for analytic f. Throws when the contour sum is not close to an integer.
int count_zeros(const ScalarFn& f, double re0, double re1, double im0, double im1, double max_piece = 0.25);

}  // namespace sdirac
