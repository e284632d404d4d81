#include "sdirac/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdirac/error.hpp"

namespace sdirac {

namespace {

constexpr int kMaxDepth = 30;

double scaled(cplx z, cplx fz) { return std::abs(fz) * std::exp(-kPi * std::abs(z.imag())); }

double increment(const ScalarFn& f, cplx z0, cplx z1, cplx f0, cplx f1, int depth, double& min_scaled) {
  const cplx zm = 0.5 * (z0 + z1);
  const cplx fm = f(zm);
  if (fm == cplx{}) throw NumericalError("arg_increment: function vanishes on the contour");
  min_scaled = std::min(min_scaled, scaled(zm, fm));
  const double d1 = std::arg(fm / f0), d2 = std::arg(f1 / fm);
  if (std::abs(d1) < 0.25 * kPi && std::abs(d2) < 0.25 * kPi) return d1 + d2;
  if (depth >= kMaxDepth) {
    std::ostringstream msg;
    msg << "arg_increment: unresolved argument change near " << zm;
    throw NumericalError(msg.str());
  }
  return increment(f, z0, zm, f0, fm, depth + 1, min_scaled) + increment(f, zm, z1, fm, f1, depth + 1, min_scaled);
}

}  // namespace

double arg_increment(const ScalarFn& f, cplx z0, cplx z1, double max_piece, double* min_scaled) {
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(z1 - z0) / max_piece)));
  double lowest = std::numeric_limits<double>::infinity();
  double total = 0.0;
  cplx za = z0, fa = f(z0);
  if (fa == cplx{}) throw NumericalError("arg_increment: function vanishes on the contour");
  lowest = std::min(lowest, scaled(za, fa));
  for (int i = 1; i <= pieces; ++i) {
    const cplx zb = i == pieces ? z1 : z0 + (z1 - z0) * (static_cast<double>(i) / pieces);
    const cplx fb = f(zb);
    if (fb == cplx{}) throw NumericalError("arg_increment: function vanishes on the contour");
    lowest = std::min(lowest, scaled(zb, fb));
    total += increment(f, za, zb, fa, fb, 0, lowest);
    za = zb;
    fa = fb;
  }
  if (min_scaled) *min_scaled = lowest;
  return total;
}

int count_zeros(const ScalarFn& f, double re0, double re1, double im0, double im1, double max_piece) {
  const cplx a{re0, im0}, b{re1, im0}, c{re1, im1}, d{re0, im1};
  const double total = arg_increment(f, a, b, max_piece) + arg_increment(f, b, c, max_piece) +
                       arg_increment(f, c, d, max_piece) + arg_increment(f, d, a, max_piece);
  const double winding = total / (2.0 * kPi);
  const double rounded = std::round(winding);
  if (std::abs(winding - rounded) > 0.1) {
    std::ostringstream msg;
    msg << "count_zeros: non-integer winding " << winding << " on [" << re0 << ", " << re1 << "] x [" << im0
        << ", " << im1 << "]";
    throw NumericalError(msg.str());
  }
  return static_cast<int>(rounded);
}

}  // namespace sdirac
