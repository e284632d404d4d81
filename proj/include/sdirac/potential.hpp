#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "sdirac/types.hpp"

namespace sdirac {

/// Pair (q1, q2) defining Q = [[q1, q2], [q2, -q1]].
struct PotentialValue {
  cplx q1{}, q2{};
  Mat2 matrix() const { return {q1, q2, q2, -q1}; }
};

struct ZeroPotential {};

struct ConstantPotential {
  cplx q1{}, q2{};
};

/// q1 = A sin(w x + p), q2 = A cos(w x + p).
struct TrigPotential {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
};

/// Uniformly sampled q1, q2 on [x0, x0 + (n-1) h], interpolated by cubic B-splines.
class SampledPotential {
 public:
  SampledPotential(double x0, double step, std::vector<cplx> q1, std::vector<cplx> q2);

  PotentialValue at(double x) const;
  double x0() const { return x0_; }
  double step() const { return step_; }
  const std::vector<cplx>& q1() const { return q1_; }
  const std::vector<cplx>& q2() const { return q2_; }

 private:
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  double x0_, step_;
  std::vector<cplx> q1_, q2_;
  std::vector<Spline> splines_;  // re q1, im q1, re q2, im q2
};

/// Regular part Q(x) of the potential, chosen from a small registry of shapes.
class Potential {
 public:
  using Variant = std::variant<ZeroPotential, ConstantPotential, TrigPotential, SampledPotential>;

  Potential() = default;
  Potential(Variant v) : impl_(std::move(v)) {}  // NOLINT(google-explicit-constructor)

  static Potential zero() { return {ZeroPotential{}}; }
  static Potential constant(cplx q1, cplx q2) { return {ConstantPotential{q1, q2}}; }
  static Potential trig(double amplitude, double frequency = 1.0, double phase = 0.0) {
    return {TrigPotential{amplitude, frequency, phase}};
  }

  const Variant& variant() const { return impl_; }
  std::string kind() const;
  bool is_zero() const { return std::holds_alternative<ZeroPotential>(impl_); }

  PotentialValue at(double x) const;
  Mat2 matrix(double x) const { return at(x).matrix(); }

  /// Value at complex x for closed-form shapes; empty for sampled data.
  std::optional<PotentialValue> at_complex(cplx x) const;

  /// Taylor coefficients Q_n of Q(center + t) = sum_n Q_n t^n, n < order.
  ///
  /// Closed forms are expanded exactly; sampled data are Chebyshev-fitted on
  /// [center - radius, center + radius] first.
  std::vector<Mat2> taylor(double center, double radius, int order) const;

 private:
  Variant impl_{ZeroPotential{}};
};

}  // namespace sdirac
