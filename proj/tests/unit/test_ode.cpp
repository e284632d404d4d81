#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "sdirac/error.hpp"
#include "sdirac/ode.hpp"

using namespace sdirac;

namespace {

Mat2 expm(const Mat2& a) {
  Eigen::Matrix2cd m;
  m << a.a11, a.a12, a.a21, a.a22;
  const Eigen::Matrix2cd e = m.exp();
  return {e(0, 0), e(0, 1), e(1, 0), e(1, 1)};
}

Mat2 free_S(double x, cplx l) { return {std::cos(l * x), -std::sin(l * x), std::sin(l * x), std::cos(l * x)}; }

}  // namespace

TEST_CASE("free system reproduces rotations and their derivative") {
  const ProblemSpec free;
  for (cplx l : {cplx(1.0, 0.0), cplx(7.5, 0.3), cplx(-20.0, -0.5)}) {
    const std::vector<double> xs{0.4, 1.7, kPi};
    const auto out = integrate_system(free, l, 0.0, Jet2::constant(Mat2::identity()), xs, true);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Mat2 S = free_S(xs[i], l);
      const Mat2 dS{-xs[i] * std::sin(l * xs[i]), -xs[i] * std::cos(l * xs[i]), xs[i] * std::cos(l * xs[i]),
                    -xs[i] * std::sin(l * xs[i])};
      CHECK((out[i].value - S).max_abs() < 1e-9 * S.max_abs());
      CHECK((out[i].deriv - dS).max_abs() < 1e-9 * std::max(1.0, dS.max_abs()));
    }
  }
}

TEST_CASE("constant potential matches the matrix exponential") {
  ProblemSpec p;
  p.potential = Potential::constant(0.3, cplx(0.1, -0.2));
  const cplx l(2.5, 0.4);
  const Mat2 A = (-l) * kB + kB * p.q(0.0);
  for (double x : {0.5, 2.0, kPi}) {
    const Jet2 y = integrate_to(p, l, 0.0, Jet2::constant(Mat2::identity()), x, false);
    const Mat2 ref = expm(x * A);
    CHECK((y.value - ref).max_abs() < 1e-9 * ref.max_abs());
  }
}

TEST_CASE("backward integration inverts forward integration") {
  ProblemSpec p;
  p.potential = Potential::trig(0.3);
  const cplx l(4.0, -0.2);
  const Jet2 f = integrate_to(p, l, 0.2, Jet2::constant(Mat2::identity()), 2.9, true);
  const Jet2 b = integrate_to(p, l, 2.9, f, 0.2, true);
  CHECK((b.value - Mat2::identity()).max_abs() < 1e-9);
  CHECK(b.deriv.max_abs() < 1e-8);
}

TEST_CASE("integration refuses to cross a singularity") {
  ProblemSpec p;
  p.singularities = {{1.0, 0.3, 0.0}};
  CHECK_THROWS_AS(integrate_to(p, 1.0, 0.5, Jet2::constant(Mat2::identity()), 1.5, false), Error);
}
