#include "sdirac/frobenius.hpp"

#include <cmath>
#include <string>

#include "sdirac/error.hpp"

namespace sdirac {

namespace {

constexpr double kResonanceGuard = 1e-10;
constexpr double kMinRadius = 0.02;
constexpr double kLambdaRadiusScale = 6.0;

// Solves (s I - J) c = rhs for J = mu [[c2e, -s2e], [-s2e, -c2e]].
Vec2 solve_shifted(cplx s, const Mat2& J, const Vec2& rhs) {
  const Mat2 m{s - J.a11, -J.a12, -J.a21, s - J.a22};
  return m.inverse() * rhs;
}

// Scaled tail size: the last two terms relative to the largest one.
double tail_ratio(const std::vector<Vec2>& c, double r) {
  double peak = 0.0, tail = 0.0, rp = 1.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double term = c[i].norm_inf() * rp;
    peak = std::max(peak, term);
    if (i + 2 >= n) tail = std::max(tail, term);
    rp *= r;
  }
  return peak == 0.0 ? 0.0 : tail / peak;
}

struct Column {
  std::vector<Vec2> c, dc;
};

Column solve_column(cplx rho, const Vec2& lead, const Mat2& J, const std::vector<Mat2>& A, int order) {
  Column col;
  col.c.reserve(static_cast<std::size_t>(order));
  col.dc.reserve(static_cast<std::size_t>(order));
  col.c.push_back(lead);
  col.dc.push_back(Vec2{});
  for (int n = 1; n < order; ++n) {
    Vec2 rhs{}, drhs{};
    for (int m = 0; m < n; ++m) {
      rhs += A[m] * col.c[n - 1 - m];
      drhs += A[m] * col.dc[n - 1 - m];
    }
    drhs = drhs - kB * col.c[n - 1];  // d(A_0)/d lambda = -B
    const cplx s = rho + static_cast<double>(n);
    col.c.push_back(solve_shifted(s, J, rhs));
    col.dc.push_back(solve_shifted(s, J, drhs));
  }
  return col;
}

void check_resonance(cplx mu, int order, std::size_t k) {
  // det(((n - mu) I - J)) = n (n - 2 mu); the +mu column never degenerates.
  for (int n = 1; n < order; ++n)
    if (std::abs(static_cast<double>(n) - 2.0 * mu) < kResonanceGuard)
      throw NumericalError("build_frobenius_basis: resonant exponent at singularity " + std::to_string(k) +
                           " (2 mu = " + std::to_string(n) + ")");
}

}  // namespace

double handoff_radius(const ProblemSpec& spec, std::size_t k, cplx lambda) {
  const double g = spec.singularity(k).gamma;
  const double left = k == 0 ? 0.0 : spec.singularity(k - 1).gamma;
  const double right = k + 1 == spec.size() ? kPi : spec.singularity(k + 1).gamma;
  double r = std::min(0.4 * std::min(g - left, right - g), 0.2);
  const double scale = std::abs(lambda);
  if (scale > 0.0) r = std::min(r, std::max(kLambdaRadiusScale / scale, kMinRadius));
  return r;
}

cplx branch_power(double x, double gamma, cplx mu) {
  const double t = x - gamma;
  if (t == 0.0) throw ValidationError("branch_power: evaluation at singularity");
  const cplx mag = std::exp(mu * std::log(std::abs(t)));
  return t > 0.0 ? mag : std::exp(kI * kPi * mu) * mag;
}

FrobeniusBasis build_frobenius_basis(const ProblemSpec& spec, std::size_t k, cplx lambda, int order) {
  return build_frobenius_basis(spec, k, lambda, order, handoff_radius(spec, k, lambda));
}

FrobeniusBasis build_frobenius_basis(const ProblemSpec& spec, std::size_t k, cplx lambda, int order,
                                     double radius) {
  const Singularity& s = spec.singularity(k);
  FrobeniusBasis basis;
  basis.k = k;
  basis.gamma = s.gamma;
  basis.mu = s.mu;
  basis.eta = s.eta;
  basis.lambda = lambda;
  basis.radius = radius;

  const double c = std::cos(2.0 * s.eta), sn = std::sin(2.0 * s.eta);
  const Mat2 J{s.mu * c, -s.mu * sn, -s.mu * sn, -s.mu * c};
  const Vec2 lead1{std::sin(s.eta), std::cos(s.eta)};   // V(-eta) e_2
  const Vec2 lead2{std::cos(s.eta), -std::sin(s.eta)};  // V(-eta) e_1

  auto build = [&](int M) {
    check_resonance(s.mu, M, k);
    const auto Q = spec.potential.taylor(s.gamma, radius, M);
    std::vector<Mat2> A(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) A[m] = kB * Q[m];
    A[0] = A[0] - lambda * kB;
    Column col1 = solve_column(-s.mu, basis.c01 * lead1, J, A, M);
    Column col2 = solve_column(s.mu, basis.c02 * lead2, J, A, M);
    basis.order = M;
    basis.c1 = std::move(col1.c);
    basis.dc1 = std::move(col1.dc);
    basis.c2 = std::move(col2.c);
    basis.dc2 = std::move(col2.dc);
  };

  if (order > 0) {
    build(order);
    return basis;
  }
  for (int M = kMinSeriesOrder;; M = std::min(2 * M, kMaxSeriesOrder)) {
    build(M);
    const double tail = std::max({tail_ratio(basis.c1, radius), tail_ratio(basis.c2, radius),
                                  tail_ratio(basis.dc1, radius), tail_ratio(basis.dc2, radius)});
    if (tail < kSeriesTailTolerance) return basis;
    if (M == kMaxSeriesOrder)
      throw NumericalError("build_frobenius_basis: order too small at singularity " + std::to_string(k) +
                           " (tail " + std::to_string(tail) + " at radius " + std::to_string(radius) + ")");
  }
}

namespace {

Vec2 horner(const std::vector<Vec2>& c, double t) {
  Vec2 acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = Vec2{acc.c1 * t + it->c1, acc.c2 * t + it->c2};
  return acc;
}

void check_disk(const FrobeniusBasis& b, double x) {
  if (x == b.gamma) throw ValidationError("eval_local: evaluation at singularity");
  if (std::abs(x - b.gamma) > b.radius * (1.0 + 1e-12))
    throw ValidationError("eval_local: out of disk (|x - gamma| = " + std::to_string(std::abs(x - b.gamma)) +
                          ", radius " + std::to_string(b.radius) + ")");
}

}  // namespace

Mat2 eval_local(const FrobeniusBasis& b, double x) {
  check_disk(b, x);
  const double t = x - b.gamma;
  const Vec2 s1 = branch_power(x, b.gamma, -b.mu) * horner(b.c1, t);
  const Vec2 s2 = branch_power(x, b.gamma, b.mu) * horner(b.c2, t);
  return Mat2::from_columns(s1, s2);
}

Jet2 eval_local_jet(const FrobeniusBasis& b, double x) {
  check_disk(b, x);
  const double t = x - b.gamma;
  const cplx p1 = branch_power(x, b.gamma, -b.mu), p2 = branch_power(x, b.gamma, b.mu);
  return {Mat2::from_columns(p1 * horner(b.c1, t), p2 * horner(b.c2, t)),
          Mat2::from_columns(p1 * horner(b.dc1, t), p2 * horner(b.dc2, t))};
}

Mat2 local_residual(const ProblemSpec& spec, const FrobeniusBasis& b, double x) {
  check_disk(b, x);
  const double t = x - b.gamma;
  // Y' = (x - gamma)^{rho - 1} sum (rho + n) c_n t^n.
  auto derivative = [&](const std::vector<Vec2>& c, cplx rho) {
    std::vector<Vec2> w(c.size());
    for (std::size_t n = 0; n < c.size(); ++n) w[n] = (rho + static_cast<double>(n)) * c[n];
    return branch_power(x, b.gamma, rho) * horner(w, t);
  };
  const Mat2 Y = eval_local(b, x);
  const Mat2 dY = (1.0 / t) * Mat2::from_columns(derivative(b.c1, -b.mu), derivative(b.c2, b.mu));
  return kB * dY + (spec.q_omega(b.k, x) + spec.q(x)) * Y - b.lambda * Y;
}

}  // namespace sdirac
