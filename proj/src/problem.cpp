#include "sdirac/problem.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sdirac/error.hpp"

namespace sdirac {

namespace {

bool angle_ok(double a) { return std::isfinite(a) && std::abs(a) <= 0.5 * kPi + 1e-15; }

std::string field(std::size_t k, const char* name) {
  return "singularities[" + std::to_string(k) + "]." + name;
}

}  // namespace

void ProblemSpec::validate() const {
  if (!angle_ok(alpha)) throw ValidationError("alpha: must lie in [-pi/2, pi/2]");
  if (!angle_ok(beta)) throw ValidationError("beta: must lie in [-pi/2, pi/2]");
  for (std::size_t k = 0; k < singularities.size(); ++k) {
    const auto& s = singularities[k];
    if (!(s.gamma > 0.0 && s.gamma < kPi)) throw ValidationError(field(k, "gamma") + ": must lie in (0, pi)");
    if (k > 0 && !(s.gamma > singularities[k - 1].gamma))
      throw ValidationError(field(k, "gamma") + ": singularities must be strictly increasing");
    if (!std::isfinite(s.mu.real()) || !std::isfinite(s.mu.imag()) || !(s.mu.real() > 0.0))
      throw ValidationError(field(k, "mu") + ": Re mu must be positive");
    const cplx shifted = s.mu + 0.5;
    const double nearest = std::round(shifted.real());
    if (nearest >= 1.0 && std::abs(shifted - cplx{nearest, 0.0}) < 1e-12)
      throw ValidationError(field(k, "mu") + ": mu + 1/2 must not be a positive integer");
    if (!angle_ok(s.eta)) throw ValidationError(field(k, "eta") + ": must lie in [-pi/2, pi/2]");
  }
  for (double x = 0.0; x <= kPi; x += kPi / 64) {
    const auto v = potential.at(x);
    if (!std::isfinite(std::abs(v.q1)) || !std::isfinite(std::abs(v.q2)))
      throw ValidationError("potential: non-finite value at x = " + std::to_string(x));
  }
  if (!std::isfinite(weighted_potential_integral(*this)))
    throw ValidationError("potential: |q| prod |x - gamma_k|^{-2 Re mu_k} is not integrable");
}

int ProblemSpec::region_of(double x) const {
  if (singularities.empty()) return -1;
  for (std::size_t k = 0; k + 1 < singularities.size(); ++k)
    if (x <= region_end(k)) return static_cast<int>(k);
  return static_cast<int>(singularities.size()) - 1;
}

double ProblemSpec::region_begin(std::size_t k) const {
  return k == 0 ? 0.0 : 0.5 * (singularities[k - 1].gamma + singularities[k].gamma);
}

double ProblemSpec::region_end(std::size_t k) const {
  return k + 1 == singularities.size() ? kPi : 0.5 * (singularities[k].gamma + singularities[k + 1].gamma);
}

std::size_t ProblemSpec::interval_of(double x) const {
  std::size_t j = 0;
  while (j < singularities.size() && singularities[j].gamma < x) ++j;
  return j;
}

double ProblemSpec::distance_to_singularity(double x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : singularities) d = std::min(d, std::abs(x - s.gamma));
  return d;
}

Mat2 ProblemSpec::q_omega(std::size_t k, double x) const {
  const auto& s = singularities[k];
  const double c = std::cos(2.0 * s.eta);
  const double sn = std::sin(2.0 * s.eta);
  const cplx f = s.mu / (x - s.gamma);
  return {f * sn, f * c, f * c, -f * sn};
}

Mat2 ProblemSpec::q_omega(double x) const {
  const int k = region_of(x);
  return k < 0 ? Mat2::zero() : q_omega(static_cast<std::size_t>(k), x);
}

double weighted_potential_integral(const ProblemSpec& spec) {
  auto integrand = [&](double x) {
    const auto v = spec.potential.at(x);
    double w = std::abs(v.q1) + std::abs(v.q2);
    for (const auto& s : spec.singularities) w *= std::pow(std::abs(x - s.gamma), -2.0 * s.mu.real());
    return w;
  };
  // Composite Simpson on [a, b] with n panels.
  auto simpson = [&](double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = integrand(a) + integrand(b);
    for (int i = 1; i < n; ++i) sum += integrand(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
  };

  const std::size_t N = spec.singularities.size();
  if (N == 0) return simpson(0.0, kPi, 256);

  constexpr int kShells = 8;
  double total = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double g = spec.singularities[k].gamma;
    const double lo = spec.region_begin(k), hi = spec.region_end(k);
    const double d0 = 0.5 * std::min(g - lo, hi - g);
    total += simpson(lo, g - d0, 128) + simpson(g + d0, hi, 128);
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kShells; ++j) {
      const double outer = d0 * std::pow(0.1, j), inner = outer * 0.1;
      const double shell = simpson(g - outer, g - inner, 64) + simpson(g + inner, g + outer, 64);
      total += shell;
      if (j == kShells - 1 && shell > 1e-14 && shell >= 0.995 * prev) return std::numeric_limits<double>::infinity();
      prev = shell;
    }
  }
  return total;
}

}  // namespace sdirac
