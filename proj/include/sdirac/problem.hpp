#pragma once

#include <cstddef>
#include <vector>

#include "sdirac/potential.hpp"
#include "sdirac/types.hpp"

namespace sdirac {

/// L = L(Q_omega, Q, alpha, beta): the system B Y' + (Q_omega(x) + Q(x)) Y = lambda Y on
/// (0, pi) with boundary conditions (cos a, sin a) Y(0) = (cos b, sin b) Y(pi) = 0.
///
/// Singularities are indexed from 0. On the region (g_{k-1/2}, g_{k+1/2}] around
/// gamma_k, where g_{k+1/2} is the midpoint to the next singularity (0 and pi at the
/// ends), Q_omega(x) = mu_k / (x - gamma_k) [[sin 2eta_k, cos 2eta_k], [cos 2eta_k, -sin 2eta_k]].
struct ProblemSpec {
  std::vector<Singularity> singularities;
  double alpha = 0.0;
  double beta = 0.0;
  Potential potential;

  std::size_t size() const { return singularities.size(); }
  const Singularity& singularity(std::size_t k) const { return singularities.at(k); }

  /// Throws ValidationError naming the offending field.
  void validate() const;

  /// Index of the singularity whose region contains x; -1 without singularities.
  int region_of(double x) const;
  /// Left/right end of the region of singularity k.
  double region_begin(std::size_t k) const;
  double region_end(std::size_t k) const;
  /// Number of singularities strictly left of x, i.e. x lies in omega_j with j returned.
  std::size_t interval_of(double x) const;
  /// Distance from x to the nearest singularity (infinity when there is none).
  double distance_to_singularity(double x) const;

  /// Singular part evaluated with the term of singularity k.
  Mat2 q_omega(std::size_t k, double x) const;
  Mat2 q_omega(double x) const;
  Mat2 q(double x) const { return potential.matrix(x); }

  ProblemSpec with_potential(Potential p) const {
    ProblemSpec out = *this;
    out.potential = std::move(p);
    return out;
  }
};

/// Numerical estimate of the integral of (|q1| + |q2|) prod |x - gamma_k|^{-2 Re mu_k}
/// over geometric shells approaching each singularity. Returns +infinity when the shell
/// contributions stop decaying.
double weighted_potential_integral(const ProblemSpec& spec);

}  // namespace sdirac
