#pragma once

#include <cstddef>
#include <vector>

#include "sdirac/problem.hpp"
#include "sdirac/types.hpp"

namespace sdirac {

/// Local fundamental system S^(k)(x, lambda) = (S_1, S_2) around gamma_k:
///
///   S_1 = (x - gamma)^{-mu} sum_n c1_n (x - gamma)^n,   c1_0 = c01 V(-eta) e_2
///   S_2 = (x - gamma)^{+mu} sum_n c2_n (x - gamma)^n,   c2_0 = c02 V(-eta) e_1
///
/// The non-integer powers follow branch_power, so the same coefficients describe
/// the solution on both sides of gamma (continuation through Im x > 0).
struct FrobeniusBasis {
  std::size_t k = 0;
  double gamma = 0.0;
  cplx mu{};
  double eta = 0.0;
  cplx lambda{};
  double radius = 0.0;  // series are evaluated only for |x - gamma| <= radius
  int order = 0;        // number of retained coefficients
  cplx c01{1.0, 0.0};
  cplx c02{1.0, 0.0};
  std::vector<Vec2> c1, c2;    // series coefficients
  std::vector<Vec2> dc1, dc2;  // their lambda-derivatives
};

inline constexpr int kMinSeriesOrder = 20;
inline constexpr int kMaxSeriesOrder = 200;
inline constexpr double kSeriesTailTolerance = 1e-12;

/// Handoff radius between series and ODE integration around gamma_k:
/// min(0.4 * distance to the nearest neighbour singularity or endpoint, 0.2, 6 / |lambda|).
double handoff_radius(const ProblemSpec& spec, std::size_t k, cplx lambda);

/// (x - gamma)^mu with |x - gamma|^mu for x > gamma and e^{i pi mu} |x - gamma|^mu for x < gamma.
cplx branch_power(double x, double gamma, cplx mu);

/// Solves the coefficient recurrences of the local system at gamma_k.
///
/// With order == 0 the series length is chosen adaptively (20, 40, ... capped at 200)
/// until the tail at the handoff radius falls below 1e-12 relative to the largest term.
/// Throws NumericalError "resonant exponent" when 2 mu_k is an integer within reach of the
/// recurrence and "order too small" when the tail does not converge.
FrobeniusBasis build_frobenius_basis(const ProblemSpec& spec, std::size_t k, cplx lambda, int order = 0);

/// Same with an explicit evaluation radius (used by tests probing the disk).
FrobeniusBasis build_frobenius_basis(const ProblemSpec& spec, std::size_t k, cplx lambda, int order,
                                     double radius);

/// Columns S_1, S_2 at x; throws for x == gamma or |x - gamma| beyond the radius.
Mat2 eval_local(const FrobeniusBasis& basis, double x);
Jet2 eval_local_jet(const FrobeniusBasis& basis, double x);

/// Residual of B Y' + (Q_omega + Q) Y - lambda Y for the truncated series at x, using the
/// differentiated series; a consistency probe for the recurrences.
Mat2 local_residual(const ProblemSpec& spec, const FrobeniusBasis& basis, double x);

}  // namespace sdirac
