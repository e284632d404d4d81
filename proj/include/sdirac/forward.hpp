#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdirac/ode.hpp"
#include "sdirac/problem.hpp"
#include "sdirac/types.hpp"

namespace sdirac {

struct ForwardOptions {
  OdeOptions ode;
  /// Matching points x_j between gamma_j and gamma_{j+1}; empty selects the midpoints.
  std::vector<double> matching_points;
};

/// S(x, lambda) with S(0, lambda) = I, optionally with dS/dlambda.
struct FundamentalMatrix {
  Mat2 value;
  std::optional<Mat2> dvalue;
  double x = 0.0;
  cplx lambda{};
};

/// Delta(lambda) = V^T(beta) S(pi, lambda) V(alpha).
struct CharMatrix {
  Mat2 delta;
  std::optional<Mat2> ddelta;
  cplx lambda{};

  cplx d11() const { return delta.a11; }
  cplx d12() const { return delta.a12; }
  cplx d21() const { return delta.a21; }
  cplx d22() const { return delta.a22; }
};

/// S and dS/dlambda at every point of xs (any order, none at a singularity) for one lambda.
///
/// Around each gamma_k the local basis is used inside its disk; the connection matrices
/// C_k with S = S^(k) C_k follow from C_0 = S^(0)(0)^{-1} and
/// C_{j+1} = S^(j+1)(x_j)^{-1} S^(j)(x_j) C_j at the matching points.
std::vector<Jet2> sweep_S(const ProblemSpec& spec, cplx lambda, const std::vector<double>& xs, bool with_derivative,
                          const ForwardOptions& options = {});

FundamentalMatrix global_S(const ProblemSpec& spec, double x, cplx lambda, bool with_derivative = false,
                           const ForwardOptions& options = {});

/// phi = S V(alpha); psi = S S(pi)^{-1} V(beta).
Mat2 phi(const ProblemSpec& spec, double x, cplx lambda, const ForwardOptions& options = {});
Mat2 psi(const ProblemSpec& spec, double x, cplx lambda, const ForwardOptions& options = {});

CharMatrix char_fn(const ProblemSpec& spec, cplx lambda, bool with_derivative = false,
                   const ForwardOptions& options = {});

/// Delta^0_12: the exponential-polynomial principal part of Delta_12 (l from sector_of).
cplx char_fn_asymptotic(const ProblemSpec& spec, cplx lambda);

/// Shift c = -(alpha - beta) / pi of the unperturbed lattice k + c.
double lattice_shift(const ProblemSpec& spec);

struct SeedResult {
  std::vector<std::pair<int, cplx>> seeds;  // (k, lambda^0_k) for converged indices
  std::vector<std::string> warnings;        // one per skipped index
};

/// Damped Newton on Delta^0_12 from the lattice points k + c, k = -K..K.
SeedResult seed_zeros(const ProblemSpec& spec, int K);

/// h = 1 + max |Im lambda^0_k| over the seeds.
double strip_height(const SeedResult& seeds);

struct EigenOptions {
  ForwardOptions forward;
  double newton_tol = 1e-13;
  int max_subdivision = 6;
};

struct Eigenvalue {
  int k = 0;
  cplx lambda{};
  cplx d12_derivative{};
  double residual = 0.0;  // |Delta_12(lambda_k)|
};

struct EigenResult {
  std::vector<Eigenvalue> eigenvalues;  // indexed -K..K
  double strip_height = 0.0;
  double window_left = 0.0, window_right = 0.0;
  int contour_count = 0;  // argument-principle count over the window
  std::vector<std::string> warnings;
};

/// Zeros of Delta_12 in [c - K - 1/2, c + K + 1/2] x [-h, h], audited by the argument
/// principle and indexed -K..K in the order of increasing real part.
EigenResult find_eigenvalues(const ProblemSpec& spec, int K, const EigenOptions& options = {});

/// Weyl function M = -Delta_11 / Delta_12.
cplx weyl_function(const ProblemSpec& spec, cplx lambda, const ForwardOptions& options = {});

/// a_k = -Delta_11(lambda_k) / dDelta_12(lambda_k).
cplx weyl_residue(const ProblemSpec& spec, cplx lambda_k, const ForwardOptions& options = {});

/// sum_k a_k / (lambda - lambda_k) - a0_k / (lambda - lambda0_k) over the common index range.
cplx weyl_partial_sum(const SpectralData& data, const SpectralData& model, cplx lambda);

struct ForwardResult {
  SpectralData data;
  EigenResult eigen;
};

/// Eigenvalues and residues for k = -K..K.
ForwardResult compute_spectral_data(const ProblemSpec& spec, int K, const EigenOptions& options = {});

}  // namespace sdirac
