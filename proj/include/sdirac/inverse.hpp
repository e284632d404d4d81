#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdirac/forward.hpp"
#include "sdirac/problem.hpp"
#include "sdirac/types.hpp"

namespace sdirac {

/// Target and model spectral data aligned by index k.
///
/// Slot (n, 0) holds the target pair (lambda_n, a_n), slot (n, 1) the model pair.
/// xi_n = |lambda_n - model lambda_n| + |a_n / model a_n - 1| and chi_n = 1 / xi_n (0 when xi_n = 0).
struct PairedData {
  int K = 0;
  std::vector<cplx> lambda_target, lambda_model;
  std::vector<cplx> a_target, a_model;
  std::vector<double> xi, chi;
  double lambda_hat = 0.0;  // sum |model a_k| xi_k

  std::size_t size() const { return xi.size(); }
  /// Position of (n, i) in the stacked unknown vector.
  static std::size_t slot(std::size_t n, int i) { return 2 * n + static_cast<std::size_t>(i); }
  cplx lambda(std::size_t n, int i) const { return i == 0 ? lambda_target[n] : lambda_model[n]; }
  cplx a(std::size_t n, int i) const { return i == 0 ? a_target[n] : a_model[n]; }
  /// All 2(2K+1) spectral parameters in slot order.
  std::vector<cplx> all_lambdas() const;
};

PairedData pair_data(const SpectralData& target, const SpectralData& model);

/// phi_2(x, lambda) and its lambda-derivative.
struct PhiSample {
  Vec2 value;
  Vec2 deriv;
};

/// phi_2 of one problem at a grid point x for every spectral parameter of a PairedData, in slot order.
struct PointValues {
  double x = 0.0;
  std::vector<PhiSample> phi;
};

inline constexpr double kDiagonalThreshold = 1e-9;

/// D(x, lambda, theta) = <phi_2(lambda), phi_2(theta)> / (lambda - theta), continued to the
/// diagonal by -phi_2^T B dphi_2 when |lambda - theta| < threshold.
cplx kernel_D(const PhiSample& at_lambda, const PhiSample& at_theta, cplx lambda, cplx theta,
              double threshold = kDiagonalThreshold);
cplx kernel_D(const ProblemSpec& spec, double x, cplx lambda, cplx theta, const ForwardOptions& options = {});

/// phi_2 samples at every point of xs for each lambda (outer index lambda).
std::vector<std::vector<PhiSample>> sample_phi(const ProblemSpec& spec, const std::vector<cplx>& lambdas,
                                               const std::vector<double>& xs, const ForwardOptions& options = {});

/// Truncated main equation (I - H) Psi = rhs at one grid point, in slot order.
struct MainEquationSystem {
  double x = 0.0;
  Eigen::MatrixXcd H;
  Eigen::MatrixXcd rhs;  // column m holds the m-th component
};

MainEquationSystem build_main_equation(const PairedData& paired, const PointValues& values,
                                       double threshold = kDiagonalThreshold);
MainEquationSystem build_main_equation(const ProblemSpec& model, const PairedData& paired, double x,
                                       const ForwardOptions& options = {});

inline constexpr double kConditionCap = 1e8;

struct MainEquationSolution {
  Eigen::MatrixXcd psi;
  double residual = 0.0;   // ||(I - H) psi - rhs||_inf / ||rhs||_inf
  double condition = 0.0;  // reciprocal of the LU condition estimate
  bool condition_ok = true;
};

/// Dense LU solve. Points above the condition cap are flagged, not rejected; an exactly
/// singular matrix throws "Condition S violated at x".
MainEquationSolution solve_main_equation(const MainEquationSystem& system, double condition_cap = kConditionCap);

/// phi_{2,n0} = psi_{n0} xi_n + psi_{n1} and phi_{2,n1} = psi_{n1}, in slot order.
std::vector<Vec2> recover_phi(const MainEquationSolution& solution, const PairedData& paired);

/// kappa = sum_k a_k0 model_phi_k0 phi_k0^T - a_k1 model_phi_k1 phi_k1^T.
Mat2 kappa_sum(const PairedData& paired, const PointValues& model_values, const std::vector<Vec2>& phi);

/// B kappa - kappa B.
Mat2 commutator_update(const Mat2& kappa);

struct InverseOptions {
  double epsilon = 0.1;
  double grid_step = 1e-2;
  double condition_cap = kConditionCap;
  double diagonal_threshold = kDiagonalThreshold;
  EigenOptions eigen;
};

/// Uniform points i * step inside the open interval (0, pi) with |x - gamma_k| >= epsilon.
std::vector<double> omega_grid(const ProblemSpec& spec, double epsilon, double step);

struct PointDiagnostics {
  double solve_residual = 0.0;
  double condition = 0.0;
  bool condition_ok = true;
  double projection = 0.0;  // distance of the raw update from the symmetric trace-free form
};

struct ReconstructionResult {
  std::vector<double> x;
  std::vector<Mat2> kappa;
  std::vector<Mat2> q;  // reconstructed potential matrix
  std::vector<PointDiagnostics> diagnostics;
  /// Integral of |B kappa - kappa B| prod |x - gamma_k|^{-2 Re mu_k} over each region, graded toward gamma_k.
  std::vector<double> condition3;
  PairedData paired;
  std::vector<std::string> flags;  // one line per Condition S violation

  double max_residual() const;
  double max_condition() const;
  double max_projection() const;
};

/// Solves the main equation at every grid point given the model problem and its spectral data.
ReconstructionResult reconstruct_potential(const ProblemSpec& model, const PairedData& paired,
                                           const std::vector<double>& grid, const InverseOptions& options = {});

/// Full pipeline: model spectral data on the same index range, pairing, and reconstruction on
/// Omega_epsilon. Boundary angles and Q_omega are those of the model.
ReconstructionResult run_algorithm1(const SpectralData& target, const ProblemSpec& model,
                                    const InverseOptions& options = {});
ReconstructionResult run_algorithm1(const SpectralData& target, const ProblemSpec& model,
                                    const SpectralData& model_data, const std::vector<double>& grid,
                                    const InverseOptions& options = {});

}  // namespace sdirac
