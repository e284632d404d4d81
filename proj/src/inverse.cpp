#include "sdirac/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdirac/error.hpp"
#include "sdirac/parallel.hpp"

namespace sdirac {

std::vector<cplx> PairedData::all_lambdas() const {
  std::vector<cplx> out(2 * size());
  for (std::size_t n = 0; n < size(); ++n) {
    out[slot(n, 0)] = lambda_target[n];
    out[slot(n, 1)] = lambda_model[n];
  }
  return out;
}

PairedData pair_data(const SpectralData& target, const SpectralData& model) {
  if (target.K() != model.K() || target.size() != model.size())
    throw ValidationError("pair_data: index ranges differ (target K = " + std::to_string(target.K()) +
                          ", model K = " + std::to_string(model.K()) + ")");
  PairedData p;
  p.K = target.K();
  const std::size_t n = target.size();
  p.lambda_target.resize(n);
  p.lambda_model.resize(n);
  p.a_target.resize(n);
  p.a_model.resize(n);
  p.xi.resize(n);
  p.chi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SpectralDatum& t = target.data()[i];
    const SpectralDatum& m = model.data()[i];
    if (t.k != m.k) throw ValidationError("pair_data: index mismatch at position " + std::to_string(i));
    if (m.a == cplx{}) throw ValidationError("pair_data: vanishing model residue at index " + std::to_string(m.k));
    p.lambda_target[i] = t.lambda;
    p.lambda_model[i] = m.lambda;
    p.a_target[i] = t.a;
    p.a_model[i] = m.a;
    p.xi[i] = std::abs(t.lambda - m.lambda) + std::abs(t.a / m.a - 1.0);
    p.chi[i] = p.xi[i] == 0.0 ? 0.0 : 1.0 / p.xi[i];
    p.lambda_hat += std::abs(m.a) * p.xi[i];
  }
  return p;
}

cplx kernel_D(const PhiSample& at_lambda, const PhiSample& at_theta, cplx lambda, cplx theta, double threshold) {
  if (std::abs(lambda - theta) < threshold) return -wronskian(at_lambda.value, at_lambda.deriv);
  return wronskian(at_lambda.value, at_theta.value) / (lambda - theta);
}

std::vector<std::vector<PhiSample>> sample_phi(const ProblemSpec& spec, const std::vector<cplx>& lambdas,
                                               const std::vector<double>& xs, const ForwardOptions& options) {
  const Mat2 V = rotation(spec.alpha);
  std::vector<std::vector<PhiSample>> out(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t j) {
    const auto S = sweep_S(spec, lambdas[j], xs, true, options);
    auto& row = out[j];
    row.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      row[i] = {(S[i].value * V).col2(), (S[i].deriv * V).col2()};
  });
  return out;
}

cplx kernel_D(const ProblemSpec& spec, double x, cplx lambda, cplx theta, const ForwardOptions& options) {
  const auto s = sample_phi(spec, {lambda, theta}, {x}, options);
  return kernel_D(s[0][0], s[1][0], lambda, theta);
}

MainEquationSystem build_main_equation(const PairedData& paired, const PointValues& values, double threshold) {
  const std::size_t n = paired.size();
  if (values.phi.size() != 2 * n) throw ValidationError("build_main_equation: expected one sample per slot");
  const auto lambdas = paired.all_lambdas();

  // P(ni, kj) = D(lambda_ni, lambda_kj) a_kj
  auto P = [&](std::size_t a, std::size_t b, cplx ab) {
    return kernel_D(values.phi[a], values.phi[b], lambdas[a], lambdas[b], threshold) * ab;
  };

  MainEquationSystem sys;
  sys.x = values.x;
  sys.H = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
  sys.rhs.resize(static_cast<Eigen::Index>(2 * n), 2);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t r0 = PairedData::slot(r, 0), r1 = PairedData::slot(r, 1);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t k0 = PairedData::slot(k, 0), k1 = PairedData::slot(k, 1);
      const cplx a0 = paired.a_target[k], a1 = paired.a_model[k];
      const cplx p00 = P(r0, k0, a0), p10 = P(r1, k0, a0);
      const cplx p01 = P(r0, k1, a1), p11 = P(r1, k1, a1);
      const auto R0 = static_cast<Eigen::Index>(r0), R1 = static_cast<Eigen::Index>(r1);
      const auto K0 = static_cast<Eigen::Index>(k0), K1 = static_cast<Eigen::Index>(k1);
      sys.H(R0, K0) = (p00 - p10) * paired.chi[r] * paired.xi[k];
      sys.H(R0, K1) = (p00 - p10 - p01 + p11) * paired.chi[r];
      sys.H(R1, K0) = p10 * paired.xi[k];
      sys.H(R1, K1) = p10 - p11;
    }
    const Vec2& f0 = values.phi[r0].value;
    const Vec2& f1 = values.phi[r1].value;
    const auto R0 = static_cast<Eigen::Index>(r0), R1 = static_cast<Eigen::Index>(r1);
    sys.rhs(R0, 0) = paired.chi[r] * (f0.c1 - f1.c1);
    sys.rhs(R0, 1) = paired.chi[r] * (f0.c2 - f1.c2);
    sys.rhs(R1, 0) = f1.c1;
    sys.rhs(R1, 1) = f1.c2;
  }
  return sys;
}

MainEquationSystem build_main_equation(const ProblemSpec& model, const PairedData& paired, double x,
                                       const ForwardOptions& options) {
  const auto samples = sample_phi(model, paired.all_lambdas(), {x}, options);
  PointValues values;
  values.x = x;
  for (const auto& s : samples) values.phi.push_back(s.front());
  return build_main_equation(paired, values);
}

MainEquationSolution solve_main_equation(const MainEquationSystem& system, double condition_cap) {
  const Eigen::Index n = system.H.rows();
  const Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - system.H;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  MainEquationSolution out;
  const double rcond = lu.rcond();
  out.psi = lu.solve(system.rhs);
  if (!(rcond > 0.0) || !out.psi.allFinite()) {
    std::ostringstream msg;
    msg << "solve_main_equation: Condition S violated at x = " << system.x << " (singular matrix)";
    throw NumericalError(msg.str());
  }
  out.condition = 1.0 / rcond;
  out.condition_ok = out.condition <= condition_cap;
  const double scale = system.rhs.cwiseAbs().rowwise().sum().maxCoeff();
  const double res = (A * out.psi - system.rhs).cwiseAbs().rowwise().sum().maxCoeff();
  out.residual = scale > 0.0 ? res / scale : res;
  return out;
}

std::vector<Vec2> recover_phi(const MainEquationSolution& solution, const PairedData& paired) {
  std::vector<Vec2> out(2 * paired.size());
  for (std::size_t n = 0; n < paired.size(); ++n) {
    const auto r0 = static_cast<Eigen::Index>(PairedData::slot(n, 0));
    const auto r1 = static_cast<Eigen::Index>(PairedData::slot(n, 1));
    const Vec2 psi0{solution.psi(r0, 0), solution.psi(r0, 1)};
    const Vec2 psi1{solution.psi(r1, 0), solution.psi(r1, 1)};
    out[PairedData::slot(n, 0)] = paired.xi[n] * psi0 + psi1;
    out[PairedData::slot(n, 1)] = psi1;
  }
  return out;
}

Mat2 kappa_sum(const PairedData& paired, const PointValues& model_values, const std::vector<Vec2>& phi) {
  Mat2 kappa = Mat2::zero();
  for (std::size_t k = 0; k < paired.size(); ++k) {
    const std::size_t s0 = PairedData::slot(k, 0), s1 = PairedData::slot(k, 1);
    kappa += paired.a_target[k] * outer(model_values.phi[s0].value, phi[s0]);
    kappa -= paired.a_model[k] * outer(model_values.phi[s1].value, phi[s1]);
  }
  return kappa;
}

Mat2 commutator_update(const Mat2& kappa) { return kB * kappa - kappa * kB; }

std::vector<double> omega_grid(const ProblemSpec& spec, double epsilon, double step) {
  if (!(step > 0.0)) throw ValidationError("omega_grid: grid step must be positive");
  if (!(epsilon > 0.0)) throw ValidationError("omega_grid: epsilon must be positive");
  std::vector<double> out;
  const auto count = static_cast<long>(std::ceil(kPi / step));
  for (long i = 1; i < count; ++i) {
    const double x = static_cast<double>(i) * step;
    if (x >= kPi) break;
    if (spec.distance_to_singularity(x) >= epsilon) out.push_back(x);
  }
  return out;
}

double ReconstructionResult::max_residual() const {
  double m = 0.0;
  for (const auto& d : diagnostics) m = std::max(m, d.solve_residual);
  return m;
}

double ReconstructionResult::max_condition() const {
  double m = 0.0;
  for (const auto& d : diagnostics) m = std::max(m, d.condition);
  return m;
}

double ReconstructionResult::max_projection() const {
  double m = 0.0;
  for (const auto& d : diagnostics) m = std::max(m, d.projection);
  return m;
}

namespace {

constexpr int kGradedPoints = 7;

struct PointOutcome {
  Mat2 kappa;
  Mat2 update;
  PointDiagnostics diag;
};

// Distance of U from the symmetric trace-free matrices and the projection onto them.
std::pair<double, Mat2> project(const Mat2& U) {
  const cplx off = 0.5 * (U.a12 + U.a21), diag = 0.5 * (U.a11 - U.a22);
  const Mat2 P{diag, off, off, -diag};
  return {(U - P).max_abs(), P};
}

}  // namespace

ReconstructionResult reconstruct_potential(const ProblemSpec& model, const PairedData& paired,
                                           const std::vector<double>& grid, const InverseOptions& options) {
  for (double x : grid) {
    if (!(x >= 0.0 && x <= kPi))
      throw ValidationError("reconstruct_potential: grid point " + std::to_string(x) + " outside [0, pi]");
    if (model.distance_to_singularity(x) == 0.0)
      throw ValidationError("reconstruct_potential: grid point " + std::to_string(x) + " is a singularity");
  }

  // Grid points followed by a graded mesh from epsilon down to epsilon / 10 on each side of every gamma_k.
  std::vector<double> points = grid;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const double g = model.singularity(k).gamma;
    for (int j = 0; j < kGradedPoints; ++j) {
      const double d = options.epsilon * std::pow(0.1, static_cast<double>(j) / (kGradedPoints - 1));
      for (double x : {g - d, g + d})
        if (x > model.region_begin(k) && x < model.region_end(k) && x > 0.0 && x < kPi) points.push_back(x);
    }
  }

  const auto samples = sample_phi(model, paired.all_lambdas(), points, options.eigen.forward);
  std::vector<PointOutcome> outcomes(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    PointValues values;
    values.x = points[i];
    values.phi.reserve(samples.size());
    for (const auto& row : samples) values.phi.push_back(row[i]);
    const MainEquationSystem sys = build_main_equation(paired, values, options.diagonal_threshold);
    const MainEquationSolution sol = solve_main_equation(sys, options.condition_cap);
    PointOutcome& o = outcomes[i];
    o.kappa = kappa_sum(paired, values, recover_phi(sol, paired));
    o.update = commutator_update(o.kappa);
    o.diag = {sol.residual, sol.condition, sol.condition_ok, project(o.update).first};
  });

  ReconstructionResult result;
  result.paired = paired;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PointOutcome& o = outcomes[i];
    result.x.push_back(grid[i]);
    result.kappa.push_back(o.kappa);
    result.q.push_back(model.q(grid[i]) + project(o.update).second);
    result.diagnostics.push_back(o.diag);
    if (!o.diag.condition_ok) {
      std::ostringstream msg;
      msg << "Condition S violated at x = " << grid[i] << " (condition estimate " << o.diag.condition << ")";
      result.flags.push_back(msg.str());
    }
  }

  for (std::size_t k = 0; k < model.size(); ++k) {
    const double g = model.singularity(k).gamma;
    std::vector<std::pair<double, double>> left, right;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double x = points[i];
      if (model.region_of(x) != static_cast<int>(k)) continue;
      double w = outcomes[i].update.max_abs();
      for (const auto& s : model.singularities) w *= std::pow(std::abs(x - s.gamma), -2.0 * s.mu.real());
      (x < g ? left : right).emplace_back(x, w);
    }
    double total = 0.0;
    for (auto* side : {&left, &right}) {
      std::sort(side->begin(), side->end());
      for (std::size_t i = 1; i < side->size(); ++i)
        total += 0.5 * ((*side)[i].first - (*side)[i - 1].first) * ((*side)[i].second + (*side)[i - 1].second);
    }
    result.condition3.push_back(total);
  }
  return result;
}

ReconstructionResult run_algorithm1(const SpectralData& target, const ProblemSpec& model, const SpectralData& model_data,
                                    const std::vector<double>& grid, const InverseOptions& options) {
  const PairedData paired = pair_data(target, model_data);
  try {
    return reconstruct_potential(model, paired, grid, options);
  } catch (const ValidationError&) {
    throw;
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("run_algorithm1: reconstruction: ") + e.what());
  }
}

ReconstructionResult run_algorithm1(const SpectralData& target, const ProblemSpec& model,
                                    const InverseOptions& options) {
  model.validate();
  SpectralData model_data;
  try {
    model_data = compute_spectral_data(model, target.K(), options.eigen).data;
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("run_algorithm1: model forward sweep: ") + e.what());
  }
  return run_algorithm1(target, model, model_data, omega_grid(model, options.epsilon, options.grid_step), options);
}

}  // namespace sdirac
