// Command-line driver: forward, inverse, roundtrip and asymptotics runs.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdirac/asymptotics.hpp"
#include "sdirac/error.hpp"
#include "sdirac/forward.hpp"
#include "sdirac/inverse.hpp"
#include "sdirac/io.hpp"

using namespace sdirac;
using nlohmann::json;

namespace {

// Flags shared by the subcommands; unset values fall back to the problem file.
struct Overrides {
  std::optional<int> K;
  std::optional<double> grid_step, epsilon, tolerance, error_bound;

  void apply(SolverSettings& s) const {
    if (K) s.K = *K;
    if (grid_step) s.grid_step = *grid_step;
    if (epsilon) s.epsilon = *epsilon;
    if (tolerance) {
      s.rtol = *tolerance;
      s.atol = *tolerance * 1e-2;
    }
    if (error_bound) s.error_bound = *error_bound;
  }
};

void add_numeric_flags(CLI::App* app, Overrides& o, bool grid) {
  app->add_option("--K", o.K, "Index range [-K, K]")->check(CLI::NonNegativeNumber);
  app->add_option("--tolerance", o.tolerance, "ODE relative tolerance (absolute is 1e-2 of it)")
      ->check(CLI::PositiveNumber);
  if (grid) {
    app->add_option("--grid-step", o.grid_step, "Grid spacing on Omega_epsilon")->check(CLI::PositiveNumber);
    app->add_option("--epsilon", o.epsilon, "Excluded radius around each singularity")->check(CLI::PositiveNumber);
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string fmt(cplx z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.12f%+.12fi", z.real(), z.imag());
  return buf;
}

template <class F>
void write_csv(const std::string& path, F&& body) {
  std::ostringstream s;
  body(s);
  write_text(path, s.str());
}

int cmd_forward(const std::string& problem_path, const Overrides& o, const std::string& out,
                const std::string& csv) {
  ProblemFile problem = load_problem(problem_path);
  o.apply(problem.settings);
  const SolverSettings& s = problem.settings;
  const ForwardResult result = compute_spectral_data(problem.spec, s.K, s.eigen_options());
  for (const auto& w : result.eigen.warnings) std::cerr << "warning: " << w << "\n";

  SpectralDataFile file{{spec_hash(problem.spec), kSolverVersion, s.K, s.rtol, s.atol}, result.data};
  if (!out.empty()) write_text(out, dump_spectral(file));
  if (!csv.empty()) write_csv(csv, [&](std::ostream& os) { write_forward_csv(os, result); });

  std::cout << "   k  lambda_k                                   a_k                                        "
               "|Delta_12|\n";
  for (std::size_t i = 0; i < result.data.size(); ++i) {
    const auto& d = result.data.data()[i];
    std::printf("%4d  %-42s %-42s %s\n", d.k, fmt(d.lambda).c_str(), fmt(d.a).c_str(),
                fmt(result.eigen.eigenvalues[i].residual).c_str());
  }
  std::printf("contour count %d over [%g, %g] x [-%g, %g]\n", result.eigen.contour_count, result.eigen.window_left,
              result.eigen.window_right, result.eigen.strip_height, result.eigen.strip_height);
  return 0;
}

int cmd_inverse(const std::string& data_path, const std::string& model_path, const Overrides& o,
                const std::string& prefix, const std::string& reference_path) {
  const SpectralDataFile data = load_spectral(data_path);
  if (o.K && *o.K != data.data.K())
    throw ValidationError("index range mismatch: --K " + std::to_string(*o.K) + " but the data cover [-" +
                          std::to_string(data.data.K()) + ", " + std::to_string(data.data.K()) + "]");
  ProblemFile model = load_problem(model_path);
  o.apply(model.settings);
  const InverseOptions options = model.settings.inverse_options();
  const ReconstructionResult result = run_algorithm1(data.data, model.spec, options);

  json diag = reconstruction_diagnostics(result, options);
  std::optional<double> error;
  if (!reference_path.empty()) {
    error = reconstruction_error(result, load_problem(reference_path).spec.potential);
    diag["max_error"] = *error;
  }
  if (!prefix.empty()) {
    write_csv(prefix + ".csv", [&](std::ostream& os) { write_reconstruction_csv(os, result); });
    write_text(prefix + "_diagnostics.json", diag.dump(2) + "\n");
  }
  std::printf("points %zu  max residual %s  max condition %s  lambda_hat %s\n", result.x.size(),
              fmt(result.max_residual()).c_str(), fmt(result.max_condition()).c_str(),
              fmt(result.paired.lambda_hat).c_str());
  if (error) std::printf("max |Qrec - Q| %s\n", fmt(*error).c_str());
  for (const auto& f : result.flags) std::cerr << "flag: " << f << "\n";
  if (!result.flags.empty()) std::printf("Condition S flagged at %zu grid points\n", result.flags.size());
  return 0;
}

int cmd_roundtrip(const std::string& problem_path, const std::string& model_path, const Overrides& o,
                  std::vector<int> sweep, const std::string& out, bool strict) {
  ProblemFile problem = load_problem(problem_path);
  o.apply(problem.settings);
  const SolverSettings& s = problem.settings;
  const ProblemSpec model = model_path.empty() ? problem.spec.with_potential(Potential::zero())
                                               : load_problem(model_path).spec;
  if (sweep.empty()) sweep.push_back(s.K);
  const InverseOptions options = s.inverse_options();
  const std::vector<double> grid = omega_grid(model, options.epsilon, options.grid_step);

  json rows = json::array();
  std::vector<double> errors;
  std::printf("K,epsilon,points,max_error,max_solve_residual,max_condition,condition_s_violations,lambda_hat\n");
  for (int K : sweep) {
    const SpectralData target = compute_spectral_data(problem.spec, K, options.eigen).data;
    const SpectralData model_data = compute_spectral_data(model, K, options.eigen).data;
    const ReconstructionResult r = run_algorithm1(target, model, model_data, grid, options);
    const double err = reconstruction_error(r, problem.spec.potential);
    errors.push_back(err);
    std::printf("%d,%s,%zu,%s,%s,%s,%zu,%s\n", K, format_double(options.epsilon).c_str(), r.x.size(),
                format_double(err).c_str(), format_double(r.max_residual()).c_str(),
                format_double(r.max_condition()).c_str(), r.flags.size(), format_double(r.paired.lambda_hat).c_str());
    std::fflush(stdout);
    rows.push_back(json{{"K", K},
                        {"max_error", err},
                        {"max_solve_residual", r.max_residual()},
                        {"max_condition", r.max_condition()},
                        {"condition_s_violations", r.flags.size()},
                        {"lambda_hat", r.paired.lambda_hat}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] <= 1.1 * errors[i - 1];
  const bool within = errors.back() <= s.error_bound;
  const json summary{{"problem", problem_path},
                     {"spec_hash", spec_hash(problem.spec)},
                     {"epsilon", options.epsilon},
                     {"grid_step", options.grid_step},
                     {"rows", rows},
                     {"decreasing", decreasing},
                     {"error_bound", s.error_bound},
                     {"within_bound", within}};
  if (!out.empty()) write_text(out, summary.dump(2) + "\n");
  std::printf("decreasing %s, final error %s vs bound %s: %s\n", decreasing ? "yes" : "no",
              fmt(errors.back()).c_str(), fmt(s.error_bound).c_str(), within ? "within" : "exceeded");
  return strict && !(decreasing && within) ? 1 : 0;
}

int cmd_asymptotics(const std::string& problem_path, const Overrides& o, int m_min, int m_max, double shift,
                    const std::string& prefix) {
  ProblemFile problem = load_problem(problem_path);
  o.apply(problem.settings);
  const EigenOptions eig = problem.settings.eigen_options();
  const auto chars = char_deviation(problem.spec, m_min, m_max, shift, 0.0, eig.forward);
  const auto eigs = eigen_deviation(problem.spec, m_max, eig);

  std::vector<double> t, y, te, ye;
  for (const auto& r : chars) {
    t.push_back(r.lambda.real());
    y.push_back(r.scaled_difference);
  }
  for (const auto& r : eigs)
    if (std::abs(r.k) >= m_min) {
      te.push_back(std::abs(r.k));
      ye.push_back(r.deviation);
    }
  const double nu = nu_exponent(problem.spec.singularities);
  json summary{{"nu", nu}, {"m_min", m_min}, {"m_max", m_max}, {"shift", shift}};
  auto report = [&](const char* key, const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || std::count_if(b.begin(), b.end(), [](double v) { return v > 0.0; }) < 2) {
      std::printf("%s: no decay to fit (deviation vanishes)\n", key);
      summary[key] = nullptr;
      return;
    }
    const PowerFit fit = fit_power_decay(a, b);
    std::printf("%s: fitted exponent %.4f (nu = %.4f, ratio %.3f)\n", key, fit.exponent, nu,
                nu > 0 ? fit.exponent / nu : 0.0);
    summary[key] = json{{"exponent", fit.exponent}, {"log_constant", fit.log_constant}, {"points", fit.points}};
  };
  report("char_fn_fit", t, y);
  report("eigenvalue_fit", te, ye);

  if (prefix.empty()) {
    write_char_deviation_csv(std::cout, chars);
  } else {
    write_csv(prefix + "_char.csv", [&](std::ostream& os) { write_char_deviation_csv(os, chars); });
    write_csv(prefix + "_eigen.csv", [&](std::ostream& os) { write_eigen_deviation_csv(os, eigs); });
    write_text(prefix + "_fit.json", summary.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward and inverse spectral solver for Dirac systems with interior singularities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kSolverVersion));

  Overrides o;
  std::string problem, model, data, out, csv, reference;
  std::vector<int> sweep;
  bool strict = false;
  int m_min = 10, m_max = 60;
  double shift = 0.4;

  auto* fwd = app.add_subcommand("forward", "Eigenvalues and Weyl residues for k = -K..K");
  fwd->add_option("problem", problem, "Problem file")->required()->check(CLI::ExistingFile);
  add_numeric_flags(fwd, o, false);
  fwd->add_option("--out", out, "Spectral data file to write");
  fwd->add_option("--csv", csv, "Summary CSV to write");

  auto* inv = app.add_subcommand("inverse", "Reconstruct the potential from spectral data");
  inv->add_option("data", data, "Spectral data file")->required()->check(CLI::ExistingFile);
  inv->add_option("model", model, "Model problem file")->required()->check(CLI::ExistingFile);
  add_numeric_flags(inv, o, true);
  inv->add_option("--out", out, "Output prefix for <prefix>.csv and <prefix>_diagnostics.json");
  inv->add_option("--reference", reference, "Problem file whose potential is compared to the reconstruction")
      ->check(CLI::ExistingFile);

  auto* rt = app.add_subcommand("roundtrip", "Forward then inverse, reporting max |Qrec - Q| on Omega_epsilon");
  rt->add_option("problem", problem, "Target problem file")->required()->check(CLI::ExistingFile);
  rt->add_option("model", model, "Model problem file (default: target with zero potential)")
      ->check(CLI::ExistingFile);
  add_numeric_flags(rt, o, true);
  rt->add_option("--k-sweep", sweep, "Comma-separated list of K values")->delimiter(',');
  rt->add_option("--error-bound", o.error_bound, "Pass threshold on the final max error")
      ->check(CLI::PositiveNumber);
  rt->add_flag("--strict", strict, "Exit 1 when the error does not decrease or exceeds the bound");
  rt->add_option("--out", out, "Summary JSON to write");

  auto* asy = app.add_subcommand("asymptotics", "Delta_12 and eigenvalue deviations from their principal parts");
  asy->add_option("problem", problem, "Problem file")->required()->check(CLI::ExistingFile);
  add_numeric_flags(asy, o, false);
  asy->add_option("--m-min", m_min, "First lattice index")->check(CLI::PositiveNumber);
  asy->add_option("--m-max", m_max, "Last lattice index")->check(CLI::PositiveNumber);
  asy->add_option("--shift", shift, "Offset of the sample points from the lattice");
  asy->add_option("--out", out, "Output prefix for <prefix>_char.csv, <prefix>_eigen.csv and <prefix>_fit.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "forward") return cmd_forward(problem, o, out, csv);
    if (name == "inverse") return cmd_inverse(data, model, o, out, reference);
    if (name == "roundtrip") return cmd_roundtrip(problem, model, o, sweep, out, strict);
    if (m_max < m_min) throw ValidationError("--m-max must not be below --m-min");
    return cmd_asymptotics(problem, o, m_min, m_max, shift, out);
  } catch (const ValidationError& e) {
    std::cerr << "sdirac " << name << ": invalid input: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "sdirac " << name << ": numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "sdirac " << name << ": " << e.what() << "\n";
    return 1;
  }
}
