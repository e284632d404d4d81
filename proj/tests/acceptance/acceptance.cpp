// Acceptance gate: one PASS/FAIL line per criterion.
//
//   sdirac_acceptance        run all criteria
//   sdirac_acceptance 3 6    run the listed criteria
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sdirac/asymptotics.hpp"
#include "sdirac/forward.hpp"
#include "sdirac/inverse.hpp"

using namespace sdirac;

namespace {

struct Outcome {
  Outcome() = default;
  Outcome(bool p, std::string d, std::vector<std::string> i = {}) : pass(p), detail(std::move(d)), info(std::move(i)) {}

  bool pass = false;
  std::string detail;
  std::vector<std::string> info;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

ProblemSpec free_problem() { return {}; }

ProblemSpec constant_n0() {
  ProblemSpec p;
  p.potential = Potential::constant(0.3, 0.0);
  return p;
}

ProblemSpec trig_n1() {
  ProblemSpec p;
  p.singularities = {{kPi / 2, 0.3, 0.0}};
  p.potential = Potential::trig(0.2);
  return p;
}

ProblemSpec rotated_n1() {
  ProblemSpec p;
  p.singularities = {{1.2, cplx(0.45, 0.1), 0.4}};
  p.alpha = 0.3;
  p.beta = -0.25;
  p.potential = Potential::trig(0.3, 1.0, 0.5);
  return p;
}

ProblemSpec mixed_n2() {
  ProblemSpec p;
  p.singularities = {{0.9, cplx(0.35, 0.1), 0.3}, {2.2, 0.6, -0.2}};
  p.alpha = 0.2;
  p.beta = -0.4;
  p.potential = Potential::constant(0.2, cplx(0.0, 0.1));
  return p;
}

struct Named {
  const char* name;
  ProblemSpec spec;
};

std::vector<Named> scenarios() {
  return {{"free", free_problem()},
          {"constant N=0", constant_n0()},
          {"trig N=1", trig_n1()},
          {"rotated N=1", rotated_n1()},
          {"mixed N=2", mixed_n2()}};
}

double rel(const Mat2& a, const Mat2& b) { return (a - b).max_abs() / std::max(1.0, b.max_abs()); }

// 1. closed forms of the free problem
Outcome criterion1() {
  const ProblemSpec p = free_problem();
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> ux(0, kPi), ur(-20, 20), ui(-1.5, 1.5);
  double s_err = 0, d_err = 0;
  for (int i = 0; i < 30; ++i) {
    const double x = ux(rng);
    const cplx l(ur(rng), ui(rng));
    const Mat2 ref{std::cos(l * x), -std::sin(l * x), std::sin(l * x), std::cos(l * x)};
    s_err = std::max(s_err, rel(global_S(p, x, l).value, ref));
    d_err = std::max(d_err, std::abs(char_fn(p, l).d12() + std::sin(l * kPi)) / std::max(1.0, std::abs(std::sin(l * kPi))));
  }
  const auto t0 = std::chrono::steady_clock::now();
  const ForwardResult r = compute_spectral_data(p, 20);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double l_err = 0, a_err = 0;
  for (const auto& d : r.data) {
    l_err = std::max(l_err, std::abs(d.lambda - static_cast<double>(d.k)));
    a_err = std::max(a_err, std::abs(d.a - 1.0 / kPi));
  }
  const bool pass = s_err <= 1e-9 && d_err <= 1e-9 && l_err <= 1e-9 && a_err <= 1e-9 && seconds < 5.0 &&
                    r.data.size() == 41;
  return {pass, "S " + sci(s_err) + ", Delta_12 " + sci(d_err) + ", lambda_k " + sci(l_err) + ", a_k " +
                    sci(a_err) + " (tol 1e-9); K=20 in " + fmt("%.2f s", seconds) + " (limit 5 s)"};
}

// 2. structural invariants
Outcome criterion2() {
  double det_s = 0, det_d = 0, wr = 0, match = 0, fd = 0;
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> ux(0, kPi), ur(-25, 25), ui(-1.5, 1.5);
  for (const ProblemSpec& p : {trig_n1(), mixed_n2()}) {
    int n = 0;
    while (n < 50) {
      const double x = ux(rng);
      if (p.distance_to_singularity(x) < 1e-3) continue;
      const cplx l(ur(rng), ui(rng));
      det_s = std::max(det_s, std::abs(global_S(p, x, l).value.det() - 1.0));
      const CharMatrix D = char_fn(p, l);
      det_d = std::max(det_d, std::abs(D.delta.det() - 1.0));
      const cplx w = wronskian(psi(p, x, l).col2(), phi(p, x, l).col2());
      wr = std::max(wr, std::abs(w + D.d12()) / std::max(1.0, std::abs(D.d12())));
      ++n;
    }
    ForwardOptions shifted;
    for (std::size_t k = 0; k + 1 < p.size(); ++k)
      shifted.matching_points.push_back(0.3 * p.singularity(k).gamma + 0.7 * p.singularity(k + 1).gamma);
    if (p.size() == 1) shifted.matching_points = {};
    const double h = 1e-5;
    for (int i = 0; i < 10; ++i) {
      const double x = 0.05 + 0.31 * i;
      if (p.distance_to_singularity(x) < 1e-3) continue;
      const cplx l(ur(rng), ui(rng));
      const FundamentalMatrix f = global_S(p, x, l, true);
      match = std::max(match, rel(global_S(p, x, l, false, shifted).value, f.value));
      const Mat2 q = (1.0 / (2 * h)) * (global_S(p, x, l + h).value - global_S(p, x, l - h).value);
      fd = std::max(fd, rel(*f.dvalue, q));
    }
  }
  const bool pass = det_s <= 1e-9 && det_d <= 1e-9 && wr <= 1e-9 && match <= 1e-8 && fd <= 1e-5;
  return {pass, "det S " + sci(det_s) + ", det Delta " + sci(det_d) + ", Wronskian " + sci(wr) +
                    " (tol 1e-9); matching " + sci(match) + " (tol 1e-8); dS/dlambda vs FD " + sci(fd) +
                    " (tol 1e-5)"};
}

// 3. asymptotic decay exponents against nu
Outcome criterion3() {
  const ProblemSpec p = trig_n1();
  const double nu = nu_exponent(p.singularities);
  const auto rows = char_deviation(p, 10, 60, 0.4);
  std::vector<double> t, y;
  for (const auto& r : rows) {
    t.push_back(r.lambda.real());
    y.push_back(r.scaled_difference);
  }
  const PowerFit fc = fit_power_decay(t, y);
  std::vector<double> te, ye;
  for (const auto& e : eigen_deviation(p, 60))
    if (std::abs(e.k) >= 10) {
      te.push_back(std::abs(e.k));
      ye.push_back(e.deviation);
    }
  const PowerFit fe = fit_power_decay(te, ye);
  const bool pass = std::abs(fc.exponent - nu) <= 0.2 * nu && std::abs(fe.exponent - nu) <= 0.25 * nu;

  const ProblemSpec bare = p.with_potential(Potential::zero());
  std::vector<double> y0;
  for (const auto& r : char_deviation(bare, 10, 60, 0.4)) y0.push_back(r.scaled_difference);
  return {pass,
          "Delta_12 fit " + fmt("%.3f", fc.exponent) + " (need [" + fmt("%.2f", 0.8 * nu) + ", " +
              fmt("%.2f", 1.2 * nu) + "]), eigenvalue fit " + fmt("%.3f", fe.exponent) + " (need [" +
              fmt("%.2f", 0.75 * nu) + ", " + fmt("%.2f", 1.25 * nu) + "]), nu = " + fmt("%.2f", nu),
          {"same singularity with Q = 0: Delta_12 fit " + fmt("%.3f", fit_power_decay(t, y0).exponent)}};
}

// 4. argument-principle counts
Outcome criterion4() {
  bool pass = true;
  std::string detail;
  for (const auto& s : scenarios())
    for (int K : {10, 40}) {
      const EigenResult r = find_eigenvalues(s.spec, K);
      const bool ok = r.contour_count == 2 * K + 1 && static_cast<int>(r.eigenvalues.size()) == 2 * K + 1;
      pass = pass && ok;
      if (!ok) detail += std::string(" ") + s.name + " K=" + std::to_string(K) + ": " + std::to_string(r.contour_count);
    }
  return {pass, pass ? "count 2K+1 for K in {10, 40} over all scenarios" : "mismatch:" + detail};
}

std::vector<double> twenty_points(const ProblemSpec& model) {
  const auto grid = omega_grid(model, 0.1, 0.01);
  std::vector<double> out;
  for (int i = 0; i < 20; ++i) out.push_back(grid[static_cast<std::size_t>(i) * (grid.size() - 1) / 19]);
  return out;
}

PointValues values_at(const std::vector<std::vector<PhiSample>>& s, std::size_t i, double x) {
  PointValues v{x, {}};
  for (const auto& row : s) v.phi.push_back(row[i]);
  return v;
}

// 5. main-equation identities
Outcome criterion5() {
  const ProblemSpec target = trig_n1(), model = target.with_potential(Potential::zero());
  const int K = 40;
  const SpectralData td = compute_spectral_data(target, K).data, md = compute_spectral_data(model, K).data;
  const auto xs = twenty_points(model);

  const PairedData same = pair_data(md, md);
  const auto ms = sample_phi(model, same.all_lambdas(), xs);
  double h_zero = 0, psi_diff = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const MainEquationSystem sys = build_main_equation(same, values_at(ms, i, xs[i]));
    h_zero = std::max(h_zero, sys.H.cwiseAbs().maxCoeff());
    psi_diff = std::max(psi_diff, (solve_main_equation(sys).psi - sys.rhs).cwiseAbs().maxCoeff());
  }

  const PairedData paired = pair_data(td, md);
  const auto mv = sample_phi(model, paired.all_lambdas(), xs), tv = sample_phi(target, paired.all_lambdas(), xs);
  double identity = 0, at = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Eigen::MatrixXcd Ht = build_main_equation(paired, values_at(mv, i, xs[i])).H;
    const Eigen::MatrixXcd H = build_main_equation(paired, values_at(tv, i, xs[i])).H;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(H.rows(), H.cols());
    const double n = ((I - Ht) * (I + H) - I).cwiseAbs().rowwise().sum().maxCoeff();
    if (n > identity) {
      identity = n;
      at = xs[i];
    }
  }
  const bool pass = h_zero <= 1e-10 && psi_diff <= 1e-10 && identity < 1e-3;
  return {pass, "identical data: |H~| " + sci(h_zero) + ", |Psi - Psi~| " + sci(psi_diff) +
                    " (tol 1e-10); ||(I-H~)(I+H)-I|| at K=40 " + sci(identity) + " (x = " + fmt("%.3f", at) +
                    ", tol 1e-3), 20 points"};
}

// 6. round-trip reconstruction
Outcome criterion6() {
  bool pass = true;
  std::string detail;
  std::vector<std::string> info;
  for (const auto& [name, target] : {Named{"(a) constant N=0", constant_n0()}, Named{"(b) trig N=1", trig_n1()}}) {
    const ProblemSpec model = target.with_potential(Potential::zero());
    const auto grid = omega_grid(model, 0.1, 0.01);
    std::vector<double> err;
    std::string rows;
    for (int K : {10, 20, 40}) {
      const ReconstructionResult r = run_algorithm1(compute_spectral_data(target, K).data, model,
                                                    compute_spectral_data(model, K).data, grid);
      double e = 0, at = 0, inner = 0;
      for (std::size_t i = 0; i < r.x.size(); ++i) {
        const double d = (r.q[i] - target.q(r.x[i])).max_abs();
        if (d > e) {
          e = d;
          at = r.x[i];
        }
        if (r.x[i] >= 0.5 && r.x[i] <= kPi - 0.5) inner = std::max(inner, d);
      }
      err.push_back(e);
      rows += " K=" + std::to_string(K) + ": " + sci(e);
      info.push_back(std::string(name) + " K=" + std::to_string(K) + ": max at x = " + fmt("%.3f", at) +
                     ", max on [0.5, pi-0.5] " + sci(inner) + ", residual " + sci(r.max_residual()) +
                     ", projection " + sci(r.max_projection()));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < err.size(); ++i) decreasing = decreasing && err[i] <= 1.1 * err[i - 1];
    const bool ok = decreasing && err.back() <= 5e-3;
    pass = pass && ok;
    detail += std::string(detail.empty() ? "" : "; ") + name + rows + (decreasing ? " decreasing" : " not decreasing");
  }
  return {pass, detail + " (bound 5e-3 at K=40)", info};
}

// 7. residues against contour integrals of the Weyl function
Outcome criterion7() {
  double worst = 0;
  for (const auto& s : scenarios()) {
    const ForwardResult r = compute_spectral_data(s.spec, 6);
    for (int k = -5; k <= 4; ++k) {
      const cplx lk = r.data.at(k).lambda;
      const int n = 128;
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const cplx w = 0.1 * std::exp(kI * (2 * kPi * j / n));
        sum += weyl_function(s.spec, lk + w) * w;
      }
      worst = std::max(worst, std::abs(sum / static_cast<double>(n) - r.data.at(k).a));
    }
  }
  return {worst <= 1e-8, "max |a_k - contour integral| " + sci(worst) + " over 10 eigenvalues x 5 scenarios (tol 1e-8)"};
}

// 8. partial-fraction expansion of the Weyl function
Outcome criterion8() {
  const ProblemSpec p = trig_n1(), p0 = p.with_potential(Potential::zero());
  const cplx l(0.0, 0.37);
  const cplx diff = weyl_function(p, l) - weyl_function(p0, l);
  std::vector<double> err;
  std::string rows;
  for (int K : {10, 20, 40}) {
    err.push_back(std::abs(diff - weyl_partial_sum(compute_spectral_data(p, K).data, compute_spectral_data(p0, K).data, l)));
    rows += " K=" + std::to_string(K) + ": " + sci(err.back());
  }
  return {err[1] < err[0] && err[2] < err[1], "error at 0.37i" + rows};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= 8; ++i) selected.push_back(i);

  bool all = true;
  for (int c : selected) {
    if (c < 1 || c > 8) {
      std::fprintf(stderr, "unknown criterion %d\n", c);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s  [%.1f s]\n", c, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
    for (const auto& line : o.info) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
