#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sdirac/error.hpp"
#include "sdirac/forward.hpp"

using namespace sdirac;

namespace {

ProblemSpec n1_trig() {
  ProblemSpec p;
  p.singularities = {{kPi / 2, 0.3, 0.0}};
  p.potential = Potential::trig(0.2);
  return p;
}

ProblemSpec n2_mixed() {
  ProblemSpec p;
  p.singularities = {{0.9, cplx(0.35, 0.1), 0.3}, {2.2, 0.6, -0.2}};
  p.alpha = 0.2;
  p.beta = -0.4;
  p.potential = Potential::constant(0.2, cplx(0.0, 0.1));
  return p;
}

}  // namespace

TEST_CASE("free problem: closed forms") {
  const ProblemSpec free;
  for (cplx l : {cplx(0.3, 0.0), cplx(5.5, 0.7), cplx(-11.0, -0.2)}) {
    for (double x : {0.0, 1.1, kPi}) {
      const Mat2 S = global_S(free, x, l).value;
      const Mat2 ref{std::cos(l * x), -std::sin(l * x), std::sin(l * x), std::cos(l * x)};
      CHECK((S - ref).max_abs() < 1e-10 * ref.max_abs());
    }
    CHECK(std::abs(char_fn(free, l).d12() + std::sin(l * kPi)) < 1e-10 * std::abs(std::sin(l * kPi)) + 1e-12);
    CHECK(std::abs(char_fn_asymptotic(free, l) + std::sin(l * kPi)) < 1e-12 * std::abs(std::sin(l * kPi)) + 1e-14);
  }
  const SeedResult seeds = seed_zeros(free, 4);
  REQUIRE(seeds.seeds.size() == 9);
  for (const auto& [k, z] : seeds.seeds) CHECK(std::abs(z - static_cast<double>(k)) < 1e-12);
  CHECK(strip_height(seeds) == doctest::Approx(1.0));

  const ForwardResult r = compute_spectral_data(free, 5);
  CHECK(r.eigen.contour_count == 11);
  for (const auto& d : r.data) {
    CHECK(std::abs(d.lambda - static_cast<double>(d.k)) < 1e-9);
    CHECK(std::abs(d.a - 1.0 / kPi) < 1e-9);
  }
}

TEST_CASE("S across a singularity agrees with integration along a complex detour") {
  const ProblemSpec p = n1_trig();
  const double g = p.singularity(0).gamma, r = 0.3;
  for (cplx l : {cplx(2.3, 0.2), cplx(-4.1, 0.0)}) {
    Mat2 y = oracle::rk4_segment(p, 0, l, 0.0, g - r, Mat2::identity(), 6000);
    y = oracle::rk4_upper_arc(p, 0, l, r, y, 6000, true);
    for (double x : {g + r, 2.4, kPi}) {
      const Mat2 ref = oracle::rk4_segment(p, 0, l, g + r, x, y, 6000);
      CHECK(oracle::rel_diff(global_S(p, x, l).value, ref) < 1e-8);
    }
  }
}

TEST_CASE("determinants and the Wronskian identity") {
  const ProblemSpec p = n2_mixed();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ux(0.0, kPi), ur(-30.0, 30.0), ui(-2.0, 2.0);
  int checked = 0;
  while (checked < 50) {
    const double x = ux(rng);
    if (p.distance_to_singularity(x) < 1e-3) continue;
    const cplx l(ur(rng), ui(rng));
    const Mat2 S = global_S(p, x, l).value;
    CHECK(std::abs(S.det() - 1.0) < 1e-9);
    const CharMatrix D = char_fn(p, l);
    CHECK(std::abs(D.delta.det() - 1.0) < 1e-9);
    const Vec2 ph = phi(p, x, l).col2(), ps = psi(p, x, l).col2();
    CHECK(std::abs(wronskian(ps, ph) + D.d12()) < 1e-9 * std::max(1.0, std::abs(D.d12())));
    ++checked;
  }
}

TEST_CASE("matching points do not change S") {
  const ProblemSpec p = n2_mixed();
  ForwardOptions shifted;
  shifted.matching_points = {1.3};
  for (cplx l : {cplx(1.7, 0.1), cplx(15.2, -0.6)})
    for (double x : {0.5, 1.9, 3.0}) {
      const Mat2 a = global_S(p, x, l).value, b = global_S(p, x, l, false, shifted).value;
      CHECK(oracle::rel_diff(a, b) < 1e-8);
    }
}

TEST_CASE("dS/dlambda matches central differences") {
  const ProblemSpec p = n2_mixed();
  const double h = 1e-5;
  for (cplx l : {cplx(2.2, 0.3), cplx(-9.4, 0.0)})
    for (double x : {0.7, 2.0, kPi}) {
      const FundamentalMatrix f = global_S(p, x, l, true);
      const Mat2 fd = (1.0 / (2 * h)) * (global_S(p, x, l + h).value - global_S(p, x, l - h).value);
      CHECK((*f.dvalue - fd).max_abs() < 1e-5 * std::max(1.0, fd.max_abs()));
    }
}

TEST_CASE("eigenvalues of a singular problem: count, residues and the Weyl function") {
  const ProblemSpec p = n1_trig();
  const int K = 8;
  const ForwardResult r = compute_spectral_data(p, K);
  CHECK(r.eigen.contour_count == 2 * K + 1);
  REQUIRE(r.data.size() == static_cast<std::size_t>(2 * K + 1));
  for (std::size_t i = 1; i < r.data.size(); ++i) CHECK(r.data.data()[i].lambda.real() > r.data.data()[i - 1].lambda.real());
  for (const auto& e : r.eigen.eigenvalues) CHECK(e.residual < 1e-10);

  // Residue of M from a trapezoid rule on a small circle around each eigenvalue.
  for (int k : {-3, 0, 2, 7}) {
    const cplx lk = r.data.at(k).lambda;
    const int n = 64;
    const double rho = 0.05;
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const cplx w = rho * std::exp(kI * (2 * kPi * j / n));
      sum += weyl_function(p, lk + w) * w;
    }
    const cplx contour = sum / static_cast<double>(n);
    CHECK(std::abs(contour - r.data.at(k).a) < 1e-8);
  }
}

TEST_CASE("lattice shift follows the boundary angles") {
  ProblemSpec p;
  p.alpha = 0.3;
  p.beta = -0.2;
  CHECK(lattice_shift(p) == doctest::Approx(-0.5 / kPi));
  const ForwardResult r = compute_spectral_data(p, 3);
  for (const auto& d : r.data) CHECK(std::abs(d.lambda - (d.k - 0.5 / kPi)) < 1e-9);
}

TEST_CASE("boundary normalizations of phi and psi") {
  const ProblemSpec p = n2_mixed();
  const cplx l(3.3, -0.4);
  CHECK((phi(p, 0.0, l) - rotation(p.alpha)).max_abs() == 0.0);
  CHECK((psi(p, kPi, l) - rotation(p.beta)).max_abs() < 1e-12);
  CHECK((global_S(p, 0.0, l).value - Mat2::identity()).max_abs() == 0.0);
}

TEST_CASE("free problem with beta = pi/2") {
  ProblemSpec p;
  p.beta = kPi / 2;
  for (cplx l : {cplx(0.7, 0.0), cplx(3.2, 0.5)})
    CHECK(std::abs(char_fn(p, l).d12() - std::cos(l * kPi)) < 1e-10 * std::max(1.0, std::abs(std::cos(l * kPi))));
  for (const auto& [k, z] : seed_zeros(p, 3).seeds) CHECK(std::abs(z - (k + 0.5)) < 1e-12);
}

TEST_CASE("free Weyl function is cot") {
  const ProblemSpec free;
  for (cplx l : {cplx(0.3, 0.2), cplx(2.7, -0.1)})
    CHECK(std::abs(weyl_function(free, l) - std::cos(l * kPi) / std::sin(l * kPi)) < 1e-9);
  CHECK(std::abs(weyl_residue(free, 2.0) - 1.0 / kPi) < 1e-10);
}

TEST_CASE("principal part with one centred singularity") {
  ProblemSpec p;
  p.singularities = {{kPi / 2, 0.3, 0.0}};
  for (double l : {2.4, 10.4, 31.4})
    CHECK(std::abs(char_fn_asymptotic(p, l) - (-std::sin(l * kPi) - std::sin(0.3 * kPi))) < 1e-12);
  // Seeds stay within |sin pi mu| of the integer lattice; each window holds one zero of Delta^0_12.
  const double bound = std::sin(0.3 * kPi);
  for (const auto& [k, z] : seed_zeros(p, 6).seeds) CHECK(std::abs(z - static_cast<double>(k)) <= bound);
}

TEST_CASE("eigenvalues depend continuously on a small potential") {
  std::vector<double> drift;
  for (double eps : {0.1, 0.01, 0.001}) {
    ProblemSpec p;
    p.potential = Potential::trig(eps);
    const ForwardResult r = compute_spectral_data(p, 4);
    double d = 0;
    for (const auto& e : r.data) d = std::max(d, std::abs(e.lambda - static_cast<double>(e.k)));
    drift.push_back(d);
  }
  CHECK(drift[1] < drift[0]);
  CHECK(drift[2] < drift[1]);
  CHECK(drift[2] < 1e-3);
}

TEST_CASE("Weyl function minus its model is the partial-fraction sum") {
  const ProblemSpec p = n1_trig();
  const ProblemSpec p0 = p.with_potential(Potential::zero());
  const cplx l(0.0, 0.37);
  const cplx diff = weyl_function(p, l) - weyl_function(p0, l);
  std::vector<double> err;
  for (int K : {5, 10, 20}) {
    const SpectralData d = compute_spectral_data(p, K).data, d0 = compute_spectral_data(p0, K).data;
    err.push_back(std::abs(diff - weyl_partial_sum(d, d0, l)));
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
}
