#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "sdirac/asymptotics.hpp"
#include "sdirac/error.hpp"
#include "sdirac/io.hpp"

using namespace sdirac;
using nlohmann::json;

namespace {

const json kProblem = json::parse(R"({
  "name": "sample",
  "singularities": [{"gamma": 1.2, "mu": {"re": 0.3, "im": 0.05}, "eta": 0.1}],
  "alpha": 0.1,
  "beta": -0.2,
  "potential": {"type": "trig", "amplitude": 0.2},
  "solver": {"K": 12, "grid_step": 0.02}
})");

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("problem documents round-trip") {
  const ProblemFile p = problem_from_json(kProblem);
  CHECK(p.name == "sample");
  CHECK(p.spec.singularity(0).mu == cplx(0.3, 0.05));
  CHECK(p.settings.K == 12);
  CHECK(p.settings.grid_step == 0.02);
  CHECK(p.settings.epsilon == 0.1);
  const ProblemFile q = problem_from_json(problem_to_json(p));
  CHECK(problem_to_json(q) == problem_to_json(p));
  CHECK(spec_hash(q.spec) == spec_hash(p.spec));
  CHECK(spec_hash(p.spec).size() == 16);
  CHECK(spec_hash(p.spec.with_potential(Potential::zero())) != spec_hash(p.spec));
}

TEST_CASE("problem documents are schema-checked") {
  auto fails_with = [](json doc, const char* needle) {
    CHECK_THROWS_WITH_AS(problem_from_json(doc), doctest::Contains(needle), ValidationError);
  };
  json d = kProblem;
  d["extra"] = 1;
  fails_with(d, "extra: unknown key");
  d = kProblem;
  d["singularities"][0]["nu"] = 1;
  fails_with(d, "singularities[0].nu");
  d = kProblem;
  d["singularities"][0]["mu"] = -0.3;
  fails_with(d, "singularities[0].mu");
  d = kProblem;
  d["potential"] = {{"type", "gaussian"}};
  fails_with(d, "potential.type");
  d = kProblem;
  d["potential"]["amplitude"] = "big";
  fails_with(d, "potential.amplitude");
  d = kProblem;
  d["solver"]["K"] = -1;
  fails_with(d, "solver.K");
  d = kProblem;
  d["solver"]["epsilon"] = 0;
  fails_with(d, "solver.epsilon");
  d = kProblem;
  d["singularities"][0].erase("mu");
  fails_with(d, "singularities[0].mu: missing");
}

TEST_CASE("sample and constant potentials parse") {
  json d = {{"potential", {{"type", "constant"}, {"q1", 0.3}, {"q2", {{"re", 0.0}, {"im", 0.1}}}}}};
  const ProblemFile c = problem_from_json(d);
  CHECK(c.spec.potential.at(1.0).q2 == cplx(0.0, 0.1));
  std::vector<double> q1(40), q2(40, 0.0);
  for (std::size_t i = 0; i < q1.size(); ++i) q1[i] = std::sin(0.1 * i);
  d = {{"potential", {{"type", "samples"}, {"step", 0.1}, {"q1", q1}, {"q2", q2}}}};
  const ProblemFile s = problem_from_json(d);
  CHECK(std::abs(s.spec.potential.at(1.05).q1 - std::sin(1.05)) < 1e-4);
  CHECK(problem_from_json(problem_to_json(s)).spec.potential.at(2.0).q1 == s.spec.potential.at(2.0).q1);
}

TEST_CASE("spectral data files are lossless and byte-stable") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<SpectralDatum> rows;
  for (int k = -7; k <= 7; ++k) rows.push_back({k, cplx(k + u(rng) * 1e-3, u(rng) * 1e-17), cplx(u(rng) / 3, -0.0)});
  const SpectralDataFile f{{"0123456789abcdef", kSolverVersion, 7, 1e-11, 1e-13}, SpectralData(rows)};
  const std::string text = dump_spectral(f);
  const SpectralDataFile back = spectral_from_json(json::parse(text));
  CHECK(dump_spectral(back) == text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(same_bits(back.data.data()[i].lambda.real(), rows[i].lambda.real()));
    CHECK(same_bits(back.data.data()[i].lambda.imag(), rows[i].lambda.imag()));
    CHECK(same_bits(back.data.data()[i].a.imag(), rows[i].a.imag()));
  }
  CHECK(back.metadata.spec_hash == "0123456789abcdef");
  CHECK(back.metadata.K == 7);

  json bad = json::parse(text);
  bad["data"].erase(bad["data"].begin() + 3);
  CHECK_THROWS_AS(spectral_from_json(bad), ValidationError);
  bad = json::parse(text);
  bad["metadata"]["K"] = 8;
  CHECK_THROWS_WITH_AS(spectral_from_json(bad), doctest::Contains("metadata.K"), ValidationError);
}

TEST_CASE("shortest decimal form reads back exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(same_bits(std::stod(format_double(v)), v));
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("CSV headers") {
  ForwardResult fr{SpectralData({{0, 0.0, 1.0}}), {}};
  fr.eigen.eigenvalues.push_back({0, 0.0, 1.0, 1e-15});
  std::ostringstream a, b, c, d;
  write_forward_csv(a, fr);
  CHECK(a.str() == "k,lambda_re,lambda_im,a_re,a_im,residual\n0,0,0,1,0,1e-15\n");
  write_reconstruction_csv(b, ReconstructionResult{});
  CHECK(b.str() == "x,q1_re,q1_im,q2_re,q2_im,solve_residual,cond_est\n");
  write_char_deviation_csv(c, {});
  CHECK(c.str().rfind("lambda_re,lambda_im,d12_re", 0) == 0);
  write_eigen_deviation_csv(d, {{1, 1.0, 1.0, 0.0}});
  CHECK(d.str() == "k,lambda_re,lambda_im,lambda0_re,lambda0_im,deviation\n1,1,0,1,0,0\n");
}

TEST_CASE("power-law fit") {
  std::vector<double> t, y;
  for (int m = 10; m <= 60; ++m) {
    t.push_back(m);
    y.push_back(3.0 * std::pow(m, -0.6));
  }
  const PowerFit f = fit_power_decay(t, y);
  CHECK(f.exponent == doctest::Approx(0.6));
  CHECK(std::exp(f.log_constant) == doctest::Approx(3.0));
  CHECK(f.points == t.size());
  CHECK_THROWS_AS(fit_power_decay({1.0}, {1.0}), ValidationError);
}

TEST_CASE("free problem has no asymptotic deviation") {
  const auto rows = char_deviation(ProblemSpec{}, 10, 14);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) CHECK(r.scaled_difference < 1e-9);
}
