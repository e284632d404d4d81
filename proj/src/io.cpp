#include "sdirac/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <variant>

#include "sdirac/error.hpp"

namespace sdirac {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw ValidationError(where + "." + item.key() + ": unknown key");
  }
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double number(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(join(where, key) + ": missing");
  if (!it->is_number()) throw ValidationError(join(where, key) + ": expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ValidationError(join(where, key) + ": must be finite");
  return v;
}

double number_or(const json& obj, const std::string& where, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, where, key) : fallback;
}

cplx complex_value(const json& j, const std::string& where) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(where + ": must be finite");
    return {v, 0.0};
  }
  if (!j.is_object()) throw ValidationError(where + ": expected a number or {re, im}");
  reject_unknown(j, where, {"re", "im"});
  return {number(j, where, "re"), number_or(j, where, "im", 0.0)};
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::vector<cplx> complex_array(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(join(where, key) + ": missing");
  if (!it->is_array()) throw ValidationError(join(where, key) + ": expected an array");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < it->size(); ++i)
    out.push_back(complex_value((*it)[i], join(where, key) + "[" + std::to_string(i) + "]"));
  return out;
}

Potential potential_from_json(const json& j) {
  const std::string where = "potential";
  if (j.is_string()) {
    if (j.get<std::string>() == "zero") return Potential::zero();
    throw ValidationError(where + ": only \"zero\" may be given as a bare name");
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ValidationError(where + ".type: missing");
  const std::string type = j["type"].get<std::string>();
  if (type == "zero") {
    reject_unknown(j, where, {"type"});
    return Potential::zero();
  }
  if (type == "constant") {
    reject_unknown(j, where, {"type", "q1", "q2"});
    const cplx q1 = j.contains("q1") ? complex_value(j["q1"], where + ".q1") : cplx{};
    const cplx q2 = j.contains("q2") ? complex_value(j["q2"], where + ".q2") : cplx{};
    return Potential::constant(q1, q2);
  }
  if (type == "trig") {
    reject_unknown(j, where, {"type", "amplitude", "frequency", "phase"});
    return Potential::trig(number(j, where, "amplitude"), number_or(j, where, "frequency", 1.0),
                           number_or(j, where, "phase", 0.0));
  }
  if (type == "samples") {
    reject_unknown(j, where, {"type", "x0", "step", "q1", "q2"});
    return {SampledPotential(number_or(j, where, "x0", 0.0), number(j, where, "step"), complex_array(j, where, "q1"),
                             complex_array(j, where, "q2"))};
  }
  throw ValidationError(where + ".type: unknown potential \"" + type + "\" (expected zero, constant, trig or samples)");
}

json potential_to_json(const Potential& p) {
  struct Visitor {
    json operator()(const ZeroPotential&) const { return json{{"type", "zero"}}; }
    json operator()(const ConstantPotential& c) const {
      return json{{"type", "constant"}, {"q1", complex_json(c.q1)}, {"q2", complex_json(c.q2)}};
    }
    json operator()(const TrigPotential& t) const {
      return json{{"type", "trig"}, {"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}};
    }
    json operator()(const SampledPotential& s) const {
      json q1 = json::array(), q2 = json::array();
      for (cplx z : s.q1()) q1.push_back(complex_json(z));
      for (cplx z : s.q2()) q2.push_back(complex_json(z));
      return json{{"type", "samples"}, {"x0", s.x0()}, {"step", s.step()}, {"q1", q1}, {"q2", q2}};
    }
  };
  return std::visit(Visitor{}, p.variant());
}

SolverSettings settings_from_json(const json& j) {
  const std::string where = "solver";
  reject_unknown(j, where, {"K", "rtol", "atol", "grid_step", "epsilon", "error_bound"});
  SolverSettings s;
  if (j.contains("K")) {
    if (!j["K"].is_number_integer() || j["K"].get<long>() < 0 || j["K"].get<long>() > 100000)
      throw ValidationError("solver.K: expected a non-negative integer");
    s.K = j["K"].get<int>();
  }
  s.rtol = number_or(j, where, "rtol", s.rtol);
  s.atol = number_or(j, where, "atol", s.atol);
  s.grid_step = number_or(j, where, "grid_step", s.grid_step);
  s.epsilon = number_or(j, where, "epsilon", s.epsilon);
  s.error_bound = number_or(j, where, "error_bound", s.error_bound);
  if (!(s.rtol > 0.0)) throw ValidationError("solver.rtol: must be positive");
  if (!(s.atol > 0.0)) throw ValidationError("solver.atol: must be positive");
  if (!(s.grid_step > 0.0)) throw ValidationError("solver.grid_step: must be positive");
  if (!(s.epsilon > 0.0)) throw ValidationError("solver.epsilon: must be positive");
  if (!(s.error_bound > 0.0)) throw ValidationError("solver.error_bound: must be positive");
  return s;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) {
    if (!line.empty()) line += ',';
    line += c;
  }
  return line + '\n';
}

}  // namespace

EigenOptions SolverSettings::eigen_options() const {
  EigenOptions o;
  o.forward.ode.rtol = rtol;
  o.forward.ode.atol = atol;
  return o;
}

InverseOptions SolverSettings::inverse_options() const {
  InverseOptions o;
  o.epsilon = epsilon;
  o.grid_step = grid_step;
  o.eigen = eigen_options();
  return o;
}

ProblemFile problem_from_json(const json& doc) {
  reject_unknown(doc, "problem", {"name", "singularities", "alpha", "beta", "potential", "solver"});
  ProblemFile out;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ValidationError("name: expected a string");
    out.name = doc["name"].get<std::string>();
  }
  if (doc.contains("singularities")) {
    const json& list = doc["singularities"];
    if (!list.is_array()) throw ValidationError("singularities: expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "singularities[" + std::to_string(k) + "]";
      reject_unknown(list[k], where, {"gamma", "mu", "eta"});
      if (!list[k].contains("mu")) throw ValidationError(where + ".mu: missing");
      out.spec.singularities.push_back(
          {number(list[k], where, "gamma"), complex_value(list[k]["mu"], where + ".mu"),
           number_or(list[k], where, "eta", 0.0)});
    }
  }
  out.spec.alpha = number_or(doc, "", "alpha", 0.0);
  out.spec.beta = number_or(doc, "", "beta", 0.0);
  if (doc.contains("potential")) out.spec.potential = potential_from_json(doc["potential"]);
  if (doc.contains("solver")) out.settings = settings_from_json(doc["solver"]);
  out.spec.validate();
  return out;
}

json spec_to_json(const ProblemSpec& spec) {
  json sing = json::array();
  for (const auto& s : spec.singularities)
    sing.push_back(json{{"gamma", s.gamma}, {"mu", complex_json(s.mu)}, {"eta", s.eta}});
  return json{{"singularities", sing},
              {"alpha", spec.alpha},
              {"beta", spec.beta},
              {"potential", potential_to_json(spec.potential)}};
}

json problem_to_json(const ProblemFile& problem) {
  json doc = spec_to_json(problem.spec);
  if (!problem.name.empty()) doc["name"] = problem.name;
  const SolverSettings& s = problem.settings;
  doc["solver"] = json{{"K", s.K},         {"rtol", s.rtol},       {"atol", s.atol},
                       {"grid_step", s.grid_step}, {"epsilon", s.epsilon}, {"error_bound", s.error_bound}};
  return doc;
}

ProblemFile load_problem(const std::string& path) {
  const json doc = read_json(path);
  try {
    return problem_from_json(doc);
  } catch (const ValidationError& e) {
    throw ValidationError("problem file " + path + ": " + e.what());
  }
}

std::string spec_hash(const ProblemSpec& spec) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(spec_to_json(spec).dump())));
  return buf;
}

json spectral_to_json(const SpectralDataFile& file) {
  json data = json::array();
  for (const auto& d : file.data) {
    if (!std::isfinite(d.lambda.real()) || !std::isfinite(d.lambda.imag()) || !std::isfinite(d.a.real()) ||
        !std::isfinite(d.a.imag()))
      throw NumericalError("spectral data: non-finite entry at index " + std::to_string(d.k));
    data.push_back(json{{"k", d.k}, {"lambda", complex_json(d.lambda)}, {"a", complex_json(d.a)}});
  }
  const SpectralMetadata& m = file.metadata;
  return json{{"format", "sdirac.spectral_data"},
              {"metadata",
               {{"spec_hash", m.spec_hash},
                {"solver_version", m.solver_version},
                {"K", m.K},
                {"rtol", m.rtol},
                {"atol", m.atol}}},
              {"data", data}};
}

SpectralDataFile spectral_from_json(const json& doc) {
  reject_unknown(doc, "spectral data", {"format", "metadata", "data"});
  if (!doc.contains("format") || doc["format"] != "sdirac.spectral_data")
    throw ValidationError("format: expected \"sdirac.spectral_data\"");
  SpectralDataFile out;
  if (doc.contains("metadata")) {
    const json& m = doc["metadata"];
    reject_unknown(m, "metadata", {"spec_hash", "solver_version", "K", "rtol", "atol"});
    if (m.contains("spec_hash")) out.metadata.spec_hash = m["spec_hash"].get<std::string>();
    if (m.contains("solver_version")) out.metadata.solver_version = m["solver_version"].get<std::string>();
    if (m.contains("K")) {
      if (!m["K"].is_number_integer()) throw ValidationError("metadata.K: expected an integer");
      out.metadata.K = m["K"].get<int>();
    }
    out.metadata.rtol = number_or(m, "metadata", "rtol", 0.0);
    out.metadata.atol = number_or(m, "metadata", "atol", 0.0);
  }
  if (!doc.contains("data") || !doc["data"].is_array()) throw ValidationError("data: expected an array");
  std::vector<SpectralDatum> rows;
  for (std::size_t i = 0; i < doc["data"].size(); ++i) {
    const json& r = doc["data"][i];
    const std::string where = "data[" + std::to_string(i) + "]";
    reject_unknown(r, where, {"k", "lambda", "a"});
    if (!r.contains("k") || !r["k"].is_number_integer()) throw ValidationError(where + ".k: expected an integer");
    if (!r.contains("lambda")) throw ValidationError(where + ".lambda: missing");
    if (!r.contains("a")) throw ValidationError(where + ".a: missing");
    rows.push_back({r["k"].get<int>(), complex_value(r["lambda"], where + ".lambda"), complex_value(r["a"], where + ".a")});
  }
  out.data = SpectralData(std::move(rows));
  if (doc.contains("metadata") && doc["metadata"].contains("K") && out.metadata.K != out.data.K())
    throw ValidationError("metadata.K: " + std::to_string(out.metadata.K) + " does not match the data range [-" +
                          std::to_string(out.data.K()) + ", " + std::to_string(out.data.K()) + "]");
  return out;
}

std::string dump_spectral(const SpectralDataFile& file) { return spectral_to_json(file).dump(2) + "\n"; }

SpectralDataFile load_spectral(const std::string& path) {
  const json doc = read_json(path);
  try {
    return spectral_from_json(doc);
  } catch (const ValidationError& e) {
    throw ValidationError("spectral data file " + path + ": " + e.what());
  } catch (const json::exception& e) {
    throw ValidationError("spectral data file " + path + ": " + e.what());
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

void write_forward_csv(std::ostream& out, const ForwardResult& result) {
  out << "k,lambda_re,lambda_im,a_re,a_im,residual\n";
  for (std::size_t i = 0; i < result.data.size(); ++i) {
    const SpectralDatum& d = result.data.data()[i];
    const double residual = i < result.eigen.eigenvalues.size() ? result.eigen.eigenvalues[i].residual : 0.0;
    out << csv_row({std::to_string(d.k), format_double(d.lambda.real()), format_double(d.lambda.imag()),
                    format_double(d.a.real()), format_double(d.a.imag()), format_double(residual)});
  }
}

void write_reconstruction_csv(std::ostream& out, const ReconstructionResult& result) {
  out << "x,q1_re,q1_im,q2_re,q2_im,solve_residual,cond_est\n";
  for (std::size_t i = 0; i < result.x.size(); ++i) {
    const Mat2& q = result.q[i];
    out << csv_row({format_double(result.x[i]), format_double(q.a11.real()), format_double(q.a11.imag()),
                    format_double(q.a12.real()), format_double(q.a12.imag()),
                    format_double(result.diagnostics[i].solve_residual),
                    format_double(result.diagnostics[i].condition)});
  }
}

void write_char_deviation_csv(std::ostream& out, const std::vector<CharDeviation>& rows) {
  out << "lambda_re,lambda_im,d12_re,d12_im,d12_principal_re,d12_principal_im,scaled_difference\n";
  for (const auto& r : rows)
    out << csv_row({format_double(r.lambda.real()), format_double(r.lambda.imag()), format_double(r.d12.real()),
                    format_double(r.d12.imag()), format_double(r.d12_principal.real()),
                    format_double(r.d12_principal.imag()), format_double(r.scaled_difference)});
}

void write_eigen_deviation_csv(std::ostream& out, const std::vector<EigenDeviation>& rows) {
  out << "k,lambda_re,lambda_im,lambda0_re,lambda0_im,deviation\n";
  for (const auto& r : rows)
    out << csv_row({std::to_string(r.k), format_double(r.lambda.real()), format_double(r.lambda.imag()),
                    format_double(r.lambda_principal.real()), format_double(r.lambda_principal.imag()),
                    format_double(r.deviation)});
}

json reconstruction_diagnostics(const ReconstructionResult& result, const InverseOptions& options) {
  return json{{"K", result.paired.K},
              {"lambda_hat", result.paired.lambda_hat},
              {"epsilon", options.epsilon},
              {"grid_step", options.grid_step},
              {"points", result.x.size()},
              {"max_solve_residual", result.max_residual()},
              {"max_condition", result.max_condition()},
              {"max_projection", result.max_projection()},
              {"condition_cap", options.condition_cap},
              {"condition_s_violations", result.flags.size()},
              {"flags", result.flags},
              {"condition3", result.condition3}};
}

double reconstruction_error(const ReconstructionResult& result, const Potential& reference) {
  double worst = 0.0;
  for (std::size_t i = 0; i < result.x.size(); ++i) {
    const PotentialValue v = reference.at(result.x[i]);
    worst = std::max({worst, std::abs(result.q[i].a11 - v.q1), std::abs(result.q[i].a12 - v.q2)});
  }
  return worst;
}

}  // namespace sdirac
