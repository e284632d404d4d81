#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdirac/asymptotics.hpp"
#include "sdirac/forward.hpp"
#include "sdirac/inverse.hpp"
#include "sdirac/problem.hpp"

namespace sdirac {

inline constexpr const char* kSolverVersion = "0.1.0";

/// Numerical settings carried by a problem file; command-line flags override them.
struct SolverSettings {
  int K = 10;
  double rtol = 1e-11;
  double atol = 1e-13;
  double grid_step = 1e-2;
  double epsilon = 0.1;
  double error_bound = 5e-3;  // round-trip pass threshold on max |Qrec - Q|

  EigenOptions eigen_options() const;
  InverseOptions inverse_options() const;
};

struct ProblemFile {
  std::string name;
  ProblemSpec spec;
  SolverSettings settings;
};

/// Parses and validates a problem document. Unknown keys are rejected and every
/// ValidationError names the offending field.
ProblemFile problem_from_json(const nlohmann::json& doc);
nlohmann::json problem_to_json(const ProblemFile& problem);
nlohmann::json spec_to_json(const ProblemSpec& spec);

ProblemFile load_problem(const std::string& path);

/// FNV-1a 64-bit hash of the canonical JSON form of the spec, as 16 hex digits.
std::string spec_hash(const ProblemSpec& spec);

struct SpectralMetadata {
  std::string spec_hash;
  std::string solver_version = kSolverVersion;
  int K = 0;
  double rtol = 0.0;
  double atol = 0.0;
};

struct SpectralDataFile {
  SpectralMetadata metadata;
  SpectralData data;
};

nlohmann::json spectral_to_json(const SpectralDataFile& file);
SpectralDataFile spectral_from_json(const nlohmann::json& doc);

/// Deterministic text form; reading it back and writing again reproduces the same bytes.
std::string dump_spectral(const SpectralDataFile& file);
SpectralDataFile load_spectral(const std::string& path);

/// Reads a JSON document, turning parse errors into ValidationError.
nlohmann::json read_json(const std::string& path);
/// Writes text atomically enough for CLI use: the whole buffer or a NumericalError.
void write_text(const std::string& path, const std::string& text);

/// Shortest text of a double that reads back to the same value.
std::string format_double(double v);

void write_forward_csv(std::ostream& out, const ForwardResult& result);
void write_reconstruction_csv(std::ostream& out, const ReconstructionResult& result);
void write_char_deviation_csv(std::ostream& out, const std::vector<CharDeviation>& rows);
void write_eigen_deviation_csv(std::ostream& out, const std::vector<EigenDeviation>& rows);

/// Lambda-hat, Condition S flags, condition-3 quadratures and solve statistics.
nlohmann::json reconstruction_diagnostics(const ReconstructionResult& result, const InverseOptions& options);

/// max |Qrec - Q| over the reconstruction grid, taken entrywise on (q1, q2).
double reconstruction_error(const ReconstructionResult& result, const Potential& reference);

}  // namespace sdirac
