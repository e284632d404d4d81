#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <Eigen/Dense>

#include "sdirac/error.hpp"
#include "sdirac/forward.hpp"
#include "sdirac/inverse.hpp"
#include "sdirac/io.hpp"

namespace py = pybind11;
using namespace sdirac;

namespace {

Eigen::Matrix2cd to_eigen(const Mat2& m) {
  Eigen::Matrix2cd e;
  e << m.a11, m.a12, m.a21, m.a22;
  return e;
}

ProblemFile parse_problem(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(e.what());
  }
  return problem_from_json(doc);
}

py::dict reconstruction_dict(const ReconstructionResult& r, const InverseOptions& options) {
  std::vector<cplx> q1, q2;
  std::vector<double> residual, condition;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    q1.push_back(r.q[i].a11);
    q2.push_back(r.q[i].a12);
    residual.push_back(r.diagnostics[i].solve_residual);
    condition.push_back(r.diagnostics[i].condition);
  }
  py::dict out;
  out["x"] = r.x;
  out["q1"] = q1;
  out["q2"] = q2;
  out["solve_residual"] = residual;
  out["condition"] = condition;
  out["diagnostics"] = reconstruction_diagnostics(r, options).dump();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Forward and inverse spectral solver for Dirac systems with interior singularities";
  m.attr("__version__") = kSolverVersion;

  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      PyErr_SetString(validation.ptr(), e.what());
    } catch (const NumericalError& e) {
      PyErr_SetString(numerical.ptr(), e.what());
    }
  });

  py::class_<ProblemFile>(m, "Problem")
      .def_static("from_json", &parse_problem, py::arg("text"))
      .def_static("load", &load_problem, py::arg("path"))
      .def("to_json", [](const ProblemFile& p) { return problem_to_json(p).dump(); })
      .def("with_zero_potential",
           [](const ProblemFile& p) {
             ProblemFile out = p;
             out.spec.potential = Potential::zero();
             return out;
           })
      .def_property_readonly("name", [](const ProblemFile& p) { return p.name; })
      .def_property_readonly("K", [](const ProblemFile& p) { return p.settings.K; })
      .def_property_readonly("nu", [](const ProblemFile& p) { return nu_exponent(p.spec.singularities); })
      .def_property_readonly("spec_hash", [](const ProblemFile& p) { return spec_hash(p.spec); })
      .def("potential", [](const ProblemFile& p, double x) { return to_eigen(p.spec.q(x)); }, py::arg("x"));

  py::class_<SpectralData>(m, "SpectralData")
      .def_property_readonly("K", &SpectralData::K)
      .def("__len__", &SpectralData::size)
      .def_property_readonly("k", [](const SpectralData& d) {
        std::vector<int> v;
        for (const auto& r : d) v.push_back(r.k);
        return v;
      })
      .def_property_readonly("eigenvalues", [](const SpectralData& d) {
        std::vector<cplx> v;
        for (const auto& r : d) v.push_back(r.lambda);
        return v;
      })
      .def_property_readonly("residues", [](const SpectralData& d) {
        std::vector<cplx> v;
        for (const auto& r : d) v.push_back(r.a);
        return v;
      })
      .def("to_json", [](const SpectralData& d) { return dump_spectral({{"", kSolverVersion, d.K(), 0.0, 0.0}, d}); })
      .def_static("from_json", [](const std::string& text) {
        try {
          return spectral_from_json(nlohmann::json::parse(text)).data;
        } catch (const nlohmann::json::exception& e) {
          throw ValidationError(e.what());
        }
      });

  m.def("fundamental_matrix",
        [](const ProblemFile& p, double x, cplx lambda) { return to_eigen(global_S(p.spec, x, lambda).value); },
        py::arg("problem"), py::arg("x"), py::arg("lam"), "S(x, lambda) with S(0, lambda) = I");
  m.def("char_matrix", [](const ProblemFile& p, cplx lambda) { return to_eigen(char_fn(p.spec, lambda).delta); },
        py::arg("problem"), py::arg("lam"), "Delta(lambda) = V^T(beta) S(pi, lambda) V(alpha)");
  m.def("weyl_function", [](const ProblemFile& p, cplx lambda) { return weyl_function(p.spec, lambda); },
        py::arg("problem"), py::arg("lam"));
  m.def(
      "spectral_data",
      [](const ProblemFile& p, std::optional<int> K) {
        const int k = K.value_or(p.settings.K);
        py::gil_scoped_release release;
        return compute_spectral_data(p.spec, k, p.settings.eigen_options()).data;
      },
      py::arg("problem"), py::arg("K") = py::none(), "Eigenvalues and Weyl residues for k = -K..K");
  m.def(
      "reconstruct",
      [](const SpectralData& data, const ProblemFile& model, std::optional<double> epsilon,
         std::optional<double> grid_step) {
        InverseOptions options = model.settings.inverse_options();
        if (epsilon) options.epsilon = *epsilon;
        if (grid_step) options.grid_step = *grid_step;
        ReconstructionResult r;
        {
          py::gil_scoped_release release;
          r = run_algorithm1(data, model.spec, options);
        }
        return reconstruction_dict(r, options);
      },
      py::arg("data"), py::arg("model"), py::arg("epsilon") = py::none(), py::arg("grid_step") = py::none(),
      "Solve the main equation on Omega_epsilon and return the reconstructed potential");
}
