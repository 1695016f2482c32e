// Copyright 2026 The skewlda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <optional>
#include <sstream>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skewlda/asymptotics.hpp"
#include "skewlda/cli.hpp"
#include "skewlda/error.hpp"
#include "skewlda/estimators.hpp"
#include "skewlda/model.hpp"
#include "skewlda/moments.hpp"
#include "skewlda/montecarlo.hpp"

namespace py = pybind11;
using namespace skewlda;

namespace {

model::MixtureParams make_params(double alpha1, const Vector& mu1, const Vector& mu2,
                                 const Matrix& sigma) {
  return model::MixtureParams(alpha1, mu1, mu2, linalg::SpdMatrix(sigma));
}

model::DataSet make_data(const Matrix& x, const std::optional<Eigen::VectorXi>& labels) {
  return model::DataSet{x, labels};
}

py::dict estimate_to_dict(const estimators::DirectionEstimate& est) {
  py::dict d;
  d["method"] = std::string(estimators::method_name(est.method));
  d["raw"] = est.raw;
  d["unit"] = est.unit;
  d["converged"] = est.converged;
  d["iterations"] = est.iterations;
  d["restarts"] = est.restarts;
  d["sign_reference_applied"] = est.sign_reference_applied;
  d["ambiguous_leading_eigenvalue"] = est.ambiguous_leading_eigenvalue;
  d["objective_monotone"] = est.objective_monotone;
  return d;
}

montecarlo::ExperimentConfig parse_config(const std::string& json_text, bool chat) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  return cli::config_from_json(j,
                               chat ? montecarlo::SigmaMode::kIdentity
                                    : montecarlo::SigmaMode::kRandomAAt);
}

}  // namespace

PYBIND11_MODULE(_skewlda, m) {
  m.doc() = "Unsupervised linear discriminant directions from skewness";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      std::string msg = std::string(error_kind_name(e.kind())) + ": " + e.what();
      PyErr_SetString(PyExc_ValueError, msg.c_str());
    }
  });

  m.def(
      "sample",
      [](double alpha1, const Vector& mu1, const Vector& mu2, const Matrix& sigma,
         Eigen::Index n, std::uint64_t seed) {
        RandomStream rng(seed);
        auto data = model::sample(make_params(alpha1, mu1, mu2, sigma), n, rng);
        return py::make_tuple(data.observations, *data.labels);
      },
      py::arg("alpha1"), py::arg("mu1"), py::arg("mu2"), py::arg("sigma"), py::arg("n"),
      py::arg("seed") = 0, "Draw n labelled rows from the two-component mixture.");

  m.def(
      "estimate",
      [](const std::string& method, const Matrix& x,
         std::optional<Eigen::VectorXi> labels, std::optional<double> alpha1, double tol,
         int max_iter, std::uint64_t seed) {
        estimators::IterationOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        RandomStream rng(seed);
        return estimate_to_dict(estimators::estimate(estimators::parse_method(method),
                                                     make_data(x, labels), alpha1, opts,
                                                     rng));
      },
      py::arg("method"), py::arg("x"), py::arg("labels") = py::none(),
      py::arg("alpha1") = py::none(), py::arg("tol") = 1e-12, py::arg("max_iter") = 200,
      py::arg("seed") = 0,
      "Estimate the discriminant direction with one of mom, skewvec, tobi, jade3, lda, pp.");

  m.def("c0_constant", &asymptotics::c0_constant, py::arg("alpha1"), py::arg("tau"));
  m.def("c_skewvec", &asymptotics::c_skewvec, py::arg("alpha1"), py::arg("tau"),
        py::arg("p"));
  m.def("c_lda", &asymptotics::c_lda, py::arg("alpha1"), py::arg("tau"));
  m.def(
      "avar_ae",
      [](double c, double alpha1, const Vector& h, const Matrix& sigma) {
        return asymptotics::avar_ae(
                   c, model::MixtureParams::centered(alpha1, h, linalg::SpdMatrix(sigma)))
            .covariance;
      },
      py::arg("c"), py::arg("alpha1"), py::arg("h"), py::arg("sigma"));
  m.def(
      "avar_mom",
      [](double alpha1, const Vector& h, const Matrix& sigma) {
        return asymptotics::avar_mom(
                   model::MixtureParams::centered(alpha1, h, linalg::SpdMatrix(sigma)))
            .covariance;
      },
      py::arg("alpha1"), py::arg("h"), py::arg("sigma"));

  m.def(
      "population_moments",
      [](double alpha1, const Vector& h, const Matrix& sigma) {
        const auto pm = model::population_moments(
            model::MixtureParams::centered(alpha1, h, linalg::SpdMatrix(sigma)));
        py::dict d;
        d["c2"] = pm.c2;
        d["c3"] = pm.c3;
        d["cov_x_xkronx"] = pm.cov_x_xkronx;
        d["cov_xkronx"] = pm.cov_xkronx;
        d["cov_x_xxtx"] = pm.cov_x_xxtx;
        d["cov_xkronx_xxtx"] = pm.cov_xkronx_xxtx;
        d["cov_xxtx"] = pm.cov_xxtx;
        return d;
      },
      py::arg("alpha1"), py::arg("h"), py::arg("sigma"));

  m.def("msi", &montecarlo::msi, py::arg("u"), py::arg("v"));
  m.def("orth_unit", &montecarlo::orth_unit, py::arg("h"));

  m.def(
      "simulate_chat_csv",
      [](const std::string& config_json) {
        std::ostringstream os;
        const auto config = parse_config(config_json, true);
        py::gil_scoped_release release;
        montecarlo::write_chat_csv(os, montecarlo::chat_experiment(config));
        return os.str();
      },
      py::arg("config_json"), "Run the C-hat experiment; returns the CSV text.");
  m.def(
      "simulate_msi_csv",
      [](const std::string& config_json) {
        std::ostringstream os;
        const auto config = parse_config(config_json, false);
        py::gil_scoped_release release;
        montecarlo::write_msi_csv(os, montecarlo::msi_experiment(config));
        return os.str();
      },
      py::arg("config_json"), "Run the MSI sweep; returns the CSV text.");
}
