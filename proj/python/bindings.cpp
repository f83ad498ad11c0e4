// Copyright 2026 The qsdc-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "qsdc/errors.hpp"
#include "qsdc/experiment.hpp"
#include "qsdc/quantum.hpp"
#include "qsdc/selftest.hpp"

namespace py = pybind11;

namespace {

using Amplitudes = std::tuple<qsdc::Complex, qsdc::Complex>;

qsdc::StateLabel parse_label(const std::string& s) {
  if (s.size() != 2 || (s[1] != '0' && s[1] != '1')) {
    throw qsdc::ConfigError("state label must look like Z0, Z1, X0 or X1");
  }
  return {qsdc::parse_basis(s.substr(0, 1)), static_cast<qsdc::Bit>(s[1] - '0')};
}

std::vector<qsdc::OpLabel> parse_ops(const std::string& ops) {
  std::vector<qsdc::OpLabel> out;
  for (char c : ops) out.push_back(qsdc::parse_op(std::string(1, c)));
  return out;
}

Amplitudes apply_ops(const std::string& ops, Amplitudes state) {
  qsdc::PhotonState s{std::get<0>(state), std::get<1>(state)};
  for (qsdc::OpLabel op : parse_ops(ops)) s = qsdc::apply_op(op, s);
  return {s.alpha, s.beta};
}

std::string apply_ops_symbolic(const std::string& ops, const std::string& label) {
  qsdc::StateLabel l = parse_label(label);
  for (qsdc::OpLabel op : parse_ops(ops)) l = qsdc::apply_op_symbolic(op, l);
  return qsdc::to_string(l);
}

Amplitudes state_from_label(const std::string& label) {
  const qsdc::PhotonState s = qsdc::state_from_label(parse_label(label));
  return {s.alpha, s.beta};
}

std::tuple<bool, bool> compose(const std::string& ops) {
  const auto parsed = parse_ops(ops);
  const qsdc::FrameEffect fx = qsdc::compose_effects(parsed);
  return {fx.flip, fx.swap};
}

double overlap(Amplitudes a, Amplitudes b) {
  return qsdc::overlap({std::get<0>(a), std::get<1>(a)}, {std::get<0>(b), std::get<1>(b)});
}

qsdc::ExperimentConfig parse_config(const std::string& text) {
  qsdc::Json j;
  try {
    j = qsdc::Json::parse(text);
  } catch (const qsdc::Json::parse_error& e) {
    throw qsdc::ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return qsdc::parse_experiment(j);
}

std::tuple<std::string, std::string> run_json(const std::string& config_json) {
  const qsdc::ExperimentConfig c = parse_config(config_json);
  c.session.validate();
  qsdc::SessionOutcome o;
  {
    py::gil_scoped_release release;
    o = qsdc::run_experiment_session(c);
  }
  return {qsdc::render_json(qsdc::session_report(c, o)), o.transcript.to_jsonl()};
}

std::string sweep_csv(const std::string& config_json, unsigned workers) {
  const qsdc::ExperimentConfig c = parse_config(config_json);
  py::gil_scoped_release release;
  return qsdc::sweep_csv(c, qsdc::run_sweep(c, workers));
}

py::dict selftest(double perturb_h) {
  const qsdc::GateSet gates =
      perturb_h != 0.0 ? qsdc::perturbed_hadamard(perturb_h) : qsdc::GateSet::canonical();
  const qsdc::SelfTestReport r = qsdc::run_selftest(gates);
  py::list checks;
  for (const qsdc::SelfTestCheck& c : r.checks) {
    py::dict d;
    d["name"] = c.name;
    d["cases"] = c.cases;
    d["failures"] = c.failures;
    checks.append(d);
  }
  py::dict out;
  out["passed"] = r.passed();
  out["seconds"] = r.seconds;
  out["checks"] = checks;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the QSDC simulator";
  py::register_exception<qsdc::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<qsdc::ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);

  m.def("state_from_label", &state_from_label, py::arg("label"));
  m.def("apply_ops", &apply_ops, py::arg("ops"), py::arg("state"),
        "Apply ops (a string over I, U, H, leftmost first) to an amplitude pair.");
  m.def("apply_ops_symbolic", &apply_ops_symbolic, py::arg("ops"), py::arg("label"));
  m.def("compose_effects", &compose, py::arg("ops"), "Net (flip, swap) parity of ops.");
  m.def("overlap", &overlap, py::arg("a"), py::arg("b"));
  m.def("run_json", &run_json, py::arg("config_json"),
        "Run one session; returns (report JSON, transcript JSON Lines).");
  m.def("sweep_csv", &sweep_csv, py::arg("config_json"), py::arg("workers") = 0);
  m.def("selftest", &selftest, py::arg("perturb_h") = 0.0);
}
