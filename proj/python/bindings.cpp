// Copyright 2026 The squash Authors
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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "squash/commands.hpp"
#include "squash/povm_io.hpp"
#include "squash/squasher.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using namespace squash;

py::list povm_to_list(const Povm& povm) {
  py::list out;
  for (const PovmElement& e : povm.elements) out.append(py::make_tuple(e.label.to_string(), e.op.matrix()));
  return out;
}

Mode parse_mode(const std::string& m) {
  if (m == "first") return Mode::kFirst;
  if (m == "second") return Mode::kSecond;
  throw std::invalid_argument("mode must be 'first' or 'second'");
}

Handedness parse_handedness(int h) {
  if (h == 1) return Handedness::kPositive;
  if (h == -1) return Handedness::kNegative;
  throw std::invalid_argument("handedness must be +1 or -1");
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d("status"_a = std::string(status_name(v.status)), "reason"_a = v.reason,
             "residual"_a = v.diagnostics.residual, "min_eigenvalue"_a = v.diagnostics.min_eigenvalue,
             "nullspace_dim"_a = v.diagnostics.nullspace_dim, "reduced_dim"_a = v.diagnostics.reduced_dim,
             "iterations"_a = v.diagnostics.iterations);
  d["choi"] = v.choi ? py::cast(v.choi->matrix()) : py::none();
  if (v.witness) {
    d["witness"] = py::dict("state"_a = v.witness->state, "eigenvalue"_a = v.witness->eigenvalue,
                            "expectation"_a = v.witness->expectation,
                            "expectation_normalized"_a = normalized_scale(v.witness->expectation, v.witness->dims.second));
  } else {
    d["witness"] = py::none();
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_squash, m) {
  m.doc() = "Squashing-model existence checks for multi-photon measurements";
  m.attr("__version__") = cli::kToolVersion;

  py::register_exception<NotHermitianError>(m, "NotHermitianError", PyExc_ValueError);
  py::register_exception<PovmError>(m, "PovmError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def(
      "extremal_state",
      [](const std::string& basis, int n, const std::string& mode, int handedness) {
        return extremal_state(parse_basis(basis), n, parse_mode(mode), parse_handedness(handedness));
      },
      "basis"_a, "n"_a, "mode"_a = "first", "handedness"_a = 1);

  m.def(
      "full_povm",
      [](const std::string& protocol, int n) { return povm_to_list(build_full_povm(Protocol::parse(protocol), n)); },
      "protocol"_a, "n"_a, "List of (label, matrix) for the n-photon block.");
  m.def(
      "target_povm", [](const std::string& protocol) { return povm_to_list(build_target_povm(Protocol::parse(protocol))); },
      "protocol"_a);
  m.def(
      "target_span_dimension",
      [](const std::string& protocol) { return operator_span_dimension(build_target_povm(Protocol::parse(protocol))); },
      "protocol"_a);
  m.def(
      "povm_json", [](const std::string& protocol, int n) { return serialize_povm(build_full_povm(Protocol::parse(protocol), n)); },
      "protocol"_a, "n"_a);

  m.def(
      "six_state_choi", [](int n, int h) { return six_state_choi(n, parse_handedness(h)).matrix(); }, "n"_a,
      "handedness"_a = 1);
  m.def(
      "bb84_odd_closed_form", [](int n) { return bb84_odd_closed_form(n).matrix(); }, "n"_a);
  m.def("theta_minus", &theta_minus, "n"_a);
  m.def("normalized_scale", &normalized_scale, "value"_a, "target_dim"_a = 2);

  m.def(
      "hermitian_eig",
      [](const CMatrix& h) {
        const EigenDecomposition e = hermitian_eig(ComplexOperator(h));
        return py::make_tuple(e.eigenvalues, e.eigenvectors);
      },
      "matrix"_a, "Ascending eigenvalues and eigenvectors (columns) by cyclic Jacobi.");
  m.def(
      "extract_kraus",
      [](const CMatrix& choi, std::size_t dim_in, std::size_t dim_out) {
        return extract_kraus(ComplexOperator(choi, FactorDims{dim_in, dim_out})).adjoint_ops;
      },
      "choi"_a, "dim_in"_a, "dim_out"_a, "Adjoint Kraus operators A_k^dag (dim_in x dim_out).");

  m.def(
      "check_povms",
      [](const std::string& full_json, const std::string& target_json) {
        return verdict_dict(solve_squashing(parse_povm(full_json), parse_povm(target_json)).verdict);
      },
      "full_json"_a, "target_json"_a, "Decide a single full/target pair given as PovmFile JSON text.");

  m.def(
      "check_protocol",
      [](const std::string& protocol, int n_max) {
        const ProtocolResult r = check_protocol(Protocol::parse(protocol), n_max);
        py::list blocks;
        for (const BlockResult& b : r.blocks) {
          py::dict d = verdict_dict(b.verdict);
          d["n"] = b.n;
          d["kind"] = std::string(block_kind_name(b.kind));
          d["p_dim"] = b.p_dim;
          d["space_dim"] = b.space_dim;
          blocks.append(d);
        }
        return py::dict("status"_a = std::string(status_name(r.overall)), "blocks"_a = blocks);
      },
      "protocol"_a, "n_max"_a = cli::kDefaultMaxPhotons);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"squash"};
        for (const std::string& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "args"_a, "Run a `squash` subcommand; returns (exit_code, stdout, stderr).");
}
