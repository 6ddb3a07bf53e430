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

#include "squash/detectors.hpp"

#include <cmath>
#include <limits>
#include <tuple>

#include "squash/linalg.hpp"

namespace squash {

bool OutcomeLabel::operator==(const OutcomeLabel& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case OutcomeKind::kVacuumFlag: return true;
    case OutcomeKind::kRawDouble:
    case OutcomeKind::kRawNone: return basis == other.basis;
    case OutcomeKind::kBit:
    case OutcomeKind::kRawSingle: return bit == other.bit && basis == other.basis;
  }
  return false;
}

bool OutcomeLabel::operator<(const OutcomeLabel& other) const {
  return std::tuple(kind, basis, bit) < std::tuple(other.kind, other.basis, other.bit);
}

std::string OutcomeLabel::to_string() const {
  const std::string alpha(basis_name(basis));
  switch (kind) {
    case OutcomeKind::kBit: return "bit(" + std::to_string(bit) + "," + alpha + ")";
    case OutcomeKind::kVacuumFlag: return "vacuum_flag";
    case OutcomeKind::kRawSingle: return "raw_single(" + std::to_string(bit) + "," + alpha + ")";
    case OutcomeKind::kRawDouble: return "raw_double(" + alpha + ")";
    case OutcomeKind::kRawNone: return "raw_none(" + alpha + ")";
  }
  return "?";
}

const ComplexOperator* Povm::find(const OutcomeLabel& label) const {
  for (const PovmElement& e : elements) {
    if (e.label == label) return &e.op;
  }
  return nullptr;
}

double Povm::completeness_defect() const {
  ComplexOperator sum = ComplexOperator::zero(dim);
  for (const PovmElement& e : elements) sum += e.op;
  return max_distance(sum, ComplexOperator::identity(dim));
}

void Povm::validate() const {
  if (elements.empty()) throw PovmError("POVM has no elements");
  for (const PovmElement& e : elements) {
    if (e.op.dim() != dim) {
      throw PovmError("element " + e.label.to_string() + " has dimension " +
                      std::to_string(e.op.dim()) + ", expected " + std::to_string(dim));
    }
    if (!e.op.is_hermitian(kHermiticityTol)) {
      throw PovmError("element " + e.label.to_string() + " is not Hermitian");
    }
    if (!is_psd(e.op, kPsdTol)) throw PovmError("element " + e.label.to_string() + " is not PSD");
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      if (elements[i].label == elements[j].label) {
        throw PovmError("duplicate outcome label " + elements[i].label.to_string());
      }
    }
  }
  const double defect = completeness_defect();
  if (defect >= 1e-10) {
    throw PovmError("elements do not sum to the identity (defect " + std::to_string(defect) + ")");
  }
}

bool Povm::is_real(double tol) const {
  for (const PovmElement& e : elements) {
    if (e.op.matrix().imag().cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

std::vector<double> outcome_probabilities(const Povm& povm, const ComplexOperator& rho) {
  std::vector<double> out;
  out.reserve(povm.size());
  for (const PovmElement& e : povm.elements) out.push_back((rho * e.op).trace().real());
  return out;
}

double povm_distance(const Povm& a, const Povm& b) {
  if (a.size() != b.size() || a.dim != b.dim) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const PovmElement& e : a.elements) {
    const ComplexOperator* other = b.find(e.label);
    if (other == nullptr) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, max_distance(e.op, *other));
  }
  return worst;
}

Protocol Protocol::bb84() { return {ProtocolName::kBB84, {Basis::kZ, Basis::kX}, 0.5}; }

Protocol Protocol::six_state(Handedness h) {
  return {ProtocolName::kSixState, {Basis::kZ, Basis::kX, Basis::kY}, 1.0 / 3.0, h};
}

Protocol Protocol::parse(const std::string& name) {
  if (name == "bb84") return bb84();
  if (name == "six-state") return six_state();
  throw std::invalid_argument("unknown protocol '" + name + "' (expected bb84 or six-state)");
}

std::string Protocol::label() const { return name == ProtocolName::kBB84 ? "bb84" : "six-state"; }

Povm raw_threshold_povm(Basis alpha, int n, Handedness h) {
  if (n < 0) throw std::invalid_argument("raw_threshold_povm: negative photon number");
  const auto dim = static_cast<std::size_t>(n) + 1;
  Povm out{dim, {}};
  if (n == 0) {
    out.elements.push_back({OutcomeLabel::raw_none(alpha), ComplexOperator::identity(1)});
    return out;
  }
  ComplexOperator first = outer(extremal_state(alpha, n, Mode::kFirst, h));
  ComplexOperator second = outer(extremal_state(alpha, n, Mode::kSecond, h));
  ComplexOperator both = ComplexOperator::identity(dim) - first - second;
  out.elements.push_back({OutcomeLabel::raw_single(0, alpha), std::move(first)});
  out.elements.push_back({OutcomeLabel::raw_single(1, alpha), std::move(second)});
  out.elements.push_back({OutcomeLabel::raw_double(alpha), std::move(both)});
  return out;
}

Povm postprocess_double_clicks(const std::map<Basis, Povm>& raw, const Protocol& protocol) {
  std::optional<std::size_t> dim;
  for (Basis alpha : protocol.bases) {
    auto it = raw.find(alpha);
    if (it == raw.end()) {
      throw std::invalid_argument("postprocess_double_clicks: missing raw POVM for basis " +
                                  std::string(basis_name(alpha)));
    }
    if (dim && *dim != it->second.dim) {
      throw DimensionError("postprocess_double_clicks: raw POVMs have different dimensions");
    }
    dim = it->second.dim;
  }

  Povm out{*dim, {}};
  if (*dim == 1) {
    out.elements.push_back({OutcomeLabel::vacuum(), ComplexOperator::identity(1)});
    return out;
  }
  for (Basis alpha : protocol.bases) {
    const Povm& r = raw.at(alpha);
    const ComplexOperator* dbl = r.find(OutcomeLabel::raw_double(alpha));
    if (dbl == nullptr) throw std::invalid_argument("postprocess_double_clicks: no double-click element");
    for (int b = 0; b < 2; ++b) {
      const ComplexOperator* single = r.find(OutcomeLabel::raw_single(b, alpha));
      if (single == nullptr) throw std::invalid_argument("postprocess_double_clicks: no single-click element");
      ComplexOperator f = protocol.basis_probability * (*single + 0.5 * *dbl);
      out.elements.push_back({OutcomeLabel::bit_outcome(b, alpha), std::move(f)});
    }
  }
  return out;
}

Povm build_full_povm(const Protocol& protocol, int n) {
  if (n < 0) throw std::invalid_argument("build_full_povm: negative photon number");
  std::map<Basis, Povm> raw;
  for (Basis alpha : protocol.bases) raw.emplace(alpha, raw_threshold_povm(alpha, n, protocol.handedness));
  return postprocess_double_clicks(raw, protocol);
}

ComplexOperator pauli(Basis alpha, Handedness h) {
  CMatrix m(2, 2);
  switch (alpha) {
    case Basis::kZ: m << 1.0, 0.0, 0.0, -1.0; break;
    case Basis::kX: m << 0.0, 1.0, 1.0, 0.0; break;
    case Basis::kY: {
      const double s = static_cast<double>(static_cast<int>(h));
      m << 0.0, Complex(0.0, -s), Complex(0.0, s), 0.0;
      break;
    }
  }
  return ComplexOperator(std::move(m));
}

Povm build_target_povm(const Protocol& protocol) {
  const double k = static_cast<double>(protocol.bases.size());
  Povm out{2, {}};
  for (Basis alpha : protocol.bases) {
    const ComplexOperator sigma = pauli(alpha, protocol.handedness);
    for (int b = 0; b < 2; ++b) {
      const double sign = b == 0 ? 1.0 : -1.0;
      ComplexOperator f = (1.0 / (2.0 * k)) * (ComplexOperator::identity(2) + sign * sigma);
      out.elements.push_back({OutcomeLabel::bit_outcome(b, alpha), std::move(f)});
    }
  }
  return out;
}

std::size_t operator_span_dimension(const Povm& povm) {
  if (povm.elements.empty()) return 0;
  const auto len = static_cast<Eigen::Index>(povm.dim * povm.dim);
  RMatrix stacked(2 * len, static_cast<Eigen::Index>(povm.size()));
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const CVector v = vectorize(povm.elements[i].op).entries;
    stacked.col(static_cast<Eigen::Index>(i)) << v.real(), v.imag();
  }
  return numerical_rank(stacked, 1e-9);
}

Povm restrict_povm(const Povm& povm, const std::vector<CVector>& basis) {
  Povm out{basis.size(), {}};
  for (const PovmElement& e : povm.elements) out.elements.push_back({e.label, restrict_operator(e.op, basis)});
  return out;
}

}  // namespace squash
