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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "squash/fock.hpp"
#include "squash/operator.hpp"

namespace squash {

enum class OutcomeKind { kBit, kVacuumFlag, kRawSingle, kRawDouble, kRawNone };

/// Outcome of a measurement. `bit` is the bit value for kBit and the detector
/// index for kRawSingle; `basis` is set for everything except kVacuumFlag.
struct OutcomeLabel {
  OutcomeKind kind = OutcomeKind::kBit;
  int bit = 0;
  Basis basis = Basis::kZ;

  static OutcomeLabel bit_outcome(int b, Basis alpha) { return {OutcomeKind::kBit, b, alpha}; }
  static OutcomeLabel vacuum() { return {OutcomeKind::kVacuumFlag, 0, Basis::kZ}; }
  static OutcomeLabel raw_single(int detector, Basis alpha) {
    return {OutcomeKind::kRawSingle, detector, alpha};
  }
  static OutcomeLabel raw_double(Basis alpha) { return {OutcomeKind::kRawDouble, 0, alpha}; }
  static OutcomeLabel raw_none(Basis alpha) { return {OutcomeKind::kRawNone, 0, alpha}; }

  bool operator==(const OutcomeLabel& other) const;
  bool operator<(const OutcomeLabel& other) const;

  std::string to_string() const;
};

struct PovmElement {
  OutcomeLabel label;
  ComplexOperator op;
};

class PovmError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered list of labelled measurement operators on a `dim`-dimensional space.
struct Povm {
  std::size_t dim = 0;
  std::vector<PovmElement> elements;

  std::size_t size() const { return elements.size(); }
  const ComplexOperator* find(const OutcomeLabel& label) const;

  /// max |sum_i F_i - 1| entry.
  double completeness_defect() const;

  /// Throws PovmError unless every element is Hermitian (1e-10), PSD (1e-9)
  /// and the elements sum to the identity (1e-10).
  void validate() const;

  /// True when every element is entrywise real within `tol`.
  bool is_real(double tol = 1e-14) const;
};

/// Tr[rho F_i] for every element, in element order.
std::vector<double> outcome_probabilities(const Povm& povm, const ComplexOperator& rho);

/// Element-wise max-norm distance after pairing by label; infinity when the
/// label sets differ.
double povm_distance(const Povm& a, const Povm& b);

enum class ProtocolName { kBB84, kSixState };

struct Protocol {
  ProtocolName name = ProtocolName::kBB84;
  std::vector<Basis> bases;
  double basis_probability = 0.5;
  Handedness handedness = Handedness::kPositive;

  static Protocol bb84();
  static Protocol six_state(Handedness h = Handedness::kPositive);
  static Protocol parse(const std::string& name);

  std::string label() const;
};

/// Click-pattern POVM of one polarizing beam splitter with two threshold
/// detectors on the n-photon space. n = 0 gives the single no-click element.
Povm raw_threshold_povm(Basis alpha, int n, Handedness h = Handedness::kPositive);

/// Double clicks assigned to each bit with weight 1/2, then every element
/// weighted by the basis-choice probability.
Povm postprocess_double_clicks(const std::map<Basis, Povm>& raw, const Protocol& protocol);

/// The post-processed full measurement on the n-photon space. n = 0 gives the
/// single vacuum-flag element.
Povm build_full_povm(const Protocol& protocol, int n);

/// Qubit measurement F^(b,alpha) = (1 + (-1)^b sigma_alpha) / (2k), k = |bases|.
Povm build_target_povm(const Protocol& protocol);

/// Pauli matrix for a basis; y carries the protocol handedness sign.
ComplexOperator pauli(Basis alpha, Handedness h = Handedness::kPositive);

/// Rank of {vec(F_i)} at tolerance 1e-9.
std::size_t operator_span_dimension(const Povm& povm);

/// Same POVM with every element replaced by V^dag F V.
Povm restrict_povm(const Povm& povm, const std::vector<CVector>& basis);

}  // namespace squash
