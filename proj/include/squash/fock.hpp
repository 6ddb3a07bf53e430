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

#include <string>
#include <string_view>
#include <vector>

#include "squash/operator.hpp"

// Two-mode Fock bookkeeping. The n-photon space has basis |n - j, j>,
// j = 0..n, where j counts photons in the second (V) mode of the z basis.

namespace squash {

enum class Basis { kZ, kX, kY };

enum class Mode { kFirst, kSecond };

/// Sign of i in the y-basis mode transform (a_H^dag + s i a_V^dag)/sqrt(2).
enum class Handedness { kPositive = 1, kNegative = -1 };

std::string_view basis_name(Basis b);
Basis parse_basis(std::string_view name);

/// Coefficient c of the first-mode creation operator (a_H^dag + c a_V^dag)/sqrt(2).
Complex mode_coefficient(Basis b, Handedness h = Handedness::kPositive);

/// |n,0>_alpha (first) or |0,n>_alpha (second) in the z-ordered Fock basis.
CVector extremal_state(Basis alpha, int n, Mode mode, Handedness h = Handedness::kPositive);

struct SubspaceDecomposition {
  int n = 0;
  std::vector<CVector> p_basis;
  std::vector<CVector> p_perp_basis;
  /// True when p_basis is the closed-form odd-n basis.
  bool closed_form = false;

  std::size_t p_dim() const { return p_basis.size(); }
  std::size_t space_dim() const { return static_cast<std::size_t>(n) + 1; }

  /// Columns are the P vectors.
  CMatrix p_matrix() const;
  CMatrix p_perp_matrix() const;
};

/// C_g = sqrt(2^{n-g} - 1).
double c_constant(int n, int g);

/// The closed-form orthonormal basis of P for odd n >= 3 and bases {z, x}:
/// |n,0>_z, |0,n>_z and the two normalized x/z combinations.
std::vector<CVector> odd_p_basis(int n);

/// P = span of the extremal states over `bases`, and its complement in the
/// n-photon space. Uses the closed form for odd n >= 3 with bases {z, x};
/// otherwise Gram-Schmidt with rank detection (z states first).
SubspaceDecomposition p_subspace(int n, const std::vector<Basis>& bases,
                                 Handedness h = Handedness::kPositive);

/// Matrix of <v_i|O|v_j>.
ComplexOperator restrict_operator(const ComplexOperator& op, const std::vector<CVector>& basis);

}  // namespace squash
