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

#include <vector>

#include "squash/operator.hpp"

namespace squash {

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

/// Eigenvalues ascending; column v of `eigenvectors` belongs to eigenvalues[v].
struct EigenDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  double min_eigenvalue() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }
  CVector min_eigenvector() const { return eigenvectors.col(0); }

  /// sum_v lambda_v |v><v|
  ComplexOperator reassemble() const;
};

/// Cyclic complex Jacobi. Deterministic: the sweep order and the tie-break
/// of the final sort are fixed, so repeated calls are bitwise identical.
/// Throws NotHermitianError if max|H - H^dag| >= 1e-10.
EigenDecomposition hermitian_eig(const ComplexOperator& h);

/// Smallest eigenvalue >= -tol * max(1, |H|_max).
bool is_psd(const ComplexOperator& h, double tol = kPsdTol);

/// Nearest PSD operator in Frobenius norm (negative eigenvalues clipped).
ComplexOperator project_psd(const ComplexOperator& h);

/// Modified Gram-Schmidt with one reorthogonalization pass. Inputs whose
/// residual norm falls below `rank_tol` are dropped.
std::vector<CVector> gram_schmidt(const std::vector<CVector>& vectors, double rank_tol = 1e-9);

/// Numerical rank of the columns of a real matrix (singular values > tol * max(1, s_max)).
std::size_t numerical_rank(const RMatrix& m, double tol = 1e-9);

}  // namespace squash
