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

#include <cmath>

#include "squash/solver.hpp"

namespace squash {

double KrausSet::completeness_defect() const {
  const auto dm = static_cast<Eigen::Index>(dims.first);
  CMatrix sum = CMatrix::Zero(dm, dm);
  for (const CMatrix& a_dag : adjoint_ops) sum += a_dag * a_dag.adjoint();
  return (sum - CMatrix::Identity(dm, dm)).cwiseAbs().maxCoeff();
}

ComplexOperator KrausSet::apply_adjoint(const ComplexOperator& op) const {
  if (op.dim() != dims.second) throw DimensionError("KrausSet::apply_adjoint: operator is not on Q");
  const auto dm = static_cast<Eigen::Index>(dims.first);
  CMatrix out = CMatrix::Zero(dm, dm);
  for (const CMatrix& a_dag : adjoint_ops) out += a_dag * op.matrix() * a_dag.adjoint();
  return ComplexOperator(std::move(out));
}

ComplexOperator KrausSet::apply(const ComplexOperator& rho) const {
  if (rho.dim() != dims.first) throw DimensionError("KrausSet::apply: operator is not on M");
  const auto dq = static_cast<Eigen::Index>(dims.second);
  CMatrix out = CMatrix::Zero(dq, dq);
  for (const CMatrix& a_dag : adjoint_ops) out += a_dag.adjoint() * rho.matrix() * a_dag;
  return ComplexOperator(std::move(out));
}

KrausSet extract_kraus(const ComplexOperator& choi) {
  if (!choi.factor_dims()) throw DimensionError("extract_kraus: Choi operator has no factor dims");
  const FactorDims dims = *choi.factor_dims();
  const EigenDecomposition eig = hermitian_eig(choi);
  if (eig.min_eigenvalue() < -kPsdTol * std::max(1.0, choi.max_norm())) {
    throw std::invalid_argument("extract_kraus: Choi operator is not PSD (min eigenvalue " +
                                std::to_string(eig.min_eigenvalue()) + ")");
  }
  const auto dm = static_cast<Eigen::Index>(dims.first);
  const auto dq = static_cast<Eigen::Index>(dims.second);
  KrausSet out{{}, dims};
  for (Eigen::Index v = eig.eigenvalues.size() - 1; v >= 0; --v) {
    const double lambda = eig.eigenvalues(v);
    if (lambda <= 1e-10) break;
    const CVector scaled = std::sqrt(lambda) * eig.eigenvectors.col(v);
    // tau's product index is k * d_Q + l, so the reshape is row-major.
    CMatrix a_dag(dm, dq);
    for (Eigen::Index k = 0; k < dm; ++k) {
      for (Eigen::Index l = 0; l < dq; ++l) a_dag(k, l) = scaled(k * dq + l);
    }
    out.adjoint_ops.push_back(std::move(a_dag));
  }
  return out;
}

ComplexOperator apply_adjoint(const ComplexOperator& choi, const ComplexOperator& op) {
  if (!choi.factor_dims()) throw DimensionError("apply_adjoint: Choi operator has no factor dims");
  const FactorDims dims = *choi.factor_dims();
  if (op.dim() != dims.second) {
    throw DimensionError("apply_adjoint: operator dimension " + std::to_string(op.dim()) +
                         " does not match target dimension " + std::to_string(dims.second));
  }
  const CVector image = reshuffle(choi) * vectorize(op).entries;
  return ComplexOperator(unvectorize(image, dims.first, dims.first));
}

}  // namespace squash
