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

#include "squash/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace squash {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const CMatrix& a) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) acc += std::norm(a(i, j));
    }
  }
  return std::sqrt(acc);
}

// Annihilates a(p, q) with the unitary J = diag(1, e^{-i phi}) * R(theta)
// acting on the (p, q) plane: a <- J^dag a J, v <- v J.
void rotate(CMatrix& a, CMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double zeta = (aqq - app) / (2.0 * r);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  // Pivot diagonals from the rotation angle directly; the similarity products
  // above lose a few ulps there.
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * r;
  a(q, q) = aqq + t * r;

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace

ComplexOperator EigenDecomposition::reassemble() const {
  CMatrix out = eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  return ComplexOperator(std::move(out));
}

EigenDecomposition hermitian_eig(const ComplexOperator& h) {
  if (!h.is_hermitian(kHermiticityTol)) {
    throw NotHermitianError("hermitian_eig: hermiticity defect " +
                            std::to_string(h.hermiticity_defect()));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(h.dim());
  CMatrix a = 0.5 * (h.matrix() + h.matrix().adjoint());
  CMatrix v = CMatrix::Identity(n, n);

  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-15 * scale) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        // Entries already negligible against both diagonals are skipped.
        const double apq = std::abs(a(p, q));
        if (apq <= 1e-18 * scale) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() < a(y, y).real();
  });

  EigenDecomposition out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    out.eigenvalues(i) = a(src, src).real();
    out.eigenvectors.col(i) = v.col(src);
  }
  return out;
}

bool is_psd(const ComplexOperator& h, double tol) {
  const EigenDecomposition eig = hermitian_eig(h);
  return eig.min_eigenvalue() >= -tol * std::max(1.0, h.max_norm());
}

ComplexOperator project_psd(const ComplexOperator& h) {
  const EigenDecomposition eig = hermitian_eig(h);
  const RVector clipped = eig.eigenvalues.cwiseMax(0.0);
  CMatrix out = eig.eigenvectors * clipped.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  ComplexOperator result(std::move(out));
  if (h.factor_dims()) result.set_factor_dims(*h.factor_dims());
  return result;
}

std::vector<CVector> gram_schmidt(const std::vector<CVector>& vectors, double rank_tol) {
  if (vectors.empty()) throw DimensionError("gram_schmidt: empty input");
  const Eigen::Index len = vectors.front().size();
  if (len == 0) throw DimensionError("gram_schmidt: zero-length vector");

  std::vector<CVector> basis;
  for (const CVector& input : vectors) {
    if (input.size() != len) throw DimensionError("gram_schmidt: vectors have unequal lengths");
    CVector w = input;
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVector& b : basis) w -= b.dot(w) * b;
    }
    const double norm = w.norm();
    if (norm < rank_tol) continue;
    basis.push_back(w / norm);
  }
  return basis;
}

std::size_t numerical_rank(const RMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<RMatrix> svd(m);
  const RVector& sv = svd.singularValues();
  const double cutoff = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace squash
