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

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace squash {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Thrown when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by routines that require Hermitian input.
class NotHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Factor dimensions (d_M, d_Q') of a bipartite operator on M (x) Q'.
struct FactorDims {
  std::size_t first = 0;
  std::size_t second = 0;

  bool operator==(const FactorDims&) const = default;
};

/// Dense square complex operator, optionally tagged as bipartite.
///
/// A bipartite operator on M (x) Q' uses the product index k * d_Q' + l,
/// so the first factor is the slow index.
class ComplexOperator {
 public:
  ComplexOperator() = default;
  explicit ComplexOperator(std::size_t dim);
  explicit ComplexOperator(CMatrix entries);
  ComplexOperator(CMatrix entries, FactorDims dims);

  static ComplexOperator identity(std::size_t dim);
  static ComplexOperator zero(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const std::optional<FactorDims>& factor_dims() const { return factor_dims_; }
  void set_factor_dims(FactorDims dims);

  const CMatrix& matrix() const { return entries_; }
  CMatrix& matrix() { return entries_; }

  Complex operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  Complex& operator()(std::size_t row, std::size_t col) {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  ComplexOperator adjoint() const;
  Complex trace() const { return entries_.trace(); }

  /// Largest absolute entry.
  double max_norm() const;
  double frobenius_norm() const { return entries_.norm(); }

  /// max |H - H^dag| entry.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-10) const { return hermiticity_defect() < tol; }

  ComplexOperator& operator+=(const ComplexOperator& other);
  ComplexOperator& operator-=(const ComplexOperator& other);
  ComplexOperator& operator*=(Complex scale);

 private:
  CMatrix entries_;
  std::optional<FactorDims> factor_dims_;
};

ComplexOperator operator+(ComplexOperator lhs, const ComplexOperator& rhs);
ComplexOperator operator-(ComplexOperator lhs, const ComplexOperator& rhs);
ComplexOperator operator*(Complex scale, ComplexOperator op);
ComplexOperator operator*(const ComplexOperator& lhs, const ComplexOperator& rhs);

/// Kronecker product; the result carries factor dims (lhs.dim, rhs.dim).
ComplexOperator kron(const ComplexOperator& lhs, const ComplexOperator& rhs);

/// Partial trace over the second factor of a bipartite operator.
ComplexOperator partial_trace_second(const ComplexOperator& op);

/// Projector |v><v| (no normalization applied).
ComplexOperator outer(const CVector& v);

/// Max-norm distance between two operators of equal dimension.
double max_distance(const ComplexOperator& a, const ComplexOperator& b);

/// Column-stacked operator vector |O>>; `source_dim` is the side length of O.
struct OperatorVector {
  CVector entries;
  std::size_t source_dim = 0;

  std::size_t dim_sq() const { return static_cast<std::size_t>(entries.size()); }
};

/// |O>> with entry (i, j) at position j * dim + i.
OperatorVector vectorize(const ComplexOperator& op);

/// Inverse reshape: entry (i, j) of the result is v[j * rows + i].
/// The result may be rectangular, hence the plain matrix return type.
CMatrix unvectorize(const CVector& v, std::size_t rows, std::size_t cols);
ComplexOperator unvectorize(const OperatorVector& v);

/// <<A|B>> = Tr[A^dag B].
Complex inner(const OperatorVector& a, const OperatorVector& b);

/// Transfer matrix tau^R (d_M^2 x d_Q^2) with
/// tau^R[(k,k'),(l,l')] = tau[(k,l),(k',l')], pairs flattened column-stacked.
/// With this layout tau^R |O>> = |Lambda^dag(O)>>.
CMatrix reshuffle(const ComplexOperator& tau);

/// Inverse of reshuffle for the given factor dims.
ComplexOperator unreshuffle(const CMatrix& transfer, FactorDims dims);

/// sum_i |i>|i>, optionally scaled by 1/sqrt(d). Index of |i>|j> is i * d + j.
OperatorVector maximally_entangled(std::size_t d, bool normalized);

/// Unnormalized |Omega><Omega| on d (x) d: the Choi operator of the identity map.
ComplexOperator identity_choi(std::size_t d);

}  // namespace squash
