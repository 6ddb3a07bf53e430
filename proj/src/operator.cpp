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

#include "squash/operator.hpp"

#include <cmath>

namespace squash {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_same_dim(const ComplexOperator& a, const ComplexOperator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": operator dimensions " + std::to_string(a.dim()) +
                         " and " + std::to_string(b.dim()) + " differ");
  }
}

}  // namespace

ComplexOperator::ComplexOperator(std::size_t dim) : entries_(CMatrix::Zero(idx(dim), idx(dim))) {}

ComplexOperator::ComplexOperator(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionError("ComplexOperator: matrix is " + std::to_string(entries_.rows()) + "x" +
                         std::to_string(entries_.cols()) + ", expected square");
  }
}

ComplexOperator::ComplexOperator(CMatrix entries, FactorDims dims)
    : ComplexOperator(std::move(entries)) {
  set_factor_dims(dims);
}

ComplexOperator ComplexOperator::identity(std::size_t dim) {
  return ComplexOperator(CMatrix::Identity(idx(dim), idx(dim)));
}

ComplexOperator ComplexOperator::zero(std::size_t dim) { return ComplexOperator(dim); }

void ComplexOperator::set_factor_dims(FactorDims dims) {
  if (dims.first * dims.second != dim()) {
    throw DimensionError("factor dims " + std::to_string(dims.first) + "x" +
                         std::to_string(dims.second) + " do not match dimension " +
                         std::to_string(dim()));
  }
  factor_dims_ = dims;
}

ComplexOperator ComplexOperator::adjoint() const {
  ComplexOperator out(CMatrix(entries_.adjoint()));
  out.factor_dims_ = factor_dims_;
  return out;
}

double ComplexOperator::max_norm() const {
  return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

double ComplexOperator::hermiticity_defect() const {
  if (entries_.size() == 0) return 0.0;
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

ComplexOperator& ComplexOperator::operator+=(const ComplexOperator& other) {
  require_same_dim(*this, other, "operator+");
  entries_ += other.entries_;
  return *this;
}

ComplexOperator& ComplexOperator::operator-=(const ComplexOperator& other) {
  require_same_dim(*this, other, "operator-");
  entries_ -= other.entries_;
  return *this;
}

ComplexOperator& ComplexOperator::operator*=(Complex scale) {
  entries_ *= scale;
  return *this;
}

ComplexOperator operator+(ComplexOperator lhs, const ComplexOperator& rhs) { return lhs += rhs; }

ComplexOperator operator-(ComplexOperator lhs, const ComplexOperator& rhs) { return lhs -= rhs; }

ComplexOperator operator*(Complex scale, ComplexOperator op) { return op *= scale; }

ComplexOperator operator*(const ComplexOperator& lhs, const ComplexOperator& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  return ComplexOperator(CMatrix(lhs.matrix() * rhs.matrix()));
}

ComplexOperator kron(const ComplexOperator& lhs, const ComplexOperator& rhs) {
  const auto da = idx(lhs.dim());
  const auto db = idx(rhs.dim());
  CMatrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = lhs.matrix()(i, j) * rhs.matrix();
    }
  }
  return ComplexOperator(std::move(out), FactorDims{lhs.dim(), rhs.dim()});
}

ComplexOperator partial_trace_second(const ComplexOperator& op) {
  if (!op.factor_dims()) throw DimensionError("partial_trace_second: operator is not bipartite");
  const auto dm = idx(op.factor_dims()->first);
  const auto dq = idx(op.factor_dims()->second);
  CMatrix out = CMatrix::Zero(dm, dm);
  for (Eigen::Index k = 0; k < dm; ++k) {
    for (Eigen::Index kp = 0; kp < dm; ++kp) {
      Complex acc = 0.0;
      for (Eigen::Index l = 0; l < dq; ++l) acc += op.matrix()(k * dq + l, kp * dq + l);
      out(k, kp) = acc;
    }
  }
  return ComplexOperator(std::move(out));
}

ComplexOperator outer(const CVector& v) { return ComplexOperator(CMatrix(v * v.adjoint())); }

double max_distance(const ComplexOperator& a, const ComplexOperator& b) {
  require_same_dim(a, b, "max_distance");
  return (a - b).max_norm();
}

OperatorVector vectorize(const ComplexOperator& op) {
  const auto d = idx(op.dim());
  OperatorVector v{CVector(d * d), op.dim()};
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) v.entries(j * d + i) = op.matrix()(i, j);
  }
  return v;
}

CMatrix unvectorize(const CVector& v, std::size_t rows, std::size_t cols) {
  if (rows * cols != static_cast<std::size_t>(v.size())) {
    throw DimensionError("unvectorize: " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " does not match vector length " + std::to_string(v.size()));
  }
  CMatrix out(idx(rows), idx(cols));
  for (Eigen::Index j = 0; j < idx(cols); ++j) {
    for (Eigen::Index i = 0; i < idx(rows); ++i) out(i, j) = v(j * idx(rows) + i);
  }
  return out;
}

ComplexOperator unvectorize(const OperatorVector& v) {
  if (v.source_dim * v.source_dim != v.dim_sq()) {
    throw DimensionError("unvectorize: length " + std::to_string(v.dim_sq()) +
                         " is not source_dim^2");
  }
  return ComplexOperator(unvectorize(v.entries, v.source_dim, v.source_dim));
}

Complex inner(const OperatorVector& a, const OperatorVector& b) {
  if (a.dim_sq() != b.dim_sq()) throw DimensionError("inner: vector lengths differ");
  return a.entries.dot(b.entries);  // Eigen's dot conjugates the first argument
}

CMatrix reshuffle(const ComplexOperator& tau) {
  if (!tau.factor_dims()) throw DimensionError("reshuffle: operator has no factor dims");
  const auto dm = idx(tau.factor_dims()->first);
  const auto dq = idx(tau.factor_dims()->second);
  CMatrix out(dm * dm, dq * dq);
  for (Eigen::Index k = 0; k < dm; ++k) {
    for (Eigen::Index kp = 0; kp < dm; ++kp) {
      for (Eigen::Index l = 0; l < dq; ++l) {
        for (Eigen::Index lp = 0; lp < dq; ++lp) {
          out(kp * dm + k, lp * dq + l) = tau.matrix()(k * dq + l, kp * dq + lp);
        }
      }
    }
  }
  return out;
}

ComplexOperator unreshuffle(const CMatrix& transfer, FactorDims dims) {
  const auto dm = idx(dims.first);
  const auto dq = idx(dims.second);
  if (transfer.rows() != dm * dm || transfer.cols() != dq * dq) {
    throw DimensionError("unreshuffle: transfer matrix shape does not match factor dims");
  }
  CMatrix out(dm * dq, dm * dq);
  for (Eigen::Index k = 0; k < dm; ++k) {
    for (Eigen::Index kp = 0; kp < dm; ++kp) {
      for (Eigen::Index l = 0; l < dq; ++l) {
        for (Eigen::Index lp = 0; lp < dq; ++lp) {
          out(k * dq + l, kp * dq + lp) = transfer(kp * dm + k, lp * dq + l);
        }
      }
    }
  }
  return ComplexOperator(std::move(out), dims);
}

OperatorVector maximally_entangled(std::size_t d, bool normalized) {
  const auto n = idx(d);
  OperatorVector v{CVector::Zero(n * n), d};
  const double scale = normalized ? 1.0 / std::sqrt(static_cast<double>(d)) : 1.0;
  for (Eigen::Index i = 0; i < n; ++i) v.entries(i * n + i) = scale;
  return v;
}

ComplexOperator identity_choi(std::size_t d) {
  const CVector omega = maximally_entangled(d, false).entries;
  ComplexOperator out = outer(omega);
  out.set_factor_dims({d, d});
  return out;
}

}  // namespace squash
