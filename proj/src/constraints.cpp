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

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "squash/solver.hpp"

namespace squash {

namespace {

using Index = Eigen::Index;

constexpr double kAffineResidualTol = 1e-8;
constexpr double kSingularCutoff = 1e-10;
constexpr double kZeroDiagonalTol = 1e-10;
constexpr double kForcedResidualTol = 1e-9;

struct LeastSquares {
  RVector solution;
  RMatrix nullspace;  // orthonormal columns
  double residual = 0.0;
};

// Minimum-norm least squares with an explicit nullspace basis.
LeastSquares least_squares(const RMatrix& a, const RVector& b) {
  LeastSquares out;
  const Index cols = a.cols();
  if (cols == 0) {
    out.solution = RVector(0);
    out.nullspace = RMatrix(0, 0);
    out.residual = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
    return out;
  }
  if (a.rows() == 0) {
    out.solution = RVector::Zero(cols);
    out.nullspace = RMatrix::Identity(cols, cols);
    return out;
  }
  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double cutoff = kSingularCutoff * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  const RMatrix& u = svd.matrixU();
  const RMatrix& v = svd.matrixV();
  RVector coeff = u.leftCols(rank).transpose() * b;
  for (Index i = 0; i < rank; ++i) coeff(i) /= sv(i);
  out.solution = v.leftCols(rank) * coeff;
  out.nullspace = v.rightCols(cols - rank);
  const RVector r = a * out.solution - b;
  out.residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

double real_inner(const ComplexOperator& a, const ComplexOperator& b) {
  return (a.matrix().real().cwiseProduct(b.matrix().real()) +
          a.matrix().imag().cwiseProduct(b.matrix().imag()))
      .sum();
}

ComplexOperator hermitize(const ComplexOperator& op, FactorDims dims) {
  return ComplexOperator(CMatrix(0.5 * (op.matrix() + op.matrix().adjoint())), dims);
}

// Orthonormalizes the directions (real inner product) and removes their
// components from the particular point.
ParameterizedChoi normalize_family(ComplexOperator particular, std::vector<ComplexOperator> raw,
                                   FactorDims dims) {
  ParameterizedChoi pc{hermitize(particular, dims), {}, dims};
  for (ComplexOperator& d : raw) {
    ComplexOperator w = hermitize(d, dims);
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexOperator& b : pc.directions) w -= real_inner(b, w) * b;
    }
    const double norm = w.frobenius_norm();
    if (norm < 1e-12) continue;
    w *= 1.0 / norm;
    pc.directions.push_back(std::move(w));
  }
  for (const ComplexOperator& b : pc.directions) pc.particular -= real_inner(b, pc.particular) * b;
  return pc;
}

}  // namespace

std::string_view status_name(Status s) {
  switch (s) {
    case Status::kExists: return "EXISTS";
    case Status::kNotExists: return "NOT_EXISTS";
    case Status::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

RVector pack_operator(const ComplexOperator& tau) {
  const CVector v = vectorize(tau).entries;
  RVector x(2 * v.size());
  x << v.real(), v.imag();
  return x;
}

ComplexOperator unpack_operator(const RVector& x, FactorDims dims) {
  const std::size_t d = dims.first * dims.second;
  const auto len = static_cast<Index>(d * d);
  if (x.size() != 2 * len) throw DimensionError("unpack_operator: vector length mismatch");
  CVector v(len);
  for (Index i = 0; i < len; ++i) v(i) = Complex(x(i), x(len + i));
  return ComplexOperator(unvectorize(v, d, d), dims);
}

ConstraintSystem assemble_constraints(const Povm& full, const Povm& target) {
  if (full.size() != target.size()) {
    throw PovmError("outcome count mismatch: full has " + std::to_string(full.size()) +
                    ", target has " + std::to_string(target.size()));
  }
  const std::size_t dm = full.dim;
  const std::size_t dq = target.dim;
  const auto D = static_cast<Index>(dm * dq);
  const Index n_unknowns = 2 * D * D;
  const auto DM = static_cast<Index>(dm);
  const auto DQ = static_cast<Index>(dq);

  ConstraintSystem sys;
  sys.dims = {dm, dq};
  sys.real_reduced = full.is_real() && target.is_real();
  sys.map_rows = target.size() * dm * dm * 2;
  sys.hermiticity_rows = static_cast<std::size_t>(D * D);
  sys.reality_rows = sys.real_reduced ? static_cast<std::size_t>(D * D) : 0;
  const auto rows = static_cast<Index>(sys.map_rows + sys.hermiticity_rows + sys.reality_rows);
  sys.coefficients = RMatrix::Zero(rows, n_unknowns);
  sys.rhs = RVector::Zero(rows);

  auto re = [D](Index p, Index q) { return q * D + p; };
  auto im = [D](Index p, Index q) { return D * D + q * D + p; };

  Index row = 0;
  for (const PovmElement& fq : target.elements) {
    const ComplexOperator* fm = full.find(fq.label);
    if (fm == nullptr) throw PovmError("no full-measurement element for outcome " + fq.label.to_string());
    if (fm->dim() != dm || fq.op.dim() != dq) throw PovmError("element dimension mismatch");
    sys.labels.push_back(fq.label);
    // sum_{l,l'} tau[(k,l),(k',l')] F_Q[l,l'] = F_M[k,k']
    for (Index kp = 0; kp < DM; ++kp) {
      for (Index k = 0; k < DM; ++k) {
        for (Index lp = 0; lp < DQ; ++lp) {
          for (Index l = 0; l < DQ; ++l) {
            const Complex f = fq.op.matrix()(l, lp);
            const Index p = k * DQ + l;
            const Index q = kp * DQ + lp;
            sys.coefficients(row, re(p, q)) += f.real();
            sys.coefficients(row, im(p, q)) -= f.imag();
            sys.coefficients(row + 1, re(p, q)) += f.imag();
            sys.coefficients(row + 1, im(p, q)) += f.real();
          }
        }
        sys.rhs(row) = fm->matrix()(k, kp).real();
        sys.rhs(row + 1) = fm->matrix()(k, kp).imag();
        row += 2;
      }
    }
  }

  for (Index q = 0; q < D; ++q) {
    for (Index p = 0; p < q; ++p) {
      sys.coefficients(row, re(p, q)) = 1.0;
      sys.coefficients(row, re(q, p)) = -1.0;
      ++row;
      sys.coefficients(row, im(p, q)) = 1.0;
      sys.coefficients(row, im(q, p)) = 1.0;
      ++row;
    }
    sys.coefficients(row, im(q, q)) = 1.0;
    ++row;
  }

  if (sys.real_reduced) {
    for (Index q = 0; q < D; ++q) {
      for (Index p = 0; p < D; ++p) sys.coefficients(row++, im(p, q)) = 1.0;
    }
  }
  return sys;
}

double system_residual(const ConstraintSystem& system, const ComplexOperator& tau) {
  const RVector r = system.coefficients * pack_operator(tau) - system.rhs;
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

double map_residual(const Povm& full, const Povm& target, const ComplexOperator& tau) {
  const CMatrix transfer = reshuffle(tau);
  double worst = 0.0;
  for (const PovmElement& fq : target.elements) {
    const ComplexOperator* fm = full.find(fq.label);
    if (fm == nullptr) throw PovmError("no full-measurement element for outcome " + fq.label.to_string());
    const CVector diff = transfer * vectorize(fq.op).entries - vectorize(*fm).entries;
    worst = std::max(worst, diff.norm());
  }
  return worst;
}

ComplexOperator ParameterizedChoi::evaluate(std::span<const double> params) const {
  if (params.size() != directions.size()) {
    throw DimensionError("ParameterizedChoi::evaluate: expected " + std::to_string(directions.size()) +
                         " parameters, got " + std::to_string(params.size()));
  }
  ComplexOperator out = particular;
  for (std::size_t j = 0; j < params.size(); ++j) out += params[j] * directions[j];
  out.set_factor_dims(dims);
  return out;
}

std::vector<double> ParameterizedChoi::coordinates(const ComplexOperator& tau) const {
  std::vector<double> out;
  out.reserve(directions.size());
  for (const ComplexOperator& d : directions) out.push_back(real_inner(d, tau));
  return out;
}

ComplexOperator ParameterizedChoi::project(const ComplexOperator& tau) const {
  const std::vector<double> a = coordinates(tau);
  return evaluate(a);
}

ParameterizedChoi solve_affine(const ConstraintSystem& system) {
  const LeastSquares ls = least_squares(system.coefficients, system.rhs);
  if (ls.residual > kAffineResidualTol) {
    throw InfeasibleError(kAffineInfeasible,
                          "linear constraints are inconsistent (residual " +
                              std::to_string(ls.residual) + ")",
                          ls.residual);
  }
  std::vector<ComplexOperator> raw;
  raw.reserve(static_cast<std::size_t>(ls.nullspace.cols()));
  for (Index j = 0; j < ls.nullspace.cols(); ++j) {
    raw.push_back(unpack_operator(ls.nullspace.col(j), system.dims));
  }
  return normalize_family(unpack_operator(ls.solution, system.dims), std::move(raw), system.dims);
}

ParameterizedChoi zero_diagonal_propagation(const ParameterizedChoi& input) {
  ParameterizedChoi pc = input;
  const auto D = static_cast<Index>(pc.particular.dim());

  while (true) {
    std::vector<Index> forced;
    for (Index k = 0; k < D; ++k) {
      bool zero = std::abs(pc.particular.matrix()(k, k)) < kZeroDiagonalTol;
      for (const ComplexOperator& d : pc.directions) {
        zero = zero && std::abs(d.matrix()(k, k)) < kZeroDiagonalTol;
      }
      if (zero) forced.push_back(k);
    }
    if (forced.empty()) return pc;

    // Row k of tau(a) must vanish: directions . a = -particular row.
    const auto n_eq = static_cast<Index>(2 * forced.size()) * D;
    const auto J = static_cast<Index>(pc.directions.size());
    RMatrix m(n_eq, J);
    RVector rhs(n_eq);
    Index row = 0;
    for (Index k : forced) {
      for (Index c = 0; c < D; ++c) {
        const Complex t0 = pc.particular.matrix()(k, c);
        rhs(row) = -t0.real();
        rhs(row + 1) = -t0.imag();
        for (Index j = 0; j < J; ++j) {
          const Complex dj = pc.directions[static_cast<std::size_t>(j)].matrix()(k, c);
          m(row, j) = dj.real();
          m(row + 1, j) = dj.imag();
        }
        row += 2;
      }
    }

    const LeastSquares ls = least_squares(m, rhs);
    if (ls.residual > kForcedResidualTol) {
      throw InfeasibleError(kPropagationContradiction,
                            "a zero diagonal entry forces a nonzero row to vanish (residual " +
                                std::to_string(ls.residual) + ")",
                            ls.residual);
    }
    if (ls.nullspace.cols() == J) {
      return pc;  // the forced rows already vanish identically
    }

    ComplexOperator particular = pc.particular;
    for (Index j = 0; j < J; ++j) particular += ls.solution(j) * pc.directions[static_cast<std::size_t>(j)];
    std::vector<ComplexOperator> reduced;
    for (Index c = 0; c < ls.nullspace.cols(); ++c) {
      ComplexOperator d = ComplexOperator::zero(static_cast<std::size_t>(D));
      for (Index j = 0; j < J; ++j) d += ls.nullspace(j, c) * pc.directions[static_cast<std::size_t>(j)];
      reduced.push_back(std::move(d));
    }
    pc = normalize_family(std::move(particular), std::move(reduced), pc.dims);
  }
}

}  // namespace squash
