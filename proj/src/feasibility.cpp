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
#include <limits>

#include <Eigen/SVD>

#include "squash/solver.hpp"

namespace squash {

namespace {

using Index = Eigen::Index;

constexpr double kWitnessThreshold = 1e-6;
constexpr double kExistsResidualTol = 1e-8;
constexpr int kCheckEvery = 10;

double psd_threshold(const ComplexOperator& tau, double tol) {
  return -tol * std::max(1.0, tau.max_norm());
}

Witness make_witness(const EigenDecomposition& eig, const ComplexOperator& tau) {
  Witness w;
  w.state = eig.min_eigenvector();
  w.eigenvalue = eig.min_eigenvalue();
  w.expectation = (w.state.adjoint() * tau.matrix() * w.state)(0, 0).real();
  w.dims = *tau.factor_dims();
  return w;
}

// Kernel refinement. Near a feasible point whose kernel is spanned by the
// eigenvectors with tiny eigenvalues, impose tau(a) v = 0 for those vectors
// and re-solve for the parameters, keeping the unconstrained part fixed.
ComplexOperator refine_on_kernel(const ParameterizedChoi& pc, ComplexOperator tau) {
  const auto D = static_cast<Index>(tau.dim());
  const auto J = static_cast<Index>(pc.directions.size());
  for (int round = 0; round < 8; ++round) {
    const EigenDecomposition eig = hermitian_eig(tau);
    const double kernel_cut = 1e-6 * std::max(1.0, tau.max_norm());
    std::vector<Index> kernel;
    for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
      if (eig.eigenvalues(i) < kernel_cut) kernel.push_back(i);
    }
    if (kernel.empty()) return tau;

    const auto rows = static_cast<Index>(2 * kernel.size()) * D;
    RMatrix m(rows, J);
    RVector rhs(rows);
    const std::vector<double> current = pc.coordinates(tau);
    Index row = 0;
    for (Index idx : kernel) {
      const CVector v = eig.eigenvectors.col(idx);
      const CVector base = pc.particular.matrix() * v;
      std::vector<CVector> cols;
      for (Index j = 0; j < J; ++j) cols.push_back(pc.directions[static_cast<std::size_t>(j)].matrix() * v);
      for (Index r = 0; r < D; ++r) {
        rhs(row) = -base(r).real();
        rhs(row + 1) = -base(r).imag();
        for (Index j = 0; j < J; ++j) {
          m(row, j) = cols[static_cast<std::size_t>(j)](r).real();
          m(row + 1, j) = cols[static_cast<std::size_t>(j)](r).imag();
        }
        row += 2;
      }
    }
    RVector a(J);
    for (Index j = 0; j < J; ++j) a(j) = current[static_cast<std::size_t>(j)];
    Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(m);
    cod.setThreshold(1e-10);
    const RVector step = cod.solve(RVector(rhs - m * a));
    a += step;
    std::vector<double> params(a.data(), a.data() + a.size());
    tau = pc.evaluate(params);
    if (step.norm() < 1e-15) break;
  }
  return tau;
}

}  // namespace

Verdict psd_feasibility(const ParameterizedChoi& pc, const FeasibilityOptions& options) {
  Verdict verdict;
  verdict.diagnostics.reduced_dim = pc.free_parameters();

  if (pc.directions.empty()) {
    const ComplexOperator& tau = pc.particular;
    const EigenDecomposition eig = hermitian_eig(tau);
    verdict.diagnostics.min_eigenvalue = eig.min_eigenvalue();
    if (eig.min_eigenvalue() >= psd_threshold(tau, options.tol)) {
      verdict.status = Status::kExists;
      verdict.choi = tau;
    } else if (eig.min_eigenvalue() < -kWitnessThreshold) {
      verdict.status = Status::kNotExists;
      verdict.witness = make_witness(eig, tau);
      verdict.reason = "unique solution has a negative eigenvalue";
    } else {
      verdict.status = Status::kInconclusive;
      verdict.reason = "unique solution is marginally non-PSD";
    }
    return verdict;
  }

  // Dykstra: x stays in the affine family, y in the PSD cone.
  ComplexOperator x = pc.particular;
  ComplexOperator p = ComplexOperator::zero(x.dim());
  ComplexOperator q = ComplexOperator::zero(x.dim());
  p.set_factor_dims(pc.dims);
  q.set_factor_dims(pc.dims);
  double gap = 0.0;
  bool feasible = false;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    if (iter % kCheckEvery == 0) {
      const double min_eig = hermitian_eig(x).min_eigenvalue();
      if (min_eig >= psd_threshold(x, options.tol)) {
        feasible = true;
        break;
      }
    }
    const ComplexOperator shifted = x + p;
    const ComplexOperator y = project_psd(shifted);
    p = shifted - y;
    const ComplexOperator lifted = y + q;
    ComplexOperator next = pc.project(lifted);
    q = lifted - next;
    gap = (next - y).frobenius_norm();
    x = std::move(next);
  }
  verdict.diagnostics.iterations = iter;
  verdict.diagnostics.residual = gap;

  const ComplexOperator refined = refine_on_kernel(pc, x);
  const double refined_min = hermitian_eig(refined).min_eigenvalue();
  const double raw_min = hermitian_eig(x).min_eigenvalue();
  const ComplexOperator& best = refined_min >= raw_min ? refined : x;
  const double best_min = std::max(refined_min, raw_min);

  verdict.diagnostics.min_eigenvalue = best_min;
  if (best_min >= psd_threshold(best, options.tol)) {
    verdict.status = Status::kExists;
    verdict.choi = best;
  } else {
    verdict.status = Status::kInconclusive;
    verdict.reason = feasible ? "refinement lost feasibility"
                              : "alternating projections did not converge";
  }
  return verdict;
}

double uniqueness_margin(const ParameterizedChoi& pc, const ComplexOperator& choi, double delta) {
  double margin = -std::numeric_limits<double>::infinity();
  for (const ComplexOperator& d : pc.directions) {
    double worst = std::numeric_limits<double>::infinity();
    for (double sign : {1.0, -1.0}) {
      ComplexOperator perturbed = choi + (sign * delta) * d;
      worst = std::min(worst, hermitian_eig(perturbed).min_eigenvalue());
    }
    margin = std::max(margin, worst);
  }
  return margin;
}

bool uniqueness_probe(const ParameterizedChoi& pc, const Verdict& verdict, int grid) {
  if (verdict.status != Status::kExists || !verdict.choi) {
    throw std::invalid_argument("uniqueness_probe: verdict is not EXISTS");
  }
  grid = std::max(grid, 1);
  for (const ComplexOperator& d : pc.directions) {
    for (int g = 0; g < grid; ++g) {
      // log-spaced deltas from 0.01 to 0.1
      const double delta = grid == 1 ? 0.01 : 0.01 * std::pow(10.0, static_cast<double>(g) / (grid - 1));
      for (double sign : {1.0, -1.0}) {
        const ComplexOperator perturbed = *verdict.choi + (sign * delta) * d;
        if (hermitian_eig(perturbed).min_eigenvalue() >= -kWitnessThreshold) return false;
      }
    }
  }
  return true;
}

SolveResult solve_squashing(const Povm& full, const Povm& target, const FeasibilityOptions& options) {
  SolveResult result;
  const ConstraintSystem system = assemble_constraints(full, target);
  try {
    result.affine = solve_affine(system);
  } catch (const InfeasibleError& e) {
    result.verdict.status = Status::kNotExists;
    result.verdict.reason = e.reason();
    result.verdict.diagnostics.residual = e.residual();
    return result;
  }
  result.verdict.diagnostics.nullspace_dim = result.affine->free_parameters();

  // A single-point affine set is eigen-tested directly; propagation could only
  // replace its witness by a contradiction certificate.
  try {
    result.reduced = result.affine->free_parameters() == 0 ? *result.affine
                                                           : zero_diagonal_propagation(*result.affine);
  } catch (const InfeasibleError& e) {
    result.verdict.status = Status::kNotExists;
    result.verdict.reason = e.reason();
    result.verdict.diagnostics.residual = e.residual();
    return result;
  }

  Verdict verdict = psd_feasibility(*result.reduced, options);
  verdict.diagnostics.nullspace_dim = result.affine->free_parameters();
  if (verdict.choi) {
    verdict.diagnostics.residual = map_residual(full, target, *verdict.choi);
    if (verdict.status == Status::kExists && verdict.diagnostics.residual >= kExistsResidualTol) {
      verdict.status = Status::kInconclusive;
      verdict.reason = "constraint residual too large";
      verdict.choi.reset();
    }
  } else if (result.reduced->directions.empty()) {
    verdict.diagnostics.residual = map_residual(full, target, result.reduced->particular);
  }
  result.verdict = std::move(verdict);
  return result;
}

}  // namespace squash
