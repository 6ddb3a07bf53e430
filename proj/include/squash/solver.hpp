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

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "squash/detectors.hpp"
#include "squash/linalg.hpp"
#include "squash/operator.hpp"

// Search for an adjoint squashing map Lambda^dag with
//   Lambda^dag(F_Q^(i)) = F_M^(i) for every outcome i,
// represented by its Choi operator tau on M (x) Q' (unnormalized
// maximally entangled convention, so tau^R |O>> = |Lambda^dag(O)>>).
// A map exists iff some Hermitian tau >= 0 satisfies these linear equations.

namespace squash {

/// Failure reasons that certify non-existence without a witness vector.
inline constexpr const char* kAffineInfeasible = "affine-infeasible";
inline constexpr const char* kPropagationContradiction = "zero-diagonal-contradiction";

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string reason, const std::string& detail, double residual)
      : std::runtime_error(reason + ": " + detail), reason_(std::move(reason)), residual_(residual) {}

  const std::string& reason() const { return reason_; }
  double residual() const { return residual_; }

 private:
  std::string reason_;
  double residual_;
};

/// Real-linear system A x = b over x = (Re vec(tau), Im vec(tau)), vec
/// column-stacked. Rows: the map equations (real and imaginary part per
/// entry of every F_M), then tau = tau^dag, then Im tau = 0 when reduced.
struct ConstraintSystem {
  RMatrix coefficients;
  RVector rhs;
  FactorDims dims;
  std::vector<OutcomeLabel> labels;
  std::size_t map_rows = 0;
  std::size_t hermiticity_rows = 0;
  std::size_t reality_rows = 0;
  bool real_reduced = false;

  std::size_t unknowns() const { return static_cast<std::size_t>(coefficients.cols()); }
};

/// Pairs outcomes by label. Unitality is not added: it follows from the
/// completeness of both POVMs. Throws PovmError on label or count mismatch.
ConstraintSystem assemble_constraints(const Povm& full, const Povm& target);

RVector pack_operator(const ComplexOperator& tau);
ComplexOperator unpack_operator(const RVector& x, FactorDims dims);

/// max |A x - b| for x = pack(tau).
double system_residual(const ConstraintSystem& system, const ComplexOperator& tau);

/// max_i || tau^R |F_Q^(i)>> - |F_M^(i)>> ||_2.
double map_residual(const Povm& full, const Povm& target, const ComplexOperator& tau);

/// Affine family tau(a) = particular + sum_j a_j directions[j]. Directions
/// are Hermitian and orthonormal under <A, B> = Re Tr[A^dag B]; the
/// particular point is orthogonal to all of them.
struct ParameterizedChoi {
  ComplexOperator particular;
  std::vector<ComplexOperator> directions;
  FactorDims dims;

  std::size_t free_parameters() const { return directions.size(); }
  ComplexOperator evaluate(std::span<const double> params) const;
  /// Orthogonal projection of a Hermitian operator onto the affine set.
  ComplexOperator project(const ComplexOperator& tau) const;
  /// Coordinates of the projection of tau in the direction basis.
  std::vector<double> coordinates(const ComplexOperator& tau) const;
};

/// Least-squares particular solution plus nullspace. Throws InfeasibleError
/// (kAffineInfeasible) when the residual of the least-squares solution
/// exceeds 1e-8.
ParameterizedChoi solve_affine(const ConstraintSystem& system);

/// A PSD tau with a zero diagonal entry has the whole row zero. Every diagonal
/// entry that vanishes on the entire family forces its row to zero; those
/// equations are solved and substituted until nothing changes. Throws
/// InfeasibleError (kPropagationContradiction) when the forced equations
/// have no solution.
ParameterizedChoi zero_diagonal_propagation(const ParameterizedChoi& pc);

enum class Status { kExists, kNotExists, kInconclusive };

std::string_view status_name(Status s);

struct Witness {
  CVector state;
  double eigenvalue = 0.0;
  /// <w|tau|w> in the internal (unnormalized) convention.
  double expectation = 0.0;
  FactorDims dims;
};

struct Diagnostics {
  double residual = 0.0;
  double min_eigenvalue = 0.0;
  int iterations = 0;
  std::size_t nullspace_dim = 0;
  std::size_t reduced_dim = 0;
};

struct Verdict {
  Status status = Status::kInconclusive;
  std::optional<ComplexOperator> choi;
  std::optional<Witness> witness;
  Diagnostics diagnostics;
  std::string reason;
};

struct FeasibilityOptions {
  int max_iter = 50000;
  double tol = 1e-9;
};

/// Dykstra alternating projections between the affine family and the PSD
/// cone, followed by a kernel-refinement step. A family without free
/// parameters is eigen-tested directly and a negative eigenvalue yields
/// NOT_EXISTS with the minimal eigenvector as witness. Non-convergence with
/// free parameters is INCONCLUSIVE.
Verdict psd_feasibility(const ParameterizedChoi& pc, const FeasibilityOptions& options = {});

/// Numerical uniqueness evidence: every free direction, perturbed by +-delta
/// for `grid` deltas log-spaced over [0.01, 0.1], makes tau non-PSD
/// (min eigenvalue < -1e-6).
bool uniqueness_probe(const ParameterizedChoi& pc, const Verdict& verdict, int grid = 2);

/// Smallest eigenvalue over all +-delta perturbations of each free direction,
/// maximized over directions; negative means every direction breaks PSD.
double uniqueness_margin(const ParameterizedChoi& pc, const ComplexOperator& choi, double delta);

/// Full pipeline for one block: assemble, solve, propagate, feasibility.
struct SolveResult {
  Verdict verdict;
  std::optional<ParameterizedChoi> affine;
  std::optional<ParameterizedChoi> reduced;
};

SolveResult solve_squashing(const Povm& full, const Povm& target, const FeasibilityOptions& options = {});

// Closed forms.

/// The BB84 odd-n Choi operator on P (x) Q' (8 x 8) in the closed-form P
/// basis with open parameters a_1..a_6.
ComplexOperator bb84_odd_family(int n, const std::array<double, 6>& a);

/// a = (s, 0, t, 0, 0, 1/2 - s), the PSD assignment.
std::array<double, 6> bb84_odd_assignment(int n);

ComplexOperator bb84_odd_closed_form(int n);

/// tau = (1/2)[1 (x) 1 + 3 sum_alpha (F_M^(0,alpha) - F_M^(1,alpha)) (x) sigma_alpha^T]
/// on the n-photon space (x) Q'. The 1/2 makes it satisfy the constraints
/// exactly in the unnormalized convention.
ComplexOperator six_state_choi(int n, Handedness h = Handedness::kPositive);

/// (|n,0>_z |1> - |0,n>_z |0>) / sqrt(2) on the n-photon space (x) Q'.
CVector theta_minus(int n);

/// Expectation in the normalized maximally-entangled convention: the
/// internal Choi operator is d_Q times larger.
double normalized_scale(double internal_value, std::size_t target_dim);

// Kraus form and adjoint action.

/// Operators A_k^dag (d_M x d_Q) with Lambda^dag(O) = sum_k A_k^dag O A_k.
struct KrausSet {
  std::vector<CMatrix> adjoint_ops;
  FactorDims dims;

  /// max |sum_k A_k^dag A_k - 1_M|.
  double completeness_defect() const;
  /// Heisenberg picture: O on Q -> operator on M.
  ComplexOperator apply_adjoint(const ComplexOperator& op) const;
  /// Schrodinger picture: rho on M -> sum_k A_k rho A_k^dag on Q.
  ComplexOperator apply(const ComplexOperator& rho) const;
};

/// Eigenpairs with eigenvalue > 1e-10 give A^dag[k, l] = sqrt(lambda) v[k d_Q + l].
/// Throws std::invalid_argument when tau is not PSD within 1e-9.
KrausSet extract_kraus(const ComplexOperator& choi);

/// unvectorize(tau^R vectorize(O)).
ComplexOperator apply_adjoint(const ComplexOperator& choi, const ComplexOperator& op);

}  // namespace squash
