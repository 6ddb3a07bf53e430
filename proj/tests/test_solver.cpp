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

#include <gtest/gtest.h>

#include <Eigen/QR>
#include <random>

#include "oracles.hpp"
#include "squash/fock.hpp"
#include "squash/linalg.hpp"
#include "squash/solver.hpp"

namespace squash {
namespace {

using oracle::max_abs;

Povm bb84_on_p(int n) {
  const Protocol p = Protocol::bb84();
  return restrict_povm(build_full_povm(p, n), p_subspace(n, p.bases).p_basis);
}

const Povm& bb84_target() {
  static const Povm t = build_target_povm(Protocol::bb84());
  return t;
}

std::array<double, 6> unit(int i) {
  std::array<double, 6> a{};
  a[static_cast<std::size_t>(i)] = 1.0;
  return a;
}

// Orthogonal projector onto the column span of m.
RMatrix span_projector(const RMatrix& m) {
  Eigen::ColPivHouseholderQR<RMatrix> qr(m);
  const RMatrix q = RMatrix(qr.householderQ()).leftCols(qr.rank());
  return q * q.transpose();
}

TEST(Constraints, ShapeInvariant) {
  const ConstraintSystem sys = assemble_constraints(bb84_on_p(3), bb84_target());
  const std::size_t D = 8;
  EXPECT_EQ(sys.map_rows, 4u * 4u * 4u * 2u);
  EXPECT_EQ(sys.hermiticity_rows, D * D);
  EXPECT_TRUE(sys.real_reduced);
  EXPECT_EQ(sys.reality_rows, D * D);
  EXPECT_EQ(sys.unknowns(), 2 * D * D);
  EXPECT_EQ(static_cast<std::size_t>(sys.coefficients.rows()), sys.map_rows + sys.hermiticity_rows + sys.reality_rows);
  EXPECT_EQ(sys.dims, (FactorDims{4, 2}));

  const ConstraintSystem six = assemble_constraints(build_full_povm(Protocol::six_state(), 3),
                                                    build_target_povm(Protocol::six_state()));
  EXPECT_FALSE(six.real_reduced);
  EXPECT_EQ(six.reality_rows, 0u);
}

TEST(Constraints, IdentityMapSatisfiesTrivialPair) {
  for (const Protocol& p : {Protocol::bb84(), Protocol::six_state()}) {
    const Povm t = build_target_povm(p);
    const ConstraintSystem sys = assemble_constraints(t, t);
    EXPECT_LT(system_residual(sys, identity_choi(2)), 1e-15);
    EXPECT_LT(map_residual(t, t, identity_choi(2)), 1e-15);
    const ParameterizedChoi pc = solve_affine(sys);
    EXPECT_LT(max_abs(pc.project(identity_choi(2)).matrix() - identity_choi(2).matrix()), 1e-12);
  }
}

TEST(Constraints, LabelAndCountMismatch) {
  const Povm bb = bb84_target();
  EXPECT_THROW(assemble_constraints(build_full_povm(Protocol::six_state(), 2), bb), PovmError);
  Povm relabelled = bb;
  relabelled.elements[0].label = OutcomeLabel::bit_outcome(0, Basis::kY);
  EXPECT_THROW(assemble_constraints(bb84_on_p(3), relabelled), PovmError);
}

TEST(Constraints, PackUnpackRoundTrip) {
  std::mt19937_64 rng(31);
  const ComplexOperator tau(oracle::random_hermitian(8, rng), FactorDims{4, 2});
  const ComplexOperator back = unpack_operator(pack_operator(tau), FactorDims{4, 2});
  EXPECT_EQ(back.matrix(), tau.matrix());
}

TEST(Constraints, OddClosedFormResidualProperty) {
  for (int n : {3, 5, 7, 9}) {
    const ConstraintSystem sys = assemble_constraints(bb84_on_p(n), bb84_target());
    EXPECT_LT(system_residual(sys, bb84_odd_closed_form(n)), 1e-12) << "n=" << n;
    EXPECT_LT(map_residual(bb84_on_p(n), bb84_target(), bb84_odd_closed_form(n)), 1e-12) << "n=" << n;
  }
}

TEST(SolveAffine, OddBlockHasSixFreeParameters) {
  const ParameterizedChoi pc = solve_affine(assemble_constraints(bb84_on_p(3), bb84_target()));
  EXPECT_EQ(pc.free_parameters(), 6u);
  EXPECT_EQ(pc.dims, (FactorDims{4, 2}));
}

// The solver's nullspace spans the same directions as the six open entries
// of the displayed odd-n family, and the displayed assignment lies on the set.
TEST(SolveAffine, NullspaceMatchesDisplayedFamilyProperty) {
  for (int n : {3, 5, 7}) {
    const ParameterizedChoi pc = solve_affine(assemble_constraints(bb84_on_p(n), bb84_target()));
    ASSERT_EQ(pc.free_parameters(), 6u);
    const CMatrix base = oracle::tau_odd_display(n, {});
    RMatrix display(128, 6), solver(128, 6);
    for (int i = 0; i < 6; ++i) {
      const ComplexOperator d(CMatrix(oracle::tau_odd_display(n, unit(i)) - base), FactorDims{4, 2});
      display.col(i) = pack_operator(d);
      solver.col(i) = pack_operator(pc.directions[static_cast<std::size_t>(i)]);
    }
    EXPECT_LT((span_projector(display) - span_projector(solver)).cwiseAbs().maxCoeff(), 1e-10) << "n=" << n;

    const double s = std::pow(2.0, 1 - n);
    const double t = s * std::sqrt(std::pow(2.0, n - 1) - 1.0);
    const ComplexOperator assigned(oracle::tau_odd_display(n, {s, 0, t, 0, 0, 0.5 - s}), FactorDims{4, 2});
    EXPECT_LT(max_abs(pc.project(assigned).matrix() - assigned.matrix()), 1e-12) << "n=" << n;
    // arbitrary parameters stay on the affine set
    const ComplexOperator other(oracle::tau_odd_display(n, {0.3, -1.0, 2.0, 0.1, 0.7, -0.4}), FactorDims{4, 2});
    EXPECT_LT(max_abs(pc.project(other).matrix() - other.matrix()), 1e-12) << "n=" << n;
  }
}

TEST(SolveAffine, FamilySatisfiesConstraintsForAnyParametersProperty) {
  const Povm full = bb84_on_p(5);
  const ParameterizedChoi pc = solve_affine(assemble_constraints(full, bb84_target()));
  std::mt19937_64 rng(32);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(pc.free_parameters());
    for (double& x : a) x = 3.0 * g(rng);
    const ComplexOperator tau = pc.evaluate(a);
    EXPECT_LT(map_residual(full, bb84_target(), tau), 1e-10);
    EXPECT_TRUE(tau.is_hermitian());
  }
}

TEST(SolveAffine, SixStateThreePhotonsIsUnique) {
  const Protocol p = Protocol::six_state();
  const ParameterizedChoi pc = solve_affine(assemble_constraints(build_full_povm(p, 3), build_target_povm(p)));
  EXPECT_EQ(pc.free_parameters(), 0u);
  EXPECT_LT(max_abs(pc.particular.matrix() - six_state_choi(3).matrix()), 1e-12);
}

TEST(SolveAffine, InconsistentSystemIsAffineInfeasible) {
  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const Povm full{2, {{OutcomeLabel::bit_outcome(0, Basis::kZ), ComplexOperator(p0)},
                      {OutcomeLabel::bit_outcome(1, Basis::kZ), ComplexOperator(p1)}}};
  const Povm coin{2, {{OutcomeLabel::bit_outcome(0, Basis::kZ), Complex(0.5) * ComplexOperator::identity(2)},
                      {OutcomeLabel::bit_outcome(1, Basis::kZ), Complex(0.5) * ComplexOperator::identity(2)}}};
  try {
    solve_affine(assemble_constraints(full, coin));
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.reason(), kAffineInfeasible);
    EXPECT_GT(e.residual(), 1e-3);
  }
  const SolveResult r = solve_squashing(full, coin);
  EXPECT_EQ(r.verdict.status, Status::kNotExists);
  EXPECT_EQ(r.verdict.reason, kAffineInfeasible);
}

TEST(Propagation, OddBlockLeavesOneParameter) {
  for (int n : {3, 5, 7}) {
    const ParameterizedChoi pc = solve_affine(assemble_constraints(bb84_on_p(n), bb84_target()));
    const ParameterizedChoi reduced = zero_diagonal_propagation(pc);
    EXPECT_EQ(reduced.free_parameters(), 1u) << "n=" << n;
    // a1 = s, a2 = 0, a3 = t, a4 = a5 = 0 forced; a6 free: two points of the
    // displayed line lie on the reduced set, so the lines coincide.
    const double s = std::pow(2.0, 1 - n);
    const double t = s * std::sqrt(std::pow(2.0, n - 1) - 1.0);
    for (double a6 : {0.0, 1.0, 0.5 - s}) {
      const ComplexOperator on_line(oracle::tau_odd_display(n, {s, 0, t, 0, 0, a6}), FactorDims{4, 2});
      EXPECT_LT(max_abs(reduced.project(on_line).matrix() - on_line.matrix()), 1e-12) << "n=" << n;
    }
  }
}

TEST(Propagation, DeterminedInputUnchanged) {
  ParameterizedChoi pc;
  pc.dims = {4, 2};
  pc.particular = bb84_odd_closed_form(3);
  const ParameterizedChoi out = zero_diagonal_propagation(pc);
  EXPECT_EQ(out.free_parameters(), 0u);
  EXPECT_LT(max_abs(out.particular.matrix() - pc.particular.matrix()), 1e-15);
}

TEST(Propagation, ForcedOffDiagonalIsContradiction) {
  ParameterizedChoi pc;
  pc.dims = {2, 1};
  pc.particular = ComplexOperator((CMatrix(2, 2) << 0.0, 0.3, 0.3, 1.0).finished(), FactorDims{2, 1});
  try {
    zero_diagonal_propagation(pc);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.reason(), kPropagationContradiction);
  }
}

TEST(Feasibility, OddBlockExistsAndIsTheClosedForm) {
  for (int n : {3, 5, 7}) {
    const SolveResult r = solve_squashing(bb84_on_p(n), bb84_target());
    ASSERT_EQ(r.verdict.status, Status::kExists) << "n=" << n;
    EXPECT_GE(r.verdict.diagnostics.min_eigenvalue, -1e-9);
    EXPECT_LT(r.verdict.diagnostics.residual, 1e-8);
    EXPECT_EQ(r.verdict.diagnostics.nullspace_dim, 6u);
    EXPECT_EQ(r.verdict.diagnostics.reduced_dim, 1u);
    EXPECT_LT(max_abs(r.verdict.choi->matrix() - bb84_odd_closed_form(n).matrix()), 1e-8) << "n=" << n;
  }
}

TEST(Feasibility, EvenBlocksExist) {
  const Protocol p = Protocol::bb84();
  for (int n : {2, 4, 6, 8}) {
    const SubspaceDecomposition dec = p_subspace(n, p.bases);
    const Povm full = n == 2 ? build_full_povm(p, n) : restrict_povm(build_full_povm(p, n), dec.p_basis);
    const SolveResult r = solve_squashing(full, bb84_target());
    ASSERT_EQ(r.verdict.status, Status::kExists) << "n=" << n;
    EXPECT_LT(r.verdict.diagnostics.residual, 1e-8);
    EXPECT_GE(r.verdict.diagnostics.min_eigenvalue, -1e-9);
    EXPECT_LT(partial_trace_second(*r.verdict.choi).matrix().cwiseAbs().maxCoeff(), 1.0 + 1e-9);
    EXPECT_LT(max_abs(partial_trace_second(*r.verdict.choi).matrix() -
                      CMatrix::Identity(static_cast<Eigen::Index>(full.dim), static_cast<Eigen::Index>(full.dim))),
              1e-9);
  }
}

TEST(Feasibility, SixStateWitness) {
  const Protocol p = Protocol::six_state();
  const SolveResult r = solve_squashing(build_full_povm(p, 3), build_target_povm(p));
  ASSERT_EQ(r.verdict.status, Status::kNotExists);
  ASSERT_TRUE(r.verdict.witness.has_value());
  const Witness& w = *r.verdict.witness;
  EXPECT_LT(w.expectation, -1e-6);
  EXPECT_LE(normalized_scale(w.expectation, w.dims.second), -0.124);
  EXPECT_NEAR(w.state.dot(six_state_choi(3).matrix() * w.state).real(), w.expectation, 1e-12);
  EXPECT_FALSE(r.verdict.choi.has_value());
}

// Alternating projections never certify infeasibility on their own.
TEST(Feasibility, IterationCapNeverGivesNotExists) {
  const ParameterizedChoi pc =
      zero_diagonal_propagation(solve_affine(assemble_constraints(bb84_on_p(3), bb84_target())));
  for (int cap : {1, 3, 10}) {
    FeasibilityOptions opts;
    opts.max_iter = cap;
    EXPECT_NE(psd_feasibility(pc, opts).status, Status::kNotExists) << "cap=" << cap;
  }
}

TEST(Feasibility, DeterministicDiagnostics) {
  const SolveResult a = solve_squashing(bb84_on_p(5), bb84_target());
  const SolveResult b = solve_squashing(bb84_on_p(5), bb84_target());
  EXPECT_EQ(a.verdict.diagnostics.iterations, b.verdict.diagnostics.iterations);
  EXPECT_EQ(a.verdict.diagnostics.min_eigenvalue, b.verdict.diagnostics.min_eigenvalue);
  EXPECT_EQ(a.verdict.choi->matrix(), b.verdict.choi->matrix());
}

TEST(ClosedForm, ThreePhotonEntries) {
  const ComplexOperator tau = bb84_odd_closed_form(3);
  const auto at = [&](int i, int j) { return tau(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)).real(); };
  EXPECT_EQ(at(1, 1), 1.0);
  EXPECT_EQ(at(5, 5), 0.5);
  EXPECT_EQ(at(1, 4), 0.25);
  EXPECT_NEAR(at(1, 8), std::sqrt(3.0) / 4.0, 1e-16);
  EXPECT_EQ(at(5, 8), 0.25);
  EXPECT_EQ(at(6, 7), 0.5);
  EXPECT_LT(max_abs(tau.matrix() - oracle::tau_odd_display(3, bb84_odd_assignment(3))), 1e-15);
  EXPECT_THROW(bb84_odd_closed_form(4), std::invalid_argument);
  EXPECT_THROW(bb84_odd_closed_form(1), std::invalid_argument);
}

TEST(ClosedForm, PsdAndTracePreservingProperty) {
  for (int n : {3, 5, 7, 9, 11}) {
    const ComplexOperator tau = bb84_odd_closed_form(n);
    EXPECT_GE(hermitian_eig(tau).min_eigenvalue(), -1e-10) << "n=" << n;
    EXPECT_LT(max_abs(partial_trace_second(tau).matrix() - CMatrix::Identity(4, 4)), 1e-12);
  }
}

TEST(SixStateChoi, SpectrumProperty) {
  for (int n = 1; n <= 8; ++n) {
    const ComplexOperator tau = six_state_choi(n);
    EXPECT_TRUE(tau.is_hermitian(1e-12)) << "n=" << n;
    EXPECT_EQ(tau.dim(), 2u * static_cast<std::size_t>(n + 1));
    const double lo = hermitian_eig(tau).min_eigenvalue();
    if (n <= 2) EXPECT_GE(lo, -1e-10) << "n=" << n;
    if (n == 3) EXPECT_LT(lo, -1e-3);
    const Protocol p = Protocol::six_state();
    EXPECT_LT(map_residual(build_full_povm(p, n), build_target_povm(p), tau), 1e-12) << "n=" << n;
  }
  EXPECT_THROW(six_state_choi(0), std::invalid_argument);
}

TEST(SixStateChoi, ThetaMinusExpectation) {
  const CVector theta = theta_minus(3);
  EXPECT_NEAR(theta.norm(), 1.0, 1e-15);
  // (|3,0>|1> - |0,3>|0>)/sqrt 2 with the output qubit as the fast index
  EXPECT_NEAR(theta(0 * 2 + 1).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(theta(3 * 2 + 0).real(), -1.0 / std::sqrt(2.0), 1e-15);
  const double e = theta.dot(six_state_choi(3).matrix() * theta).real();
  EXPECT_NEAR(normalized_scale(e, 2), -0.125, 1e-12);
}

// Witness value and PSD verdicts do not depend on the y-basis handedness.
TEST(SixStateChoi, HandednessInvariance) {
  for (int n = 1; n <= 5; ++n) {
    const ComplexOperator plus = six_state_choi(n, Handedness::kPositive);
    const ComplexOperator minus = six_state_choi(n, Handedness::kNegative);
    EXPECT_NEAR(hermitian_eig(plus).min_eigenvalue(), hermitian_eig(minus).min_eigenvalue(), 1e-12);
    const Protocol p = Protocol::six_state(Handedness::kNegative);
    EXPECT_LT(map_residual(build_full_povm(p, n), build_target_povm(p), minus), 1e-12);
  }
  const CVector theta = theta_minus(3);
  EXPECT_NEAR(normalized_scale(theta.dot(six_state_choi(3, Handedness::kNegative).matrix() * theta).real(), 2), -0.125, 1e-12);
  const Protocol p = Protocol::six_state(Handedness::kNegative);
  EXPECT_EQ(solve_squashing(build_full_povm(p, 3), build_target_povm(p)).verdict.status, Status::kNotExists);
}

TEST(Kraus, IdentityChannel) {
  const KrausSet k = extract_kraus(identity_choi(2));
  ASSERT_EQ(k.adjoint_ops.size(), 1u);
  const CMatrix a = k.adjoint_ops[0];
  EXPECT_LT(max_abs(a * a.adjoint() - CMatrix::Identity(2, 2)), 1e-12);
  EXPECT_LT(max_abs(a - a(0, 0) * CMatrix::Identity(2, 2)), 1e-12);
}

TEST(Kraus, OddClosedFormCompletenessAndActionProperty) {
  for (int n : {3, 5, 7}) {
    const KrausSet k = extract_kraus(bb84_odd_closed_form(n));
    EXPECT_LE(k.adjoint_ops.size(), 8u);
    EXPECT_LT(k.completeness_defect(), 1e-10);
    const Povm full = bb84_on_p(n);
    for (const PovmElement& e : bb84_target().elements)
      EXPECT_LT(max_abs(k.apply_adjoint(e.op).matrix() - full.find(e.label)->matrix()), 1e-10) << "n=" << n;
  }
}

TEST(Kraus, RejectsNonPsd) { EXPECT_THROW(extract_kraus(six_state_choi(3)), std::invalid_argument); }

TEST(ApplyAdjoint, UnitalAndReproducesZOutcome) {
  const ComplexOperator tau = bb84_odd_closed_form(3);
  EXPECT_LT(max_abs(apply_adjoint(tau, ComplexOperator::identity(2)).matrix() - CMatrix::Identity(4, 4)), 1e-15);
  CMatrix fq = CMatrix::Zero(2, 2);
  fq(0, 0) = 0.5;
  CMatrix expected = CMatrix::Zero(4, 4);
  expected.diagonal() << 0.5, 0, 0.25, 0.25;
  EXPECT_LT(max_abs(apply_adjoint(tau, ComplexOperator(fq)).matrix() - expected), 1e-15);
  EXPECT_THROW(apply_adjoint(tau, ComplexOperator::identity(3)), DimensionError);
}

TEST(ApplyAdjoint, LinearityProperty) {
  std::mt19937_64 rng(33);
  const ComplexOperator tau = bb84_odd_closed_form(5);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexOperator a(oracle::random_matrix(2, 2, rng));
    const ComplexOperator b(oracle::random_matrix(2, 2, rng));
    const Complex c(0.3, -1.2);
    const CMatrix lhs = apply_adjoint(tau, a + c * b).matrix();
    const CMatrix rhs = apply_adjoint(tau, a).matrix() + c * apply_adjoint(tau, b).matrix();
    EXPECT_LT(max_abs(lhs - rhs), 1e-12);
    EXPECT_LT(max_abs(apply_adjoint(tau, a).matrix() - oracle::adjoint_from_choi(tau.matrix(), 4, 2, a.matrix())), 1e-12);
  }
}

TEST(Uniqueness, OddAndEvenBlocks) {
  const Protocol p = Protocol::bb84();
  for (int n : {3, 4, 5}) {
    const Povm full = restrict_povm(build_full_povm(p, n), p_subspace(n, p.bases).p_basis);
    const SolveResult r = solve_squashing(full, bb84_target());
    ASSERT_EQ(r.verdict.status, Status::kExists);
    EXPECT_TRUE(uniqueness_probe(*r.reduced, r.verdict)) << "n=" << n;
    EXPECT_LT(uniqueness_margin(*r.reduced, *r.verdict.choi, 0.01), -1e-6);
  }
}

TEST(Uniqueness, GenuinelyFreeMapIsNotUnique) {
  const Povm coin{2, {{OutcomeLabel::bit_outcome(0, Basis::kZ), Complex(0.5) * ComplexOperator::identity(2)},
                      {OutcomeLabel::bit_outcome(1, Basis::kZ), Complex(0.5) * ComplexOperator::identity(2)}}};
  const SolveResult r = solve_squashing(coin, coin);
  ASSERT_EQ(r.verdict.status, Status::kExists);
  EXPECT_GT(r.reduced->free_parameters(), 0u);
  EXPECT_FALSE(uniqueness_probe(*r.reduced, r.verdict));
}

TEST(Uniqueness, RequiresExists) {
  const Protocol p = Protocol::six_state();
  const SolveResult r = solve_squashing(build_full_povm(p, 3), build_target_povm(p));
  EXPECT_THROW(uniqueness_probe(*r.affine, r.verdict), std::invalid_argument);
}

TEST(Status, Names) {
  EXPECT_EQ(status_name(Status::kExists), "EXISTS");
  EXPECT_EQ(status_name(Status::kNotExists), "NOT_EXISTS");
  EXPECT_EQ(status_name(Status::kInconclusive), "INCONCLUSIVE");
}

}  // namespace
}  // namespace squash
