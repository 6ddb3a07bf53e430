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

#include <fstream>
#include <random>

#include "json.hpp"
#include "oracles.hpp"
#include "squash/linalg.hpp"
#include "squash/squasher.hpp"

namespace squash {
namespace {

using oracle::max_abs;

const ProtocolResult& bb84_result() {
  static const ProtocolResult r = check_protocol(Protocol::bb84(), 8);
  return r;
}

// Embed a block state into the direct sum over n = 0..n_max.
ComplexOperator embed(const CMatrix& rho_n, int n, int n_max) {
  const auto dim = static_cast<Eigen::Index>(direct_sum_dim(n_max));
  CMatrix out = CMatrix::Zero(dim, dim);
  out.block(static_cast<Eigen::Index>(block_offset(n)), static_cast<Eigen::Index>(block_offset(n)), n + 1, n + 1) = rho_n;
  return ComplexOperator(out);
}

TEST(DirectSum, Offsets) {
  EXPECT_EQ(block_offset(0), 0u);
  EXPECT_EQ(block_offset(1), 1u);
  EXPECT_EQ(block_offset(3), 6u);
  EXPECT_EQ(direct_sum_dim(0), 1u);
  EXPECT_EQ(direct_sum_dim(3), 10u);
}

TEST(CheckProtocol, Bb84AllBlocksExist) {
  const ProtocolResult& r = bb84_result();
  ASSERT_EQ(r.blocks.size(), 9u);
  EXPECT_EQ(r.overall, Status::kExists);
  ASSERT_TRUE(r.squasher.has_value());
  EXPECT_EQ(r.squasher->n_max(), 8);
  EXPECT_EQ(r.first_failure(), nullptr);
  EXPECT_EQ(r.blocks[0].kind, BlockKind::kVacuumFlag);
  EXPECT_EQ(r.blocks[1].kind, BlockKind::kIdentity);
  EXPECT_EQ(r.blocks[2].kind, BlockKind::kFull);
  for (int n = 3; n <= 8; ++n) {
    const BlockResult& b = r.blocks[static_cast<std::size_t>(n)];
    EXPECT_EQ(b.kind, BlockKind::kSubspace) << "n=" << n;
    EXPECT_EQ(b.p_dim, 4u);
    EXPECT_EQ(b.verdict.diagnostics.nullspace_dim, 6u);
  }
  for (const BlockResult& b : r.blocks) {
    EXPECT_EQ(b.verdict.status, Status::kExists) << "n=" << b.n;
    EXPECT_LT(b.verdict.diagnostics.residual, 1e-8) << "n=" << b.n;
  }
}

TEST(CheckProtocol, SixStateFailsAtThreePhotons) {
  const ProtocolResult r = check_protocol(Protocol::six_state(), 3);
  ASSERT_EQ(r.blocks.size(), 4u);
  EXPECT_EQ(r.blocks[1].verdict.status, Status::kExists);
  EXPECT_EQ(r.blocks[2].verdict.status, Status::kExists);
  EXPECT_EQ(r.blocks[3].verdict.status, Status::kNotExists);
  EXPECT_EQ(r.overall, Status::kNotExists);
  EXPECT_FALSE(r.squasher.has_value());
  ASSERT_NE(r.first_failure(), nullptr);
  EXPECT_EQ(r.first_failure()->n, 3);
  ASSERT_TRUE(r.blocks[3].verdict.witness.has_value());
  EXPECT_LE(normalized_scale(r.blocks[3].verdict.witness->expectation, 2), -0.124);
}

TEST(CheckProtocol, Errors) {
  EXPECT_THROW(check_protocol(Protocol::bb84(), 0), std::invalid_argument);
  EXPECT_THROW(check_block(Protocol::bb84(), 1), std::invalid_argument);
}

TEST(CompositeSquasher, TracePreservingAndKrausComplete) {
  for (const SquasherBlock& b : bb84_result().squasher->blocks) {
    EXPECT_LT(b.trace_preservation_defect(), 1e-10) << "n=" << b.n;
    if (b.kind != BlockKind::kVacuumFlag) EXPECT_LT(b.kraus.completeness_defect(), 1e-10) << "n=" << b.n;
  }
}

// Kraus action on the working basis reproduces every full-measurement element.
TEST(CompositeSquasher, KrausReproducesFullElements) {
  const Protocol p = Protocol::bb84();
  const Povm target = build_target_povm(p);
  for (const SquasherBlock& b : bb84_result().squasher->blocks) {
    if (b.kind == BlockKind::kVacuumFlag) continue;
    const Povm working = restrict_povm(build_full_povm(p, b.n), b.p_basis);
    for (const PovmElement& e : target.elements)
      EXPECT_LT(max_abs(b.kraus.apply_adjoint(e.op).matrix() - working.find(e.label)->matrix()), 1e-10) << "n=" << b.n;
  }
}

TEST(StatisticalEquivalence, Bb84UpToFivePhotons) {
  const Protocol p = Protocol::bb84();
  const ProtocolResult r = check_protocol(p, 5);
  ASSERT_TRUE(r.squasher.has_value());
  const double dev = verify_statistical_equivalence(full_povm_blocks(p, 5), build_target_povm(p), *r.squasher, 200, 42);
  EXPECT_LT(dev, 1e-10);
}

TEST(StatisticalEquivalence, SeededRunsAreIdentical) {
  const Protocol p = Protocol::bb84();
  const std::vector<Povm> full = full_povm_blocks(p, 8);
  const Povm target = build_target_povm(p);
  const double a = verify_statistical_equivalence(full, target, *bb84_result().squasher, 50, 7);
  const double b = verify_statistical_equivalence(full, target, *bb84_result().squasher, 50, 7);
  EXPECT_EQ(a, b);
}

TEST(StatisticalEquivalence, IdentitySquasher) {
  const Protocol p = Protocol::bb84();
  CompositeSquasher id;
  id.blocks = {SquasherBlock::vacuum(), SquasherBlock::identity()};
  const double dev = verify_statistical_equivalence(full_povm_blocks(p, 1), build_target_povm(p), id, 200, 1);
  EXPECT_LT(dev, 1e-14);
}

TEST(StatisticalEquivalence, DetectsCorruptedChoi) {
  const Protocol p = Protocol::bb84();
  CompositeSquasher corrupted = *bb84_result().squasher;
  corrupted.blocks.resize(4);
  SquasherBlock& b3 = corrupted.blocks[3];
  ComplexOperator tau = *b3.choi;
  tau(0, 0) += 0.01;
  // rebuild Kraus operators from the corrupted (still PSD) operator
  b3 = SquasherBlock::from_choi(3, b3.kind, tau, b3.p_basis, b3.p_perp_basis);
  const double dev = verify_statistical_equivalence(full_povm_blocks(p, 3), build_target_povm(p), corrupted, 200, 3);
  EXPECT_GT(dev, 1e-3);
}

TEST(ApplyMap, OnePhotonIsIdentity) {
  const CompositeSquasher& sq = *bb84_result().squasher;
  CMatrix rho1 = CMatrix::Zero(2, 2);
  rho1(0, 0) = 1.0;
  const SquashedState out = apply_map(sq, embed(rho1, 1, 8));
  EXPECT_NEAR(out.vacuum_probability, 0.0, 1e-15);
  EXPECT_LT(max_abs(out.qubit.matrix() - rho1), 1e-12);
}

TEST(ApplyMap, ThreePhotonsHorizontal) {
  const CompositeSquasher& sq = *bb84_result().squasher;
  CMatrix rho3 = CMatrix::Zero(4, 4);
  rho3(0, 0) = 1.0;
  const SquashedState out = apply_map(sq, embed(rho3, 3, 8));
  EXPECT_NEAR(out.qubit(0, 0).real(), 1.0, 1e-10);
  EXPECT_NEAR(out.qubit.trace().real(), 1.0, 1e-12);
  const Povm full = build_full_povm(Protocol::bb84(), 3);
  const Povm target = build_target_povm(Protocol::bb84());
  for (const PovmElement& e : target.elements) {
    const double lhs = (ComplexOperator(rho3) * *full.find(e.label)).trace().real();
    EXPECT_NEAR(lhs, (out.qubit * e.op).trace().real(), 1e-12);
  }
}

TEST(ApplyMap, ComplementGivesMixedQubit) {
  const CompositeSquasher& sq = *bb84_result().squasher;
  const SquasherBlock& b5 = sq.blocks[5];
  ASSERT_FALSE(b5.p_perp_basis.empty());
  const CVector v = b5.p_perp_basis.front();
  const SquashedState out = apply_map(sq, embed(v * v.adjoint(), 5, 8));
  EXPECT_LT(max_abs(out.qubit.matrix() - CMatrix::Identity(2, 2) / 2.0), 1e-12);
}

TEST(ApplyMap, VacuumFlag) {
  const SquashedState out = apply_map(*bb84_result().squasher, embed(CMatrix::Ones(1, 1), 0, 8));
  EXPECT_DOUBLE_EQ(out.vacuum_probability, 1.0);
  EXPECT_LT(out.qubit.max_norm(), 1e-15);
}

TEST(ApplyMap, TraceAndOutputStateProperty) {
  const CompositeSquasher& sq = *bb84_result().squasher;
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexOperator rho = random_density_matrix(direct_sum_dim(8), rng);
    const SquashedState out = apply_map(sq, rho);
    EXPECT_NEAR(out.vacuum_probability + out.qubit.trace().real(), 1.0, 1e-10);
    EXPECT_GE(hermitian_eig(out.qubit).min_eigenvalue(), -1e-10);
  }
}

TEST(ApplyMap, RejectsInvalidInput) {
  const CompositeSquasher& sq = *bb84_result().squasher;
  EXPECT_THROW(apply_map(sq, ComplexOperator::identity(3)), DimensionError);
  EXPECT_THROW(apply_map(sq, ComplexOperator::identity(direct_sum_dim(8))), std::invalid_argument);
  CMatrix neg = CMatrix::Zero(static_cast<Eigen::Index>(direct_sum_dim(8)), static_cast<Eigen::Index>(direct_sum_dim(8)));
  neg(0, 0) = 2.0;
  neg(1, 1) = -1.0;
  EXPECT_THROW(apply_map(sq, ComplexOperator(neg)), std::invalid_argument);
}

TEST(RandomDensityMatrix, IsAState) {
  std::mt19937_64 rng(42);
  for (std::size_t d = 1; d <= 9; ++d) {
    const ComplexOperator rho = random_density_matrix(d, rng);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    EXPECT_TRUE(rho.is_hermitian(1e-14));
    EXPECT_GE(hermitian_eig(rho).min_eigenvalue(), -1e-14);
  }
}

TEST(AggregateStatus, ExhaustiveOverShortLists) {
  const Status all[] = {Status::kExists, Status::kNotExists, Status::kInconclusive};
  for (Status a : all)
    for (Status b : all)
      for (Status c : all) {
        const std::vector<Status> v{a, b, c};
        const Status got = aggregate_status(v);
        const bool any_not = a == Status::kNotExists || b == Status::kNotExists || c == Status::kNotExists;
        const bool all_exist = a == Status::kExists && b == Status::kExists && c == Status::kExists;
        EXPECT_EQ(got, any_not ? Status::kNotExists : all_exist ? Status::kExists : Status::kInconclusive);
      }
}

// Even-n maps are frozen in tests/data; the solver must keep reproducing them.
TEST(EvenBlockFixtures, SolverReproducesFrozenMaps) {
  for (int n : {2, 4, 6, 8}) {
    std::ifstream in(std::string(SQUASH_TEST_DATA_DIR) + "/bb84_even_n" + std::to_string(n) + ".json");
    ASSERT_TRUE(in) << "missing fixture for n=" << n;
    const nlohmann::json doc = nlohmann::json::parse(in);
    const auto& rows = doc.at("choi");
    const auto dim = static_cast<Eigen::Index>(rows.size());
    CMatrix frozen(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j)
        frozen(i, j) = Complex(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][0].get<double>(),
                               rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][1].get<double>());
    const BlockResult& b = bb84_result().blocks[static_cast<std::size_t>(n)];
    EXPECT_EQ(std::string(block_kind_name(b.kind)), doc.at("kind").get<std::string>());
    ASSERT_TRUE(b.verdict.choi.has_value());
    EXPECT_LT(max_abs(b.verdict.choi->matrix() - frozen), 1e-8) << "n=" << n;
    EXPECT_GE(hermitian_eig(ComplexOperator(frozen)).min_eigenvalue(), -1e-9);
  }
}

}  // namespace
}  // namespace squash
