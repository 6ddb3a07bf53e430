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

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "squash/detectors.hpp"
#include "squash/fock.hpp"
#include "squash/solver.hpp"

// Blockwise squashers. Photon-counting measurements commute with a QND
// measurement of the total photon number, so the squasher is assembled from
// one map per n-photon block. Input states live on the direct sum of the
// blocks n = 0..n_max, block n occupying indices n(n+1)/2 .. n(n+1)/2 + n.

namespace squash {

enum class BlockKind {
  kVacuumFlag,  // n = 0: classical flag, no photon output
  kIdentity,    // n = 1: already a qubit
  kSubspace,    // Choi map on P, completely mixed output on P-perp
  kFull,        // Choi map on the whole block
};

std::string_view block_kind_name(BlockKind kind);

struct SquasherBlock {
  int n = 0;
  BlockKind kind = BlockKind::kVacuumFlag;
  std::optional<ComplexOperator> choi;
  KrausSet kraus;
  /// Orthonormal input basis the Choi operator acts on.
  std::vector<CVector> p_basis;
  /// Inputs sent to the completely mixed output (kSubspace only).
  std::vector<CVector> p_perp_basis;

  static SquasherBlock vacuum();
  static SquasherBlock identity();
  /// kFull when `p_perp_basis` is empty and `p_basis` is the canonical basis.
  static SquasherBlock from_choi(int n, BlockKind kind, ComplexOperator choi, std::vector<CVector> p_basis,
                                 std::vector<CVector> p_perp_basis);

  /// max |Tr_Q' tau - 1| (0 for the vacuum flag).
  double trace_preservation_defect() const;
};

struct CompositeSquasher {
  std::vector<SquasherBlock> blocks;  // blocks[n] handles n photons
  std::size_t target_dim = 2;

  int n_max() const { return static_cast<int>(blocks.size()) - 1; }
};

std::size_t block_offset(int n);
std::size_t direct_sum_dim(int n_max);

/// Squasher output: flag probability plus the (unnormalized) qubit part.
struct SquashedState {
  double vacuum_probability = 0.0;
  ComplexOperator qubit;
};

/// Qubit output of one block for an input supported on that block.
ComplexOperator apply_block(const SquasherBlock& block, const ComplexOperator& rho_n, std::size_t target_dim = 2);

/// QND projection onto the blocks followed by the blockwise maps. Throws
/// std::invalid_argument when rho is not a density operator on the direct sum.
SquashedState apply_map(const CompositeSquasher& squasher, const ComplexOperator& rho);

/// Ginibre-distributed density matrix: G G^dag / Tr[G G^dag].
ComplexOperator random_density_matrix(std::size_t dim, std::mt19937_64& rng);

/// For `samples` random states per block, the largest
/// |Tr[rho F_M^(i)] - Tr[Lambda(rho) F_Q^(i)]| over outcomes; full_blocks[n]
/// is the full measurement on the n-photon block.
double verify_statistical_equivalence(std::span<const Povm> full_blocks, const Povm& target,
                                      const CompositeSquasher& squasher, int samples, std::uint64_t seed);

struct BlockResult {
  int n = 0;
  BlockKind kind = BlockKind::kVacuumFlag;
  Verdict verdict;
  std::size_t space_dim = 0;
  std::size_t p_dim = 0;
  std::optional<ParameterizedChoi> reduced;
  std::optional<SquasherBlock> block;
};

struct ProtocolResult {
  Protocol protocol;
  std::vector<BlockResult> blocks;
  Status overall = Status::kInconclusive;
  std::optional<CompositeSquasher> squasher;

  const BlockResult* first_failure() const;
};

/// EXISTS iff all EXISTS, NOT_EXISTS if any NOT_EXISTS, else INCONCLUSIVE.
Status aggregate_status(std::span<const Status> statuses);

/// Solve one n-photon block (n >= 2) of the protocol's measurement.
BlockResult check_block(const Protocol& protocol, int n, const FeasibilityOptions& options = {});

/// Blocks n = 0..n_max; the squasher is attached when every block exists.
ProtocolResult check_protocol(const Protocol& protocol, int n_max, const FeasibilityOptions& options = {});

/// build_full_povm for n = 0..n_max.
std::vector<Povm> full_povm_blocks(const Protocol& protocol, int n_max);

}  // namespace squash
