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

#include "squash/squasher.hpp"

#include <algorithm>
#include <cmath>

namespace squash {

namespace {

using Index = Eigen::Index;

constexpr double kMixedOutputTol = 1e-10;

std::vector<CVector> canonical_basis(std::size_t dim) {
  std::vector<CVector> out;
  for (std::size_t j = 0; j < dim; ++j) {
    out.push_back(CVector::Unit(static_cast<Index>(dim), static_cast<Index>(j)));
  }
  return out;
}

CMatrix as_columns(const std::vector<CVector>& vs, std::size_t rows) {
  CMatrix out(static_cast<Index>(rows), static_cast<Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) out.col(static_cast<Index>(i)) = vs[i];
  return out;
}

// Every element restricted to P-perp equals Tr[F_Q]/d_Q times the identity,
// and no element couples P to P-perp.
bool mixed_output_reproduces(const Povm& full, const Povm& target, const SubspaceDecomposition& dec) {
  const CMatrix p = dec.p_matrix();
  const CMatrix w = dec.p_perp_matrix();
  const auto dq = static_cast<double>(target.dim);
  for (const PovmElement& e : full.elements) {
    const ComplexOperator* fq = target.find(e.label);
    if (fq == nullptr) return false;
    const Complex c = fq->trace() / dq;
    const CMatrix perp = w.adjoint() * e.op.matrix() * w;
    const CMatrix expected = c * CMatrix::Identity(perp.rows(), perp.cols());
    if (perp.size() && (perp - expected).cwiseAbs().maxCoeff() > kMixedOutputTol) return false;
    const CMatrix cross = p.adjoint() * e.op.matrix() * w;
    if (cross.size() && cross.cwiseAbs().maxCoeff() > kMixedOutputTol) return false;
  }
  return true;
}

}  // namespace

std::string_view block_kind_name(BlockKind kind) {
  switch (kind) {
    case BlockKind::kVacuumFlag: return "vacuum_flag";
    case BlockKind::kIdentity: return "identity";
    case BlockKind::kSubspace: return "subspace";
    case BlockKind::kFull: return "full";
  }
  return "?";
}

SquasherBlock SquasherBlock::vacuum() {
  SquasherBlock b;
  b.n = 0;
  b.kind = BlockKind::kVacuumFlag;
  b.p_basis = canonical_basis(1);
  return b;
}

SquasherBlock SquasherBlock::identity() {
  return from_choi(1, BlockKind::kIdentity, identity_choi(2), canonical_basis(2), {});
}

SquasherBlock SquasherBlock::from_choi(int n, BlockKind kind, ComplexOperator choi, std::vector<CVector> p_basis,
                                       std::vector<CVector> p_perp_basis) {
  SquasherBlock b;
  b.n = n;
  b.kind = kind;
  b.kraus = extract_kraus(choi);
  b.choi = std::move(choi);
  b.p_basis = std::move(p_basis);
  b.p_perp_basis = std::move(p_perp_basis);
  return b;
}

double SquasherBlock::trace_preservation_defect() const {
  if (!choi) return 0.0;
  const ComplexOperator reduced = partial_trace_second(*choi);
  return max_distance(reduced, ComplexOperator::identity(reduced.dim()));
}

std::size_t block_offset(int n) { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2; }

std::size_t direct_sum_dim(int n_max) { return block_offset(n_max + 1); }

ComplexOperator apply_block(const SquasherBlock& block, const ComplexOperator& rho_n, std::size_t target_dim) {
  const auto dq = static_cast<Index>(target_dim);
  if (block.kind == BlockKind::kVacuumFlag) return ComplexOperator::zero(target_dim);

  const std::size_t dim = static_cast<std::size_t>(block.n) + 1;
  if (rho_n.dim() != dim) throw DimensionError("apply_block: input is not on the block");
  const CMatrix p = as_columns(block.p_basis, dim);
  ComplexOperator out = block.kraus.apply(ComplexOperator(CMatrix(p.adjoint() * rho_n.matrix() * p)));
  if (!block.p_perp_basis.empty()) {
    const CMatrix w = as_columns(block.p_perp_basis, dim);
    const double weight = (w.adjoint() * rho_n.matrix() * w).trace().real();
    out.matrix() += (weight / static_cast<double>(target_dim)) * CMatrix::Identity(dq, dq);
  }
  return out;
}

SquashedState apply_map(const CompositeSquasher& squasher, const ComplexOperator& rho) {
  const std::size_t dim = direct_sum_dim(squasher.n_max());
  if (rho.dim() != dim) {
    throw DimensionError("apply_map: input dimension " + std::to_string(rho.dim()) + ", expected " +
                         std::to_string(dim));
  }
  if (!rho.is_hermitian(1e-10)) throw std::invalid_argument("apply_map: input is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) throw std::invalid_argument("apply_map: trace is not 1");
  if (!is_psd(rho, 1e-10)) throw std::invalid_argument("apply_map: input is not positive semidefinite");

  SquashedState out{0.0, ComplexOperator::zero(squasher.target_dim)};
  for (const SquasherBlock& block : squasher.blocks) {
    const auto offset = static_cast<Index>(block_offset(block.n));
    const Index size = block.n + 1;
    const ComplexOperator rho_n(CMatrix(rho.matrix().block(offset, offset, size, size)));
    if (block.kind == BlockKind::kVacuumFlag) {
      out.vacuum_probability += rho_n.trace().real();
    } else {
      out.qubit += apply_block(block, rho_n, squasher.target_dim);
    }
  }
  return out;
}

ComplexOperator random_density_matrix(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = static_cast<Index>(dim);
  CMatrix g(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return ComplexOperator(std::move(rho));
}

double verify_statistical_equivalence(std::span<const Povm> full_blocks, const Povm& target,
                                      const CompositeSquasher& squasher, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const SquasherBlock& block : squasher.blocks) {
    if (block.n < 0 || static_cast<std::size_t>(block.n) >= full_blocks.size()) {
      throw DimensionError("verify_statistical_equivalence: no full measurement for block " +
                           std::to_string(block.n));
    }
    const Povm& full = full_blocks[static_cast<std::size_t>(block.n)];
    for (int s = 0; s < samples; ++s) {
      const ComplexOperator rho = random_density_matrix(static_cast<std::size_t>(block.n) + 1, rng);
      if (block.kind == BlockKind::kVacuumFlag) {
        const ComplexOperator* flag = full.find(OutcomeLabel::vacuum());
        if (flag == nullptr) throw PovmError("vacuum block without a vacuum_flag outcome");
        const double p_full = (rho * *flag).trace().real();
        worst = std::max(worst, std::abs(p_full - rho.trace().real()));
        continue;
      }
      const ComplexOperator squashed = apply_block(block, rho, target.dim);
      for (const PovmElement& e : full.elements) {
        const ComplexOperator* fq = target.find(e.label);
        if (fq == nullptr) throw PovmError("target has no outcome " + e.label.to_string());
        const double p_full = (rho * e.op).trace().real();
        const double p_squashed = (squashed * *fq).trace().real();
        worst = std::max(worst, std::abs(p_full - p_squashed));
      }
    }
  }
  return worst;
}

const BlockResult* ProtocolResult::first_failure() const {
  for (const BlockResult& b : blocks) {
    if (b.verdict.status != Status::kExists) return &b;
  }
  return nullptr;
}

Status aggregate_status(std::span<const Status> statuses) {
  bool all_exist = true;
  for (Status s : statuses) {
    if (s == Status::kNotExists) return Status::kNotExists;
    all_exist = all_exist && s == Status::kExists;
  }
  return all_exist ? Status::kExists : Status::kInconclusive;
}

std::vector<Povm> full_povm_blocks(const Protocol& protocol, int n_max) {
  std::vector<Povm> out;
  for (int n = 0; n <= n_max; ++n) out.push_back(build_full_povm(protocol, n));
  return out;
}

BlockResult check_block(const Protocol& protocol, int n, const FeasibilityOptions& options) {
  if (n < 2) throw std::invalid_argument("check_block: blocks n < 2 are fixed by construction");
  BlockResult result;
  result.n = n;
  result.space_dim = static_cast<std::size_t>(n) + 1;

  const Povm full = build_full_povm(protocol, n);
  const Povm target = build_target_povm(protocol);
  const SubspaceDecomposition dec = p_subspace(n, protocol.bases, protocol.handedness);
  result.p_dim = dec.p_dim();

  const bool split = (dec.closed_form || dec.p_dim() < result.space_dim) &&
                     mixed_output_reproduces(full, target, dec);
  std::vector<CVector> basis = split ? dec.p_basis : canonical_basis(result.space_dim);
  std::vector<CVector> perp = split ? dec.p_perp_basis : std::vector<CVector>{};
  result.kind = split ? BlockKind::kSubspace : BlockKind::kFull;

  const Povm working = split ? restrict_povm(full, basis) : full;
  SolveResult solved = solve_squashing(working, target, options);
  result.verdict = std::move(solved.verdict);
  result.reduced = std::move(solved.reduced);
  if (result.verdict.status == Status::kExists) {
    result.block = SquasherBlock::from_choi(n, result.kind, *result.verdict.choi, std::move(basis), std::move(perp));
  }
  return result;
}

ProtocolResult check_protocol(const Protocol& protocol, int n_max, const FeasibilityOptions& options) {
  if (n_max < 1) throw std::invalid_argument("check_protocol: n_max must be >= 1");
  ProtocolResult result;
  result.protocol = protocol;

  {
    BlockResult vac;
    vac.n = 0;
    vac.kind = BlockKind::kVacuumFlag;
    vac.space_dim = 1;
    vac.verdict.status = Status::kExists;
    vac.block = SquasherBlock::vacuum();
    result.blocks.push_back(std::move(vac));
  }
  {
    BlockResult one;
    one.n = 1;
    one.kind = BlockKind::kIdentity;
    one.space_dim = 2;
    one.p_dim = 2;
    one.block = SquasherBlock::identity();
    one.verdict.status = Status::kExists;
    one.verdict.choi = one.block->choi;
    one.verdict.diagnostics.residual =
        map_residual(build_full_povm(protocol, 1), build_target_povm(protocol), *one.block->choi);
    one.verdict.diagnostics.min_eigenvalue = hermitian_eig(*one.block->choi).min_eigenvalue();
    if (one.verdict.diagnostics.residual >= 1e-8) {
      one.verdict.status = Status::kInconclusive;
      one.verdict.reason = "identity map does not reproduce the one-photon measurement";
    }
    result.blocks.push_back(std::move(one));
  }
  for (int n = 2; n <= n_max; ++n) result.blocks.push_back(check_block(protocol, n, options));

  std::vector<Status> statuses;
  for (const BlockResult& b : result.blocks) statuses.push_back(b.verdict.status);
  result.overall = aggregate_status(statuses);
  if (result.overall == Status::kExists) {
    CompositeSquasher squasher;
    for (const BlockResult& b : result.blocks) squasher.blocks.push_back(*b.block);
    result.squasher = std::move(squasher);
  }
  return result;
}

}  // namespace squash
