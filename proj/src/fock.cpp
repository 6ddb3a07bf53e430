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

#include "squash/fock.hpp"

#include <algorithm>
#include <cmath>

#include "squash/linalg.hpp"

namespace squash {

namespace {

constexpr double kRankTol = 1e-9;

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(out);
}

Complex ipow(Complex c, int j) {
  Complex out = 1.0;
  for (int i = 0; i < j; ++i) out *= c;
  return out;
}

CMatrix columns(const std::vector<CVector>& vs, Eigen::Index rows) {
  CMatrix out(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = vs[i];
  return out;
}

bool is_bb84_bases(const std::vector<Basis>& bases) {
  if (bases.size() != 2) return false;
  return std::count(bases.begin(), bases.end(), Basis::kZ) == 1 &&
         std::count(bases.begin(), bases.end(), Basis::kX) == 1;
}

}  // namespace

std::string_view basis_name(Basis b) {
  switch (b) {
    case Basis::kZ: return "z";
    case Basis::kX: return "x";
    case Basis::kY: return "y";
  }
  return "?";
}

Basis parse_basis(std::string_view name) {
  if (name == "z") return Basis::kZ;
  if (name == "x") return Basis::kX;
  if (name == "y") return Basis::kY;
  throw std::invalid_argument("unknown polarization basis '" + std::string(name) + "'");
}

Complex mode_coefficient(Basis b, Handedness h) {
  switch (b) {
    case Basis::kZ: return 0.0;
    case Basis::kX: return 1.0;
    case Basis::kY: return Complex(0.0, static_cast<double>(static_cast<int>(h)));
  }
  return 0.0;
}

CVector extremal_state(Basis alpha, int n, Mode mode, Handedness h) {
  if (n < 0) throw std::invalid_argument("extremal_state: negative photon number");
  CVector out = CVector::Zero(n + 1);
  if (alpha == Basis::kZ) {
    out(mode == Mode::kFirst ? 0 : n) = 1.0;
    return out;
  }
  // ((a_H^dag + c a_V^dag)/sqrt 2)^n / sqrt(n!) |vac> = 2^{-n/2} sum_j sqrt(C(n,j)) c^j |n-j, j>
  const Complex c = mode == Mode::kFirst ? mode_coefficient(alpha, h) : -mode_coefficient(alpha, h);
  const double prefactor = std::pow(2.0, -0.5 * n);
  for (int j = 0; j <= n; ++j) out(j) = prefactor * std::sqrt(binomial(n, j)) * ipow(c, j);
  return out;
}

CMatrix SubspaceDecomposition::p_matrix() const {
  return columns(p_basis, static_cast<Eigen::Index>(space_dim()));
}

CMatrix SubspaceDecomposition::p_perp_matrix() const {
  return columns(p_perp_basis, static_cast<Eigen::Index>(space_dim()));
}

double c_constant(int n, int g) { return std::sqrt(std::pow(2.0, n - g) - 1.0); }

std::vector<CVector> odd_p_basis(int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("odd_p_basis: n must be odd and >= 3");
  const CVector z_first = extremal_state(Basis::kZ, n, Mode::kFirst);
  const CVector z_second = extremal_state(Basis::kZ, n, Mode::kSecond);
  const CVector x_first = extremal_state(Basis::kX, n, Mode::kFirst);
  const CVector x_second = extremal_state(Basis::kX, n, Mode::kSecond);
  const double c1 = c_constant(n, 1);
  const double weight = std::sqrt(std::pow(2.0, n - 2));
  CVector phi3 = (weight * (x_first + x_second) - z_first) / c1;
  CVector phi4 = (weight * (x_first - x_second) - z_second) / c1;
  return {z_first, z_second, std::move(phi3), std::move(phi4)};
}

SubspaceDecomposition p_subspace(int n, const std::vector<Basis>& bases, Handedness h) {
  if (n < 1) throw std::invalid_argument("p_subspace: n must be >= 1");
  if (bases.empty()) throw std::invalid_argument("p_subspace: no bases given");

  SubspaceDecomposition out;
  out.n = n;
  if (n >= 3 && n % 2 == 1 && is_bb84_bases(bases)) {
    out.p_basis = odd_p_basis(n);
    out.closed_form = true;
  } else {
    std::vector<Basis> ordered = bases;
    std::stable_sort(ordered.begin(), ordered.end());  // z, x, y
    std::vector<CVector> spanning;
    for (Basis alpha : ordered) {
      spanning.push_back(extremal_state(alpha, n, Mode::kFirst, h));
      spanning.push_back(extremal_state(alpha, n, Mode::kSecond, h));
    }
    out.p_basis = gram_schmidt(spanning, kRankTol);
  }

  std::vector<CVector> completion = out.p_basis;
  for (int j = 0; j <= n; ++j) completion.push_back(CVector::Unit(n + 1, j));
  std::vector<CVector> full = gram_schmidt(completion, kRankTol);
  out.p_perp_basis.assign(full.begin() + static_cast<std::ptrdiff_t>(out.p_basis.size()), full.end());
  return out;
}

ComplexOperator restrict_operator(const ComplexOperator& op, const std::vector<CVector>& basis) {
  const auto d = static_cast<Eigen::Index>(op.dim());
  for (const CVector& v : basis) {
    if (v.size() != d) throw DimensionError("restrict_operator: basis vector length mismatch");
  }
  const CMatrix v = columns(basis, d);
  return ComplexOperator(CMatrix(v.adjoint() * op.matrix() * v));
}

}  // namespace squash
