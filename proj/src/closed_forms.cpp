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

#include <cmath>

#include "squash/solver.hpp"

namespace squash {

namespace {

void require_odd(int n) {
  if (n < 3 || n % 2 == 0) {
    throw std::invalid_argument("BB84 odd-n closed form needs odd n >= 3, got " + std::to_string(n));
  }
}

}  // namespace

ComplexOperator bb84_odd_family(int n, const std::array<double, 6>& a) {
  require_odd(n);
  const double s = std::pow(2.0, 1 - n);
  const double t = s * c_constant(n, 1);
  const double u = 1.0 - s;
  const auto [a1, a2, a3, a4, a5, a6] = a;

  RMatrix m(8, 8);
  // clang-format off
  m << 1,   0,       0,       a1,      0,       a2,      0,       a3,
       0,   0,       s - a1,  0,       -a2,     0,       t - a3,  0,
       0,   s - a1,  0,       0,       0,       a4,      0,       a5,
       a1,  0,       0,       1,       t - a4,  0,       -a5,     0,
       0,   -a2,     0,       t - a4,  0.5,     0,       0,       a6,
       a2,  0,       a4,      0,       0,       0.5,     u - a6,  0,
       0,   t - a3,  0,       -a5,     0,       u - a6,  0.5,     0,
       a3,  0,       a5,      0,       a6,      0,       0,       0.5;
  // clang-format on
  return ComplexOperator(m.cast<Complex>(), FactorDims{4, 2});
}

std::array<double, 6> bb84_odd_assignment(int n) {
  require_odd(n);
  const double s = std::pow(2.0, 1 - n);
  const double t = s * c_constant(n, 1);
  return {s, 0.0, t, 0.0, 0.0, 0.5 - s};
}

ComplexOperator bb84_odd_closed_form(int n) { return bb84_odd_family(n, bb84_odd_assignment(n)); }

ComplexOperator six_state_choi(int n, Handedness h) {
  if (n < 1) throw std::invalid_argument("six_state_choi: n must be >= 1");
  const Protocol protocol = Protocol::six_state(h);
  const Povm full = build_full_povm(protocol, n);
  const std::size_t dm = full.dim;

  ComplexOperator tau = kron(ComplexOperator::identity(dm), ComplexOperator::identity(2));
  for (Basis alpha : protocol.bases) {
    const ComplexOperator diff = *full.find(OutcomeLabel::bit_outcome(0, alpha)) -
                                 *full.find(OutcomeLabel::bit_outcome(1, alpha));
    const ComplexOperator sigma_t(CMatrix(pauli(alpha, h).matrix().transpose()));
    tau += 3.0 * kron(diff, sigma_t);
  }
  tau *= 0.5;
  tau.set_factor_dims({dm, 2});
  return tau;
}

CVector theta_minus(int n) {
  if (n < 1) throw std::invalid_argument("theta_minus: n must be >= 1");
  CVector out = CVector::Zero(2 * (n + 1));
  const double r = 1.0 / std::sqrt(2.0);
  out(0 * 2 + 1) = r;   // |n,0>_z |1>
  out(n * 2 + 0) = -r;  // |0,n>_z |0>
  return out;
}

double normalized_scale(double internal_value, std::size_t target_dim) {
  return internal_value / static_cast<double>(target_dim);
}

}  // namespace squash
