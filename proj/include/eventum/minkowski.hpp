// Copyright 2026 The eventum authors
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

#include "eventum/common.hpp"

namespace eventum {

// External index layout shared by every block object: slot 0 is "-",
// slots 1..n are the noise indices, slot n+1 is "+".
inline int minus_slot() { return 0; }
inline int bullet_slot(int i) { return 1 + i; }
inline int plus_slot(int noise_dim) { return noise_dim + 1; }

// (n+2)x(n+2) real metric with ones at (-,+) and (+,-) and the identity on
// the noise block.
Eigen::MatrixXd minkowski_metric(int noise_dim);

// Unitary change of basis W with W^* eta W = diag(1, I_n, -1). Only used for
// reporting; all internal arithmetic stays in the antidiagonal form.
cmat diagonal_frame(int noise_dim);

// Square matrix of d x d system blocks indexed by the external slots.
class BlockOperator {
 public:
  BlockOperator() = default;
  BlockOperator(int noise_dim, int system_dim);
  BlockOperator(int noise_dim, int system_dim, cmat full);

  static BlockOperator identity(int noise_dim, int system_dim);
  static BlockOperator zero(int noise_dim, int system_dim);

  int noise_dim() const { return noise_dim_; }
  int system_dim() const { return system_dim_; }
  int external_dim() const { return noise_dim_ + 2; }
  int full_dim() const { return (noise_dim_ + 2) * system_dim_; }

  const cmat& matrix() const { return m_; }
  cmat& matrix() { return m_; }

  cmat block(int row, int col) const;
  void set_block(int row, int col, const cmat& value);

  // Zero first column below the corner and zero last row left of the corner.
  bool is_upper_triangular(double tol = 0.0) const;

  BlockOperator operator*(const BlockOperator& rhs) const;
  BlockOperator operator+(const BlockOperator& rhs) const;
  BlockOperator operator-(const BlockOperator& rhs) const;
  BlockOperator operator*(cplx s) const;

 private:
  int noise_dim_ = 0;
  int system_dim_ = 1;
  cmat m_;
};

void require_same_shape(const BlockOperator& a, const BlockOperator& b);

// eta^{-1} X^* eta with the metric lifted to the system space.
BlockOperator pseudo_adjoint(const BlockOperator& x);

// Blockwise conjugate transpose of the system blocks, external layout kept.
BlockOperator blockwise_dagger(const BlockOperator& x);

struct PseudoUnitarityReport {
  bool ok = false;
  double residual = 0.0;           // || G* G - I ||_F
  double noise_block_residual = 0.0;  // || G_oo^dag G_oo - I ||
  double corner_residual = 0.0;       // || K^dag + L^* L + K ||
  double row_residual = 0.0;          // || G^-_o^* + G_oo^dag L ||
};

PseudoUnitarityReport is_pseudo_unitary(const BlockOperator& g, double tol = kDefaultTol);

// The "+" unit column lifted to the system space: (n+2)d x d.
cmat temporal_spin(int noise_dim, int system_dim);
// Its pseudo-adjoint, the row selecting the "-" slot: d x (n+2)d.
cmat temporal_spin_star(int noise_dim, int system_dim);

// pi(dt): identity in the (-,+) corner, zero elsewhere.
BlockOperator time_increment(int noise_dim, int system_dim);

class LorentzBoost {
 public:
  LorentzBoost(double intensity, int noise_dim);

  double intensity() const { return nu_; }
  int noise_dim() const { return noise_dim_; }
  Eigen::VectorXd diagonal() const;
  BlockOperator as_operator(int system_dim) const;

  // boost_nu * boost_mu, represented exactly by the product intensity.
  LorentzBoost compose(const LorentzBoost& other) const;

 private:
  double nu_;
  int noise_dim_;
};

// upsilon* X upsilon. Each block is scaled by one of 1, sqrt(nu), nu or their
// inverses, so the (-,+) corner is multiplied by nu exactly.
BlockOperator conjugate(const LorentzBoost& boost, const BlockOperator& x);

}  // namespace eventum
