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

#include "eventum/minkowski.hpp"

#include <cmath>

namespace eventum {

Eigen::MatrixXd minkowski_metric(int noise_dim) {
  if (noise_dim < 0) throw DimensionError("minkowski_metric: negative noise dimension");
  const int e = noise_dim + 2;
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(e, e);
  eta(0, e - 1) = 1.0;
  eta(e - 1, 0) = 1.0;
  for (int i = 0; i < noise_dim; ++i) eta(1 + i, 1 + i) = 1.0;
  return eta;
}

cmat diagonal_frame(int noise_dim) {
  const int e = noise_dim + 2;
  const double r = 1.0 / std::sqrt(2.0);
  cmat w = cmat::Zero(e, e);
  w(0, 0) = r;
  w(e - 1, 0) = r;
  w(0, e - 1) = r;
  w(e - 1, e - 1) = -r;
  for (int i = 0; i < noise_dim; ++i) w(1 + i, 1 + i) = 1.0;
  return w;
}

BlockOperator::BlockOperator(int noise_dim, int system_dim)
    : noise_dim_(noise_dim), system_dim_(system_dim) {
  if (noise_dim < 0 || system_dim < 1)
    throw DimensionError("BlockOperator: invalid dimensions");
  m_ = cmat::Zero(full_dim(), full_dim());
}

BlockOperator::BlockOperator(int noise_dim, int system_dim, cmat full)
    : noise_dim_(noise_dim), system_dim_(system_dim), m_(std::move(full)) {
  if (noise_dim < 0 || system_dim < 1)
    throw DimensionError("BlockOperator: invalid dimensions");
  if (m_.rows() != full_dim() || m_.cols() != full_dim())
    throw DimensionError("BlockOperator: matrix does not match (n+2)d");
}

BlockOperator BlockOperator::identity(int noise_dim, int system_dim) {
  BlockOperator b(noise_dim, system_dim);
  b.m_.setIdentity();
  return b;
}

BlockOperator BlockOperator::zero(int noise_dim, int system_dim) {
  return BlockOperator(noise_dim, system_dim);
}

cmat BlockOperator::block(int row, int col) const {
  const int d = system_dim_;
  return m_.block(row * d, col * d, d, d);
}

void BlockOperator::set_block(int row, int col, const cmat& value) {
  const int d = system_dim_;
  if (value.rows() != d || value.cols() != d)
    throw DimensionError("BlockOperator::set_block: block is not d x d");
  m_.block(row * d, col * d, d, d) = value;
}

bool BlockOperator::is_upper_triangular(double tol) const {
  const int e = external_dim();
  for (int r = 1; r < e; ++r)
    if (block(r, 0).norm() > tol) return false;
  for (int c = 0; c < e - 1; ++c)
    if (block(e - 1, c).norm() > tol) return false;
  return true;
}

void require_same_shape(const BlockOperator& a, const BlockOperator& b) {
  if (a.noise_dim() != b.noise_dim() || a.system_dim() != b.system_dim())
    throw DimensionError("block operators have different shapes");
}

BlockOperator BlockOperator::operator*(const BlockOperator& rhs) const {
  require_same_shape(*this, rhs);
  return BlockOperator(noise_dim_, system_dim_, m_ * rhs.m_);
}

BlockOperator BlockOperator::operator+(const BlockOperator& rhs) const {
  require_same_shape(*this, rhs);
  return BlockOperator(noise_dim_, system_dim_, m_ + rhs.m_);
}

BlockOperator BlockOperator::operator-(const BlockOperator& rhs) const {
  require_same_shape(*this, rhs);
  return BlockOperator(noise_dim_, system_dim_, m_ - rhs.m_);
}

BlockOperator BlockOperator::operator*(cplx s) const {
  return BlockOperator(noise_dim_, system_dim_, m_ * s);
}

namespace {

// Swap of the "-" and "+" external slots.
int mirror(int slot, int external_dim) {
  if (slot == 0) return external_dim - 1;
  if (slot == external_dim - 1) return 0;
  return slot;
}

}  // namespace

BlockOperator pseudo_adjoint(const BlockOperator& x) {
  const int e = x.external_dim();
  BlockOperator out(x.noise_dim(), x.system_dim());
  for (int a = 0; a < e; ++a)
    for (int b = 0; b < e; ++b)
      out.set_block(a, b, x.block(mirror(b, e), mirror(a, e)).adjoint());
  return out;
}

BlockOperator blockwise_dagger(const BlockOperator& x) {
  const int e = x.external_dim();
  BlockOperator out(x.noise_dim(), x.system_dim());
  for (int a = 0; a < e; ++a)
    for (int b = 0; b < e; ++b) out.set_block(a, b, x.block(a, b).adjoint());
  return out;
}

PseudoUnitarityReport is_pseudo_unitary(const BlockOperator& g, double tol) {
  PseudoUnitarityReport rep;
  const int n = g.noise_dim();
  const int d = g.system_dim();
  const int e = n + 2;
  cmat gram = pseudo_adjoint(g).matrix() * g.matrix();
  rep.residual = (gram - cmat::Identity(gram.rows(), gram.cols())).norm();

  const cmat& m = g.matrix();
  cmat noise_block = m.block(d, d, n * d, n * d);
  cmat column = m.block(d, (e - 1) * d, n * d, d);  // (o,+)
  cmat row = m.block(0, d, d, n * d);                // (-,o)
  cmat corner = m.block(0, (e - 1) * d, d, d);
  if (n > 0) {
    rep.noise_block_residual =
        (noise_block.adjoint() * noise_block - cmat::Identity(n * d, n * d)).norm();
    rep.row_residual = (row.adjoint() + noise_block.adjoint() * column).norm();
    rep.corner_residual = (corner.adjoint() + column.adjoint() * column + corner).norm();
  } else {
    rep.corner_residual = (corner.adjoint() + corner).norm();
  }
  rep.ok = rep.residual <= tol;
  return rep;
}

cmat temporal_spin(int noise_dim, int system_dim) {
  const int e = noise_dim + 2;
  cmat xi = cmat::Zero(e * system_dim, system_dim);
  xi.block((e - 1) * system_dim, 0, system_dim, system_dim).setIdentity();
  return xi;
}

cmat temporal_spin_star(int noise_dim, int system_dim) {
  const int e = noise_dim + 2;
  cmat row = cmat::Zero(system_dim, e * system_dim);
  row.block(0, 0, system_dim, system_dim).setIdentity();
  return row;
}

BlockOperator time_increment(int noise_dim, int system_dim) {
  BlockOperator b(noise_dim, system_dim);
  b.set_block(0, noise_dim + 1, cmat::Identity(system_dim, system_dim));
  return b;
}

LorentzBoost::LorentzBoost(double intensity, int noise_dim)
    : nu_(intensity), noise_dim_(noise_dim) {
  if (!(intensity > 0.0) || !std::isfinite(intensity))
    throw DomainError("LorentzBoost: intensity must be positive");
  if (noise_dim < 0) throw DimensionError("LorentzBoost: negative noise dimension");
}

Eigen::VectorXd LorentzBoost::diagonal() const {
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(noise_dim_ + 2);
  diag(0) = 1.0 / std::sqrt(nu_);
  diag(noise_dim_ + 1) = std::sqrt(nu_);
  return diag;
}

BlockOperator LorentzBoost::as_operator(int system_dim) const {
  BlockOperator b(noise_dim_, system_dim);
  Eigen::VectorXd diag = diagonal();
  for (int a = 0; a < noise_dim_ + 2; ++a)
    b.set_block(a, a, cmat::Identity(system_dim, system_dim) * diag(a));
  return b;
}

LorentzBoost LorentzBoost::compose(const LorentzBoost& other) const {
  if (other.noise_dim_ != noise_dim_) throw DimensionError("LorentzBoost::compose: noise dims differ");
  return LorentzBoost(nu_ * other.nu_, noise_dim_);
}

BlockOperator conjugate(const LorentzBoost& boost, const BlockOperator& x) {
  if (boost.noise_dim() != x.noise_dim())
    throw DimensionError("conjugate: boost and operator noise dims differ");
  const double nu = boost.intensity();
  const double root = std::sqrt(nu);
  const int e = x.external_dim();
  // Row weight of the pseudo-adjoint boost and column weight of the boost,
  // combined into one exact factor per block.
  auto factor = [&](int a, int b) {
    const int ra = (a == 0) ? 1 : (a == e - 1 ? -1 : 0);
    const int cb = (b == 0) ? -1 : (b == e - 1 ? 1 : 0);
    const int power = ra + cb;  // in units of sqrt(nu)
    switch (power) {
      case 2: return nu;
      case 1: return root;
      case 0: return 1.0;
      case -1: return 1.0 / root;
      default: return 1.0 / nu;
    }
  };
  BlockOperator out(x.noise_dim(), x.system_dim());
  for (int a = 0; a < e; ++a)
    for (int b = 0; b < e; ++b) out.set_block(a, b, x.block(a, b) * factor(a, b));
  return out;
}

}  // namespace eventum
