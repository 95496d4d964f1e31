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

#include "eventum/ito.hpp"

namespace eventum {

ItoElement::ItoElement(int noise_dim, int system_dim)
    : noise_dim_(noise_dim), system_dim_(system_dim) {
  if (noise_dim < 0 || system_dim < 1) throw DimensionError("ItoElement: invalid dimensions");
  const int w = noise_dim + 1;
  table_.assign(static_cast<size_t>(w * w), cmat::Zero(system_dim, system_dim));
}

const cmat& ItoElement::coef(int lower, int upper) const {
  return table_.at(static_cast<size_t>(lower * (noise_dim_ + 1) + upper));
}

cmat& ItoElement::coef(int lower, int upper) {
  return table_.at(static_cast<size_t>(lower * (noise_dim_ + 1) + upper));
}

cmat ItoElement::annihilation_row() const {
  const int d = system_dim_;
  cmat row(d, noise_dim_ * d);
  for (int k = 0; k < noise_dim_; ++k) row.block(0, k * d, d, d) = coef(0, k);
  return row;
}

void require_same_shape(const ItoElement& a, const ItoElement& b) {
  if (a.noise_dim() != b.noise_dim() || a.system_dim() != b.system_dim())
    throw DimensionError("Ito elements have different shapes");
}

ItoElement ItoElement::operator+(const ItoElement& rhs) const {
  require_same_shape(*this, rhs);
  ItoElement out = *this;
  for (size_t i = 0; i < table_.size(); ++i) out.table_[i] += rhs.table_[i];
  return out;
}

ItoElement ItoElement::operator-(const ItoElement& rhs) const {
  require_same_shape(*this, rhs);
  ItoElement out = *this;
  for (size_t i = 0; i < table_.size(); ++i) out.table_[i] -= rhs.table_[i];
  return out;
}

ItoElement ItoElement::operator*(cplx s) const {
  ItoElement out = *this;
  for (auto& m : out.table_) m *= s;
  return out;
}

double ItoElement::distance(const ItoElement& rhs) const {
  require_same_shape(*this, rhs);
  double acc = 0.0;
  for (size_t i = 0; i < table_.size(); ++i) acc += (table_[i] - rhs.table_[i]).squaredNorm();
  return std::sqrt(acc);
}

ItoElement ItoElement::basis_dt(int noise_dim, int system_dim) {
  ItoElement a(noise_dim, system_dim);
  a.coef(0, noise_dim).setIdentity();
  return a;
}

ItoElement ItoElement::basis_annihilation(int k, int noise_dim, int system_dim) {
  if (k < 0 || k >= noise_dim) throw DimensionError("basis_annihilation: index out of range");
  ItoElement a(noise_dim, system_dim);
  a.coef(0, k).setIdentity();
  return a;
}

ItoElement ItoElement::basis_counting(int k, int i, int noise_dim, int system_dim) {
  if (k < 0 || k >= noise_dim || i < 0 || i >= noise_dim)
    throw DimensionError("basis_counting: index out of range");
  ItoElement a(noise_dim, system_dim);
  a.coef(i + 1, k).setIdentity();
  return a;
}

ItoElement ItoElement::basis_creation(int i, int noise_dim, int system_dim) {
  if (i < 0 || i >= noise_dim) throw DimensionError("basis_creation: index out of range");
  ItoElement a(noise_dim, system_dim);
  a.coef(i + 1, noise_dim).setIdentity();
  return a;
}

ItoElement ito_product(const ItoElement& a, const ItoElement& b) {
  require_same_shape(a, b);
  const int n = a.noise_dim();
  ItoElement out(n, a.system_dim());
  // Only noise indices are contracted: dLambda^lower_alpha dLambda^alpha_upper.
  for (int lower = 0; lower <= n; ++lower)
    for (int upper = 0; upper <= n; ++upper)
      for (int alpha = 0; alpha < n; ++alpha)
        out.coef(lower, upper).noalias() += a.coef(lower, alpha) * b.coef(alpha + 1, upper);
  return out;
}

BlockOperator represent(const ItoElement& a) {
  const int n = a.noise_dim();
  BlockOperator out(n, a.system_dim());
  for (int lower = 0; lower <= n; ++lower)
    for (int upper = 0; upper <= n; ++upper) out.set_block(lower, upper + 1, a.coef(lower, upper));
  return out;
}

ItoElement from_increment(const BlockOperator& increment) {
  if (!increment.is_upper_triangular())
    throw DimensionError("from_increment: operator is not upper triangular");
  const int n = increment.noise_dim();
  const int e = n + 2;
  if (increment.block(0, 0).norm() > 0 || increment.block(e - 1, e - 1).norm() > 0)
    throw DimensionError("from_increment: nonzero diagonal corner");
  ItoElement out(n, increment.system_dim());
  for (int lower = 0; lower <= n; ++lower)
    for (int upper = 0; upper <= n; ++upper) out.coef(lower, upper) = increment.block(lower, upper + 1);
  return out;
}

ItoElement star(const ItoElement& a) {
  const int n = a.noise_dim();
  ItoElement out(n, a.system_dim());
  // Lower "-" pairs with upper "+"; noise indices map to themselves.
  auto lower_of_upper = [n](int upper) { return upper == n ? 0 : upper + 1; };
  auto upper_of_lower = [n](int lower) { return lower == 0 ? n : lower - 1; };
  for (int lower = 0; lower <= n; ++lower)
    for (int upper = 0; upper <= n; ++upper)
      out.coef(lower, upper) = a.coef(lower_of_upper(upper), upper_of_lower(lower)).adjoint();
  return out;
}

cmat pseudo_state(const ItoElement& a) { return a.dt(); }

UnitalElement unital_product(const UnitalElement& f, const UnitalElement& g) {
  UnitalElement out;
  out.unit_weight = f.unit_weight * g.unit_weight;
  out.increment = f.increment * g.unit_weight + g.increment * f.unit_weight +
                  ito_product(f.increment, g.increment);
  return out;
}

UnitalElement unital_star(const UnitalElement& f) {
  return UnitalElement{std::conj(f.unit_weight), star(f.increment)};
}

cmat pseudo_state(const UnitalElement& f) { return pseudo_state(f.increment); }

PseudoStateProduct pseudo_state_product(const ItoElement& f, const ItoElement& g) {
  UnitalElement uf{1.0, f};
  UnitalElement ug{1.0, g};
  PseudoStateProduct out;
  out.direct = pseudo_state(unital_product(uf, unital_star(ug)));
  cmat kf = f.annihilation_row();
  cmat kg = g.annihilation_row();
  out.formula = pseudo_state(f) + kf * kg.adjoint() + pseudo_state(g).adjoint();
  return out;
}

bool is_conditionally_positive(const cvec& minkowski_column, double tol) {
  if (minkowski_column.size() < 2) throw DimensionError("is_conditionally_positive: need at least 2 slots");
  const cplx f_minus = minkowski_column(0);
  const cplx f_plus = minkowski_column(minkowski_column.size() - 1);
  return (f_minus * std::conj(f_plus)).real() >= -tol;
}

}  // namespace eventum
