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

#include <vector>

#include "eventum/minkowski.hpp"

namespace eventum {

// Coefficient table of a quantum stochastic differential. Rows run over the
// lower index {-, 1..n}, columns over the upper index {1..n, +}:
//   coef(0, n)   dt coefficient
//   coef(0, k)   annihilation dA^k   (k < n)
//   coef(i+1, k) counting dN^k_i
//   coef(i+1, n) creation dA*_i
class ItoElement {
 public:
  ItoElement() = default;
  ItoElement(int noise_dim, int system_dim);

  int noise_dim() const { return noise_dim_; }
  int system_dim() const { return system_dim_; }

  const cmat& coef(int lower, int upper) const;
  cmat& coef(int lower, int upper);

  const cmat& dt() const { return coef(0, noise_dim_); }
  // Row D^-_o as a d x nd matrix.
  cmat annihilation_row() const;

  ItoElement operator+(const ItoElement& rhs) const;
  ItoElement operator-(const ItoElement& rhs) const;
  ItoElement operator*(cplx s) const;
  double distance(const ItoElement& rhs) const;

  // Basis differentials with identity system coefficient.
  static ItoElement basis_dt(int noise_dim, int system_dim);
  static ItoElement basis_annihilation(int k, int noise_dim, int system_dim);
  static ItoElement basis_counting(int k, int i, int noise_dim, int system_dim);
  static ItoElement basis_creation(int i, int noise_dim, int system_dim);

 private:
  int noise_dim_ = 0;
  int system_dim_ = 1;
  std::vector<cmat> table_;
};

void require_same_shape(const ItoElement& a, const ItoElement& b);

ItoElement ito_product(const ItoElement& a, const ItoElement& b);
BlockOperator represent(const ItoElement& a);
// Inverse of represent on increments; throws if the first column or last row
// of the operator is nonzero.
ItoElement from_increment(const BlockOperator& increment);
ItoElement star(const ItoElement& a);

// Coefficient of dt, equal to xi* pi(a) xi.
cmat pseudo_state(const ItoElement& a);

// Element of the unitalized monoid: unit_weight * 1 + increment.
struct UnitalElement {
  cplx unit_weight = 1.0;
  ItoElement increment;
};

UnitalElement unital_product(const UnitalElement& f, const UnitalElement& g);
UnitalElement unital_star(const UnitalElement& f);
// l extended with l(1) = 0.
cmat pseudo_state(const UnitalElement& f);

struct PseudoStateProduct {
  cmat direct;    // l evaluated on the monoid product (1+a)(1+b)*
  cmat formula;   // l(a) + k(a) k(b)^* + l(b)^*
};

PseudoStateProduct pseudo_state_product(const ItoElement& f, const ItoElement& g);

// Re(f_- conj(f_+)) >= 0 for a Minkowski column (f_-, f_o, f_+).
bool is_conditionally_positive(const cvec& minkowski_column, double tol = 0.0);

}  // namespace eventum
