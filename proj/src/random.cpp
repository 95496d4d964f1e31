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


#include "eventum/random.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace eventum {

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
  // Box-Muller; the second variate is discarded to keep the stream simple.
  const double u = 1.0 - uniform01(rng);
  const double v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

cmat random_matrix(int rows, int cols, Rng& rng) {
  cmat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cplx(standard_normal(rng), standard_normal(rng));
  return m;
}

cvec random_vector(int dim, Rng& rng) { return random_matrix(dim, 1, rng).col(0); }

cvec random_state(int dim, Rng& rng) { return random_vector(dim, rng).normalized(); }

cmat random_hermitian(int dim, Rng& rng) {
  cmat a = random_matrix(dim, dim, rng);
  return 0.5 * (a + a.adjoint());
}

cmat random_unitary(int dim, Rng& rng) {
  Eigen::HouseholderQR<cmat> qr(random_matrix(dim, dim, rng));
  cmat q = qr.householderQ() * cmat::Identity(dim, dim);
  const cmat r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const cplx diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

cmat random_density(int dim, Rng& rng) {
  cmat a = random_matrix(dim, dim, rng);
  cmat rho = a * a.adjoint();
  return rho / rho.trace().real();
}

std::vector<cmat> random_contractions(int count, int dim, Rng& rng, double shrink) {
  std::vector<cmat> ops;
  cmat total = cmat::Zero(dim, dim);
  for (int i = 0; i < count; ++i) {
    ops.push_back(random_matrix(dim, dim, rng));
    total += ops.back().adjoint() * ops.back();
  }
  const double top = operator_norm(total);
  if (top > 0.0)
    for (cmat& e : ops) e *= std::sqrt(shrink / top);
  return ops;
}

std::vector<cmat> random_complete_kraus(int count, int dim, Rng& rng) {
  // First dim columns of a random unitary on C^count (x) C^dim form an isometry.
  const cmat u = random_unitary(count * dim, rng);
  std::vector<cmat> ops;
  for (int i = 0; i < count; ++i) ops.push_back(u.block(i * dim, 0, dim, dim));
  return ops;
}

BlockOperator random_adapted_factor(int noise_dim, int system_dim, Rng& rng, double scale) {
  BlockOperator g = BlockOperator::identity(noise_dim, system_dim);
  const int last = noise_dim + 1;
  for (int r = 0; r <= last; ++r)
    for (int c = 0; c <= last; ++c) {
      const bool corner = (r == 0 && c == 0) || (r == last && c == last);
      if (corner || r == last || c == 0) continue;
      g.set_block(r, c, scale * random_matrix(system_dim, system_dim, rng));
    }
  return g;
}

}  // namespace eventum
