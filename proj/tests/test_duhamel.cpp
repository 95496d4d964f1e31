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

#include <doctest.h>

#include <cmath>

#include "eventum/duhamel.hpp"
#include "eventum/dynamics.hpp"
#include "eventum/random.hpp"

using namespace eventum;

namespace {

cmat step(const DuhamelProblem& p, int pos, const Chain& chain) {
  const cmat k = p.k(pos, chain);
  return cmat::Identity(k.rows(), k.cols()) + k + p.l(pos, chain);
}

DuhamelProblem scalar_problem(cplx k, cplx l) {
  DuhamelProblem p;
  p.grid = Grid(1.0, 6);
  p.fiber = 1;
  p.system_dim = 1;
  p.k = [k](int, const Chain&) { return cmat::Constant(1, 1, k); };
  p.l = [l](int, const Chain&) { return cmat::Constant(1, 1, l); };
  return p;
}

}  // namespace

TEST_CASE("direct solution") {
  const Grid grid(1.0, 8);
  const DuhamelProblem p = random_duhamel_problem(grid, 1, 2, 77);
  const Chain late = {5, 7};
  CHECK(frobenius(direct_solve(p, 0.5, late) - p.t0(late)) == 0.0);

  const Chain single = {2};
  CHECK(frobenius(direct_solve(p, 1.0, single) - step(p, 0, single) * p.t0(single)) < 1e-14);

  const Chain pair = {1, 4};
  CHECK(frobenius(direct_solve(p, 1.0, pair) - step(p, 1, pair) * step(p, 0, pair) * p.t0(pair)) < 1e-13);

  const DuhamelProblem s = scalar_problem(cplx(0.2, -0.1), cplx(-0.05, 0.3));
  const cplx factor = cplx(1.0, 0.0) + cplx(0.2, -0.1) + cplx(-0.05, 0.3);
  CHECK(std::abs(direct_solve(s, 1.0, {0, 2, 5})(0, 0) - std::pow(factor, 3)) < 1e-15);
  CHECK(std::abs(direct_solve(s, 0.5, {0, 2, 5})(0, 0) - std::pow(factor, 2)) < 1e-15);
}

TEST_CASE("single-sum solution") {
  DuhamelProblem homogeneous = random_duhamel_problem(Grid(1.0, 6), 1, 2, 81);
  homogeneous.l = [](int pos, const Chain& chain) {
    long dim = 2;
    for (size_t i = 0; i < chain.size(); ++i) dim *= 3;
    (void)pos;
    return cmat::Zero(dim, dim);
  };
  for (const Chain& c : {Chain{}, Chain{1}, Chain{0, 3, 5}})
    CHECK(frobenius(duhamel_solve(homogeneous, 1.0, c) - direct_solve(homogeneous, 1.0, c)) <
          1e-12 * std::max(1.0, frobenius(direct_solve(homogeneous, 1.0, c))));

  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const DuhamelProblem p = random_duhamel_problem(Grid(1.0, 8), 1, 2, 1000 + seed);
    Rng rng(seed);
    Chain c;
    for (int j = 0; j < 8; ++j)
      if (uniform01(rng) < 0.4 && c.size() < 4) c.push_back(j);
    const cmat direct = direct_solve(p, 1.0, c);
    const double scale = std::max(1.0, frobenius(direct));
    const cmat single = duhamel_solve(p, 1.0, c);
    const cmat multiple = multiple_sum_kernel(p, 1.0, c);
    CHECK(frobenius(single - direct) / scale < 1e-12);
    CHECK(frobenius(multiple - direct) / scale < 1e-12);
    CHECK(frobenius(multiple - single) / scale < 1e-12);
  }
}

TEST_CASE("multiple-sum kernel") {
  const DuhamelProblem p = random_duhamel_problem(Grid(1.0, 4), 0, 1, 3);
  CHECK(frobenius(multiple_sum_kernel(p, 1.0, {}) - p.t0({})) == 0.0);

  // Two points: the four subsets expand (I + K + L)(I + K + L).
  const DuhamelProblem s = scalar_problem(cplx(0.1, 0.2), cplx(0.3, -0.4));
  const cplx y(1.1, 0.2);
  const cplx l(0.3, -0.4);
  const cplx expanded = y * y + l * y + y * l + l * l;
  CHECK(std::abs(multiple_sum_kernel(s, 1.0, {1, 4})(0, 0) - expanded) < 1e-15);

  CHECK_THROWS_AS(multiple_sum_kernel(s, 1.0, {0, 1, 2, 3}, 3), BudgetError);
}

TEST_CASE("projected solution") {
  const Grid grid(1.0, 4);
  const int d = 2;
  const NoiseBasis basis(grid, 4, 1, d);
  Rng rng(89);

  std::vector<BlockOperator> ks;
  for (int j = 0; j < 4; ++j) ks.push_back(random_adapted_factor(1, d, rng) - BlockOperator::identity(1, d));
  const std::vector<BlockOperator> none(4, BlockOperator::zero(1, d));
  std::vector<BlockOperator> y;
  for (const auto& k : ks) y.push_back(BlockOperator::identity(1, d) + k);
  const cmat homogeneous = epsilon_morphism(BlockDiagOperator::product(grid, y), basis);
  CHECK(operator_norm(projected_duhamel(ks, none, basis, 1.0) - homogeneous) < 1e-13);

  // Measurement-perturbed Schrodinger dynamics against the combined generator.
  const cmat h = random_hermitian(d, rng);
  const double nu = 3.0;
  BlockOperator k0 = BlockOperator::zero(1, d);
  k0.set_block(0, 2, cplx(0.0, 1.0) * h);
  const BlockOperator interaction =
      conjugate(LorentzBoost(nu, 1), lindblad_generator(cmat::Zero(d, d), {random_matrix(d, d, rng)}) -
                                         BlockOperator::identity(1, d));
  const cmat sum_form = projected_duhamel(std::vector<BlockOperator>(4, k0 * cplx(-1.0)),
                                          std::vector<BlockOperator>(4, interaction), basis, 1.0);
  const std::vector<BlockOperator> combined(4, BlockOperator::identity(1, d) - k0 + interaction);
  const cmat direct = epsilon_morphism(BlockDiagOperator::product(grid, combined), basis);
  for (int s = 0; s < d; ++s) {
    cvec e = cvec::Zero(d);
    e(s) = 1.0;
    const cvec start = basis.flatten(vacuum(grid, 4, 1, e));
    CHECK((sum_form * start - direct * start).norm() < 1e-10);
  }

  BlockOperator lower = BlockOperator::zero(1, d);
  lower.set_block(2, 0, identity(d));
  CHECK_THROWS_AS(projected_duhamel(std::vector<BlockOperator>(4, lower), none, basis, 1.0), DomainError);
}
