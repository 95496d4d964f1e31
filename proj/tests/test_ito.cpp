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

#include "eventum/ito.hpp"
#include "eventum/random.hpp"
#include "oracle.hpp"

using namespace eventum;

TEST_CASE("Hudson-Parthasarathy table") {
  const auto basis = oracle::hp_basis(1);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK(ito_product(basis[a], basis[b]).distance(oracle::hp_product(a, b, 1)) == 0.0);
    }
}

TEST_CASE("annihilation times creation is the time differential in every channel") {
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const ItoElement p = ito_product(ItoElement::basis_annihilation(i, 3, 2), ItoElement::basis_creation(k, 3, 2));
      const ItoElement want = i == k ? ItoElement::basis_dt(3, 2) : ItoElement(3, 2);
      CHECK(p.distance(want) == 0.0);
    }
}

TEST_CASE("representation") {
  const BlockOperator dt = represent(ItoElement::basis_dt(1, 2));
  CHECK(frobenius(dt.block(0, 2) - identity(2)) == 0.0);
  CHECK(frobenius(dt.matrix()) == doctest::Approx(std::sqrt(2.0)));

  // dN^k_i has the single bullet block |i><k|.
  const BlockOperator n = represent(ItoElement::basis_counting(0, 1, 2, 1));
  CHECK(n.matrix()(2, 1) == cplx(1.0));
  CHECK(n.matrix().cwiseAbs().sum() == 1.0);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ItoElement a = oracle::random_ito(2, 2, rng);
    const ItoElement b = oracle::random_ito(2, 2, rng);
    CHECK(frobenius(represent(a).matrix() * represent(b).matrix() - represent(ito_product(a, b)).matrix()) < 1e-13);
    CHECK(from_increment(represent(a)).distance(a) == 0.0);
  }
}

TEST_CASE("star") {
  const ItoElement dt = ItoElement::basis_dt(2, 1);
  CHECK(star(dt).distance(dt) == 0.0);
  for (int i = 0; i < 2; ++i)
    CHECK(star(ItoElement::basis_annihilation(i, 2, 1)).distance(ItoElement::basis_creation(i, 2, 1)) == 0.0);

  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const ItoElement a = oracle::random_ito(2, 2, rng);
    const ItoElement b = oracle::random_ito(2, 2, rng);
    CHECK(star(star(a)).distance(a) == 0.0);
    CHECK(frobenius(represent(star(a)).matrix() - pseudo_adjoint(represent(a)).matrix()) < 1e-14);
    CHECK(star(ito_product(a, b)).distance(ito_product(star(b), star(a))) < 1e-13);
  }
}

TEST_CASE("vacuum pseudo-state") {
  CHECK(frobenius(pseudo_state(ItoElement::basis_dt(1, 1)) - identity(1)) == 0.0);
  for (int i = 0; i < 2; ++i) {
    CHECK(frobenius(pseudo_state(ItoElement::basis_annihilation(i, 2, 1))) == 0.0);
    CHECK(frobenius(pseudo_state(ItoElement::basis_creation(i, 2, 1))) == 0.0);
    CHECK(frobenius(pseudo_state(ItoElement::basis_counting(i, i, 2, 1))) == 0.0);
  }

  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const PseudoStateProduct p = pseudo_state_product(oracle::random_ito(1, 1, rng), oracle::random_ito(1, 1, rng));
    CHECK(frobenius(p.direct - p.formula) < 1e-14);
  }
}

TEST_CASE("unital monoid") {
  Rng rng(4);
  const UnitalElement f{1.0, oracle::random_ito(1, 2, rng)};
  const UnitalElement g{1.0, oracle::random_ito(1, 2, rng)};
  const UnitalElement fg = unital_product(f, g);
  // (1 + a)(1 + b) = 1 + a + b + ab.
  const ItoElement want = f.increment + g.increment + ito_product(f.increment, g.increment);
  CHECK(fg.unit_weight == cplx(1.0));
  CHECK(fg.increment.distance(want) < 1e-14);
  const UnitalElement s = unital_star(f);
  CHECK(s.increment.distance(star(f.increment)) == 0.0);
}

TEST_CASE("conditional positivity") {
  cvec ok(3);
  ok << 0.0, 1.0, 2.0;
  CHECK(is_conditionally_positive(ok));
  cvec bad(3);
  bad << 1.0, 0.0, -2.0;
  CHECK_FALSE(is_conditionally_positive(bad));
}
