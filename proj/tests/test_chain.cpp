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

#include "eventum/chain.hpp"
#include "eventum/random.hpp"
#include "oracle.hpp"

using namespace eventum;

namespace {

cvec scalar(cplx x) {
  cvec v(1);
  v << x;
  return v;
}

cvec kron(const cvec& a, const cvec& b) {
  cvec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Binomial sum_{m <= mmax} C(n, m) x^m.
double truncated_binomial(int n, double x, int mmax) {
  double sum = 0.0;
  double c = 1.0;
  for (int m = 0; m <= std::min(n, mmax); ++m) {
    sum += c * std::pow(x, m);
    c = c * (n - m) / (m + 1);
  }
  return sum;
}

BlockOperator keep_blocks(BlockOperator f, bool creation, bool annihilation, bool time) {
  const int n = f.noise_dim();
  const cmat zero = cmat::Zero(f.system_dim(), f.system_dim());
  for (int i = 1; i <= n; ++i) {
    if (!annihilation) f.set_block(0, i, zero);
    if (!creation) f.set_block(i, n + 1, zero);
  }
  if (!time) f.set_block(0, n + 1, zero);
  return f;
}

std::vector<BlockOperator> factors(int count, Rng& rng, bool creation, bool annihilation, bool time) {
  std::vector<BlockOperator> out;
  for (int j = 0; j < count; ++j)
    out.push_back(keep_blocks(random_adapted_factor(1, 1, rng), creation, annihilation, time));
  return out;
}

}  // namespace

TEST_CASE("grid and chain enumeration") {
  const Grid grid(1.0, 8);
  CHECK(grid.h() == 0.125);
  CHECK(grid.point(0) == 0.0625);
  CHECK(grid.count_below(0.5) == 4);
  CHECK(grid.count_below(1.0) == 8);
  CHECK(grid.count_below(0.0) == 0);

  const auto chains = enumerate_chains(0, 5, 2);
  CHECK(chains.size() == 16);
  CHECK(chain_count(5, 2) == 16.0);
  CHECK(chains.front().empty());
  CHECK(is_valid_chain({1, 3}, 5));
  CHECK_FALSE(is_valid_chain({3, 1}, 5));
  CHECK_FALSE(is_valid_chain({1, 5}, 5));
  CHECK_THROWS_AS(enumerate_chains(0, 40, 10, 1000), BudgetError);

  CHECK(exponential_tail(1.0, 0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK(exponential_tail(0.5, 3) == doctest::Approx(std::exp(0.5) - 1.0 - 0.5 - 0.125 - 0.5 * 0.5 * 0.5 / 6.0));
}

TEST_CASE("chain norms") {
  const Grid grid(1.0, 10);
  const ChainVector vac = vacuum(grid, 4, 1, scalar(1.0));
  CHECK(chain_norm_squared(vac) == 1.0);
  CHECK(chain_norm_squared(ChainVector(grid, 4, 1, 1)) == 0.0);

  // Constant k with |k|^2 = 0.5: the grid sum is sum_{m <= nmax} C(N, m) (h/2)^m exactly.
  const int n = 10;
  const int nmax = 6;
  const ChainVector e = exponential_vector(grid, nmax, std::vector<cvec>(n, scalar(std::sqrt(0.5))), scalar(1.0));
  CHECK(chain_norm_squared(e) == doctest::Approx(truncated_binomial(n, 0.05, nmax)).epsilon(1e-14));
  // It tends to exp(0.5) from below as the grid is refined, at first order in h.
  double prev = 1.0;
  for (int points : {10, 20, 40}) {
    const double gap = std::exp(0.5) - truncated_binomial(points, 0.5 / points, points);
    CHECK(gap > 0.0);
    CHECK(gap < prev);
    CHECK(gap * points == doctest::Approx(0.25 * 0.5 * std::exp(0.5)).epsilon(0.05));
    prev = gap;
  }
}

TEST_CASE("exponential vectors") {
  const Grid grid(1.0, 6);
  Rng rng(17);
  std::vector<cvec> f;
  std::vector<cvec> g;
  std::vector<double> products;
  for (int j = 0; j < 6; ++j) {
    f.push_back(scalar(uniform01(rng)));
    g.push_back(scalar(uniform01(rng)));
    products.push_back(grid.h() * (f.back()(0) * g.back()(0)).real());
  }
  const ChainVector ef = exponential_vector(grid, 4, f, scalar(1.0));
  const ChainVector eg = exponential_vector(grid, 4, g, scalar(1.0));
  double expected = 0.0;
  for (double e : oracle::elementary_symmetric(products, 4)) expected += e;
  CHECK(chain_inner(ef, eg).real() == doctest::Approx(expected).epsilon(1e-14));

  CHECK(chain_distance(exponential_vector(grid, 4, std::vector<cvec>(6, scalar(0.0)), scalar(1.0)),
                       vacuum(grid, 4, 1, scalar(1.0))) == 0.0);
  CHECK(ef.value({3})(0) == f[3](0));
  CHECK(ef.value({1, 4})(0) == f[1](0) * f[4](0));
}

TEST_CASE("point derivative and Skorokhod adjoint") {
  const Grid grid(1.0, 5);
  const ChainVector vac = vacuum(grid, 3, 2, scalar(1.0));
  for (const auto& [key, v] : point_derivative(vac).values) CHECK(v.norm() == 0.0);

  Rng rng(23);
  std::vector<cvec> k;
  for (int j = 0; j < 5; ++j) k.push_back(random_vector(2, rng));
  const ChainVector e = exponential_vector(grid, 3, k, scalar(1.0));
  const PointFamily de = point_derivative(e);
  for (const auto& [key, v] : de.values) {
    const auto& [t, chain] = key;
    CHECK((v - kron(k[t], e.value(chain))).norm() < 1e-14 * std::max(1.0, v.norm()));
  }

  // The number operator counts points.
  const ChainVector chi = oracle::random_chain_vector(grid, 3, 2, 1, rng);
  const ChainVector n_chi = skorokhod_adjoint(point_derivative(chi));
  for (const auto& [chain, v] : chi.values())
    CHECK((n_chi.value(chain) - static_cast<double>(chain.size()) * v).norm() < 1e-14);

  // Creation on the vacuum.
  PointFamily zeta;
  zeta.grid = grid;
  zeta.nmax = 0;
  zeta.fiber = 2;
  zeta.system_dim = 1;
  for (int t = 0; t < 5; ++t) zeta.values[{t, {}}] = k[t];
  const ChainVector created = skorokhod_adjoint(zeta);
  for (int t = 0; t < 5; ++t) CHECK((created.value({t}) - k[t]).norm() == 0.0);
  CHECK(created.value({}).norm() == 0.0);

  for (int trial = 0; trial < 5; ++trial) {
    const ChainVector x = oracle::random_chain_vector(grid, 3, 2, 2, rng);
    const PointFamily z = oracle::random_family(grid, 2, 2, 2, rng);
    const cplx lhs = chain_inner(skorokhod_adjoint(z), x);
    const cplx rhs = family_inner(z, point_derivative(x));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("single integral") {
  const Grid grid(1.0, 8);
  const ChainVector vac = vacuum(grid, 2, 1, scalar(1.0));
  const ItoField dt = [](int) { return ItoElement::basis_dt(1, 1); };
  CHECK(qs_single_integral(dt, 1.0, vac).value({})(0) == cplx(1.0));
  CHECK(qs_single_integral(dt, 0.5, vac).value({})(0) == cplx(0.5));

  const ItoField zero = [](int) { return ItoElement(1, 1); };
  CHECK(chain_norm_squared(qs_single_integral(zero, 1.0, vac)) == 0.0);

  const ItoField creation = [](int j) { return ItoElement::basis_creation(0, 1, 1) * cplx(j + 1.0); };
  const ChainVector c = qs_single_integral(creation, 0.5, vac);
  for (int j = 0; j < 8; ++j) {
    cvec want = cvec::Zero(1);
    if (j < 4) want(0) = j + 1.0;
    CHECK((c.value({j}) - want).norm() == 0.0);
  }
}

TEST_CASE("embedding and projection") {
  const Grid grid(1.0, 5);
  Rng rng(29);
  for (int trial = 0; trial < 3; ++trial) {
    const ChainVector psi = oracle::random_chain_vector(grid, 3, 2, 2, rng);
    CHECK(chain_distance(project(embed(psi)), psi) == 0.0);
  }

  const ChainVector big = oracle::random_chain_vector(grid, 5, 3, 1, rng, true);
  const ChainVector once = embed(project(big));
  CHECK(chain_distance(embed(project(once)), once) < 1e-14);

  // F* of the vacuum is xi on every point.
  const ChainVector phi = embed(vacuum(grid, 5, 1, scalar(1.0)));
  CHECK(phi.values().size() == 32);
  for (const auto& [chain, v] : phi.values()) {
    long plus = 0;
    for (size_t i = 0; i < chain.size(); ++i) plus = plus * 3 + 2;
    CHECK(v(plus) == cplx(1.0));
    CHECK(v.norm() == 1.0);
  }
}

TEST_CASE("Weyl operators") {
  CHECK(frobenius((weyl_factor(cvec::Zero(2), 1) - BlockOperator::identity(2, 1)).matrix()) == 0.0);
  Rng rng(31);
  CHECK(is_pseudo_unitary(weyl_factor(random_vector(2, rng), 2)).ok);

  const Grid grid(1.0, 6);
  const int nmax = 3;
  const NoiseBasis basis(grid, nmax, 1, 1);
  const double g = std::sqrt(0.3);
  const cmat w = epsilon_morphism(weyl_product(grid, std::vector<cvec>(6, scalar(g)), 1), basis);
  cvec vac = cvec::Zero(basis.dim());
  vac(basis.offset({})) = 1.0;
  const ChainVector out = basis.unflatten(w * vac);
  // Grid-exact coherent vector: g^|chain| times the truncated product of (1 - h g^2 / 2).
  for (const Chain& chain : basis.chains()) {
    const int m = static_cast<int>(chain.size());
    const double want = std::pow(g, m) * truncated_binomial(6 - m, -grid.h() * 0.15, nmax - m);
    CHECK(std::abs(out.value(chain)(0) - want) < 1e-14);
  }
}

TEST_CASE("epsilon morphism") {
  const Grid grid(1.0, 5);
  const NoiseBasis basis(grid, 3, 1, 1);
  const cmat id = cmat::Identity(basis.dim(), basis.dim());
  CHECK(operator_norm(epsilon_morphism(BlockDiagOperator::identity(grid, 3, 1, true), basis) - id) == 0.0);

  Rng rng(37);
  std::vector<BlockOperator> diag;
  for (int j = 0; j < 5; ++j) diag.push_back(keep_blocks(random_adapted_factor(1, 1, rng), false, false, false));
  for (auto& f : diag) f.set_block(1, 1, identity(1));
  CHECK(operator_norm(epsilon_morphism(BlockDiagOperator::product(grid, diag), basis) - id) < 1e-15);

  for (int trial = 0; trial < 5; ++trial) {
    const auto x = BlockDiagOperator::product(grid, factors(5, rng, true, true, true));
    CHECK(operator_norm(epsilon_morphism(star(x), basis) - basis.adjoint(epsilon_morphism(x, basis))) < 1e-13);

    // Exact multiplicativity when the left factor cannot create or the right
    // factor cannot annihilate: no time-ordering correction arises.
    const auto annihilating = BlockDiagOperator::product(grid, factors(5, rng, false, true, false));
    const auto creating = BlockDiagOperator::product(grid, factors(5, rng, true, false, false));
    const auto general = BlockDiagOperator::product(grid, factors(5, rng, true, true, true));
    const cmat ea = epsilon_morphism(annihilating, basis);
    const cmat ec = epsilon_morphism(creating, basis);
    const cmat eg = epsilon_morphism(general, basis);
    CHECK(operator_norm(epsilon_morphism(compose(annihilating, general), basis) - ea * eg) < 1e-13);
    CHECK(operator_norm(epsilon_morphism(compose(general, creating), basis) - eg * ec) < 1e-13);
    CHECK(operator_norm(epsilon_morphism(compose(star(creating), general), basis) - basis.adjoint(ec) * eg) <
          1e-13);
  }
}

TEST_CASE("Poisson expectations") {
  // Generic operators are summed chain by chain, so keep this grid small.
  const Grid grid(1.0, 16);
  std::vector<cvec> phi(16, cvec::Constant(3, 1.0 / std::sqrt(2.0)));
  for (auto& p : phi) p(1) = 0.0;
  const auto id = BlockDiagOperator::identity(grid, 3, 1, true);
  const PoissonExpectation one = poisson_expectation(id, 2.0, 1.0, phi, 6);
  CHECK(std::abs(one.value(0, 0) - 1.0) <= one.bound());

  const BlockDiagOperator zero(grid, 3, 1, true, [](const Chain& c) {
    const long dim = oracle::ipow(3, static_cast<int>(c.size()));
    return cmat::Zero(dim, dim);
  });
  const PoissonExpectation none = poisson_expectation(zero, 2.0, 1.0, phi, 4);
  CHECK(std::abs(none.value(0, 0)) == 0.0);

  // Boosted Schrodinger equation: G = I - i omega dt at intensity 2 nu.
  const double nu = 2.0;
  const double omega = M_PI / 2.0;
  const Grid fine(1.0, 4096);
  std::vector<BlockOperator> gs(4096, BlockOperator::identity(1, 1));
  for (auto& g : gs) g.set_block(0, 2, cmat::Constant(1, 1, cplx(0.0, -omega)));
  std::vector<cvec> half(4096, cvec::Zero(3));
  for (auto& p : half) {
    p(0) = 1.0 / std::sqrt(2.0);
    p(2) = 1.0 / std::sqrt(2.0);
  }
  const PoissonExpectation e = poisson_expectation(BlockDiagOperator::product(fine, gs), 2.0 * nu, 1.0, half, 12);
  CHECK(std::abs(e.value(0, 0) + 1.0) <= e.bound());
  CHECK(e.bound() < 5e-2);
}
