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
#include <memory>

#include "eventum/chain.hpp"
#include "eventum/dynamics.hpp"
#include "eventum/random.hpp"

using namespace eventum;

namespace {

cvec basis_state(int dim, int k) {
  cvec v = cvec::Zero(dim);
  v(k) = 1.0;
  return v;
}

cmat lindblad_rhs(const cmat& h, const std::vector<cmat>& jumps, const cmat& rho) {
  const cplx i(0.0, 1.0);
  cmat out = -i * (h * rho - rho * h);
  for (const cmat& l : jumps)
    out += l * rho * l.adjoint() - 0.5 * (l.adjoint() * l * rho + rho * l.adjoint() * l);
  return out;
}

}  // namespace

TEST_CASE("generators") {
  const cmat zero = cmat::Zero(2, 2);
  CHECK(frobenius((lindblad_generator(zero, {zero}) - BlockOperator::identity(1, 2)).matrix()) == 0.0);

  const BlockOperator s = schrodinger_generator(pauli_z());
  CHECK(s.noise_dim() == 0);
  CHECK(frobenius(s.block(0, 0) - identity(2)) == 0.0);
  CHECK(frobenius(s.block(0, 1) - cplx(0.0, -1.0) * pauli_z()) == 0.0);
  CHECK(frobenius(s.block(1, 0)) == 0.0);
  CHECK(frobenius(s.block(1, 1) - identity(2)) == 0.0);

  const BlockOperator g = lindblad_generator(zero, {sigma_minus()});
  CHECK(frobenius(g.block(0, 2) + 0.5 * sigma_plus() * sigma_minus()) == 0.0);
  CHECK(frobenius(g.block(1, 2) - sigma_minus()) == 0.0);
  CHECK(is_pseudo_unitary(g).ok);
  CHECK(frobenius(jump_column(g) - sigma_minus()) == 0.0);
  CHECK(isometry_row(g).rows() == 2);
  CHECK(isometry_row(g).cols() == 6);

  CHECK_THROWS_AS(schrodinger_generator(sigma_minus()), DomainError);
  CHECK_THROWS_AS(lindblad_generator(zero, {sigma_minus()}, 2.0 * identity(2)), DomainError);
}

TEST_CASE("chronological products") {
  const Grid grid(1.0, 4);
  std::vector<BlockOperator> per_point = {schrodinger_generator(pauli_x()), schrodinger_generator(pauli_z()),
                                          schrodinger_generator(pauli_x()), schrodinger_generator(pauli_z())};
  CHECK(frobenius(chronological_product(grid, per_point, {}, 0, 4) - identity(2)) == 0.0);
  CHECK(frobenius(chronological_product(grid, per_point, {2, 3}, 0, 2) - identity(8)) == 0.0);
  CHECK(frobenius(chronological_product(grid, per_point, {1}) -
                  apply_slot(identity(4), 2, 2, 1, 0, per_point[1].matrix())) == 0.0);

  // Later points act on the left, each through its own fiber slot.
  const cmat by_hand = apply_slot(apply_slot(identity(8), 2, 2, 2, 0, per_point[0].matrix()), 2, 2, 2, 1,
                                  per_point[1].matrix());
  CHECK(frobenius(chronological_product(grid, per_point, {0, 1}) - by_hand) < 1e-15);
  const cmat wrong = apply_slot(apply_slot(identity(8), 2, 2, 2, 1, per_point[1].matrix()), 2, 2, 2, 0,
                                per_point[0].matrix());
  CHECK(frobenius(by_hand - wrong) > 1.0);  // both factors act on the system
}

TEST_CASE("counting propagation") {
  const Grid grid(1.0, 4);
  const cvec psi = (basis_state(2, 0) + basis_state(2, 1)) / std::sqrt(2.0);
  const ChainVector start = embed(vacuum(grid, 4, 0, psi));
  const ChainVector out = propagate_counting(constant_family(schrodinger_generator(pauli_x()), 4), start, 0.5);

  // Chains above t are untouched.
  CHECK((out.value({2, 3}) - start.value({2, 3})).norm() == 0.0);

  // A single point before t: psi in the future slot, -iH psi in the past slot.
  const cvec v = out.value({1});
  const cvec kick = cplx(0.0, -1.0) * pauli_x() * psi;
  for (int s = 0; s < 2; ++s) {
    CHECK(std::abs(v(s * 2 + 0) - kick(s)) < 1e-15);
    CHECK(std::abs(v(s * 2 + 1) - psi(s)) < 1e-15);
  }

  // d = 1: two points give the ladder 1, -i omega, (-i omega)^2.
  const double omega = 0.7;
  cmat h(1, 1);
  h << omega;
  const ChainVector one = embed(vacuum(grid, 4, 0, basis_state(1, 0)));
  const ChainVector two = propagate_counting(constant_family(schrodinger_generator(h), 4), one, 1.0);
  const cplx a(0.0, -omega);
  const cvec w = two.value({0, 3});
  CHECK(std::abs(w(0) - a * a) < 1e-15);
  CHECK(std::abs(w(1) - a) < 1e-15);
  CHECK(std::abs(w(2) - a) < 1e-15);
  CHECK(std::abs(w(3) - 1.0) < 1e-15);
}

TEST_CASE("projected unitary") {
  const Grid small(1.0, 8);
  CHECK(frobenius(project_unitary(schrodinger_generator(cmat::Zero(2, 2)), small, 1.0, 8) - identity(2)) == 0.0);

  const cmat h = random_hermitian(2, *std::make_unique<Rng>(41));
  const BlockOperator g = schrodinger_generator(h);
  const cmat step = project_unitary(g, small, 1.0, 8, ProjectionPath::kStepMap);
  const cmat enumerated = project_unitary(g, small, 1.0, 8, ProjectionPath::kEnumeration);
  CHECK(frobenius(step - enumerated) < 1e-14);

  cmat w(1, 1);
  w << M_PI;
  std::vector<double> errs;
  for (int n : {64, 128, 256}) {
    const Grid grid(1.0, n);
    errs.push_back(std::abs(project_unitary(schrodinger_generator(w), grid, 1.0, n)(0, 0) + 1.0));
  }
  CHECK(errs[2] < 0.05);
  CHECK(errs[0] / errs[1] == doctest::Approx(2.0).epsilon(0.1));
  CHECK(errs[1] / errs[2] == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("master derivative") {
  const cmat rho = basis_state(2, 0) * basis_state(2, 0).adjoint();
  const cplx i(0.0, 1.0);
  const cmat closed = master_derivative(rho, isometry_row(schrodinger_generator(pauli_x())));
  CHECK(frobenius(closed - i * (rho * pauli_x() - pauli_x() * rho)) < 1e-15);

  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const cmat h = random_hermitian(2, rng);
    const std::vector<cmat> jumps = {random_matrix(2, 2, rng), random_matrix(2, 2, rng)};
    const cmat r = random_density(2, rng);
    const cmat d = master_derivative(r, isometry_row(tilde_involution(lindblad_generator(h, jumps))));
    CHECK(frobenius(d - lindblad_rhs(h, jumps, r)) < 1e-13);
    CHECK(std::abs(d.trace()) < 1e-13);
  }
}

TEST_CASE("tilde involution") {
  const BlockOperator s = schrodinger_generator(pauli_y());
  CHECK(frobenius((tilde_involution(s) - s).matrix()) == 0.0);

  Rng rng(47);
  const cmat h = random_hermitian(2, rng);
  const cmat l = random_matrix(2, 2, rng);
  const BlockOperator g = lindblad_generator(h, {l});
  const BlockOperator t = tilde_involution(g);
  CHECK(frobenius(t.block(0, 0) - identity(2)) == 0.0);
  CHECK(frobenius(t.block(0, 1) - l) < 1e-15);
  CHECK(frobenius(t.block(0, 2) - g.block(0, 2)) < 1e-15);
  CHECK(frobenius(t.block(1, 1) - identity(2)) == 0.0);
  CHECK(frobenius(t.block(1, 2) + l.adjoint()) < 1e-15);
  CHECK(frobenius((tilde_involution(t) - g).matrix()) == 0.0);

  const BlockOperator random(2, 2, random_matrix(8, 8, rng));
  CHECK(frobenius((tilde_involution(tilde_involution(random)) - random).matrix()) == 0.0);
}

TEST_CASE("trace-out") {
  const cmat zero = cmat::Zero(2, 2);
  const cvec up = basis_state(2, 1);
  const Grid grid(1.0, 512);

  const TraceoutResult damping = traceout_lindblad(zero, {sigma_minus()}, up, grid);
  CHECK(std::abs(damping.states.back()(1, 1).real() - std::exp(-1.0)) < 1e-2);
  CHECK(damping.max_trace_error < 1e-10);
  CHECK(damping.times.size() == damping.states.size());

  const TraceoutResult replaced = traceout_lindblad(zero, {sigma_minus()}, up, grid, -1, TraceoutRow::kReplaced);
  CHECK(frobenius(replaced.states.back() - damping.states.back()) < 1e-14);

  // Closed system: first order in h towards the unitary orbit.
  const cvec plus = (basis_state(2, 0) + up) / std::sqrt(2.0);
  std::vector<double> errs;
  for (int n : {128, 256}) {
    const TraceoutResult r = traceout_lindblad(pauli_z(), {}, plus, Grid(1.0, n));
    const cmat u = unitary_evolution(pauli_z(), 1.0);
    errs.push_back(frobenius(r.states.back() - u * plus * plus.adjoint() * u.adjoint()));
  }
  CHECK(errs[1] < 1e-2);
  CHECK(errs[0] / errs[1] == doctest::Approx(2.0).epsilon(0.1));

  // Truncating the chain expansion at nmax = N changes nothing.
  const Grid coarse(1.0, 10);
  const TraceoutResult full = traceout_lindblad(pauli_x(), {sigma_minus()}, up, coarse);
  const TraceoutResult capped = traceout_lindblad(pauli_x(), {sigma_minus()}, up, coarse, 10);
  CHECK(frobenius(full.states.back() - capped.states.back()) < 1e-14);
  double prev = 1e300;
  for (int nmax : {1, 3, 5}) {
    const double gap =
        frobenius(traceout_lindblad(pauli_x(), {sigma_minus()}, up, coarse, nmax).states.back() - full.states.back());
    CHECK(gap < prev);
    prev = gap;
  }

  // Piecewise-constant generators reduce to the constant case.
  const TraceoutResult family =
      traceout_lindblad(constant_family(lindblad_generator(pauli_x(), {sigma_minus()}), 10), up, coarse);
  CHECK(frobenius(family.states.back() - full.states.back()) < 1e-14);
}

TEST_CASE("reference Lindblad integrator") {
  const cmat zero = cmat::Zero(2, 2);
  Rng rng(53);
  const cmat rho = random_density(2, rng);
  CHECK(frobenius(lindblad_reference(zero, {}, rho, 1.0, 100) - rho) == 0.0);

  const cvec up = basis_state(2, 1);
  const cmat damped = lindblad_reference(zero, {sigma_minus()}, up * up.adjoint(), 1.0, 10000);
  CHECK(std::abs(damped(1, 1).real() - std::exp(-1.0)) < 1e-8);

  const double gamma = 0.3;
  const cmat dephased = lindblad_reference(zero, {std::sqrt(gamma) * pauli_z()}, rho, 2.0, 10000);
  CHECK(std::abs(dephased(0, 1) - rho(0, 1) * std::exp(-2.0 * gamma * 2.0)) < 1e-10);
  CHECK(std::abs(dephased(0, 0) - rho(0, 0)) < 1e-12);

  const auto series = lindblad_reference_series(pauli_x(), {sigma_minus()}, rho, {0.0, 0.5, 1.0}, 1000);
  CHECK(series.size() == 3);
  CHECK(frobenius(series[0] - rho) == 0.0);
  for (const cmat& s : series) CHECK(std::abs(s.trace() - 1.0) < 1e-10);

  CHECK_THROWS(lindblad_reference(zero, {}, rho, 1.0, 1));
}

TEST_CASE("boosted dynamics") {
  cmat h(1, 1);
  h << M_PI / 2.0;
  const BoostReport two = boosted_dynamics_check(h, {}, 2.0, 1.0, 4096, 12);
  CHECK(two.increment_residual == 0.0);
  CHECK(std::abs(two.expectation + 1.0) <= two.expectation_bound);
  CHECK(two.ok);

  const BoostReport unit = boosted_dynamics_check(h, {}, 1.0, 1.0, 4096, 12);
  CHECK(std::abs(unit.expectation - std::exp(cplx(0.0, -M_PI / 2.0))) <= unit.expectation_bound);

  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const BoostReport r = boosted_dynamics_check(random_hermitian(2, rng), {random_matrix(2, 2, rng)},
                                                 0.5 + 3.0 * uniform01(rng), 1.0, 8, 2, random_density(2, rng));
    CHECK(r.row_residual < 1e-13);
    CHECK(r.derivative_residual < 1e-13);
  }
}
