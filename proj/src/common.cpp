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

#include "eventum/common.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace eventum {

double operator_norm(const cmat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<cmat> svd(m);
  return svd.singularValues()(0);
}

bool is_hermitian(const cmat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol;
}

cmat pauli_x() {
  cmat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

cmat pauli_y() {
  cmat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

cmat pauli_z() {
  cmat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

cmat sigma_minus() {
  cmat m = cmat::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

cmat sigma_plus() { return sigma_minus().adjoint(); }

cmat hermitian_sqrt(const cmat& m) {
  if (!is_hermitian(m, 1e-10 * std::max(1.0, m.norm())))
    throw DomainError("hermitian_sqrt: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (m + m.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-10) throw DomainError("hermitian_sqrt: negative eigenvalue");
    ev(i) = ev(i) > 0 ? std::sqrt(ev(i)) : 0.0;
  }
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

cmat unitary_evolution(const cmat& hamiltonian, double time) {
  if (!is_hermitian(hamiltonian, 1e-12 * std::max(1.0, hamiltonian.norm())))
    throw DomainError("unitary_evolution: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (hamiltonian + hamiltonian.adjoint()));
  const cplx minus_i(0.0, -1.0);
  cvec phases = (minus_i * time * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace eventum
