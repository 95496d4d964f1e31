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

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace eventum {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-12;

// Thrown when operand shapes do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an argument lies outside the domain of an operation
// (non-positive intensity, non-Hermitian Hamiltonian, impossible outcome...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown when a chain enumeration would exceed the configured state budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline cmat identity(int dim) { return cmat::Identity(dim, dim); }

inline double frobenius(const cmat& m) { return m.norm(); }

// Largest singular value.
double operator_norm(const cmat& m);

bool is_hermitian(const cmat& m, double tol = kDefaultTol);

// Pauli and ladder matrices in the computational basis {|0>, |1>}.
cmat pauli_x();
cmat pauli_y();
cmat pauli_z();
// sigma_minus = |0><1|, lowering |1> to |0>.
cmat sigma_minus();
cmat sigma_plus();

// Hermitian matrix functions through the eigendecomposition.
cmat hermitian_sqrt(const cmat& m);  // negative eigenvalues are an error beyond -tol
cmat unitary_evolution(const cmat& hamiltonian, double time);  // exp(-i H t)

}  // namespace eventum
