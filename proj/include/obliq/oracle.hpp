// Copyright 2026 The obliq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OBLIQ_ORACLE_HPP
#define OBLIQ_ORACLE_HPP

#include <span>
#include <vector>

#include "obliq/gates.hpp"
#include "obliq/qsim.hpp"

// Reference evaluation of W(w). Only qsim and gates primitives are used here,
// never protocol party code.
namespace obliq::oracle {

/// Applies rounds 1..m in order to `qubits` (which must be all of `reg`).
void apply_program(const Program& w, StateRegister& reg, std::span<const QubitHandle> qubits);

/// W(w)|psi> as amplitudes, first qubit most significant.
std::vector<Complex> evolve(const Program& w, std::span<const Complex> psi);

/// Reduced state of the first n_circ qubits of W(w)|psi>.
DensityMatrix ideal_output(const Program& w, std::span<const Complex> psi, std::size_t n_circ);

/// Exact distribution of the first n_circ computational-basis bits of
/// W(w)|input>; index bit order has qubit 1 as the MSB.
std::vector<double> ideal_outcome_distribution(const Program& w, std::size_t n_circ);
std::vector<double> ideal_outcome_distribution(const Program& w, std::span<const Complex> psi, std::size_t n_circ);

/// |b_1 ... b_n> as amplitudes.
std::vector<Complex> basis_state(std::span<const int> bits);

double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace obliq::oracle

#endif  // OBLIQ_ORACLE_HPP
