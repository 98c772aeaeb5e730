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

#include "obliq/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace obliq::oracle {

void apply_program(const Program& w, StateRegister& reg, std::span<const QubitHandle> qubits) {
    w.validate();
    if (qubits.size() != w.n || reg.live_count() != w.n) {
        throw std::invalid_argument("apply_program: register must hold exactly the " + std::to_string(w.n) +
                                    " program qubits");
    }
    for (const auto& round : w.rounds) round_unitary_apply(reg, qubits, round);
}

std::vector<Complex> evolve(const Program& w, std::span<const Complex> psi) {
    if (psi.size() != (std::size_t{1} << w.n)) throw std::invalid_argument("evolve: state size does not match n");
    StateRegister reg(w.n);
    const auto q = reg.alloc_state(psi);
    apply_program(w, reg, q);
    return reg.amplitudes_in(q);
}

DensityMatrix ideal_output(const Program& w, std::span<const Complex> psi, std::size_t n_circ) {
    if (n_circ < 1 || n_circ > w.n) {
        throw std::invalid_argument("ideal_output: n_circ must be in 1.." + std::to_string(w.n));
    }
    StateRegister reg(w.n);
    const auto q = reg.alloc_state(psi);
    apply_program(w, reg, q);
    return reg.density_on(std::span(q).first(n_circ));
}

std::vector<double> ideal_outcome_distribution(const Program& w, std::span<const Complex> psi, std::size_t n_circ) {
    if (n_circ < 1 || n_circ > w.n) {
        throw std::invalid_argument("ideal_outcome_distribution: n_circ must be in 1.." + std::to_string(w.n));
    }
    const auto out = evolve(w, psi);
    std::vector<double> dist(std::size_t{1} << n_circ, 0.0);
    const std::size_t drop = w.n - n_circ;
    for (std::size_t i = 0; i < out.size(); ++i) dist[i >> drop] += std::norm(out[i]);
    return dist;
}

std::vector<double> ideal_outcome_distribution(const Program& w, std::size_t n_circ) {
    const std::vector<int> zeros(w.n, 0);
    const auto psi = basis_state(zeros);
    return ideal_outcome_distribution(w, psi, n_circ);
}

std::vector<Complex> basis_state(std::span<const int> bits) {
    if (bits.empty()) throw std::invalid_argument("basis_state: need at least one bit");
    std::size_t idx = 0;
    for (const int b : bits) {
        if (b != 0 && b != 1) throw std::invalid_argument("basis_state: entries must be bits");
        idx = (idx << 1) | static_cast<std::size_t>(b);
    }
    std::vector<Complex> psi(std::size_t{1} << bits.size());
    psi[idx] = 1.0;
    return psi;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

}  // namespace obliq::oracle
