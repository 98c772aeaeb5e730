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

#ifndef OBLIQ_TOQC_HPP
#define OBLIQ_TOQC_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "obliq/gates.hpp"
#include "obliq/harness.hpp"
#include "obliq/protocol.hpp"

namespace obliq {

// Two-server oblivious quantum computation with a single user.

enum class ToqcMode { quantum_output, classical_output };

struct ToqcOptions {
    std::uint64_t seed = 0;
    bool eager_bell = false;
    ToqcMode mode = ToqcMode::quantum_output;
    OutcomeSource* outcomes = nullptr;
    std::optional<std::pair<Residues, Residues>> masks;  ///< forced (A0, B0)
};

struct ToqcResult {
    std::optional<DensityMatrix> state;  ///< quantum output on the first n_circ qubits
    std::vector<std::uint8_t> bits;      ///< classical output
    /// Exact output distribution given this run's Bell outcomes.
    std::vector<double> conditional;
    Transcript transcript;
    ComplexityLedger ledger;
    std::size_t peak_live = 0;
    std::size_t bell_pairs = 0;
    UserRecord user;
};

ToqcResult run_toqc(const Program& w, std::span<const Complex> psi, std::size_t n_circ, const ToqcOptions& opts = {});

/// The basis string of psi if it is a computational basis state up to phase.
std::optional<std::vector<int>> basis_bits_of(std::span<const Complex> psi, double tol = 1e-12);

/// Exact output distribution of the classical-output mode, summed over every
/// Bell and measurement branch.
std::vector<double> toqc_classical_distribution(const Program& w, std::span<const int> basis, std::size_t n_circ,
                                                std::uint64_t seed = 0);

}  // namespace obliq

#endif  // OBLIQ_TOQC_HPP
