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

#ifndef OBLIQ_PROTOCOL_HPP
#define OBLIQ_PROTOCOL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "obliq/gates.hpp"
#include "obliq/harness.hpp"
#include "obliq/qsim.hpp"
#include "obliq/queries.hpp"

namespace obliq {

// Shared machinery for the two-server protocols. One user plays every
// round in the oblivious-computation protocol; in the delegated protocol
// user j plays round j and user m+1 only receives the result.

enum class InputMode { qubits, basis_bits, zero };
enum class OutputMode { qubits, bits };

struct RunConfig {
    Program w;
    /// Per-round coefficients of the delta terms (all ones for plain OQC).
    std::vector<ProgramRound> coeff;
    std::size_t n_circ = 1;
    InputMode input = InputMode::qubits;
    OutputMode output = OutputMode::qubits;
    bool multi_user = false;
    bool random_masks = true;
    bool eager_bell = false;
    std::uint64_t seed = 0;
    std::vector<Complex> psi;       ///< InputMode::qubits
    std::vector<int> basis;         ///< InputMode::basis_bits
    std::optional<std::pair<Residues, Residues>> forced_masks;  ///< (A0, B0)
    /// Shared forced outcome source; when null each server samples from its own stream.
    OutcomeSource* outcomes = nullptr;
    std::size_t max_qubits = default_max_qubits();
};

/// Everything one user generated or received.
struct UserRecord {
    int index = 1;
    Residues a0, b0;
    std::map<std::size_t, TFamily> q2, q2p;
    std::map<std::size_t, CzFamily> q3, q3p;
    std::map<std::size_t, HFamily> q1, q1p;
    std::map<std::size_t, Residues> a, b;  ///< Bell outcomes keyed by teleportation index
    std::vector<std::uint8_t> x_bits;       ///< final Z outcomes (bits output)
};

struct RunOutcome {
    Transcript transcript;
    ComplexityLedger ledger;
    std::size_t peak_live = 0;
    std::size_t bell_pairs = 0;
    std::optional<DensityMatrix> state;     ///< OutputMode::qubits
    std::vector<std::uint8_t> bits;         ///< OutputMode::bits
    /// OutputMode::bits: exact distribution of the user's output given every
    /// Bell outcome of this run (audit data, not sent anywhere).
    std::vector<double> conditional;
    std::vector<UserRecord> users;
};

RunOutcome run_two_server(const RunConfig& cfg);

/// Shift and delta-index vectors of a query update.
struct UpdateIndices {
    Residues shift;
    Residues delta;
};
/// T and CZ updates of round j (sent at step 4j-1).
UpdateIndices second_query_indices(const UserRecord& rec, std::size_t j, std::size_t n);
/// H update of round j (sent at step 4j+1).
UpdateIndices h_query_indices(const UserRecord& rec, std::size_t j, std::size_t n);

/// Bits of an output string, qubit 1 first.
std::size_t bits_to_index(std::span<const std::uint8_t> bits);

}  // namespace obliq

#endif  // OBLIQ_PROTOCOL_HPP
