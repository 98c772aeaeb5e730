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

#ifndef OBLIQ_GATES_HPP
#define OBLIQ_GATES_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "obliq/qsim.hpp"

namespace obliq {

enum class GateName { X, Z, Y, T, H, CZ };

GateName parse_gate_name(std::string_view name);
std::string_view to_string(GateName g);

/// Projective order used to reduce exponents: X, Z, CZ: 2; Y: 4; T, H: 8.
int gate_order(GateName g);

/// The gate raised to `power` (negative powers allowed). 2x2, or 4x4 for CZ.
Eigen::MatrixXcd matrix_of(GateName g, int power = 1);
Gate1 gate1(GateName g, int power = 1);

/// Number of unordered qubit pairs, n(n-1)/2.
constexpr std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }
/// Lexicographic index of the pair (s, t), s < t, both 0-based.
std::size_t pair_index(std::size_t s, std::size_t t, std::size_t n);
/// All pairs (s, t), s < t, in lexicographic order.
std::vector<std::pair<std::size_t, std::size_t>> pairs_of(std::size_t n);

inline constexpr int kHMod = 4;  // x entries live in Z4
inline constexpr int kTMod = 8;  // y entries live in Z8
inline constexpr int kZMod = 2;  // z entries live in Z2

/// One layer H(x) T(y) CZ(z).
struct ProgramRound {
    std::vector<std::uint8_t> x;  ///< H exponents, Z4
    std::vector<std::uint8_t> y;  ///< T exponents, Z8
    std::vector<std::uint8_t> z;  ///< CZ exponents, Z2, indexed by pair_index

    /// Throws std::invalid_argument on a length or range violation.
    void validate(std::size_t n) const;
    friend bool operator==(const ProgramRound&, const ProgramRound&) = default;
};

/// Round list applied first to last: W(w) = U_m ... U_1.
struct Program {
    std::size_t n = 0;
    std::vector<ProgramRound> rounds;

    std::size_t m() const { return rounds.size(); }
    void validate() const;
    friend bool operator==(const Program&, const Program&) = default;
};

ProgramRound zero_round(std::size_t n);
ProgramRound identity_round(std::size_t n);

/// Applies CZ(z), then T(y), then H(x).
void round_unitary_apply(StateRegister& reg, std::span<const QubitHandle> qubits, const ProgramRound& round);

/// Componentwise product of exponents in Z4 / Z8 / Z2.
Program program_product(const Program& w, const Program& w_prime);
ProgramRound round_product(const ProgramRound& a, const ProgramRound& b);
/// All exponents equal to 1; the neutral element of program_product.
Program identity_program(std::size_t n, std::size_t m);
Program zero_program(std::size_t n, std::size_t m);
/// Rounds [0, m1) and [m1, m).
std::pair<Program, Program> split_program(const Program& w, std::size_t m1);
Program concat_programs(const Program& first, const Program& second);

/// Uniformly random program (test and demo helper).
Program random_program(std::size_t n, std::size_t m, Rng& rng);

// ---------------------------------------------------------------------------
// CNOT from {H, T, CZ}

enum class Role { control, target };

struct GateOp {
    GateName gate;
    Role on;  ///< for CZ the op always acts on (control, target)
    int power;
};

/// Gates listed in application order (first element acts first).
struct GateSequence {
    std::vector<GateOp> ops;
    int sign = 1;  ///< claimed global sign: product == sign * CNOT
};

/// H_t CZ T_t^4 H_t T_t^4, claimed equal to -CNOT.
GateSequence cnot_via_universal_set();
/// T_t^4 H_t CZ T_t^4 H_t, equal to +CNOT.
GateSequence cnot_via_universal_set_unsigned();

/// 4x4 product of the sequence; basis index = 2*control + target.
Eigen::Matrix4cd sequence_matrix(const GateSequence& seq);
void apply_sequence(StateRegister& reg, const GateSequence& seq, QubitHandle control, QubitHandle target);
Eigen::Matrix4cd cnot_matrix();

// ---------------------------------------------------------------------------
// Parity example

/// n = 2, m = 2l + 1 program whose first qubit reads X_1 + ... + X_l.
Program compile_parity(std::span<const int> inputs);

// ---------------------------------------------------------------------------
// Text format: "n m", then per round a line of x, a line of y, a line of z.

Program parse_program(std::istream& in);
Program parse_program_text(std::string_view text);
Program read_program_file(const std::string& path);
std::string format_program(const Program& w);

}  // namespace obliq

#endif  // OBLIQ_GATES_HPP
