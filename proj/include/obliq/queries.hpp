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

#ifndef OBLIQ_QUERIES_HPP
#define OBLIQ_QUERIES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "obliq/harness.hpp"
#include "obliq/qsim.hpp"
#include "obliq/rng.hpp"

namespace obliq {

using Residues = std::vector<std::uint8_t>;

/// T-exponent masks Q_{2,j,u}, one Z8 vector per u.
struct TFamily {
    std::array<Residues, 2> q;
    friend bool operator==(const TFamily&, const TFamily&) = default;
};

/// CZ-exponent masks Q_{3,j,(u,v)}, indexed 2u+v, one Z2 entry per pair.
struct CzFamily {
    std::array<Residues, 4> q;
    friend bool operator==(const CzFamily&, const CzFamily&) = default;
};

/// H-exponent masks Q_{1,j,u}, one Z4 vector per u.
struct HFamily {
    std::array<Residues, 2> q;
    friend bool operator==(const HFamily&, const HFamily&) = default;
};

TFamily fresh_t(std::size_t n, Rng& rng);
CzFamily fresh_cz(std::size_t n, Rng& rng);
HFamily fresh_h(std::size_t n, Rng& rng);

/// Q'_{u,s} = -Q_{u - shift_s, s} + coeff_s * [u == delta_s]   (mod 8)
TFamily update_t(const TFamily& q, std::span<const std::uint8_t> shift, std::span<const std::uint8_t> delta,
                 std::span<const std::uint8_t> coeff);

/// Q'_{(u,v),p} = -Q_{(u - shift_s, v - shift_t),p} + coeff_p [u == delta_s][v == delta_t]   (mod 2)
/// for the pair p = (s,t).
CzFamily update_cz(const CzFamily& q, std::size_t n, std::span<const std::uint8_t> shift,
                   std::span<const std::uint8_t> delta, std::span<const std::uint8_t> coeff);

/// Same shape as update_t in Z4.
HFamily update_h(const HFamily& q, std::span<const std::uint8_t> shift, std::span<const std::uint8_t> delta,
                 std::span<const std::uint8_t> coeff);

/// X^u T(Q_{u,s} y_s) X^u on every qubit for u = 0, 1.
void apply_masked_t(StateRegister& reg, std::span<const QubitHandle> qubits, const TFamily& fam,
                    std::span<const std::uint8_t> y);
/// X^u X^v CZ(Q_{(u,v),p} z_p) X^u X^v on every pair.
void apply_masked_cz(StateRegister& reg, std::span<const QubitHandle> qubits, const CzFamily& fam,
                     std::span<const std::uint8_t> z);
/// X^u H(Q_{u,s} x_s mod 4) X^u on every qubit.
void apply_masked_h(StateRegister& reg, std::span<const QubitHandle> qubits, const HFamily& fam,
                    std::span<const std::uint8_t> x);

// Wire encoding. `tag` is e.g. "Q2" or "Q2'".
void encode(std::vector<ResidueVector>& out, const std::string& tag, const TFamily& f);
void encode(std::vector<ResidueVector>& out, const std::string& tag, const CzFamily& f);
void encode(std::vector<ResidueVector>& out, const std::string& tag, const HFamily& f);
TFamily decode_t(const StepMessage& msg, const std::string& tag);
CzFamily decode_cz(const StepMessage& msg, const std::string& tag);
HFamily decode_h(const StepMessage& msg, const std::string& tag);
bool has_family(const StepMessage& msg, const std::string& tag);

ResidueVector bits_field(const std::string& name, std::span<const std::uint8_t> bits);

}  // namespace obliq

#endif  // OBLIQ_QUERIES_HPP
