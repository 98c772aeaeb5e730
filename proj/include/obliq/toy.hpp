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

#ifndef OBLIQ_TOY_HPP
#define OBLIQ_TOY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "obliq/harness.hpp"
#include "obliq/qsim.hpp"
#include "obliq/queries.hpp"

namespace obliq {

// Single-qubit oblivious transfer of T^y|psi>.

struct ToyOptions {
    std::uint64_t seed = 0;
    std::optional<std::pair<int, int>> masks;  ///< forced (A0, B0)
    OutcomeSource* outcomes = nullptr;          ///< forced Bell outcome; sampled when null
};

struct ToyResult {
    DensityMatrix state;
    Transcript transcript;
    ComplexityLedger ledger;
    int a0 = 0, b0 = 0, a1 = 0, b1 = 0;
    TFamily q, q_prime;
};

ToyResult run_toy(int y, std::span<const Complex> psi, const ToyOptions& opts = {});

/// The query update Q'_{A0+A1} = -Q_{A0} + 1, Q'_{A0+A1+1} = -Q_{A0+1} in Z8.
TFamily toy_second_query(const TFamily& q, int a0, int a1);

}  // namespace obliq

#endif  // OBLIQ_TOY_HPP
