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

#ifndef OBLIQ_TGDMQC_HPP
#define OBLIQ_TGDMQC_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "obliq/gates.hpp"
#include "obliq/harness.hpp"
#include "obliq/protocol.hpp"

namespace obliq {

// Delegated computation with m+1 classical users. The servers hold w, user j
// holds round j of w', and user m+1 learns the first n_circ bits of
// W(w.w')|0...0>.

struct TgdmqcOptions {
    std::uint64_t seed = 0;
    bool eager_bell = false;
    OutcomeSource* outcomes = nullptr;
};

struct TgdmqcResult {
    std::vector<std::uint8_t> bits;
    /// Exact output distribution given this run's Bell outcomes.
    std::vector<double> conditional;
    Transcript transcript;
    ComplexityLedger ledger;
    std::size_t peak_live = 0;
    std::vector<UserRecord> users;  ///< users 1..m+1
};

TgdmqcResult run_tgdmqc(const Program& w, const std::vector<ProgramRound>& user_rounds, std::size_t n_circ,
                        const TgdmqcOptions& opts = {});

/// Exact output distribution over every Bell and measurement branch.
std::vector<double> tgdmqc_distribution(const Program& w, const std::vector<ProgramRound>& user_rounds,
                                        std::size_t n_circ, std::uint64_t seed = 0);

/// Empirical output distribution over `runs` seeds starting at `seed`.
std::vector<double> tgdmqc_sampled_distribution(const Program& w, const std::vector<ProgramRound>& user_rounds,
                                                std::size_t n_circ, std::size_t runs, std::uint64_t seed);

/// Exact joint distribution of every Bell outcome delivered to users, keyed
/// by a string of the outcome bits in delivery order.
std::map<std::string, double> tgdmqc_received_distribution(const Program& w,
                                                           const std::vector<ProgramRound>& user_rounds,
                                                           std::size_t n_circ, std::uint64_t seed = 0);

/// Oblivious computation as a special case: servers hold (e, w2), users hold
/// (w1', e), so the product is (w1', w2).
struct ReducedInstance {
    Program w;
    std::vector<ProgramRound> user_rounds;
};
ReducedInstance oqc_reduction(const Program& w1_prime, const Program& w2);

/// Parity of `inputs` evaluated through the protocol with w = e.
struct ParityRun {
    int parity = 0;          ///< bit the final user computed
    double probability = 0;  ///< its exact probability given the run's Bell outcomes
};
ParityRun run_parity(std::span<const int> inputs, std::uint64_t seed = 0);

}  // namespace obliq

#endif  // OBLIQ_TGDMQC_HPP
