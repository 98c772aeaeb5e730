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

#ifndef OBLIQ_RNG_HPP
#define OBLIQ_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace obliq {

/// Deterministic per-party random stream.
///
/// Residues are taken as `engine() % modulus` with power-of-two moduli only,
/// which is exactly uniform over a 64-bit engine and identical on every
/// standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for a named party derived from a run seed.
    static Rng for_party(std::uint64_t seed, std::string_view party);

    int residue(int modulus);
    int bit() { return residue(2); }
    /// Uniform double in [0, 1) with 53 random bits.
    double unit();

  private:
    std::mt19937_64 engine_;
};

}  // namespace obliq

#endif  // OBLIQ_RNG_HPP
