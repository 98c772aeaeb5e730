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

#include "obliq/rng.hpp"

#include <array>
#include <stdexcept>

namespace obliq {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Rng Rng::for_party(std::uint64_t seed, std::string_view party) {
    const std::uint64_t tag = fnv1a(party);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return Rng((static_cast<std::uint64_t>(words[0]) << 32) | words[1]);
}

int Rng::residue(int modulus) {
    if (modulus <= 0 || (modulus & (modulus - 1)) != 0) {
        throw std::invalid_argument("Rng::residue: modulus must be a power of two");
    }
    return static_cast<int>(engine_() % static_cast<std::uint64_t>(modulus));
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

}  // namespace obliq
