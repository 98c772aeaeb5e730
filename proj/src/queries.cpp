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

#include "obliq/queries.hpp"

#include <stdexcept>

#include "obliq/gates.hpp"

namespace obliq {

namespace {

Residues draw(std::size_t count, int mod, Rng& rng) {
    Residues r(count);
    for (auto& v : r) v = static_cast<std::uint8_t>(rng.residue(mod));
    return r;
}

std::uint8_t delta(int u, int idx) { return ((u ^ idx) & 1) == 0 ? 1 : 0; }

template <typename Family>
Family update_single(const Family& q, std::span<const std::uint8_t> shift, std::span<const std::uint8_t> dl,
                     std::span<const std::uint8_t> coeff, int mod) {
    const std::size_t n = q.q[0].size();
    if (shift.size() != n || dl.size() != n || coeff.size() != n) {
        throw std::invalid_argument("query update: vector length mismatch");
    }
    Family out;
    for (int u = 0; u < 2; ++u) {
        out.q[u].resize(n);
        for (std::size_t s = 0; s < n; ++s) {
            const int src = (u - shift[s]) & 1;
            const int v = -static_cast<int>(q.q[src][s]) + coeff[s] * delta(u, dl[s]);
            out.q[u][s] = static_cast<std::uint8_t>(((v % mod) + mod) % mod);
        }
    }
    return out;
}

const char* kUv[4] = {"uv00", "uv01", "uv10", "uv11"};

ResidueVector field(const std::string& name, int width, const Residues& values) {
    return ResidueVector{name, width, values};
}

}  // namespace

TFamily fresh_t(std::size_t n, Rng& rng) { return {{draw(n, kTMod, rng), draw(n, kTMod, rng)}}; }

CzFamily fresh_cz(std::size_t n, Rng& rng) {
    CzFamily f;
    for (auto& v : f.q) v = draw(pair_count(n), kZMod, rng);
    return f;
}

HFamily fresh_h(std::size_t n, Rng& rng) { return {{draw(n, kHMod, rng), draw(n, kHMod, rng)}}; }

TFamily update_t(const TFamily& q, std::span<const std::uint8_t> shift, std::span<const std::uint8_t> delta_idx,
                 std::span<const std::uint8_t> coeff) {
    return update_single(q, shift, delta_idx, coeff, kTMod);
}

HFamily update_h(const HFamily& q, std::span<const std::uint8_t> shift, std::span<const std::uint8_t> delta_idx,
                 std::span<const std::uint8_t> coeff) {
    return update_single(q, shift, delta_idx, coeff, kHMod);
}

CzFamily update_cz(const CzFamily& q, std::size_t n, std::span<const std::uint8_t> shift,
                   std::span<const std::uint8_t> delta_idx, std::span<const std::uint8_t> coeff) {
    const auto pairs = pairs_of(n);
    if (shift.size() != n || delta_idx.size() != n || coeff.size() != pairs.size()) {
        throw std::invalid_argument("query update: vector length mismatch");
    }
    CzFamily out;
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            auto& dst = out.q[2 * u + v];
            dst.resize(pairs.size());
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const auto [s, t] = pairs[p];
                const int su = (u - shift[s]) & 1;
                const int sv = (v - shift[t]) & 1;
                const int val = q.q[2 * su + sv][p] + coeff[p] * delta(u, delta_idx[s]) * delta(v, delta_idx[t]);
                dst[p] = static_cast<std::uint8_t>(val & 1);  // -a == a in Z2
            }
        }
    }
    return out;
}

void apply_masked_t(StateRegister& reg, std::span<const QubitHandle> qubits, const TFamily& fam,
                    std::span<const std::uint8_t> y) {
    const Gate1 x = gate1(GateName::X);
    for (std::size_t s = 0; s < qubits.size(); ++s) {
        for (int u = 0; u < 2; ++u) {
            const int power = (fam.q[u][s] * y[s]) % kTMod;
            if (power == 0) continue;
            const Gate1 t = gate1(GateName::T, power);
            reg.apply_1q(qubits[s], u ? Gate1(x * t * x) : t);
        }
    }
}

void apply_masked_cz(StateRegister& reg, std::span<const QubitHandle> qubits, const CzFamily& fam,
                     std::span<const std::uint8_t> z) {
    const Gate1 x = gate1(GateName::X);
    const auto pairs = pairs_of(qubits.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [s, t] = pairs[p];
        for (int u = 0; u < 2; ++u) {
            for (int v = 0; v < 2; ++v) {
                if ((fam.q[2 * u + v][p] * z[p]) % 2 == 0) continue;
                if (u) reg.apply_1q(qubits[s], x);
                if (v) reg.apply_1q(qubits[t], x);
                reg.apply_cz(qubits[s], qubits[t]);
                if (u) reg.apply_1q(qubits[s], x);
                if (v) reg.apply_1q(qubits[t], x);
            }
        }
    }
}

void apply_masked_h(StateRegister& reg, std::span<const QubitHandle> qubits, const HFamily& fam,
                    std::span<const std::uint8_t> x_exp) {
    const Gate1 x = gate1(GateName::X);
    for (std::size_t s = 0; s < qubits.size(); ++s) {
        for (int u = 0; u < 2; ++u) {
            const int power = (fam.q[u][s] * x_exp[s]) % kHMod;
            if (power == 0) continue;
            const Gate1 h = gate1(GateName::H, power);
            reg.apply_1q(qubits[s], u ? Gate1(x * h * x) : h);
        }
    }
}

void encode(std::vector<ResidueVector>& out, const std::string& tag, const TFamily& f) {
    out.push_back(field(tag + ".u0", 3, f.q[0]));
    out.push_back(field(tag + ".u1", 3, f.q[1]));
}

void encode(std::vector<ResidueVector>& out, const std::string& tag, const CzFamily& f) {
    for (int i = 0; i < 4; ++i) out.push_back(field(tag + "." + kUv[i], 1, f.q[i]));
}

void encode(std::vector<ResidueVector>& out, const std::string& tag, const HFamily& f) {
    out.push_back(field(tag + ".u0", 2, f.q[0]));
    out.push_back(field(tag + ".u1", 2, f.q[1]));
}

TFamily decode_t(const StepMessage& msg, const std::string& tag) {
    return {{msg.require_field(tag + ".u0").values, msg.require_field(tag + ".u1").values}};
}

CzFamily decode_cz(const StepMessage& msg, const std::string& tag) {
    CzFamily f;
    for (int i = 0; i < 4; ++i) f.q[i] = msg.require_field(tag + "." + kUv[i]).values;
    return f;
}

HFamily decode_h(const StepMessage& msg, const std::string& tag) {
    return {{msg.require_field(tag + ".u0").values, msg.require_field(tag + ".u1").values}};
}

bool has_family(const StepMessage& msg, const std::string& tag) {
    return msg.field(tag + ".u0") != nullptr || msg.field(tag + ".uv00") != nullptr;
}

ResidueVector bits_field(const std::string& name, std::span<const std::uint8_t> bits) {
    return ResidueVector{name, 1, Residues(bits.begin(), bits.end())};
}

}  // namespace obliq
