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

#include "obliq/gates.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace obliq {

namespace {

int mod(int v, int m) { return ((v % m) + m) % m; }

Eigen::MatrixXcd base_matrix(GateName g) {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd m;
    switch (g) {
        case GateName::X:
            m = Eigen::MatrixXcd(2, 2);
            m << 0, 1, 1, 0;
            return m;
        case GateName::Z:
            m = Eigen::MatrixXcd(2, 2);
            m << 1, 0, 0, -1;
            return m;
        case GateName::Y:
            // Y := ZX
            m = Eigen::MatrixXcd(2, 2);
            m << 0, 1, -1, 0;
            return m;
        case GateName::T:
            m = Eigen::MatrixXcd(2, 2);
            m << 1, 0, 0, std::polar(1.0, M_PI / 4.0);
            return m;
        case GateName::H:
            // rotation form, H^2 = Y and H^4 = -I
            m = Eigen::MatrixXcd(2, 2);
            m << r, r, -r, r;
            return m;
        case GateName::CZ:
            m = Eigen::MatrixXcd::Identity(4, 4);
            m(3, 3) = -1;
            return m;
    }
    throw std::invalid_argument("unknown gate");
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
    return out;
}

void check_residues(const std::vector<std::uint8_t>& v, std::size_t len, int modulus, const char* what) {
    if (v.size() != len) {
        std::ostringstream os;
        os << what << " has " << v.size() << " entries, expected " << len;
        throw std::invalid_argument(os.str());
    }
    for (const auto e : v) {
        if (e >= modulus) {
            std::ostringstream os;
            os << what << " entry " << int(e) << " is outside Z" << modulus;
            throw std::invalid_argument(os.str());
        }
    }
}

}  // namespace

GateName parse_gate_name(std::string_view name) {
    if (name == "X") return GateName::X;
    if (name == "Z") return GateName::Z;
    if (name == "Y") return GateName::Y;
    if (name == "T") return GateName::T;
    if (name == "H") return GateName::H;
    if (name == "CZ") return GateName::CZ;
    throw std::invalid_argument("unknown gate name '" + std::string(name) + "'");
}

std::string_view to_string(GateName g) {
    switch (g) {
        case GateName::X: return "X";
        case GateName::Z: return "Z";
        case GateName::Y: return "Y";
        case GateName::T: return "T";
        case GateName::H: return "H";
        case GateName::CZ: return "CZ";
    }
    return "?";
}

int gate_order(GateName g) {
    switch (g) {
        case GateName::X:
        case GateName::Z:
        case GateName::CZ: return 2;
        case GateName::Y: return 4;
        case GateName::T:
        case GateName::H: return 8;
    }
    return 1;
}

Eigen::MatrixXcd matrix_of(GateName g, int power) {
    const Eigen::MatrixXcd b = base_matrix(g);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(b.rows(), b.cols());
    for (int k = mod(power, gate_order(g)); k > 0; --k) out = b * out;
    return out;
}

Gate1 gate1(GateName g, int power) {
    if (g == GateName::CZ) throw std::invalid_argument("gate1: CZ is a two-qubit gate");
    return Gate1(matrix_of(g, power));
}

std::size_t pair_index(std::size_t s, std::size_t t, std::size_t n) {
    if (!(s < t && t < n)) throw std::invalid_argument("pair_index: need s < t < n");
    // pairs before row s: sum_{r<s} (n-1-r)
    return s * (2 * n - s - 1) / 2 + (t - s - 1);
}

std::vector<std::pair<std::size_t, std::size_t>> pairs_of(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(pair_count(n));
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) out.emplace_back(s, t);
    }
    return out;
}

void ProgramRound::validate(std::size_t n) const {
    check_residues(x, n, kHMod, "x");
    check_residues(y, n, kTMod, "y");
    check_residues(z, pair_count(n), kZMod, "z");
}

void Program::validate() const {
    if (n == 0) throw std::invalid_argument("program needs n >= 1");
    if (rounds.empty()) throw std::invalid_argument("program needs m >= 1");
    for (const auto& r : rounds) r.validate(n);
}

ProgramRound zero_round(std::size_t n) {
    return ProgramRound{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0),
                        std::vector<std::uint8_t>(pair_count(n), 0)};
}

ProgramRound identity_round(std::size_t n) {
    return ProgramRound{std::vector<std::uint8_t>(n, 1), std::vector<std::uint8_t>(n, 1),
                        std::vector<std::uint8_t>(pair_count(n), 1)};
}

void round_unitary_apply(StateRegister& reg, std::span<const QubitHandle> qubits, const ProgramRound& round) {
    const std::size_t n = qubits.size();
    if (round.x.size() != n) {
        throw std::invalid_argument("round_unitary_apply: " + std::to_string(n) + " handles for a round of width " +
                                    std::to_string(round.x.size()));
    }
    round.validate(n);
    std::size_t p = 0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t, ++p) reg.apply_cz(qubits[s], qubits[t], round.z[p]);
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (round.y[s] != 0) reg.apply_1q(qubits[s], gate1(GateName::T, round.y[s]));
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (round.x[s] != 0) reg.apply_1q(qubits[s], gate1(GateName::H, round.x[s]));
    }
}

ProgramRound round_product(const ProgramRound& a, const ProgramRound& b) {
    if (a.x.size() != b.x.size() || a.y.size() != b.y.size() || a.z.size() != b.z.size()) {
        throw std::invalid_argument("round_product: shape mismatch");
    }
    ProgramRound out = a;
    for (std::size_t s = 0; s < a.x.size(); ++s) out.x[s] = static_cast<std::uint8_t>((a.x[s] * b.x[s]) % kHMod);
    for (std::size_t s = 0; s < a.y.size(); ++s) out.y[s] = static_cast<std::uint8_t>((a.y[s] * b.y[s]) % kTMod);
    for (std::size_t p = 0; p < a.z.size(); ++p) out.z[p] = static_cast<std::uint8_t>((a.z[p] * b.z[p]) % kZMod);
    return out;
}

Program program_product(const Program& w, const Program& w_prime) {
    if (w.n != w_prime.n || w.m() != w_prime.m()) {
        throw std::invalid_argument("program_product: programs differ in n or m");
    }
    Program out{w.n, {}};
    out.rounds.reserve(w.m());
    for (std::size_t j = 0; j < w.m(); ++j) out.rounds.push_back(round_product(w.rounds[j], w_prime.rounds[j]));
    return out;
}

Program identity_program(std::size_t n, std::size_t m) {
    return Program{n, std::vector<ProgramRound>(m, identity_round(n))};
}

Program zero_program(std::size_t n, std::size_t m) {
    return Program{n, std::vector<ProgramRound>(m, zero_round(n))};
}

std::pair<Program, Program> split_program(const Program& w, std::size_t m1) {
    if (m1 < 1 || m1 >= w.m()) {
        throw std::invalid_argument("split_program: need 1 <= m1 < m, got m1=" + std::to_string(m1) +
                                    " m=" + std::to_string(w.m()));
    }
    const auto cut = w.rounds.begin() + static_cast<std::ptrdiff_t>(m1);
    return {Program{w.n, {w.rounds.begin(), cut}}, Program{w.n, {cut, w.rounds.end()}}};
}

Program concat_programs(const Program& first, const Program& second) {
    if (first.n != second.n) throw std::invalid_argument("concat_programs: n mismatch");
    Program out = first;
    out.rounds.insert(out.rounds.end(), second.rounds.begin(), second.rounds.end());
    return out;
}

Program random_program(std::size_t n, std::size_t m, Rng& rng) {
    Program w{n, {}};
    for (std::size_t j = 0; j < m; ++j) {
        ProgramRound r = zero_round(n);
        for (auto& e : r.x) e = static_cast<std::uint8_t>(rng.residue(kHMod));
        for (auto& e : r.y) e = static_cast<std::uint8_t>(rng.residue(kTMod));
        for (auto& e : r.z) e = static_cast<std::uint8_t>(rng.residue(kZMod));
        w.rounds.push_back(std::move(r));
    }
    return w;
}

// ---------------------------------------------------------------------------

GateSequence cnot_via_universal_set() {
    // operator form H_t CZ T_t^4 H_t T_t^4, rightmost acts first
    return GateSequence{{{GateName::T, Role::target, 4},
                         {GateName::H, Role::target, 1},
                         {GateName::T, Role::target, 4},
                         {GateName::CZ, Role::control, 1},
                         {GateName::H, Role::target, 1}},
                        -1};
}

GateSequence cnot_via_universal_set_unsigned() {
    // operator form T_t^4 H_t CZ T_t^4 H_t
    return GateSequence{{{GateName::H, Role::target, 1},
                         {GateName::T, Role::target, 4},
                         {GateName::CZ, Role::control, 1},
                         {GateName::H, Role::target, 1},
                         {GateName::T, Role::target, 4}},
                        1};
}

Eigen::Matrix4cd sequence_matrix(const GateSequence& seq) {
    Eigen::Matrix4cd acc = Eigen::Matrix4cd::Identity();
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (const auto& op : seq.ops) {
        Eigen::Matrix4cd step;
        if (op.gate == GateName::CZ) {
            step = matrix_of(GateName::CZ, op.power);
        } else {
            const Eigen::Matrix2cd g = gate1(op.gate, op.power);
            // index = 2*control + target, so control is the left factor
            step = op.on == Role::control ? kron(g, id) : kron(id, g);
        }
        acc = step * acc;
    }
    return acc;
}

void apply_sequence(StateRegister& reg, const GateSequence& seq, QubitHandle control, QubitHandle target) {
    for (const auto& op : seq.ops) {
        if (op.gate == GateName::CZ) {
            reg.apply_cz(control, target, op.power);
        } else {
            reg.apply_1q(op.on == Role::control ? control : target, gate1(op.gate, op.power));
        }
    }
}

Eigen::Matrix4cd cnot_matrix() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

// ---------------------------------------------------------------------------

Program compile_parity(std::span<const int> inputs) {
    if (inputs.empty()) throw std::invalid_argument("compile_parity: need l >= 1 inputs");
    for (const int v : inputs) {
        if (v != 0 && v != 1) throw std::invalid_argument("compile_parity: inputs must be bits");
    }
    const std::size_t l = inputs.size();
    Program w{2, {}};
    w.rounds.reserve(2 * l + 1);
    // round 1 prepares |1> on qubit 2 (up to phase) via H^2 T^4
    w.rounds.push_back(ProgramRound{{0, 2}, {0, 4}, {0}});
    for (std::size_t k = 0; k < l; ++k) {
        const auto xk = static_cast<std::uint8_t>(inputs[k]);
        w.rounds.push_back(ProgramRound{{xk, 0}, {static_cast<std::uint8_t>(4 * xk), 0}, {0}});
        w.rounds.push_back(ProgramRound{{xk, 0}, {static_cast<std::uint8_t>(4 * xk), 0}, {xk}});
    }
    return w;
}

// ---------------------------------------------------------------------------

Program parse_program(std::istream& raw) {
    // '#' starts a comment running to the end of the line
    std::string text, line;
    while (std::getline(raw, line)) {
        text += line.substr(0, line.find('#'));
        text += '\n';
    }
    std::istringstream in(text);
    auto read_count = [&](const char* what) {
        long long v = 0;
        if (!(in >> v)) throw std::invalid_argument(std::string("program file: missing ") + what);
        if (v < 1) throw std::invalid_argument(std::string("program file: ") + what + " must be >= 1");
        return static_cast<std::size_t>(v);
    };
    const std::size_t n = read_count("n");
    const std::size_t m = read_count("m");
    auto read_vec = [&](std::size_t len, int modulus, const char* what, std::size_t j) {
        std::vector<std::uint8_t> out(len);
        for (std::size_t i = 0; i < len; ++i) {
            long long v = 0;
            if (!(in >> v)) {
                throw std::invalid_argument("program file: round " + std::to_string(j + 1) + " " + what +
                                            " is truncated");
            }
            if (v < 0 || v >= modulus) {
                throw std::invalid_argument("program file: round " + std::to_string(j + 1) + " " + what +
                                            " value " + std::to_string(v) + " outside Z" + std::to_string(modulus));
            }
            out[i] = static_cast<std::uint8_t>(v);
        }
        return out;
    };
    Program w{n, {}};
    for (std::size_t j = 0; j < m; ++j) {
        ProgramRound r;
        r.x = read_vec(n, kHMod, "x", j);
        r.y = read_vec(n, kTMod, "y", j);
        r.z = read_vec(pair_count(n), kZMod, "z", j);
        w.rounds.push_back(std::move(r));
    }
    std::string extra;
    if (in >> extra) throw std::invalid_argument("program file: trailing content '" + extra + "'");
    return w;
}

Program parse_program_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_program(in);
}

Program read_program_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open program file '" + path + "'");
    return parse_program(in);
}

std::string format_program(const Program& w) {
    std::ostringstream os;
    os << w.n << ' ' << w.m() << '\n';
    auto line = [&](const std::vector<std::uint8_t>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << int(v[i]);
        os << '\n';
    };
    for (const auto& r : w.rounds) {
        line(r.x);
        line(r.y);
        line(r.z);
    }
    return os.str();
}

}  // namespace obliq
