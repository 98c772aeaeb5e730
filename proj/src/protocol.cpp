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

#include "obliq/protocol.hpp"

#include <memory>
#include <stdexcept>
#include <string>

namespace obliq {

namespace {

struct World {
    World(const RunConfig& cfg)
        : reg(cfg.max_qubits), pool(reg, 2 * cfg.w.m(), cfg.w.n, cfg.eager_bell) {}
    StateRegister reg;
    EntanglementPool pool;
    std::vector<double> final_x_dist;  // audit only
};

std::string label(std::size_t step) { return std::to_string(step); }

std::size_t parse_step(const std::string& s) { return static_cast<std::size_t>(std::stoul(s)); }

Residues xor_of(std::initializer_list<const Residues*> parts, std::size_t n) {
    Residues out(n, 0);
    for (const auto* p : parts) {
        for (std::size_t s = 0; s < n; ++s) out[s] ^= (*p)[s] & 1;
    }
    return out;
}

const Residues& recorded(const std::map<std::size_t, Residues>& table, std::size_t k, const char* what) {
    auto it = table.find(k);
    if (it == table.end()) throw std::logic_error(std::string("missing outcome ") + what + "_" + std::to_string(k));
    return it->second;
}

void apply_pauli(StateRegister& reg, QubitHandle q, int x_pow, int z_pow) {
    // Z^z X^x: X acts first
    if (x_pow & 1) reg.apply_1q(q, gate1(GateName::X));
    if (z_pow & 1) reg.apply_1q(q, gate1(GateName::Z));
}

class Routing {
  public:
    explicit Routing(const RunConfig& cfg) : multi_(cfg.multi_user), m_(cfg.w.m()) {}
    PartyId owner(std::size_t j) const { return PartyId::user(multi_ ? static_cast<int>(j) : 1); }
    PartyId final_user() const { return owner(m_ + 1); }
    std::vector<PartyId> after_b(std::size_t j) const {
        if (!multi_) return {owner(j)};
        return {owner(j), owner(j + 1)};
    }

  private:
    bool multi_;
    std::size_t m_;
};

class User final : public PartyNode {
  public:
    User(int index, const RunConfig& cfg, World& world, Routing routing)
        : index_(index), cfg_(cfg), world_(world), routing_(routing),
          rng_(Rng::for_party(cfg.seed, "user" + std::to_string(index))) {
        rec.index = index;
        const std::size_t n = cfg.w.n;
        if (cfg.random_masks && owns(1)) {
            if (cfg.forced_masks) {
                rec.a0 = cfg.forced_masks->first;
                rec.b0 = cfg.forced_masks->second;
                if (rec.a0.size() != n || rec.b0.size() != n) throw std::invalid_argument("forced masks: wrong length");
            } else {
                for (std::size_t s = 0; s < n; ++s) rec.a0.push_back(static_cast<std::uint8_t>(rng_.bit()));
                for (std::size_t s = 0; s < n; ++s) rec.b0.push_back(static_cast<std::uint8_t>(rng_.bit()));
            }
        } else {
            rec.a0.assign(n, 0);
            rec.b0.assign(n, 0);
        }
    }

    PartyId id() const override { return PartyId::user(index_); }

    std::vector<StepMessage> start() override {
        if (!owns(1)) return {};
        const std::size_t n = cfg_.w.n;
        StepMessage msg{label(1), id(), {PartyId::server_a()}, {}, {}, {}, false};
        if (cfg_.input == InputMode::qubits) {
            msg.qubits = world_.reg.alloc_state(cfg_.psi);
            for (std::size_t s = 0; s < n; ++s) apply_pauli(world_.reg, msg.qubits[s], rec.a0[s], rec.b0[s]);
        } else if (cfg_.input == InputMode::basis_bits) {
            Residues masked(n);
            for (std::size_t s = 0; s < n; ++s) masked[s] = static_cast<std::uint8_t>((cfg_.basis[s] ^ rec.a0[s]) & 1);
            msg.fields.push_back(bits_field("in", masked));
        }
        rec.q2[1] = fresh_t(n, rng_);
        rec.q3[1] = fresh_cz(n, rng_);
        encode(msg.fields, "Q2", rec.q2[1]);
        encode(msg.fields, "Q3", rec.q3[1]);
        return {msg};
    }

    std::vector<StepMessage> on_message(const StepMessage& msg) override {
        const std::size_t k = parse_step(msg.step);
        const std::size_t m = cfg_.w.m();
        if (msg.sender.kind == PartyKind::server_a && k == 4 * m + 2) return finish(msg);
        if (k % 2 != 0) throw std::logic_error("user received unexpected step " + msg.step);
        const std::size_t tel = k / 2;  // teleportation index 2j-1 (from A) or 2j (from B)
        rec.a[tel] = msg.require_field("A").values;
        rec.b[tel] = msg.require_field("B").values;
        if (msg.sender.kind == PartyKind::server_a) return query_to_b((k + 2) / 4);
        return query_to_a(k / 4);
    }

    UserRecord rec;
    std::optional<DensityMatrix> state;
    Residues bits;
    std::vector<double> conditional;

  private:
    bool owns(std::size_t j) const {
        if (j < 1 || j > cfg_.w.m()) return false;
        return routing_.owner(j) == id();
    }

    // Step 4j-1.
    std::vector<StepMessage> query_to_b(std::size_t j) {
        if (!owns(j)) return {};
        const std::size_t n = cfg_.w.n;
        const UpdateIndices idx = second_query_indices(rec, j, n);
        const ProgramRound& c = cfg_.coeff[j - 1];
        rec.q2p[j] = update_t(rec.q2.at(j), idx.shift, idx.delta, c.y);
        rec.q3p[j] = update_cz(rec.q3.at(j), n, idx.shift, idx.delta, c.z);
        rec.q1p[j] = fresh_h(n, rng_);
        StepMessage out{label(4 * j - 1), id(), {PartyId::server_b()}, {}, {}, {}, false};
        encode(out.fields, "Q2'", rec.q2p[j]);
        encode(out.fields, "Q3'", rec.q3p[j]);
        encode(out.fields, "Q1'", rec.q1p[j]);
        return {out};
    }

    // Step 4(j+1)-3 after receiving the outcomes of step 4j.
    std::vector<StepMessage> query_to_a(std::size_t j) {
        const std::size_t n = cfg_.w.n;
        const std::size_t m = cfg_.w.m();
        StepMessage out{label(4 * j + 1), id(), {PartyId::server_a()}, {}, {}, {}, false};
        if (owns(j)) {
            const UpdateIndices idx = h_query_indices(rec, j, n);
            rec.q1[j] = update_h(rec.q1p.at(j), idx.shift, idx.delta, cfg_.coeff[j - 1].x);
            encode(out.fields, "Q1", rec.q1[j]);
        }
        if (j < m && owns(j + 1)) {
            rec.q2[j + 1] = fresh_t(n, rng_);
            rec.q3[j + 1] = fresh_cz(n, rng_);
            encode(out.fields, "Q2", rec.q2[j + 1]);
            encode(out.fields, "Q3", rec.q3[j + 1]);
        }
        if (out.fields.empty()) return {};
        return {out};
    }

    // Steps 4m+2 (receive) and 4m+3 (construction).
    std::vector<StepMessage> finish(const StepMessage& msg) {
        const std::size_t m = cfg_.w.m();
        const std::size_t nc = cfg_.n_circ;
        const Residues& a2m = recorded(rec.a, 2 * m, "A");
        if (cfg_.output == OutputMode::qubits) {
            const Residues& b2m = recorded(rec.b, 2 * m, "B");
            if (msg.qubits.size() != nc) throw std::logic_error("final message carries the wrong number of qubits");
            for (std::size_t s = 0; s < nc; ++s) {
                apply_pauli(world_.reg, msg.qubits[s], rec.a0[s] ^ a2m[s], rec.b0[s] ^ b2m[s]);
            }
            state = world_.reg.density_on(msg.qubits);
        } else {
            const Residues& x = msg.require_field("X").values;
            rec.x_bits = x;
            bits.resize(nc);
            Residues mask(nc);
            for (std::size_t s = 0; s < nc; ++s) {
                mask[s] = static_cast<std::uint8_t>((a2m[s] ^ rec.a0[s]) & 1);
                bits[s] = static_cast<std::uint8_t>((x[s] ^ mask[s]) & 1);
            }
            const std::size_t shift = bits_to_index(mask);
            conditional.assign(world_.final_x_dist.size(), 0.0);
            for (std::size_t i = 0; i < conditional.size(); ++i) conditional[i ^ shift] = world_.final_x_dist[i];
        }
        StepMessage local{label(4 * m + 3), id(), {}, {}, {}, {}, true};
        return {local};
    }

    int index_;
    const RunConfig& cfg_;
    World& world_;
    Routing routing_;
    Rng rng_;
};

class OutcomeChooser {
  public:
    OutcomeChooser(const RunConfig& cfg, const char* party)
        : rng_(Rng::for_party(cfg.seed, party)), sampled_(rng_), src_(cfg.outcomes ? cfg.outcomes : &sampled_) {}
    OutcomeSource& src() { return *src_; }

  private:
    Rng rng_;
    SampledOutcomes sampled_;
    OutcomeSource* src_;
};

StepMessage outcome_message(std::size_t step, PartyId sender, std::vector<PartyId> to, const Residues& a,
                            const Residues& b, std::vector<std::array<double, 4>> probs) {
    StepMessage msg{label(step), sender, std::move(to), {}, {}, std::move(probs), false};
    msg.fields.push_back(bits_field("A", a));
    msg.fields.push_back(bits_field("B", b));
    return msg;
}

class ServerA final : public PartyNode {
  public:
    ServerA(const RunConfig& cfg, World& world, Routing routing)
        : cfg_(cfg), world_(world), routing_(routing), chooser_(cfg, "serverA") {}

    PartyId id() const override { return PartyId::server_a(); }

    std::vector<StepMessage> on_message(const StepMessage& msg) override {
        for (const auto& f : msg.fields) pending_.fields.push_back(f);
        for (const auto q : msg.qubits) pending_.qubits.push_back(q);
        std::vector<StepMessage> out;
        while (ready()) {
            auto produced = run_round();
            for (auto& p : produced) out.push_back(std::move(p));
            pending_ = StepMessage{};
            ++j_;
        }
        return out;
    }

  private:
    bool ready() const {
        const std::size_t m = cfg_.w.m();
        if (j_ > m + 1) return false;
        if (j_ == 1) {
            if (cfg_.input == InputMode::qubits && pending_.qubits.size() != cfg_.w.n) return false;
            if (cfg_.input == InputMode::basis_bits && !pending_.field("in")) return false;
        } else if (!has_family(pending_, "Q1")) {
            return false;
        }
        if (j_ <= m) return has_family(pending_, "Q2") && has_family(pending_, "Q3");
        return true;
    }

    std::vector<StepMessage> run_round() {
        auto& reg = world_.reg;
        auto& pool = world_.pool;
        const std::size_t n = cfg_.w.n;
        const std::size_t m = cfg_.w.m();
        const std::size_t j = j_;

        std::vector<QubitHandle> cur;
        if (j == 1) {
            if (cfg_.input == InputMode::qubits) {
                cur = pending_.qubits;
            } else {
                cur = reg.alloc_zero(n);
                if (cfg_.input == InputMode::basis_bits) {
                    const auto& in = pending_.require_field("in").values;
                    for (std::size_t s = 0; s < n; ++s) {
                        if (in[s] & 1) reg.apply_1q(cur[s], gate1(GateName::X));
                    }
                }
            }
        } else {
            for (std::size_t s = 0; s < n; ++s) cur.push_back(pool.a_half(2 * j - 2, s));
            apply_masked_h(reg, cur, decode_h(pending_, "Q1"), cfg_.w.rounds[j - 2].x);
        }

        if (j == m + 1) return {final_step(cur)};

        const ProgramRound& round = cfg_.w.rounds[j - 1];
        apply_masked_t(reg, cur, decode_t(pending_, "Q2"), round.y);
        apply_masked_cz(reg, cur, decode_cz(pending_, "Q3"), round.z);
        Residues a(n), b(n);
        std::vector<std::array<double, 4>> probs;
        for (std::size_t s = 0; s < n; ++s) {
            const auto res = measure_bell(reg, cur[s], pool.a_half(2 * j - 1, s), chooser_.src());
            a[s] = static_cast<std::uint8_t>(res.a);
            b[s] = static_cast<std::uint8_t>(res.b);
            probs.push_back(res.branch_probs);
            apply_pauli(reg, pool.a_half(2 * j, s), res.a, res.b);
        }
        return {outcome_message(4 * j - 2, id(), {routing_.owner(j)}, a, b, std::move(probs))};
    }

    StepMessage final_step(const std::vector<QubitHandle>& cur) {
        const std::size_t m = cfg_.w.m();
        StepMessage msg{label(4 * m + 2), id(), {routing_.final_user()}, {}, {}, {}, false};
        if (cfg_.output == OutputMode::qubits) {
            msg.qubits.assign(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(cfg_.n_circ));
        } else {
            const std::vector<QubitHandle> out(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(cfg_.n_circ));
            const DensityMatrix rho = world_.reg.density_on(out);
            world_.final_x_dist.resize(rho.dim());
            for (std::size_t i = 0; i < rho.dim(); ++i) world_.final_x_dist[i] = rho(i, i).real();
            Residues x(cfg_.n_circ);
            for (std::size_t s = 0; s < cfg_.n_circ; ++s) {
                x[s] = static_cast<std::uint8_t>(measure_z(world_.reg, cur[s], chooser_.src()).bit);
            }
            msg.fields.push_back(bits_field("X", x));
        }
        return msg;
    }

    const RunConfig& cfg_;
    World& world_;
    Routing routing_;
    OutcomeChooser chooser_;
    StepMessage pending_;
    std::size_t j_ = 1;
};

class ServerB final : public PartyNode {
  public:
    ServerB(const RunConfig& cfg, World& world, Routing routing)
        : cfg_(cfg), world_(world), routing_(routing), chooser_(cfg, "serverB") {}

    PartyId id() const override { return PartyId::server_b(); }

    std::vector<StepMessage> on_message(const StepMessage& msg) override {
        auto& reg = world_.reg;
        auto& pool = world_.pool;
        const std::size_t n = cfg_.w.n;
        const std::size_t m = cfg_.w.m();
        const std::size_t j = j_++;
        if (j > m || parse_step(msg.step) != 4 * j - 1) {
            throw std::logic_error("server B received unexpected step " + msg.step);
        }
        const ProgramRound& round = cfg_.w.rounds[j - 1];
        std::vector<QubitHandle> cur;
        for (std::size_t s = 0; s < n; ++s) cur.push_back(pool.b_half(2 * j - 1, s));
        apply_masked_t(reg, cur, decode_t(msg, "Q2'"), round.y);
        apply_masked_cz(reg, cur, decode_cz(msg, "Q3'"), round.z);
        apply_masked_h(reg, cur, decode_h(msg, "Q1'"), round.x);
        Residues a(n), b(n);
        std::vector<std::array<double, 4>> probs;
        for (std::size_t s = 0; s < n; ++s) {
            const auto res = measure_bell(reg, cur[s], pool.b_half(2 * j, s), chooser_.src());
            a[s] = static_cast<std::uint8_t>(res.a);
            b[s] = static_cast<std::uint8_t>(res.b);
            probs.push_back(res.branch_probs);
            if (2 * j + 1 <= 2 * m) apply_pauli(reg, pool.b_half(2 * j + 1, s), res.a, res.b);
        }
        return {outcome_message(4 * j, id(), routing_.after_b(j), a, b, std::move(probs))};
    }

  private:
    const RunConfig& cfg_;
    World& world_;
    Routing routing_;
    OutcomeChooser chooser_;
    std::size_t j_ = 1;
};

void validate(const RunConfig& cfg) {
    cfg.w.validate();
    const std::size_t n = cfg.w.n;
    if (cfg.coeff.size() != cfg.w.m()) throw std::invalid_argument("coefficient rounds must match program rounds");
    for (const auto& r : cfg.coeff) r.validate(n);
    if (cfg.n_circ < 1 || cfg.n_circ > n) throw std::invalid_argument("n_circ must lie in 1..n");
    if (cfg.input == InputMode::qubits && cfg.psi.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("input state must have 2^n amplitudes");
    }
    if (cfg.input == InputMode::basis_bits) {
        if (cfg.basis.size() != n) throw std::invalid_argument("basis input must have n bits");
        for (const int v : cfg.basis) {
            if (v != 0 && v != 1) throw std::invalid_argument("basis input entries must be 0 or 1");
        }
    }
}

}  // namespace

UpdateIndices second_query_indices(const UserRecord& rec, std::size_t j, std::size_t n) {
    const Residues zero(n, 0);
    const Residues& a_odd = recorded(rec.a, 2 * j - 1, "A");
    const Residues& a_prev = j == 1 ? zero : recorded(rec.a, 2 * j - 2, "A");
    return {xor_of({&a_odd, &a_prev}, n), xor_of({&rec.a0, &a_odd}, n)};
}

UpdateIndices h_query_indices(const UserRecord& rec, std::size_t j, std::size_t n) {
    const Residues& a_even = recorded(rec.a, 2 * j, "A");
    const Residues& b_even = recorded(rec.b, 2 * j, "B");
    const Residues& a_odd = recorded(rec.a, 2 * j - 1, "A");
    const Residues& b_odd = recorded(rec.b, 2 * j - 1, "B");
    return {xor_of({&a_even, &b_even, &a_odd, &b_odd}, n), xor_of({&rec.a0, &rec.b0, &a_even, &b_even}, n)};
}

RunOutcome run_two_server(const RunConfig& cfg) {
    validate(cfg);
    const std::size_t m = cfg.w.m();
    World world(cfg);
    Routing routing(cfg);

    std::vector<std::unique_ptr<User>> users;
    const std::size_t user_count = cfg.multi_user ? m + 1 : 1;
    for (std::size_t j = 1; j <= user_count; ++j) {
        users.push_back(std::make_unique<User>(static_cast<int>(j), cfg, world, routing));
    }
    ServerA server_a(cfg, world, routing);
    ServerB server_b(cfg, world, routing);

    ChannelRegistry channels;
    for (const auto& u : users) {
        channels.connect(u->id(), server_a.id());
        channels.connect(u->id(), server_b.id());
    }
    Network net(std::move(channels));
    for (auto& u : users) net.add(*u);
    net.add(server_a);
    net.add(server_b);
    net.run();

    RunOutcome out;
    out.transcript = net.transcript();
    out.ledger = net.ledger();
    out.peak_live = world.reg.peak_live();
    out.bell_pairs = world.pool.created();
    User& fin = *users.back();
    out.state = fin.state;
    out.bits = fin.bits;
    out.conditional = fin.conditional;
    if (cfg.output == OutputMode::qubits && !out.state) throw std::logic_error("run ended without an output state");
    if (cfg.output == OutputMode::bits && out.bits.size() != cfg.n_circ) {
        throw std::logic_error("run ended without output bits");
    }
    for (auto& u : users) out.users.push_back(u->rec);
    return out;
}

std::size_t bits_to_index(std::span<const std::uint8_t> bits) {
    std::size_t idx = 0;
    for (const auto b : bits) idx = (idx << 1) | (b & 1U);
    return idx;
}

}  // namespace obliq
