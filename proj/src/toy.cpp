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

#include "obliq/toy.hpp"

#include <cmath>
#include <stdexcept>

#include "obliq/gates.hpp"

namespace obliq {

namespace {

struct ToyWorld {
    StateRegister reg{8};
    std::pair<QubitHandle, QubitHandle> phi = reg.alloc_bell_pair();
};

class ToyUser final : public PartyNode {
  public:
    ToyUser(std::span<const Complex> psi, const ToyOptions& opts, ToyWorld& world)
        : psi_(psi.begin(), psi.end()), world_(world), rng_(Rng::for_party(opts.seed, "user1")) {
        if (opts.masks) {
            a0 = opts.masks->first & 1;
            b0 = opts.masks->second & 1;
        } else {
            a0 = rng_.bit();
            b0 = rng_.bit();
        }
    }

    PartyId id() const override { return PartyId::user(1); }

    std::vector<StepMessage> start() override {
        q = fresh_t(1, rng_);
        StepMessage msg{"1", id(), {PartyId::server_a()}, {}, {}, {}, false};
        msg.qubits = world_.reg.alloc_state(psi_);
        if (a0) world_.reg.apply_1q(msg.qubits[0], gate1(GateName::X));
        if (b0) world_.reg.apply_1q(msg.qubits[0], gate1(GateName::Z));
        encode(msg.fields, "Q", q);
        return {msg};
    }

    std::vector<StepMessage> on_message(const StepMessage& msg) override {
        if (msg.step == "2") {
            a1 = msg.require_field("A").values.at(0);
            b1 = msg.require_field("B").values.at(0);
            q_prime = toy_second_query(q, a0, a1);
            StepMessage out{"3", id(), {PartyId::server_b()}, {}, {}, {}, false};
            encode(out.fields, "Q'", q_prime);
            return {out};
        }
        if (msg.step == "4") {
            const QubitHandle h = msg.qubits.at(0);
            if ((a0 ^ a1) & 1) world_.reg.apply_1q(h, gate1(GateName::X));
            if ((b0 ^ b1) & 1) world_.reg.apply_1q(h, gate1(GateName::Z));
            const std::vector<QubitHandle> one{h};
            state = world_.reg.density_on(one);
            return {StepMessage{"5", id(), {}, {}, {}, {}, true}};
        }
        throw std::logic_error("toy user received unexpected step " + msg.step);
    }

    int a0 = 0, b0 = 0, a1 = 0, b1 = 0;
    TFamily q, q_prime;
    std::optional<DensityMatrix> state;

  private:
    std::vector<Complex> psi_;
    ToyWorld& world_;
    Rng rng_;
};

class ToyServerA final : public PartyNode {
  public:
    ToyServerA(int y, const ToyOptions& opts, ToyWorld& world)
        : y_(static_cast<std::uint8_t>(y)), world_(world), rng_(Rng::for_party(opts.seed, "serverA")),
          sampled_(rng_), src_(opts.outcomes ? opts.outcomes : &sampled_) {}

    PartyId id() const override { return PartyId::server_a(); }

    std::vector<StepMessage> on_message(const StepMessage& msg) override {
        const QubitHandle h = msg.qubits.at(0);
        const std::vector<QubitHandle> one{h};
        const std::uint8_t y[1] = {y_};
        apply_masked_t(world_.reg, one, decode_t(msg, "Q"), y);
        const auto res = measure_bell(world_.reg, h, world_.phi.first, *src_);
        StepMessage out{"2", id(), {PartyId::user(1)}, {}, {}, {res.branch_probs}, false};
        const Residues a{static_cast<std::uint8_t>(res.a)}, b{static_cast<std::uint8_t>(res.b)};
        out.fields.push_back(bits_field("A", a));
        out.fields.push_back(bits_field("B", b));
        return {out};
    }

  private:
    std::uint8_t y_;
    ToyWorld& world_;
    Rng rng_;
    SampledOutcomes sampled_;
    OutcomeSource* src_;
};

class ToyServerB final : public PartyNode {
  public:
    ToyServerB(int y, ToyWorld& world) : y_(static_cast<std::uint8_t>(y)), world_(world) {}

    PartyId id() const override { return PartyId::server_b(); }

    std::vector<StepMessage> on_message(const StepMessage& msg) override {
        const std::vector<QubitHandle> one{world_.phi.second};
        const std::uint8_t y[1] = {y_};
        apply_masked_t(world_.reg, one, decode_t(msg, "Q'"), y);
        StepMessage out{"4", id(), {PartyId::user(1)}, {}, {}, {}, false};
        out.qubits = one;
        return {out};
    }

  private:
    std::uint8_t y_;
    ToyWorld& world_;
};

}  // namespace

TFamily toy_second_query(const TFamily& q, int a0, int a1) {
    const std::uint8_t shift[1] = {static_cast<std::uint8_t>(a1 & 1)};
    const std::uint8_t dl[1] = {static_cast<std::uint8_t>((a0 ^ a1) & 1)};
    const std::uint8_t one[1] = {1};
    return update_t(q, shift, dl, one);
}

ToyResult run_toy(int y, std::span<const Complex> psi, const ToyOptions& opts) {
    if (y < 0 || y >= kTMod) throw std::invalid_argument("y must lie in 0..7");
    if (psi.size() != 2) throw std::invalid_argument("toy input must be a single-qubit state");
    ToyWorld world;
    ToyUser user(psi, opts, world);
    ToyServerA server_a(y, opts, world);
    ToyServerB server_b(y, world);

    ChannelRegistry channels;
    channels.connect(user.id(), server_a.id());
    channels.connect(user.id(), server_b.id());
    Network net(std::move(channels));
    net.add(user);
    net.add(server_a);
    net.add(server_b);
    net.run();

    ToyResult r{*user.state, net.transcript(), net.ledger(), user.a0, user.b0, user.a1, user.b1, user.q,
                user.q_prime};
    r.transcript.meta()["protocol"] = "toy";
    r.transcript.meta()["y"] = std::to_string(y);
    r.transcript.meta()["seed"] = std::to_string(opts.seed);
    return r;
}

}  // namespace obliq
