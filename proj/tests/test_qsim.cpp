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

#include <cmath>

#include "doctest.h"
#include "obliq/gates.hpp"
#include "obliq/qsim.hpp"
#include "support.hpp"

using namespace obliq;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<Complex> amps(const StateRegister& reg, std::span<const QubitHandle> order) {
    return reg.amplitudes_in(order);
}

}  // namespace

TEST_CASE("alloc_zero tensors fresh |0> qubits") {
    StateRegister reg;
    const auto q = reg.alloc_zero(2);
    CHECK(reg.dimension() == 4);
    const auto a = amps(reg, q);
    CHECK(std::abs(a[0] - Complex(1.0)) < 1e-15);
    CHECK(reg.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));

    StateRegister one;
    const auto h = one.alloc_zero(1);
    one.apply_1q(h[0], gate1(GateName::X));
    const auto g = one.alloc_zero(1);
    const std::vector<QubitHandle> order{h[0], g[0]};
    CHECK(std::abs(amps(one, order)[2] - Complex(1.0)) < 1e-15);  // |1>|0>

    StateRegister big;
    big.alloc_zero(9);
    CHECK(big.dimension() == 512);
}

TEST_CASE("capacity is enforced and named") {
    StateRegister reg(3);
    reg.alloc_zero(2);
    CHECK_THROWS_AS(reg.alloc_bell_pair(), CapacityExceeded);
    try {
        reg.alloc_zero(2);
    } catch (const CapacityExceeded& e) {
        CHECK(e.limit() == 3);
        CHECK(std::string(e.what()).find("limit is 3") != std::string::npos);
    }
    CHECK_THROWS(reg.alloc_zero(0));
}

TEST_CASE("Bell pair amplitudes and correlations") {
    StateRegister reg;
    const auto [a, b] = reg.alloc_bell_pair();
    const std::vector<QubitHandle> order{a, b};
    const auto v = amps(reg, order);
    CHECK(std::abs(v[0] - kInvSqrt2) < 1e-15);
    CHECK(std::abs(v[1]) < 1e-15);
    CHECK(std::abs(v[2]) < 1e-15);
    CHECK(std::abs(v[3] - kInvSqrt2) < 1e-15);

    const std::vector<QubitHandle> half{a};
    CHECK(trace_distance(reg.density_on(half), DensityMatrix::maximally_mixed(1)) < 1e-12);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        StateRegister r;
        const auto [x, y] = r.alloc_bell_pair();
        Rng rng(seed);
        const int bx = r.measure_z(x, rng).bit;
        const auto zy = r.measure_z(y, rng);
        CHECK(zy.bit == bx);
        CHECK(zy.prob == doctest::Approx(1.0));
    }
}

TEST_CASE("single-qubit gates") {
    StateRegister reg;
    const auto q = reg.alloc_zero(1);
    reg.apply_1q(q[0], gate1(GateName::X));
    CHECK(reg.probability_of_one(q[0]) == doctest::Approx(1.0));

    std::mt19937_64 eng(5);
    const auto psi = testing::random_state(1, eng);
    StateRegister r2;
    const auto h = r2.alloc_state(psi);
    for (int i = 0; i < 8; ++i) r2.apply_1q(h[0], gate1(GateName::T));
    const auto out = amps(r2, h);
    CHECK(std::abs(out[0] - psi[0]) < 1e-12);
    CHECK(std::abs(out[1] - psi[1]) < 1e-12);

    StateRegister r3;
    const auto z = r3.alloc_zero(1);
    r3.apply_1q(z[0], gate1(GateName::H, 2));
    const auto hh = amps(r3, z);
    CHECK(std::abs(hh[0]) < 1e-15);
    CHECK(std::abs(hh[1] - Complex(-1.0)) < 1e-15);  // H^2|0> = -|1> = Y|0>

    Gate1 bad;
    bad << 1, 1, 0, 1;
    CHECK_THROWS_AS(r3.apply_1q(z[0], bad), std::invalid_argument);
}

TEST_CASE("controlled-Z") {
    StateRegister reg;
    const auto q = reg.alloc_zero(2);
    reg.apply_1q(q[0], gate1(GateName::X));
    reg.apply_1q(q[1], gate1(GateName::X));
    reg.apply_cz(q[0], q[1], 0);
    CHECK(std::abs(amps(reg, q)[3] - Complex(1.0)) < 1e-15);
    reg.apply_cz(q[0], q[1], 1);
    CHECK(std::abs(amps(reg, q)[3] - Complex(-1.0)) < 1e-15);
    reg.apply_cz(q[0], q[1], 1);
    CHECK(std::abs(amps(reg, q)[3] - Complex(1.0)) < 1e-15);
    CHECK_THROWS(reg.apply_cz(q[0], q[0], 1));
}

TEST_CASE("Bell measurement branch probabilities") {
    {
        StateRegister reg;
        const auto [a, b] = reg.alloc_bell_pair();
        const auto extra = reg.alloc_zero(1);
        const auto p = reg.bell_probabilities(a, b);
        CHECK(p[0] == doctest::Approx(1.0));
        Rng rng(1);
        const auto res = reg.bell_measure(a, b, rng);
        CHECK(res.a == 0);
        CHECK(res.b == 0);
        CHECK(reg.live_count() == 1);
        CHECK(reg.is_live(extra[0]));
    }
    {
        StateRegister reg;
        const auto q = reg.alloc_zero(2);
        const auto p = reg.bell_probabilities(q[0], q[1]);
        CHECK(p[0] == doctest::Approx(0.5));
        CHECK(p[1] == doctest::Approx(0.5));
        CHECK(p[2] == doctest::Approx(0.0));
        CHECK(p[3] == doctest::Approx(0.0));
        CHECK_THROWS_AS(reg.bell_project(q[0], q[1], 1, 0), std::domain_error);
    }
}

TEST_CASE("teleportation property: 100 random states") {
    std::mt19937_64 eng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto psi = testing::random_state(1, eng);
        const auto ideal = DensityMatrix::pure(psi);
        for (int branch = 0; branch < 4; ++branch) {
            StateRegister reg;
            const auto in = reg.alloc_state(psi);
            const auto [a, b] = reg.alloc_bell_pair();
            const auto p = reg.bell_probabilities(in[0], a);
            for (const double x : p) CHECK(std::abs(x - 0.25) <= 1e-12);
            const int ba = branch >> 1, bb = branch & 1;
            reg.bell_project(in[0], a, ba, bb);
            // correction Z^b X^a
            if (ba) reg.apply_1q(b, gate1(GateName::X));
            if (bb) reg.apply_1q(b, gate1(GateName::Z));
            const std::vector<QubitHandle> out{b};
            CHECK(trace_distance(reg.density_on(out), ideal) <= 1e-10);
            CHECK(std::abs(reg.norm_squared() - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("Z measurement") {
    StateRegister reg;
    const auto q = reg.alloc_zero(2);
    reg.apply_1q(q[0], gate1(GateName::X));
    Rng rng(3);
    const auto r = reg.measure_z(q[0], rng);
    CHECK(r.bit == 1);
    CHECK(r.prob == doctest::Approx(1.0));
    CHECK_FALSE(reg.is_live(q[0]));
    reg.apply_1q(q[1], gate1(GateName::H));
    CHECK(reg.probability_of_one(q[1]) == doctest::Approx(0.5));
    CHECK(reg.project_z(q[1], 0) == doctest::Approx(0.5));
    CHECK(reg.live_count() == 0);
    CHECK(reg.norm_squared() == doctest::Approx(1.0));
}

TEST_CASE("handles are never reused") {
    StateRegister reg;
    const auto q = reg.alloc_zero(1);
    Rng rng(0);
    reg.measure_z(q[0], rng);
    const auto r = reg.alloc_zero(1);
    CHECK(r[0].id != q[0].id);
    CHECK_THROWS(reg.apply_1q(q[0], gate1(GateName::X)));
}

TEST_CASE("density_on and trace distance") {
    StateRegister reg;
    const auto q = reg.alloc_zero(2);
    reg.apply_1q(q[0], gate1(GateName::X));
    const auto full = reg.density_on(q);
    full.check_invariants();
    CHECK(std::abs(full(2, 2) - Complex(1.0)) < 1e-15);

    const std::vector<Complex> plus{kInvSqrt2, 0, 0, kInvSqrt2};
    const std::vector<Complex> flip{0, kInvSqrt2, kInvSqrt2, 0};
    StateRegister r1, r2;
    const auto h1 = r1.alloc_state(plus);
    const auto h2 = r2.alloc_state(flip);
    const std::vector<QubitHandle> f1{h1[0]}, f2{h2[0]};
    CHECK(trace_distance(r1.density_on(f1), r2.density_on(f2)) < 1e-12);
    CHECK_THROWS(reg.density_on(std::span<const QubitHandle>{}));

    const std::vector<Complex> zero{1, 0}, one{0, 1};
    const auto p0 = DensityMatrix::pure(zero), p1 = DensityMatrix::pure(one);
    CHECK(trace_distance(p0, p0) == doctest::Approx(0.0));
    CHECK(trace_distance(p0, p1) == doctest::Approx(1.0));
    CHECK(trace_distance(p0, DensityMatrix::maximally_mixed(1)) == doctest::Approx(0.5));
    CHECK(trace_distance(p1, p0) == doctest::Approx(trace_distance(p0, p1)));
    CHECK_THROWS(trace_distance(p0, DensityMatrix::maximally_mixed(2)));
}

TEST_CASE("norm is preserved over random gate sequences") {
    std::mt19937_64 eng(11);
    Rng rng(11);
    StateRegister reg;
    auto q = reg.alloc_state(testing::random_state(3, eng));
    for (int step = 0; step < 200; ++step) {
        const auto s = static_cast<std::size_t>(rng.residue(4)) % 3;
        switch (rng.residue(4)) {
            case 0: reg.apply_1q(q[s], gate1(GateName::H, rng.residue(8))); break;
            case 1: reg.apply_1q(q[s], gate1(GateName::T, rng.residue(8))); break;
            case 2: reg.apply_cz(q[s], q[(s + 1) % 3], 1); break;
            default: reg.apply_1q(q[s], gate1(GateName::X)); break;
        }
        REQUIRE(std::abs(reg.norm_squared() - 1.0) <= 1e-12);
    }
}

TEST_CASE("capacity override from the environment") {
    setenv("OBLIQ_MAX_QUBITS", "5", 1);
    CHECK(default_max_qubits() == 5);
    setenv("OBLIQ_MAX_QUBITS", "junk", 1);
    CHECK(default_max_qubits() == kDefaultMaxQubits);
    unsetenv("OBLIQ_MAX_QUBITS");
    CHECK(default_max_qubits() == kDefaultMaxQubits);
}
