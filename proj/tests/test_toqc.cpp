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

#include "doctest.h"
#include "obliq/audit.hpp"
#include "obliq/oracle.hpp"
#include "obliq/toqc.hpp"
#include "support.hpp"

using namespace obliq;

TEST_CASE("matches the oracle on random programs and states") {
    Rng rng(3);
    std::mt19937_64 eng(3);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (std::size_t m = 1; m <= 3; ++m) {
            for (int t = 0; t < 4; ++t) {
                const Program w = random_program(n, m, rng);
                const auto psi = testing::random_state(n, eng);
                const std::size_t nc = 1 + static_cast<std::size_t>(t) % n;
                ToqcOptions o;
                o.seed = 100 * n + 10 * m + static_cast<std::uint64_t>(t);
                const auto r = run_toqc(w, psi, nc, o);
                REQUIRE(r.state);
                CHECK(trace_distance(*r.state, oracle::ideal_output(w, psi, nc)) <= 1e-10);
                r.state->check_invariants();
                CHECK(assert_complexity_toqc(r.ledger, n, m, nc, &r.transcript).pass);
                CHECK(r.transcript.consistency_errors().empty());
                CHECK(r.bell_pairs == 2 * m * n);
            }
        }
    }
}

TEST_CASE("every Bell branch and mask is correct for small sizes") {
    Rng rng(12);
    std::mt19937_64 eng(12);
    const std::pair<std::size_t, std::size_t> sizes[] = {{1, 1}, {1, 2}, {2, 1}};
    for (const auto& [n, m] : sizes) {
        const Program w = random_program(n, m, rng);
        const auto psi = testing::random_state(n, eng);
        const auto ideal = oracle::ideal_output(w, psi, n);
        for (std::size_t mask = 0; mask < (std::size_t{1} << (2 * n)); ++mask) {
            Residues a0(n), b0(n);
            for (std::size_t s = 0; s < n; ++s) {
                a0[s] = (mask >> s) & 1;
                b0[s] = (mask >> (n + s)) & 1;
            }
            std::size_t branches = 0;
            for_each_branch([&](ScriptedOutcomes& src) {
                ToqcOptions o;
                o.masks = std::make_pair(a0, b0);
                o.outcomes = &src;
                const auto r = run_toqc(w, psi, n, o);
                CHECK(trace_distance(*r.state, ideal) <= 1e-10);
                ++branches;
            });
            CHECK(branches == (std::size_t{1} << (4 * m * n)));
        }
    }
}

TEST_CASE("lazy and eager Bell pairs give the same run") {
    Rng rng(4);
    std::mt19937_64 eng(4);
    const Program w = random_program(2, 2, rng);
    const auto psi = testing::random_state(2, eng);
    ToqcOptions lazy;
    lazy.seed = 77;
    ToqcOptions eager = lazy;
    eager.eager_bell = true;
    const auto a = run_toqc(w, psi, 2, lazy);
    const auto b = run_toqc(w, psi, 2, eager);
    REQUIRE(a.transcript.size() == b.transcript.size());
    for (std::size_t i = 0; i < a.transcript.size(); ++i) {
        CHECK(a.transcript.records()[i].digest == b.transcript.records()[i].digest);
    }
    CHECK(trace_distance(*a.state, *b.state) <= 1e-12);
    CHECK(a.peak_live < b.peak_live);
    CHECK(b.peak_live == 2 + 2 * 2 * 2 * 2);
}

TEST_CASE("step schedule") {
    Rng rng(1);
    for (std::size_t m = 1; m <= 3; ++m) {
        const Program w = random_program(2, m, rng);
        const auto r = run_toqc(w, oracle::basis_state(std::vector<int>{0, 1}), 1);
        std::vector<std::string> want;
        for (std::size_t k = 1; k <= 4 * m + 3; ++k) want.push_back(std::to_string(k));
        CHECK(r.transcript.step_labels() == want);
        const auto& recs = r.transcript.records();
        for (std::size_t k = 1; k <= 4 * m + 2; ++k) {
            const auto& rec = recs[k - 1];
            const bool to_a = k % 4 == 1;
            const bool to_b = k % 4 == 3;
            if (to_a) CHECK(rec.receivers == "serverA");
            if (to_b) CHECK(rec.receivers == "serverB");
            if (!to_a && !to_b) CHECK(rec.receivers == "user1");
        }
        CHECK(recs.back().kind == "local");
    }
}

TEST_CASE("communication examples") {
    const Program w = zero_program(2, 1);
    const auto r = run_toqc(w, oracle::basis_state(std::vector<int>{0, 0}), 2);
    CHECK(r.ledger == ComplexityLedger{48, 2, 8, 2});
    CHECK(expected_toqc_ledger(2, 1, 2) == ComplexityLedger{48, 2, 8, 2});
    CHECK(expected_toqc_ledger(3, 2, 1) == ComplexityLedger{(4 * 9 + 48) * 2, 3, 24, 1});
    CHECK(expected_toqc_ledger(2, 1, 1, ToqcMode::classical_output) == ComplexityLedger{50, 0, 9, 0});
}

TEST_CASE("query update worked example") {
    // n = 1, A0 = A1 = 0: Q'_0 = 1 - Q_0, Q'_1 = -Q_1.
    const TFamily q{{Residues{5}, Residues{2}}};
    const Residues zero{0}, one{1};
    const auto p = update_t(q, zero, zero, one);
    CHECK(p.q[0][0] == 4);
    CHECK(p.q[1][0] == 6);
}

TEST_CASE("recorded queries follow the update rule") {
    Rng rng(9);
    for (std::size_t n = 1; n <= 3; ++n) {
        const std::size_t m = 2;
        const Program w = random_program(n, m, rng);
        ToqcOptions o;
        o.seed = n;
        const auto r = run_toqc(w, oracle::basis_state(std::vector<int>(n, 0)), 1, o);
        const Residues ones(n, 1), pair_ones(pair_count(n), 1);
        for (std::size_t j = 1; j <= m; ++j) {
            const auto idx = second_query_indices(r.user, j, n);
            CHECK(r.user.q2p.at(j) == update_t(r.user.q2.at(j), idx.shift, idx.delta, ones));
            CHECK(r.user.q3p.at(j) == update_cz(r.user.q3.at(j), n, idx.shift, idx.delta, pair_ones));
            const auto h = h_query_indices(r.user, j, n);
            CHECK(r.user.q1.at(j) == update_h(r.user.q1p.at(j), h.shift, h.delta, ones));
        }
    }
}

TEST_CASE("zero delta coefficients skip every gate") {
    Rng rng(6);
    std::mt19937_64 eng(6);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t % 2);
        RunConfig cfg;
        cfg.w = random_program(n, 2, rng);
        cfg.coeff = zero_program(n, 2).rounds;
        cfg.n_circ = n;
        cfg.psi = testing::random_state(n, eng);
        cfg.seed = static_cast<std::uint64_t>(t);
        const auto out = run_two_server(cfg);
        CHECK(trace_distance(*out.state, DensityMatrix::pure(cfg.psi)) <= 1e-10);
    }
}

TEST_CASE("classical output") {
    Rng rng(10);
    for (std::size_t n = 1; n <= 2; ++n) {
        const Program w = random_program(n, 1, rng);
        for (int b = 0; b < (1 << n); ++b) {
            std::vector<int> basis(n);
            for (std::size_t s = 0; s < n; ++s) basis[s] = (b >> (n - 1 - s)) & 1;
            const auto dist = toqc_classical_distribution(w, basis, n);
            const auto ideal = oracle::ideal_outcome_distribution(w, oracle::basis_state(basis), n);
            CHECK(oracle::total_variation(dist, ideal) <= 1e-10);
        }
    }
    const Program w = random_program(2, 2, rng);
    ToqcOptions o;
    o.mode = ToqcMode::classical_output;
    const auto psi = oracle::basis_state(std::vector<int>{1, 0});
    const auto r = run_toqc(w, psi, 2, o);
    CHECK_FALSE(r.state);
    CHECK(r.bits.size() == 2);
    CHECK(r.ledger.upload_qubits == 0);
    CHECK(r.ledger.download_qubits == 0);
    CHECK(assert_complexity_toqc(r.ledger, 2, 2, 2, &r.transcript, ToqcMode::classical_output).pass);
    CHECK(oracle::total_variation(r.conditional, oracle::ideal_outcome_distribution(w, psi, 2)) <= 1e-10);
}

TEST_CASE("classical output needs a basis input") {
    const std::vector<Complex> plus{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    ToqcOptions o;
    o.mode = ToqcMode::classical_output;
    CHECK_THROWS_AS(run_toqc(zero_program(1, 1), plus, 1, o), std::invalid_argument);
    CHECK(basis_bits_of(oracle::basis_state(std::vector<int>{1, 1, 0})) == std::vector<int>{1, 1, 0});
    CHECK_FALSE(basis_bits_of(plus));
}

TEST_CASE("argument validation") {
    const auto psi = oracle::basis_state(std::vector<int>{0, 0});
    CHECK_THROWS(run_toqc(zero_program(2, 1), psi, 3));
    CHECK_THROWS(run_toqc(zero_program(2, 1), psi, 0));
    CHECK_THROWS(run_toqc(zero_program(1, 1), psi, 1));
}

TEST_CASE("capacity limit is reported") {
    RunConfig cfg;
    cfg.w = zero_program(3, 1);
    cfg.coeff = identity_program(3, 1).rounds;
    cfg.psi = oracle::basis_state(std::vector<int>{0, 0, 0});
    cfg.eager_bell = true;
    cfg.max_qubits = 8;
    CHECK_THROWS_AS(run_two_server(cfg), CapacityExceeded);
}
