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

#include "obliq/toqc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "obliq/oracle.hpp"

namespace obliq {

std::optional<std::vector<int>> basis_bits_of(std::span<const Complex> psi, double tol) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < psi.size()) ++n;
    if ((std::size_t{1} << n) != psi.size()) return std::nullopt;
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double p = std::norm(psi[i]);
        if (std::abs(p - 1.0) <= tol) {
            hit = i;
        } else if (p > tol) {
            return std::nullopt;
        }
    }
    if (!hit) return std::nullopt;
    std::vector<int> bits(n);
    for (std::size_t s = 0; s < n; ++s) bits[s] = static_cast<int>((*hit >> (n - 1 - s)) & 1U);
    return bits;
}

namespace {

RunConfig base_config(const Program& w, std::size_t n_circ, const ToqcOptions& opts) {
    RunConfig cfg;
    cfg.w = w;
    cfg.coeff.assign(w.m(), identity_round(w.n));
    cfg.n_circ = n_circ;
    cfg.seed = opts.seed;
    cfg.eager_bell = opts.eager_bell;
    cfg.outcomes = opts.outcomes;
    cfg.forced_masks = opts.masks;
    cfg.random_masks = true;
    cfg.multi_user = false;
    return cfg;
}

}  // namespace

ToqcResult run_toqc(const Program& w, std::span<const Complex> psi, std::size_t n_circ, const ToqcOptions& opts) {
    RunConfig cfg = base_config(w, n_circ, opts);
    if (opts.mode == ToqcMode::classical_output) {
        const auto basis = basis_bits_of(psi);
        if (!basis) throw std::invalid_argument("classical-output mode requires a computational basis input");
        cfg.input = InputMode::basis_bits;
        cfg.basis = *basis;
        cfg.output = OutputMode::bits;
    } else {
        cfg.input = InputMode::qubits;
        cfg.psi.assign(psi.begin(), psi.end());
        cfg.output = OutputMode::qubits;
    }
    RunOutcome run = run_two_server(cfg);
    ToqcResult r;
    r.state = std::move(run.state);
    r.bits = std::move(run.bits);
    r.conditional = std::move(run.conditional);
    r.transcript = std::move(run.transcript);
    r.ledger = run.ledger;
    r.peak_live = run.peak_live;
    r.bell_pairs = run.bell_pairs;
    r.user = std::move(run.users.front());
    auto& meta = r.transcript.meta();
    meta["protocol"] = "toqc";
    meta["mode"] = opts.mode == ToqcMode::quantum_output ? "quantum" : "classical";
    meta["n"] = std::to_string(w.n);
    meta["m"] = std::to_string(w.m());
    meta["n_circ"] = std::to_string(n_circ);
    meta["seed"] = std::to_string(opts.seed);
    return r;
}

std::vector<double> toqc_classical_distribution(const Program& w, std::span<const int> basis, std::size_t n_circ,
                                                std::uint64_t seed) {
    const std::vector<Complex> psi = oracle::basis_state(basis);
    std::vector<double> dist(std::size_t{1} << n_circ, 0.0);
    for_each_branch([&](ScriptedOutcomes& src) {
        ToqcOptions opts;
        opts.seed = seed;
        opts.mode = ToqcMode::classical_output;
        opts.outcomes = &src;
        const ToqcResult r = run_toqc(w, psi, n_circ, opts);
        dist[bits_to_index(r.bits)] += src.weight();
    });
    return dist;
}

}  // namespace obliq
