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

#include "obliq/tgdmqc.hpp"

#include <stdexcept>

namespace obliq {

TgdmqcResult run_tgdmqc(const Program& w, const std::vector<ProgramRound>& user_rounds, std::size_t n_circ,
                        const TgdmqcOptions& opts) {
    RunConfig cfg;
    cfg.w = w;
    cfg.coeff = user_rounds;
    cfg.n_circ = n_circ;
    cfg.input = InputMode::zero;
    cfg.output = OutputMode::bits;
    cfg.multi_user = true;
    cfg.random_masks = false;
    cfg.eager_bell = opts.eager_bell;
    cfg.seed = opts.seed;
    cfg.outcomes = opts.outcomes;
    RunOutcome run = run_two_server(cfg);

    TgdmqcResult r;
    r.bits = std::move(run.bits);
    r.conditional = std::move(run.conditional);
    r.transcript = std::move(run.transcript);
    r.ledger = run.ledger;
    r.peak_live = run.peak_live;
    r.users = std::move(run.users);
    auto& meta = r.transcript.meta();
    meta["protocol"] = "tgdmqc";
    meta["n"] = std::to_string(w.n);
    meta["m"] = std::to_string(w.m());
    meta["n_circ"] = std::to_string(n_circ);
    meta["seed"] = std::to_string(opts.seed);
    return r;
}

std::vector<double> tgdmqc_distribution(const Program& w, const std::vector<ProgramRound>& user_rounds,
                                        std::size_t n_circ, std::uint64_t seed) {
    std::vector<double> dist(std::size_t{1} << n_circ, 0.0);
    for_each_branch([&](ScriptedOutcomes& src) {
        TgdmqcOptions opts;
        opts.seed = seed;
        opts.outcomes = &src;
        const auto r = run_tgdmqc(w, user_rounds, n_circ, opts);
        dist[bits_to_index(r.bits)] += src.weight();
    });
    return dist;
}

std::vector<double> tgdmqc_sampled_distribution(const Program& w, const std::vector<ProgramRound>& user_rounds,
                                                std::size_t n_circ, std::size_t runs, std::uint64_t seed) {
    if (runs == 0) throw std::invalid_argument("runs must be positive");
    std::vector<double> dist(std::size_t{1} << n_circ, 0.0);
    for (std::size_t i = 0; i < runs; ++i) {
        TgdmqcOptions opts;
        opts.seed = seed + i;
        dist[bits_to_index(run_tgdmqc(w, user_rounds, n_circ, opts).bits)] += 1.0;
    }
    for (auto& p : dist) p /= static_cast<double>(runs);
    return dist;
}

std::map<std::string, double> tgdmqc_received_distribution(const Program& w,
                                                           const std::vector<ProgramRound>& user_rounds,
                                                           std::size_t n_circ, std::uint64_t seed) {
    std::map<std::string, double> dist;
    for_each_branch([&](ScriptedOutcomes& src) {
        TgdmqcOptions opts;
        opts.seed = seed;
        opts.outcomes = &src;
        const auto r = run_tgdmqc(w, user_rounds, n_circ, opts);
        std::string key;
        for (const auto& rec : r.transcript.records()) {
            if (!rec.is_download() || !rec.message) continue;
            for (const char* name : {"A", "B"}) {
                if (const auto* f = rec.message->field(name)) {
                    for (const auto v : f->values) key += static_cast<char>('0' + v);
                }
            }
        }
        dist[key] += src.weight();
    });
    return dist;
}

ReducedInstance oqc_reduction(const Program& w1_prime, const Program& w2) {
    if (w1_prime.n != w2.n) throw std::invalid_argument("reduction halves must share n");
    w1_prime.validate();
    w2.validate();
    const Program e1 = identity_program(w1_prime.n, w1_prime.m());
    const Program e2 = identity_program(w2.n, w2.m());
    ReducedInstance out;
    out.w = concat_programs(e1, w2);
    out.user_rounds = concat_programs(w1_prime, e2).rounds;
    return out;
}

ParityRun run_parity(std::span<const int> inputs, std::uint64_t seed) {
    const Program wp = compile_parity(inputs);
    const Program e = identity_program(wp.n, wp.m());
    TgdmqcOptions opts;
    opts.seed = seed;
    const auto r = run_tgdmqc(e, wp.rounds, 1, opts);
    ParityRun out;
    out.parity = r.bits.at(0);
    out.probability = r.conditional.at(static_cast<std::size_t>(out.parity));
    return out;
}

}  // namespace obliq
