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

#include "obliq/audit.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "obliq/gates.hpp"

namespace obliq {

namespace {

using StepSizes = std::map<std::string, std::pair<std::uint64_t, std::uint64_t>>;  // step -> (bits, qubits)

ComplexityLedger sum_steps(const StepSizes& up, const StepSizes& down) {
    ComplexityLedger l;
    for (const auto& [step, size] : up) {
        l.upload_bits += size.first;
        l.upload_qubits += size.second;
    }
    for (const auto& [step, size] : down) {
        l.download_bits += size.first;
        l.download_qubits += size.second;
    }
    return l;
}

// Per-step sizes shared by both protocols; `first_*` and `last_*` differ.
void two_server_steps(std::size_t n, std::size_t m, StepSizes& up, StepSizes& down) {
    const std::uint64_t nn = n;
    const std::uint64_t full = 2 * nn * nn + 8 * nn;
    up["1"] = {2 * nn * nn + 4 * nn, 0};
    for (std::size_t j = 1; j <= m; ++j) {
        if (j >= 2) up[std::to_string(4 * j - 3)] = {full, 0};
        up[std::to_string(4 * j - 1)] = {full, 0};
        down[std::to_string(4 * j - 2)] = {2 * nn, 0};
        down[std::to_string(4 * j)] = {2 * nn, 0};
    }
    up[std::to_string(4 * m + 1)] = {4 * nn, 0};
}

void compare_steps(Verdict& v, const Transcript& t, const StepSizes& up, const StepSizes& down) {
    StepSizes seen_up, seen_down;
    for (const auto& r : t.records()) {
        if (r.is_upload()) {
            seen_up[r.step].first += r.bits;
            seen_up[r.step].second += r.qubits;
        } else if (r.is_download()) {
            seen_down[r.step].first += r.bits;
            seen_down[r.step].second += r.qubits;
        }
    }
    auto check = [&](const StepSizes& want, const StepSizes& got, const char* dir) {
        for (const auto& [step, size] : want) {
            auto it = got.find(step);
            const std::pair<std::uint64_t, std::uint64_t> have = it == got.end() ? std::pair<std::uint64_t, std::uint64_t>{0, 0} : it->second;
            if (have != size) {
                std::ostringstream os;
                os << "step " << step << " " << dir << ": expected " << size.first << " bits " << size.second
                   << " qubits, recorded " << have.first << " bits " << have.second << " qubits";
                v.fail(os.str());
            }
        }
        for (const auto& [step, size] : got) {
            if (!want.count(step)) v.fail(std::string("step ") + step + " " + dir + ": unexpected message");
        }
    };
    check(up, seen_up, "upload");
    check(down, seen_down, "download");
}

void compare_totals(Verdict& v, const ComplexityLedger& got, const ComplexityLedger& want) {
    auto one = [&](const char* what, std::uint64_t g, std::uint64_t w) {
        if (g != w) {
            v.fail(std::string(what) + ": expected " + std::to_string(w) + ", recorded " + std::to_string(g));
        }
    };
    one("upload_bits", got.upload_bits, want.upload_bits);
    one("upload_qubits", got.upload_qubits, want.upload_qubits);
    one("download_bits", got.download_bits, want.download_bits);
    one("download_qubits", got.download_qubits, want.download_qubits);
}

void toqc_steps(std::size_t n, std::size_t m, std::size_t n_circ, ToqcMode mode, StepSizes& up, StepSizes& down) {
    two_server_steps(n, m, up, down);
    const std::string last = std::to_string(4 * m + 2);
    if (mode == ToqcMode::quantum_output) {
        up["1"].second = n;
        down[last] = {0, n_circ};
    } else {
        up["1"].first += n;  // masked basis string replaces the masked qubits
        down[last] = {n_circ, 0};
    }
}

void tgdmqc_steps(std::size_t n, std::size_t m, std::size_t n_circ, StepSizes& up, StepSizes& down) {
    two_server_steps(n, m, up, down);
    down[std::to_string(4 * m + 2)] = {n_circ, 0};
}

}  // namespace

ComplexityLedger expected_toqc_ledger(std::size_t n, std::size_t m, std::size_t n_circ, ToqcMode mode) {
    const std::uint64_t nn = n, mm = m;
    ComplexityLedger l;
    l.upload_bits = (4 * nn * nn + 16 * nn) * mm;
    l.download_bits = 4 * nn * mm;
    if (mode == ToqcMode::quantum_output) {
        l.upload_qubits = nn;
        l.download_qubits = n_circ;
    } else {
        l.upload_bits += nn;
        l.download_bits += n_circ;
    }
    return l;
}

ComplexityLedger expected_tgdmqc_ledger(std::size_t n, std::size_t m, std::size_t n_circ) {
    const std::uint64_t nn = n, mm = m;
    ComplexityLedger l;
    l.upload_bits = (4 * nn * nn + 16 * nn) * mm;
    l.download_bits = 4 * nn * mm + n_circ;
    return l;
}

Verdict assert_complexity_toqc(const ComplexityLedger& ledger, std::size_t n, std::size_t m, std::size_t n_circ,
                               const Transcript* transcript, ToqcMode mode) {
    Verdict v;
    v.name = "complexity_toqc";
    StepSizes up, down;
    toqc_steps(n, m, n_circ, mode, up, down);
    if (!(sum_steps(up, down) == expected_toqc_ledger(n, m, n_circ, mode))) {
        throw std::logic_error("per-step accounting disagrees with the closed form");
    }
    compare_totals(v, ledger, expected_toqc_ledger(n, m, n_circ, mode));
    if (transcript) compare_steps(v, *transcript, up, down);
    return v;
}

Verdict assert_complexity_tgdmqc(const ComplexityLedger& ledger, std::size_t n, std::size_t m, std::size_t n_circ,
                                 const Transcript* transcript) {
    Verdict v;
    v.name = "complexity_tgdmqc";
    StepSizes up, down;
    tgdmqc_steps(n, m, n_circ, up, down);
    if (!(sum_steps(up, down) == expected_tgdmqc_ledger(n, m, n_circ))) {
        throw std::logic_error("per-step accounting disagrees with the closed form");
    }
    compare_totals(v, ledger, expected_tgdmqc_ledger(n, m, n_circ));
    if (transcript) {
        compare_steps(v, *transcript, up, down);
        for (const auto& r : transcript->records()) {
            if ((r.is_upload() || r.is_download()) && r.qubits != 0) {
                v.fail("step " + r.step + ": qubits on a user channel");
            }
        }
    }
    return v;
}

Verdict audit_ledger_consistency(const Transcript& t, const ComplexityLedger& ledger) {
    Verdict v;
    v.name = "ledger_consistency";
    if (!(ComplexityLedger::from(t) == ledger)) {
        v.fail("ledger " + to_string(ledger) + " differs from transcript sums " + to_string(ComplexityLedger::from(t)));
    }
    for (auto& e : t.consistency_errors()) v.fail(std::move(e));
    return v;
}

DensityMatrix mask_average(std::span<const Complex> psi, std::size_t n) {
    if (n > 6) throw std::invalid_argument("mask average enumerates 4^n masks; n must be at most 6");
    if (psi.size() != (std::size_t{1} << n)) throw std::invalid_argument("state size does not match n");
    const std::size_t masks = std::size_t{1} << (2 * n);
    const auto dim = static_cast<Eigen::Index>(psi.size());
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t mask = 0; mask < masks; ++mask) {
        StateRegister reg(n);
        const auto qs = reg.alloc_state(psi);
        for (std::size_t s = 0; s < n; ++s) {
            if ((mask >> s) & 1U) reg.apply_1q(qs[s], gate1(GateName::X));
            if ((mask >> (n + s)) & 1U) reg.apply_1q(qs[s], gate1(GateName::Z));
        }
        acc += reg.density_on(qs).matrix();
    }
    return DensityMatrix(acc / static_cast<double>(masks));
}

Verdict audit_mask_average(std::span<const Complex> psi, std::size_t n, double tol) {
    Verdict v;
    v.name = "mask_average";
    const double d = trace_distance(mask_average(psi, n), DensityMatrix::maximally_mixed(n));
    if (d > tol) v.fail("trace distance to the maximally mixed state is " + std::to_string(d));
    return v;
}

std::vector<CoordinateMarginal> query_marginals(const UserRecord& rec, const std::vector<ProgramRound>& coeff,
                                                std::size_t n) {
    std::vector<CoordinateMarginal> out;
    const auto pairs = pairs_of(n);
    auto tag = [&](const char* fam, std::size_t j, const std::string& rest) {
        return std::string(fam) + "[user=" + std::to_string(rec.index) + ",j=" + std::to_string(j) + "," + rest + "]";
    };

    for (const auto& [j, src] : rec.q2) {
        if (!rec.q2p.count(j)) continue;
        const UpdateIndices idx = second_query_indices(rec, j, n);
        const ProgramRound& c = coeff.at(j - 1);
        for (std::size_t s = 0; s < n; ++s) {
            for (int u = 0; u < 2; ++u) {
                CoordinateMarginal cm{tag("Q2'", j, "u=" + std::to_string(u) + ",s=" + std::to_string(s + 1)),
                                      std::vector<int>(kTMod, 0)};
                TFamily f = src;
                for (int q0 = 0; q0 < kTMod; ++q0) {
                    for (int q1 = 0; q1 < kTMod; ++q1) {
                        f.q[0][s] = static_cast<std::uint8_t>(q0);
                        f.q[1][s] = static_cast<std::uint8_t>(q1);
                        ++cm.counts[update_t(f, idx.shift, idx.delta, c.y).q[u][s]];
                    }
                }
                out.push_back(std::move(cm));
            }
        }
        const CzFamily& cz = rec.q3.at(j);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            for (int uv = 0; uv < 4; ++uv) {
                CoordinateMarginal cm{tag("Q3'", j,
                                          "uv=" + std::to_string(uv >> 1) + std::to_string(uv & 1) + ",pair=" +
                                              std::to_string(pairs[p].first + 1) + std::to_string(pairs[p].second + 1)),
                                      std::vector<int>(kZMod, 0)};
                CzFamily f = cz;
                for (int bits = 0; bits < 16; ++bits) {
                    for (int k = 0; k < 4; ++k) f.q[k][p] = static_cast<std::uint8_t>((bits >> k) & 1);
                    ++cm.counts[update_cz(f, n, idx.shift, idx.delta, c.z).q[uv][p]];
                }
                out.push_back(std::move(cm));
            }
        }
    }

    for (const auto& [j, src] : rec.q1p) {
        if (!rec.q1.count(j)) continue;
        const UpdateIndices idx = h_query_indices(rec, j, n);
        const ProgramRound& c = coeff.at(j - 1);
        for (std::size_t s = 0; s < n; ++s) {
            for (int u = 0; u < 2; ++u) {
                CoordinateMarginal cm{tag("Q1", j, "u=" + std::to_string(u) + ",s=" + std::to_string(s + 1)),
                                      std::vector<int>(kHMod, 0)};
                HFamily f = src;
                for (int q0 = 0; q0 < kHMod; ++q0) {
                    for (int q1 = 0; q1 < kHMod; ++q1) {
                        f.q[0][s] = static_cast<std::uint8_t>(q0);
                        f.q[1][s] = static_cast<std::uint8_t>(q1);
                        ++cm.counts[update_h(f, idx.shift, idx.delta, c.x).q[u][s]];
                    }
                }
                out.push_back(std::move(cm));
            }
        }
    }
    return out;
}

Verdict audit_query_uniformity(const std::vector<CoordinateMarginal>& first,
                               const std::vector<CoordinateMarginal>& second) {
    Verdict v;
    v.name = "query_uniformity";
    auto uniform = [&](const CoordinateMarginal& cm) {
        for (const int c : cm.counts) {
            if (c != cm.counts.front()) {
                v.fail(cm.label + ": marginal is not uniform");
                return;
            }
        }
    };
    if (first.empty()) v.fail("no query coordinates to audit");
    if (first.size() != second.size()) v.fail("settings expose different numbers of coordinates");
    for (const auto& cm : first) uniform(cm);
    for (const auto& cm : second) uniform(cm);
    for (std::size_t i = 0; i < std::min(first.size(), second.size()); ++i) {
        if (first[i].label != second[i].label || first[i].counts != second[i].counts) {
            v.fail(first[i].label + ": marginals differ between settings");
        }
    }
    return v;
}

Verdict audit_bell_uniformity(const Transcript& t, double tol) {
    Verdict v;
    v.name = "bell_uniformity";
    std::size_t seen = 0;
    for (const auto& r : t.records()) {
        for (std::size_t i = 0; i < r.branch_probs.size(); ++i) {
            ++seen;
            for (const double p : r.branch_probs[i]) {
                if (std::abs(p - 0.25) > tol) {
                    std::ostringstream os;
                    os << "step " << r.step << " pair " << i + 1 << ": branch probability " << p;
                    v.fail(os.str());
                    break;
                }
            }
        }
    }
    if (seen == 0) v.fail("transcript records no Bell measurements");
    return v;
}

std::string format_verdict(const Verdict& v) {
    std::ostringstream os;
    os << v.name << '=' << (v.pass ? "pass" : "fail");
    for (const auto& d : v.details) os << '\n' << v.name << ".detail=" << d;
    return os.str();
}

}  // namespace obliq
