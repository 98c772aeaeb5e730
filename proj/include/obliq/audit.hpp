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

#ifndef OBLIQ_AUDIT_HPP
#define OBLIQ_AUDIT_HPP

#include <span>
#include <string>
#include <vector>

#include "obliq/harness.hpp"
#include "obliq/protocol.hpp"
#include "obliq/qsim.hpp"
#include "obliq/toqc.hpp"

namespace obliq {

struct Verdict {
    bool pass = true;
    std::string name;
    std::vector<std::string> details;

    void fail(std::string why) {
        pass = false;
        details.push_back(std::move(why));
    }
};

ComplexityLedger expected_toqc_ledger(std::size_t n, std::size_t m, std::size_t n_circ,
                                      ToqcMode mode = ToqcMode::quantum_output);
ComplexityLedger expected_tgdmqc_ledger(std::size_t n, std::size_t m, std::size_t n_circ);

/// Exact comparison with the closed-form totals. With a transcript, per-step
/// sizes are checked too so a mismatch names the step.
Verdict assert_complexity_toqc(const ComplexityLedger& ledger, std::size_t n, std::size_t m, std::size_t n_circ,
                               const Transcript* transcript = nullptr, ToqcMode mode = ToqcMode::quantum_output);
Verdict assert_complexity_tgdmqc(const ComplexityLedger& ledger, std::size_t n, std::size_t m, std::size_t n_circ,
                                 const Transcript* transcript = nullptr);

/// Ledger equals the transcript's column sums and sizes match payloads.
Verdict audit_ledger_consistency(const Transcript& t, const ComplexityLedger& ledger);

/// Average of Z^B X^A psi over all 4^n masks, compared with I/2^n.
Verdict audit_mask_average(std::span<const Complex> psi, std::size_t n, double tol = 1e-12);
DensityMatrix mask_average(std::span<const Complex> psi, std::size_t n);

/// Marginal of one derived query coordinate when its source coordinates run
/// over their full range.
struct CoordinateMarginal {
    std::string label;  ///< e.g. "Q2'[j=1,u=0,s=1]"
    std::vector<int> counts;
};

/// Every primed coordinate a user derived (and every Q1 coordinate), with
/// everything else fixed at the recorded values.
std::vector<CoordinateMarginal> query_marginals(const UserRecord& rec, const std::vector<ProgramRound>& coeff,
                                                std::size_t n);

/// Marginals of two settings must be exactly uniform and identical.
Verdict audit_query_uniformity(const std::vector<CoordinateMarginal>& first,
                               const std::vector<CoordinateMarginal>& second);

Verdict audit_bell_uniformity(const Transcript& t, double tol = 1e-12);

std::string format_verdict(const Verdict& v);

}  // namespace obliq

#endif  // OBLIQ_AUDIT_HPP
