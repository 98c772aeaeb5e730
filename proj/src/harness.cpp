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

#include "obliq/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace obliq {

namespace {

std::string join_receivers(const std::vector<PartyId>& rs) {
    if (rs.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i) out += '+';
        out += to_string(rs[i]);
    }
    return out;
}

bool names_user(const std::string& s) { return s.rfind("user", 0) == 0; }
bool names_server(const std::string& s) { return s == "serverA" || s == "serverB"; }

bool all_parts(const std::string& joined, bool (*pred)(const std::string&)) {
    std::size_t start = 0;
    while (true) {
        const std::size_t plus = joined.find('+', start);
        if (!pred(joined.substr(start, plus - start))) return false;
        if (plus == std::string::npos) return true;
        start = plus + 1;
    }
}

}  // namespace

std::string to_string(PartyId p) {
    switch (p.kind) {
        case PartyKind::user: return "user" + std::to_string(p.index);
        case PartyKind::server_a: return "serverA";
        case PartyKind::server_b: return "serverB";
    }
    return "?";
}

PartyId parse_party(const std::string& s) {
    if (s == "serverA") return PartyId::server_a();
    if (s == "serverB") return PartyId::server_b();
    if (names_user(s) && s.size() > 4) {
        std::size_t used = 0;
        const int j = std::stoi(s.substr(4), &used);
        if (used == s.size() - 4 && j >= 1) return PartyId::user(j);
    }
    throw std::invalid_argument("unknown party name '" + s + "'");
}

// ---------------------------------------------------------------------------

std::uint64_t StepMessage::bit_size() const {
    std::uint64_t b = 0;
    for (const auto& f : fields) b += f.bits();
    return b;
}

std::string StepMessage::kind() const {
    if (local) return "local";
    const bool bits = !fields.empty();
    const bool qubits_present = !qubits.empty();
    if (bits && qubits_present) return "mixed";
    if (qubits_present) return "quantum";
    return "classical";
}

const ResidueVector* StepMessage::field(const std::string& name) const {
    for (const auto& f : fields) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

const ResidueVector& StepMessage::require_field(const std::string& name) const {
    if (const auto* f = field(name)) return *f;
    throw std::invalid_argument("message for step " + step + " lacks field " + name);
}

std::uint64_t payload_digest(const StepMessage& msg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(msg.fields.size());
    for (const auto& f : msg.fields) {
        mix(static_cast<std::uint64_t>(f.width));
        mix(f.values.size());
        for (const auto v : f.values) mix(v);
    }
    mix(msg.qubits.size());
    return h;
}

// ---------------------------------------------------------------------------

bool TranscriptRecord::is_upload() const {
    return kind != "local" && names_user(sender) && all_parts(receivers, names_server);
}

bool TranscriptRecord::is_download() const {
    return kind != "local" && names_server(sender) && all_parts(receivers, names_user);
}

void Transcript::append(const StepMessage& msg) {
    TranscriptRecord rec;
    rec.seq = records_.empty() ? 1 : records_.back().seq + 1;
    rec.step = msg.step;
    rec.sender = to_string(msg.sender);
    rec.receivers = join_receivers(msg.receivers);
    rec.kind = msg.kind();
    rec.bits = msg.bit_size();
    rec.qubits = msg.qubit_size();
    rec.digest = payload_digest(msg);
    rec.branch_probs = msg.branch_probs;
    rec.message = msg;
    records_.push_back(std::move(rec));
}

void Transcript::append(TranscriptRecord rec) { records_.push_back(std::move(rec)); }

std::vector<std::string> Transcript::step_labels() const {
    std::vector<std::string> out;
    for (const auto& r : records_) out.push_back(r.step);
    return out;
}

std::vector<std::string> Transcript::consistency_errors() const {
    std::vector<std::string> errs;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (i > 0 && r.seq <= records_[i - 1].seq) {
            errs.push_back("record " + std::to_string(r.seq) + ": sequence number not increasing");
        }
        if (r.message) {
            if (r.bits != r.message->bit_size() || r.qubits != r.message->qubit_size()) {
                errs.push_back("record " + std::to_string(r.seq) + " (step " + r.step +
                               "): declared size differs from payload");
            }
            if (r.digest != payload_digest(*r.message)) {
                errs.push_back("record " + std::to_string(r.seq) + ": digest differs from payload");
            }
        }
    }
    return errs;
}

void Transcript::write(std::ostream& out) const {
    out << "# obliq-transcript v1\n";
    for (const auto& [k, v] : meta_) out << "# " << k << '=' << v << '\n';
    char buf[64];
    for (const auto& r : records_) {
        std::snprintf(buf, sizeof buf, "%016" PRIx64, r.digest);
        out << r.seq << ' ' << r.step << ' ' << r.sender << ' ' << r.receivers << ' ' << r.kind << ' ' << r.bits
            << ' ' << r.qubits << ' ' << buf << '\n';
        for (std::size_t i = 0; i < r.branch_probs.size(); ++i) {
            out << "@bell " << r.seq << ' ' << i;
            for (const double p : r.branch_probs[i]) {
                std::snprintf(buf, sizeof buf, " %.17g", p);
                out << buf;
            }
            out << '\n';
        }
    }
}

Transcript Transcript::read(std::istream& in) {
    Transcript t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos && line.size() > 2) {
                t.meta_[line.substr(2, eq - 2)] = line.substr(eq + 1);
            }
            continue;
        }
        std::istringstream ls(line);
        if (line[0] == '@') {
            std::string tag;
            std::uint64_t seq = 0;
            std::size_t idx = 0;
            std::array<double, 4> p{};
            if (!(ls >> tag >> seq >> idx >> p[0] >> p[1] >> p[2] >> p[3]) || tag != "@bell") {
                throw std::invalid_argument("transcript line " + std::to_string(lineno) + ": bad annotation");
            }
            if (t.records_.empty() || t.records_.back().seq != seq) {
                throw std::invalid_argument("transcript line " + std::to_string(lineno) +
                                            ": annotation does not follow its record");
            }
            t.records_.back().branch_probs.push_back(p);
            continue;
        }
        TranscriptRecord r;
        std::string digest;
        if (!(ls >> r.seq >> r.step >> r.sender >> r.receivers >> r.kind >> r.bits >> r.qubits >> digest)) {
            throw std::invalid_argument("transcript line " + std::to_string(lineno) + ": malformed record");
        }
        r.digest = std::stoull(digest, nullptr, 16);
        t.records_.push_back(std::move(r));
    }
    return t;
}

void Transcript::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write transcript '" + path + "'");
    write(out);
}

Transcript Transcript::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open transcript '" + path + "'");
    return read(in);
}

void ComplexityLedger::add(const TranscriptRecord& rec) {
    if (rec.is_upload()) {
        upload_bits += rec.bits;
        upload_qubits += rec.qubits;
    } else if (rec.is_download()) {
        download_bits += rec.bits;
        download_qubits += rec.qubits;
    }
}

ComplexityLedger ComplexityLedger::from(const Transcript& t) {
    ComplexityLedger l;
    for (const auto& r : t.records()) l.add(r);
    return l;
}

std::string to_string(const ComplexityLedger& l) {
    std::ostringstream os;
    os << "upload_bits=" << l.upload_bits << " upload_qubits=" << l.upload_qubits
       << " download_bits=" << l.download_bits << " download_qubits=" << l.download_qubits;
    return os.str();
}

// ---------------------------------------------------------------------------

void ChannelRegistry::connect(PartyId a, PartyId b) {
    if (a.is_server() && b.is_server()) {
        throw ForbiddenChannel("servers A and B may not share a channel");
    }
    if (a == b) throw std::invalid_argument("channel endpoints must differ");
    if (!connected(a, b)) edges_.emplace_back(a, b);
}

bool ChannelRegistry::connected(PartyId a, PartyId b) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const auto& e) {
        return (e.first == a && e.second == b) || (e.first == b && e.second == a);
    });
}

bool ChannelRegistry::has_server_link() const {
    return std::any_of(edges_.begin(), edges_.end(),
                       [](const auto& e) { return e.first.is_server() && e.second.is_server(); });
}

Network::Network(ChannelRegistry channels) : channels_(std::move(channels)) {}

void Network::add(PartyNode& party) { parties_.push_back(&party); }

PartyNode& Network::party(PartyId id) {
    for (auto* p : parties_) {
        if (p->id() == id) return *p;
    }
    throw std::invalid_argument("no party registered as " + to_string(id));
}

void Network::post(StepMessage msg) {
    if (!msg.local) {
        if (msg.receivers.empty()) throw std::invalid_argument("step " + msg.step + ": message has no receiver");
        for (const auto& r : msg.receivers) {
            if (!channels_.connected(msg.sender, r)) {
                throw ForbiddenChannel("step " + msg.step + ": no channel from " + to_string(msg.sender) + " to " +
                                       to_string(r));
            }
        }
    }
    transcript_.append(msg);
    ledger_.add(transcript_.records().back());
    if (!msg.local) queue_.push_back(std::move(msg));
}

void Network::run() {
    for (auto* p : parties_) {
        for (auto& m : p->start()) post(std::move(m));
    }
    while (!queue_.empty()) {
        StepMessage msg = std::move(queue_.front());
        queue_.pop_front();
        for (const auto& r : msg.receivers) {
            for (auto& out : party(r).on_message(msg)) post(std::move(out));
        }
    }
}

// ---------------------------------------------------------------------------

int SampledOutcomes::choose(std::span<const double> probs) {
    const double u = rng_->unit();
    double acc = 0.0;
    int last = -1;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        last = static_cast<int>(k);
        acc += probs[k];
        if (u < acc) return last;
    }
    if (last < 0) throw std::logic_error("all outcome probabilities are zero");
    return last;
}

int ScriptedOutcomes::choose(std::span<const double> probs) {
    if (pos_ >= script_.size()) script_.push_back(0);
    if (arity_.size() <= pos_) arity_.resize(pos_ + 1);
    arity_[pos_] = static_cast<int>(probs.size());
    const int c = script_[pos_];
    ++pos_;
    if (c < 0 || static_cast<std::size_t>(c) >= probs.size()) throw std::out_of_range("scripted outcome out of range");
    if (probs[static_cast<std::size_t>(c)] <= 1e-12) throw ImpossibleBranch();
    weight_ *= probs[static_cast<std::size_t>(c)];
    return c;
}

std::optional<std::vector<int>> ScriptedOutcomes::next_script() const {
    for (std::size_t i = pos_; i-- > 0;) {
        if (script_[i] + 1 < arity_[i]) {
            std::vector<int> next(script_.begin(), script_.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            ++next.back();
            return next;
        }
    }
    return std::nullopt;
}

void for_each_branch(const std::function<void(ScriptedOutcomes&)>& body) {
    std::vector<int> script;
    while (true) {
        ScriptedOutcomes src(script);
        try {
            body(src);
        } catch (const ImpossibleBranch&) {
        }
        auto next = src.next_script();
        if (!next) return;
        script = std::move(*next);
    }
}

StateRegister::BellResult measure_bell(StateRegister& reg, QubitHandle q1, QubitHandle q2, OutcomeSource& src) {
    StateRegister::BellResult res;
    res.branch_probs = reg.bell_probabilities(q1, q2);
    const int pick = src.choose(res.branch_probs);
    res.a = pick >> 1;
    res.b = pick & 1;
    reg.bell_project(q1, q2, res.a, res.b);
    return res;
}

StateRegister::ZResult measure_z(StateRegister& reg, QubitHandle q, OutcomeSource& src) {
    const double p1 = reg.probability_of_one(q);
    const std::array<double, 2> probs{1.0 - p1, p1};
    const int bit = src.choose(probs);
    return StateRegister::ZResult{bit, reg.project_z(q, bit)};
}

// ---------------------------------------------------------------------------

EntanglementPool::EntanglementPool(StateRegister& reg, std::size_t rounds, std::size_t n, bool eager)
    : reg_(&reg), rounds_(rounds), n_(n) {
    if (eager) {
        for (std::size_t k = 1; k <= rounds_; ++k) {
            for (std::size_t s = 0; s < n_; ++s) get(k, s);
        }
    }
}

std::pair<QubitHandle, QubitHandle>& EntanglementPool::get(std::size_t k, std::size_t s) {
    if (k < 1 || k > rounds_ || s >= n_) {
        throw std::out_of_range("entanglement pool has no pair (" + std::to_string(k) + ", " + std::to_string(s) + ")");
    }
    auto it = pairs_.find({k, s});
    if (it == pairs_.end()) it = pairs_.emplace(std::make_pair(k, s), reg_->alloc_bell_pair()).first;
    return it->second;
}

QubitHandle EntanglementPool::a_half(std::size_t k, std::size_t s) { return get(k, s).first; }
QubitHandle EntanglementPool::b_half(std::size_t k, std::size_t s) { return get(k, s).second; }

}  // namespace obliq
