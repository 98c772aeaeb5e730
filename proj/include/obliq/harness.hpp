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

#ifndef OBLIQ_HARNESS_HPP
#define OBLIQ_HARNESS_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "obliq/qsim.hpp"
#include "obliq/rng.hpp"

namespace obliq {

// ---------------------------------------------------------------------------
// Parties and messages

enum class PartyKind : std::uint8_t { user, server_a, server_b };

struct PartyId {
    PartyKind kind = PartyKind::user;
    int index = 0;  ///< 1-based for users, 0 for servers

    static PartyId user(int j) { return {PartyKind::user, j}; }
    static PartyId server_a() { return {PartyKind::server_a, 0}; }
    static PartyId server_b() { return {PartyKind::server_b, 0}; }
    bool is_server() const { return kind != PartyKind::user; }

    friend bool operator==(const PartyId&, const PartyId&) = default;
    friend auto operator<=>(const PartyId&, const PartyId&) = default;
};

std::string to_string(PartyId p);
PartyId parse_party(const std::string& s);

/// A vector of residues sent with a fixed per-entry width (1, 2 or 3 bits).
struct ResidueVector {
    std::string name;
    int width = 1;
    std::vector<std::uint8_t> values;

    std::uint64_t bits() const { return static_cast<std::uint64_t>(width) * values.size(); }
};

struct StepMessage {
    std::string step;
    PartyId sender;
    std::vector<PartyId> receivers;
    std::vector<ResidueVector> fields;
    std::vector<QubitHandle> qubits;
    /// Bell branch probabilities behind the outcomes carried here, one entry
    /// per measured pair. Audit data; not part of the wire size.
    std::vector<std::array<double, 4>> branch_probs;
    bool local = false;  ///< party-internal step, nothing crosses a channel

    std::uint64_t bit_size() const;
    std::uint64_t qubit_size() const { return qubits.size(); }
    std::string kind() const;
    const ResidueVector* field(const std::string& name) const;
    const ResidueVector& require_field(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Transcript and ledger

struct TranscriptRecord {
    std::uint64_t seq = 0;
    std::string step;
    std::string sender;
    std::string receivers;  ///< '+'-joined party names
    std::string kind;
    std::uint64_t bits = 0;
    std::uint64_t qubits = 0;
    std::uint64_t digest = 0;
    std::vector<std::array<double, 4>> branch_probs;
    /// In-memory only; absent for records read from a file.
    std::optional<StepMessage> message;

    bool is_upload() const;
    bool is_download() const;
};

/// Stable FNV-1a digest of the residue payload and the qubit count.
std::uint64_t payload_digest(const StepMessage& msg);

class Transcript {
  public:
    void append(const StepMessage& msg);
    void append(TranscriptRecord rec);

    const std::vector<TranscriptRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    std::vector<std::string> step_labels() const;

    /// Header key=value pairs written as "# key=value" lines.
    std::map<std::string, std::string>& meta() { return meta_; }
    const std::map<std::string, std::string>& meta() const { return meta_; }

    /// Empty when every record's sizes match its payload and seq is increasing.
    std::vector<std::string> consistency_errors() const;

    void write(std::ostream& out) const;
    static Transcript read(std::istream& in);
    void save(const std::string& path) const;
    static Transcript load(const std::string& path);

  private:
    std::vector<TranscriptRecord> records_;
    std::map<std::string, std::string> meta_;
};

struct ComplexityLedger {
    std::uint64_t upload_bits = 0;
    std::uint64_t upload_qubits = 0;
    std::uint64_t download_bits = 0;
    std::uint64_t download_qubits = 0;

    void add(const TranscriptRecord& rec);
    static ComplexityLedger from(const Transcript& t);
    friend bool operator==(const ComplexityLedger&, const ComplexityLedger&) = default;
};

std::string to_string(const ComplexityLedger& l);

// ---------------------------------------------------------------------------
// Channels and scheduling

class ForbiddenChannel : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Undirected channels between parties. A Server A <-> Server B edge cannot
/// be registered.
class ChannelRegistry {
  public:
    void connect(PartyId a, PartyId b);
    bool connected(PartyId a, PartyId b) const;
    bool has_server_link() const;
    const std::vector<std::pair<PartyId, PartyId>>& edges() const { return edges_; }

  private:
    std::vector<std::pair<PartyId, PartyId>> edges_;
};

/// A party as a passive state machine advanced by message delivery.
class PartyNode {
  public:
    virtual ~PartyNode() = default;
    virtual PartyId id() const = 0;
    virtual std::vector<StepMessage> start() { return {}; }
    virtual std::vector<StepMessage> on_message(const StepMessage& msg) = 0;
};

/// Single-threaded FIFO scheduler. Every sent message is checked against the
/// channel registry and appended to the transcript before delivery.
class Network {
  public:
    explicit Network(ChannelRegistry channels);

    void add(PartyNode& party);
    /// Starts parties in registration order and delivers until quiescent.
    void run();

    const Transcript& transcript() const { return transcript_; }
    Transcript& transcript() { return transcript_; }
    const ComplexityLedger& ledger() const { return ledger_; }
    const ChannelRegistry& channels() const { return channels_; }

  private:
    void post(StepMessage msg);
    PartyNode& party(PartyId id);

    ChannelRegistry channels_;
    std::vector<PartyNode*> parties_;
    std::deque<StepMessage> queue_;
    Transcript transcript_;
    ComplexityLedger ledger_;
};

// ---------------------------------------------------------------------------
// Measurement outcome selection

class ImpossibleBranch : public std::runtime_error {
  public:
    ImpossibleBranch() : std::runtime_error("forced outcome has zero probability") {}
};

/// Chooses measurement outcomes from exact probabilities.
class OutcomeSource {
  public:
    virtual ~OutcomeSource() = default;
    /// Index into the probability list.
    virtual int choose(std::span<const double> probs) = 0;
};

class SampledOutcomes final : public OutcomeSource {
  public:
    explicit SampledOutcomes(Rng& rng) : rng_(&rng) {}
    int choose(std::span<const double> probs) override;

  private:
    Rng* rng_;
};

/// Replays a fixed choice list; beyond its end chooses 0. Tracks the branch
/// weight and the arity of every decision for odometer enumeration.
class ScriptedOutcomes final : public OutcomeSource {
  public:
    explicit ScriptedOutcomes(std::vector<int> script = {}) : script_(std::move(script)) {}
    int choose(std::span<const double> probs) override;

    double weight() const { return weight_; }
    const std::vector<int>& choices() const { return script_; }
    const std::vector<int>& arities() const { return arity_; }
    /// Next script in odometer order, or nullopt after the last branch.
    std::optional<std::vector<int>> next_script() const;

  private:
    std::vector<int> script_;
    std::vector<int> arity_;
    std::size_t pos_ = 0;
    double weight_ = 1.0;
};

/// Runs `body` once per measurement branch with nonzero probability.
/// `body` receives the scripted source and the branch weight is read from it.
void for_each_branch(const std::function<void(ScriptedOutcomes&)>& body);

StateRegister::BellResult measure_bell(StateRegister& reg, QubitHandle q1, QubitHandle q2, OutcomeSource& src);
StateRegister::ZResult measure_z(StateRegister& reg, QubitHandle q, OutcomeSource& src);

// ---------------------------------------------------------------------------
// Shared entanglement

/// The 2mn Bell pairs (A_{k,s}, B_{k,s}) shared before the protocol starts.
/// Lazily created on first touch unless `eager`; both halves belong to
/// servers, so the pool is not a channel.
class EntanglementPool {
  public:
    EntanglementPool(StateRegister& reg, std::size_t rounds, std::size_t n, bool eager);

    QubitHandle a_half(std::size_t k, std::size_t s);
    QubitHandle b_half(std::size_t k, std::size_t s);
    std::size_t created() const { return pairs_.size(); }

  private:
    std::pair<QubitHandle, QubitHandle>& get(std::size_t k, std::size_t s);

    StateRegister* reg_;
    std::size_t rounds_;
    std::size_t n_;
    std::map<std::pair<std::size_t, std::size_t>, std::pair<QubitHandle, QubitHandle>> pairs_;
};

}  // namespace obliq

#endif  // OBLIQ_HARNESS_HPP
