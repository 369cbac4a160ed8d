#ifndef BIOZERO_LEDGER_HPP_
#define BIOZERO_LEDGER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "biozero/protocol.hpp"

namespace biozero {

/// Verification pipeline stages, in execution order. Decode is the pre-stage
/// for byte-level parsing of the submitted proof.
enum class Stage : uint8_t {
    None = 0,
    Nonce = 1,
    Registry = 2,
    Challenge = 3,
    Relations = 4,
    Reconstruct = 5,
    Range = 6,
    Decode = 7,
};

const char* stage_name(Stage s);

/// Deterministic operation counts for one verification, broken out per stage.
struct CostReport {
    std::array<OpCounts, 8> by_stage{};  // indexed by Stage value

    OpCounts total() const;
    OpCounts stages_3_to_5() const;
    const OpCounts& stage(Stage s) const { return by_stage[size_t(s)]; }
};

struct VerifyOutcome {
    bool pass = false;
    Stage failed_stage = Stage::None;  // None when pass
    std::string diagnostic;
    CostReport cost;
};

struct RegistryEntry {
    std::vector<uint8_t> id;
    CommitmentVector c0;
    std::optional<uint64_t> last_nonce;  // unset until the first accepted authentication
};

/// Deterministic state machine simulating the on-chain verifier contract:
/// identity registry, replay protection, the six-stage verification pipeline,
/// an append-only event log, and op-count metering. Single-writer semantics:
/// calls that mutate state must be externally serialized; reads of a saved
/// snapshot are freely concurrent.
class Ledger {
public:
    struct Event {
        enum Type : uint8_t { Register = 1, Auth = 2 };
        Type type;
        uint64_t seq = 0;
        Digest digest{};                // SHA-256 of the payload
        std::vector<uint8_t> payload;   // registration encoding or full Gamma bytes
        bool pass = false;
        Stage stage = Stage::None;
        std::string diagnostic;
        CostReport cost;
    };

    struct ReplayResult {
        uint64_t seq = 0;
        bool matches = false;
        bool original_pass = false;
        bool replay_pass = false;
        std::string note;
    };

    explicit Ledger(const GroupParams& params) : params_(&params) {}

    /// Stores (id, c0) after validating subgroup membership of every element.
    /// Throws std::invalid_argument on duplicate id or invalid commitments.
    void register_identity(std::span<const uint8_t> id, const CommitmentVector& c0);

    /// Algorithm-2 pipeline over serialized Gamma bytes. Never throws on bad
    /// submissions: every failure is a fail verdict with a stage diagnostic.
    /// The registry mutates only on pass; an event is appended either way.
    VerifyOutcome verify_auth(const RangeKeys& keys, const Scalar& epsilon,
                              std::span<const uint8_t> gamma_bytes);

    const RegistryEntry* find(std::span<const uint8_t> id) const;
    const std::vector<RegistryEntry>& registry() const { return registry_; }
    const std::vector<Event>& events() const { return events_; }

    /// Replays the event log from an empty state and re-runs every recorded
    /// verification, reporting verdict mismatches.
    std::vector<ReplayResult> reverify_log(const RangeKeys& keys, const Scalar& epsilon) const;

    std::vector<uint8_t> serialize() const;
    static Ledger deserialize(const GroupParams& params, std::span<const uint8_t> bytes);

    /// Atomic persistence: write to a temp file in the same directory, then
    /// rename over the target.
    void save(const std::string& path) const;
    static Ledger load(const GroupParams& params, const std::string& path);

private:
    VerifyOutcome verify_pipeline(const RangeKeys& keys, const Scalar& epsilon,
                                  std::span<const uint8_t> gamma_bytes, RegistryEntry** entry_out,
                                  std::optional<uint64_t>* accepted_nonce) ;
    void append_event(Event ev);

    const GroupParams* params_;
    std::vector<RegistryEntry> registry_;
    std::map<std::vector<uint8_t>, size_t> index_;
    std::vector<Event> events_;
    uint64_t next_seq_ = 0;
};

}  // namespace biozero

#endif  // BIOZERO_LEDGER_HPP_
