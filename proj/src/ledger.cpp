#include "biozero/ledger.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "biozero/encoding.hpp"
#include "biozero/transcript.hpp"

namespace biozero {

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::None: return "none";
        case Stage::Nonce: return "nonce";
        case Stage::Registry: return "registry";
        case Stage::Challenge: return "challenge";
        case Stage::Relations: return "relations";
        case Stage::Reconstruct: return "reconstruct";
        case Stage::Range: return "range";
        case Stage::Decode: return "decode";
    }
    return "unknown";
}

OpCounts CostReport::total() const {
    OpCounts t;
    for (const auto& s : by_stage) t += s;
    return t;
}

OpCounts CostReport::stages_3_to_5() const {
    OpCounts t;
    t += by_stage[size_t(Stage::Challenge)];
    t += by_stage[size_t(Stage::Relations)];
    t += by_stage[size_t(Stage::Reconstruct)];
    return t;
}

namespace {

std::vector<uint8_t> registration_payload(const GroupParams& params,
                                          std::span<const uint8_t> id,
                                          const CommitmentVector& c0) {
    ByteWriter w;
    w.var_bytes(id);
    w.u32(uint32_t(c0.size()));
    for (const auto& c : c0) w.element(params, c.element);
    return w.take();
}

}  // namespace

void Ledger::register_identity(std::span<const uint8_t> id, const CommitmentVector& c0) {
    std::vector<uint8_t> key(id.begin(), id.end());
    if (index_.count(key)) throw std::invalid_argument("id already registered");
    if (c0.empty()) throw std::invalid_argument("empty commitment vector");
    // Registration is the one-time write of long-lived state; insist on full
    // subgroup membership here.
    for (const auto& c : c0) {
        if (!params_->is_element(c.element)) {
            throw std::invalid_argument("registration commitment not in the group");
        }
    }
    CommitmentVector stored;
    stored.reserve(c0.size());
    for (const auto& c : c0) stored.push_back(Commitment{c.element, std::nullopt});

    registry_.push_back(RegistryEntry{key, std::move(stored), std::nullopt});
    index_[key] = registry_.size() - 1;

    Event ev;
    ev.type = Event::Register;
    ev.payload = registration_payload(*params_, id, c0);
    ev.pass = true;
    append_event(std::move(ev));
}

const RegistryEntry* Ledger::find(std::span<const uint8_t> id) const {
    auto it = index_.find(std::vector<uint8_t>(id.begin(), id.end()));
    return it == index_.end() ? nullptr : &registry_[it->second];
}

VerifyOutcome Ledger::verify_pipeline(const RangeKeys& keys, const Scalar& epsilon,
                                      std::span<const uint8_t> gamma_bytes,
                                      RegistryEntry** entry_out,
                                      std::optional<uint64_t>* accepted_nonce) {
    VerifyOutcome out;
    *entry_out = nullptr;

    // Pre-stage: decode the submitted bytes.
    AuthProof gamma;
    {
        MeterScope meter(out.cost.by_stage[size_t(Stage::Decode)]);
        try {
            gamma = protocol::parse_auth_proof(*params_, gamma_bytes);
        } catch (const std::exception& e) {
            out.pass = false;
            out.failed_stage = Stage::Decode;
            out.diagnostic = std::string("malformed proof: ") + e.what();
            return out;
        }
    }

    RegistryEntry* entry = nullptr;
    if (auto it = index_.find(gamma.id); it != index_.end()) entry = &registry_[it->second];

    // Stage 1: replay protection. With a known entry the nonce must be
    // strictly greater than the last accepted one (gaps allowed).
    if (entry && entry->last_nonce && gamma.nonce <= *entry->last_nonce) {
        out.pass = false;
        out.failed_stage = Stage::Nonce;
        out.diagnostic = "nonce " + std::to_string(gamma.nonce) +
                         " not greater than last accepted " + std::to_string(*entry->last_nonce);
        return out;
    }

    // Stage 2: registry fetch.
    if (!entry) {
        out.pass = false;
        out.failed_stage = Stage::Registry;
        out.diagnostic = "id not registered";
        return out;
    }
    *entry_out = entry;

    // Stage 3: re-derive the session challenge from the transcript.
    Challenge e;
    {
        MeterScope meter(out.cost.by_stage[size_t(Stage::Challenge)]);
        try {
            e = transcript::derive_challenge(*params_, entry->c0, gamma.c1, gamma.c00, gamma.c11,
                                             gamma.c01, gamma.relations.first_message(),
                                             gamma.id, gamma.nonce);
        } catch (const std::exception& ex) {
            out.pass = false;
            out.failed_stage = Stage::Challenge;
            out.diagnostic = ex.what();
            return out;
        }
    }

    // Stage 4: the five relation equation families per index.
    {
        MeterScope meter(out.cost.by_stage[size_t(Stage::Relations)]);
        std::optional<RelationFailure> failure;
        try {
            failure = mulproof::verify_auth_relations(*params_, entry->c0, gamma.c1, gamma.c00,
                                                      gamma.c11, gamma.c01, e, gamma.relations);
        } catch (const std::exception& ex) {
            out.pass = false;
            out.failed_stage = Stage::Relations;
            out.diagnostic = ex.what();
            return out;
        }
        if (failure) {
            out.pass = false;
            out.failed_stage = Stage::Relations;
            out.diagnostic = failure->describe();
            return out;
        }
    }

    // Stage 5: homomorphic reconstruction of the distance commitment.
    Commitment c_d{params_->identity(), std::nullopt};
    {
        MeterScope meter(out.cost.by_stage[size_t(Stage::Reconstruct)]);
        c_d = protocol::distance_commitment(*params_, gamma.c00, gamma.c11, gamma.c01);
    }

    // Stage 6: range proof on the reconstructed commitment.
    {
        MeterScope meter(out.cost.by_stage[size_t(Stage::Range)]);
        bool ok = rangeproof::verify(*params_, keys, c_d, epsilon, gamma.range_proof);
        if (!ok) {
            out.pass = false;
            out.failed_stage = Stage::Range;
            out.diagnostic = "range proof rejected";
            return out;
        }
    }

    out.pass = true;
    out.failed_stage = Stage::None;
    out.diagnostic = "pass";
    *accepted_nonce = gamma.nonce;
    return out;
}

VerifyOutcome Ledger::verify_auth(const RangeKeys& keys, const Scalar& epsilon,
                                  std::span<const uint8_t> gamma_bytes) {
    RegistryEntry* entry = nullptr;
    std::optional<uint64_t> accepted;
    VerifyOutcome out = verify_pipeline(keys, epsilon, gamma_bytes, &entry, &accepted);
    if (out.pass && entry && accepted) entry->last_nonce = *accepted;

    Event ev;
    ev.type = Event::Auth;
    ev.payload.assign(gamma_bytes.begin(), gamma_bytes.end());
    ev.pass = out.pass;
    ev.stage = out.failed_stage;
    ev.diagnostic = out.diagnostic;
    ev.cost = out.cost;
    append_event(std::move(ev));
    return out;
}

void Ledger::append_event(Event ev) {
    ev.seq = next_seq_++;
    ev.digest = sha256(ev.payload);
    events_.push_back(std::move(ev));
}

std::vector<Ledger::ReplayResult> Ledger::reverify_log(const RangeKeys& keys,
                                                       const Scalar& epsilon) const {
    std::vector<ReplayResult> results;
    Ledger replay(*params_);
    for (const auto& ev : events_) {
        ReplayResult r;
        r.seq = ev.seq;
        r.original_pass = ev.pass;
        if (ev.type == Event::Register) {
            try {
                ByteReader rd(ev.payload);
                auto id = rd.var_bytes(1u << 16);
                uint32_t n = rd.u32();
                CommitmentVector c0;
                c0.reserve(n);
                for (uint32_t i = 0; i < n; ++i) {
                    c0.push_back(Commitment{rd.element(*params_), std::nullopt});
                }
                replay.register_identity(id, c0);
                r.replay_pass = true;
                r.matches = ev.pass;
                r.note = "registration";
            } catch (const std::exception& e) {
                r.replay_pass = false;
                r.matches = !ev.pass;
                r.note = std::string("registration failed: ") + e.what();
            }
        } else {
            VerifyOutcome out = replay.verify_auth(keys, epsilon, ev.payload);
            r.replay_pass = out.pass;
            r.matches = (out.pass == ev.pass) && (out.failed_stage == ev.stage);
            r.note = out.pass ? "pass" : out.diagnostic;
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<uint8_t> Ledger::serialize() const {
    ByteWriter w;
    const uint8_t magic[4] = {'B', 'Z', 'L', 'G'};
    w.bytes(magic);
    w.u8(1);  // format version
    Digest pd = sha256(params_->canonical_encoding());
    w.bytes(pd);

    // Registry section, insertion order.
    w.u32(uint32_t(registry_.size()));
    for (const auto& ent : registry_) {
        w.var_bytes(ent.id);
        w.u8(ent.last_nonce ? 1 : 0);
        w.u64(ent.last_nonce.value_or(0));
        w.u32(uint32_t(ent.c0.size()));
        for (const auto& c : ent.c0) w.element(*params_, c.element);
    }

    // Event section.
    w.u32(uint32_t(events_.size()));
    for (const auto& ev : events_) {
        w.u8(ev.type);
        w.u64(ev.seq);
        w.bytes(ev.digest);
        w.var_bytes(ev.payload);
        w.u8(ev.pass ? 1 : 0);
        w.u8(uint8_t(ev.stage));
        std::vector<uint8_t> diag(ev.diagnostic.begin(), ev.diagnostic.end());
        w.var_bytes(diag);
        for (const auto& st : ev.cost.by_stage) {
            w.u64(st.exp);
            w.u64(st.mul);
            w.u64(st.hash);
        }
    }
    return w.take();
}

Ledger Ledger::deserialize(const GroupParams& params, std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    const uint8_t magic[4] = {'B', 'Z', 'L', 'G'};
    r.expect_magic(magic, "ledger");
    if (r.u8() != 1) throw DecodeError("unsupported ledger version");
    auto pd = r.bytes(32);
    Digest expect = sha256(params.canonical_encoding());
    if (!std::equal(pd.begin(), pd.end(), expect.begin())) {
        throw DecodeError("ledger was created under different group parameters");
    }

    Ledger ledger(params);
    uint32_t nreg = r.u32();
    for (uint32_t i = 0; i < nreg; ++i) {
        RegistryEntry ent;
        ent.id = r.var_bytes(1u << 16);
        bool has_nonce = r.u8() != 0;
        uint64_t nonce = r.u64();
        if (has_nonce) ent.last_nonce = nonce;
        uint32_t n = r.u32();
        ent.c0.reserve(n);
        for (uint32_t j = 0; j < n; ++j) {
            ent.c0.push_back(Commitment{r.element(params), std::nullopt});
        }
        ledger.index_[ent.id] = ledger.registry_.size();
        ledger.registry_.push_back(std::move(ent));
    }

    uint32_t nev = r.u32();
    for (uint32_t i = 0; i < nev; ++i) {
        Event ev;
        ev.type = Event::Type(r.u8());
        if (ev.type != Event::Register && ev.type != Event::Auth) {
            throw DecodeError("unknown event type");
        }
        ev.seq = r.u64();
        auto dg = r.bytes(32);
        std::copy(dg.begin(), dg.end(), ev.digest.begin());
        ev.payload = r.var_bytes(1u << 26);
        ev.pass = r.u8() != 0;
        ev.stage = Stage(r.u8());
        auto diag = r.var_bytes(1u << 16);
        ev.diagnostic.assign(diag.begin(), diag.end());
        for (auto& st : ev.cost.by_stage) {
            st.exp = r.u64();
            st.mul = r.u64();
            st.hash = r.u64();
        }
        ledger.events_.push_back(std::move(ev));
    }
    if (!r.done()) throw DecodeError("trailing bytes in ledger file");
    ledger.next_seq_ = ledger.events_.empty() ? 0 : ledger.events_.back().seq + 1;
    return ledger;
}

void Ledger::save(const std::string& path) const {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        auto bytes = serialize();
        f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
        if (!f) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("atomic rename to " + path + " failed");
    }
}

Ledger Ledger::load(const GroupParams& params, const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
    return deserialize(params, bytes);
}

}  // namespace biozero
