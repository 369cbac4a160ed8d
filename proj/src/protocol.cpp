#include "biozero/protocol.hpp"

#include <chrono>
#include <stdexcept>

#include "biozero/encoding.hpp"
#include "biozero/transcript.hpp"

namespace biozero::protocol {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr uint8_t kGammaMagic[4] = {'B', 'Z', 'A', 'P'};

AuthProof generate_impl(const GroupParams& params, const RangeKeys& keys,
                        const RegistrationRecord& record, const BiometricVector& f1,
                        uint64_t nonce, uint64_t epsilon, Rng& rng, ProofMode mode,
                        ProveTimings* timings) {
    validate_features(f1);
    const size_t n = record.f0.size();
    if (f1.size() != n) throw std::invalid_argument("probe vector length does not match record");
    if (f1.feature_bits != record.feature_bits) {
        throw std::invalid_argument("probe quantization does not match record");
    }

    AuthProof gamma;
    gamma.id = record.id;
    gamma.nonce = nonce;

    // Step 1: commitment vectors with fresh blindings per index.
    auto t0 = Clock::now();
    std::vector<Scalar> f0s(n), f1s(n), r1(n), r00(n), r11(n), r01(n);
    gamma.c1.resize(n);
    gamma.c00.resize(n);
    gamma.c11.resize(n);
    gamma.c01.resize(n);
    for (size_t i = 0; i < n; ++i) {
        f0s[i] = params.scalar_from_u64(record.f0[i]);
        f1s[i] = params.scalar_from_u64(f1.values[i]);
        r1[i] = params.random_scalar(rng);
        r00[i] = params.random_scalar(rng);
        r11[i] = params.random_scalar(rng);
        r01[i] = params.random_scalar(rng);
        gamma.c1[i] = pedersen::commit(params, Opening{f1s[i], r1[i]});
        gamma.c00[i] = pedersen::commit(params, Opening{params.s_mul(f0s[i], f0s[i]), r00[i]});
        gamma.c11[i] = pedersen::commit(params, Opening{params.s_mul(f1s[i], f1s[i]), r11[i]});
        gamma.c01[i] = pedersen::commit(params, Opening{params.s_mul(f0s[i], f1s[i]), r01[i]});
    }
    if (timings) timings->commit_ms = ms_since(t0);

    // Step 2: relation-proof first messages, then the session challenge over
    // the full transcript (commitments, alphas/betas, id, nonce).
    t0 = Clock::now();
    mulproof::AuthRelationState relation_state =
        mulproof::commit_auth_relations(params, f0s, record.r0, f1s, r1, rng, mode);
    Challenge e = transcript::derive_challenge(params, record.c0, gamma.c1, gamma.c00, gamma.c11,
                                               gamma.c01, relation_state.first, gamma.id, nonce);
    if (timings) timings->challenge_ms = ms_since(t0);

    // Step 3: responses for the product-consistency relations.
    t0 = Clock::now();
    gamma.relations = mulproof::respond_auth_relations(params, relation_state, f0s, record.r0,
                                                       f1s, r1, r00, r11, r01, e);
    if (timings) timings->relations_ms = ms_since(t0);

    // Step 4: distance, aggregated blinding and the range proof.
    t0 = Clock::now();
    uint64_t d = compute_distance(BiometricVector{record.f0, record.feature_bits}, f1);
    Scalar r_d;
    for (size_t i = 0; i < n; ++i) {
        Scalar two_r01 = params.s_add(r01[i], r01[i]);
        r_d = params.s_add(r_d, params.s_sub(params.s_add(r00[i], r11[i]), two_r01));
    }
    Scalar d_scalar = params.scalar_from_u64(d);
    Commitment c_d = pedersen::commit(params, Opening{d_scalar, r_d});
    Scalar eps_scalar = params.scalar_from_u64(epsilon);
    if (d < epsilon) {
        gamma.range_proof = rangeproof::prove(params, keys, d_scalar, r_d, c_d, eps_scalar, rng);
    } else {
        gamma.range_proof = rangeproof::testing::prove_without_range_guard(
            params, keys, d_scalar, r_d, c_d, eps_scalar, rng);
    }
    if (timings) timings->range_ms = ms_since(t0);
    return gamma;
}

void write_commitment_vector(ByteWriter& w, const GroupParams& params,
                             const CommitmentVector& v) {
    w.u32(uint32_t(v.size()));
    for (const auto& c : v) w.element(params, c.element);
}

CommitmentVector read_commitment_vector(ByteReader& r, const GroupParams& params, size_t expect) {
    uint32_t n = r.u32();
    if (n != expect) throw DecodeError("commitment vector length mismatch");
    CommitmentVector v;
    v.reserve(n);
    for (uint32_t i = 0; i < n; ++i) v.push_back(Commitment{r.element(params), std::nullopt});
    return v;
}

}  // namespace

void validate_features(const BiometricVector& v) {
    if (v.values.empty()) throw std::invalid_argument("biometric vector must be non-empty");
    if (v.feature_bits == 0 || v.feature_bits > 31) {
        throw std::invalid_argument("feature quantization must be 1..31 bits");
    }
    uint32_t bound = 1u << v.feature_bits;
    for (uint32_t x : v.values) {
        if (x >= bound) throw std::invalid_argument("feature value out of range");
    }
}

RegistrationRecord register_user(const GroupParams& params, std::span<const uint8_t> id,
                                 const BiometricVector& f0, Rng& rng) {
    validate_features(f0);
    RegistrationRecord rec;
    rec.id.assign(id.begin(), id.end());
    rec.feature_bits = f0.feature_bits;
    rec.f0 = f0.values;
    rec.r0.resize(f0.size());
    rec.c0.resize(f0.size());
    for (size_t i = 0; i < f0.size(); ++i) {
        rec.r0[i] = params.random_scalar(rng);
        rec.c0[i] = pedersen::commit(params, Opening{params.scalar_from_u64(f0.values[i]), rec.r0[i]});
    }
    return rec;
}

uint64_t compute_distance(const BiometricVector& f0, const BiometricVector& f1) {
    if (f0.size() != f1.size()) throw std::invalid_argument("distance: length mismatch");
    if (f0.values.empty()) throw std::invalid_argument("distance: empty vectors");
    uint64_t d = 0;
    for (size_t i = 0; i < f0.size(); ++i) {
        int64_t diff = int64_t(f0.values[i]) - int64_t(f1.values[i]);
        d += uint64_t(diff * diff);
    }
    return d;
}

AuthProof generate_auth_proof(const GroupParams& params, const RangeKeys& keys,
                              const RegistrationRecord& record, const BiometricVector& f1,
                              uint64_t nonce, uint64_t epsilon, Rng& rng, ProofMode mode,
                              ProveTimings* timings) {
    uint64_t d = compute_distance(BiometricVector{record.f0, record.feature_bits}, f1);
    if (d >= epsilon) {
        throw std::invalid_argument("refusing to prove: distance " + std::to_string(d) +
                                    " is not below threshold " + std::to_string(epsilon));
    }
    return generate_impl(params, keys, record, f1, nonce, epsilon, rng, mode, timings);
}

Commitment distance_commitment(const GroupParams& params, const CommitmentVector& c00,
                               const CommitmentVector& c11, const CommitmentVector& c01) {
    const size_t n = c00.size();
    if (c11.size() != n || c01.size() != n) {
        throw std::invalid_argument("distance_commitment: length mismatch");
    }
    if (n == 0) throw std::invalid_argument("distance_commitment: empty vectors");
    Scalar two = params.scalar_from_u64(2);
    Commitment acc{params.identity(), std::nullopt};
    for (size_t i = 0; i < n; ++i) {
        acc = pedersen::add(params, acc, c00[i]);
        acc = pedersen::add(params, acc, c11[i]);
        acc = pedersen::sub(params, acc, pedersen::scale(params, c01[i], two));
    }
    return acc;
}

std::vector<uint8_t> serialize_auth_proof(const GroupParams& params, const AuthProof& gamma) {
    ByteWriter w;
    w.bytes(kGammaMagic);
    w.u8(1);  // format version
    w.var_bytes(gamma.id);
    w.u64(gamma.nonce);
    const size_t n = gamma.c1.size();
    w.u32(uint32_t(n));
    write_commitment_vector(w, params, gamma.c1);
    write_commitment_vector(w, params, gamma.c00);
    write_commitment_vector(w, params, gamma.c11);
    write_commitment_vector(w, params, gamma.c01);

    // Relation proof: mode byte, then the arrays in declared field order.
    w.u8(uint8_t(gamma.relations.mode));
    w.u32(uint32_t(gamma.relations.entries.size()));
    auto elems = [&](auto proj) {
        w.u32(uint32_t(gamma.relations.entries.size()));
        for (const auto& ent : gamma.relations.entries) w.element(params, proj(ent));
    };
    auto scalars = [&](auto proj) {
        w.u32(uint32_t(gamma.relations.entries.size()));
        for (const auto& ent : gamma.relations.entries) w.scalar(params, proj(ent));
    };
    using E = AuthRelationProof::Entry;
    elems([](const E& e) { return e.alpha1; });
    elems([](const E& e) { return e.alpha2; });
    elems([](const E& e) { return e.beta1; });
    elems([](const E& e) { return e.beta2; });
    elems([](const E& e) { return e.beta3; });
    scalars([](const E& e) { return e.z1; });
    scalars([](const E& e) { return e.z2; });
    scalars([](const E& e) { return e.z3; });
    scalars([](const E& e) { return e.z4; });
    scalars([](const E& e) { return e.z5; });
    scalars([](const E& e) { return e.z6; });
    scalars([](const E& e) { return e.z7; });

    w.var_bytes(gamma.range_proof.serialize(params));
    return w.take();
}

AuthProof parse_auth_proof(const GroupParams& params, std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    r.expect_magic(kGammaMagic, "auth proof");
    if (r.u8() != 1) throw DecodeError("unsupported auth proof version");
    AuthProof gamma;
    gamma.id = r.var_bytes(1u << 16);
    gamma.nonce = r.u64();
    uint32_t n = r.u32();
    if (n == 0 || n > (1u << 20)) throw DecodeError("auth proof vector length out of bounds");
    gamma.c1 = read_commitment_vector(r, params, n);
    gamma.c00 = read_commitment_vector(r, params, n);
    gamma.c11 = read_commitment_vector(r, params, n);
    gamma.c01 = read_commitment_vector(r, params, n);

    uint8_t mode = r.u8();
    if (mode > 1) throw DecodeError("unknown relation proof mode");
    gamma.relations.mode = ProofMode(mode);
    uint32_t rn = r.u32();
    if (rn != n) throw DecodeError("relation proof length mismatch");
    gamma.relations.entries.resize(n);
    auto elems = [&](auto assign) {
        if (r.u32() != n) throw DecodeError("relation array length mismatch");
        for (uint32_t i = 0; i < n; ++i) assign(gamma.relations.entries[i], r.element(params));
    };
    auto scalars = [&](auto assign) {
        if (r.u32() != n) throw DecodeError("relation array length mismatch");
        for (uint32_t i = 0; i < n; ++i) assign(gamma.relations.entries[i], r.scalar(params));
    };
    using E = AuthRelationProof::Entry;
    elems([](E& e, GroupElement v) { e.alpha1 = v; });
    elems([](E& e, GroupElement v) { e.alpha2 = v; });
    elems([](E& e, GroupElement v) { e.beta1 = v; });
    elems([](E& e, GroupElement v) { e.beta2 = v; });
    elems([](E& e, GroupElement v) { e.beta3 = v; });
    scalars([](E& e, Scalar v) { e.z1 = v; });
    scalars([](E& e, Scalar v) { e.z2 = v; });
    scalars([](E& e, Scalar v) { e.z3 = v; });
    scalars([](E& e, Scalar v) { e.z4 = v; });
    scalars([](E& e, Scalar v) { e.z5 = v; });
    scalars([](E& e, Scalar v) { e.z6 = v; });
    scalars([](E& e, Scalar v) { e.z7 = v; });

    auto pi_bytes = r.var_bytes(1u << 24);
    gamma.range_proof = RangeProof::deserialize(params, pi_bytes);
    if (!r.done()) throw DecodeError("trailing bytes in auth proof");
    return gamma;
}

namespace testing {

AuthProof force_generate_auth_proof(const GroupParams& params, const RangeKeys& keys,
                                    const RegistrationRecord& record, const BiometricVector& f1,
                                    uint64_t nonce, uint64_t epsilon, Rng& rng, ProofMode mode) {
    return generate_impl(params, keys, record, f1, nonce, epsilon, rng, mode, nullptr);
}

}  // namespace testing

}  // namespace biozero::protocol

namespace biozero {

std::vector<uint8_t> RegistrationRecord::serialize(const GroupParams& params) const {
    ByteWriter w;
    const uint8_t magic[4] = {'B', 'Z', 'R', 'C'};
    w.bytes(magic);
    w.u8(1);
    w.var_bytes(id);
    w.u8(uint8_t(feature_bits));
    w.u32(uint32_t(f0.size()));
    for (uint32_t v : f0) w.u32(v);
    for (const auto& s : r0) w.scalar(params, s);
    for (const auto& c : c0) w.element(params, c.element);
    return w.take();
}

RegistrationRecord RegistrationRecord::deserialize(const GroupParams& params,
                                                   std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    const uint8_t magic[4] = {'B', 'Z', 'R', 'C'};
    r.expect_magic(magic, "registration record");
    if (r.u8() != 1) throw DecodeError("unsupported record version");
    RegistrationRecord rec;
    rec.id = r.var_bytes(1u << 16);
    rec.feature_bits = r.u8();
    uint32_t n = r.u32();
    if (n == 0 || n > (1u << 20)) throw DecodeError("record vector length out of bounds");
    rec.f0.resize(n);
    for (uint32_t i = 0; i < n; ++i) rec.f0[i] = r.u32();
    rec.r0.resize(n);
    for (uint32_t i = 0; i < n; ++i) rec.r0[i] = r.scalar(params);
    rec.c0.resize(n);
    for (uint32_t i = 0; i < n; ++i) rec.c0[i] = Commitment{r.element(params), std::nullopt};
    if (!r.done()) throw DecodeError("trailing bytes in registration record");
    return rec;
}

}  // namespace biozero
