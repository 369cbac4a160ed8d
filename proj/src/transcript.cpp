#include "biozero/transcript.hpp"

#include <stdexcept>

#include "biozero/hash.hpp"

namespace biozero::transcript {

namespace {

void append_vector(const GroupParams& params, std::vector<uint8_t>& out,
                   const CommitmentVector& v) {
    for (const auto& c : v) {
        auto enc = params.encode_element(c.element);
        out.insert(out.end(), enc.begin(), enc.end());
    }
}

}  // namespace

std::vector<uint8_t> build(const GroupParams& params, const CommitmentVector& c0,
                           const CommitmentVector& c1, const CommitmentVector& c00,
                           const CommitmentVector& c11, const CommitmentVector& c01,
                           const AuthRelationFirstMessage& first, std::span<const uint8_t> id,
                           uint64_t nonce) {
    const size_t n = c0.size();
    if (c1.size() != n || c00.size() != n || c11.size() != n || c01.size() != n ||
        first.entries.size() != n) {
        throw std::invalid_argument("transcript: commitment vector length mismatch");
    }
    std::vector<uint8_t> out;
    out.reserve(10 * n * params.element_bytes() + id.size() + 12);
    append_vector(params, out, c0);
    append_vector(params, out, c1);
    append_vector(params, out, c00);
    append_vector(params, out, c11);
    append_vector(params, out, c01);
    auto append_elems = [&](auto proj) {
        for (const auto& ent : first.entries) {
            auto enc = params.encode_element(proj(ent));
            out.insert(out.end(), enc.begin(), enc.end());
        }
    };
    using FE = AuthRelationFirstMessage::Entry;
    append_elems([](const FE& e) { return e.alpha1; });
    append_elems([](const FE& e) { return e.alpha2; });
    append_elems([](const FE& e) { return e.beta1; });
    append_elems([](const FE& e) { return e.beta2; });
    append_elems([](const FE& e) { return e.beta3; });
    uint32_t idlen = uint32_t(id.size());
    out.push_back(uint8_t(idlen >> 24));
    out.push_back(uint8_t(idlen >> 16));
    out.push_back(uint8_t(idlen >> 8));
    out.push_back(uint8_t(idlen));
    out.insert(out.end(), id.begin(), id.end());
    for (int i = 7; i >= 0; --i) out.push_back(uint8_t(nonce >> (8 * i)));
    return out;
}

Challenge challenge_from_bytes(const GroupParams& params,
                               std::span<const uint8_t> transcript_bytes) {
    Digest d = sha256(transcript_bytes);
    mpz_class v;
    mpz_import(v.get_mpz_t(), d.size(), 1, 1, 1, 0, d.data());
    return Challenge{params.reduce(v)};
}

Challenge derive_challenge(const GroupParams& params, const CommitmentVector& c0,
                           const CommitmentVector& c1, const CommitmentVector& c00,
                           const CommitmentVector& c11, const CommitmentVector& c01,
                           const AuthRelationFirstMessage& first, std::span<const uint8_t> id,
                           uint64_t nonce) {
    return challenge_from_bytes(params, build(params, c0, c1, c00, c11, c01, first, id, nonce));
}

}  // namespace biozero::transcript
