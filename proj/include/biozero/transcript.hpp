#ifndef BIOZERO_TRANSCRIPT_HPP_
#define BIOZERO_TRANSCRIPT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "biozero/group.hpp"
#include "biozero/pedersen.hpp"

namespace biozero {

/// Fiat-Shamir challenge e, a scalar derived from the session transcript.
struct Challenge {
    Scalar e;
};

/// First messages of the batched relation proof, one record per index. These
/// enter the challenge hash: leaving them out would let a cheater pick the
/// responses first and solve for the alphas and betas after seeing e.
struct AuthRelationFirstMessage {
    struct Entry {
        GroupElement alpha1, alpha2, beta1, beta2, beta3;
    };
    std::vector<Entry> entries;
};

namespace transcript {

/// Canonical byte layout hashed for the challenge. This is the wire contract
/// between prover and verifier and is bit-exact:
///
///   c0 || c1 || c00 || c11 || c01
///      || alpha1 || alpha2 || beta1 || beta2 || beta3
///      || len(id) as u32 BE || id || nonce as u64 BE
///
/// with every vector emitted index 0..N-1 in the fixed-length element
/// encoding. The id length prefix keeps the id/nonce boundary unambiguous.
std::vector<uint8_t> build(const GroupParams& params, const CommitmentVector& c0,
                           const CommitmentVector& c1, const CommitmentVector& c00,
                           const CommitmentVector& c11, const CommitmentVector& c01,
                           const AuthRelationFirstMessage& first, std::span<const uint8_t> id,
                           uint64_t nonce);

/// SHA-256 over the transcript bytes, interpreted big-endian and reduced mod q.
/// Throws std::invalid_argument when the vectors differ in length.
Challenge derive_challenge(const GroupParams& params, const CommitmentVector& c0,
                           const CommitmentVector& c1, const CommitmentVector& c00,
                           const CommitmentVector& c11, const CommitmentVector& c01,
                           const AuthRelationFirstMessage& first, std::span<const uint8_t> id,
                           uint64_t nonce);

Challenge challenge_from_bytes(const GroupParams& params, std::span<const uint8_t> transcript_bytes);

}  // namespace transcript

}  // namespace biozero

#endif  // BIOZERO_TRANSCRIPT_HPP_
