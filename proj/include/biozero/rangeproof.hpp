#ifndef BIOZERO_RANGEPROOF_HPP_
#define BIOZERO_RANGEPROOF_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "biozero/hash.hpp"
#include "biozero/pedersen.hpp"

namespace biozero {

inline constexpr uint8_t kRangeBackendBitDecomposition = 1;

/// Keys for the range-proof backend. The reference backend (bit decomposition
/// with Fiat-Shamir) has a transparent setup, so proving and verification key
/// carry the same material; the split is kept so a trusted-setup backend fits
/// behind the same interface.
struct RangeProvingKey {
    uint8_t backend = kRangeBackendBitDecomposition;
    uint32_t bits = 0;  // L: proved range is [0, 2^L)
    Digest params_digest{};
};

struct RangeVerificationKey {
    uint8_t backend = kRangeBackendBitDecomposition;
    uint32_t bits = 0;
    Digest params_digest{};
};

struct RangeKeys {
    RangeProvingKey pk;
    RangeVerificationKey vk;
    uint32_t bits = 0;

    std::vector<uint8_t> serialize() const;
    static RangeKeys deserialize(std::span<const uint8_t> bytes);
};

/// Proof that a committed value lies in [0, epsilon-1]. Size depends only on
/// the range bit-length L, never on the biometric vector length.
struct RangeProof {
    struct BitOrProof {
        GroupElement a0, a1;  // first messages of the two OR branches
        Scalar e0;            // branch-0 sub-challenge; e1 = e - e0
        Scalar z0, z1;
    };

    uint8_t backend = kRangeBackendBitDecomposition;
    uint32_t bits = 0;
    std::vector<GroupElement> d_bits;  // commitments to the bits of d
    std::vector<GroupElement> t_bits;  // commitments to the bits of epsilon-1-d
    std::vector<BitOrProof> d_or;
    std::vector<BitOrProof> t_or;
    GroupElement agg_d_a, agg_t_a;  // aggregation Schnorr first messages
    Scalar agg_d_z, agg_t_z;

    std::vector<uint8_t> serialize(const GroupParams& params) const;
    static RangeProof deserialize(const GroupParams& params, std::span<const uint8_t> bytes);
};

namespace rangeproof {

/// Creates keys for the domain [0, 2^L). Deterministic: identical inputs give
/// byte-identical keys. Throws std::invalid_argument when L = 0 or when
/// 2^(L+1) exceeds the scalar capacity q (the two-sided decomposition would
/// wrap mod q and lose soundness).
RangeKeys setup(const GroupParams& params, uint32_t bits);

/// Proves 0 <= d < epsilon for c_d = commit(d, r_d). Honest-prover guard:
/// refuses (throws std::invalid_argument) when d is outside [0, epsilon) or
/// when the opening does not match c_d.
RangeProof prove(const GroupParams& params, const RangeKeys& keys, const Scalar& d,
                 const Scalar& r_d, const Commitment& c_d, const Scalar& epsilon, Rng& rng);

/// True iff the proof demonstrates knowledge of an opening (d, r_d) of c_d
/// with d < epsilon. Never throws on bad proofs; malformed content is false.
bool verify(const GroupParams& params, const RangeKeys& keys, const Commitment& c_d,
            const Scalar& epsilon, const RangeProof& proof);

namespace testing {
/// Skips the honest-prover range guard so negative-path tests can hand the
/// verifier a proof for an out-of-range d. The opening must still match c_d.
RangeProof prove_without_range_guard(const GroupParams& params, const RangeKeys& keys,
                                     const Scalar& d, const Scalar& r_d, const Commitment& c_d,
                                     const Scalar& epsilon, Rng& rng);
}  // namespace testing

}  // namespace rangeproof

}  // namespace biozero

#endif  // BIOZERO_RANGEPROOF_HPP_
