#ifndef BIOZERO_PROTOCOL_HPP_
#define BIOZERO_PROTOCOL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "biozero/mulproof.hpp"
#include "biozero/rangeproof.hpp"

namespace biozero {

/// Quantized biometric feature vector: N integers in [0, 2^feature_bits).
struct BiometricVector {
    std::vector<uint32_t> values;
    uint32_t feature_bits = 8;

    size_t size() const { return values.size(); }
};

/// Registration material. The commitment vector c0 goes to the ledger; the
/// feature and blinding vectors stay with the user.
struct RegistrationRecord {
    std::vector<uint8_t> id;
    uint32_t feature_bits = 8;
    CommitmentVector c0;          // public side
    std::vector<uint32_t> f0;     // secret side
    std::vector<Scalar> r0;       // secret side

    std::vector<uint8_t> serialize(const GroupParams& params) const;
    static RegistrationRecord deserialize(const GroupParams& params,
                                          std::span<const uint8_t> bytes);
};

/// The full authentication package Gamma. The distance commitment itself is
/// not transmitted; the verifier reconstructs it from c00, c11 and c01.
struct AuthProof {
    std::vector<uint8_t> id;
    uint64_t nonce = 0;
    CommitmentVector c1, c00, c11, c01;
    AuthRelationProof relations;
    RangeProof range_proof;
};

/// Optional wall-clock breakdown of proof generation, for the bench harness.
struct ProveTimings {
    double commit_ms = 0;     // step 1: the four commitment vectors
    double challenge_ms = 0;  // step 2: Fiat-Shamir challenge
    double relations_ms = 0;  // step 3: auxiliary relation proof
    double range_ms = 0;      // step 4: distance, blinding sum, range proof
};

namespace protocol {

void validate_features(const BiometricVector& v);

RegistrationRecord register_user(const GroupParams& params, std::span<const uint8_t> id,
                                 const BiometricVector& f0, Rng& rng);

/// Exact squared Euclidean distance sum((f0_i - f1_i)^2) over the integers.
uint64_t compute_distance(const BiometricVector& f0, const BiometricVector& f1);

/// Runs Algorithm-1 end to end: fresh commitment vectors, transcript
/// challenge, relation proof, then the distance opening and range proof.
/// Refuses (std::invalid_argument) when compute_distance(f0, f1) >= epsilon;
/// the test-only entry point below bypasses only that guard.
AuthProof generate_auth_proof(const GroupParams& params, const RangeKeys& keys,
                              const RegistrationRecord& record, const BiometricVector& f1,
                              uint64_t nonce, uint64_t epsilon, Rng& rng,
                              ProofMode mode = ProofMode::Repaired,
                              ProveTimings* timings = nullptr);

/// Homomorphic reconstruction: fold of c00_i (+) c11_i (-) 2*c01_i. Equals
/// commit(d, r_d) for honest inputs, as exact group elements.
Commitment distance_commitment(const GroupParams& params, const CommitmentVector& c00,
                               const CommitmentVector& c11, const CommitmentVector& c01);

std::vector<uint8_t> serialize_auth_proof(const GroupParams& params, const AuthProof& gamma);
AuthProof parse_auth_proof(const GroupParams& params, std::span<const uint8_t> bytes);

namespace testing {
/// Same pipeline without the d < epsilon guard, for negative-path tests.
AuthProof force_generate_auth_proof(const GroupParams& params, const RangeKeys& keys,
                                    const RegistrationRecord& record, const BiometricVector& f1,
                                    uint64_t nonce, uint64_t epsilon, Rng& rng,
                                    ProofMode mode = ProofMode::Repaired);
}  // namespace testing

}  // namespace protocol

}  // namespace biozero

#endif  // BIOZERO_PROTOCOL_HPP_
