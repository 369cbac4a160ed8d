#ifndef BIOZERO_MULPROOF_HPP_
#define BIOZERO_MULPROOF_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biozero/pedersen.hpp"
#include "biozero/transcript.hpp"

namespace biozero {

/// Witness for one product relation: openings of c0 and c1 plus the blinding
/// of the product commitment c01 = commit(f0*f1, r01).
struct ProductWitness {
    Opening opening0;
    Opening opening1;
    Scalar r01;
};

/// Single-element product-consistency proof. gamma is a commitment under the
/// base pair (c0, h); the response pair (z3, z5) opens it against c01.
struct ProductProof {
    Commitment alpha;
    Commitment beta;
    Commitment gamma;
    Scalar z1, z2, z3, z4, z5;
};

struct ProductCommitments {
    Commitment c0, c1, c01;
};

enum class ProofMode : uint8_t {
    /// Fresh b1..b7 per vector index. Reusing one b across indices makes
    /// z-differences reveal feature differences once e is public, so fresh
    /// blindings are the default.
    Repaired = 0,
    /// Shared b1..b7 across all indices, for benchmark comparability only.
    PaperFaithful = 1,
};

/// Per-index relation proof for one authentication: ties c00, c11, c01 to the
/// squares and cross product of the features committed in c0 and c1.
struct AuthRelationProof {
    struct Entry {
        GroupElement alpha1, alpha2, beta1, beta2, beta3;
        Scalar z1, z2, z3, z4, z5, z6, z7;
    };
    ProofMode mode = ProofMode::Repaired;
    std::vector<Entry> entries;

    /// The alpha/beta part, as hashed into the session challenge.
    AuthRelationFirstMessage first_message() const;
};

/// Identifies the first verification equation family (1..5) and index that
/// failed, mirroring the five per-index checks of the verifier.
struct RelationFailure {
    int family = 0;
    size_t index = 0;
    std::string describe() const;
};

namespace mulproof {

ProductCommitments product_commitments(const GroupParams& params, const ProductWitness& w);

/// Three-move proof with an externally supplied challenge, so the interactive
/// form (used by the special-soundness extractor) and the Fiat-Shamir form
/// share this implementation.
ProductProof prove_product(const GroupParams& params, const ProductWitness& w,
                           const Challenge& e, Rng& rng);

/// Deterministic core taking explicit blindings b1..b5; tests pin these.
ProductProof prove_product_with_blindings(const GroupParams& params, const ProductWitness& w,
                                          const Challenge& e, const std::array<Scalar, 5>& b);

/// Checks commit(z1,z2) = alpha * c0^e, commit(z3,z4) = beta * c1^e and
/// commit_{(c0,h)}(z3,z5) = gamma * c01^e.
bool verify_product(const GroupParams& params, const Commitment& c0, const Commitment& c1,
                    const Commitment& c01, const Challenge& e, const ProductProof& proof);

/// Prover-local state between the commit and response phases of the batched
/// proof: the drawn blindings plus the first messages they produced.
struct AuthRelationState {
    AuthRelationFirstMessage first;
    std::vector<std::array<Scalar, 7>> blindings;
    ProofMode mode = ProofMode::Repaired;
};

/// Commit phase of the batched proof: draws b1..b7 (per index by default)
/// and produces the alpha/beta first messages. The first messages must be
/// folded into the Fiat-Shamir challenge before respond_auth_relations.
AuthRelationState commit_auth_relations(const GroupParams& params, std::span<const Scalar> f0,
                                        std::span<const Scalar> r0, std::span<const Scalar> f1,
                                        std::span<const Scalar> r1, Rng& rng,
                                        ProofMode mode = ProofMode::Repaired);

/// Response phase: assembles the z-vectors for the challenge.
AuthRelationProof respond_auth_relations(const GroupParams& params, const AuthRelationState& st,
                                         std::span<const Scalar> f0, std::span<const Scalar> r0,
                                         std::span<const Scalar> f1, std::span<const Scalar> r1,
                                         std::span<const Scalar> r00, std::span<const Scalar> r11,
                                         std::span<const Scalar> r01, const Challenge& e);

/// One-shot form with an externally supplied challenge (interactive setting
/// and tests). All seven scalar vectors must share one length.
AuthRelationProof prove_auth_relations(const GroupParams& params,
                                       std::span<const Scalar> f0, std::span<const Scalar> r0,
                                       std::span<const Scalar> f1, std::span<const Scalar> r1,
                                       std::span<const Scalar> r00, std::span<const Scalar> r11,
                                       std::span<const Scalar> r01, const Challenge& e, Rng& rng,
                                       ProofMode mode = ProofMode::Repaired);

/// Core with caller-provided blindings, one array of b1..b7 per index.
AuthRelationProof prove_auth_relations_with_blindings(
    const GroupParams& params, std::span<const Scalar> f0, std::span<const Scalar> r0,
    std::span<const Scalar> f1, std::span<const Scalar> r1, std::span<const Scalar> r00,
    std::span<const Scalar> r11, std::span<const Scalar> r01, const Challenge& e,
    std::span<const std::array<Scalar, 7>> blindings, ProofMode mode);

/// Returns the first failing (family, index), or nullopt when all 5N
/// equations hold. Order-independent conjunction; evaluated index-major.
std::optional<RelationFailure> verify_auth_relations(
    const GroupParams& params, const CommitmentVector& c0, const CommitmentVector& c1,
    const CommitmentVector& c00, const CommitmentVector& c11, const CommitmentVector& c01,
    const Challenge& e, const AuthRelationProof& proof);

}  // namespace mulproof

}  // namespace biozero

#endif  // BIOZERO_MULPROOF_HPP_
