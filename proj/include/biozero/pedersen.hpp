#ifndef BIOZERO_PEDERSEN_HPP_
#define BIOZERO_PEDERSEN_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "biozero/group.hpp"

namespace biozero {

/// The secret side of a commitment: message f and blinding factor r.
struct Opening {
    Scalar f;
    Scalar r;
};

/// Pedersen commitment base_g^f * base_h^r. Commitments carry their base pair
/// so the multiplication proof's base-(c, h) commitments go through the same
/// code path; an absent pair means the default (g, h).
struct Commitment {
    GroupElement element;
    std::optional<std::pair<GroupElement, GroupElement>> bases;

    friend bool operator==(const Commitment& a, const Commitment& b) {
        return a.element == b.element;
    }
    friend bool operator!=(const Commitment& a, const Commitment& b) {
        return a.element != b.element;
    }
};

using CommitmentVector = std::vector<Commitment>;

namespace pedersen {

/// Commitment under the default bases (g, h). Fixed-sequence arithmetic;
/// safe for secret openings.
Commitment commit(const GroupParams& params, const Opening& opening);

/// Commitment under explicit bases, e.g. (c_i, h) inside the relation proofs.
Commitment commit(const GroupParams& params, const Opening& opening,
                  const GroupElement& base_g, const GroupElement& base_h);

/// Variable-time recomputation for verifier-side checks on public values.
GroupElement commit_value_vartime(const GroupParams& params, const Scalar& f, const Scalar& r);
GroupElement commit_value_vartime(const GroupParams& params, const Scalar& f, const Scalar& r,
                                  const GroupElement& base_g, const GroupElement& base_h);

/// Homomorphic addition: commits to (f_a + f_b, r_a + r_b).
/// Throws std::invalid_argument when the base pairs differ.
Commitment add(const GroupParams& params, const Commitment& a, const Commitment& b);

/// Homomorphic subtraction: commits to (f_a - f_b, r_a - r_b).
Commitment sub(const GroupParams& params, const Commitment& a, const Commitment& b);

/// Homomorphic scaling: a^k commits to (k*f, k*r).
Commitment scale(const GroupParams& params, const Commitment& a, const Scalar& k);

bool verify_opening(const GroupParams& params, const Commitment& c, const Opening& opening);

}  // namespace pedersen

}  // namespace biozero

#endif  // BIOZERO_PEDERSEN_HPP_
