#include "biozero/mulproof.hpp"

#include <stdexcept>

namespace biozero {

std::string RelationFailure::describe() const {
    return "relation equation family " + std::to_string(family) + " failed at index " +
           std::to_string(index);
}

AuthRelationFirstMessage AuthRelationProof::first_message() const {
    AuthRelationFirstMessage m;
    m.entries.reserve(entries.size());
    for (const auto& e : entries) {
        m.entries.push_back({e.alpha1, e.alpha2, e.beta1, e.beta2, e.beta3});
    }
    return m;
}

namespace mulproof {

namespace {

void require_equal_lengths(std::initializer_list<size_t> lens, const char* what) {
    auto it = lens.begin();
    size_t n = *it;
    for (size_t l : lens) {
        if (l != n) throw std::invalid_argument(std::string(what) + ": vector length mismatch");
    }
    if (n == 0) throw std::invalid_argument(std::string(what) + ": empty vectors");
}

}  // namespace

ProductCommitments product_commitments(const GroupParams& params, const ProductWitness& w) {
    Scalar prod = params.s_mul(w.opening0.f, w.opening1.f);
    return ProductCommitments{
        pedersen::commit(params, w.opening0),
        pedersen::commit(params, w.opening1),
        pedersen::commit(params, Opening{prod, w.r01}),
    };
}

ProductProof prove_product_with_blindings(const GroupParams& params, const ProductWitness& w,
                                          const Challenge& e, const std::array<Scalar, 5>& b) {
    const Scalar& f0 = w.opening0.f;
    const Scalar& r0 = w.opening0.r;
    const Scalar& f1 = w.opening1.f;
    const Scalar& r1 = w.opening1.r;

    Commitment c0 = pedersen::commit(params, w.opening0);

    ProductProof proof;
    proof.alpha = pedersen::commit(params, Opening{b[0], b[1]});
    proof.beta = pedersen::commit(params, Opening{b[2], b[3]});
    proof.gamma = pedersen::commit(params, Opening{b[2], b[4]}, c0.element, params.h());
    proof.z1 = params.s_add(b[0], params.s_mul(e.e, f0));
    proof.z2 = params.s_add(b[1], params.s_mul(e.e, r0));
    proof.z3 = params.s_add(b[2], params.s_mul(e.e, f1));
    proof.z4 = params.s_add(b[3], params.s_mul(e.e, r1));
    // c01 = c0^f1 * h^(r01 - r0*f1), so the gamma response blinds that exponent.
    Scalar t = params.s_sub(w.r01, params.s_mul(r0, f1));
    proof.z5 = params.s_add(b[4], params.s_mul(e.e, t));
    return proof;
}

ProductProof prove_product(const GroupParams& params, const ProductWitness& w, const Challenge& e,
                           Rng& rng) {
    std::array<Scalar, 5> b;
    for (auto& s : b) s = params.random_scalar(rng);
    return prove_product_with_blindings(params, w, e, b);
}

bool verify_product(const GroupParams& params, const Commitment& c0, const Commitment& c1,
                    const Commitment& c01, const Challenge& e, const ProductProof& proof) {
    GroupElement lhs1 = pedersen::commit_value_vartime(params, proof.z1, proof.z2);
    GroupElement rhs1 = params.mul(proof.alpha.element, params.exp_vartime(c0.element, e.e));
    if (lhs1 != rhs1) return false;

    GroupElement lhs2 = pedersen::commit_value_vartime(params, proof.z3, proof.z4);
    GroupElement rhs2 = params.mul(proof.beta.element, params.exp_vartime(c1.element, e.e));
    if (lhs2 != rhs2) return false;

    GroupElement lhs3 = pedersen::commit_value_vartime(params, proof.z3, proof.z5,
                                                       c0.element, params.h());
    GroupElement rhs3 = params.mul(proof.gamma.element, params.exp_vartime(c01.element, e.e));
    return lhs3 == rhs3;
}

namespace {

AuthRelationState commit_with_blindings(const GroupParams& params, std::span<const Scalar> f0,
                                        std::span<const Scalar> r0, std::span<const Scalar> f1,
                                        std::span<const Scalar> r1,
                                        std::vector<std::array<Scalar, 7>> bs, ProofMode mode) {
    const size_t n = f0.size();
    AuthRelationState st;
    st.mode = mode;
    st.blindings = std::move(bs);
    st.first.entries.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const auto& b = st.blindings[i];
        GroupElement c0i = params.dual_exp_gh(f0[i], r0[i]);
        GroupElement c1i = params.dual_exp_gh(f1[i], r1[i]);
        auto& ent = st.first.entries[i];
        ent.alpha1 = params.dual_exp_gh(b[0], b[1]);
        ent.alpha2 = params.dual_exp_gh(b[2], b[3]);
        ent.beta1 = params.dual_exp(c0i, b[0], params.h(), b[4]);
        ent.beta2 = params.dual_exp(c1i, b[2], params.h(), b[5]);
        ent.beta3 = params.dual_exp(c0i, b[2], params.h(), b[6]);
    }
    return st;
}

}  // namespace

AuthRelationState commit_auth_relations(const GroupParams& params, std::span<const Scalar> f0,
                                        std::span<const Scalar> r0, std::span<const Scalar> f1,
                                        std::span<const Scalar> r1, Rng& rng, ProofMode mode) {
    require_equal_lengths({f0.size(), r0.size(), f1.size(), r1.size()}, "commit_auth_relations");
    const size_t n = f0.size();
    std::vector<std::array<Scalar, 7>> bs(n);
    if (mode == ProofMode::PaperFaithful) {
        std::array<Scalar, 7> shared;
        for (auto& s : shared) s = params.random_scalar(rng);
        for (auto& b : bs) b = shared;
    } else {
        for (auto& b : bs) {
            for (auto& s : b) s = params.random_scalar(rng);
        }
    }
    return commit_with_blindings(params, f0, r0, f1, r1, std::move(bs), mode);
}

AuthRelationProof respond_auth_relations(const GroupParams& params, const AuthRelationState& st,
                                         std::span<const Scalar> f0, std::span<const Scalar> r0,
                                         std::span<const Scalar> f1, std::span<const Scalar> r1,
                                         std::span<const Scalar> r00, std::span<const Scalar> r11,
                                         std::span<const Scalar> r01, const Challenge& e) {
    require_equal_lengths({f0.size(), r0.size(), f1.size(), r1.size(), r00.size(), r11.size(),
                           r01.size(), st.blindings.size(), st.first.entries.size()},
                          "respond_auth_relations");
    const size_t n = f0.size();
    AuthRelationProof proof;
    proof.mode = st.mode;
    proof.entries.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const auto& b = st.blindings[i];
        const auto& fm = st.first.entries[i];
        auto& ent = proof.entries[i];
        ent.alpha1 = fm.alpha1;
        ent.alpha2 = fm.alpha2;
        ent.beta1 = fm.beta1;
        ent.beta2 = fm.beta2;
        ent.beta3 = fm.beta3;
        ent.z1 = params.s_add(b[0], params.s_mul(e.e, f0[i]));
        ent.z2 = params.s_add(b[1], params.s_mul(e.e, r0[i]));
        ent.z3 = params.s_add(b[2], params.s_mul(e.e, f1[i]));
        ent.z4 = params.s_add(b[3], params.s_mul(e.e, r1[i]));
        ent.z5 = params.s_add(b[4], params.s_mul(e.e, params.s_sub(r00[i], params.s_mul(r0[i], f0[i]))));
        ent.z6 = params.s_add(b[5], params.s_mul(e.e, params.s_sub(r11[i], params.s_mul(r1[i], f1[i]))));
        ent.z7 = params.s_add(b[6], params.s_mul(e.e, params.s_sub(r01[i], params.s_mul(r0[i], f1[i]))));
    }
    return proof;
}

AuthRelationProof prove_auth_relations_with_blindings(
    const GroupParams& params, std::span<const Scalar> f0, std::span<const Scalar> r0,
    std::span<const Scalar> f1, std::span<const Scalar> r1, std::span<const Scalar> r00,
    std::span<const Scalar> r11, std::span<const Scalar> r01, const Challenge& e,
    std::span<const std::array<Scalar, 7>> blindings, ProofMode mode) {
    require_equal_lengths({f0.size(), r0.size(), f1.size(), r1.size(), r00.size(), r11.size(),
                           r01.size(), blindings.size()},
                          "prove_auth_relations");
    std::vector<std::array<Scalar, 7>> bs(blindings.begin(), blindings.end());
    AuthRelationState st = commit_with_blindings(params, f0, r0, f1, r1, std::move(bs), mode);
    return respond_auth_relations(params, st, f0, r0, f1, r1, r00, r11, r01, e);
}

AuthRelationProof prove_auth_relations(const GroupParams& params, std::span<const Scalar> f0,
                                       std::span<const Scalar> r0, std::span<const Scalar> f1,
                                       std::span<const Scalar> r1, std::span<const Scalar> r00,
                                       std::span<const Scalar> r11, std::span<const Scalar> r01,
                                       const Challenge& e, Rng& rng, ProofMode mode) {
    require_equal_lengths({f0.size(), r0.size(), f1.size(), r1.size(), r00.size(), r11.size(),
                           r01.size()},
                          "prove_auth_relations");
    AuthRelationState st = commit_auth_relations(params, f0, r0, f1, r1, rng, mode);
    return respond_auth_relations(params, st, f0, r0, f1, r1, r00, r11, r01, e);
}

std::optional<RelationFailure> verify_auth_relations(
    const GroupParams& params, const CommitmentVector& c0, const CommitmentVector& c1,
    const CommitmentVector& c00, const CommitmentVector& c11, const CommitmentVector& c01,
    const Challenge& e, const AuthRelationProof& proof) {
    const size_t n = c0.size();
    if (c1.size() != n || c00.size() != n || c11.size() != n || c01.size() != n ||
        proof.entries.size() != n) {
        throw std::invalid_argument("verify_auth_relations: vector length mismatch");
    }
    const GroupElement h = params.h();
    for (size_t i = 0; i < n; ++i) {
        const auto& ent = proof.entries[i];

        // (1) commit(z1, z2) = alpha1 * c0_i^e
        GroupElement lhs = pedersen::commit_value_vartime(params, ent.z1, ent.z2);
        GroupElement rhs = params.mul(ent.alpha1, params.exp_vartime(c0[i].element, e.e));
        if (lhs != rhs) return RelationFailure{1, i};

        // (2) c0_i^z1 * h^z5 = beta1 * c00_i^e
        lhs = pedersen::commit_value_vartime(params, ent.z1, ent.z5, c0[i].element, h);
        rhs = params.mul(ent.beta1, params.exp_vartime(c00[i].element, e.e));
        if (lhs != rhs) return RelationFailure{2, i};

        // (3) commit(z3, z4) = alpha2 * c1_i^e
        lhs = pedersen::commit_value_vartime(params, ent.z3, ent.z4);
        rhs = params.mul(ent.alpha2, params.exp_vartime(c1[i].element, e.e));
        if (lhs != rhs) return RelationFailure{3, i};

        // (4) c1_i^z3 * h^z6 = beta2 * c11_i^e
        lhs = pedersen::commit_value_vartime(params, ent.z3, ent.z6, c1[i].element, h);
        rhs = params.mul(ent.beta2, params.exp_vartime(c11[i].element, e.e));
        if (lhs != rhs) return RelationFailure{4, i};

        // (5) c0_i^z3 * h^z7 = beta3 * c01_i^e
        lhs = pedersen::commit_value_vartime(params, ent.z3, ent.z7, c0[i].element, h);
        rhs = params.mul(ent.beta3, params.exp_vartime(c01[i].element, e.e));
        if (lhs != rhs) return RelationFailure{5, i};
    }
    return std::nullopt;
}

}  // namespace mulproof
}  // namespace biozero
