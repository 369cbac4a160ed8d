#include "biozero/rangeproof.hpp"

#include <stdexcept>

#include "biozero/encoding.hpp"

namespace biozero {

namespace {

const char kRangeTag[] = "biozero/v1/range-bits";

std::vector<uint8_t> keys_encoding(uint8_t backend, uint32_t bits, const Digest& digest) {
    ByteWriter w;
    w.bytes(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("BZRK"), 4));
    w.u8(1);  // format version
    w.u8(backend);
    w.u32(bits);
    w.bytes(digest);
    return w.take();
}

}  // namespace

std::vector<uint8_t> RangeKeys::serialize() const { return keys_encoding(pk.backend, bits, pk.params_digest); }

RangeKeys RangeKeys::deserialize(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    const uint8_t magic[4] = {'B', 'Z', 'R', 'K'};
    r.expect_magic(magic, "range keys");
    if (r.u8() != 1) throw DecodeError("unsupported range key version");
    uint8_t backend = r.u8();
    if (backend != kRangeBackendBitDecomposition) throw DecodeError("unknown range backend");
    uint32_t bits = r.u32();
    auto dg = r.bytes(32);
    RangeKeys keys;
    keys.bits = bits;
    keys.pk = RangeProvingKey{backend, bits, {}};
    keys.vk = RangeVerificationKey{backend, bits, {}};
    std::copy(dg.begin(), dg.end(), keys.pk.params_digest.begin());
    std::copy(dg.begin(), dg.end(), keys.vk.params_digest.begin());
    if (!r.done()) throw DecodeError("trailing bytes in range keys");
    return keys;
}

std::vector<uint8_t> RangeProof::serialize(const GroupParams& params) const {
    ByteWriter w;
    w.u8(backend);
    w.u32(bits);
    auto elems = [&](const std::vector<GroupElement>& v) {
        w.u32(uint32_t(v.size()));
        for (const auto& e : v) w.element(params, e);
    };
    auto orproofs = [&](const std::vector<BitOrProof>& v) {
        w.u32(uint32_t(v.size()));
        for (const auto& o : v) {
            w.element(params, o.a0);
            w.element(params, o.a1);
            w.scalar(params, o.e0);
            w.scalar(params, o.z0);
            w.scalar(params, o.z1);
        }
    };
    elems(d_bits);
    elems(t_bits);
    orproofs(d_or);
    orproofs(t_or);
    w.element(params, agg_d_a);
    w.scalar(params, agg_d_z);
    w.element(params, agg_t_a);
    w.scalar(params, agg_t_z);
    return w.take();
}

RangeProof RangeProof::deserialize(const GroupParams& params, std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    RangeProof p;
    p.backend = r.u8();
    if (p.backend != kRangeBackendBitDecomposition) throw DecodeError("unknown range backend");
    p.bits = r.u32();
    if (p.bits == 0 || p.bits > 4096) throw DecodeError("range proof bit length out of bounds");
    auto elems = [&](std::vector<GroupElement>& v) {
        uint32_t n = r.u32();
        if (n != p.bits) throw DecodeError("range proof array length mismatch");
        v.reserve(n);
        for (uint32_t i = 0; i < n; ++i) v.push_back(r.element(params));
    };
    auto orproofs = [&](std::vector<BitOrProof>& v) {
        uint32_t n = r.u32();
        if (n != p.bits) throw DecodeError("range proof array length mismatch");
        v.reserve(n);
        for (uint32_t i = 0; i < n; ++i) {
            BitOrProof o;
            o.a0 = r.element(params);
            o.a1 = r.element(params);
            o.e0 = r.scalar(params);
            o.z0 = r.scalar(params);
            o.z1 = r.scalar(params);
            v.push_back(std::move(o));
        }
    };
    elems(p.d_bits);
    elems(p.t_bits);
    orproofs(p.d_or);
    orproofs(p.t_or);
    p.agg_d_a = r.element(params);
    p.agg_d_z = r.scalar(params);
    p.agg_t_a = r.element(params);
    p.agg_t_z = r.scalar(params);
    if (!r.done()) throw DecodeError("trailing bytes in range proof");
    return p;
}

namespace rangeproof {

namespace {

/// Challenge over everything the verifier sees before the responses.
Scalar range_challenge(const GroupParams& params, uint32_t bits, const Scalar& epsilon,
                       const GroupElement& c_d, const RangeProof& p) {
    ByteWriter w;
    w.bytes(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(kRangeTag),
                                     sizeof(kRangeTag) - 1));
    w.u32(bits);
    w.scalar(params, epsilon);
    w.element(params, c_d);
    for (const auto& e : p.d_bits) w.element(params, e);
    for (const auto& e : p.t_bits) w.element(params, e);
    for (const auto& o : p.d_or) {
        w.element(params, o.a0);
        w.element(params, o.a1);
    }
    for (const auto& o : p.t_or) {
        w.element(params, o.a0);
        w.element(params, o.a1);
    }
    w.element(params, p.agg_d_a);
    w.element(params, p.agg_t_a);
    Digest dg = sha256(w.data());
    mpz_class v;
    mpz_import(v.get_mpz_t(), dg.size(), 1, 1, 1, 0, dg.data());
    return params.reduce(v);
}

void check_epsilon(const GroupParams& params, uint32_t bits, const Scalar& epsilon) {
    if (epsilon.value < 1) throw std::invalid_argument("epsilon must be at least 1");
    mpz_class bound = mpz_class(1) << bits;
    if (epsilon.value > bound) throw std::invalid_argument("epsilon exceeds range domain 2^L");
}

struct BitWitness {
    int bit = 0;
    Scalar blinding;
};

/// Fold Pi bits[j]^(2^j) from most significant down: L squarings, L multiplies.
GroupElement weighted_product(const GroupParams& params, const std::vector<GroupElement>& bits) {
    GroupElement acc = params.identity();
    for (size_t j = bits.size(); j-- > 0;) {
        acc = params.mul(acc, acc);
        acc = params.mul(acc, bits[j]);
    }
    return acc;
}

RangeProof prove_impl(const GroupParams& params, const RangeKeys& keys, const Scalar& d,
                      const Scalar& r_d, const Commitment& c_d, const Scalar& epsilon, Rng& rng) {
    const uint32_t L = keys.bits;
    check_epsilon(params, L, epsilon);
    if (pedersen::commit(params, Opening{d, r_d}).element != c_d.element) {
        throw std::invalid_argument("range prover: opening does not match commitment");
    }

    // t = epsilon - 1 - d, computed over the integers. The forced-test path
    // may hand us d >= epsilon; reduce mod q so the (unsound) proof still
    // assembles and the verifier gets to reject it.
    mpz_class t_int = epsilon.value - 1 - d.value;
    Scalar t = params.reduce(t_int);
    Scalar d_red = params.reduce(d.value);

    RangeProof proof;
    proof.bits = L;

    std::vector<BitWitness> dw(L), tw(L);
    auto commit_bits = [&](const Scalar& v, std::vector<GroupElement>& out,
                           std::vector<BitWitness>& wit) {
        out.resize(L);
        for (uint32_t j = 0; j < L; ++j) {
            wit[j].bit = mpz_tstbit(v.value.get_mpz_t(), j);
            wit[j].blinding = params.random_scalar(rng);
            out[j] = params.dual_exp_gh(params.scalar_from_u64(uint64_t(wit[j].bit)),
                                        wit[j].blinding);
        }
    };
    commit_bits(d_red, proof.d_bits, dw);
    commit_bits(t, proof.t_bits, tw);

    // First messages. Real branch: a = h^w. Simulated branch: pick (e_sim,
    // z_sim) and set a = h^z_sim * target^(-e_sim).
    struct BitState {
        Scalar w, e_sim, z_sim;
    };
    std::vector<BitState> ds(L), ts(L);
    auto first_messages = [&](const std::vector<GroupElement>& bits,
                              const std::vector<BitWitness>& wit, std::vector<BitState>& st,
                              std::vector<RangeProof::BitOrProof>& out) {
        out.resize(L);
        GroupElement inv_g = params.inv(params.g());
        for (uint32_t j = 0; j < L; ++j) {
            st[j].w = params.random_scalar(rng);
            st[j].e_sim = params.random_scalar(rng);
            st[j].z_sim = params.random_scalar(rng);
            GroupElement a_real = params.exp(params.h(), st[j].w);
            // target of the simulated branch: B (claiming bit=0) or B/g (bit=1)
            GroupElement target = wit[j].bit == 0 ? params.mul(bits[j], inv_g) : bits[j];
            GroupElement a_sim =
                params.dual_exp(params.inv(target), st[j].e_sim, params.h(), st[j].z_sim);
            if (wit[j].bit == 0) {
                out[j].a0 = a_real;
                out[j].a1 = a_sim;
            } else {
                out[j].a0 = a_sim;
                out[j].a1 = a_real;
            }
        }
    };
    first_messages(proof.d_bits, dw, ds, proof.d_or);
    first_messages(proof.t_bits, tw, ts, proof.t_or);

    // Aggregation Schnorr proofs for dlog_h of D/c_d and T/c_t.
    Scalar w_d = params.random_scalar(rng);
    Scalar w_t = params.random_scalar(rng);
    proof.agg_d_a = params.exp(params.h(), w_d);
    proof.agg_t_a = params.exp(params.h(), w_t);

    Scalar e = range_challenge(params, L, epsilon, c_d.element, proof);

    auto complete = [&](const std::vector<BitWitness>& wit, const std::vector<BitState>& st,
                        std::vector<RangeProof::BitOrProof>& out) {
        for (uint32_t j = 0; j < L; ++j) {
            Scalar e_real = params.s_sub(e, st[j].e_sim);
            Scalar z_real = params.s_add(st[j].w, params.s_mul(e_real, wit[j].blinding));
            if (wit[j].bit == 0) {
                out[j].e0 = e_real;
                out[j].z0 = z_real;
                out[j].z1 = st[j].z_sim;
            } else {
                out[j].e0 = st[j].e_sim;
                out[j].z0 = st[j].z_sim;
                out[j].z1 = z_real;
            }
        }
    };
    complete(dw, ds, proof.d_or);
    complete(tw, ts, proof.t_or);

    // rho_d = sum 2^j s_j - r_d opens D/c_d to base h; rho_t likewise for T/c_t.
    Scalar sigma_d, sigma_t;
    for (uint32_t j = 0; j < L; ++j) {
        Scalar pow2 = params.reduce(mpz_class(1) << j);
        sigma_d = params.s_add(sigma_d, params.s_mul(pow2, dw[j].blinding));
        sigma_t = params.s_add(sigma_t, params.s_mul(pow2, tw[j].blinding));
    }
    Scalar rho_d = params.s_sub(sigma_d, r_d);
    Scalar rho_t = params.s_add(sigma_t, r_d);
    proof.agg_d_z = params.s_add(w_d, params.s_mul(e, rho_d));
    proof.agg_t_z = params.s_add(w_t, params.s_mul(e, rho_t));
    return proof;
}

}  // namespace

RangeKeys setup(const GroupParams& params, uint32_t bits) {
    if (bits == 0) throw std::invalid_argument("range setup: bit length must be positive");
    mpz_class need = mpz_class(1) << (bits + 1);
    if (need > params.q()) {
        throw std::invalid_argument("range setup: 2^(L+1) exceeds scalar capacity q");
    }
    Digest dg = sha256(params.canonical_encoding());
    RangeKeys keys;
    keys.bits = bits;
    keys.pk = RangeProvingKey{kRangeBackendBitDecomposition, bits, dg};
    keys.vk = RangeVerificationKey{kRangeBackendBitDecomposition, bits, dg};
    return keys;
}

RangeProof prove(const GroupParams& params, const RangeKeys& keys, const Scalar& d,
                 const Scalar& r_d, const Commitment& c_d, const Scalar& epsilon, Rng& rng) {
    check_epsilon(params, keys.bits, epsilon);
    if (d.value < 0 || d.value >= epsilon.value) {
        throw std::invalid_argument("range prover: d is not inside [0, epsilon)");
    }
    return prove_impl(params, keys, d, r_d, c_d, epsilon, rng);
}

bool verify(const GroupParams& params, const RangeKeys& keys, const Commitment& c_d,
            const Scalar& epsilon, const RangeProof& proof) {
    const uint32_t L = keys.bits;
    if (proof.backend != kRangeBackendBitDecomposition) return false;
    if (proof.bits != L) return false;
    if (proof.d_bits.size() != L || proof.t_bits.size() != L || proof.d_or.size() != L ||
        proof.t_or.size() != L) {
        return false;
    }
    if (epsilon.value < 1 || epsilon.value > (mpz_class(1) << L)) return false;

    Scalar e = range_challenge(params, L, epsilon, c_d.element, proof);
    GroupElement inv_g = params.inv(params.g());

    auto check_bits = [&](const std::vector<GroupElement>& bits,
                          const std::vector<RangeProof::BitOrProof>& ors) {
        for (uint32_t j = 0; j < L; ++j) {
            const auto& o = ors[j];
            Scalar e1 = params.s_sub(e, o.e0);
            // h^z0 = a0 * B^e0
            GroupElement lhs = params.dual_exp_gh_vartime(Scalar(), o.z0);
            GroupElement rhs = params.mul(o.a0, params.exp_vartime(bits[j], o.e0));
            if (lhs != rhs) return false;
            // h^z1 = a1 * (B/g)^e1
            lhs = params.dual_exp_gh_vartime(Scalar(), o.z1);
            rhs = params.mul(o.a1, params.exp_vartime(params.mul(bits[j], inv_g), e1));
            if (lhs != rhs) return false;
        }
        return true;
    };
    if (!check_bits(proof.d_bits, proof.d_or)) return false;
    if (!check_bits(proof.t_bits, proof.t_or)) return false;

    GroupElement inv_cd = params.inv(c_d.element);

    // D/c_d must be an h-power with the proved exponent.
    GroupElement x_d = params.mul(weighted_product(params, proof.d_bits), inv_cd);
    GroupElement lhs = params.dual_exp_gh_vartime(Scalar(), proof.agg_d_z);
    GroupElement rhs = params.mul(proof.agg_d_a, params.exp_vartime(x_d, e));
    if (lhs != rhs) return false;

    // T/(g^(eps-1) / c_d) likewise ties the t-side to epsilon-1-d.
    Scalar eps_minus_1 = params.reduce(epsilon.value - 1);
    GroupElement c_t = params.mul(params.dual_exp_gh_vartime(eps_minus_1, Scalar()),
                                  inv_cd);
    GroupElement x_t = params.mul(weighted_product(params, proof.t_bits), params.inv(c_t));
    lhs = params.dual_exp_gh_vartime(Scalar(), proof.agg_t_z);
    rhs = params.mul(proof.agg_t_a, params.exp_vartime(x_t, e));
    return lhs == rhs;
}

namespace testing {

RangeProof prove_without_range_guard(const GroupParams& params, const RangeKeys& keys,
                                     const Scalar& d, const Scalar& r_d, const Commitment& c_d,
                                     const Scalar& epsilon, Rng& rng) {
    return prove_impl(params, keys, d, r_d, c_d, epsilon, rng);
}

}  // namespace testing

}  // namespace rangeproof
}  // namespace biozero
