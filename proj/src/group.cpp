#include "biozero/group.hpp"

#include <cstring>

#include "biozero/hash.hpp"

namespace biozero {

namespace {

// RFC 5114 section 2.3: 2048-bit MODP group with 256-bit prime-order subgroup.
const char* kRfc5114P =
    "87A8E61DB4B6663CFFBBD19C651959998CEEF608660DD0F25D2CEED4435E3B00"
    "E00DF8F1D61957D4FAF7DF4561B2AA3016C3D91134096FAA3BF4296D830E9A7C"
    "209E0C6497517ABD5A8A9D306BCF67ED91F9E6725B4758C022E0B1EF4275BF7B"
    "6C5BFC11D45F9088B941F54EB1E59BB8BC39A0BF12307F5C4FDB70C581B23F76"
    "B63ACAE1CAA6B7902D52526735488A0EF13C6D9A51BFA4AB3AD8347796524D8E"
    "F6A167B5A41825D967E144E5140564251CCACB83E6B486F6B3CA3F7971506026"
    "C0B857F689962856DED4010ABD0BE621C3A3960A54E710C375F26375D7014103"
    "A4B54330C198AF126116D2276E11715F693877FAD7EF09CADB094AE91E1A1597";
const char* kRfc5114G =
    "3FB32C9B73134D0B2E77506660EDBD484CA7B18F21EF205407F4793A1A0BA125"
    "10DBC15077BE463FFF4FED4AAC0BB555BE3A6C1B0C6B47B1BC3773BF7E8C6F62"
    "901228F8C28CBB18A55AE31341000A650196F931C77A57F2DDF463E5E9EC144B"
    "777DE62AAAB8A8628AC376D282D6ED3864E67982428EBC831D14348F6F2F9193"
    "B5045AF2767164E1DFC967C1FB3F2E55A4BD1BFFE83B9C80D052B985D182EA0A"
    "DB2A3B7313D3FE14C8484B1E052588B9B7D2BBD2DF016199ECD06E1557CD0915"
    "B3353BBB64E0EC377FD028370DF92B52C7891428CDC67EB6184B523D1DB246C3"
    "2F63078490F00EF8D647D148D47954515E2327CFEF98C582664B4C0F6CC41659";
const char* kRfc5114Q =
    "8CF83642A709A097B447997640129DA299B1A47D1EB3750BA308B0FE64F5FBD3";

const char kGeneratorHTag[] = "biozero/v1/generator-h";
const char kHashToGroupTag[] = "biozero/v1/hash-to-group";

thread_local OpCounts* t_meter = nullptr;
thread_local uint64_t t_last_exp_iterations = 0;

void append_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

std::vector<uint8_t> export_fixed(const mpz_class& v, size_t len) {
    std::vector<uint8_t> out(len, 0);
    if (mpz_sgn(v.get_mpz_t()) == 0) return out;
    size_t need = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    if (need > len) throw std::invalid_argument("value does not fit encoding length");
    size_t count = 0;
    mpz_export(out.data() + (len - need), &count, 1, 1, 1, 0, v.get_mpz_t());
    return out;
}

mpz_class import_bytes(std::span<const uint8_t> bytes) {
    mpz_class v;
    if (!bytes.empty()) {
        mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    }
    return v;
}

}  // namespace

namespace detail {

OpCounts* current_meter() { return t_meter; }
void set_meter(OpCounts* m) { t_meter = m; }
void count_exp(uint64_t n) {
    if (t_meter) t_meter->exp += n;
}
void count_mul(uint64_t n) {
    if (t_meter) t_meter->mul += n;
}
void count_hash(uint64_t n) {
    if (t_meter) t_meter->hash += n;
}
uint64_t last_exp_iterations() { return t_last_exp_iterations; }

/// Precomputed 4-bit comb over the fixed base pair (g, h):
/// table[pos][a*16+b] = g^(a << 4*pos) * h^(b << 4*pos) mod p.
class FixedBaseDualTable {
public:
    static constexpr unsigned kWindowBits = 4;

    FixedBaseDualTable(const mpz_class& p, const mpz_class& g, const mpz_class& h, size_t q_bits)
        : p_(p), positions_((q_bits + kWindowBits - 1) / kWindowBits) {
        table_.resize(positions_);
        mpz_class gpow = g, hpow = h, t;
        for (size_t pos = 0; pos < positions_; ++pos) {
            std::array<mpz_class, 16> gp, hp;
            gp[0] = 1;
            hp[0] = 1;
            for (int i = 1; i < 16; ++i) {
                t = gp[i - 1] * gpow;
                mpz_mod(gp[i].get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
                t = hp[i - 1] * hpow;
                mpz_mod(hp[i].get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
            }
            for (int a = 0; a < 16; ++a) {
                for (int b = 0; b < 16; ++b) {
                    t = gp[a] * hp[b];
                    mpz_mod(table_[pos][a * 16 + b].get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
                }
            }
            for (unsigned s = 0; s < kWindowBits; ++s) {
                t = gpow * gpow;
                mpz_mod(gpow.get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
                t = hpow * hpow;
                mpz_mod(hpow.get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
            }
        }
    }

    // Fixed multiplication sequence: every window position contributes one
    // multiply, including zero windows, so the op pattern does not depend on
    // the exponent values.
    mpz_class combine_const(const mpz_class& kg, const mpz_class& kh) const {
        mpz_class acc(1), t;
        for (size_t pos = 0; pos < positions_; ++pos) {
            unsigned a = window_at(kg, pos);
            unsigned b = window_at(kh, pos);
            t = acc * table_[pos][a * 16 + b];
            mpz_mod(acc.get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
        }
        return acc;
    }

    mpz_class combine_vartime(const mpz_class& kg, const mpz_class& kh) const {
        mpz_class acc(1), t;
        for (size_t pos = 0; pos < positions_; ++pos) {
            unsigned a = window_at(kg, pos);
            unsigned b = window_at(kh, pos);
            if (a == 0 && b == 0) continue;
            t = acc * table_[pos][a * 16 + b];
            mpz_mod(acc.get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
        }
        return acc;
    }

private:
    static unsigned window_at(const mpz_class& k, size_t pos) {
        unsigned w = 0;
        for (unsigned i = 0; i < kWindowBits; ++i) {
            w |= unsigned(mpz_tstbit(k.get_mpz_t(), pos * kWindowBits + i)) << i;
        }
        return w;
    }

    mpz_class p_;
    size_t positions_;
    std::vector<std::array<mpz_class, 256>> table_;
};

}  // namespace detail

GroupParams::GroupParams(GroupProfile profile, mpz_class p, mpz_class q, mpz_class g, mpz_class h)
    : profile_(profile), p_(std::move(p)), q_(std::move(q)), g_(std::move(g)), h_(std::move(h)) {
    element_bytes_ = (mpz_sizeinbase(p_.get_mpz_t(), 2) + 7) / 8;
    scalar_bytes_ = (mpz_sizeinbase(q_.get_mpz_t(), 2) + 7) / 8;
    q_bits_ = mpz_sizeinbase(q_.get_mpz_t(), 2);
    gh_table_ = std::make_unique<detail::FixedBaseDualTable>(p_, g_, h_, q_bits_);
}

GroupParams::~GroupParams() = default;
GroupParams::GroupParams(GroupParams&&) noexcept = default;
GroupParams& GroupParams::operator=(GroupParams&&) noexcept = default;

GroupParams GroupParams::setup(GroupProfile profile) {
    if (profile == GroupProfile::Toy) {
        return GroupParams(profile, mpz_class(23), mpz_class(11), mpz_class(2), mpz_class(3));
    }
    mpz_class p(kRfc5114P, 16), q(kRfc5114Q, 16), g(kRfc5114G, 16);
    // h is derived, not chosen: hash the canonical encoding of g under a fixed
    // domain tag and map into the subgroup.
    GroupParams tmp(profile, p, q, g, g);
    std::vector<uint8_t> seed(kGeneratorHTag, kGeneratorHTag + sizeof(kGeneratorHTag) - 1);
    auto genc = tmp.encode_element(tmp.g());
    seed.insert(seed.end(), genc.begin(), genc.end());
    GroupElement h = tmp.hash_to_group(seed);
    return GroupParams(profile, std::move(p), std::move(q), std::move(g), h.value);
}

mpz_class GroupParams::mod_p(const mpz_class& v) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), p_.get_mpz_t());
    return r;
}

GroupElement GroupParams::exp(const GroupElement& base, const Scalar& k) const {
    detail::count_exp();
    mpz_class acc(1), sq, withb;
    uint64_t iters = 0;
    for (size_t i = q_bits_; i-- > 0;) {
        sq = acc * acc;
        mpz_mod(sq.get_mpz_t(), sq.get_mpz_t(), p_.get_mpz_t());
        withb = sq * base.value;
        mpz_mod(withb.get_mpz_t(), withb.get_mpz_t(), p_.get_mpz_t());
        // Both branches are computed every iteration; only the selection
        // depends on the key bit.
        if (mpz_tstbit(k.value.get_mpz_t(), i)) {
            mpz_swap(acc.get_mpz_t(), withb.get_mpz_t());
        } else {
            mpz_swap(acc.get_mpz_t(), sq.get_mpz_t());
        }
        ++iters;
    }
    t_last_exp_iterations = iters;
    return GroupElement(acc);
}

GroupElement GroupParams::exp_vartime(const GroupElement& base, const Scalar& k) const {
    detail::count_exp();
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.value.get_mpz_t(), k.value.get_mpz_t(), p_.get_mpz_t());
    return GroupElement(r);
}

GroupElement GroupParams::dual_exp(const GroupElement& base_a, const Scalar& ka,
                                   const GroupElement& base_b, const Scalar& kb) const {
    detail::count_exp(2);
    detail::count_mul(1);
    std::array<mpz_class, 4> tbl;
    tbl[0] = 1;
    tbl[1] = base_b.value;
    tbl[2] = base_a.value;
    tbl[3] = mod_p(base_a.value * base_b.value);
    mpz_class acc(1), t;
    for (size_t i = q_bits_; i-- > 0;) {
        t = acc * acc;
        mpz_mod(acc.get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
        unsigned idx = (unsigned(mpz_tstbit(ka.value.get_mpz_t(), i)) << 1) |
                       unsigned(mpz_tstbit(kb.value.get_mpz_t(), i));
        t = acc * tbl[idx];  // idx 0 multiplies by 1: sequence stays fixed
        mpz_mod(acc.get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
    }
    return GroupElement(acc);
}

GroupElement GroupParams::dual_exp_gh(const Scalar& kg, const Scalar& kh) const {
    detail::count_exp(2);
    detail::count_mul(1);
    return GroupElement(gh_table_->combine_const(kg.value, kh.value));
}

GroupElement GroupParams::dual_exp_gh_vartime(const Scalar& kg, const Scalar& kh) const {
    detail::count_exp(2);
    detail::count_mul(1);
    return GroupElement(gh_table_->combine_vartime(kg.value, kh.value));
}

GroupElement GroupParams::mul(const GroupElement& a, const GroupElement& b) const {
    detail::count_mul();
    return GroupElement(mod_p(a.value * b.value));
}

GroupElement GroupParams::inv(const GroupElement& a) const {
    detail::count_exp();  // metered as one exponentiation-equivalent
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.value.get_mpz_t(), p_.get_mpz_t()) == 0) {
        throw std::invalid_argument("element not invertible");
    }
    return GroupElement(r);
}

bool GroupParams::is_element(const GroupElement& a) const {
    if (a.value <= 0 || a.value >= p_) return false;
    mpz_class r;
    mpz_powm(r.get_mpz_t(), a.value.get_mpz_t(), q_.get_mpz_t(), p_.get_mpz_t());
    return r == 1;
}

Scalar GroupParams::scalar_from_u64(uint64_t v) const {
    mpz_class m = mpz_class(uint32_t(v >> 32));
    m <<= 32;
    m += uint32_t(v & 0xffffffffu);
    return reduce(m);
}

Scalar GroupParams::reduce(const mpz_class& v) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), q_.get_mpz_t());
    return Scalar(r);
}

Scalar GroupParams::s_add(const Scalar& a, const Scalar& b) const { return reduce(a.value + b.value); }
Scalar GroupParams::s_sub(const Scalar& a, const Scalar& b) const { return reduce(a.value - b.value); }
Scalar GroupParams::s_mul(const Scalar& a, const Scalar& b) const { return reduce(a.value * b.value); }
Scalar GroupParams::s_neg(const Scalar& a) const { return reduce(-a.value); }

Scalar GroupParams::s_inv(const Scalar& a) const {
    if (a.value == 0) throw std::invalid_argument("zero has no inverse mod q");
    mpz_class r;
    mpz_invert(r.get_mpz_t(), a.value.get_mpz_t(), q_.get_mpz_t());
    return Scalar(r);
}

Scalar GroupParams::random_scalar(Rng& rng) const { return Scalar(rng.below(q_)); }

GroupElement GroupParams::hash_to_group(std::span<const uint8_t> seed) const {
    mpz_class cofactor = (p_ - 1) / q_;
    size_t blocks = (element_bytes_ + 8 + 31) / 32;  // 64 extra bits against mod-p bias
    for (uint32_t ctr = 0;; ++ctr) {
        std::vector<uint8_t> material;
        for (uint32_t blk = 0; blk < blocks; ++blk) {
            std::vector<uint8_t> input(kHashToGroupTag, kHashToGroupTag + sizeof(kHashToGroupTag) - 1);
            append_u32(input, ctr);
            append_u32(input, blk);
            input.insert(input.end(), seed.begin(), seed.end());
            Digest d = sha256(input);
            material.insert(material.end(), d.begin(), d.end());
        }
        mpz_class u = import_bytes(material);
        u = mod_p(u);
        mpz_class e;
        mpz_powm(e.get_mpz_t(), u.get_mpz_t(), cofactor.get_mpz_t(), p_.get_mpz_t());
        detail::count_exp();
        if (e != 1) return GroupElement(e);
    }
}

std::vector<uint8_t> GroupParams::encode_element(const GroupElement& a) const {
    return export_fixed(a.value, element_bytes_);
}

GroupElement GroupParams::decode_element(std::span<const uint8_t> bytes) const {
    if (bytes.size() != element_bytes_) throw DecodeError("bad element length");
    mpz_class v = import_bytes(bytes);
    if (v <= 0 || v >= p_) throw DecodeError("element out of range");
    return GroupElement(v);
}

GroupElement GroupParams::decode_element_unchecked(std::span<const uint8_t> bytes) const {
    if (bytes.size() != element_bytes_) throw DecodeError("bad element length");
    return GroupElement(import_bytes(bytes));
}

std::vector<uint8_t> GroupParams::encode_scalar(const Scalar& s) const {
    return export_fixed(s.value, scalar_bytes_);
}

Scalar GroupParams::decode_scalar(std::span<const uint8_t> bytes) const {
    if (bytes.size() != scalar_bytes_) throw DecodeError("bad scalar length");
    mpz_class v = import_bytes(bytes);
    if (v >= q_) throw DecodeError("scalar out of range");
    return Scalar(v);
}

std::vector<uint8_t> GroupParams::canonical_encoding() const {
    std::vector<uint8_t> out = {'B', 'Z', 'P', 'R', 1, uint8_t(profile_)};
    auto put = [&](const mpz_class& v, size_t len) {
        append_u32(out, uint32_t(len));
        auto b = export_fixed(v, len);
        out.insert(out.end(), b.begin(), b.end());
    };
    put(p_, element_bytes_);
    put(q_, scalar_bytes_);
    put(g_, element_bytes_);
    put(h_, element_bytes_);
    return out;
}

}  // namespace biozero
