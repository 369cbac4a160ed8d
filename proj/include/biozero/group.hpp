#ifndef BIOZERO_GROUP_HPP_
#define BIOZERO_GROUP_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "biozero/rng.hpp"

namespace biozero {

struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

/// Exponent in Z_q. All scalar arithmetic is performed modulo the group order.
struct Scalar {
    mpz_class value;

    Scalar() : value(0) {}
    explicit Scalar(const mpz_class& v) : value(v) {}
    explicit Scalar(unsigned long v) : value(v) {}

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.value == b.value; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return a.value != b.value; }
};

/// Element of the order-q subgroup of Z_p*.
struct GroupElement {
    mpz_class value;

    GroupElement() : value(1) {}
    explicit GroupElement(const mpz_class& v) : value(v) {}
    explicit GroupElement(unsigned long v) : value(v) {}

    friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.value == b.value; }
    friend bool operator!=(const GroupElement& a, const GroupElement& b) { return a.value != b.value; }
};

enum class GroupProfile : uint8_t {
    Toy = 0,         // p = 23, q = 11, g = 2, h = 3
    Production = 1,  // RFC 5114 2048-bit MODP group with 256-bit prime-order subgroup
};

/// Counts of logical group operations, used for the verifier's gas proxy.
/// Inversions are metered as one exponentiation-equivalent.
struct OpCounts {
    uint64_t exp = 0;
    uint64_t mul = 0;
    uint64_t hash = 0;

    OpCounts& operator+=(const OpCounts& o) {
        exp += o.exp;
        mul += o.mul;
        hash += o.hash;
        return *this;
    }
};

namespace detail {
OpCounts* current_meter();
void set_meter(OpCounts* m);
void count_exp(uint64_t n = 1);
void count_mul(uint64_t n = 1);
void count_hash(uint64_t n = 1);
uint64_t last_exp_iterations();
class FixedBaseDualTable;
}  // namespace detail

/// Installs an operation counter for the current thread for the scope's lifetime.
class MeterScope {
public:
    explicit MeterScope(OpCounts& counts) : prev_(detail::current_meter()) {
        detail::set_meter(&counts);
    }
    ~MeterScope() { detail::set_meter(prev_); }
    MeterScope(const MeterScope&) = delete;
    MeterScope& operator=(const MeterScope&) = delete;

private:
    OpCounts* prev_;
};

/// Prime-order cyclic group: the order-q subgroup of Z_p* with generators g, h.
/// Immutable after construction; safe for unrestricted concurrent use.
class GroupParams {
public:
    static GroupParams setup(GroupProfile profile);

    GroupProfile profile() const { return profile_; }
    const mpz_class& p() const { return p_; }
    const mpz_class& q() const { return q_; }
    GroupElement g() const { return GroupElement(g_); }
    GroupElement h() const { return GroupElement(h_); }
    GroupElement identity() const { return GroupElement(mpz_class(1)); }

    size_t element_bytes() const { return element_bytes_; }
    size_t scalar_bytes() const { return scalar_bytes_; }
    size_t q_bits() const { return q_bits_; }

    // -- group operations ---------------------------------------------------

    /// Fixed-sequence square-and-multiply ladder. Performs exactly q_bits()
    /// iterations (one square, one multiply each) regardless of k's value;
    /// use for secret exponents.
    GroupElement exp(const GroupElement& base, const Scalar& k) const;

    /// Variable-time exponentiation (mpz_powm). Public inputs only.
    GroupElement exp_vartime(const GroupElement& base, const Scalar& k) const;

    /// base_a^ka * base_b^kb with one shared fixed-sequence ladder.
    GroupElement dual_exp(const GroupElement& base_a, const Scalar& ka,
                          const GroupElement& base_b, const Scalar& kb) const;

    /// g^kg * h^kh via the precomputed comb table, fixed multiplication
    /// sequence (one table multiply per window position).
    GroupElement dual_exp_gh(const Scalar& kg, const Scalar& kh) const;

    /// Same value as dual_exp_gh but skips zero windows. Public inputs only.
    GroupElement dual_exp_gh_vartime(const Scalar& kg, const Scalar& kh) const;

    GroupElement mul(const GroupElement& a, const GroupElement& b) const;
    GroupElement inv(const GroupElement& a) const;

    /// Full subgroup membership test: 1 <= v < p and v^q = 1 (mod p).
    bool is_element(const GroupElement& a) const;

    // -- scalar arithmetic (mod q) -------------------------------------------

    Scalar scalar_from_u64(uint64_t v) const;
    Scalar reduce(const mpz_class& v) const;  // canonical representative in [0, q)
    Scalar s_add(const Scalar& a, const Scalar& b) const;
    Scalar s_sub(const Scalar& a, const Scalar& b) const;
    Scalar s_mul(const Scalar& a, const Scalar& b) const;
    Scalar s_neg(const Scalar& a) const;
    Scalar s_inv(const Scalar& a) const;  // throws std::invalid_argument on zero

    Scalar random_scalar(Rng& rng) const;  // uniform in [0, q)

    /// Deterministic derivation of a subgroup element from seed bytes: the
    /// digest-derived residue is raised to the cofactor (p-1)/q, retrying
    /// with an incremented counter until the result is not the identity.
    GroupElement hash_to_group(std::span<const uint8_t> seed) const;

    // -- normative encodings --------------------------------------------------

    /// Fixed-length big-endian bytes, length = ceil(log2(p) / 8).
    std::vector<uint8_t> encode_element(const GroupElement& a) const;
    /// Rejects wrong length and values outside [1, p-1]. Does not perform the
    /// (expensive) subgroup membership test; callers persisting untrusted
    /// elements must call is_element themselves.
    GroupElement decode_element(std::span<const uint8_t> bytes) const;

    /// Fixed-length big-endian bytes, length = ceil(log2(q) / 8).
    std::vector<uint8_t> encode_scalar(const Scalar& s) const;
    GroupElement decode_element_unchecked(std::span<const uint8_t> bytes) const;
    Scalar decode_scalar(std::span<const uint8_t> bytes) const;

    /// Canonical serialization of the parameters themselves (profile tag and
    /// p, q, g, h); hashing this binds key and ledger files to one group.
    std::vector<uint8_t> canonical_encoding() const;

    ~GroupParams();
    GroupParams(GroupParams&&) noexcept;
    GroupParams& operator=(GroupParams&&) noexcept;
    GroupParams(const GroupParams&) = delete;
    GroupParams& operator=(const GroupParams&) = delete;

private:
    GroupParams(GroupProfile profile, mpz_class p, mpz_class q, mpz_class g, mpz_class h);

    mpz_class mod_p(const mpz_class& v) const;

    GroupProfile profile_;
    mpz_class p_, q_, g_, h_;
    size_t element_bytes_ = 0;
    size_t scalar_bytes_ = 0;
    size_t q_bits_ = 0;
    std::unique_ptr<detail::FixedBaseDualTable> gh_table_;
};

}  // namespace biozero

#endif  // BIOZERO_GROUP_HPP_
