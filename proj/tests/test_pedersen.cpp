#include <doctest.h>

#include <map>

#include "biozero/pedersen.hpp"
#include "support/oracles.hpp"

using namespace biozero;

namespace {
const GroupParams& toy() {
    static GroupParams params = GroupParams::setup(GroupProfile::Toy);
    return params;
}
Opening op(unsigned long f, unsigned long r) { return Opening{Scalar(f), Scalar(r)}; }
}  // namespace

TEST_CASE("commit matches the worked toy examples") {
    const auto& p = toy();
    CHECK(pedersen::commit(p, op(0, 0)).element == p.identity());
    // 2^4 * 3^2 = 144 = 6 mod 23
    CHECK(pedersen::commit(p, op(4, 2)).element.value == 6);
    CHECK(oracle::naive_commit(23, 2, 3, 4, 2) == 6);
    CHECK(pedersen::commit(p, op(4, 2)) == pedersen::commit(p, op(4, 2)));
}

TEST_CASE("homomorphic add, sub, scale against the worked examples") {
    const auto& p = toy();
    Commitment c11 = pedersen::commit(p, op(1, 1));
    Commitment c21 = pedersen::commit(p, op(2, 1));
    CHECK(c11.element.value == 6);
    CHECK(c21.element.value == 12);

    Commitment sum = pedersen::add(p, c11, c21);
    CHECK(sum.element.value == 3);
    CHECK(pedersen::commit(p, op(3, 2)).element.value == 3);

    Commitment diff = pedersen::sub(p, pedersen::commit(p, op(3, 2)), c11);
    CHECK(diff.element.value == 12);
    CHECK(diff == c21);
    CHECK(pedersen::sub(p, c11, c11).element == p.identity());

    Commitment doubled = pedersen::scale(p, c11, Scalar(2ul));
    CHECK(doubled.element.value == 13);
    CHECK(pedersen::commit(p, op(2, 2)).element.value == 13);
    CHECK(pedersen::scale(p, c11, Scalar(1ul)) == c11);
    CHECK(pedersen::scale(p, c11, Scalar(0ul)).element == p.identity());
    CHECK(pedersen::add(p, c11, pedersen::commit(p, op(0, 0))) == c11);
}

TEST_CASE("homomorphism property over random openings") {
    const auto& p = toy();
    Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        Opening o1{p.random_scalar(rng), p.random_scalar(rng)};
        Opening o2{p.random_scalar(rng), p.random_scalar(rng)};
        Commitment lhs = pedersen::add(p, pedersen::commit(p, o1), pedersen::commit(p, o2));
        Commitment rhs = pedersen::commit(p, Opening{p.s_add(o1.f, o2.f), p.s_add(o1.r, o2.r)});
        CHECK(lhs == rhs);

        Commitment back = pedersen::sub(p, lhs, pedersen::commit(p, o2));
        CHECK(back == pedersen::commit(p, o1));

        Scalar k = p.random_scalar(rng);
        Commitment scaled = pedersen::scale(p, pedersen::commit(p, o1), k);
        CHECK(scaled == pedersen::commit(p, Opening{p.s_mul(k, o1.f), p.s_mul(k, o1.r)}));
    }
}

TEST_CASE("exhaustive toy homomorphism against the naive oracle") {
    const auto& p = toy();
    for (unsigned long f = 0; f < 11; ++f) {
        for (unsigned long r = 0; r < 11; ++r) {
            CHECK(pedersen::commit(p, op(f, r)).element.value ==
                  oracle::naive_commit(23, 2, 3, f, r));
        }
    }
}

TEST_CASE("perfect hiding: every commitment value has exactly q openings") {
    const auto& p = toy();
    std::map<unsigned long, int> counts;
    for (unsigned long f = 0; f < 11; ++f) {
        for (unsigned long r = 0; r < 11; ++r) {
            counts[pedersen::commit(p, op(f, r)).element.value.get_ui()]++;
        }
    }
    CHECK(counts.size() == 11);
    for (const auto& [value, count] : counts) CHECK(count == 11);
    // the worked example: c = 6 opens under exactly 11 of the 121 pairs
    CHECK(counts.at(6) == 11);
}

TEST_CASE("binding for a fixed blinding: message determines the commitment") {
    const auto& p = toy();
    for (unsigned long r = 0; r < 11; ++r) {
        std::map<unsigned long, unsigned long> seen;  // commitment -> f
        for (unsigned long f = 0; f < 11; ++f) {
            unsigned long c = pedersen::commit(p, op(f, r)).element.value.get_ui();
            CHECK(seen.count(c) == 0);
            seen[c] = f;
        }
    }
}

TEST_CASE("verify_opening accepts the right opening and rejects others") {
    const auto& p = toy();
    Commitment c = pedersen::commit(p, op(4, 2));
    CHECK(pedersen::verify_opening(p, c, op(4, 2)));
    CHECK_FALSE(pedersen::verify_opening(p, c, op(5, 2)));
    CHECK_FALSE(pedersen::verify_opening(p, c, op(4, 3)));
}

TEST_CASE("custom-base commitments and base-mismatch errors") {
    const auto& p = toy();
    GroupElement c0 = pedersen::commit(p, op(3, 5)).element;
    Commitment custom = pedersen::commit(p, op(2, 1), c0, p.h());
    // (c0)^2 * h^1
    CHECK(custom.element == p.mul(p.exp(c0, Scalar(2ul)), p.exp(p.h(), Scalar(1ul))));
    CHECK(custom.bases.has_value());
    CHECK(pedersen::verify_opening(p, custom, op(2, 1)));

    Commitment standard = pedersen::commit(p, op(2, 1));
    CHECK_THROWS_AS(pedersen::add(p, custom, standard), std::invalid_argument);
    CHECK_THROWS_AS(pedersen::sub(p, standard, custom), std::invalid_argument);
    CHECK_NOTHROW(pedersen::add(p, custom, custom));
}

TEST_CASE("fresh blindings give distinct commitments to the same message") {
    const auto& p = toy();
    Rng rng(23);
    Opening o1{Scalar(5ul), p.random_scalar(rng)};
    Opening o2{Scalar(5ul), p.random_scalar(rng)};
    // mt19937 draws differ here; the elements must too
    REQUIRE(o1.r != o2.r);
    CHECK(pedersen::commit(p, o1) != pedersen::commit(p, o2));
}
