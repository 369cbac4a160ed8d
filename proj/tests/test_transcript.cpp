#include <doctest.h>

#include "biozero/hash.hpp"
#include "biozero/transcript.hpp"

using namespace biozero;

namespace {

const GroupParams& toy() {
    static GroupParams params = GroupParams::setup(GroupProfile::Toy);
    return params;
}
const GroupParams& production() {
    static GroupParams params = GroupParams::setup(GroupProfile::Production);
    return params;
}

CommitmentVector elems(std::initializer_list<unsigned long> vals) {
    CommitmentVector v;
    for (unsigned long x : vals) v.push_back(Commitment{GroupElement(x), std::nullopt});
    return v;
}

std::string hex(std::span<const uint8_t> b) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (uint8_t x : b) {
        s.push_back(digits[x >> 4]);
        s.push_back(digits[x & 15]);
    }
    return s;
}

AuthRelationFirstMessage first_from(std::initializer_list<unsigned long> a1,
                                    std::initializer_list<unsigned long> a2,
                                    std::initializer_list<unsigned long> b1,
                                    std::initializer_list<unsigned long> b2,
                                    std::initializer_list<unsigned long> b3) {
    AuthRelationFirstMessage f;
    auto it1 = a1.begin();
    auto it2 = a2.begin();
    auto it3 = b1.begin();
    auto it4 = b2.begin();
    auto it5 = b3.begin();
    for (; it1 != a1.end(); ++it1, ++it2, ++it3, ++it4, ++it5) {
        f.entries.push_back({GroupElement(*it1), GroupElement(*it2), GroupElement(*it3),
                             GroupElement(*it4), GroupElement(*it5)});
    }
    return f;
}

struct ToyFixture {
    CommitmentVector c0 = elems({6, 12});
    CommitmentVector c1 = elems({3, 9});
    CommitmentVector c00 = elems({13, 16});
    CommitmentVector c11 = elems({2, 4});
    CommitmentVector c01 = elems({8, 18});
    AuthRelationFirstMessage first = first_from({4, 9}, {2, 6}, {13, 3}, {16, 8}, {12, 1});
    std::vector<uint8_t> id = {'a', 'l', 'i', 'c', 'e'};
};

}  // namespace

TEST_CASE("golden transcript bytes and SHA-256 challenge") {
    // Reference digest computed independently with python hashlib.
    const auto& p = toy();
    ToyFixture f;
    auto bytes = transcript::build(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, f.id, 7);
    CHECK(hex(bytes) ==
          "060c03090d1002040812040902060d0310080c0100000005616c6963650000000000000007");
    Digest d = sha256(bytes);
    CHECK(hex(d) == "46c84a8d7013732fbd6559227cdbffe0f8dbb4ecb93bdd5af9d8294e3bfe6106");

    Challenge e = transcript::derive_challenge(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, f.id, 7);
    CHECK(e.e.value == 5);  // digest mod 11
    Challenge e8 =
        transcript::derive_challenge(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, f.id, 8);
    CHECK(e8.e.value == 8);
}

TEST_CASE("identical inputs give identical challenges") {
    const auto& p = toy();
    ToyFixture f;
    Challenge a = transcript::derive_challenge(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, f.id, 7);
    Challenge b = transcript::derive_challenge(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, f.id, 7);
    CHECK(a.e == b.e);
}

TEST_CASE("nonce changes the transcript digest") {
    const auto& p = toy();
    ToyFixture f;
    auto t7 = transcript::build(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, f.id, 7);
    auto t8 = transcript::build(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, f.id, 8);
    CHECK(sha256(t7) != sha256(t8));
}

TEST_CASE("the relation first messages are bound by the challenge") {
    const auto& p = toy();
    ToyFixture f;
    auto base = transcript::build(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, f.id, 7);
    AuthRelationFirstMessage tweaked = f.first;
    tweaked.entries[1].beta3 = GroupElement(18ul);
    auto other = transcript::build(p, f.c0, f.c1, f.c00, f.c11, f.c01, tweaked, f.id, 7);
    CHECK(base != other);
    CHECK(sha256(base) != sha256(other));
}

TEST_CASE("vector length mismatch is rejected") {
    const auto& p = toy();
    ToyFixture f;
    CommitmentVector shorter = elems({3});
    CHECK_THROWS_AS(
        transcript::derive_challenge(p, f.c0, shorter, f.c00, f.c11, f.c01, f.first, f.id, 7),
        std::invalid_argument);
    AuthRelationFirstMessage short_first = first_from({4}, {2}, {13}, {16}, {12});
    CHECK_THROWS_AS(
        transcript::derive_challenge(p, f.c0, f.c1, f.c00, f.c11, f.c01, short_first, f.id, 7),
        std::invalid_argument);
}

TEST_CASE("id framing keeps the id/nonce boundary unambiguous") {
    const auto& p = toy();
    ToyFixture f;
    // Without the length prefix these two would concatenate identically.
    std::vector<uint8_t> id_a = {'a', 'b', 0};
    std::vector<uint8_t> id_b = {'a', 'b'};
    auto ta = transcript::build(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, id_a, 7);
    auto tb = transcript::build(p, f.c0, f.c1, f.c00, f.c11, f.c01, f.first, id_b, 7);
    CHECK(ta != tb);
    CHECK(sha256(ta) != sha256(tb));
}

TEST_CASE("single byte flips change the production challenge") {
    const auto& p = production();
    Rng rng(99);
    CommitmentVector c0, c1, c00, c11, c01;
    AuthRelationFirstMessage first;
    auto elem = [&] { return p.exp(p.g(), p.random_scalar(rng)); };
    for (int i = 0; i < 2; ++i) {
        c0.push_back(Commitment{elem(), std::nullopt});
        c1.push_back(Commitment{elem(), std::nullopt});
        c00.push_back(Commitment{elem(), std::nullopt});
        c11.push_back(Commitment{elem(), std::nullopt});
        c01.push_back(Commitment{elem(), std::nullopt});
        first.entries.push_back({elem(), elem(), elem(), elem(), elem()});
    }
    std::vector<uint8_t> id = {'b', 'o', 'b'};
    auto base = transcript::build(p, c0, c1, c00, c11, c01, first, id, 5);
    Scalar e0 = transcript::challenge_from_bytes(p, base).e;
    for (int trial = 0; trial < 10000; ++trial) {
        auto mutated = base;
        size_t pos = size_t(rng.next_u64() % mutated.size());
        uint8_t delta = uint8_t(1 + rng.next_u64() % 255);
        mutated[pos] ^= delta;
        CHECK(transcript::challenge_from_bytes(p, mutated).e != e0);
    }
}
