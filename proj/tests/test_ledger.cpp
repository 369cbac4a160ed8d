#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "biozero/ledger.hpp"
#include "biozero/synth.hpp"

using namespace biozero;

namespace {

const GroupParams& production() {
    static GroupParams params = GroupParams::setup(GroupProfile::Production);
    return params;
}

const std::vector<uint8_t> kId = {'a', 'l', 'i', 'c', 'e'};

struct Session {
    RangeKeys keys;
    Scalar epsilon;
    uint64_t epsilon_u64;
    RegistrationRecord rec;
    Ledger ledger;
    Rng rng;

    explicit Session(size_t n = 6, uint64_t eps = 500, uint64_t seed = 777)
        : keys(rangeproof::setup(production(), 16)),
          epsilon(production().scalar_from_u64(eps)),
          epsilon_u64(eps),
          rec(),
          ledger(production()),
          rng(seed) {
        SynthPair pair = synth_features(seed, n, 8, eps / 3);
        rec = protocol::register_user(production(), kId, pair.f0, rng);
        probe = pair.f1;
        ledger.register_identity(kId, rec.c0);
    }

    std::vector<uint8_t> make_gamma(uint64_t nonce) {
        AuthProof g = protocol::generate_auth_proof(production(), keys, rec, probe, nonce,
                                                    epsilon_u64, rng);
        return protocol::serialize_auth_proof(production(), g);
    }

    BiometricVector probe;
};

}  // namespace

TEST_CASE("registry rejects duplicates and returns the stored vector") {
    const auto& p = production();
    Session s;
    CHECK_THROWS_AS(s.ledger.register_identity(kId, s.rec.c0), std::invalid_argument);
    const RegistryEntry* entry = s.ledger.find(kId);
    REQUIRE(entry != nullptr);
    REQUIRE(entry->c0.size() == s.rec.c0.size());
    for (size_t i = 0; i < entry->c0.size(); ++i) CHECK(entry->c0[i] == s.rec.c0[i]);
    CHECK_FALSE(entry->last_nonce.has_value());

    std::vector<uint8_t> other = {'b', 'o', 'b'};
    CHECK(s.ledger.find(other) == nullptr);
    CommitmentVector junk{Commitment{GroupElement(mpz_class(4)), std::nullopt}};
    CHECK_THROWS_AS(s.ledger.register_identity(other, junk), std::invalid_argument);
    (void)p;
}

TEST_CASE("honest proof passes; the exact replay fails at the nonce stage") {
    Session s;
    auto gamma = s.make_gamma(0);
    VerifyOutcome first = s.ledger.verify_auth(s.keys, s.epsilon, gamma);
    CHECK(first.pass);
    CHECK(*s.ledger.find(kId)->last_nonce == 0);

    VerifyOutcome replay = s.ledger.verify_auth(s.keys, s.epsilon, gamma);
    CHECK_FALSE(replay.pass);
    CHECK(replay.failed_stage == Stage::Nonce);
}

TEST_CASE("replay with only the nonce bumped fails at the relation stage") {
    Session s;
    auto gamma_bytes = s.make_gamma(0);
    REQUIRE(s.ledger.verify_auth(s.keys, s.epsilon, gamma_bytes).pass);

    AuthProof gamma = protocol::parse_auth_proof(production(), gamma_bytes);
    gamma.nonce += 1;  // payload untouched: the challenge no longer matches
    VerifyOutcome out = s.ledger.verify_auth(
        s.keys, s.epsilon, protocol::serialize_auth_proof(production(), gamma));
    CHECK_FALSE(out.pass);
    CHECK(out.failed_stage == Stage::Relations);
}

TEST_CASE("unknown identity fails at the registry stage") {
    Session s;
    AuthProof gamma = protocol::parse_auth_proof(production(), s.make_gamma(0));
    gamma.id = {'m', 'a', 'l', 'l', 'o', 'r', 'y'};
    VerifyOutcome out = s.ledger.verify_auth(
        s.keys, s.epsilon, protocol::serialize_auth_proof(production(), gamma));
    CHECK_FALSE(out.pass);
    CHECK(out.failed_stage == Stage::Registry);
}

TEST_CASE("garbage bytes fail at the decode pre-stage") {
    Session s;
    std::vector<uint8_t> junk = {1, 2, 3, 4};
    VerifyOutcome out = s.ledger.verify_auth(s.keys, s.epsilon, junk);
    CHECK_FALSE(out.pass);
    CHECK(out.failed_stage == Stage::Decode);
    CHECK(s.ledger.events().back().stage == Stage::Decode);
}

TEST_CASE("failed attempts do not consume the nonce or touch the registry") {
    Session s;
    auto gamma0 = s.make_gamma(0);
    auto gamma1 = s.make_gamma(1);
    REQUIRE(s.ledger.verify_auth(s.keys, s.epsilon, gamma0).pass);
    REQUIRE_FALSE(s.ledger.verify_auth(s.keys, s.epsilon, gamma0).pass);  // replay
    CHECK(*s.ledger.find(kId)->last_nonce == 0);  // unchanged by the failure
    CHECK(s.ledger.verify_auth(s.keys, s.epsilon, gamma1).pass);
    CHECK(*s.ledger.find(kId)->last_nonce == 1);
}

TEST_CASE("nonce gaps are allowed but going backwards is not") {
    Session s;
    auto gamma5 = s.make_gamma(5);
    CHECK(s.ledger.verify_auth(s.keys, s.epsilon, gamma5).pass);
    auto gamma3 = s.make_gamma(3);
    VerifyOutcome out = s.ledger.verify_auth(s.keys, s.epsilon, gamma3);
    CHECK_FALSE(out.pass);
    CHECK(out.failed_stage == Stage::Nonce);
    auto gamma9 = s.make_gamma(9);
    CHECK(s.ledger.verify_auth(s.keys, s.epsilon, gamma9).pass);
}

TEST_CASE("early failures cost almost nothing; later stages meter group work") {
    Session s;
    auto gamma = s.make_gamma(0);
    VerifyOutcome first = s.ledger.verify_auth(s.keys, s.epsilon, gamma);
    REQUIRE(first.pass);
    OpCounts total = first.cost.total();
    CHECK(total.exp > 0);
    CHECK(total.hash > 0);
    CHECK(first.cost.stage(Stage::Challenge).hash == 1);

    VerifyOutcome replay = s.ledger.verify_auth(s.keys, s.epsilon, gamma);
    REQUIRE_FALSE(replay.pass);
    OpCounts rc = replay.cost.total();
    CHECK(rc.exp == 0);
    CHECK(rc.mul == 0);
    CHECK(rc.hash == 0);
}

TEST_CASE("stage 3-5 op counts scale linearly in N while stage 6 stays constant") {
    auto run = [&](size_t n) {
        Session s(n, 500, 1000 + n);
        auto gamma = s.make_gamma(0);
        VerifyOutcome out = s.ledger.verify_auth(s.keys, s.epsilon, gamma);
        REQUIRE(out.pass);
        return out.cost;
    };
    CostReport c16 = run(16);
    CostReport c64 = run(64);

    double ratio = double(c64.stages_3_to_5().exp) / double(c16.stages_3_to_5().exp);
    CHECK(ratio > 3.6);
    CHECK(ratio < 4.4);

    CHECK(c16.stage(Stage::Range).exp == c64.stage(Stage::Range).exp);
    CHECK(c16.stage(Stage::Range).mul == c64.stage(Stage::Range).mul);

    // Determinism: repeating the identical run reproduces the report.
    CostReport again = run(16);
    CHECK(again.total().exp == c16.total().exp);
    CHECK(again.total().mul == c16.total().mul);
    CHECK(again.total().hash == c16.total().hash);
}

TEST_CASE("same request sequence produces byte-identical state") {
    auto drive = [](Ledger& ledger, const RangeKeys& keys, const Scalar& eps,
                    const std::vector<std::vector<uint8_t>>& gammas,
                    const RegistrationRecord& rec) {
        ledger.register_identity(kId, rec.c0);
        for (const auto& g : gammas) ledger.verify_auth(keys, eps, g);
    };
    Session s;
    std::vector<std::vector<uint8_t>> gammas = {s.make_gamma(0), s.make_gamma(0),
                                                s.make_gamma(2)};
    Ledger a(production()), b(production());
    drive(a, s.keys, s.epsilon, gammas, s.rec);
    drive(b, s.keys, s.epsilon, gammas, s.rec);
    CHECK(a.serialize() == b.serialize());
}

TEST_CASE("ledger state round-trips through the versioned file format") {
    Session s;
    auto gamma = s.make_gamma(0);
    s.ledger.verify_auth(s.keys, s.epsilon, gamma);
    s.ledger.verify_auth(s.keys, s.epsilon, gamma);  // replay failure event

    auto bytes = s.ledger.serialize();
    Ledger back = Ledger::deserialize(production(), bytes);
    CHECK(back.serialize() == bytes);
    CHECK(back.events().size() == s.ledger.events().size());
    CHECK(*back.find(kId)->last_nonce == 0);

    auto path = std::filesystem::temp_directory_path() / "biozero_ledger_test.bin";
    s.ledger.save(path.string());
    Ledger loaded = Ledger::load(production(), path.string());
    CHECK(loaded.serialize() == bytes);
    std::filesystem::remove(path);
}

TEST_CASE("event log records both verdicts and full payloads") {
    Session s;
    auto gamma = s.make_gamma(0);
    s.ledger.verify_auth(s.keys, s.epsilon, gamma);
    s.ledger.verify_auth(s.keys, s.epsilon, gamma);
    const auto& events = s.ledger.events();
    REQUIRE(events.size() == 3);  // register + pass + replay-fail
    CHECK(events[0].type == Ledger::Event::Register);
    CHECK(events[1].pass);
    CHECK(events[1].payload == gamma);
    CHECK(events[1].digest == sha256(gamma));
    CHECK_FALSE(events[2].pass);
    CHECK(events[2].stage == Stage::Nonce);
}

TEST_CASE("reverify_log reproduces every recorded verdict") {
    Session s;
    auto g0 = s.make_gamma(0);
    s.ledger.verify_auth(s.keys, s.epsilon, g0);
    s.ledger.verify_auth(s.keys, s.epsilon, g0);  // nonce failure
    auto g1 = s.make_gamma(1);
    s.ledger.verify_auth(s.keys, s.epsilon, g1);

    auto results = s.ledger.reverify_log(s.keys, s.epsilon);
    REQUIRE(results.size() == 4);
    for (const auto& r : results) CHECK(r.matches);
}

TEST_CASE("post-hoc first-message forgery is defeated by the challenge binding") {
    // The attack: without knowing any opening of the registered c0, choose
    // garbage commitment vectors with known openings, pick the z-responses
    // first, and solve each alpha/beta backwards from a guessed challenge:
    //
    //   alpha1_i := g^z1 h^z2 (c0_i)^-e,  beta1_i := (c0_i)^z1 h^z5 (c00_i)^-e, ...
    //
    // Every relation equation then holds under that guess by construction,
    // and the attacker-chosen c00/c11/c01 reconstruct a distance commitment
    // they can range-prove honestly (d~ = 0). If the first messages were not
    // part of the challenge hash this would impersonate any identity; with
    // them hashed, the derived challenge disagrees with the guess and the
    // relation stage rejects.
    Session s;
    const auto& p = production();
    const size_t n = s.rec.c0.size();
    Rng rng(4242);

    AuthProof forged;
    forged.id = kId;
    forged.nonce = 0;
    std::vector<Scalar> s00(n), s11(n), s01(n);
    Scalar zero(0ul);
    for (size_t i = 0; i < n; ++i) {
        s00[i] = p.random_scalar(rng);
        s11[i] = p.random_scalar(rng);
        s01[i] = p.random_scalar(rng);
        forged.c1.push_back(pedersen::commit(p, Opening{zero, p.random_scalar(rng)}));
        forged.c00.push_back(pedersen::commit(p, Opening{zero, s00[i]}));
        forged.c11.push_back(pedersen::commit(p, Opening{zero, s11[i]}));
        forged.c01.push_back(pedersen::commit(p, Opening{zero, s01[i]}));
    }

    Challenge guess{p.random_scalar(rng)};
    Scalar neg_e = p.s_neg(guess.e);
    forged.relations.entries.resize(n);
    for (size_t i = 0; i < n; ++i) {
        auto& ent = forged.relations.entries[i];
        ent.z1 = p.random_scalar(rng);
        ent.z2 = p.random_scalar(rng);
        ent.z3 = p.random_scalar(rng);
        ent.z4 = p.random_scalar(rng);
        ent.z5 = p.random_scalar(rng);
        ent.z6 = p.random_scalar(rng);
        ent.z7 = p.random_scalar(rng);
        const GroupElement& c0i = s.rec.c0[i].element;
        auto solve = [&](const GroupElement& lhs, const GroupElement& target) {
            return p.mul(lhs, p.exp_vartime(target, neg_e));
        };
        ent.alpha1 = solve(pedersen::commit_value_vartime(p, ent.z1, ent.z2), c0i);
        ent.beta1 = solve(pedersen::commit_value_vartime(p, ent.z1, ent.z5, c0i, p.h()),
                          forged.c00[i].element);
        ent.alpha2 = solve(pedersen::commit_value_vartime(p, ent.z3, ent.z4),
                           forged.c1[i].element);
        ent.beta2 = solve(
            pedersen::commit_value_vartime(p, ent.z3, ent.z6, forged.c1[i].element, p.h()),
            forged.c11[i].element);
        ent.beta3 = solve(pedersen::commit_value_vartime(p, ent.z3, ent.z7, c0i, p.h()),
                          forged.c01[i].element);
    }

    // Under the guessed challenge all 5N equations hold: the relation layer
    // alone cannot tell the forgery apart.
    CHECK_FALSE(mulproof::verify_auth_relations(p, s.rec.c0, forged.c1, forged.c00, forged.c11,
                                                forged.c01, guess, forged.relations)
                    .has_value());

    // Honest range proof for the reconstructed d~ = 0 commitment.
    Scalar r_d;
    for (size_t i = 0; i < n; ++i) {
        r_d = p.s_add(r_d, p.s_sub(p.s_add(s00[i], s11[i]), p.s_add(s01[i], s01[i])));
    }
    Commitment c_d = protocol::distance_commitment(p, forged.c00, forged.c11, forged.c01);
    REQUIRE(pedersen::verify_opening(p, c_d, Opening{zero, r_d}));
    forged.range_proof = rangeproof::prove(p, s.keys, zero, r_d, c_d, s.epsilon, rng);

    // The ledger derives the challenge from the full transcript, which now
    // covers the solved alphas/betas: the guess cannot match it.
    VerifyOutcome out = s.ledger.verify_auth(s.keys, s.epsilon,
                                             protocol::serialize_auth_proof(p, forged));
    CHECK_FALSE(out.pass);
    CHECK(out.failed_stage == Stage::Relations);
}

TEST_CASE("persisted ledger bytes contain no witness material") {
    Session s;
    auto gamma = s.make_gamma(0);
    REQUIRE(s.ledger.verify_auth(s.keys, s.epsilon, gamma).pass);
    auto bytes = s.ledger.serialize();

    auto contains = [&](const std::vector<uint8_t>& needle) {
        return std::search(bytes.begin(), bytes.end(), needle.begin(), needle.end()) !=
               bytes.end();
    };
    const auto& p = production();
    // Blinding scalars are 256-bit and unguessable: any appearance is a leak.
    for (const auto& r : s.rec.r0) CHECK_FALSE(contains(p.encode_scalar(r)));
    // Features are single bytes, so scan for the whole vector pattern (a
    // single zero-padded feature byte aliases the log's op-count fields).
    std::vector<uint8_t> f0_pattern(s.rec.f0.begin(), s.rec.f0.end());
    std::vector<uint8_t> f1_pattern(s.probe.values.begin(), s.probe.values.end());
    CHECK_FALSE(contains(f0_pattern));
    CHECK_FALSE(contains(f1_pattern));
}
