"""Smoke tests for the python bindings: toy-group algebra against known
values, then one full authentication round trip in the production group."""

import pytest

import biozero


@pytest.fixture(scope="module")
def toy():
    return biozero.setup_group("toy")


@pytest.fixture(scope="module")
def prod():
    return biozero.setup_group("production")


def test_toy_group_constants(toy):
    assert (toy.p, toy.q, toy.g, toy.h) == (23, 11, 2, 3)
    assert toy.element_bytes == 1


def test_toy_commitment_algebra(toy):
    assert biozero.commit(toy, 4, 2) == 6  # 2^4 * 3^2 = 144 = 6 mod 23
    c1 = biozero.commit(toy, 1, 1)
    c2 = biozero.commit(toy, 2, 1)
    assert biozero.commit_add(toy, c1, c2) == biozero.commit(toy, 3, 2)
    assert biozero.commit_sub(toy, biozero.commit(toy, 3, 2), c1) == c2
    assert biozero.commit_scale(toy, c1, 2) == biozero.commit(toy, 2, 2)
    assert biozero.verify_opening(toy, 6, 4, 2)
    assert not biozero.verify_opening(toy, 6, 5, 2)


def test_golden_challenge(toy):
    e = biozero.derive_challenge(
        toy, [6, 12], [3, 9], [13, 16], [2, 4], [8, 18], b"alice", 7
    )
    assert e == 3
    e8 = biozero.derive_challenge(
        toy, [6, 12], [3, 9], [13, 16], [2, 4], [8, 18], b"alice", 8
    )
    assert e8 == 5


def test_synth_and_distance():
    f0, f1, d = biozero.synth_features(7, 4, 8, 29)
    assert d == 29
    assert biozero.compute_distance(f0, f1) == 29
    again = biozero.synth_features(7, 4, 8, 29)
    assert (f0, f1) == (again[0], again[1])


def test_end_to_end_production(prod):
    keys = biozero.setup_range_keys(prod, 16)
    f0, f1, d = biozero.synth_features(11, 8, 8, 120)
    assert d < 500

    record = biozero.register_user(prod, b"alice", f0, 8, seed=1)
    ledger = biozero.Ledger(prod)
    ledger.register_identity(b"alice", record.commitments)

    gamma = biozero.generate_auth_proof(prod, keys, record, f1, 0, 500, seed=2)
    out = ledger.verify_auth(keys, 500, gamma)
    assert out["pass"], out
    assert ledger.last_nonce(b"alice") == 0
    assert out["cost"]["exp"] > 0

    replay = ledger.verify_auth(keys, 500, gamma)
    assert not replay["pass"]
    assert replay["stage"] == "nonce"

    n_events, mismatches = ledger.reverify_log(keys, 500)
    assert n_events == 3
    assert mismatches == 0


def test_forced_negative_proof(prod):
    keys = biozero.setup_range_keys(prod, 16)
    f0, f1, d = biozero.synth_features(13, 8, 8, 2000)
    record = biozero.register_user(prod, b"carol", f0, 8, seed=3)
    ledger = biozero.Ledger(prod)
    ledger.register_identity(b"carol", record.commitments)

    with pytest.raises(ValueError):
        biozero.generate_auth_proof(prod, keys, record, f1, 0, 1000, seed=4)

    gamma = biozero.generate_auth_proof(prod, keys, record, f1, 0, 1000, seed=4, force=True)
    out = ledger.verify_auth(keys, 1000, gamma)
    assert not out["pass"]
    assert out["stage"] == "range"


def test_ledger_state_roundtrip(prod):
    keys = biozero.setup_range_keys(prod, 16)
    f0, f1, _ = biozero.synth_features(17, 4, 8, 10)
    record = biozero.register_user(prod, b"dave", f0, 8, seed=5)
    ledger = biozero.Ledger(prod)
    ledger.register_identity(b"dave", record.commitments)
    gamma = biozero.generate_auth_proof(prod, keys, record, f1, 0, 100, seed=6)
    assert ledger.verify_auth(keys, 100, gamma)["pass"]

    blob = ledger.serialize()
    back = biozero.Ledger.deserialize(prod, blob)
    assert back.serialize() == blob
    assert back.last_nonce(b"dave") == 0
