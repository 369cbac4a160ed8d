"""BioZero: privacy-preserving decentralized biometric authentication.

Thin python surface over the C++ core: Pedersen-committed biometric vectors,
the non-interactive product-consistency proof, homomorphic reconstruction of
the distance commitment, the bit-decomposition range proof, and the simulated
on-chain verifier with replay protection and cost metering.
"""

from ._core import (
    GroupParams,
    Ledger,
    RangeKeys,
    RegistrationRecord,
    commit,
    commit_add,
    commit_scale,
    commit_sub,
    compute_distance,
    derive_challenge,
    generate_auth_proof,
    register_user,
    setup_group,
    setup_range_keys,
    synth_features,
    verify_opening,
)

__all__ = [
    "GroupParams",
    "Ledger",
    "RangeKeys",
    "RegistrationRecord",
    "commit",
    "commit_add",
    "commit_scale",
    "commit_sub",
    "compute_distance",
    "derive_challenge",
    "generate_auth_proof",
    "register_user",
    "setup_group",
    "setup_range_keys",
    "synth_features",
    "verify_opening",
]

__version__ = "0.1.0"
