"""Splittable seeding for reproducible Monte-Carlo trials."""
import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def compute_sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def derive_trial_seed(master_seed: int, trial: int) -> int:
    """Mix a trial index into the master seed with a fixed 64-bit hash.

    The seed is the first 8 bytes of SHA-256 over the two values, each
    encoded as 8 big-endian bytes. Independent of scheduling order.
    """
    payload = (master_seed & _MASK64).to_bytes(8, "big") + (trial & _MASK64).to_bytes(8, "big")
    return int(compute_sha256(payload)[:16], 16)


def make_rng(seed: int) -> np.random.Generator:
    """Return the generator used for channels and initial filters of a trial."""
    return np.random.default_rng(seed & _MASK64)
