"""Deterministic seed fan-out.

Every random stream in the pipeline derives from one root seed plus a short
label ("train:gnn", "layout", "projection:..."), so partial reruns of a
pipeline stay reproducible and no two stages ever share a stream.
"""

import hashlib

import numpy as np


def subseed(seed: int, label: str) -> int:
    """Derive a 32-bit child seed from a root seed and a stream label."""
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


def rng_for(seed: int, label: str) -> np.random.Generator:
    """A fresh PCG64 generator for the labeled stream."""
    return np.random.default_rng(subseed(seed, label))
