"""Counter-based random streams with stable cross-platform draws.

Every stochastic routine in the package pulls from a Philox stream keyed by
(seed, label). The label picks an independent substream, so e.g. dataset noise
and parameter initialisation never share state even under the same seed.
Gaussian draws go through Box-Muller on the uniform stream rather than the
generator's native normal(), pinning the exact bit pattern to this module.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stream(seed: int, label: str) -> np.random.Generator:
    """Return an independent Philox generator for (seed, label)."""
    tag = int.from_bytes(hashlib.blake2b(label.encode(), digest_size=8).digest(), "little")
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(tag)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def normal(gen: np.random.Generator, size) -> np.ndarray:
    """Standard-normal draws via Box-Muller on ``gen``'s uniform stream."""
    shape = (size,) if np.isscalar(size) else tuple(size)
    n = int(np.prod(shape)) if shape else 1
    pairs = (n + 1) // 2
    u1 = 1.0 - gen.random(pairs)  # (0, 1], keeps log() finite
    u2 = gen.random(pairs)
    r = np.sqrt(-2.0 * np.log(u1))
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(2.0 * np.pi * u2)
    out[1::2] = r * np.sin(2.0 * np.pi * u2)
    return out[:n].reshape(shape)
