"""Vectorised Philox4x32-10 counter-based generator.

numpy ships Philox only as a sequential bit generator; here every
``(key, counter)`` pair is hashed independently so one call serves many
walkers at once, each walker owning the counter stream ``(block, walker)``.
"""
import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_MASK = np.uint64(0xFFFFFFFF)
_SHIFT = np.uint64(32)


def philox4x32(counter, key, rounds=10):
    """Hash counters ``(4, ...)`` under ``key = (k0, k1)``; returns four uint32 arrays."""
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) & _MASK for c in counter)
    k0, k1 = int(key[0]) & 0xFFFFFFFF, int(key[1]) & 0xFFFFFFFF
    for r in range(rounds):
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> _SHIFT) ^ c1 ^ np.uint64(k0),
            p1 & _MASK,
            (p0 >> _SHIFT) ^ c3 ^ np.uint64(k1),
            p0 & _MASK,
        )
        k0 = (k0 + _W0) & 0xFFFFFFFF
        k1 = (k1 + _W1) & 0xFFFFFFFF
    return tuple(c.astype(np.uint32) for c in (c0, c1, c2, c3))


def uniforms(seed: int, streams, block: int) -> np.ndarray:
    """Four uniforms in (0, 1) per stream for counter block ``block``; shape ``(4, n)``."""
    streams = np.asarray(streams, dtype=np.uint64)
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    ctr = (
        np.full(streams.shape, block, dtype=np.uint64),
        streams & _MASK,
        streams >> _SHIFT,
        np.zeros(streams.shape, dtype=np.uint64),
    )
    words = philox4x32(ctr, (seed & 0xFFFFFFFF, seed >> 32))
    return (np.stack(words).astype(np.float64) + 0.5) * 2.0**-32
