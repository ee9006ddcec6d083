"""Seeded, counter-based randomness with named substreams.

Every sampling routine in the package draws from a Philox generator keyed by
``(seed, stream tag)``.  Philox is counter-based, so a fixed (seed, tag) pair
names an entire stream independently of how other streams are consumed:
labels, pairwise noise, vertex splits, tuple choices and adversary moves never
share state.  Within the noise stream, the value for pair ``{u, v}`` sits at a
fixed offset (the rank of the pair), which is what makes couplings such as
densify exact and makes parallel edge sampling reproducible.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

# Stream tags. Values are arbitrary but frozen: changing them changes every
# sampled instance.
LABELS = 0x4C4142
NOISE = 0x4E4F49
SPLIT = 0x53504C
TUPLES = 0x545550
ADVERSARY = 0x414456
REWRITE = 0x525757
SWEEP = 0x535750


def stream(seed: int, tag: int, index: int = 0) -> Generator:
    """Independent generator for (seed, tag, index).

    ``index`` distinguishes repeated uses of one tag (e.g. adversary rounds).
    """
    return Generator(Philox(key=[np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(tag ^ (index << 24))]))


def pair_rank(u: int, v: int, n: int) -> int:
    """Rank of pair {u, v} (u < v) in row-major upper-triangle order."""
    if u > v:
        u, v = v, u
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def pair_uniforms(seed: int, n: int) -> np.ndarray:
    """Uniforms for all n*(n-1)/2 vertex pairs, indexed by pair_rank."""
    return stream(seed, NOISE).random(n * (n - 1) // 2)


def label_uniforms(seed: int, n: int, d: int) -> np.ndarray:
    """Uniform matrix (n, d); row v is vertex v's label substream."""
    return stream(seed, LABELS).random((n, d))


def derive_seed(seed: int, cell: int, trial: int) -> int:
    """Stable 63-bit seed for a sweep cell/trial, independent of grid order."""
    g = Generator(Philox(key=[np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64((cell << 20) ^ trial ^ SWEEP)]))
    return int(g.integers(0, 2**63 - 1))
