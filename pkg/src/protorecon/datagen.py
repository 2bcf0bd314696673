"""Synthetic dataset sampling and deterministic per-run seed derivation.

Seed layout (stable across versions, documented in the README): the
fields are rendered as ASCII decimal, joined with "|", and hashed with
blake2b to an 8-byte digest read as a little-endian unsigned 64-bit
integer.

    dataset seed:  "master|n|dataset_id"
    init seed:     "master|n|dataset_id|init_id"

The mask is deliberately absent from both strings so that all masks (and,
for the dataset, both inits) share the same data and starting point,
keeping mask comparisons paired. Setting literal_tuple=True appends
"|mask" to both strings instead, which unpairs the comparisons.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .model import Dataset


def min_separation(n: int) -> float:
    """Adaptive minimum x-gap: min(0.05, 0.5/n)."""
    if n < 2:
        raise ValueError("min separation needs n >= 2")
    return min(0.05, 0.5 / n)


def sample_dataset(n: int, seed: int) -> Dataset:
    """Uniform pairs on [0,1]^2 with x sorted and gap-constrained.

    Constructive sampler: n uniforms on [0, 1-(n-1)*delta] are sorted and
    the j-th order statistic is shifted by j*delta, which realizes the
    uniform-given-min-gap law exactly. y is drawn after x and paired with
    the sorted x in draw order.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    delta = min_separation(n)
    rng = np.random.default_rng(seed)
    span = 1.0 - (n - 1) * delta
    raw = np.sort(rng.uniform(0.0, span, n))
    x = raw + delta * np.arange(n)
    y = rng.uniform(0.0, 1.0, n)
    return Dataset(x=x, y=y)


@dataclass(frozen=True)
class SeedContext:
    master_seed: int
    n: int
    dataset_id: int
    init_id: int = 0
    mask: str = "000"
    literal_tuple: bool = False


def _mix64(text: str) -> int:
    digest = hashlib.blake2b(text.encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed(ctx: SeedContext, purpose: str) -> int:
    """Stable 64-bit seed for 'dataset' or 'init' under the documented layout."""
    if purpose == "dataset":
        fields = [ctx.master_seed, ctx.n, ctx.dataset_id]
    elif purpose == "init":
        fields = [ctx.master_seed, ctx.n, ctx.dataset_id, ctx.init_id]
    else:
        raise ValueError(f"purpose must be 'dataset' or 'init', got {purpose!r}")
    text = "|".join(str(f) for f in fields)
    if ctx.literal_tuple:
        text += f"|{ctx.mask}"
    return _mix64(text)
