"""Seeded generators for sparse coefficient matrices and test dictionaries.

The pinned bit generator is numpy's PCG64 (period 2**128).  Gaussian values
are produced by the Box-Muller transform on PCG64 uniforms and fixed-k
supports by a partial Fisher-Yates shuffle, so streams are fully determined by
the code in this module and never by numpy's own samplers.  Changing any of
this breaks golden values in the test-suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

VALUE_DISTS = ("gaussian", "rademacher")
DICT_KINDS = ("gaussian_iid", "hadamard", "identity")


def splitmix64(x: int) -> int:
    """SplitMix64 output function applied to a single 64-bit word."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, tags=()) -> int:
    """Fold ``tags`` into ``master`` with SplitMix64 avalanche steps.

    Order matters: ``derive_seed(m, [a, b]) != derive_seed(m, [b, a])`` except
    with negligible probability.
    """
    h = splitmix64(int(master) & MASK64)
    for i, t in enumerate(tags):
        h = splitmix64(h ^ splitmix64((int(t) + i * GOLDEN_GAMMA) & MASK64))
    return h


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))


def box_muller(rng: np.random.Generator, size) -> np.ndarray:
    """Standard normal samples via Box-Muller on ``rng`` uniforms."""
    count = int(np.prod(size))
    pairs = (count + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # (0, 1], keeps log finite
    u2 = rng.random(pairs)
    rad = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    z = np.empty(2 * pairs)
    z[0::2] = rad * np.cos(ang)
    z[1::2] = rad * np.sin(ang)
    return z[:count].reshape(size)


def rademacher(rng: np.random.Generator, size) -> np.ndarray:
    return np.where(rng.random(size) < 0.5, -1.0, 1.0)


def draw_values(rng: np.random.Generator, size, dist: str = "gaussian") -> np.ndarray:
    if dist == "gaussian":
        return box_muller(rng, size)
    if dist == "rademacher":
        return rademacher(rng, size)
    raise ConfigError(f"unknown value distribution {dist!r}")


def partial_fisher_yates(rng: np.random.Generator, n: int, k: int, columns: int) -> np.ndarray:
    """Return a ``(k, columns)`` array of distinct row indices per column."""
    perm = np.tile(np.arange(n)[:, None], (1, columns))
    cols = np.arange(columns)
    for i in range(k):
        j = i + np.floor(rng.random(columns) * (n - i)).astype(np.int64)
        j = np.minimum(j, n - 1)
        top = perm[i, cols].copy()
        perm[i, cols] = perm[j, cols]
        perm[j, cols] = top
    return perm[:k]


@dataclass(frozen=True)
class CoeffModel:
    """Random sparse coefficient matrix model.

    Exactly one of ``theta`` (Bernoulli mask) and ``k`` (fixed nonzeros per
    column) must be given.
    """

    n: int
    p: int
    theta: float | None = None
    k: int | None = None
    dist: str = "gaussian"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ConfigError("n and p must be positive")
        if (self.theta is None) == (self.k is None):
            raise ConfigError("specify exactly one of theta (bernoulli) or k (fixed_k)")
        if self.theta is not None and not 0.0 < self.theta <= 1.0:
            raise ConfigError("bernoulli theta must lie in (0, 1]")
        if self.k is not None and not 1 <= self.k <= self.n:
            raise ConfigError("fixed_k requires 1 <= k <= n")
        if self.dist not in VALUE_DISTS:
            raise ConfigError(f"dist must be one of {VALUE_DISTS}")

    @property
    def sparsity(self) -> str:
        return "bernoulli" if self.theta is not None else "fixed_k"

    @property
    def mu(self) -> float:
        """E|R_ij| for the value distribution."""
        return math.sqrt(2.0 / math.pi) if self.dist == "gaussian" else 1.0


@dataclass(frozen=True)
class DictModel:
    n: int
    kind: str = "gaussian_iid"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n must be positive")
        if self.kind not in DICT_KINDS:
            raise ConfigError(f"kind must be one of {DICT_KINDS}")
        if self.kind == "hadamard" and self.n & (self.n - 1):
            raise ConfigError("hadamard dictionaries need n a power of 2")


def gen_coeffs(model: CoeffModel) -> np.ndarray:
    """Draw the ``n x p`` coefficient matrix described by ``model``."""
    rng = make_rng(model.seed)
    n, p = model.n, model.p
    if model.sparsity == "bernoulli":
        mask = rng.random((n, p)) < model.theta
        values = draw_values(rng, (n, p), model.dist)
        return np.where(mask, values, 0.0)
    rows = partial_fisher_yates(rng, n, model.k, p)
    values = draw_values(rng, (model.k, p), model.dist)
    x = np.zeros((n, p))
    x[rows, np.broadcast_to(np.arange(p), rows.shape)] = values
    return x


def hadamard(n: int) -> np.ndarray:
    h = np.ones((1, 1))
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    return h


def gen_dict(model: DictModel) -> np.ndarray:
    if model.kind == "identity":
        return np.eye(model.n)
    if model.kind == "hadamard":
        return hadamard(model.n)
    return box_muller(make_rng(model.seed), (model.n, model.n))
