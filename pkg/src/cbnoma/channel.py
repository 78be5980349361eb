"""Two-user Rayleigh channel generation and its sufficient statistics.

Two sampling routes are provided on purpose.  The vector route draws the
actual complex channel vectors and computes gains and squared correlation
exactly; the distributional route draws the sufficient statistics directly
(Gamma gains, Beta(1, M-1) squared correlation) and is O(1) per trial
regardless of the antenna count.  Under i.i.d. unit-variance complex normal
fading the two routes are equal in distribution and the statistics are
mutually independent, which the test suite checks empirically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SystemParams:
    """One scenario: antenna count, large-scale gains, SINR targets, gate threshold.

    All gains and targets are linear (dB conversion happens at the CLI only).
    User 1 is the stronger user by convention: beta1 >= beta2.
    """

    m: int
    beta1: float
    beta2: float
    gamma1: float
    gamma2: float
    rho_th: float

    def __post_init__(self):
        if self.m < 2 or self.m != int(self.m):
            raise ValueError(f"antenna count m must be an integer >= 2, got {self.m}")
        if not 0.0 < self.beta2 <= self.beta1:
            raise ValueError(
                f"need beta1 >= beta2 > 0 (user 1 is the stronger user), "
                f"got beta1={self.beta1}, beta2={self.beta2}"
            )
        if self.gamma1 <= 0.0:
            raise ValueError(f"gamma1 must be > 0, got {self.gamma1}")
        # gamma2 = 0 is allowed: it degenerates to single-user service.
        if self.gamma2 < 0.0:
            raise ValueError(f"gamma2 must be >= 0, got {self.gamma2}")
        if not 0.0 <= self.rho_th <= 1.0:
            raise ValueError(f"rho_th must be in [0, 1], got {self.rho_th}")

    @property
    def rho_th_sq(self) -> float:
        return self.rho_th * self.rho_th


@dataclass(frozen=True)
class ChannelVectors:
    """Small-scale fading vectors, shape (m,) or (n, m) for a batch."""

    h1: np.ndarray
    h2: np.ndarray


@dataclass(frozen=True)
class ChannelStats:
    """Sufficient statistics of one realization (or a batch of them)."""

    g1_sq: np.ndarray | float
    g2_sq: np.ndarray | float
    rho_sq: np.ndarray | float


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator from an explicit 64-bit seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent substream for one simulation chunk.

    Derived from (seed, chunk_index) only, so the stream a chunk sees does
    not depend on which worker executes it or on how many workers exist.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.Philox(ss))


def sample_vectors(m: int, rng: np.random.Generator, size: int | None = None) -> ChannelVectors:
    """Draw h1, h2 with i.i.d. unit-variance complex normal entries.

    Real and imaginary parts are zero-mean Gaussian with variance 1/2 each.
    Draw order is fixed (h1 real, h1 imag, h2 real, h2 imag) so a given seed
    always yields the same realizations.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    shape = (m,) if size is None else (size, m)
    scale = 1.0 / np.sqrt(2.0)

    def draw():
        re = rng.standard_normal(shape)
        im = rng.standard_normal(shape)
        return scale * (re + 1j * im)

    return ChannelVectors(h1=draw(), h2=draw())


def stats_from_vectors(vectors: ChannelVectors) -> ChannelStats:
    """Exact squared norms and squared correlation coefficient."""
    h1, h2 = vectors.h1, vectors.h2
    g1 = np.real(np.sum(h1 * np.conj(h1), axis=-1))
    g2 = np.real(np.sum(h2 * np.conj(h2), axis=-1))
    if np.any(g1 == 0.0) or np.any(g2 == 0.0):
        raise ValueError("zero-norm channel vector; check the RNG inputs")
    inner = np.sum(np.conj(h1) * h2, axis=-1)
    rho_sq = (inner.real**2 + inner.imag**2) / (g1 * g2)
    return ChannelStats(g1_sq=g1, g2_sq=g2, rho_sq=rho_sq)


def sample_stats(m: int, rng: np.random.Generator, size: int | None = None) -> ChannelStats:
    """Draw the sufficient statistics directly (fast path).

    g1_sq, g2_sq ~ Gamma(m, 1) independent; rho_sq ~ Beta(1, m-1) independent
    of both, sampled by closed-form inversion rho_sq = 1 - U^(1/(m-1)).
    """
    if m < 2:
        raise ValueError(f"m must be >= 2 for the distributional path, got {m}")
    g1 = rng.gamma(m, 1.0, size)
    g2 = rng.gamma(m, 1.0, size)
    u = rng.random(size)
    rho_sq = 1.0 - u ** (1.0 / (m - 1))
    return ChannelStats(g1_sq=g1, g2_sq=g2, rho_sq=rho_sq)
