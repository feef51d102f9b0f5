"""Real Gaussian wiretap channel with M helper transmitters.

Transmitter 1 carries the message; transmitters 2..M+1 are helpers.  The
legitimate receiver sees ``h . x + N1`` and the eavesdropper ``g . x + N2``
for one channel use with input vector ``x`` of length M+1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .streams import substream

__all__ = [
    "ChannelRealization",
    "PowerBudget",
    "sample_channel",
    "legit_output",
    "eve_output",
    "empirical_power",
    "default_budget",
]


@dataclass(frozen=True)
class ChannelRealization:
    """One drawn channel: gains to both receivers plus noise levels.

    All gains are required to be nonzero; draws come from continuous
    distributions so degenerate (rationally dependent) gain combinations
    are detected downstream via constellation collision checks rather
    than prevented here.
    """

    m: int
    h: np.ndarray
    g: np.ndarray
    sigma1: float = 1.0
    sigma2: float = 1.0
    seed: int | None = None

    def __post_init__(self):
        h = np.atleast_1d(np.asarray(self.h, dtype=float))
        g = np.atleast_1d(np.asarray(self.g, dtype=float))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)
        if self.m < 1:
            raise ValueError("m must be >= 1 (the no-helper channel has a closed form)")
        if h.shape != (self.m + 1,) or g.shape != (self.m + 1,):
            raise ValueError(f"gain vectors must have length m+1 = {self.m + 1}")
        if np.any(h == 0.0) or np.any(g == 0.0):
            raise ValueError("all channel gains must be nonzero")
        if self.sigma1 < 0 or self.sigma2 < 0:
            raise ValueError("noise standard deviations must be nonnegative")

    def to_json(self) -> str:
        return json.dumps(
            {
                "m": self.m,
                "h": self.h.tolist(),
                "g": self.g.tolist(),
                "sigma1": self.sigma1,
                "sigma2": self.sigma2,
                "seed": self.seed,
            }
        )

    @classmethod
    def from_json(cls, payload: str) -> "ChannelRealization":
        d = json.loads(payload)
        return cls(
            m=d["m"],
            h=np.asarray(d["h"], dtype=float),
            g=np.asarray(d["g"], dtype=float),
            sigma1=d.get("sigma1", 1.0),
            sigma2=d.get("sigma2", 1.0),
            seed=d.get("seed"),
        )


@dataclass(frozen=True)
class PowerBudget:
    """Average power constraint P plus the known bound c_bar >= sum(g_k^2).

    The legitimate side may use c_bar in scheme construction and analysis,
    never g itself.
    """

    p: float
    c_bar: float

    def __post_init__(self):
        if self.p <= 0:
            raise ValueError("power must be positive")
        if self.c_bar <= 0:
            raise ValueError("c_bar must be positive")


def default_budget(ch: ChannelRealization, p: float) -> PowerBudget:
    """Budget with a loose known bound, twice the realized sum of g^2."""
    return PowerBudget(p=p, c_bar=2.0 * float(np.sum(ch.g**2)))


def sample_channel(
    m: int,
    seed: int,
    magnitude_range: tuple[float, float] = (0.5, 2.0),
) -> ChannelRealization:
    """Draw a generic channel: gain magnitudes uniform in ``magnitude_range``
    with independent random signs.  Identical seeds give identical draws.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    lo, hi = magnitude_range
    if lo <= 0 or hi <= lo:
        raise ValueError("magnitude range must be a positive interval excluding 0")
    rng = substream(seed, "channel", m)
    mags = rng.uniform(lo, hi, size=2 * (m + 1))
    signs = rng.integers(0, 2, size=2 * (m + 1)) * 2 - 1
    gains = mags * signs
    return ChannelRealization(m=m, h=gains[: m + 1], g=gains[m + 1 :], seed=seed)


def legit_output(ch: ChannelRealization, x, noise=0.0):
    """Legitimate receiver observation ``sum_i h[i] x[i] + noise``.

    ``x`` may be a single input vector or a batch with trailing dimension
    M+1; ``noise`` broadcasts against the batch.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != ch.m + 1:
        raise ValueError(f"input vector must have length m+1 = {ch.m + 1}")
    return x @ ch.h + noise


def eve_output(ch: ChannelRealization, x, noise=0.0):
    """Eavesdropper observation ``sum_i g[i] x[i] + noise``."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != ch.m + 1:
        raise ValueError(f"input vector must have length m+1 = {ch.m + 1}")
    return x @ ch.g + noise


def empirical_power(blocks) -> np.ndarray:
    """Per-transmitter mean of X^2 over a sequence of transmit blocks."""
    if hasattr(blocks, "__len__") and len(blocks) == 0:
        raise ValueError("cannot average power over an empty sequence")
    if isinstance(blocks, np.ndarray):
        x = np.atleast_2d(blocks)
    else:
        x = np.stack([np.asarray(b.x, dtype=float) for b in blocks])
    return np.mean(x**2, axis=0)
