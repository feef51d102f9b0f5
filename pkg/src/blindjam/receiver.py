"""Decoders and Monte Carlo error-rate estimation.

The legitimate receiver decodes the message symbols by nearest-point search
on its effective scalar constellation; the jamming coordinate is part of
the lattice but discarded from the decision. The eavesdropper-side decoder
recovers the jamming symbols given the message symbols, which is the step
that caps the equivocation loss; it exists to validate that step
numerically, not as a threat-model capability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, eve_output, legit_output
from .constellation import (
    DEFAULT_POINT_CAP,
    DegenerateLatticeError,
    ReceiverLattice,
    build_receiver_lattice,
    enumerate_sum_lattice,
    nearest_index,
)
from .schemes import SchemeConfig, encode, sample_symbols
from .streams import substream

__all__ = [
    "ErrorEstimate",
    "legit_lattice",
    "decode_legit",
    "decode_legit_batch",
    "estimate_ser",
    "eve_u_lattice",
    "eve_decode_u_given_v",
    "estimate_eve_u_error",
]

DEFAULT_CHUNK = 5000


@dataclass(frozen=True)
class ErrorEstimate:
    """Binomial error-rate estimate from a Monte Carlo run."""

    trials: int
    errors: int
    rate: float
    stderr: float
    per_stream: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.trials <= 0:
            raise ValueError("trials must be positive")
        if not 0 <= self.errors <= self.trials:
            raise ValueError("errors must lie in [0, trials]")
        if abs(self.rate - self.errors / self.trials) > 1e-12:
            raise ValueError("rate must equal errors/trials")

    @classmethod
    def from_counts(cls, errors: int, trials: int, per_stream=None) -> "ErrorEstimate":
        rate = errors / trials
        stderr = math.sqrt(max(rate * (1.0 - rate), 0.0) / trials)
        if per_stream is not None:
            per_stream = tuple(float(x) for x in per_stream)
        return cls(trials=trials, errors=errors, rate=rate, stderr=stderr,
                   per_stream=per_stream)


def _jam_radius(cfg: SchemeConfig) -> int:
    # Blind superposes m+1 aligned jamming streams at the legitimate
    # receiver, the aligned baseline only the m helpers
    if cfg.kind == "Blind":
        return (cfg.m + 1) * cfg.q
    if cfg.kind == "CsiAligned":
        return cfg.m * cfg.q
    raise ValueError("GaussianJam has no lattice at the legitimate receiver")


def legit_lattice(cfg: SchemeConfig, ch: ChannelRealization,
                  cap: int = DEFAULT_POINT_CAP) -> ReceiverLattice:
    """Effective constellation at the legitimate receiver for this scheme."""
    if ch.m != cfg.m:
        raise ValueError("channel and scheme disagree on helper count")
    return build_receiver_lattice(ch.h[0], cfg.alphas, a=cfg.a, q=cfg.q,
                                  cap=cap, jam_radius=_jam_radius(cfg))


def decode_legit(y1: float, lat: ReceiverLattice) -> tuple[int, ...]:
    """Message estimate: v-part of the nearest lattice label (jam coordinate dropped)."""
    if lat.collision:
        raise DegenerateLatticeError("degenerate gains: distinct labels collide")
    idx = nearest_index(lat.points, float(y1))
    return tuple(int(t) for t in lat.labels[idx][:-1])


def decode_legit_batch(y1: np.ndarray, lat: ReceiverLattice) -> np.ndarray:
    """Vectorized decode_legit; returns an (n, m) integer array."""
    if lat.collision:
        raise DegenerateLatticeError("degenerate gains: distinct labels collide")
    idx = nearest_index(lat.points, np.asarray(y1, dtype=float))
    return lat.labels[idx][:, :-1]


def estimate_ser(cfg: SchemeConfig, ch: ChannelRealization, n_trials: int, seed: int,
                 min_errors: int | None = 100, chunk: int = DEFAULT_CHUNK,
                 cap: int = DEFAULT_POINT_CAP) -> ErrorEstimate:
    """Block symbol-error rate of the legitimate receiver.

    A block counts as an error when any message symbol is decoded wrongly.
    Trials are consumed in fixed-size chunks with one RNG substream per
    chunk index, and the run stops at the first chunk boundary where the
    cumulative error count reaches ``min_errors`` (or after ``n_trials``).
    Because the stop rule looks only at a prefix of a fixed stream order,
    results are reproducible no matter how callers schedule the work.
    """
    if cfg.kind not in ("Blind", "CsiAligned"):
        raise ValueError("symbol-error estimation needs a lattice scheme kind")
    if n_trials <= 0:
        raise ValueError("n_trials must be positive")
    lat = legit_lattice(cfg, ch, cap=cap)
    if lat.collision:
        raise DegenerateLatticeError("degenerate gains: distinct labels collide")
    trials = 0
    errors = 0
    stream_errors = np.zeros(cfg.m, dtype=np.int64)
    block_idx = 0
    while trials < n_trials:
        n = min(chunk, n_trials - trials)
        rng = substream(seed, "ser", block_idx)
        v, u = sample_symbols(cfg, rng, n=n)
        blk = encode(cfg, ch.h, v, u)
        y = legit_output(ch, blk.x)
        if ch.sigma1 > 0:
            y = y + rng.normal(0.0, ch.sigma1, size=n)
        vhat = decode_legit_batch(y, lat)
        wrong = vhat != v
        errors += int(np.sum(np.any(wrong, axis=1)))
        stream_errors += np.sum(wrong, axis=0)
        trials += n
        block_idx += 1
        if min_errors is not None and errors >= min_errors:
            break
    return ErrorEstimate.from_counts(errors, trials,
                                     per_stream=stream_errors / trials)


def _eve_jam_coeffs(cfg: SchemeConfig, ch: ChannelRealization) -> np.ndarray:
    # coefficient of each lattice jamming stream at the eavesdropper
    if cfg.kind == "Blind":
        return ch.g / ch.h
    if cfg.kind == "CsiAligned":
        return ch.g[1:] / ch.h[1:]
    raise ValueError("GaussianJam has no lattice jamming streams")


def eve_u_lattice(cfg: SchemeConfig, ch: ChannelRealization,
                  cap: int = DEFAULT_POINT_CAP) -> ReceiverLattice:
    """Constellation of the jamming sum alone as seen by the eavesdropper."""
    if ch.m != cfg.m:
        raise ValueError("channel and scheme disagree on helper count")
    coeffs = _eve_jam_coeffs(cfg, ch)
    return enumerate_sum_lattice(coeffs, [cfg.q] * coeffs.shape[0], a=cfg.a, cap=cap)


def _eve_message_offset(cfg: SchemeConfig, ch: ChannelRealization, v: np.ndarray) -> np.ndarray:
    alphas = np.asarray(cfg.alphas)
    return cfg.a * (np.asarray(v) @ (ch.g[0] * alphas))


def eve_decode_u_given_v(y2: float, v, cfg: SchemeConfig, ch: ChannelRealization,
                         lat: ReceiverLattice | None = None) -> tuple[int, ...]:
    """Jamming-symbol estimate at the eavesdropper, conditioned on the messages.

    Subtracts the known message contribution from y2 and nearest-point
    decodes the residual on the jamming constellation.
    """
    if lat is None:
        lat = eve_u_lattice(cfg, ch)
    if lat.collision:
        raise DegenerateLatticeError("degenerate gain ratios: jamming labels collide")
    resid = float(y2) - float(_eve_message_offset(cfg, ch, np.asarray(v)))
    idx = nearest_index(lat.points, resid)
    return tuple(int(t) for t in lat.labels[idx])


def estimate_eve_u_error(cfg: SchemeConfig, ch: ChannelRealization, n_trials: int, seed: int,
                         min_errors: int | None = 100, chunk: int = DEFAULT_CHUNK,
                         cap: int = DEFAULT_POINT_CAP,
                         v_offset: int = 0) -> ErrorEstimate:
    """Error rate of the conditional jamming decoder at the eavesdropper.

    ``v_offset`` shifts the conditioning messages before decoding; nonzero
    values deliberately mismatch the residual (sanity check that the
    decoder actually uses the conditioning).
    """
    if n_trials <= 0:
        raise ValueError("n_trials must be positive")
    lat = eve_u_lattice(cfg, ch, cap=cap)
    if lat.collision:
        raise DegenerateLatticeError("degenerate gain ratios: jamming labels collide")
    u_cols = slice(0, cfg.m + 1) if cfg.kind == "Blind" else slice(1, cfg.m + 1)
    trials = 0
    errors = 0
    block_idx = 0
    while trials < n_trials:
        n = min(chunk, n_trials - trials)
        rng = substream(seed, "eveu", block_idx)
        v, u = sample_symbols(cfg, rng, n=n)
        blk = encode(cfg, ch.h, v, u)
        y = eve_output(ch, blk.x)
        if ch.sigma2 > 0:
            y = y + rng.normal(0.0, ch.sigma2, size=n)
        v_cond = v if v_offset == 0 else np.clip(v + v_offset, -cfg.q, cfg.q)
        resid = y - _eve_message_offset(cfg, ch, v_cond)
        idx = nearest_index(lat.points, resid)
        uhat = lat.labels[idx]
        errors += int(np.sum(np.any(uhat != u[:, u_cols], axis=1)))
        trials += n
        block_idx += 1
        if min_errors is not None and errors >= min_errors:
            break
    return ErrorEstimate.from_counts(errors, trials)
