"""Transmit-side constructions for the helper-assisted wiretap simulator.

Three scheme kinds share one config shape:

* ``Blind``: the legitimate transmitter superposes its own lattice jamming
  stream on the message streams and every helper inverts its own gain, so
  all jamming collapses onto one dimension at the legitimate receiver.
  Nothing here reads the eavesdropper gains.
* ``CsiAligned``: helpers still invert their gains, but the message
  coefficients are chosen from full eavesdropper knowledge so each message
  stream lands on top of a jamming stream at the eavesdropper.
* ``GaussianJam``: helpers transmit i.i.d. Gaussian noise at full power,
  the classical unstructured baseline.

The power schedule is shared: q grows like a fractional power of p, the
spacing aims the constellation at the power budget, and gamma is set to the
largest value that keeps every transmitter inside the budget.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .streams import substream

__all__ = [
    "KINDS",
    "SchemeConfig",
    "TransmitBlock",
    "schedule_q",
    "admissible_gamma",
    "make_blind_scheme",
    "make_csi_scheme",
    "make_gaussian_jam_scheme",
    "encode",
    "sample_symbols",
    "analytic_power",
    "config_to_json",
    "config_from_json",
]

KINDS = ("Blind", "CsiAligned", "GaussianJam")


def schedule_q(p: float, delta: float, m: int) -> tuple[int, bool]:
    """Symbol half-width for power ``p``: floor of p^((1-delta)/(2(m+1+delta))).

    Clamped to >= 1 so small-p runs stay well defined; the second return
    value flags that clamping fired (valid but trivial constellation,
    outside the regime where the rate guarantees kick in).
    """
    if p <= 0:
        raise ValueError("power p must be positive")
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 0.5)")
    if m < 1:
        raise ValueError("helper count m must be >= 1")
    raw = math.floor(p ** ((1.0 - delta) / (2.0 * (m + 1 + delta))))
    return max(1, raw), raw < 1


def admissible_gamma(h, alphas) -> float:
    """Largest power-scaling factor admissible for gains h and coefficients alphas.

    min of [1/|h_1| + sum|alpha_k|]^-1 and every helper gain magnitude; with
    this value each transmitter's second moment stays at or below the budget
    for any q >= 1.
    """
    h = np.asarray(h, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    if np.any(h == 0):
        raise ValueError("all legitimate gains must be nonzero")
    lead = 1.0 / (1.0 / abs(h[0]) + float(np.sum(np.abs(alphas))))
    if h.shape[0] > 1:
        return float(min(lead, np.min(np.abs(h[1:]))))
    return float(lead)


@dataclass(frozen=True)
class SchemeConfig:
    """Everything a transmitter ensemble needs for one scheme instance.

    ``alphas`` are the m message-stream coefficients. ``trivial_q`` records
    that the schedule wanted q < 1 and was clamped. Constructors guarantee
    q = max(1, floor(p^((1-delta)/(2(m+1+delta))))) and a = gamma*sqrt(p)/q;
    the dataclass itself only enforces basic ranges so degenerate configs
    can be built by hand in tests.
    """

    kind: str
    m: int
    p: float
    delta: float
    gamma: float
    q: int
    a: float
    alphas: tuple[float, ...]
    c_bar: float
    trivial_q: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.p <= 0:
            raise ValueError("p must be positive")
        if not 0 < self.delta < 0.5:
            raise ValueError("delta must lie in (0, 0.5)")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.q < 0:
            raise ValueError("q must be >= 0")
        if self.a <= 0:
            raise ValueError("a must be positive")
        if len(self.alphas) != self.m:
            raise ValueError("need one alpha per message stream")
        if self.c_bar <= 0:
            raise ValueError("c_bar must be positive")
        object.__setattr__(self, "alphas", tuple(float(x) for x in self.alphas))


@dataclass(frozen=True, eq=False)
class TransmitBlock:
    """Channel inputs for one (or a batch of) channel uses.

    v: message symbols, integer, trailing dim m.  u: jamming symbols,
    integer, trailing dim m+1 (entry 0 is ignored by the kinds that have no
    transmitter-side lattice jamming).  x: the real channel inputs, trailing
    dim m+1.
    """

    v: np.ndarray
    u: np.ndarray
    x: np.ndarray


def _draw_alphas(m: int, seed: int) -> tuple[float, ...]:
    # generic reals: magnitudes in [0.5, 1.5], random sign; keeps the
    # 1/|h1| + sum|alpha| term bounded so gamma does not collapse
    rng = substream(seed, "alphas", m)
    mags = rng.uniform(0.5, 1.5, size=m)
    signs = rng.integers(0, 2, size=m) * 2 - 1
    return tuple(float(x) for x in mags * signs)


def _schedule(p: float, delta: float, m: int, gamma: float) -> tuple[int, float, bool]:
    q, trivial = schedule_q(p, delta, m)
    a = gamma * math.sqrt(p) / q
    return q, a, trivial


def make_blind_scheme(m: int, p: float, delta: float, h, c_bar: float, seed: int) -> SchemeConfig:
    """Jamming scheme built from the legitimate gains alone.

    alphas are drawn uniformly from [0.5, 1.5] with random sign (generic
    reals); gamma is set to its largest admissible value. The eavesdropper
    gains are not an input: only their assumed bound c_bar is carried, and
    only for later analysis, never for construction.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (m + 1,):
        raise ValueError("h must have length m+1")
    if c_bar <= 0:
        raise ValueError("c_bar must be positive")
    alphas = _draw_alphas(m, seed)
    gamma = admissible_gamma(h, alphas)
    q, a, trivial = _schedule(p, delta, m, gamma)
    return SchemeConfig(
        kind="Blind", m=m, p=p, delta=delta, gamma=gamma, q=q, a=a,
        alphas=alphas, c_bar=c_bar, trivial_q=trivial,
    )


def make_gaussian_jam_scheme(m: int, p: float, delta: float, h, c_bar: float, seed: int) -> SchemeConfig:
    """Unstructured baseline: message streams as in the blind scheme, but
    helpers will emit i.i.d. Gaussian noise at full power when encoding.

    Also blind: never reads the eavesdropper gains.
    """
    base = make_blind_scheme(m, p, delta, h, c_bar, seed)
    return SchemeConfig(
        kind="GaussianJam", m=base.m, p=base.p, delta=base.delta, gamma=base.gamma,
        q=base.q, a=base.a, alphas=base.alphas, c_bar=base.c_bar, trivial_q=base.trivial_q,
    )


def make_csi_scheme(m: int, p: float, delta: float, h, g, seed: int = 0,
                    c_bar: float | None = None) -> SchemeConfig:
    """Aligned baseline that requires the eavesdropper gains.

    Helper j inverts its own gain, so all jamming shares one dimension at
    the legitimate receiver; the message coefficient of stream j is
    g_j/(g_1 h_j), which puts message stream j and jamming stream j on the
    same coefficient at the eavesdropper. Only the m helpers jam. The seed
    is accepted for signature parity; the construction is deterministic.
    """
    h = np.asarray(h, dtype=float)
    g = np.asarray(g, dtype=float)
    if h.shape != (m + 1,) or g.shape != (m + 1,):
        raise ValueError("h and g must have length m+1")
    if np.any(g == 0) or np.any(h == 0):
        raise ValueError("all gains must be nonzero")
    alphas = tuple(float(x) for x in g[1:] / (g[0] * h[1:]))
    gamma = admissible_gamma(h, alphas)
    q, a, trivial = _schedule(p, delta, m, gamma)
    if c_bar is None:
        c_bar = 2.0 * float(np.sum(g ** 2))
    return SchemeConfig(
        kind="CsiAligned", m=m, p=p, delta=delta, gamma=gamma, q=q, a=a,
        alphas=alphas, c_bar=c_bar, trivial_q=trivial,
    )


def encode(cfg: SchemeConfig, h, v, u, rng: np.random.Generator | None = None) -> TransmitBlock:
    """Map symbols to channel inputs. Batch-capable: v (..., m), u (..., m+1).

    Blind: x_1 = a u_1 / h_1 + sum_k alpha_k a v_k, x_j = a u_j / h_j.
    CsiAligned: x_1 carries messages only, helpers as above (u_1 ignored).
    GaussianJam: x_1 carries messages only, helpers draw N(0, p) from rng.

    The eavesdropper gains are not an argument: for the blind kinds the
    output cannot depend on them.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (cfg.m + 1,):
        raise ValueError("h must have length m+1")
    if np.any(h == 0):
        raise ValueError("all legitimate gains must be nonzero")
    v = np.asarray(v)
    u = np.asarray(u)
    if v.shape[-1:] != (cfg.m,):
        raise ValueError("v must have trailing dimension m")
    if u.shape[-1:] != (cfg.m + 1,):
        raise ValueError("u must have trailing dimension m+1")
    if np.any(np.abs(v) > cfg.q) or np.any(np.abs(u) > cfg.q):
        raise ValueError(f"symbols out of range [-{cfg.q}, {cfg.q}]")
    batch = np.broadcast_shapes(v.shape[:-1], u.shape[:-1])
    alphas = np.asarray(cfg.alphas)
    msg = cfg.a * (v @ alphas)
    x = np.empty(batch + (cfg.m + 1,), dtype=float)
    if cfg.kind == "Blind":
        x[..., 0] = cfg.a * u[..., 0] / h[0] + msg
        x[..., 1:] = cfg.a * u[..., 1:] / h[1:]
    elif cfg.kind == "CsiAligned":
        x[..., 0] = msg
        x[..., 1:] = cfg.a * u[..., 1:] / h[1:]
    else:
        if rng is None:
            raise ValueError("GaussianJam encoding draws helper noise; pass rng")
        x[..., 0] = msg
        x[..., 1:] = rng.normal(0.0, math.sqrt(cfg.p), size=batch + (cfg.m,))
    return TransmitBlock(v=v, u=u, x=x)


def sample_symbols(cfg: SchemeConfig, seed, n: int | None = None):
    """Uniform i.i.d. symbols in [-q, q] for all 2m+1 streams.

    seed may be an integer (a dedicated substream is derived) or an existing
    Generator (consumed in place; lets callers drive per-block substreams).
    Returns (v, u) with shapes (m,), (m+1,) or (n, m), (n, m+1).
    """
    rng = seed if isinstance(seed, np.random.Generator) else substream(seed, "symbols")
    vshape = (cfg.m,) if n is None else (n, cfg.m)
    ushape = (cfg.m + 1,) if n is None else (n, cfg.m + 1)
    v = rng.integers(-cfg.q, cfg.q + 1, size=vshape)
    u = rng.integers(-cfg.q, cfg.q + 1, size=ushape)
    return v, u


def analytic_power(cfg: SchemeConfig, h) -> np.ndarray:
    """Exact per-transmitter second moments E[X_j^2] under uniform symbols.

    Each PAM stream contributes a^2 q(q+1)/3 times its squared coefficient;
    GaussianJam helpers sit exactly at p. Under the gamma rule every entry
    is <= p.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (cfg.m + 1,):
        raise ValueError("h must have length m+1")
    s2 = cfg.a ** 2 * cfg.q * (cfg.q + 1) / 3.0
    alphas = np.asarray(cfg.alphas)
    e = np.empty(cfg.m + 1)
    if cfg.kind == "Blind":
        e[0] = s2 * (1.0 / h[0] ** 2 + float(np.sum(alphas ** 2)))
    else:
        e[0] = s2 * float(np.sum(alphas ** 2))
    if cfg.kind == "GaussianJam":
        e[1:] = cfg.p
    else:
        e[1:] = s2 / h[1:] ** 2
    return e


def config_to_json(cfg: SchemeConfig) -> str:
    return json.dumps(asdict(cfg), sort_keys=True)


def config_from_json(text: str) -> SchemeConfig:
    d = json.loads(text)
    d["alphas"] = tuple(d["alphas"])
    return SchemeConfig(**d)
