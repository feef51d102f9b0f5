"""Information measures for discrete-input scalar Gaussian channels.

Every receiver observation in this library is a finite equal-variance
Gaussian mixture: discrete symbols through a linear channel plus Gaussian
noise. Differential entropies of such mixtures have no closed form, so two
estimators are provided: Monte Carlo with a numerically stable windowed
log-density, and adaptive quadrature with breakpoints at the component
means. Mutual information with the message symbols follows as
h(Y) - h(Y | messages), where the conditional term is translation
invariant in the conditioning value and is therefore computed once.

All values are in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .channel import ChannelRealization, PowerBudget
from .constellation import pam_points
from .schemes import SchemeConfig
from .streams import child_seed, substream

__all__ = [
    "MC_COMPONENT_CAP",
    "QUAD_COMPONENT_CAP",
    "DEFAULT_MC_SAMPLES",
    "MixtureSpec",
    "MiEstimate",
    "RateBound",
    "gaussian_entropy",
    "mixture_logpdf",
    "mixture_entropy",
    "symbol_sum_pmf",
    "mi_discrete_input",
    "rate_lower_bound",
    "gaussian_wiretap_capacity",
]

MC_COMPONENT_CAP = 10 ** 6
QUAD_COMPONENT_CAP = 10 ** 4
DEFAULT_MC_SAMPLES = 200_000
LOG2E = math.log2(math.e)
# components beyond this many noise deviations from a sample contribute
# less than exp(-98) of the density and are dropped from the log-sum
WINDOW_SIGMAS = 14.0
FULL_EVAL_MAX_COMPONENTS = 2048
GAUSSIAN_ENTROPY_BITS = 0.5 * math.log2(2.0 * math.pi * math.e)


@dataclass(frozen=True)
class MixtureSpec:
    """Finite equal-variance Gaussian mixture: means, weights, common sigma."""

    means: np.ndarray
    weights: np.ndarray | None = None
    sigma: float = 1.0

    def __post_init__(self):
        means = np.asarray(self.means, dtype=float).ravel()
        if means.size == 0:
            raise ValueError("mixture needs at least one component")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.weights is None:
            weights = np.full(means.size, 1.0 / means.size)
        else:
            weights = np.asarray(self.weights, dtype=float).ravel()
            if weights.shape != means.shape:
                raise ValueError("weights and means must have equal length")
            if np.any(weights < 0):
                raise ValueError("weights must be nonnegative")
            total = float(np.sum(weights))
            if abs(total - 1.0) > 1e-9:
                raise ValueError("weights must sum to 1")
            weights = weights / total
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.means.size


@dataclass(frozen=True)
class MiEstimate:
    """Mutual information estimate in bits per channel use."""

    value: float
    stderr: float
    n_samples: int
    method: str

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError("stderr must be nonnegative")
        if self.value < -3.0 * self.stderr - 1e-9:
            raise ValueError("mutual information cannot be negative beyond noise")


def gaussian_entropy(sigma: float) -> float:
    """Differential entropy of N(mu, sigma^2) in bits (mu immaterial)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return GAUSSIAN_ENTROPY_BITS + math.log2(sigma)


def _sorted_mixture(spec: MixtureSpec):
    order = np.argsort(spec.means, kind="stable")
    means = spec.means[order]
    with np.errstate(divide="ignore"):
        logw = np.log(spec.weights[order])
    return means, logw


def _logpdf_gather(y, means, logw, sigma, lo, hi):
    """Row-wise log density using component windows [lo_i, hi_i)."""
    n = y.shape[0]
    out = np.empty(n)
    width = hi - lo
    w_max = int(np.max(width))
    norm = math.log(sigma) + 0.5 * math.log(2.0 * math.pi)
    chunk = max(1, int(4_000_000 // max(w_max, 1)))
    offsets = np.arange(w_max)
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        idx = lo[sl, None] + offsets[None, :]
        valid = idx < hi[sl, None]
        idx = np.minimum(idx, means.shape[0] - 1)
        z = logw[idx] - 0.5 * ((y[sl, None] - means[idx]) / sigma) ** 2
        z[~valid] = -np.inf
        zmax = np.max(z, axis=1)
        out[sl] = zmax + np.log(np.sum(np.exp(z - zmax[:, None]), axis=1)) - norm
    return out


def mixture_logpdf(y, spec: MixtureSpec) -> np.ndarray:
    """Natural-log density of the mixture at y, numerically stable.

    For large mixtures only the components within WINDOW_SIGMAS noise
    deviations of each query enter the log-sum; the discarded tail is below
    exp(-WINDOW_SIGMAS^2/2) relative and invisible at double precision.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    means, logw = _sorted_mixture(spec)
    m = means.shape[0]
    if m <= FULL_EVAL_MAX_COMPONENTS:
        lo = np.zeros(y.shape[0], dtype=np.int64)
        hi = np.full(y.shape[0], m, dtype=np.int64)
        return _logpdf_gather(y, means, logw, spec.sigma, lo, hi)
    half = WINDOW_SIGMAS * spec.sigma
    lo = np.searchsorted(means, y - half, side="left")
    hi = np.searchsorted(means, y + half, side="right")
    empty = hi <= lo
    if np.any(empty):
        # query far from every mean: fall back to the single nearest component
        pos = np.clip(np.searchsorted(means, y[empty]), 1, m - 1)
        left = pos - 1
        nearer = np.where(np.abs(y[empty] - means[left]) <= np.abs(means[pos] - y[empty]),
                          left, pos)
        lo[empty] = nearer
        hi[empty] = nearer + 1
    return _logpdf_gather(y, means, logw, spec.sigma, lo, hi)


def _entropy_mc(spec: MixtureSpec, n_samples: int, seed) -> tuple[float, float]:
    rng = seed if isinstance(seed, np.random.Generator) else substream(seed, "entropy")
    means, logw = _sorted_mixture(spec)
    cum = np.cumsum(np.exp(logw))
    cum[-1] = 1.0
    comp = np.searchsorted(cum, rng.random(n_samples), side="right")
    comp = np.minimum(comp, means.shape[0] - 1)
    y = means[comp] + spec.sigma * rng.normal(size=n_samples)
    bits = -mixture_logpdf(y, spec) * LOG2E
    value = float(np.mean(bits))
    stderr = float(np.std(bits, ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
    return value, stderr


def _entropy_quadrature(spec: MixtureSpec, tol: float) -> tuple[float, float]:
    means = np.sort(spec.means)
    sigma = spec.sigma
    lo = means[0] - 10.0 * sigma
    hi = means[-1] + 10.0 * sigma
    # breakpoints at the component means guide the adaptive rule; merge
    # near-duplicates so interval count stays bounded
    pts = np.concatenate([[lo], means, [hi]])
    keep = np.concatenate([[True], np.diff(pts) > 1e-6 * sigma])
    pts = pts[keep]
    if pts[-1] < hi:
        pts = np.append(pts, hi)

    def integrand(y):
        lp = mixture_logpdf(np.array([y]), spec)[0]
        return -math.exp(lp) * lp * LOG2E

    per_piece = max(tol / max(len(pts) - 1, 1), 1e-13)
    total = 0.0
    err = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        val, abserr = integrate.quad(integrand, a, b, epsabs=per_piece,
                                     epsrel=1e-10, limit=200)
        total += val
        err += abserr
    return total, err


def mixture_entropy(spec: MixtureSpec, method: str = "mc",
                    n_samples: int = DEFAULT_MC_SAMPLES, tol: float = 1e-8,
                    seed=0) -> MiEstimate:
    """Differential entropy of the mixture in bits.

    method "mc": -(1/n) sum log2 density at n draws from the mixture,
    stderr from the sample variance. method "quadrature": adaptive
    integration of -f log2 f between component means; stderr reports the
    accumulated absolute-error estimate.
    """
    m = len(spec)
    if method == "mc":
        if m > MC_COMPONENT_CAP:
            raise ValueError(f"{m} components exceed the Monte Carlo cap {MC_COMPONENT_CAP}")
        if n_samples < 2:
            raise ValueError("need at least 2 samples")
        value, stderr = _entropy_mc(spec, n_samples, seed)
        return MiEstimate(value=value, stderr=stderr, n_samples=n_samples, method="mc")
    if method == "quadrature":
        if m > QUAD_COMPONENT_CAP:
            raise ValueError(f"{m} components exceed the quadrature cap {QUAD_COMPONENT_CAP}")
        value, err = _entropy_quadrature(spec, tol)
        return MiEstimate(value=value, stderr=err, n_samples=0, method="quadrature")
    raise ValueError(f"unknown method {method!r}")


def symbol_sum_pmf(n_streams: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Distribution of a sum of n i.i.d. uniform integers from [-q, q].

    Returns (values, pmf), values = -n q .. n q. Lets the aligned jamming
    sum enter a mixture as one weighted stream instead of n uniform ones.
    """
    if n_streams < 1:
        raise ValueError("need at least one stream")
    if q < 0:
        raise ValueError("q must be >= 0")
    base = np.full(2 * q + 1, 1.0 / (2 * q + 1))
    pmf = base.copy()
    for _ in range(n_streams - 1):
        pmf = np.convolve(pmf, base)
    values = np.arange(-n_streams * q, n_streams * q + 1, dtype=float)
    return values, pmf


def _product_mixture(coeffs, symbol_sets, set_weights):
    means = np.zeros(1)
    logw = np.zeros(1)
    for c, vals, w in zip(coeffs, symbol_sets, set_weights):
        vals = np.asarray(vals, dtype=float)
        if w is None:
            lw = np.full(vals.size, -math.log(vals.size))
        else:
            w = np.asarray(w, dtype=float)
            with np.errstate(divide="ignore"):
                lw = np.log(w)
        means = (means[:, None] + c * vals[None, :]).ravel()
        logw = (logw[:, None] + lw[None, :]).ravel()
    return means, np.exp(logw)


def _component_count(symbol_sets) -> int:
    total = 1
    for vals in symbol_sets:
        total *= len(np.asarray(vals).ravel())
    return total


def _check_cap(total: int, method: str):
    cap = MC_COMPONENT_CAP if method == "mc" else QUAD_COMPONENT_CAP
    if total > cap:
        raise ValueError(
            f"mixture would have {total} components, above the {method} cap {cap}; "
            "reduce q (or the number of streams) until the product of set sizes fits"
        )


def _child(seed, *key):
    # integer seeds fan out into named substream seeds; live Generators pass through
    return child_seed(seed, *key) if isinstance(seed, (int, np.integer)) else seed


def _mi_with_parts(coeffs, symbol_sets, sigma, designated, method="mc",
                   n_samples=DEFAULT_MC_SAMPLES, tol=1e-8, seed=0, weights=None):
    """(MI estimate, h(Y) estimate, h(Y|designated) estimate)."""
    coeffs = np.asarray(coeffs, dtype=float)
    if len(symbol_sets) != coeffs.shape[0]:
        raise ValueError("one symbol set per coefficient required")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if weights is None:
        weights = [None] * len(symbol_sets)
    if len(weights) != len(symbol_sets):
        raise ValueError("one weight vector (or None) per symbol set required")
    designated = sorted(set(int(i) for i in designated))
    if not designated:
        raise ValueError("designated input subset must be nonempty")
    if designated[0] < 0 or designated[-1] >= coeffs.shape[0]:
        raise ValueError("designated indices out of range")
    _check_cap(_component_count(symbol_sets), method)

    if all(len(np.asarray(symbol_sets[i]).ravel()) == 1 for i in designated):
        zero = MiEstimate(0.0, 0.0, 0, method)
        return zero, None, None

    means, w = _product_mixture(coeffs, symbol_sets, weights)
    h_y = mixture_entropy(MixtureSpec(means, w, sigma), method=method,
                          n_samples=n_samples, tol=tol,
                          seed=_child(seed, "hy"))

    free = [i for i in range(coeffs.shape[0]) if i not in designated]
    if free:
        # translation invariance in the conditioning value: one evaluation
        # with the designated inputs pinned covers every conditioning value
        f_means, f_w = _product_mixture(coeffs[free],
                                        [symbol_sets[i] for i in free],
                                        [weights[i] for i in free])
        h_cond = mixture_entropy(MixtureSpec(f_means, f_w, sigma), method=method,
                                 n_samples=n_samples, tol=tol,
                                 seed=_child(seed, "hcond"))
    else:
        h_cond = MiEstimate(gaussian_entropy(sigma), 0.0, 0, method)

    value = h_y.value - h_cond.value
    stderr = math.hypot(h_y.stderr, h_cond.stderr)
    mi = MiEstimate(value=value, stderr=stderr,
                    n_samples=h_y.n_samples + h_cond.n_samples, method=method)
    return mi, h_y, h_cond


def mi_discrete_input(coeffs, symbol_sets, sigma, designated, method="mc",
                      n_samples=DEFAULT_MC_SAMPLES, tol=1e-8, seed=0,
                      weights=None) -> MiEstimate:
    """I(S; sum_i coeff_i S_i + N) for independent discrete inputs S_i.

    ``designated`` picks the subset S whose information is measured; the
    remaining inputs act as interference. ``weights`` optionally gives a
    pmf per symbol set (default uniform), which is how a pre-convolved sum
    stream enters as a single set.
    """
    mi, _, _ = _mi_with_parts(coeffs, symbol_sets, sigma, designated, method=method,
                              n_samples=n_samples, tol=tol, seed=seed, weights=weights)
    return mi


@dataclass(frozen=True)
class RateBound:
    """Secrecy-rate lower bound: I(V;Y1) - I(V;Y2), clamped at zero."""

    i_v_y1: MiEstimate
    i_v_y2: MiEstimate
    bound: float

    @property
    def stderr(self) -> float:
        return math.hypot(self.i_v_y1.stderr, self.i_v_y2.stderr)


def _observation_model(cfg: SchemeConfig, ch: ChannelRealization, receiver: str):
    """coeffs, symbol sets, weights, designated indices, sigma for one receiver."""
    gains = ch.h if receiver == "legit" else ch.g
    sigma = ch.sigma1 if receiver == "legit" else ch.sigma2
    alphas = np.asarray(cfg.alphas)
    msg_set = pam_points(cfg.a, cfg.q)
    m = cfg.m
    if cfg.kind == "GaussianJam":
        # helpers are Gaussian: fold their power into the noise, exactly
        sigma_eff = math.sqrt(sigma ** 2 + cfg.p * float(np.sum(gains[1:] ** 2)))
        coeffs = gains[0] * alphas
        sets = [msg_set] * m
        return coeffs, sets, [None] * m, list(range(m)), sigma_eff
    if cfg.kind == "Blind":
        n_jam = m + 1
        jam_ratios = gains / ch.h  # legit: all ones; eve: g_j/h_j
    else:
        n_jam = m
        jam_ratios = gains[1:] / ch.h[1:]
    msg_coeffs = gains[0] * alphas
    if receiver == "legit":
        # every jamming stream lands on the same coefficient, so the whole
        # sum enters as one weighted set
        vals, pmf = symbol_sum_pmf(n_jam, cfg.q)
        coeffs = np.concatenate([msg_coeffs, [1.0]])
        sets = [msg_set] * m + [cfg.a * vals]
        weights = [None] * m + [pmf]
    else:
        coeffs = np.concatenate([msg_coeffs, jam_ratios])
        sets = [msg_set] * (m + n_jam)
        weights = [None] * (m + n_jam)
    return coeffs, sets, weights, list(range(m)), sigma


def rate_lower_bound(cfg: SchemeConfig, ch: ChannelRealization,
                     budget: PowerBudget | None = None, method: str = "mc",
                     n_samples: int = DEFAULT_MC_SAMPLES, tol: float = 1e-8,
                     seed=0) -> RateBound:
    """Achievable-rate lower bound max(0, I(V;Y1) - I(V;Y2)) in bits.

    Every eavesdropper-side entropy is checked against the max-entropy cap
    implied by the power budget and the assumed gain bound c_bar.
    """
    if ch.m != cfg.m:
        raise ValueError("channel and scheme disagree on helper count")
    c1, s1, w1, d1, sig1 = _observation_model(cfg, ch, "legit")
    c2, s2, w2, d2, sig2 = _observation_model(cfg, ch, "eve")
    i1, _, _ = _mi_with_parts(c1, s1, sig1, d1, method=method, n_samples=n_samples,
                              tol=tol, seed=_child(seed, "y1"), weights=w1)
    i2, h_y2, _ = _mi_with_parts(c2, s2, sig2, d2, method=method, n_samples=n_samples,
                                 tol=tol, seed=_child(seed, "y2"), weights=w2)
    c_bar = budget.c_bar if budget is not None else cfg.c_bar
    p = budget.p if budget is not None else cfg.p
    if h_y2 is not None:
        cap_bits = 0.5 * math.log2(2.0 * math.pi * math.e * (ch.sigma2 ** 2 + c_bar * p))
        if h_y2.value > cap_bits + 3.0 * h_y2.stderr + 1e-6:
            raise RuntimeError(
                f"eavesdropper output entropy {h_y2.value:.6f} exceeds the "
                f"max-entropy cap {cap_bits:.6f}; power accounting is broken"
            )
    return RateBound(i_v_y1=i1, i_v_y2=i2, bound=max(0.0, i1.value - i2.value))


def gaussian_wiretap_capacity(h1: float, g1: float, p: float) -> float:
    """Helper-free secrecy capacity in bits, clamped at zero."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    val = 0.5 * math.log2(1.0 + h1 ** 2 * p) - 0.5 * math.log2(1.0 + g1 ** 2 * p)
    return max(0.0, val)
