"""PAM constellation algebra and scalar receiver lattices.

The legitimate receiver of the jamming schemes observes a one-dimensional
constellation: every noiseless observation is a sum of scaled PAM symbols.
Because the realized points live on the real line, sorting them once gives
the exact minimum distance from adjacent differences and O(log N) nearest
point decoding, with no need for sphere decoders at desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .streams import substream

__all__ = [
    "LatticeSizeError",
    "DegenerateLatticeError",
    "PamConstellation",
    "ReceiverLattice",
    "pam_points",
    "enumerate_sum_lattice",
    "build_receiver_lattice",
    "min_distance",
    "nearest_index",
    "nearest_point",
    "loglog_slope",
    "fit_dmin_exponent",
    "DminStudy",
]

DEFAULT_POINT_CAP = 10_000_000
COLLISION_REL_TOL = 1e-9  # times the symbol spacing a


class LatticeSizeError(ValueError):
    """Enumeration refused because it would exceed the point cap."""


class DegenerateLatticeError(ValueError):
    """Two distinct labels landed on (numerically) the same point."""


@dataclass(frozen=True)
class PamConstellation:
    """Uniform PAM with spacing ``a`` and half-width ``q``: a*{-q..q}."""

    a: float
    q: int

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("spacing a must be positive")
        if self.q < 0:
            raise ValueError("half-width q must be >= 0")

    @property
    def points(self) -> np.ndarray:
        return pam_points(self.a, self.q)

    def __len__(self) -> int:
        return 2 * self.q + 1


def pam_points(a: float, q: int) -> np.ndarray:
    """The 2q+1 points a*{-q, ..., q}, ascending."""
    if a <= 0:
        raise ValueError("spacing a must be positive")
    if q < 0:
        raise ValueError("half-width q must be >= 0")
    return a * np.arange(-q, q + 1, dtype=float)


@dataclass(frozen=True)
class ReceiverLattice:
    """Sorted scalar constellation with the integer labels that generated it.

    ``labels[i]`` is the integer tuple behind ``points[i]``.  ``collision``
    is set when two distinct labels map within tolerance of each other, in
    which case decoding is refused (degenerate gains).
    """

    points: np.ndarray
    labels: np.ndarray
    collision: bool = False
    a: float = 1.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        lab = np.asarray(self.labels)
        if lab.ndim == 1:
            lab = lab[:, None]
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", lab)
        if pts.ndim != 1 or lab.shape[0] != pts.shape[0]:
            raise ValueError("points and labels must have matching leading length")

    def __len__(self) -> int:
        return self.points.shape[0]

    @classmethod
    def from_points(cls, points, labels=None, a: float = 1.0, collision_tol: float = 0.0):
        """Wrap externally built points (sorted here) as a lattice."""
        pts = np.asarray(points, dtype=float)
        if labels is None:
            labels = np.arange(pts.shape[0], dtype=np.int64)[:, None]
        lab = np.asarray(labels)
        if lab.ndim == 1:
            lab = lab[:, None]
        order = np.argsort(pts, kind="stable")
        pts = pts[order]
        lab = lab[order]
        collision = bool(pts.shape[0] > 1 and np.min(np.diff(pts)) < collision_tol)
        return cls(points=pts, labels=lab, collision=collision, a=a)


def enumerate_sum_lattice(
    coeffs,
    radii,
    a: float = 1.0,
    cap: int = DEFAULT_POINT_CAP,
) -> ReceiverLattice:
    """All points ``a * sum_i coeffs[i] * t_i`` for integers t_i in [-r_i, r_i].

    Labels are the tuples (t_1, ..., t_L).  Size (prod 2r_i+1) above ``cap``
    is refused outright rather than subsampled.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    radii = [int(r) for r in radii]
    if coeffs.shape[0] != len(radii):
        raise ValueError("one radius per coefficient required")
    if a <= 0:
        raise ValueError("spacing a must be positive")
    sizes = [2 * r + 1 for r in radii]
    total = 1
    for s in sizes:
        total *= s
    if total > cap:
        raise LatticeSizeError(
            f"lattice enumeration would produce {total} points, above the cap of {cap}; "
            "reduce q or the number of streams"
        )
    axes = [np.arange(-r, r + 1, dtype=np.int32) for r in radii]
    mesh = np.meshgrid(*axes, indexing="ij")
    labels = np.stack([g.ravel() for g in mesh], axis=1)
    points = a * (labels.astype(float) @ coeffs)
    order = np.argsort(points, kind="stable")
    points = points[order]
    labels = labels[order]
    tol = COLLISION_REL_TOL * a
    collision = bool(points.shape[0] > 1 and np.min(np.diff(points)) < tol)
    return ReceiverLattice(points=points, labels=labels, collision=collision, a=a)


def build_receiver_lattice(
    h1: float,
    alphas,
    a: float,
    q: int,
    cap: int = DEFAULT_POINT_CAP,
    jam_radius: int | None = None,
) -> ReceiverLattice:
    """Effective constellation seen by the legitimate receiver.

    Enumerates ``h1 * sum_k alphas[k] * a * v_k + a * s`` with message symbols
    v_k in [-q, q] and the aligned jamming sum s in [-jam_radius, jam_radius]
    (default (M+1)q, the width of M+1 superposed symbol streams).  Labels are
    (v_2, ..., v_{M+1}, s).
    """
    alphas = np.asarray(alphas, dtype=float)
    m = alphas.shape[0]
    if m < 1:
        raise ValueError("at least one message stream required (m >= 1)")
    if q < 1:
        raise ValueError("q must be >= 1")
    if h1 == 0:
        raise ValueError("h1 must be nonzero")
    if jam_radius is None:
        jam_radius = (m + 1) * q
    coeffs = np.concatenate([h1 * alphas, [1.0]])
    radii = [q] * m + [jam_radius]
    return enumerate_sum_lattice(coeffs, radii, a=a, cap=cap)


def min_distance(lat: ReceiverLattice) -> float:
    """Exact minimum distance, from adjacent differences of the sorted points."""
    if lat.collision:
        raise DegenerateLatticeError("degenerate gains: distinct labels collide")
    if len(lat) < 2:
        raise ValueError("minimum distance needs at least 2 points")
    return float(np.min(np.diff(lat.points)))


def nearest_index(points: np.ndarray, y) -> np.ndarray:
    """Index of the closest point for each query, ties toward the smaller point."""
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    yq = np.atleast_1d(y)
    n = points.shape[0]
    right = np.searchsorted(points, yq)
    left = np.clip(right - 1, 0, n - 1)
    right = np.clip(right, 0, n - 1)
    d_left = np.abs(yq - points[left])
    d_right = np.abs(points[right] - yq)
    idx = np.where(d_left <= d_right, left, right)
    return idx[0] if scalar else idx


def nearest_point(y: float, lat: ReceiverLattice) -> tuple[int, ...]:
    """Label of the lattice point closest to ``y``."""
    if lat.collision:
        raise DegenerateLatticeError("degenerate gains: distinct labels collide")
    idx = nearest_index(lat.points, float(y))
    return tuple(int(t) for t in lat.labels[idx])


def loglog_slope(qs, values) -> float:
    """Least-squares slope of log(values) against log(qs)."""
    qs = np.asarray(qs, dtype=float)
    values = np.asarray(values, dtype=float)
    if qs.shape[0] != values.shape[0]:
        raise ValueError("qs and values must have equal length")
    if qs.shape[0] < 2:
        raise ValueError("cannot fit a slope from fewer than 2 points")
    return float(np.polyfit(np.log(qs), np.log(values), 1)[0])


@dataclass(frozen=True)
class DminRow:
    draw_id: int
    q: int
    dmin: float


@dataclass(frozen=True)
class DminStudy:
    """Per-draw minimum distances over a q grid plus fitted log-log slopes."""

    m: int
    q_grid: tuple[int, ...]
    rows: tuple[DminRow, ...]
    slopes: np.ndarray
    redraws: int = 0

    @property
    def median_slope(self) -> float:
        return float(np.median(self.slopes))

    @property
    def min_slope(self) -> float:
        return float(np.min(self.slopes))


def fit_dmin_exponent(
    m: int,
    q_grid,
    n_draws: int,
    seed: int,
    magnitude_range: tuple[float, float] = (0.5, 2.0),
    alpha_range: tuple[float, float] = (0.5, 1.5),
    cap: int = DEFAULT_POINT_CAP,
    max_redraws: int = 1000,
) -> DminStudy:
    """Empirical scaling exponent of the receiver minimum distance in Q.

    For each draw of generic gains (spacing fixed at a=1), the minimum
    distance is computed exactly on every q in the grid and a least-squares
    slope of log d_min against log q is fitted.  Draws whose lattice collides
    at any q are redrawn; the count of redraws is reported.
    """
    q_grid = tuple(int(q) for q in q_grid)
    if len(q_grid) < 3:
        raise ValueError("q grid must contain at least 3 strictly increasing values")
    if any(b <= a for a, b in zip(q_grid, q_grid[1:])):
        raise ValueError("q grid must be strictly increasing")
    if m < 1 or n_draws < 1:
        raise ValueError("m and n_draws must be >= 1")

    rows: list[DminRow] = []
    slopes = np.empty(n_draws)
    redraws = 0
    for draw_id in range(n_draws):
        for attempt in range(max_redraws):
            rng = substream(seed, "dmin", draw_id, attempt)
            h1 = rng.uniform(*magnitude_range) * (rng.integers(0, 2) * 2 - 1)
            alphas = rng.uniform(*alpha_range, size=m) * (rng.integers(0, 2, size=m) * 2 - 1)
            dmins = []
            collided = False
            for q in q_grid:
                lat = build_receiver_lattice(h1, alphas, a=1.0, q=q, cap=cap)
                if lat.collision:
                    collided = True
                    break
                dmins.append(min_distance(lat))
            if collided:
                redraws += 1
                continue
            slopes[draw_id] = loglog_slope(q_grid, dmins)
            rows.extend(DminRow(draw_id, q, d) for q, d in zip(q_grid, dmins))
            break
        else:
            raise RuntimeError(f"draw {draw_id} kept colliding after {max_redraws} attempts")
    return DminStudy(m=m, q_grid=q_grid, rows=tuple(rows), slopes=slopes, redraws=redraws)
