"""Discretized classical phase space R^{2d} (+) L^2(R^d, dk).

Momentum space is sampled on a cell-centered Cartesian grid restricted to the
ball |k| <= cutoff.  Nodes are stored so that the second half is the exact
mirror image (k -> -k) of the first half; :meth:`KGrid.integrate` sums mirror
pairs before accumulating, which makes odd moments of even profiles vanish
exactly rather than to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gamma, pi

import numpy as np

__all__ = [
    "DimensionError",
    "ParameterError",
    "KGrid",
    "PhasePoint",
    "WeightSpec",
    "make_grid",
    "ball_volume",
    "h_norm",
    "inner",
    "symplectic_form",
    "weighted_norm",
    "smooth_field",
]

DEFAULT_GRID_TOL = 0.02


class DimensionError(ValueError):
    """Field or vector shape does not match the grid."""


class ParameterError(ValueError):
    """Invalid model or grid parameter."""


def ball_volume(d: int, radius: float) -> float:
    return pi ** (d / 2) / gamma(d / 2 + 1) * radius**d


@dataclass(frozen=True, eq=False)
class KGrid:
    d: int
    cutoff: float
    K: float
    nodes: np.ndarray  # (n, d)
    weights: np.ndarray  # (n,)
    resolution: int = 0
    tol: float = DEFAULT_GRID_TOL
    symmetric: bool = True

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).reshape(-1, self.d)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(nodes) != len(weights):
            raise DimensionError("nodes and weights differ in length")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if self.symmetric:
            h = len(weights) // 2
            if 2 * h != len(weights) or not (
                np.array_equal(nodes[h:], -nodes[:h]) and np.array_equal(weights[h:], weights[:h])
            ):
                raise ParameterError("grid flagged symmetric but nodes are not mirror-ordered")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def knorm(self) -> np.ndarray:
        return np.linalg.norm(self.nodes, axis=1)

    def integrate(self, values) -> np.ndarray | complex | float:
        """Quadrature sum  sum_m w_m v_m  over the leading axis of ``values``.

        On mirror-symmetric grids the pair (k, -k) is combined first.
        """
        v = np.asarray(values)
        if v.shape[0] != self.n:
            raise DimensionError(f"expected {self.n} node values, got {v.shape[0]}")
        w = self.weights.reshape((-1,) + (1,) * (v.ndim - 1))
        wv = w * v
        if self.symmetric:
            h = self.n // 2
            return (wv[:h] + wv[h:]).sum(axis=0)
        return wv.sum(axis=0)

    def subset(self, indices) -> "KGrid":
        """Grid restricted to a few nodes (quantum mode sets).

        The result is flagged symmetric only if the selection is itself
        mirror-ordered.
        """
        idx = np.atleast_1d(np.asarray(indices, dtype=int))
        nodes, weights = self.nodes[idx], self.weights[idx]
        h = len(idx) // 2
        sym = (
            len(idx) % 2 == 0
            and np.array_equal(nodes[h:], -nodes[:h])
            and np.array_equal(weights[h:], weights[:h])
        )
        return KGrid(self.d, self.cutoff, self.K, nodes, weights, self.resolution, self.tol, sym)

    def index_of(self, k) -> int:
        k = np.atleast_1d(np.asarray(k, dtype=float))
        dist = np.linalg.norm(self.nodes - k, axis=1)
        return int(np.argmin(dist))

    def volume_error(self) -> float:
        vol = ball_volume(self.d, self.cutoff)
        return abs(self.weights.sum() - vol) / vol

    def to_dict(self) -> dict:
        return {"d": self.d, "cutoff": self.cutoff, "K": self.K,
                "resolution": self.resolution, "tol": self.tol}


def make_grid(d: int, cutoff: float, K: float, resolution: int, tol: float = DEFAULT_GRID_TOL) -> KGrid:
    """Midpoint grid on [-cutoff, cutoff]^d keeping cells whose center has |k| <= cutoff.

    ``resolution`` is the number of cells per axis and must be even, so that
    no cell center sits on a coordinate hyperplane (in particular not at 0).
    """
    if d not in (1, 2, 3):
        raise ParameterError(f"dimension must be 1, 2 or 3, got {d}")
    if not (0 < K < cutoff):
        raise ParameterError(f"need 0 < K < cutoff, got K={K}, cutoff={cutoff}")
    if resolution < 2 or resolution % 2:
        raise ParameterError(f"resolution must be an even integer >= 2, got {resolution}")
    h = 2.0 * cutoff / resolution
    # positive half-axis centers first; the first coordinate decides the half
    pos = (np.arange(resolution // 2) + 0.5) * h
    axis = np.concatenate([pos, -pos])
    if d == 1:
        half = pos[:, None]
    else:
        mesh = np.meshgrid(pos, *([axis] * (d - 1)), indexing="ij")
        half = np.stack([m.ravel() for m in mesh], axis=1)
    half = half[np.linalg.norm(half, axis=1) <= cutoff]
    nodes = np.concatenate([half, -half])
    weights = np.full(len(nodes), h**d)
    return KGrid(d, float(cutoff), float(K), nodes, weights, resolution, tol, True)


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """Classical state (q, p, alpha); alpha holds one complex value per grid node."""

    q: np.ndarray
    p: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", np.atleast_1d(np.asarray(self.q, dtype=float)))
        object.__setattr__(self, "p", np.atleast_1d(np.asarray(self.p, dtype=float)))
        object.__setattr__(self, "alpha", np.atleast_1d(np.asarray(self.alpha, dtype=complex)))
        if self.q.shape != self.p.shape:
            raise DimensionError("q and p must have the same shape")

    @classmethod
    def zeros(cls, grid: KGrid) -> "PhasePoint":
        return cls(np.zeros(grid.d), np.zeros(grid.d), np.zeros(grid.n, complex))

    def check(self, grid: KGrid) -> "PhasePoint":
        if self.q.shape != (grid.d,) or self.alpha.shape != (grid.n,):
            raise DimensionError(
                f"state shape (q{self.q.shape}, alpha{self.alpha.shape}) "
                f"does not match grid (d={grid.d}, n={grid.n})"
            )
        return self

    def isfinite(self) -> bool:
        return bool(np.isfinite(self.q).all() and np.isfinite(self.p).all() and np.isfinite(self.alpha).all())

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(self.q + other.q, self.p + other.p, self.alpha + other.alpha)

    def __sub__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(self.q - other.q, self.p - other.p, self.alpha - other.alpha)

    def __mul__(self, c: float) -> "PhasePoint":
        return PhasePoint(c * self.q, c * self.p, c * self.alpha)

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> "PhasePoint":
        return self * (1.0 / c)

    def __neg__(self) -> "PhasePoint":
        return self * -1.0

    def to_record(self) -> dict:
        """Flat record: q, p and the field as interleaved [re0, im0, re1, im1, ...]."""
        inter = np.empty(2 * len(self.alpha))
        inter[0::2] = self.alpha.real
        inter[1::2] = self.alpha.imag
        return {"q": self.q.tolist(), "p": self.p.tolist(), "alpha": inter.tolist()}

    @classmethod
    def from_record(cls, rec: dict) -> "PhasePoint":
        inter = np.asarray(rec["alpha"], dtype=float)
        if inter.size % 2:
            raise DimensionError("interleaved field record must have even length")
        return cls(rec["q"], rec["p"], inter[0::2] + 1j * inter[1::2])

    def to_row(self) -> list[float]:
        rec = self.to_record()
        return [*rec["q"], *rec["p"], *rec["alpha"]]

    @classmethod
    def from_row(cls, row, d: int) -> "PhasePoint":
        row = np.asarray(row, dtype=float)
        return cls.from_record({"q": row[:d], "p": row[d:2 * d], "alpha": row[2 * d:]})


@dataclass(frozen=True)
class WeightSpec:
    """Japanese-bracket weight <k>^s."""

    s: float = 0.0

    def __post_init__(self):
        if self.s < 0:
            raise ParameterError(f"regularity exponent must be >= 0, got {self.s}")


def _field_norm2(alpha: np.ndarray, grid: KGrid) -> float:
    return float(grid.integrate(np.abs(alpha) ** 2))


def h_norm(u: PhasePoint, grid: KGrid) -> float:
    u.check(grid)
    return float(np.sqrt(u.q @ u.q + u.p @ u.p + _field_norm2(u.alpha, grid)))


def inner(u1: PhasePoint, u2: PhasePoint, grid: KGrid) -> complex:
    """<u1, u2> on C^d (+) L^2, antilinear in the first slot, z = q + i p."""
    u1.check(grid)
    u2.check(grid)
    z1 = u1.q + 1j * u1.p
    z2 = u2.q + 1j * u2.p
    return complex(np.vdot(z1, z2) + grid.integrate(np.conj(u1.alpha) * u2.alpha))


def symplectic_form(u1: PhasePoint, u2: PhasePoint, grid: KGrid) -> float:
    """sigma(u1, u2) = Im<z1, z2> + 2 Im<alpha1, alpha2>."""
    u1.check(grid)
    u2.check(grid)
    zpart = u1.q @ u2.p - u1.p @ u2.q
    fpart = 2.0 * grid.integrate(np.conj(u1.alpha) * u2.alpha).imag
    return float(zpart + fpart)


def weighted_norm(alpha, grid: KGrid, w: WeightSpec | float = 0.0) -> float:
    """||<k>^s alpha|| with <k>^2 = 1 + |k|^2."""
    s = w.s if isinstance(w, WeightSpec) else WeightSpec(float(w)).s
    alpha = np.asarray(alpha)
    if alpha.shape != (grid.n,):
        raise DimensionError(f"field has shape {alpha.shape}, grid has {grid.n} nodes")
    bracket2 = 1.0 + grid.knorm**2
    return float(np.sqrt(grid.integrate(bracket2**s * np.abs(alpha) ** 2)))


def smooth_field(grid: KGrid, rng: np.random.Generator, amplitude: float = 0.5, degree: int = 3) -> np.ndarray:
    """Seeded smooth test field  amplitude * sum_j c_j (k.e)^j e^{-|k|^2/2} / j!,  c_j standard complex normal.

    ``e`` is a random unit direction; the field is smooth and decays well inside the cutoff.
    """
    e = rng.normal(size=grid.d)
    e /= np.linalg.norm(e)
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    x = grid.nodes @ e
    poly = sum(c[j] * x**j / gamma(j + 1) for j in range(degree + 1))
    return amplitude * poly * np.exp(-0.5 * grid.knorm**2)
