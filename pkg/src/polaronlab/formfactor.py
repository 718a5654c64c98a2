"""Form factors of the polaron coupling and their scalar integrals.

All profiles are tabulated on the nodes of a :class:`~polaronlab.phasespace.KGrid`:

* ``f``  : 1_{|k|<=cutoff} |k|^{-(d-1)/2}
* ``fK`` : infrared part 1_{|k|<K} |k|^{-(d-1)/2}
* ``B``  : -1_{|k|>=K} f(k) / (1 + hbar |k|^2 / 2)
* ``kB`` : the d profiles k_j B(k), shape (n, d)

Position dependence enters through :func:`translate`, F_q(k) = e^{-ik.q} F(k).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np
from scipy import integrate

from .phasespace import DimensionError, KGrid, ParameterError

__all__ = [
    "ModelParams",
    "FormFactorSet",
    "form_factors",
    "translate",
    "pair",
    "closed_form_scalars",
    "sphere_area",
    "export_profiles_csv",
]


@dataclass(frozen=True)
class ModelParams:
    d: int
    cutoff: float
    K: float
    hbar: float = 0.0
    g: float = 1.0

    def __post_init__(self):
        if not (0 < self.K < self.cutoff):
            raise ParameterError(f"need 0 < K < cutoff, got K={self.K}, cutoff={self.cutoff}")
        if self.hbar < 0:
            raise ParameterError("hbar must be >= 0")
        if self.g < 0:
            raise ParameterError("g must be >= 0")


def sphere_area(d: int) -> float:
    """Surface measure of the unit sphere S^{d-1}."""
    return {1: 2.0, 2: 2.0 * pi, 3: 4.0 * pi}[d]


def coupling_profile(kn: np.ndarray, d: int, cutoff: float) -> np.ndarray:
    out = np.zeros_like(kn)
    inside = kn <= cutoff
    out[inside] = kn[inside] ** (-(d - 1) / 2)
    return out


@dataclass(frozen=True, eq=False)
class FormFactorSet:
    grid: KGrid
    hbar: float
    f: np.ndarray
    fK: np.ndarray
    B: np.ndarray
    kB: np.ndarray
    generic: np.ndarray | None = None

    @property
    def kf(self) -> np.ndarray:
        return self.grid.nodes * self.f[:, None]

    def norm2(self, profile) -> float:
        """Grid L^2 norm squared of a scalar or (n, d) vector profile."""
        v = np.abs(np.asarray(profile)) ** 2
        if v.ndim == 2:
            v = v.sum(axis=1)
        return float(self.grid.integrate(v))

    @property
    def norm2_f(self) -> float:
        return self.norm2(self.f)

    @property
    def norm2_fK(self) -> float:
        return self.norm2(self.fK)

    @property
    def norm2_B(self) -> float:
        return self.norm2(self.B)

    @property
    def dressing_constant(self) -> float:
        """Vacuum shift ||B||^2/2 + <B, f> on this grid (see :func:`closed_form_scalars`)."""
        return 0.5 * self.norm2_B + float(self.grid.integrate(self.B * self.f))

    @property
    def B_drift(self) -> np.ndarray:
        """sum_m w_m k_m |B_m|^2; identically zero on mirror-symmetric grids."""
        return np.asarray(self.grid.integrate(self.grid.nodes * (self.B**2)[:, None]))


def form_factors(grid: KGrid, hbar: float = 0.0, generic=None) -> FormFactorSet:
    if hbar < 0:
        raise ParameterError("hbar must be >= 0")
    kn = grid.knorm
    f = coupling_profile(kn, grid.d, grid.cutoff)
    fK = np.where(kn < grid.K, f, 0.0)
    # at hbar = 0 this is exactly -f on the ultraviolet shell, so f + B == fK nodewise
    B = np.where(kn >= grid.K, -f / (1.0 + hbar * kn**2 / 2.0), 0.0)
    kB = grid.nodes * B[:, None]
    if generic is not None:
        generic = np.asarray(generic, dtype=complex)
        if generic.shape != (grid.n,):
            raise DimensionError("generic profile must have one value per node")
    for a in (f, fK, B, kB):
        a.setflags(write=False)
    return FormFactorSet(grid, float(hbar), f, fK, B, kB, generic)


def translate(F, q, grid: KGrid) -> np.ndarray:
    """k -> e^{-ik.q} F(k); a vector-valued F of shape (n, d) is translated row-wise."""
    F = np.asarray(F)
    phase = np.exp(-1j * (grid.nodes @ np.atleast_1d(np.asarray(q, dtype=float))))
    if F.ndim == 2:
        return phase[:, None] * F
    return phase * F


def pair(alpha, G, grid: KGrid):
    """<alpha, G> = sum_m w_m conj(alpha_m) G_m, taken along the leading axis of G."""
    alpha = np.asarray(alpha)
    G = np.asarray(G)
    if alpha.shape != (grid.n,) or G.shape[0] != grid.n:
        raise DimensionError("pairing arguments must be tabulated on the same grid")
    a = np.conj(alpha).reshape((-1,) + (1,) * (G.ndim - 1))
    return grid.integrate(a * G)


def closed_form_scalars(params: ModelParams) -> dict:
    """Continuum values of ||f||^2, ||f^K||^2, ||B||^2, <B, f>, ||kB||^2 and C.

    The radial integrals are done by adaptive quadrature; |k|^{-(d-1)} cancels
    the radial Jacobian, leaving 1D integrals in r.

    ``C`` is the scalar removed by the dressing transform,
    ``C = ||B||^2 / 2 + <B, f>``.  At hbar = 0 it equals ``-||B||^2 / 2``.
    """
    S = sphere_area(params.d)
    lam, K, hb = params.cutoff, params.K, params.hbar

    def den(r):
        return 1.0 + hb * r * r / 2.0

    norm2_B = S * integrate.quad(lambda r: 1.0 / den(r) ** 2, K, lam, epsabs=1e-14, epsrel=1e-13)[0]
    pair_Bf = -S * integrate.quad(lambda r: 1.0 / den(r), K, lam, epsabs=1e-14, epsrel=1e-13)[0]
    norm2_kB = S * integrate.quad(lambda r: r * r / den(r) ** 2, K, lam, epsabs=1e-14, epsrel=1e-13)[0]
    return {
        "norm2_f": S * lam,
        "norm2_fK": S * K,
        "norm2_B": norm2_B,
        "pair_Bf": pair_Bf,
        "norm2_kB": norm2_kB,
        "C": 0.5 * norm2_B + pair_Bf,
    }


def export_profiles_csv(ff: FormFactorSet, path) -> None:
    """Write node coordinates and the tabulated profiles as CSV."""
    d = ff.grid.d
    header = [f"k{j + 1}" for j in range(d)] + ["weight", "f", "fK", "B"]
    rows = np.column_stack([ff.grid.nodes, ff.grid.weights, ff.f, ff.fK, ff.B])
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(f"{x:.17g}" for x in r) + "\n")
