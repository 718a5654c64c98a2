"""Closed-form classical dressing flow D(theta).

D(theta) solves  q' = 0,  p' = -sqrt2 Re<alpha, k B_q>,  i alpha' = (i/sqrt2) B_q:

    q -> q
    p -> p - sqrt2 theta Re<alpha, k B_q> - (theta^2 / 2) sum_m w_m k_m |B_m|^2
    alpha -> alpha + (theta / sqrt2) B_q

The last momentum term is a constant drift that vanishes identically on
mirror-symmetric grids; it is kept so that D(theta) stays the exact flow on
asymmetric mode subsets used by the quantum comparisons.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formfactor import FormFactorSet, pair, translate
from .phasespace import PhasePoint, symplectic_form

__all__ = ["DressingMap", "apply", "differential", "check_symplectic"]

SQ2 = np.sqrt(2.0)


@dataclass(frozen=True)
class DressingMap:
    theta: float
    ff: FormFactorSet

    def __call__(self, u: PhasePoint) -> PhasePoint:
        return apply(self, u)

    def inverse(self) -> "DressingMap":
        return DressingMap(-self.theta, self.ff)


def apply(D: DressingMap, u: PhasePoint) -> PhasePoint:
    ff, th = D.ff, D.theta
    u.check(ff.grid)
    if th == 0:
        return PhasePoint(u.q.copy(), u.p.copy(), u.alpha.copy())
    Bq = translate(ff.B, u.q, ff.grid)
    R = np.asarray(pair(u.alpha, ff.grid.nodes * Bq[:, None], ff.grid)).real
    p = u.p - SQ2 * th * R - 0.5 * th * th * ff.B_drift
    return PhasePoint(u.q.copy(), p, u.alpha + (th / SQ2) * Bq)


def differential(D: DressingMap, u0: PhasePoint, u1: PhasePoint) -> PhasePoint:
    """dD(theta) at u0 applied to the tangent vector u1."""
    ff, th = D.ff, D.theta
    g = ff.grid
    u0.check(g)
    u1.check(g)
    k = g.nodes
    Bq0 = translate(ff.B, u0.q, g)
    kBq0 = k * Bq0[:, None]
    kq1 = k @ u1.q
    p = (
        u1.p
        - SQ2 * th * np.asarray(pair(u1.alpha, kBq0, g)).real
        - SQ2 * th * np.asarray(pair(u0.alpha, (-1j * kq1)[:, None] * kBq0, g)).real
    )
    alpha = u1.alpha - (th / SQ2) * 1j * kq1 * Bq0
    return PhasePoint(u1.q.copy(), p, alpha)


def check_symplectic(D: DressingMap, u0: PhasePoint, u1: PhasePoint, u2: PhasePoint) -> float:
    """|sigma(dD u1, dD u2) - sigma(u1, u2)|."""
    g = D.ff.grid
    lhs = symplectic_form(differential(D, u0, u1), differential(D, u0, u2), g)
    return abs(lhs - symplectic_form(u1, u2, g))
