"""Classical energy functionals and their analytic gradients.

Gradient convention: for a functional E the returned covector is
(dE/dq, dE/dp, dE/d conj(alpha)) where the field component is the L^2
Wirtinger gradient, i.e. ``dE(u)[v] = dq.vq + dp.vp + 2 Re<v_alpha, g_alpha>``.
Hamilton's equations read q' = dE/dp, p' = -dE/dq, i alpha' = dE/d conj(alpha).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .formfactor import FormFactorSet, pair, translate
from .phasespace import PhasePoint

__all__ = [
    "EnergyReport",
    "energy_undressed",
    "energy_dressed",
    "energy_dressing",
    "energy_generalized",
    "gradient",
    "hamilton_field",
    "FUNCTIONALS",
]

SQ2 = np.sqrt(2.0)
FUNCTIONALS = ("undressed", "dressed", "dressing")


@dataclass(frozen=True)
class EnergyReport:
    value: float
    factorized_value: float
    kinetic: float
    field: float
    interaction: float

    def to_dict(self) -> dict:
        return asdict(self)


def _norm2(alpha, ff):
    return float(ff.grid.integrate(np.abs(alpha) ** 2))


def energy_undressed(u: PhasePoint, ff: FormFactorSet) -> EnergyReport:
    u.check(ff.grid)
    fq = translate(ff.f, u.q, ff.grid)
    kin = 0.5 * float(u.p @ u.p)
    fld = _norm2(u.alpha, ff)
    inter = SQ2 * pair(u.alpha, fq, ff.grid).real
    fact = kin + _norm2(u.alpha + fq / SQ2, ff) - 0.5 * ff.norm2_f
    return EnergyReport(kin + fld + inter, fact, kin, fld, inter)


def _dressed_pieces(u, ff):
    g = ff.grid
    fKq = translate(ff.fK, u.q, g)
    kBq = translate(ff.kB, u.q, g)
    R = np.asarray(pair(u.alpha, kBq, g)).real  # Re<alpha, k_j B_q>
    return fKq, kBq, R


def energy_dressed(u: PhasePoint, ff: FormFactorSet) -> EnergyReport:
    u.check(ff.grid)
    fKq, kBq, R = _dressed_pieces(u, ff)
    kin = 0.5 * float(u.p @ u.p)
    fld = _norm2(u.alpha, ff)
    inter = (
        SQ2 * pair(u.alpha, fKq, ff.grid).real
        - SQ2 * float(u.p @ R)
        + float(R @ R)
    )
    shifted = u.p - SQ2 * R
    fact = 0.5 * float(shifted @ shifted) + _norm2(u.alpha + fKq / SQ2, ff) - 0.5 * ff.norm2_fK
    return EnergyReport(kin + fld + inter, fact, kin, fld, inter)


def energy_dressing(u: PhasePoint, ff: FormFactorSet) -> float:
    u.check(ff.grid)
    Bq = translate(ff.B, u.q, ff.grid)
    return float(SQ2 * pair(u.alpha, 1j * Bq, ff.grid).real)


def energy_generalized(u: PhasePoint, ff: FormFactorSet, g: float, F) -> float:
    """g (|p|^2/2 + ||alpha||^2) + sqrt2 Re<alpha, F_q>: classical symbol of g H0 + phi(F_q)."""
    u.check(ff.grid)
    Fq = translate(F, u.q, ff.grid)
    return float(g * (0.5 * u.p @ u.p + _norm2(u.alpha, ff)) + SQ2 * pair(u.alpha, Fq, ff.grid).real)


def gradient(functional: str, u: PhasePoint, ff: FormFactorSet) -> PhasePoint:
    u.check(ff.grid)
    grid = ff.grid
    k = grid.nodes
    if functional == "undressed":
        fq = translate(ff.f, u.q, grid)
        dq = SQ2 * np.asarray(pair(u.alpha, -1j * k * fq[:, None], grid)).real
        return PhasePoint(dq, u.p.copy(), u.alpha + fq / SQ2)
    if functional == "dressed":
        fKq, kBq, R = _dressed_pieces(u, ff)
        shifted = u.p - SQ2 * R
        # M_jl = Re<alpha, -i k_j k_l B_q>
        M = np.asarray(pair(u.alpha, -1j * kBq[:, :, None] * k[:, None, :], grid)).real
        dq = SQ2 * np.asarray(pair(u.alpha, -1j * k * fKq[:, None], grid)).real - SQ2 * (M @ shifted)
        dalpha = u.alpha + fKq / SQ2 - (kBq @ shifted) / SQ2
        return PhasePoint(dq, shifted, dalpha)
    if functional == "dressing":
        Bq = translate(ff.B, u.q, grid)
        dq = SQ2 * np.asarray(pair(u.alpha, k * Bq[:, None], grid)).real
        return PhasePoint(dq, np.zeros_like(u.p), 1j * Bq / SQ2)
    raise ValueError(f"unknown functional {functional!r}; expected one of {FUNCTIONALS}")


def hamilton_field(functional: str, u: PhasePoint, ff: FormFactorSet) -> PhasePoint:
    """(q', p', alpha') read off the gradient."""
    gr = gradient(functional, u, ff)
    return PhasePoint(gr.p, -gr.q, -1j * gr.alpha)
