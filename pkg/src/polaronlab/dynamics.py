"""Classical flows: free, undressed, dressed, dressing and the generalized (g, F) system.

Lab-frame field of the generalized system (undressed is g = 1, F = f):

    q' = g p,   p' = sqrt2 Re<alpha, i k F_q>,   alpha' = -i g alpha - i F_q / sqrt2

split as L u = (g p, 0, -i g alpha) plus N u = (0, sqrt2 Re<alpha, ikF_q>, -i F_q / sqrt2).
The interaction-frame field is X(t, v) = Phi0_{-t} N Phi0_t v.

Dressed and dressing fields are read off :func:`polaronlab.energy.hamilton_field`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .dressing import DressingMap, apply as apply_dressing
from .energy import (
    EnergyReport,
    energy_dressed,
    energy_dressing,
    energy_generalized,
    energy_undressed,
    hamilton_field,
)
from .formfactor import FormFactorSet, pair, translate
from .phasespace import KGrid, ParameterError, PhasePoint, h_norm, inner

__all__ = [
    "SYSTEMS",
    "INTEGRATORS",
    "FlowConfig",
    "Trajectory",
    "IntegrationError",
    "PicardRefusal",
    "PicardResult",
    "free_flow",
    "linear_part",
    "nonlinear_part",
    "nonlinear_subflow",
    "vector_field",
    "interaction_field",
    "integrate",
    "dressed_flow_conjugated",
    "conjugation_residuals",
    "lipschitz_constant",
    "local_existence_time",
    "picard_solve",
    "symbol_m",
    "characteristic_residual",
    "duhamel_field",
    "system_energy",
]

log = logging.getLogger(__name__)

SQ2 = np.sqrt(2.0)
SYSTEMS = ("undressed", "dressed", "dressing", "free", "generalized")
INTEGRATORS = ("strang", "rk4", "picard")
FRAMES = ("lab", "interaction")


class IntegrationError(RuntimeError):
    """Non-finite state encountered; ``trajectory`` holds the samples up to the last valid one."""

    def __init__(self, msg, trajectory):
        super().__init__(msg)
        self.trajectory = trajectory


class PicardRefusal(ValueError):
    """Picard requested on a horizon beyond the guaranteed contraction time."""


@dataclass(frozen=True)
class FlowConfig:
    system: str = "undressed"
    integrator: str = "strang"
    dt: float = 1e-3
    horizon: float = 1.0
    frame: str = "lab"
    g: float = 1.0
    F: np.ndarray | None = None  # generalized system only; defaults to ff.generic
    stride: int = 1

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ParameterError(f"unknown system {self.system!r}; expected one of {SYSTEMS}")
        if self.integrator not in INTEGRATORS:
            raise ParameterError(f"unknown integrator {self.integrator!r}; expected one of {INTEGRATORS}")
        if self.frame not in FRAMES:
            raise ParameterError(f"unknown frame {self.frame!r}; expected one of {FRAMES}")
        if not self.dt > 0:
            raise ParameterError("dt must be positive")
        if self.stride < 1:
            raise ParameterError("stride must be >= 1")
        if self.g < 0:
            raise ParameterError("g must be >= 0")
        if self.integrator == "strang" and self.system in ("dressed", "dressing"):
            raise ParameterError(
                f"no exact splitting for the {self.system} system; use rk4 "
                "(or dressed_flow_conjugated for the dressed flow)"
            )
        if self.frame == "interaction" and self.system in ("dressed", "dressing"):
            raise ParameterError("the interaction frame is defined for the free-plus-coupling systems only")


@dataclass
class Trajectory:
    times: np.ndarray
    states: list[PhasePoint]
    energies: list[EnergyReport]
    frame: str = "lab"
    meta: dict = field(default_factory=dict)

    @property
    def energy_values(self) -> np.ndarray:
        return np.array([e.value for e in self.energies])

    def relative_drift(self) -> float:
        """Secular change |E(T) - E(0)| / |E(0)| over the run."""
        E = self.energy_values
        return float(abs(E[-1] - E[0]) / max(abs(E[0]), 1e-300))

    def max_relative_deviation(self) -> float:
        """max_t |E(t) - E(0)| / |E(0)|, including the bounded splitting oscillation."""
        E = self.energy_values
        return float(np.max(np.abs(E - E[0])) / max(abs(E[0]), 1e-300))

    @property
    def final(self) -> PhasePoint:
        return self.states[-1]


# ---------------------------------------------------------------- field pieces


def _coupling(system: str, ff: FormFactorSet, g: float = 1.0, F=None):
    """(g, F) of the free-plus-coupling systems."""
    if system == "undressed":
        return 1.0, ff.f
    if system == "free":
        return g, np.zeros(ff.grid.n)
    if system == "generalized":
        prof = F if F is not None else ff.generic
        if prof is None:
            raise ParameterError("generalized system needs a profile F")
        return g, np.asarray(prof, dtype=complex)
    raise ParameterError(f"system {system!r} has no (g, F) decomposition")


def free_flow(t: float, u: PhasePoint, g: float = 1.0) -> PhasePoint:
    return PhasePoint(u.q + t * g * u.p, u.p.copy(), np.exp(-1j * t * g) * u.alpha)


def linear_part(u: PhasePoint, g: float = 1.0) -> PhasePoint:
    return PhasePoint(g * u.p, np.zeros_like(u.p), -1j * g * u.alpha)


def nonlinear_part(u: PhasePoint, F, grid: KGrid) -> PhasePoint:
    Fq = translate(F, u.q, grid)
    dp = SQ2 * np.asarray(pair(u.alpha, 1j * grid.nodes * Fq[:, None], grid)).real
    return PhasePoint(np.zeros_like(u.q), dp, -1j * Fq / SQ2)


def nonlinear_subflow(t: float, u: PhasePoint, F, grid: KGrid) -> PhasePoint:
    """Exact time-t flow of the coupling part alone (q is frozen)."""
    Fq = translate(F, u.q, grid)
    kFq = grid.nodes * Fq[:, None]
    moment = np.asarray(grid.integrate(grid.nodes * (np.abs(Fq) ** 2)[:, None])).real
    p = u.p + t * SQ2 * np.asarray(pair(u.alpha, 1j * kFq, grid)).real - 0.5 * t * t * moment
    return PhasePoint(u.q.copy(), p, u.alpha - 1j * t * Fq / SQ2)


def interaction_field(t: float, v: PhasePoint, F, grid: KGrid, g: float = 1.0) -> PhasePoint:
    """X(t, v) = Phi0_{-t} N Phi0_t v."""
    w = free_flow(t, v, g)
    Nw = nonlinear_part(w, F, grid)
    return PhasePoint(-t * g * Nw.p, Nw.p, np.exp(1j * t * g) * Nw.alpha)


def vector_field(system: str, t: float, u: PhasePoint, ff: FormFactorSet, *, frame: str = "lab",
                 g: float = 1.0, F=None) -> PhasePoint:
    if system not in SYSTEMS:
        raise ParameterError(f"unknown system {system!r}; expected one of {SYSTEMS}")
    u.check(ff.grid)
    if system in ("dressed", "dressing"):
        if frame != "lab":
            raise ParameterError("the interaction frame is defined for the free-plus-coupling systems only")
        return hamilton_field(system, u, ff)
    gg, FF = _coupling(system, ff, g, F)
    if frame == "interaction":
        return interaction_field(t, u, FF, ff.grid, gg)
    return linear_part(u, gg) + nonlinear_part(u, FF, ff.grid)


def system_energy(system: str, u: PhasePoint, ff: FormFactorSet, g: float = 1.0, F=None) -> EnergyReport:
    """Conserved functional of ``system`` at the lab-frame state ``u``."""
    if system == "undressed":
        return energy_undressed(u, ff)
    if system == "dressed":
        return energy_dressed(u, ff)
    if system == "dressing":
        v = energy_dressing(u, ff)
        return EnergyReport(v, v, 0.0, 0.0, v)
    gg, FF = _coupling(system, ff, g, F)
    kin = gg * 0.5 * float(u.p @ u.p)
    fld = gg * float(ff.grid.integrate(np.abs(u.alpha) ** 2))
    v = energy_generalized(u, ff, gg, FF)
    return EnergyReport(v, v, kin, fld, v - kin - fld)


# ----------------------------------------------------------------- integrators


def _rk4_step(fun, t, u, h):
    k1 = fun(t, u)
    k2 = fun(t + h / 2, u + (h / 2) * k1)
    k3 = fun(t + h / 2, u + (h / 2) * k2)
    k4 = fun(t + h, u + h * k3)
    return u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _strang_step(u, h, g, F, grid):
    u = free_flow(h / 2, u, g)
    u = nonlinear_subflow(h, u, F, grid)
    return free_flow(h / 2, u, g)


def _steps(horizon, dt):
    n = max(1, int(np.ceil(abs(horizon) / dt - 1e-9)))
    return n, horizon / n


def integrate(cfg: FlowConfig, u0: PhasePoint, ff: FormFactorSet) -> Trajectory:
    """Integrate from t = 0 to ``cfg.horizon`` (negative horizons run backwards).

    States are stored in ``cfg.frame``; energies are always evaluated on the
    lab-frame state.
    """
    grid = ff.grid
    u0.check(grid)
    if cfg.integrator == "picard":
        return picard_solve(cfg, u0, ff).trajectory

    n, h = _steps(cfg.horizon, cfg.dt)
    coupled = cfg.system not in ("dressed", "dressing")
    g, F = _coupling(cfg.system, ff, cfg.g, cfg.F) if coupled else (1.0, None)

    def to_lab(t, v):
        return free_flow(t, v, g) if cfg.frame == "interaction" else v

    def energy(t, v):
        return system_energy(cfg.system, to_lab(t, v), ff, cfg.g, cfg.F)

    if cfg.integrator == "strang":
        # split in the lab frame; interaction-frame samples are pulled back exactly
        def step(t, v):
            lab = _strang_step(to_lab(t, v), h, g, F, grid)
            return free_flow(-(t + h), lab, g) if cfg.frame == "interaction" else lab
    else:
        def rhs(t, v):
            return vector_field(cfg.system, t, v, ff, frame=cfg.frame, g=cfg.g, F=cfg.F)

        def step(t, v):
            return _rk4_step(rhs, t, v, h)

    times, states, energies = [0.0], [u0], [energy(0.0, u0)]
    u = u0
    for i in range(1, n + 1):
        t_prev = (i - 1) * h
        u = step(t_prev, u)
        if not u.isfinite():
            traj = Trajectory(np.array(times), states, energies, cfg.frame, {"aborted_at": t_prev + h})
            raise IntegrationError(f"non-finite state at t={t_prev + h:.6g}", traj)
        if i % cfg.stride == 0 or i == n:
            t = i * h
            times.append(t)
            states.append(u)
            energies.append(energy(t, u))
    return Trajectory(np.array(times), states, energies, cfg.frame,
                      {"steps": n, "dt": abs(h), "integrator": cfg.integrator, "system": cfg.system})


def dressed_flow_conjugated(t: float, u0: PhasePoint, ff: FormFactorSet, dt: float = 1e-3,
                            order: str = "dress-first") -> PhasePoint:
    """Dressed flow via conjugation of the undressed Strang flow.

    ``order="dress-first"`` is D(-1) Phi(t) D(1), the order consistent with
    Ehat = E o D(1) up to a constant; ``order="undress-first"`` is D(1) Phi(t) D(-1).
    """
    inner_theta = {"dress-first": 1.0, "undress-first": -1.0}[order]
    v = apply_dressing(DressingMap(inner_theta, ff), u0)
    if t != 0:
        v = integrate(FlowConfig("undressed", "strang", dt, t), v, ff).final
    return apply_dressing(DressingMap(-inner_theta, ff), v)


def conjugation_residuals(t: float, u0: PhasePoint, ff: FormFactorSet, dt: float = 1e-3) -> dict:
    """Endpoint distances of both conjugation orders to direct RK4 integration of the dressed field."""
    direct = integrate(FlowConfig("dressed", "rk4", dt, t), u0, ff).final
    out = {}
    for order in ("dress-first", "undress-first"):
        conj = dressed_flow_conjugated(t, u0, ff, dt, order)
        out[order] = h_norm(conj - direct, ff.grid)
    return out


# ----------------------------------------------------------- Picard reference


def lipschitz_constant(ff: FormFactorSet, g: float = 1.0, F=None) -> float:
    """Constant C with ||X(t,v1) - X(t,v2)|| <= C (1 + ||alpha1|| + ||alpha2||) ||v1 - v2|| for |t| <= 1.

    From the coupling field N:
      alpha-row  ||F_q1 - F_q2|| / sqrt2 <= ||kF|| |q1 - q2| / sqrt2
      p-row      sqrt2 (||kF|| ||alpha1 - alpha2|| + ||alpha|| || |k|^2 F || |q1 - q2|)
    and the free flow and its inverse each stretch by at most (1 + g) on |t| <= 1.
    """
    prof = ff.f if F is None else np.asarray(F)
    kn = ff.grid.knorm
    nkF = np.sqrt(ff.norm2(kn * prof))
    nk2F = np.sqrt(ff.norm2(kn**2 * prof))
    C_N = SQ2 * nkF + nkF / SQ2 + SQ2 * nk2F
    return float(C_N * (1.0 + g) ** 2)


def local_existence_time(R: float, C: float) -> float:
    """T(R) = 1 / (2 C (1 + 4 R))."""
    if R < 0:
        raise ParameterError("R must be >= 0")
    return 1.0 / (2.0 * C * (1.0 + 4.0 * R))


@dataclass
class PicardResult:
    trajectory: Trajectory  # interaction-frame samples on [-T, T]
    iterations: int
    increments: np.ndarray  # sup-distance between consecutive iterates
    ratios: np.ndarray  # increment[n+1] / increment[n], above the round-off floor
    C: float
    T_R: float
    converged: bool

    @property
    def max_ratio(self) -> float:
        return float(self.ratios.max()) if len(self.ratios) else 0.0

    def endpoint_lab(self, g: float = 1.0) -> PhasePoint:
        t = float(self.trajectory.times[-1])
        return free_flow(t, self.trajectory.states[-1], g)


def _pack(u: PhasePoint) -> np.ndarray:
    return np.concatenate([u.q, u.p, u.alpha.real, u.alpha.imag])


def _unpack(x: np.ndarray, d: int) -> PhasePoint:
    n = (len(x) - 2 * d) // 2
    return PhasePoint(x[:d], x[d:2 * d], x[2 * d:2 * d + n] + 1j * x[2 * d + n:])


def picard_solve(cfg: FlowConfig, u0: PhasePoint, ff: FormFactorSet, *, tol: float = 1e-12,
                 max_iter: int = 60, R: float | None = None) -> PicardResult:
    """Fixed point of v(t) = v0 + int_0^t X(s, v(s)) ds on a uniform mesh of [-T, T].

    T = |cfg.horizon|; the integral is the cumulative trapezoid rule from the
    mesh centre outwards.  Refuses T > T(R) with R = ||u0|| unless given.
    """
    if cfg.system in ("dressed", "dressing"):
        raise ParameterError("Picard is implemented for the free-plus-coupling systems")
    grid = ff.grid
    g, F = _coupling(cfg.system, ff, cfg.g, cfg.F)
    C = lipschitz_constant(ff, g, F)
    R = h_norm(u0, grid) if R is None else R
    T_R = local_existence_time(R, C)
    T = abs(cfg.horizon)
    if T > T_R * (1 + 1e-12):
        raise PicardRefusal(
            f"horizon {T:.6g} exceeds the contraction time T(R)={T_R:.6g} "
            f"(R={R:.6g}, C={C:.6g}); shorten the horizon or use strang/rk4"
        )
    n, h = _steps(T, cfg.dt)
    times = np.linspace(-T, T, 2 * n + 1)
    d = grid.d
    x0 = _pack(u0)
    # the metric on packed vectors must weight field entries by the cell measure
    wvec = np.concatenate([np.ones(2 * d), grid.weights, grid.weights])
    V = np.tile(x0, (len(times), 1))

    def apply_K(V):
        Xs = np.array([_pack(interaction_field(t, _unpack(v, d), F, grid, g)) for t, v in zip(times, V)])
        out = np.empty_like(V)
        out[n] = x0
        fwd = np.cumsum(0.5 * h * (Xs[n + 1:] + Xs[n:-1]), axis=0)
        bwd = np.cumsum(0.5 * h * (Xs[n - 1::-1] + Xs[n:0:-1]), axis=0)
        out[n + 1:] = x0 + fwd
        out[n - 1::-1] = x0 - bwd
        return out

    incs = []
    converged = False
    for _ in range(max_iter):
        Vn = apply_K(V)
        inc = float(np.sqrt(((Vn - V) ** 2 * wvec).sum(axis=1)).max())
        incs.append(inc)
        V = Vn
        if inc <= tol:
            converged = True
            break
    incs = np.array(incs)
    floor = 1e3 * np.finfo(float).eps * max(1.0, float(np.sqrt((x0**2 * wvec).sum())))
    ratios = np.array([incs[i + 1] / incs[i] for i in range(len(incs) - 1) if incs[i + 1] > floor])
    states = [_unpack(v, d) for v in V]
    energies = [system_energy(cfg.system, free_flow(t, s, g), ff, cfg.g, cfg.F) for t, s in zip(times, states)]
    traj = Trajectory(times, states, energies, "interaction", {"integrator": "picard", "C": C, "T_R": T_R})
    log.info("picard: C=%.6g T(R)=%.6g iterations=%d", C, T_R, len(incs))
    return PicardResult(traj, len(incs), incs, ratios, C, T_R, converged)


# ------------------------------------------------- symbol and characteristic


def symbol_m(s: float, xi: PhasePoint, u: PhasePoint, F, grid: KGrid, g: float = 1.0) -> float:
    """m(s, xi, u) = sqrt2 Re<alpha, e^{isg} F_{q+sgp} i k.(q0 + s g p0)> - Im<alpha0, e^{isg} F_{q+sgp}>."""
    xi.check(grid)
    u.check(grid)
    Fs = np.exp(1j * s * g) * translate(F, u.q + s * g * u.p, grid)
    kx = grid.nodes @ (xi.q + s * g * xi.p)
    first = SQ2 * complex(pair(u.alpha, Fs * 1j * kx, grid)).real
    return float(first - complex(pair(xi.alpha, Fs, grid)).imag)


def test_vector(xi: PhasePoint) -> PhasePoint:
    """y = (z0 / 2i pi, alpha0 / (sqrt2 pi)) for xi = (z0, alpha0), z0 = q0 + i p0."""
    return PhasePoint(xi.p / (2 * np.pi), -xi.q / (2 * np.pi), xi.alpha / (SQ2 * np.pi))


test_vector.__test__ = False  # keep pytest from collecting the helper


def characteristic_residual(traj: Trajectory, y: PhasePoint, ff: FormFactorSet, g: float = 1.0, F=None) -> float:
    """max_t |e^{2 pi i Re<y,v(t)>} - e^{2 pi i Re<y,v(0)>} - 2 pi i int_0^t Re<X(s,v(s)), y> e^{...} ds|.

    ``traj`` must be an interaction-frame trajectory; the integral uses the
    trapezoid rule over the stored samples.
    """
    if traj.frame != "interaction":
        raise ParameterError("characteristic residual needs an interaction-frame trajectory")
    grid = ff.grid
    prof = ff.f if F is None else np.asarray(F)
    t = traj.times
    phase = np.array([2 * np.pi * inner(y, v, grid).real for v in traj.states])
    e = np.exp(1j * phase)
    Xy = np.array([inner(interaction_field(s, v, prof, grid, g), y, grid).real for s, v in zip(t, traj.states)])
    integrand = 2j * np.pi * Xy * e
    cum = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(t) * (integrand[1:] + integrand[:-1]))])
    return float(np.max(np.abs(e - e[0] - cum)))


def duhamel_field(traj: Trajectory, ff: FormFactorSet, g: float = 1.0, F=None) -> np.ndarray:
    """e^{-itg}(alpha0 - (i/sqrt2) int_0^t e^{isg} F_{q_s} ds) at the final time, trapezoid over samples."""
    if traj.frame != "lab":
        raise ParameterError("Duhamel reconstruction uses lab-frame positions")
    grid = ff.grid
    prof = ff.f if F is None else np.asarray(F)
    t = traj.times
    vals = np.array([np.exp(1j * s * g) * translate(prof, u.q, grid) for s, u in zip(t, traj.states)])
    integral = (0.5 * np.diff(t)[:, None] * (vals[1:] + vals[:-1])).sum(axis=0)
    return np.exp(-1j * t[-1] * g) * (traj.states[0].alpha - 1j * integral / SQ2)


def with_horizon(cfg: FlowConfig, horizon: float) -> FlowConfig:
    return replace(cfg, horizon=horizon)
