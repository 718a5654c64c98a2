"""Desk-scale quantization in d = 1: periodic particle grid (x) truncated multimode Fock space.

State index = particle index * fock_dim + Fock index; modes are ordered with
the last mode fastest.  Field modes are a few nodes (k_m, w_m) of a classical
:class:`~polaronlab.phasespace.KGrid`, with a_m = sqrt(hbar w_m) a(k_m) so that
[a_m, a_m^*] = hbar off the top Fock level.

The particle box [-L, L) must be commensurate with the mode momenta
(k_m L / pi integer) so that e^{ik q} is a periodic multiplication operator;
p = -i hbar d/dx is spectral with the Nyquist component removed.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .dressing import DressingMap, apply as apply_dressing
from .dynamics import FlowConfig, dressed_flow_conjugated, integrate
from .formfactor import FormFactorSet, form_factors
from .phasespace import DimensionError, KGrid, ParameterError, PhasePoint

__all__ = [
    "DEFAULT_DIM_CEILING",
    "TruncationWarning",
    "QuantumLattice",
    "commensurate_box",
    "particle_points",
    "build_mode_ops",
    "build_field_op",
    "build_hamiltonians",
    "gross_unitary",
    "coherent_state",
    "propagate",
    "expectations",
    "semiclassical_check",
    "weyl_field",
    "weyl_particle",
    "characteristic_functional",
    "characteristic_limit",
    "projector",
    "projected_norm",
    "dressing_identity_residual",
    "SCENARIOS",
]

DEFAULT_DIM_CEILING = 65536
SQ2 = np.sqrt(2.0)
SCENARIOS = ("undressed-evolution", "dressed-evolution", "gross-dressing")


class TruncationWarning(UserWarning):
    """Coherent amplitude too large for the Fock cutoff."""


def commensurate_box(k: float, L_min: float) -> float:
    """Smallest L >= L_min with k L / pi a positive integer."""
    j = max(1, int(np.ceil(abs(k) * L_min / np.pi - 1e-12)))
    return j * np.pi / abs(k)


def particle_points(hbar: float, L: float) -> int:
    """Power of two n_x with grid spacing 2L / n_x <= sqrt(hbar) / 4."""
    need = 2 * L / (np.sqrt(hbar) / 4)
    return int(2 ** max(3, int(np.ceil(np.log2(need - 1e-9)))))


@dataclass(frozen=True, eq=False)
class QuantumLattice:
    n_x: int
    L: float
    hbar: float
    modes: KGrid  # d = 1 mode set (nodes k_m, weights w_m)
    N_c: int
    ceiling: int = DEFAULT_DIM_CEILING

    def __post_init__(self):
        if self.modes.d != 1:
            raise DimensionError("the quantum desk is one-dimensional")
        if self.n_x < 2 or self.n_x & (self.n_x - 1):
            raise ParameterError(f"n_x must be a power of two, got {self.n_x}")
        if self.hbar <= 0:
            raise ParameterError("hbar must be > 0")
        if self.modes.n < 1:
            raise ParameterError("need at least one field mode")
        if self.N_c < 2:
            raise ParameterError("Fock cutoff N_c must be >= 2")
        if self.dim > self.ceiling:
            raise ParameterError(f"dimension {self.dim} exceeds the ceiling {self.ceiling}")
        for k in self.ks:
            j = k * self.L / np.pi
            if abs(j - round(j)) > 1e-9:
                raise ParameterError(f"box half-width L={self.L} is not commensurate with k={k}")

    @property
    def M(self) -> int:
        return self.modes.n

    @property
    def ks(self) -> np.ndarray:
        return self.modes.nodes[:, 0]

    @property
    def ws(self) -> np.ndarray:
        return self.modes.weights

    @property
    def fock_dim(self) -> int:
        return (self.N_c + 1) ** self.M

    @property
    def dim(self) -> int:
        return self.n_x * self.fock_dim

    @cached_property
    def x(self) -> np.ndarray:
        return -self.L + 2 * self.L * np.arange(self.n_x) / self.n_x

    @cached_property
    def kappa(self) -> np.ndarray:
        """Spectral wavenumbers with the Nyquist entry set to zero."""
        kap = 2 * np.pi * np.fft.fftfreq(self.n_x, d=2 * self.L / self.n_x)
        kap[self.n_x // 2] = 0.0
        return kap

    @cached_property
    def p_particle(self) -> np.ndarray:
        """Dense n_x x n_x matrix of p = -i hbar d/dx."""
        Fm = np.fft.fft(np.eye(self.n_x), axis=0)
        P = np.fft.ifft(self.hbar * self.kappa[:, None] * Fm, axis=0)
        return 0.5 * (P + P.conj().T)

    @cached_property
    def occupations(self) -> np.ndarray:
        """(fock_dim, M) occupation numbers of the Fock basis."""
        return np.array(list(itertools.product(range(self.N_c + 1), repeat=self.M)), dtype=int)

    def lift_particle(self, A) -> sp.csr_matrix:
        return sp.kron(sp.csr_matrix(A), sp.identity(self.fock_dim), format="csr")

    def lift_field(self, A) -> sp.csr_matrix:
        return sp.kron(sp.identity(self.n_x), sp.csr_matrix(A), format="csr")

    def phase_diag(self, k: float, sign: int) -> sp.csr_matrix:
        return sp.diags(np.exp(sign * 1j * k * self.x))


# ------------------------------------------------------------------ operators


def _lowering(N_c: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, N_c + 1)), 1, format="csr")


def build_mode_ops(lat: QuantumLattice) -> dict:
    """Fock-space a_m, a_m^* and N_hbar (acting on the field factor only)."""
    A = _lowering(lat.N_c)
    eye = sp.identity(lat.N_c + 1, format="csr")
    a = []
    for m in range(lat.M):
        factors = [eye] * lat.M
        factors[m] = A
        op = factors[0]
        for f in factors[1:]:
            op = sp.kron(op, f, format="csr")
        a.append(np.sqrt(lat.hbar) * op)
    adag = [op.conj().T.tocsr() for op in a]
    N = sum(ad @ op for ad, op in zip(adag, a))
    return {"a": a, "adag": adag, "N": N.tocsr()}


def build_field_op(lat: QuantumLattice, F, ops: dict | None = None, kind: str = "phi") -> sp.csr_matrix:
    """phi(F_q), a(F_q) or a^*(F_q) on the full space, F tabulated at the mode nodes.

    a(F_q) = sum_m sqrt(w_m) conj(F_m) e^{i k_m q} a_m.
    """
    F = np.asarray(F, dtype=complex)
    if F.shape != (lat.M,):
        raise DimensionError(f"profile needs {lat.M} mode values")
    ops = ops or build_mode_ops(lat)
    ann = sp.csr_matrix((lat.dim, lat.dim), dtype=complex)
    for m in range(lat.M):
        c = np.sqrt(lat.ws[m]) * np.conj(F[m])
        if c != 0:
            ann = ann + c * sp.kron(lat.phase_diag(lat.ks[m], +1), ops["a"][m], format="csr")
    if kind == "a":
        return ann
    cre = ann.conj().T.tocsr()
    if kind == "adag":
        return cre
    if kind == "phi":
        return ((ann + cre) / SQ2).tocsr()
    raise ValueError(f"unknown kind {kind!r}")


def mode_profiles(lat: QuantumLattice, K: float, cutoff: float, hbar: float | None = None) -> dict:
    """f, f^K, B_hbar and kB at the mode nodes (d = 1, so f = 1 inside the cutoff)."""
    hb = lat.hbar if hbar is None else hbar
    kn = np.abs(lat.ks)
    f = (kn <= cutoff).astype(float)
    fK = np.where(kn < K, f, 0.0)
    B = np.where(kn >= K, -f / (1 + hb * kn**2 / 2), 0.0)
    return {"f": f, "fK": fK, "B": B, "kB": lat.ks * B}


def dressing_constant(lat: QuantumLattice, prof: dict) -> float:
    """C = ||B||^2 / 2 + <B, f> over the mode set."""
    w = lat.ws
    return float(0.5 * (w * prof["B"] ** 2).sum() + (w * prof["B"] * prof["f"]).sum())


def build_hamiltonians(lat: QuantumLattice, K: float, cutoff: float, g: float = 1.0, F=None) -> dict:
    """H0, H (polaron), H_gF = g H0 + phi(F_q) and the explicit dressed Hamiltonian.

    The explicit dressed form carries -c (p - phi(kB_q)) + c^2 / 2 with
    c = (1/2) sum_m w_m k_m B_m^2; c vanishes on mirror-symmetric mode sets.
    """
    ops = build_mode_ops(lat)
    prof = mode_profiles(lat, K, cutoff)
    p = lat.lift_particle(lat.p_particle)
    p2 = lat.lift_particle(lat.p_particle @ lat.p_particle)
    N = lat.lift_field(ops["N"])
    H0 = (0.5 * p2 + N).tocsr()
    H = (H0 + build_field_op(lat, prof["f"], ops)).tocsr()
    out = {"H0": H0, "H": H, "p": p, "N": N, "profiles": prof, "ops": ops}
    out["H_gF"] = (g * H0 + build_field_op(lat, F, ops)).tocsr() if F is not None else None
    akB = build_field_op(lat, prof["kB"], ops, "a")
    phikB = ((akB + akB.conj().T) / SQ2).tocsr()
    c = 0.5 * float((lat.ws * lat.ks * prof["B"] ** 2).sum())
    Hd = (
        0.5 * p2 + N + build_field_op(lat, prof["fK"], ops)
        - (akB.conj().T @ p + p @ akB) / SQ2
        + 0.5 * (phikB @ phikB)
        - c * (p - phikB)
        + 0.5 * c * c * sp.identity(lat.dim)
    )
    out["H_dressed"] = Hd.tocsr()
    out["C"] = dressing_constant(lat, prof)
    out["phi_kB"] = phikB
    return out


def gross_unitary(lat: QuantumLattice, B) -> sp.csr_matrix:
    """U = exp((i/hbar) phi(i B_q)), exact block by block: the generator is diagonal in x."""
    B = np.asarray(B, dtype=complex)
    ops = build_mode_ops(lat)
    blocks = []
    for xj in lat.x:
        # (i/hbar) phi(iB_q) restricted to the Fock space at particle position xj
        ann = sum(np.sqrt(lat.ws[m]) * np.conj(1j * B[m]) * np.exp(1j * lat.ks[m] * xj) * ops["a"][m]
                  for m in range(lat.M))
        ann = sp.csr_matrix(ann).toarray()
        gen = (1j / lat.hbar) * (ann + ann.conj().T) / SQ2
        Ub = sla.expm(gen)
        res = np.linalg.norm(Ub.conj().T @ Ub - np.eye(len(Ub)), 2)
        if not np.isfinite(res) or res > 1e-10:
            raise ArithmeticError(
                f"Gross exponential failed at x={xj:.4g}: unitarity residual {res:.3g}, "
                f"generator norm {np.linalg.norm(gen, 2):.3g}"
            )
        blocks.append(Ub)
    return sp.block_diag(blocks, format="csr")


# --------------------------------------------------------------------- states


def _coherent_fock(beta: complex, N_c: int) -> np.ndarray:
    n = np.arange(N_c + 1)
    logfact = np.cumsum(np.log(np.maximum(n, 1)))
    amp = np.exp(-0.5 * abs(beta) ** 2 - 0.5 * logfact) * np.power(beta + 0j, n)
    return amp / np.linalg.norm(amp)


def coherent_state(lat: QuantumLattice, q0: float, p0: float, alpha0) -> np.ndarray:
    """Gaussian particle packet (x) displaced vacuum with a_m psi ~ sqrt(w_m) alpha0_m psi."""
    alpha0 = np.atleast_1d(np.asarray(alpha0, dtype=complex))
    if alpha0.shape != (lat.M,):
        raise DimensionError(f"need {lat.M} mode amplitudes")
    hb = lat.hbar
    xr = (lat.x - q0 + lat.L) % (2 * lat.L) - lat.L  # periodic distance to q0
    phi = np.exp(-xr**2 / (2 * hb) + 1j * p0 * lat.x / hb)
    phi /= np.linalg.norm(phi)
    betas = np.sqrt(lat.ws) * alpha0 / np.sqrt(hb)
    if np.any(np.abs(betas) ** 2 > lat.N_c / 2):
        warnings.warn(
            f"coherent amplitude |beta|^2={np.max(np.abs(betas)**2):.3g} exceeds N_c/2={lat.N_c / 2}",
            TruncationWarning, stacklevel=2)
    field = np.ones(1, dtype=complex)
    for b in betas:
        field = np.kron(field, _coherent_fock(b, lat.N_c))
    return np.kron(phi, field)


def propagate(H, psi: np.ndarray, t: float, hbar: float) -> np.ndarray:
    """exp(-i t H / hbar) psi.

    Sparse operators go through scipy's scaled Taylor ``expm_multiply``; small or
    dense ones use the dense exponential.  Norm drift above 1e-10 triggers the
    dense fallback when the dimension allows it.
    """
    if t == 0:
        return np.array(psi, dtype=complex)
    A = (-1j * t / hbar) * H
    if sp.issparse(H) and H.shape[0] > 400:
        # scipy's norm estimator draws from the global legacy RNG; pin it so the
        # Taylor step selection, and hence every digit of the result, is reproducible
        saved = np.random.get_state()
        np.random.seed(0)
        try:
            out = expm_multiply(A.tocsc(), psi)
        finally:
            np.random.set_state(saved)
        if abs(np.linalg.norm(out) - np.linalg.norm(psi)) <= 1e-10:
            return out
        if H.shape[0] > 6000:
            raise ArithmeticError(f"norm drift {abs(np.linalg.norm(out) - 1):.3g} in sparse exponential")
    dense = A.toarray() if sp.issparse(A) else np.asarray(A)
    return sla.expm(dense) @ psi


def expectations(lat: QuantumLattice, psi: np.ndarray, ops: dict | None = None) -> dict:
    """<q>, <p>, <a_m>/sqrt(w_m) and <q^2 + p^2 + N>."""
    ops = ops or build_mode_ops(lat)
    Psi = psi.reshape(lat.n_x, lat.fock_dim)
    rho_x = (np.abs(Psi) ** 2).sum(axis=1)
    q = float(rho_x @ lat.x)
    pPsi = lat.p_particle @ Psi
    p = float(np.vdot(Psi, pPsi).real)
    a = np.array([np.vdot(Psi, Psi @ ops["a"][m].T.toarray()) / np.sqrt(lat.ws[m]) for m in range(lat.M)])
    Nexp = float(np.vdot(Psi, Psi @ ops["N"].T.toarray()).real)
    obs = float(rho_x @ lat.x**2) + float(np.vdot(pPsi, pPsi).real) + Nexp
    return {"q": q, "p": p, "alpha": a, "N": Nexp, "observable": obs}


# ---------------------------------------------------------------- projectors


def projector(lat: QuantumLattice, max_occupation: int | None = None, band: int | None = None) -> sp.csr_matrix:
    """Orthogonal projector onto particle Fourier modes |j| <= band (x) total occupation <= max_occupation.

    Defaults: band = n_x / 8, max_occupation = N_c / 2.  The band leaves a
    guard of 3 n_x / 8 Fourier modes for the momentum shifts carried by e^{ikq}.
    """
    band = lat.n_x // 8 if band is None else band
    nmax = lat.N_c // 2 if max_occupation is None else max_occupation
    j = np.fft.fftfreq(lat.n_x, d=1.0 / lat.n_x)
    cols = np.fft.ifft(np.eye(lat.n_x), axis=0)[:, np.abs(j) <= band] * np.sqrt(lat.n_x)
    Px = cols @ cols.conj().T
    Pf = sp.diags((lat.occupations.sum(axis=1) <= nmax).astype(float))
    return sp.kron(sp.csr_matrix(Px), Pf, format="csr")


def projected_norm(A, P) -> float:
    """Spectral norm of P A P."""
    M = (P @ A @ P)
    M = M.toarray() if sp.issparse(M) else np.asarray(M)
    return float(np.linalg.norm(M, 2))


def dressing_identity_residual(lat: QuantumLattice, K: float, cutoff: float, constant: str = "derived") -> dict:
    """|| P (U H U^* - C - H_dressed) P || with P from :func:`projector`.

    ``constant="derived"`` uses ||B||^2/2 + <B,f>; ``"literal"`` uses ||B||^2 + <B,f>.
    """
    Hs = build_hamiltonians(lat, K, cutoff)
    U = gross_unitary(lat, Hs["profiles"]["B"])
    w, B, f = lat.ws, Hs["profiles"]["B"], Hs["profiles"]["f"]
    C = {"derived": Hs["C"], "literal": float((w * B**2).sum() + (w * B * f).sum())}[constant]
    diff = U @ Hs["H"] @ U.conj().T - C * sp.identity(lat.dim) - Hs["H_dressed"]
    return {"residual": projected_norm(diff, projector(lat)), "C": C}


# -------------------------------------------------------------- semiclassics


def _classical_modes(lat: QuantumLattice, cutoff: float, K: float) -> FormFactorSet:
    g = KGrid(1, cutoff, K, lat.modes.nodes, lat.modes.weights, lat.modes.resolution, lat.modes.tol,
              lat.modes.symmetric)
    return form_factors(g)


def _fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


def semiclassical_check(scenario: str, u0: PhasePoint, lat: QuantumLattice, K: float, cutoff: float,
                        T: float, dt: float = 1e-3) -> dict:
    """Quantum expectations versus the classical prediction on the same mode set.

    Scenarios: ``undressed-evolution`` (e^{-iTH/hbar} vs Phi(T)),
    ``dressed-evolution`` (U e^{-iTH/hbar} U^* vs D(-1) Phi(T) D(1)) and
    ``gross-dressing`` (U^* vs D(1); the row ``err_alpha_Dminus`` compares to D(-1)).
    ``fidelity`` is the overlap with the coherent state at the classical point.
    """
    if scenario not in SCENARIOS:
        raise ParameterError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    ff = _classical_modes(lat, cutoff, K)
    u0.check(ff.grid)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        psi = coherent_state(lat, u0.q[0], u0.p[0], u0.alpha)
        Hs = build_hamiltonians(lat, K, cutoff)
        extra = {}
        if scenario == "undressed-evolution":
            out = propagate(Hs["H"], psi, T, lat.hbar)
            cl = integrate(FlowConfig("undressed", "strang", dt, T), u0, ff).final
        else:
            U = gross_unitary(lat, Hs["profiles"]["B"])
            if scenario == "dressed-evolution":
                out = U @ propagate(Hs["H"], U.conj().T @ psi, T, lat.hbar)
                cl = dressed_flow_conjugated(T, u0, ff, dt)
            else:
                out = U.conj().T @ psi
                cl = apply_dressing(DressingMap(1.0, ff), u0)
                lit = apply_dressing(DressingMap(-1.0, ff), u0)
        ex = expectations(lat, out, Hs["ops"])
        if scenario == "gross-dressing":
            extra["err_alpha_Dminus"] = float(np.max(np.abs(ex["alpha"] - lit.alpha)))
        coh = coherent_state(lat, cl.q[0], cl.p[0], cl.alpha)
    row = {
        "hbar": lat.hbar,
        "scenario": scenario,
        "t": T if scenario != "gross-dressing" else 0.0,
        "err_q": abs(ex["q"] - cl.q[0]),
        "err_p": abs(ex["p"] - cl.p[0]),
        "err_alpha": float(np.max(np.abs(ex["alpha"] - cl.alpha))),
        "fidelity": _fidelity(out, coh),
        "truncation_warning": any(issubclass(w.category, TruncationWarning) for w in caught),
    }
    row.update(extra)
    return row


# ------------------------------------------------------------ Weyl operators


def weyl_field(lat: QuantumLattice, beta) -> np.ndarray:
    """W(beta) = exp(i phi(beta)) on the Fock factor, phi(beta) = (a(beta) + a^*(beta)) / sqrt2."""
    beta = np.asarray(beta, dtype=complex)
    ops = build_mode_ops(lat)
    ann = sum(np.sqrt(lat.ws[m]) * np.conj(beta[m]) * ops["a"][m] for m in range(lat.M))
    ann = sp.csr_matrix(ann).toarray()
    return sla.expm(1j * (ann + ann.conj().T) / SQ2)


def weyl_particle(lat: QuantumLattice, q: float, p: float) -> np.ndarray:
    """T(q, p) = exp(i (p q_hat - q p_hat)) on the particle factor."""
    return sla.expm(1j * (p * np.diag(lat.x) - q * lat.p_particle))


def characteristic_functional(lat: QuantumLattice, psi: np.ndarray, xi: PhasePoint) -> complex:
    """<psi, T(z / 2 i pi) (x) W(alpha / (sqrt2 pi)) psi> for xi = (z, alpha), z = q + i p."""
    z = xi.q[0] + 1j * xi.p[0]
    zz = z / (2j * np.pi)
    Tm = weyl_particle(lat, zz.real, zz.imag)
    Wm = weyl_field(lat, xi.alpha / (SQ2 * np.pi))
    Psi = psi.reshape(lat.n_x, lat.fock_dim)
    return complex(np.vdot(Psi, Tm @ Psi @ Wm.T))


def characteristic_limit(xi: PhasePoint, u: PhasePoint, grid: KGrid, form: str = "operator") -> complex:
    """hbar -> 0 limit of :func:`characteristic_functional` on a coherent state at ``u``.

    ``form="operator"`` is the exact limit of the Weyl expectation,
    exp(i (p' q_u - q' p_u)) exp(i sqrt2 Re<alpha', alpha_u>) with
    (q' + i p', alpha') = (z / 2 i pi, alpha / (sqrt2 pi)); ``form="target"`` is
    exp(2 i pi Re<xi, u>).
    """
    from .phasespace import inner

    if form == "target":
        return complex(np.exp(2j * np.pi * inner(xi, u, grid).real))
    zz = (xi.q[0] + 1j * xi.p[0]) / (2j * np.pi)
    qq, pp = zz.real, zz.imag
    ap = xi.alpha / (SQ2 * np.pi)
    field = SQ2 * complex(grid.integrate(np.conj(ap) * u.alpha)).real
    return complex(np.exp(1j * (pp * u.q[0] - qq * u.p[0]) + 1j * field))
