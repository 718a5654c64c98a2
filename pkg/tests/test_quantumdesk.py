import warnings

import numpy as np
import pytest
import scipy.sparse as sp

from polaronlab.phasespace import ParameterError, PhasePoint, make_grid
from polaronlab.quantumdesk import (
    QuantumLattice,
    TruncationWarning,
    build_field_op,
    build_hamiltonians,
    build_mode_ops,
    characteristic_functional,
    characteristic_limit,
    coherent_state,
    commensurate_box,
    dressing_identity_residual,
    expectations,
    gross_unitary,
    particle_points,
    projected_norm,
    projector,
    propagate,
    semiclassical_check,
    weyl_field,
)

K, CUTOFF = 1.0, 2.0
SQ2 = np.sqrt(2.0)


@pytest.fixture(scope="module")
def modes():
    base = make_grid(1, CUTOFF, K, 16)
    return base.subset([base.index_of([1.375])])


@pytest.fixture(scope="module")
def box(modes):
    return commensurate_box(1.375, 2.0)


def lattice(modes, box, n_x=16, hbar=0.5, N_c=3):
    return QuantumLattice(n_x, box, hbar, modes, N_c)


def herm_err(A):
    return abs(A - A.conj().T).max()


class TestLattice:
    @pytest.mark.parametrize("k,L_min", [(1.375, 2.0), (0.7, 5.0), (3.0, 0.1)])
    def test_commensurate_box(self, k, L_min):
        L = commensurate_box(k, L_min)
        j = k * L / np.pi
        assert L >= L_min - 1e-12
        assert j == pytest.approx(round(j), abs=1e-12)

    @pytest.mark.parametrize("hbar", [0.5, 0.1, 0.01])
    def test_particle_points(self, hbar):
        n = particle_points(hbar, 4.0)
        assert n & (n - 1) == 0
        assert 8.0 / n <= np.sqrt(hbar) / 4

    @pytest.mark.parametrize("kw", [dict(n_x=12), dict(hbar=0.0), dict(N_c=1), dict(n_x=4096, N_c=20)])
    def test_rejects(self, modes, box, kw):
        args = dict(n_x=16, L=box, hbar=0.5, modes=modes, N_c=3) | kw
        with pytest.raises(ParameterError):
            QuantumLattice(**args)

    def test_incommensurate_box(self, modes):
        with pytest.raises(ParameterError, match="commensurate"):
            QuantumLattice(16, 2.0, 0.5, modes, 3)

    def test_nyquist_removed(self, modes, box):
        lat = lattice(modes, box)
        assert lat.kappa[lat.n_x // 2] == 0.0
        assert herm_err(lat.p_particle) <= 1e-14


class TestOperators:
    def test_ccr_below_top_level(self, modes, box):
        lat = lattice(modes, box, N_c=6)
        ops = build_mode_ops(lat)
        a, ad = ops["a"][0].toarray(), ops["adag"][0].toarray()
        comm = a @ ad - ad @ a
        np.testing.assert_allclose(np.diag(comm)[:-1], lat.hbar, atol=1e-14)

    def test_number_spectrum(self, modes, box):
        lat = lattice(modes, box, hbar=0.5, N_c=3)
        ev = np.linalg.eigvalsh(build_mode_ops(lat)["N"].toarray())
        np.testing.assert_allclose(ev, [0.0, 0.5, 1.0, 1.5], atol=1e-14)

    def test_hamiltonians_hermitian(self, modes, box):
        Hs = build_hamiltonians(lattice(modes, box, N_c=4), K, CUTOFF)
        for key in ("H0", "H", "H_dressed", "p", "phi_kB"):
            assert herm_err(Hs[key]) <= 1e-12, key

    def test_generalized_hamiltonian(self, modes, box):
        lat = lattice(modes, box, N_c=3)
        Hs = build_hamiltonians(lat, K, CUTOFF, g=1.0, F=np.array([1.0]))
        assert abs(Hs["H_gF"] - Hs["H"]).max() <= 1e-14

    def test_vacuum_field_expectation(self, modes, box):
        lat = lattice(modes, box, N_c=4)
        psi = coherent_state(lat, 0.0, 0.0, [0.0])
        phi = build_field_op(lat, np.array([1.0]))
        assert abs(np.vdot(psi, phi @ psi)) <= 1e-14

    def test_free_ground_energy(self, modes, box):
        H0 = build_hamiltonians(lattice(modes, box, N_c=3), K, CUTOFF)["H0"]
        assert np.linalg.eigvalsh(H0.toarray())[0] == pytest.approx(0.0, abs=1e-12)

    def test_creation_bound(self, modes, box, rng):
        lat = lattice(modes, box, N_c=5)
        ops = build_mode_ops(lat)
        F = np.array([0.8 - 0.3j])
        cre = build_field_op(lat, F, ops, "adag")
        N = lat.lift_field(ops["N"])
        bound2 = lat.ws[0] * abs(F[0]) ** 2
        for _ in range(10):
            psi = rng.normal(size=lat.dim) + 1j * rng.normal(size=lat.dim)
            lhs = np.linalg.norm(cre @ psi) ** 2
            rhs = bound2 * np.vdot(psi, N @ psi + lat.hbar * psi).real
            assert lhs <= rhs * (1 + 1e-12)

    def test_field_kind(self, modes, box):
        with pytest.raises(ValueError):
            build_field_op(lattice(modes, box), np.array([1.0]), kind="pi")


class TestStates:
    def test_coherent_moments(self, modes, box):
        lat = QuantumLattice(64, box, 0.1, modes, 10)
        psi = coherent_state(lat, 0.3, 1.0, [0.5 - 0.2j])
        ex = expectations(lat, psi)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-14)
        assert ex["q"] == pytest.approx(0.3, abs=1e-6)
        assert ex["p"] == pytest.approx(1.0, abs=1e-6)
        assert ex["alpha"][0] == pytest.approx(0.5 - 0.2j, abs=1e-8)

    def test_truncation_warning(self, modes, box):
        lat = lattice(modes, box, N_c=3)
        with pytest.warns(TruncationWarning):
            coherent_state(lat, 0.0, 0.0, [5.0])

    @pytest.mark.parametrize("n_x,N_c", [(16, 4), (32, 15)])
    def test_propagation_conserves(self, modes, box, n_x, N_c):
        lat = QuantumLattice(n_x, box, 0.5, modes, N_c)
        H = build_hamiltonians(lat, K, CUTOFF)["H"]
        psi = coherent_state(lat, 0.0, 1.0, [0.5])
        out = propagate(H, psi, 1.0, lat.hbar)
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-10)
        E0, E1 = np.vdot(psi, H @ psi).real, np.vdot(out, H @ out).real
        assert E1 == pytest.approx(E0, abs=1e-9)

    def test_sparse_and_dense_paths_agree(self, modes, box):
        lat = QuantumLattice(32, box, 0.5, modes, 15)
        H = build_hamiltonians(lat, K, CUTOFF)["H"]
        psi = coherent_state(lat, 0.0, 1.0, [0.5])
        assert lat.dim > 400
        np.testing.assert_allclose(propagate(H, psi, 0.7, 0.5), propagate(H.toarray(), psi, 0.7, 0.5), atol=1e-10)


class TestGross:
    def test_unitary(self, modes, box):
        lat = lattice(modes, box, N_c=6)
        U = gross_unitary(lat, build_hamiltonians(lat, K, CUTOFF)["profiles"]["B"]).toarray()
        np.testing.assert_allclose(U.conj().T @ U, np.eye(lat.dim), atol=1e-12)

    def test_shifts_annihilator(self, modes, box):
        lat = QuantumLattice(16, box, 0.5, modes, 16)
        Hs = build_hamiltonians(lat, K, CUTOFF)
        B = Hs["profiles"]["B"]
        U = gross_unitary(lat, B)
        a = lat.lift_field(Hs["ops"]["a"][0])
        shift = sp.kron(lat.phase_diag(lat.ks[0], -1), sp.identity(lat.fock_dim)) * (np.sqrt(lat.ws[0]) * B[0] / SQ2)
        P = projector(lat)
        assert projected_norm(U @ a @ U.conj().T - a - shift, P) <= 1e-8

    def test_identity_residual_decreases(self, modes, box):
        res = [dressing_identity_residual(QuantumLattice(32, box, 0.5, modes, Nc), K, CUTOFF)["residual"]
               for Nc in (8, 12, 16)]
        assert res[0] > res[1] > res[2]
        assert res[2] <= 1e-8

    def test_literal_constant_plateaus(self, modes, box):
        lat = QuantumLattice(32, box, 0.5, modes, 12)
        der = dressing_identity_residual(lat, K, CUTOFF)
        lit = dressing_identity_residual(lat, K, CUTOFF, "literal")
        assert lit["residual"] == pytest.approx(abs(lit["C"] - der["C"]), rel=1e-3)

    def test_dressed_dynamics_fidelity(self, modes, box):
        lat = QuantumLattice(32, box, 0.5, modes, 16)
        Hs = build_hamiltonians(lat, K, CUTOFF)
        U = gross_unitary(lat, Hs["profiles"]["B"])
        psi = coherent_state(lat, 0.0, 0.5, [0.3])
        exact = U @ propagate(Hs["H"], U.conj().T @ psi, 0.5, lat.hbar)
        Hd = Hs["H_dressed"] + Hs["C"] * sp.identity(lat.dim)
        approx = propagate(Hd, psi, 0.5, lat.hbar)
        assert abs(np.vdot(exact, approx)) ** 2 >= 0.999


class TestSemiclassical:
    def test_gross_dressing_exact_in_position(self, modes, box):
        lat = QuantumLattice(32, box, 0.2, modes, 12)
        row = semiclassical_check("gross-dressing", PhasePoint([0.0], [1.0], [0.5]), lat, K, CUTOFF, 0.0)
        assert row["err_q"] <= 1e-10
        assert row["err_alpha"] < row["err_alpha_Dminus"]

    def test_unknown_scenario(self, modes, box):
        with pytest.raises(ParameterError):
            semiclassical_check("nope", PhasePoint([0.0], [1.0], [0.5]), lattice(modes, box), K, CUTOFF, 1.0)

    def test_flags_truncation(self, modes, box):
        lat = lattice(modes, box, N_c=3)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            row = semiclassical_check("gross-dressing", PhasePoint([0.0], [1.0], [6.0]), lat, K, CUTOFF, 0.0)
        assert row["truncation_warning"]


class TestWeyl:
    def test_field_weyl_unitary_and_inverse(self, modes, box):
        lat = lattice(modes, box, N_c=6)
        W = weyl_field(lat, [0.4 + 0.1j])
        np.testing.assert_allclose(W.conj().T @ W, np.eye(lat.N_c + 1), atol=1e-12)
        np.testing.assert_allclose(W @ weyl_field(lat, [-0.4 - 0.1j]), np.eye(lat.N_c + 1), atol=1e-12)

    def test_characteristic_basics(self, modes, box):
        lat = QuantumLattice(32, box, 0.2, modes, 10)
        psi = coherent_state(lat, 0.0, 1.0, [0.5])
        assert characteristic_functional(lat, psi, PhasePoint([0.0], [0.0], [0.0])) == pytest.approx(1.0)
        xi = PhasePoint([0.7], [-0.4], [0.3 + 0.2j])
        assert abs(characteristic_functional(lat, psi, xi)) <= 1 + 1e-12

    def test_converges_to_operator_limit(self, modes, box):
        xi = PhasePoint([0.7], [-0.4], [0.3 + 0.2j])
        u = PhasePoint([0.0], [1.0], [0.5])
        errs = []
        for hbar, n_x in ((0.4, 32), (0.2, 32), (0.1, 64)):
            lat = QuantumLattice(n_x, box, hbar, modes, 10)
            G = characteristic_functional(lat, coherent_state(lat, 0.0, 1.0, [0.5]), xi)
            errs.append(abs(G - characteristic_limit(xi, u, modes)))
        assert errs[0] > errs[1] > errs[2]
        gap = abs(characteristic_limit(xi, u, modes) - characteristic_limit(xi, u, modes, "target"))
        assert gap > 10 * errs[2]
