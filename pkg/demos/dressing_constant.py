"""Which constant does the Gross transformation remove?

Classically the dressed energy exceeds the undressed energy of the dressed
state by exactly ||B||^2 / 2 (the drift term is absent on mirror grids).  On the
desk quantum model the projected residual of U H U^* - C - H_dressed vanishes
as the Fock cutoff grows only for C = ||B||^2 / 2 + <B, f>; the variant
C = ||B||^2 + <B, f> leaves a constant gap of ||B||^2 / 2.
"""
import numpy as np

from polaronlab import DressingMap, PhasePoint, dress, energy_dressed, energy_undressed, form_factors, make_grid
from polaronlab.quantumdesk import QuantumLattice, commensurate_box, dressing_identity_residual


def classical():
    rng = np.random.default_rng(4)
    for d, res in ((1, 64), (3, 16)):
        ff = form_factors(make_grid(d, 2.0, 1.0, res))
        n = ff.grid.n
        u = PhasePoint(rng.normal(size=d), rng.normal(size=d), rng.normal(size=n) + 1j * rng.normal(size=n))
        gap = energy_dressed(u, ff).value - energy_undressed(dress(DressingMap(1.0, ff), u), ff).value
        print(f"d={d}: E_hat - E o D(1) = {gap:.12f}   ||B||^2/2 = {0.5 * ff.norm2_B:.12f}")


def quantum():
    base = make_grid(1, 2.0, 1.0, 16)
    modes = base.subset([base.index_of([1.375])])
    L = commensurate_box(1.375, 2.0)
    print(f"{'N_c':>4} {'derived C':>12} {'residual':>10} {'variant C':>12} {'residual':>10}")
    for Nc in (8, 12, 16):
        lat = QuantumLattice(32, L, 0.5, modes, Nc)
        a = dressing_identity_residual(lat, 1.0, 2.0)
        b = dressing_identity_residual(lat, 1.0, 2.0, "literal")
        print(f"{Nc:4d} {a['C']:12.6f} {a['residual']:10.2e} {b['C']:12.6f} {b['residual']:10.2e}")


if __name__ == "__main__":
    classical()
    quantum()
