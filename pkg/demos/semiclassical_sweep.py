"""hbar sweep of the dressed-evolution scenario on the desk quantum model.

The <q> error against D(-1) Phi(t) D(1) is not monotone on hbar in {0.4, 0.2, 0.1}:
it rises to a plateau near hbar = 0.25 and only then decays.  Lattice size and
Fock cutoff are large enough here that the hump is not a truncation artefact.
"""
import numpy as np

from polaronlab.phasespace import PhasePoint, make_grid
from polaronlab.quantumdesk import QuantumLattice, commensurate_box, particle_points, semiclassical_check


def main(hbars=(0.8, 0.4, 0.3, 0.2, 0.14, 0.1, 0.05)):
    base = make_grid(1, 2.0, 1.0, 16)
    modes = base.subset([base.index_of([1.375])])
    L = commensurate_box(1.375, 1.0 + 1.0 + 6 * np.sqrt(0.4))
    u0 = PhasePoint([0.0], [1.0], [0.5])
    print(f"{'hbar':>6} {'err_q':>10} {'err_p':>10} {'err_alpha':>10}")
    for hb in hbars:
        lat = QuantumLattice(particle_points(hb, L), L, hb, modes, 20)
        row = semiclassical_check("dressed-evolution", u0, lat, 1.0, 2.0, 1.0)
        print(f"{hb:6.2f} {row['err_q']:10.4f} {row['err_p']:10.4f} {row['err_alpha']:10.4f}")


if __name__ == "__main__":
    main()
