"""Equidistribution statistics: discrepancies, eta, and the bounds.

Zeros of random sign polynomials cluster on the unit torus and their
angles flatten out.  The angle discrepancy measures the worst deviation
of the empirical zero measure from the Haar measure over argument boxes;
the radius discrepancy measures the mass escaping a shell around the
torus; and the Erdos-Turan size eta ties both to exact resultant data
through explicit inequalities that the package checks on every system it
solves.  Saves a spectra plot when matplotlib is available.
"""

import math

import numpy as np

from polytorus import (
    angle_discrepancy,
    discrepancy_bounds,
    erdos_turan_size,
    radius_discrepancy,
    sample_bernoulli_system,
    solve_univariate_cycle,
)

rows = []
for d in (50, 100, 200, 400):
    ang, rad, eta = [], [], []
    for trial in range(10):
        system = sample_bernoulli_system(n=1, d=d, seed=42, trial=trial)
        cycle, _ = solve_univariate_cycle(system.polys[0])
        ang.append(angle_discrepancy(cycle, "exact"))
        rad.append(radius_discrepancy(cycle, 0.1))
        eta.append(erdos_turan_size(system).eta)
    rows.append((d, np.mean(ang), np.mean(rad), np.mean(eta)))
    print(f"d={d:4d}: mean delta_ang={rows[-1][1]:.5f}  "
          f"mean delta_rad(0.1)={rows[-1][2]:.5f}  mean eta={rows[-1][3]:.5f}")

print("\nthe discrepancies shrink roughly like the eta bounds predict:")
for d, ang, rad, eta in rows:
    b_ang, b_rad = discrepancy_bounds(eta, 1, 0.1)
    print(f"d={d:4d}: delta_ang={ang:.4f} <= B_ang={b_ang:.3f}   "
          f"delta_rad={rad:.4f} <= B_rad={b_rad:.4f}")

# One closed form worth seeing: for a single polynomial, eta is the
# classical Erdos-Turan quantity log(||f|| / sqrt|a_0 a_d|) / d, and for
# sign coefficients the certified norm bound gives log(d+1)/d.
d = 200
system = sample_bernoulli_system(1, d, 1, 0)
print(f"\neta(d={d}) = {erdos_turan_size(system).eta:.6f} "
      f"vs log(d+1)/d = {math.log(d + 1) / d:.6f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    system = sample_bernoulli_system(1, 400, 42, 0)
    cycle, _ = solve_univariate_cycle(system.polys[0])
    zs = cycle.coords_array()[:, 0]
    axes[0].scatter(zs.real, zs.imag, s=4)
    axes[0].set_title("zeros of a degree-400 sign polynomial")
    axes[0].set_aspect("equal")
    ds = [r[0] for r in rows]
    axes[1].loglog(ds, [r[1] for r in rows], "o-", label="mean angle discrepancy")
    axes[1].loglog(ds, [r[2] for r in rows], "s-", label="mean radius discrepancy")
    axes[1].set_xlabel("degree")
    axes[1].legend()
    fig.tight_layout()
    fig.savefig("demos_equidistribution.png", dpi=120)
    print("\nwrote demos_equidistribution.png")
except ImportError:
    print("\nmatplotlib not installed; skipping the plot")
