"""Ground states of the Gross-Pitaevskii functional by imaginary time.

On a trap-free torus the minimizer is the constant field.  With a harmonic
trap and no interaction the flow must reproduce the oscillator ground state
(-psi'' + x^2 psi = E psi has E0 = 1); switching the repulsion on raises
the energy and flattens the cloud.
"""

import numpy as np

from gplab import GPParams, PeriodicGrid, gp_energy, gp_ground_state

grid = PeriodicGrid(dim=1, points_per_dim=256, box_length=16.0)
trap = grid.radius() ** 2

print("harmonic trap, no interaction")
params = GPParams(a0=0.0, trap=trap)
phi = gp_ground_state(params, grid, tol=1e-12)
print(f"  energy = {gp_energy(phi, params):.8f}   (oscillator ground energy: 1)")

x = grid.axis()
gauss = np.pi**-0.25 * np.exp(-0.5 * x**2)
overlap = abs((np.conj(phi.values) * gauss).sum() * grid.cell_volume)
print(f"  overlap with the Gaussian ground state: {overlap:.10f}")

print("\nswitching on repulsion")
for a0 in (0.1, 0.5, 2.0):
    params = GPParams(a0=a0, trap=trap)
    phi = gp_ground_state(params, grid, tol=1e-12)
    peak = np.abs(phi.values).max()
    print(f"  a0={a0:4.1f}: energy = {gp_energy(phi, params):.6f}, peak |phi| = {peak:.4f}")

print("\ntrap-free torus: the constant is exact")
free = gp_ground_state(GPParams(a0=0.3), PeriodicGrid(dim=1, points_per_dim=64, box_length=4.0))
print(f"  max deviation from flat: {np.abs(np.abs(free.values) - 0.5).max():.2e}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    for a0 in (0.0, 0.5, 2.0):
        params = GPParams(a0=a0, trap=trap)
        phi = gp_ground_state(params, grid, tol=1e-12)
        ax.plot(x, np.abs(phi.values) ** 2, label=f"a0={a0}")
    ax.set_xlabel("x")
    ax.set_ylabel("|phi|^2")
    ax.set_xlim(-6, 6)
    ax.legend()
    fig.savefig("ground_states.png", dpi=120)
    print("\nwrote ground_states.png")
except ImportError:
    pass
