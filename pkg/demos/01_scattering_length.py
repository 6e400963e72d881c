"""Scattering length of repulsive potentials, two independent ways.

The zero-energy radial problem u'' = (V/2) u with u(0) = 0 has a tail
u(r) = r - a0 once V has died off; the same a0 must come out of the
integral (8 pi)^-1 * integral of f V.  For a square barrier ("soft ball")
there is a closed form to compare against.
"""

import numpy as np

from gplab import gaussian_bump, soft_ball, solve_zero_energy

# --- soft ball: closed form a0 = R - tanh(kappa R)/kappa, kappa = sqrt(V0/2)
v0, radius = 2.0, 1.0
sol = solve_zero_energy(soft_ball(v0, radius))
kappa = np.sqrt(v0 / 2.0)
exact = radius - np.tanh(kappa * radius) / kappa

print("soft ball V0=2, R=1")
print(f"  a0 (tail fit)   = {sol.a0:.12f}")
print(f"  a0 (integral)   = {sol.a0_integral:.12f}")
print(f"  a0 (closed form)= {exact:.12f}")
print(f"  tail residual   = {sol.tail_fit_residual:.2e}")

# --- weak potential: the Born approximation a0 ~ (8 pi)^-1 * integral of V
weak = soft_ball(0.01, 1.0)
sol_weak = solve_zero_energy(weak)
print("\nweak soft ball V0=0.01 (Born regime)")
print(f"  a0        = {sol_weak.a0:.6e}")
print(f"  Born      = {weak.born_scattering_length():.6e}")
print(f"  ratio     = {sol_weak.a0 / weak.born_scattering_length():.4f}  (< 1, Born is an upper bound)")

# --- a smooth bump, plus the scale covariance lambda^2 V(lambda r) -> a0/lambda
bump = gaussian_bump(8.0, 0.4)
sol_bump = solve_zero_energy(bump)
print("\ngaussian bump V0=8, sigma=0.4")
print(f"  a0 = {sol_bump.a0:.8f}, Born bound = {bump.born_scattering_length():.8f}")

lam = 2.0
scaled = solve_zero_energy(soft_ball(lam**2 * 8.0, 0.5 / lam))
base = solve_zero_energy(soft_ball(8.0, 0.5))
print(f"\nscale covariance at lambda={lam}")
print(f"  a0[lam^2 V(lam r)] = {scaled.a0:.10f}")
print(f"  a0[V]/lam          = {base.a0 / lam:.10f}")
