"""Truncated-Fock-space operator algebra in action.

Ladder commutators, coherent-state displacement, one-mode squeezing against
the sinh^2 closed form, and the symplectic relation of the matrix
hyperbolic pair.  The printed deviations separate exact algebra (roundoff
scale) from truncation contact (grows as states push against the cutoff).
"""

import numpy as np

from gplab import FockBasis, bogoliubov, cosh_sinh, number_operator, weyl
from gplab.checks import run_identity_suite

print("identity suite at M=2, n_max=8 (defaults)")
for result in run_identity_suite(2, 8):
    print(
        f"  {result.check_name:<28} dev={result.max_deviation:9.3e} "
        f"tol={result.tolerance:g}  pass={result.passed}"
    )

print("\ncoherent states: <N> = ||g||^2")
basis = FockBasis(1, 24)
for amp in (0.5, 1.0, 2.0):
    state = weyl(np.array([amp]), basis).apply(basis.vacuum())
    nmean = number_operator(basis).expectation(state).real
    print(f"  g={amp:3.1f}: <N> = {nmean:.10f}  (target {amp**2})")

print("\none-mode squeezed vacuum: <N> = sinh^2(r) at n_max=40")
basis = FockBasis(1, 40)
for r in (0.25, 0.5, 1.0):
    state = bogoliubov(np.array([[r]]), basis).apply(basis.vacuum())
    nmean = number_operator(basis).expectation(state).real
    print(f"  r={r}: <N> = {nmean:.10f}  sinh^2 = {np.sinh(r) ** 2:.10f}  "
          f"dev = {abs(nmean - np.sinh(r) ** 2):.2e}")
print("  (the r=1 deviation is the n_max=40 truncation floor, not algebra)")

print("\nsymplectic relation cosh cosh* - sinh sinh* = 1")
rng = np.random.default_rng(42)
k = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
k = 0.4 * (k + k.T)
c, s = cosh_sinh(k)
defect = np.abs(c @ c.conj().T - s @ s.conj().T - np.eye(4)).max()
print(f"  defect at a random symmetric 4x4 kernel: {defect:.2e}")
