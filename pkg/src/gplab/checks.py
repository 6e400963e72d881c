"""Operator identity suites behind the `fock-check` subcommand.

Each check returns its measured deviation and tolerance; nothing is hidden
when a deviation exceeds its gate.  Deviations of the Weyl shift and the
Bogoliubov action are measured as max matrix elements between states with
total occupation at most n_max/2, which isolates truncation spill from
algebra errors: the identities hold exactly in the untruncated algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    FockBasis,
    ModeBasis,
    assemble_hamiltonian,
    bogoliubov,
    cosh_sinh,
    ladder_ops,
    number_operator,
    weyl,
)
from .gp import build_scaled_potential_kernel
from .grids import PeriodicGrid
from .scattering import RadialPotential, soft_ball

__all__ = ["CheckResult", "run_identity_suite", "sector_restriction_deviation"]


@dataclass(frozen=True)
class CheckResult:
    check_name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)

    def as_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _default_g(n_modes: int, g_norm2: float) -> np.ndarray:
    """Deterministic coefficient vector with the requested squared norm."""
    pattern = np.array([1.0 + 0.5j, 0.8 - 0.6j, -0.4 + 0.9j, 0.7 + 0.2j, -0.3 - 0.8j, 0.5 + 0.5j])
    g = pattern[:n_modes].astype(complex)
    if n_modes > pattern.size:
        g = np.resize(pattern, n_modes).astype(complex)
    return g * np.sqrt(g_norm2) / np.linalg.norm(g)


def _default_kernel(n_modes: int, hs_norm: float) -> np.ndarray:
    base = np.zeros((n_modes, n_modes), dtype=complex)
    vals = [0.5 + 0.1j, 0.45 - 0.2j, -0.3 + 0.3j, 0.25 + 0.15j, -0.2 - 0.1j, 0.15 + 0.05j]
    pos = 0
    for i in range(n_modes):
        for j in range(i, n_modes):
            base[i, j] = base[j, i] = vals[pos % len(vals)]
            pos += 1
    return base * (hs_norm / np.linalg.norm(base))


def ccr_deviation(basis: FockBasis) -> float:
    """max |([a_i, a*_j] - δ_ij)| over the Σn <= n_max - 1 subspace."""
    ops = ladder_ops(basis)
    guard = basis.totals <= basis.n_max - 1
    worst = 0.0
    eye = np.eye(basis.dim)
    for i, (a_i, _) in enumerate(ops):
        for j, (_, adag_j) in enumerate(ops):
            comm = (a_i @ adag_j - adag_j @ a_i).toarray() - (eye if i == j else 0.0)
            worst = max(worst, float(np.abs(comm[np.ix_(guard, guard)]).max()))
    return worst


def number_sum_deviation(basis: FockBasis) -> float:
    """max |N - Σ a*_i a_i| (equal up to float roundoff in the √n products)."""
    ops = ladder_ops(basis)
    total = sum((adag @ a for a, adag in ops))
    return float(abs(total - number_operator(basis).matrix).max())


def weyl_shift_deviation(basis: FockBasis, g) -> tuple:
    """(unitarity defect, max shift deviation on the Σn <= n_max/2 subspace)."""
    w = weyl(g, basis).dense()
    defect = float(np.abs(w.conj().T @ w - np.eye(basis.dim)).max())
    guard = basis.totals <= basis.n_max // 2
    worst = 0.0
    for i, (a, _) in enumerate(ladder_ops(basis)):
        dev = w.conj().T @ a.toarray() @ w - a.toarray() - g[i] * np.eye(basis.dim)
        worst = max(worst, float(np.abs(dev[np.ix_(guard, guard)]).max()))
    return defect, worst


def bogoliubov_action_deviation(basis: FockBasis, kmat) -> tuple:
    """(unitarity defect, max action deviation on the Σn <= n_max/2 subspace).

    Compares T*(k) a_i T(k) with Σ_m cosh(k)_im a_m + sinh(k)_im a*_m, the
    mode form of the kernel action.
    """
    t_op = bogoliubov(kmat, basis, hs_guard=np.inf).dense()
    defect = float(np.abs(t_op.conj().T @ t_op - np.eye(basis.dim)).max())
    cosh_m, sinh_m = cosh_sinh(kmat)
    guard = basis.totals <= basis.n_max // 2
    ops = ladder_ops(basis)
    worst = 0.0
    for i in range(basis.n_modes):
        lhs = t_op.conj().T @ ops[i][0].toarray() @ t_op
        rhs = sum(
            cosh_m[i, m] * ops[m][0].toarray() + sinh_m[i, m] * ops[m][1].toarray()
            for m in range(basis.n_modes)
        )
        worst = max(worst, float(np.abs((lhs - rhs)[np.ix_(guard, guard)]).max()))
    return defect, worst


def symplectic_deviation(kmat) -> float:
    """max |cosh(k) cosh(k)† - sinh(k) sinh(k)† - 1|."""
    cosh_m, sinh_m = cosh_sinh(kmat)
    rel = cosh_m @ cosh_m.conj().T - sinh_m @ sinh_m.conj().T - np.eye(cosh_m.shape[0])
    return float(np.abs(rel).max())


def _symmetric_pairs(n_modes: int):
    return [(k, l) for k in range(n_modes) for l in range(k, n_modes)]


def _two_particle_first_quantized(modes: ModeBasis, pair_kernel, n_particles: int) -> np.ndarray:
    """Two-boson Hamiltonian assembled on the product grid, no ladder algebra.

    Basis: symmetrized products of mode functions.  Kinetic term applied
    spectrally per particle axis; interaction is the pointwise pair kernel
    divided by N (the Fock convention (2N)⁻¹ Σ a*a*aa doubles over ordered
    pairs).
    """
    grid = modes.grid
    if grid.dim != 1:
        raise ValueError("the independent two-particle assembly runs on 1D grids")
    n = grid.points_per_dim
    h = grid.cell_volume
    k2 = grid.k_squared()
    fields = modes.mode_fields
    pairs = _symmetric_pairs(modes.n_modes)

    def sym_product(k, l):
        prod = np.outer(fields[k], fields[l])
        if k == l:
            return prod
        return (prod + np.outer(fields[l], fields[k])) / np.sqrt(2.0)

    diff = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    vmat = pair_kernel[diff] / n_particles

    dim = len(pairs)
    out = np.empty((dim, dim), dtype=complex)
    states = [sym_product(k, l) for k, l in pairs]
    for b, ket in enumerate(states):
        lap = np.fft.ifft(k2[:, None] * np.fft.fft(ket, axis=0), axis=0)
        lap = lap + np.fft.ifft(k2[None, :] * np.fft.fft(ket, axis=1), axis=1)
        h_ket = lap + vmat * ket
        for a, bra in enumerate(states):
            out[a, b] = (np.conj(bra) * h_ket).sum() * h * h
    return out


def sector_restriction_deviation(
    modes: ModeBasis, potential: RadialPotential, n_particles: int, basis: FockBasis
) -> float:
    """Fock Hamiltonian on the 1- and 2-particle sectors vs first-quantized.

    The one-particle sector must equal the kinetic diagonal exactly; the
    two-particle sector is compared against an independent product-grid
    assembly sharing only the gridded pair kernel.
    """
    ham = assemble_hamiltonian(modes, potential, n_particles, basis).matrix
    m = modes.n_modes

    one = np.array([basis.index_of(tuple(int(i == j) for j in range(m))) for i in range(m)])
    h1 = ham[np.ix_(one, one)].toarray()
    dev = float(np.abs(h1 - np.diag(modes.kinetic_diag)).max())

    pairs = _symmetric_pairs(m)
    idx = []
    for k, l in pairs:
        occ = [0] * m
        occ[k] += 1
        occ[l] += 1
        idx.append(basis.index_of(tuple(occ)))
    h2 = ham[np.ix_(idx, idx)].toarray()
    pair_kernel = build_scaled_potential_kernel(modes.grid, potential, n_particles)
    h2_ref = _two_particle_first_quantized(modes, pair_kernel, n_particles)
    dev = max(dev, float(np.abs(h2 - h2_ref).max()))
    return dev


def run_identity_suite(
    n_modes: int = 2,
    n_max: int = 8,
    g_norm2: float = 0.05,
    hs_norm: float = 0.05,
    shift_tol: float = 1e-5,
    unitarity_tol: float = 1e-6,
    ccr_tol: float = 1e-13,
    symplectic_tol: float = 1e-10,
    sector_tol: float = 1e-10,
) -> list:
    """The full identity suite at one parameter point; returns CheckResults."""
    basis = FockBasis(n_modes, n_max)
    g = _default_g(n_modes, g_norm2)
    kmat = _default_kernel(n_modes, hs_norm)

    results = [CheckResult("ccr_commutator", ccr_deviation(basis), ccr_tol)]
    results.append(CheckResult("number_equals_ladder_sum", number_sum_deviation(basis), ccr_tol))
    w_defect, w_dev = weyl_shift_deviation(basis, g)
    results.append(CheckResult("weyl_unitarity", w_defect, unitarity_tol))
    results.append(CheckResult("weyl_shift", w_dev, shift_tol))
    t_defect, t_dev = bogoliubov_action_deviation(basis, kmat)
    results.append(CheckResult("bogoliubov_unitarity", t_defect, unitarity_tol))
    results.append(CheckResult("bogoliubov_action", t_dev, shift_tol))
    results.append(CheckResult("symplectic_cosh_sinh", symplectic_deviation(kmat), symplectic_tol))

    grid = PeriodicGrid(dim=1, points_per_dim=64, box_length=4.0)
    modes = ModeBasis.plane_waves(grid, min(n_modes, 4))
    sector_basis = FockBasis(min(n_modes, 4), max(2, min(n_max, 6)))
    dev = sector_restriction_deviation(modes, soft_ball(4.0, 0.5), 2, sector_basis)
    results.append(CheckResult("sector_restriction", dev, sector_tol))
    return results
