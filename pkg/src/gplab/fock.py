"""Truncated bosonic Fock space over M plane-wave modes.

The basis enumerates all occupation tuples (n_1, ..., n_M) with total
particle number at most n_max, in graded lexicographic order.  Creation
above the cutoff maps to zero, which makes every ladder generator exactly
anti-Hermitian on the truncated space; Weyl and Bogoliubov exponentials are
therefore unitary to roundoff, and truncation damage shows up as weight in
the top total-number sectors rather than as norm loss.  Helpers report that
weight so tests can gate on it instead of silently trusting results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import expm

from .grids import PeriodicGrid, WaveField
from .gp import build_scaled_potential_kernel
from .krylov import expm_generator_apply
from .scattering import RadialPotential, ScatteringSolution

__all__ = [
    "ModeBasis",
    "FockBasis",
    "FockVector",
    "FockOperator",
    "CorrelationKernel",
    "ladder_ops",
    "number_operator",
    "weyl",
    "weyl_apply",
    "bogoliubov",
    "bogoliubov_apply",
    "cosh_sinh",
    "build_correlation_kernel",
    "correlation_weight_grid",
    "two_body_tensor",
    "assemble_hamiltonian",
    "trap_operator",
    "squeezed_coherent",
    "reduced_density",
    "trace_norm_distance",
    "save_fock_vector",
    "load_fock_vector",
]

UNITARITY_GATE = 1e-6
DENSE_EXPM_CAP = 6000


# ---------------------------------------------------------------------------
# one-particle modes
# ---------------------------------------------------------------------------

def plane_wave_frequencies(dim: int, n_modes: int) -> list:
    """Integer frequency vectors of the n_modes lowest-|k| plane waves.

    Conjugate orbits {m, -m} are kept adjacent (representative first), and
    orbits are ordered by (|m|², lexicographic representative).  Keeping ±k
    together preserves the momentum-conserving pair-creation channel even
    for small mode counts.
    """
    reach = 3
    while (2 * reach + 1) ** dim < 2 * n_modes + 1:
        reach += 1
    orbits = {}
    grids = np.meshgrid(*([np.arange(-reach, reach + 1)] * dim), indexing="ij")
    for m in zip(*(g.ravel() for g in grids)):
        m = tuple(int(x) for x in m)
        rep = max(m, tuple(-x for x in m))
        orbits.setdefault(rep, None)
    reps = sorted(orbits, key=lambda m: (sum(x * x for x in m), m))
    ordered = []
    for rep in reps:
        ordered.append(rep)
        neg = tuple(-x for x in rep)
        if neg != rep:
            ordered.append(neg)
    return ordered[:n_modes]


class ModeBasis:
    """Orthonormal one-particle functions on a grid (default: plane waves).

    Attributes
    ----------
    grid : PeriodicGrid
    mode_fields : ndarray, shape (M, *grid.shape)
    kinetic_diag : ndarray
        One-particle kinetic energies |k_i|².
    frequencies : list of tuple
        Integer frequency vectors (plane-wave construction only).
    """

    def __init__(self, grid: PeriodicGrid, mode_fields, kinetic_diag, frequencies=None):
        self.grid = grid
        self.mode_fields = np.asarray(mode_fields, dtype=complex)
        self.kinetic_diag = np.asarray(kinetic_diag, dtype=float)
        self.frequencies = frequencies
        if self.mode_fields.shape[1:] != grid.shape:
            raise ValueError("mode fields do not match the grid")
        if len(self.kinetic_diag) != self.n_modes:
            raise ValueError("kinetic diagonal size mismatch")
        gram = np.array(
            [
                [grid.integrate(np.conj(a) * b) for b in self.mode_fields]
                for a in self.mode_fields
            ]
        )
        if np.abs(gram - np.eye(self.n_modes)).max() > 1e-10:
            raise ValueError("mode functions are not orthonormal on the grid")

    @classmethod
    def plane_waves(cls, grid: PeriodicGrid, n_modes: int) -> "ModeBasis":
        freqs = plane_wave_frequencies(grid.dim, n_modes)
        fields = [WaveField.plane_wave(grid, m).values for m in freqs]
        kin = [sum((2.0 * np.pi * x / grid.box_length) ** 2 for x in m) for m in freqs]
        return cls(grid, fields, kin, frequencies=freqs)

    @property
    def n_modes(self) -> int:
        return self.mode_fields.shape[0]

    def project(self, field: WaveField) -> np.ndarray:
        """Coefficients c_i = <xi_i, phi>."""
        if field.grid != self.grid:
            raise ValueError("field grid mismatch")
        return np.array(
            [self.grid.integrate(np.conj(m) * field.values) for m in self.mode_fields]
        )

    def embed(self, coefficients) -> np.ndarray:
        """Grid samples of sum_i c_i xi_i."""
        c = np.asarray(coefficients, dtype=complex)
        return np.tensordot(c, self.mode_fields, axes=(0, 0))


# ---------------------------------------------------------------------------
# occupation basis
# ---------------------------------------------------------------------------

def _compositions(total, slots):
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


class FockBasis:
    """All occupations with sum <= n_max over M modes, graded lexicographic."""

    def __init__(self, n_modes: int, n_max: int):
        if n_modes < 1 or n_max < 0:
            raise ValueError("need n_modes >= 1 and n_max >= 0")
        self.n_modes = n_modes
        self.n_max = n_max
        occs = []
        for total in range(n_max + 1):
            occs.extend(sorted(_compositions(total, n_modes)))
        self.occupations = np.array(occs, dtype=np.int64)
        self.dim = len(occs)
        self.totals = self.occupations.sum(axis=1)
        # mixed-radix code -> index lookup for vectorized operator assembly
        radix = n_max + 1
        if radix**n_modes > 3e7:
            raise ValueError("basis code table too large; reduce n_max or modes")
        self._powers = radix ** np.arange(n_modes, dtype=np.int64)
        codes = self.occupations @ self._powers
        table = np.full(radix**n_modes, -1, dtype=np.int64)
        table[codes] = np.arange(self.dim)
        self._codes = codes
        self._table = table
        self._ladder_cache = None

    def index_of(self, occupation) -> int:
        occ = np.asarray(occupation, dtype=np.int64)
        idx = int(self._table[int(occ @ self._powers)])
        if idx < 0:
            raise KeyError(f"occupation {tuple(occupation)} not in basis")
        return idx

    @property
    def vacuum_index(self) -> int:
        return 0

    def vacuum(self) -> "FockVector":
        amp = np.zeros(self.dim, dtype=complex)
        amp[0] = 1.0
        return FockVector(self, amp)

    def expected_dim(self) -> int:
        from math import comb

        return comb(self.n_modes + self.n_max, self.n_modes)


@dataclass
class FockVector:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.basis.dim,):
            raise ValueError("amplitude length does not match basis dimension")
        if not np.all(np.isfinite(amp.view(float))):
            raise ValueError("amplitudes must be finite")
        self.amplitudes = amp

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "FockVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def number_expectation(self) -> float:
        w = np.abs(self.amplitudes) ** 2
        total = w.sum()
        if total == 0.0:
            return 0.0
        return float((self.basis.totals * w).sum() / total)

    def top_sector_weight(self, sectors: int = 2) -> float:
        """Relative weight in the highest `sectors` total-number sectors.

        The meaningful truncation diagnostic: the generators are unitary, so
        cutoff damage manifests as weight piling up here, not as norm loss.
        """
        w = np.abs(self.amplitudes) ** 2
        total = w.sum()
        if total == 0.0:
            return 0.0
        top = self.basis.totals > self.basis.n_max - sectors
        return float(w[top].sum() / total)


@dataclass
class FockOperator:
    basis: FockBasis
    matrix: object  # scipy sparse or dense ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.basis.dim, self.basis.dim):
            raise ValueError("operator shape does not match basis")

    def apply(self, vec: FockVector) -> FockVector:
        return FockVector(self.basis, self.matrix @ vec.amplitudes)

    def dense(self) -> np.ndarray:
        m = self.matrix
        return m.toarray() if sparse.issparse(m) else np.asarray(m)

    def expectation(self, vec: FockVector) -> complex:
        return complex(np.vdot(vec.amplitudes, self.matrix @ vec.amplitudes))


# ---------------------------------------------------------------------------
# ladder operators and simple observables
# ---------------------------------------------------------------------------

def ladder_ops(basis: FockBasis) -> list:
    """[(a_i, a*_i)] with standard matrix elements; creation past the cutoff is 0."""
    if basis._ladder_cache is not None:
        return basis._ladder_cache
    occ = basis.occupations
    out = []
    for i in range(basis.n_modes):
        src = np.nonzero(occ[:, i] > 0)[0]
        tgt = basis._table[basis._codes[src] - basis._powers[i]]
        vals = np.sqrt(occ[src, i].astype(float))
        a = sparse.csr_matrix((vals, (tgt, src)), shape=(basis.dim, basis.dim), dtype=complex)
        out.append((a, a.conjugate().transpose().tocsr()))
    basis._ladder_cache = out
    return out


def number_operator(basis: FockBasis) -> FockOperator:
    return FockOperator(basis, sparse.diags(basis.totals.astype(float)).tocsr())


# ---------------------------------------------------------------------------
# Weyl and Bogoliubov unitaries
# ---------------------------------------------------------------------------

def _weyl_generator(g, basis: FockBasis):
    g = np.asarray(g, dtype=complex)
    if g.shape != (basis.n_modes,):
        raise ValueError("coefficient vector length must equal the mode count")
    ops = ladder_ops(basis)
    gen = sparse.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for i, (a, adag) in enumerate(ops):
        if g[i] != 0:
            gen = gen + g[i] * adag - np.conj(g[i]) * a
    return gen


def _check_unitary(mat, what: str):
    defect = np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max()
    if defect > UNITARITY_GATE:
        raise RuntimeError(f"{what} unitarity defect {defect:.3e}; cutoff too small")
    return float(defect)


def weyl(g, basis: FockBasis) -> FockOperator:
    """W(g) = exp(sum_i g_i a*_i - conj(g_i) a_i) as a dense matrix.

    Guards the truncation-sanity heuristic ||g||^2 <= n_max/4; the vector
    path `weyl_apply` instead leaves truncation contact to the top-sector
    diagnostics, which sweep gates consume.
    """
    if basis.dim > DENSE_EXPM_CAP:
        raise ValueError("basis too large for a dense exponential; use weyl_apply")
    g_arr = np.asarray(g, dtype=complex)
    if np.linalg.norm(g_arr) ** 2 > basis.n_max / 4.0 + 1e-9:
        raise ValueError("||g||^2 exceeds n_max/4; raise the cutoff")
    gen = _weyl_generator(g, basis)
    mat = expm(gen.toarray())
    _check_unitary(mat, "Weyl operator")
    return FockOperator(basis, mat)


def weyl_apply(g, vec: FockVector, adjoint: bool = False) -> FockVector:
    """W(g) vec (or W(g)* vec) through the Krylov exponential, never forming W."""
    gen = _weyl_generator(g, vec.basis)
    sign = -1.0 if adjoint else 1.0
    out = expm_generator_apply(lambda x: sign * (gen @ x), vec.amplitudes)
    return FockVector(vec.basis, out)


def _bogoliubov_generator(kmat, basis: FockBasis):
    kmat = np.asarray(kmat, dtype=complex)
    m = basis.n_modes
    if kmat.shape != (m, m):
        raise ValueError("kernel matrix must be M x M")
    if np.abs(kmat - kmat.T).max() > 1e-10 * max(1.0, np.abs(kmat).max()):
        raise ValueError("kernel matrix must be symmetric")
    ops = ladder_ops(basis)
    gen = sparse.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for i in range(m):
        for j in range(m):
            kij = kmat[i, j]
            if kij != 0:
                gen = gen + 0.5 * kij * (ops[i][1] @ ops[j][1]) - 0.5 * np.conj(kij) * (
                    ops[j][0] @ ops[i][0]
                )
    return gen


def _kernel_matrix(k) -> np.ndarray:
    return k.mode_matrix if isinstance(k, CorrelationKernel) else np.asarray(k, dtype=complex)


def bogoliubov(k, basis: FockBasis, hs_guard: float = 2.0) -> FockOperator:
    """T(k) = exp(½ sum_ij k_ij a*_i a*_j - h.c.) as a dense matrix."""
    kmat = _kernel_matrix(k)
    if np.linalg.norm(kmat) > hs_guard:
        raise ValueError(f"kernel HS norm exceeds the guard {hs_guard}")
    if basis.dim > DENSE_EXPM_CAP:
        raise ValueError("basis too large for a dense exponential; use bogoliubov_apply")
    gen = _bogoliubov_generator(kmat, basis)
    mat = expm(gen.toarray())
    _check_unitary(mat, "Bogoliubov operator")
    return FockOperator(basis, mat)


def bogoliubov_apply(k, vec: FockVector, adjoint: bool = False, hs_guard: float = 2.0) -> FockVector:
    kmat = _kernel_matrix(k)
    if np.linalg.norm(kmat) > hs_guard:
        raise ValueError(f"kernel HS norm exceeds the guard {hs_guard}")
    gen = _bogoliubov_generator(kmat, vec.basis)
    sign = -1.0 if adjoint else 1.0
    out = expm_generator_apply(lambda x: sign * (gen @ x), vec.amplitudes)
    return FockVector(vec.basis, out)


def cosh_sinh(k):
    """Matrix hyperbolic pair of a symmetric kernel matrix.

    cosh(k) = sum (k kbar)^n / (2n)! and sinh(k) = sum (k kbar)^n k / (2n+1)!
    with products alternating k and its conjugate.  For symmetric k the
    product P = k kbar equals k k†, Hermitian PSD, so both series reduce to
    functions of P's eigensystem:  cosh(k) = Q cosh(s) Q†,
    sinh(k) = Q (sinh(s)/s) Q† k  with  P = Q s² Q†.
    """
    kmat = _kernel_matrix(k)
    prod = kmat @ np.conj(kmat)
    lam, q = np.linalg.eigh(prod)
    s = np.sqrt(np.clip(lam, 0.0, None))
    cosh_m = (q * np.cosh(s)) @ q.conj().T
    sinc = np.where(s > 1e-150, np.sinh(s) / np.where(s > 0, s, 1.0), 1.0)
    sinh_m = ((q * sinc) @ q.conj().T) @ kmat
    return cosh_m, sinh_m


# ---------------------------------------------------------------------------
# correlation kernel
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationKernel:
    """Pair-correlation kernel projected on the mode basis.

    mode_matrix holds k_ij = <xi_i ⊗ xi_j, k> for
    k(x;y) = -N (1 - f(N(x-y))) φ(x) φ(y); hs_norm is the Hilbert-Schmidt
    norm of the full-grid kernel (O(1) in N by construction).
    """

    mode_matrix: np.ndarray
    hs_norm: float
    n_scale: int

    def __post_init__(self):
        k = np.asarray(self.mode_matrix, dtype=complex)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise ValueError("mode matrix must be square")
        if np.abs(k - k.T).max() > 1e-10 * max(1.0, np.abs(k).max()):
            raise ValueError("correlation kernel must be symmetric")
        object.__setattr__(self, "mode_matrix", k)


def correlation_weight_grid(grid: PeriodicGrid, sol: ScatteringSolution, n_scale: int) -> np.ndarray:
    """w_N(d) = N (1 - f(N |d|)) sampled at minimum-image displacements."""
    return n_scale * (1.0 - sol.f_at(n_scale * grid.min_image_radius()))


def _periodic_convolve(kernel_grid, values, grid: PeriodicGrid):
    return np.fft.ifftn(np.fft.fftn(kernel_grid) * np.fft.fftn(values)) * grid.cell_volume


def build_correlation_kernel(
    phi: WaveField, sol: ScatteringSolution, n_scale: int, modes: ModeBasis
) -> CorrelationKernel:
    """Project -N (1 - f(N(x-y))) φ(x)φ(y) on mode pairs; record the HS norm."""
    grid = modes.grid
    if phi.grid != grid:
        raise ValueError("field grid mismatch")
    w = correlation_weight_grid(grid, sol, n_scale)
    eta = [np.conj(m) * phi.values for m in modes.mode_fields]
    conv = [_periodic_convolve(w, e, grid) for e in eta]
    m = modes.n_modes
    kij = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            kij[i, j] = -grid.integrate(eta[i] * conv[j])
    kij = 0.5 * (kij + kij.T)  # symmetric analytically; kill roundoff skew
    dens = phi.density()
    hs2 = float(np.real(grid.integrate(dens * _periodic_convolve(w**2, dens, grid))))
    return CorrelationKernel(mode_matrix=kij, hs_norm=float(np.sqrt(max(hs2, 0.0))), n_scale=n_scale)


# ---------------------------------------------------------------------------
# Hamiltonian assembly
# ---------------------------------------------------------------------------

def two_body_tensor(modes: ModeBasis, pair_kernel_grid) -> np.ndarray:
    """V_ijkl = ∬ conj(xi_i(x) xi_j(y)) v(x-y) xi_k(x) xi_l(y) by grid quadrature.

    The double grid sum is evaluated exactly through one FFT convolution per
    (j, l) pair density.
    """
    grid = modes.grid
    m = modes.n_modes
    fields = modes.mode_fields
    pair = [[np.conj(fields[a]) * fields[b] for b in range(m)] for a in range(m)]
    conv = [[_periodic_convolve(pair_kernel_grid, pair[j][l], grid) for l in range(m)] for j in range(m)]
    tensor = np.empty((m, m, m, m), dtype=complex)
    for i in range(m):
        for k in range(m):
            gik = pair[i][k]
            for j in range(m):
                for l in range(m):
                    tensor[i, j, k, l] = grid.integrate(gik * conv[j][l])
    return tensor


def _two_body_operator(tensor, basis: FockBasis, prefactor: float):
    """(prefactor) * sum_ijkl V_ijkl a*_i a*_j a_l a_k, vectorized over the basis."""
    occ = basis.occupations
    codes = basis._codes
    powers = basis._powers
    table = basis._table
    m = basis.n_modes
    rows, cols, vals = [], [], []
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    v = tensor[i, j, k, l]
                    if abs(v) < 1e-14:
                        continue
                    nk = occ[:, k]
                    nl = occ[:, l] - (1 if l == k else 0)
                    ok = (nk > 0) & (nl > 0)
                    if not ok.any():
                        continue
                    src = np.nonzero(ok)[0]
                    nj = occ[src, j] - (1 if j == k else 0) - (1 if j == l else 0)
                    ni = (
                        occ[src, i]
                        - (1 if i == k else 0)
                        - (1 if i == l else 0)
                        + (1 if i == j else 0)
                    )
                    amp = np.sqrt(
                        nk[src].astype(float) * nl[src] * (nj + 1.0) * (ni + 1.0)
                    )
                    shift = powers[i] + powers[j] - powers[k] - powers[l]
                    tgt = table[codes[src] + shift]
                    rows.append(tgt)
                    cols.append(src)
                    vals.append(prefactor * v * amp)
    if not rows:
        return sparse.csr_matrix((basis.dim, basis.dim), dtype=complex)
    return sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(basis.dim, basis.dim),
    )


def assemble_hamiltonian(
    modes: ModeBasis,
    potential: RadialPotential,
    n_particles: int,
    basis: FockBasis,
) -> FockOperator:
    """Kinetic diagonal plus (2N)⁻¹ Σ V_ijkl a*_i a*_j a_l a_k.

    The pair kernel is the grid image of N^dim V(N·); matrix elements come
    from exact double-grid quadrature (FFT form).  Hermitian to 1e-10.
    """
    if modes.n_modes != basis.n_modes:
        raise ValueError("mode count mismatch between ModeBasis and FockBasis")
    grid = modes.grid
    vN = build_scaled_potential_kernel(grid, potential, n_particles)
    tensor = two_body_tensor(modes, vN)
    kinetic = sparse.diags((basis.occupations @ modes.kinetic_diag).astype(complex))
    ham = kinetic.tocsr() + _two_body_operator(tensor, basis, 0.5 / n_particles)
    defect = abs(ham - ham.conjugate().transpose()).max()
    scale = max(1.0, abs(ham).max())
    if defect > 1e-10 * scale:
        raise RuntimeError(f"assembled Hamiltonian not Hermitian (defect {defect:.3e})")
    return FockOperator(basis, ham)


def trap_operator(modes: ModeBasis, trap_field, basis: FockBasis) -> FockOperator:
    """One-body lift of the trap: sum_ij <xi_i, U xi_j> a*_i a_j."""
    grid = modes.grid
    u = np.asarray(trap_field, dtype=float)
    if u.shape != grid.shape:
        raise ValueError("trap field does not match the grid")
    m = modes.n_modes
    t = np.array(
        [
            [grid.integrate(np.conj(modes.mode_fields[i]) * u * modes.mode_fields[j]) for j in range(m)]
            for i in range(m)
        ]
    )
    ops = ladder_ops(basis)
    mat = sparse.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for i in range(m):
        for j in range(m):
            if abs(t[i, j]) > 1e-15:
                mat = mat + t[i, j] * (ops[i][1] @ ops[j][0])
    return FockOperator(basis, mat)


# ---------------------------------------------------------------------------
# states and reduced objects
# ---------------------------------------------------------------------------

def squeezed_coherent(
    phi: WaveField,
    k,
    chi: FockVector,
    n_particles: int,
    modes: ModeBasis,
) -> FockVector:
    """W(√N φ) T(k) χ, the correlated condensate initial state.

    The two exponentials act through the Krylov propagator.  Norm loss above
    1e-4 (impossible for the exactly anti-Hermitian generators, kept as a
    defensive gate) raises; truncation contact is visible through
    `FockVector.top_sector_weight` instead.
    """
    g = np.sqrt(float(n_particles)) * modes.project(phi)
    out = weyl_apply(g, bogoliubov_apply(k, chi))
    if abs(out.norm() - chi.norm()) > 1e-4:
        raise RuntimeError("squeezed coherent state lost norm beyond the gate")
    return out


def reduced_density(psi: FockVector, modes: ModeBasis | None = None) -> np.ndarray:
    """γ_ij = <ψ, a*_j a_i ψ> / <ψ, N ψ>: Hermitian, PSD, unit trace."""
    ops = ladder_ops(psi.basis)
    cols = np.stack([a @ psi.amplitudes for a, _ in ops], axis=1)
    overlaps = cols.conj().T @ cols  # overlaps[j, i] = <a_j ψ, a_i ψ> = γ_ij
    total = float(np.trace(overlaps).real)
    if total <= 0.0:
        raise ValueError("zero-particle state has no reduced density matrix")
    gamma = overlaps.T / total
    return 0.5 * (gamma + gamma.conj().T)


def trace_norm_distance(gamma: np.ndarray, coefficients) -> float:
    """tr |γ - |c><c|| for a unit mode-coefficient vector c."""
    c = np.asarray(coefficients, dtype=complex)
    diff = gamma - np.outer(c, c.conj())
    return float(np.abs(np.linalg.eigvalsh(diff)).sum())


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def save_fock_vector(vec: FockVector, bin_path, meta_path) -> None:
    """Little-endian complex64 amplitudes plus a JSON occupation-basis descriptor."""
    vec.amplitudes.astype("<c8").tofile(bin_path)
    meta = {
        "format": "fock-vector",
        "dtype": "complex64-le",
        "modes": vec.basis.n_modes,
        "n_max": vec.basis.n_max,
        "dim": vec.basis.dim,
        "ordering": "graded-lexicographic",
    }
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_fock_vector(bin_path, meta_path) -> FockVector:
    with open(meta_path) as fh:
        meta = json.load(fh)
    basis = FockBasis(meta["modes"], meta["n_max"])
    if basis.dim != meta["dim"]:
        raise ValueError("basis descriptor does not reproduce the stored dimension")
    amps = np.fromfile(bin_path, dtype="<c8").astype(complex)
    return FockVector(basis, amps)
