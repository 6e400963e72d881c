"""Desk-scale many-body experiments: exact evolution, fluctuation dynamics,
energy expansion, and the condensation convergence sweep over N.

Each particle number N gets its own Hamiltonian (the interaction is scaled
by N), its own modified-GP trajectory, and its own correlation kernels; the
shared ingredients (scattering solution, mode basis, initial field) are
computed once per configuration.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .fock import (
    CorrelationKernel,
    FockBasis,
    FockOperator,
    FockVector,
    ModeBasis,
    assemble_hamiltonian,
    bogoliubov_apply,
    build_correlation_kernel,
    reduced_density,
    squeezed_coherent,
    trace_norm_distance,
    trap_operator,
    weyl_apply,
)
from .gp import GPParams, build_convolution_kernel, evolve_gp, evolve_modified_gp, gp_energy
from .grids import PeriodicGrid, WaveField
from .krylov import expm_hermitian_apply
from .scattering import RadialPotential, solve_zero_energy

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "SweepContext",
    "evolve_many_body",
    "fluctuation_state",
    "fluctuation_number",
    "fluctuation_number_derivative",
    "convergence_sweep",
    "energy_expansion_check",
    "chi_hypothesis_expectation",
]

EVOLUTION_NORM_GATE = 1e-8
DISTANCE_FIT_FLOOR = 1e-8


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs; validation is separate so the energy-expansion
    check can reuse a config with N beyond the sweep guard."""

    grid: PeriodicGrid
    n_modes: int
    n_list: tuple
    t_final: float
    dt: float
    potential: RadialPotential
    n_max: int
    phi0_kind: str = "uniform"  # "uniform" | "lowmode"
    phi0_eps: float = 0.0
    record_times: tuple | None = None
    dim_cap: int = 200_000
    top_weight_gate: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if self.record_times is not None:
            object.__setattr__(self, "record_times", tuple(float(t) for t in self.record_times))

    def validate_for_sweep(self):
        """Raise on violations of the sweep invariants."""
        errors = []
        if len(self.n_list) < 1 or list(self.n_list) != sorted(set(self.n_list)):
            errors.append("n_list must be ascending and nonempty")
        for n in self.n_list:
            if n > self.n_max / 2:
                errors.append(f"N={n} exceeds n_max/2={self.n_max / 2} (truncation guard)")
        from math import comb

        dim = comb(self.n_modes + self.n_max, self.n_modes)
        if dim > self.dim_cap:
            errors.append(f"Fock dimension {dim} exceeds the cap {self.dim_cap}")
        if self.t_final < 0 or self.dt <= 0:
            errors.append("need t_final >= 0 and dt > 0")
        if errors:
            raise ValueError("; ".join(errors))

    def times(self) -> tuple:
        if self.record_times:
            ts = sorted(set(self.record_times) | {self.t_final})
        else:
            ts = [self.t_final]
        return tuple(t for t in ts if t <= self.t_final + 1e-12)


@dataclass
class ExperimentReport:
    rows: list  # dicts: N, t, trace_dist, fluct_number, energy_residual, norm_loss
    alpha: float | None
    fit_residual: float | None
    projection_error: float
    runtimes: dict = field(default_factory=dict)  # stderr only, never serialized

    def final_distances(self) -> dict:
        out = {}
        for row in self.rows:
            out[row["N"]] = row["trace_dist"]  # rows are time-ordered per N
        return out


def evolve_many_body(psi0: FockVector, ham: FockOperator, t: float, dt: float) -> FockVector:
    """exp(-i H t) psi0 by Krylov stepping; full steps of dt plus the remainder."""
    if t < 0 or dt <= 0:
        raise ValueError("need t >= 0 and dt > 0")
    mat = ham.matrix
    amps = psi0.amplitudes
    norm0 = np.linalg.norm(amps)
    n_full = int(np.floor(t / dt + 1e-12))
    rem = t - n_full * dt
    for _ in range(n_full):
        amps = expm_hermitian_apply(lambda x: mat @ x, amps, dt)
    if rem > 1e-12 * max(dt, 1.0):
        amps = expm_hermitian_apply(lambda x: mat @ x, amps, rem)
    drift = abs(np.linalg.norm(amps) - norm0)
    if drift > EVOLUTION_NORM_GATE * max(norm0, 1.0):
        raise RuntimeError(f"many-body norm drift {drift:.3e} beyond the gate")
    return FockVector(psi0.basis, amps)


class SweepContext:
    """Shared, lazily built ingredients of one experiment configuration."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.scattering = solve_zero_energy(cfg.potential)
        self.modes = ModeBasis.plane_waves(cfg.grid, cfg.n_modes)
        self.basis = FockBasis(cfg.n_modes, cfg.n_max)
        self.phi0 = self._build_phi0()
        self.params = GPParams(a0=self.scattering.a0)
        self.gp_energy0 = gp_energy(self.phi0, self.params)
        self._hams: dict = {}
        self._kernels: dict = {}

    def _build_phi0(self) -> WaveField:
        cfg = self.cfg
        if cfg.phi0_kind == "uniform":
            return WaveField.constant(cfg.grid)
        if cfg.phi0_kind == "lowmode":
            # zero mode plus the first conjugate pair, exactly inside the mode span
            c = np.zeros(self.modes.n_modes, dtype=complex)
            c[0] = 1.0
            if self.modes.n_modes >= 3:
                c[1] = c[2] = cfg.phi0_eps
            return WaveField.normalized(cfg.grid, self.modes.embed(c))
        raise ValueError(f"unknown phi0 kind {cfg.phi0_kind!r}")

    def hamiltonian(self, n: int) -> FockOperator:
        if n not in self._hams:
            self._hams[n] = assemble_hamiltonian(self.modes, self.cfg.potential, n, self.basis)
        return self._hams[n]

    def interaction_kernel(self, n: int):
        if n not in self._kernels:
            self._kernels[n] = build_convolution_kernel(
                self.cfg.grid, self.scattering, self.cfg.potential, n
            )
        return self._kernels[n]

    def correlation_kernel(self, phi: WaveField, n: int) -> CorrelationKernel:
        return build_correlation_kernel(phi, self.scattering, n, self.modes)

    def initial_state(self, n: int, chi: FockVector | None = None) -> FockVector:
        chi = chi if chi is not None else self.basis.vacuum()
        k0 = self.correlation_kernel(self.phi0, n)
        return squeezed_coherent(self.phi0, k0, chi, n, self.modes)

    def modified_gp_at(self, n: int, t: float) -> WaveField:
        if t == 0.0:
            return self.phi0
        return evolve_modified_gp(self.phi0, self.interaction_kernel(n), t, self.cfg.dt)

    def gp_at(self, t: float) -> WaveField:
        if t == 0.0:
            return self.phi0
        return evolve_gp(self.phi0, self.params, t, self.cfg.dt)


def fluctuation_state(
    t: float, cfg: ExperimentConfig, n_particles: int, chi: FockVector | None = None,
    context: SweepContext | None = None,
) -> FockVector:
    """U_N(t) χ: the five factors applied right to left.

    T(k_0), W(√N φ), exp(-i H t), W*(√N φ_t^{(N)}), T*(k_t); χ defaults to
    the vacuum.  At t = 0 the factors cancel to the identity up to roundoff.
    """
    ctx = context or SweepContext(cfg)
    chi = chi if chi is not None else ctx.basis.vacuum()
    psi = ctx.initial_state(n_particles, chi)
    psi = evolve_many_body(psi, ctx.hamiltonian(n_particles), t, cfg.dt)
    phi_t = ctx.modified_gp_at(n_particles, t)
    g_t = np.sqrt(float(n_particles)) * ctx.modes.project(phi_t)
    k_t = ctx.correlation_kernel(phi_t, n_particles)
    psi = weyl_apply(g_t, psi, adjoint=True)
    return bogoliubov_apply(k_t, psi, adjoint=True)


def fluctuation_number(
    t_grid, cfg: ExperimentConfig, n_particles: int, context: SweepContext | None = None
) -> np.ndarray:
    """<U_N(t) χ, N U_N(t) χ> for each requested time."""
    ctx = context or SweepContext(cfg)
    totals = ctx.basis.totals.astype(float)
    out = []
    for t in t_grid:
        chi_t = fluctuation_state(float(t), cfg, n_particles, context=ctx)
        out.append(float((totals * np.abs(chi_t.amplitudes) ** 2).sum()))
    return np.array(out)


def fluctuation_number_derivative(
    t: float, cfg: ExperimentConfig, n_particles: int,
    delta: float | None = None, context: SweepContext | None = None,
) -> dict:
    """Central finite difference of the fluctuation number at t.

    Returns the derivative together with <N+1>_t so the ratio the growth
    bound controls can be inspected; no bound is asserted (its constant is
    not computable here).
    """
    ctx = context or SweepContext(cfg)
    delta = delta if delta is not None else cfg.dt
    lo = max(t - delta, 0.0)
    values = fluctuation_number([lo, t, t + delta], cfg, n_particles, context=ctx)
    derivative = (values[2] - values[0]) / (t + delta - lo)
    return {
        "t": t,
        "derivative": float(derivative),
        "number_plus_one": float(values[1] + 1.0),
        "ratio": float(derivative / (values[1] + 1.0)),
        "delta": delta,
    }


def _fit_alpha(n_values, distances):
    """Least-squares slope of log(distance) against log(N); alpha = -slope."""
    ln = np.log(np.asarray(n_values, dtype=float))
    ld = np.log(np.asarray(distances, dtype=float))
    design = np.vstack([ln, np.ones_like(ln)]).T
    coef, *_ = np.linalg.lstsq(design, ld, rcond=None)
    resid = float(np.sqrt(np.mean((design @ coef - ld) ** 2)))
    return float(-coef[0]), resid


def convergence_sweep(cfg: ExperimentConfig, context: SweepContext | None = None) -> ExperimentReport:
    """Trace-norm condensation distances against the GP solution, swept over N.

    For each N: build W(√N φ) T(k_0) Ω, evolve to the recorded times, reduce
    to γ^(1), and measure tr|γ - |φ_t><φ_t|| with φ_t projected on the mode
    basis (projection error reported separately).  Fits log-distance against
    log-N at the final time unless every distance sits below the 1e-8 floor.
    """
    cfg.validate_for_sweep()
    ctx = context or SweepContext(cfg)
    times = cfg.times()

    gp_targets = {}
    projection_error = 0.0
    for t in times:
        phi_t = ctx.gp_at(t)
        c = ctx.modes.project(phi_t)
        weight = float(np.linalg.norm(c))
        projection_error = max(projection_error, abs(1.0 - weight**2))
        gp_targets[t] = c / weight

    rows = []
    runtimes = {}
    final_dists = []
    for n in cfg.n_list:
        tic = time.perf_counter()
        ham = ctx.hamiltonian(n)
        psi = ctx.initial_state(n)
        energy_residual = float(ham.expectation(psi).real - n * ctx.gp_energy0)
        t_prev = 0.0
        for t in times:
            psi = evolve_many_body(psi, ham, t - t_prev, cfg.dt)
            t_prev = t
            top = psi.top_sector_weight()
            if top > cfg.top_weight_gate:
                raise RuntimeError(
                    f"truncation weight {top:.3e} above gate at N={n}, t={t}; raise n_max"
                )
            gamma = reduced_density(psi)
            dist = trace_norm_distance(gamma, gp_targets[t])
            chi_t = _fluctuation_from_evolved(psi, ctx, n, t)
            fluct = float(
                (ctx.basis.totals * np.abs(chi_t.amplitudes) ** 2).sum()
            )
            rows.append(
                {
                    "N": n,
                    "t": t,
                    "trace_dist": dist,
                    "fluct_number": fluct,
                    "energy_residual": energy_residual,
                    "norm_loss": top,
                }
            )
            if t == times[-1]:
                final_dists.append(dist)
        runtimes[n] = time.perf_counter() - tic

    if max(final_dists) < DISTANCE_FIT_FLOOR:
        alpha, fit_residual = None, None
    else:
        alpha, fit_residual = _fit_alpha(cfg.n_list, final_dists)
    return ExperimentReport(
        rows=rows,
        alpha=alpha,
        fit_residual=fit_residual,
        projection_error=projection_error,
        runtimes=runtimes,
    )


def _fluctuation_from_evolved(psi: FockVector, ctx: SweepContext, n: int, t: float) -> FockVector:
    """Strip the time-dependent Weyl and Bogoliubov dressing off an evolved state."""
    phi_t = ctx.modified_gp_at(n, t)
    g_t = np.sqrt(float(n)) * ctx.modes.project(phi_t)
    k_t = ctx.correlation_kernel(phi_t, n)
    return bogoliubov_apply(k_t, weyl_apply(g_t, psi, adjoint=True), adjoint=True)


def energy_expansion_check(
    n_list, cfg: ExperimentConfig, trap_field=None, context: SweepContext | None = None
) -> list:
    """Rows of <W(√Nφ)T(k_0)Ω, (H_N + trap) W(√Nφ)T(k_0)Ω> - N E_GP(φ).

    Accepts N beyond the sweep guard deliberately (the truncated Poisson tail
    is part of what the check documents); the top-sector weight is reported
    alongside so truncation bias is visible.
    """
    ctx = context or SweepContext(cfg)
    trap_op = None
    params = ctx.params
    if trap_field is not None:
        trap_op = trap_operator(ctx.modes, trap_field, ctx.basis)
        params = GPParams(a0=ctx.scattering.a0, trap=np.asarray(trap_field, dtype=float))
    e_gp = gp_energy(ctx.phi0, params)
    rows = []
    for n in n_list:
        psi = ctx.initial_state(int(n))
        energy = ctx.hamiltonian(int(n)).expectation(psi).real
        if trap_op is not None:
            energy += trap_op.expectation(psi).real
        residual = float(energy - n * e_gp)
        rows.append(
            {
                "N": int(n),
                "residual": residual,
                "residual_per_N": residual / n,
                "top_weight": psi.top_sector_weight(),
            }
        )
    return rows


def sector_ground_energy_scan(n_list, cfg: ExperimentConfig, context: SweepContext | None = None) -> list:
    """Exact ground energy of the N-particle sector for each requested N.

    The Hamiltonian commutes with the particle number, so each sector is
    diagonalized on its own; rows carry E_N, E_N/N, and the Hartree product
    state's energy (an exact variational upper bound, so E_N below it
    measures the correlation gain).  Deterministic: the iterative
    eigensolver gets a fixed start vector.
    """
    from scipy.sparse.linalg import eigsh

    ctx = context or SweepContext(cfg)
    rows = []
    for n in n_list:
        n = int(n)
        ham = ctx.hamiltonian(n).matrix
        sector = np.nonzero(ctx.basis.totals == n)[0]
        block = ham[np.ix_(sector, sector)]
        if block.shape[0] <= 400:
            energy = float(np.linalg.eigvalsh(block.toarray())[0])
        else:
            energy = float(
                eigsh(block, k=1, which="SA", return_eigenvectors=False,
                      v0=np.ones(block.shape[0]))[0]
            )
        condensed = tuple(n if i == 0 else 0 for i in range(ctx.basis.n_modes))
        hartree = float(ham[ctx.basis.index_of(condensed), ctx.basis.index_of(condensed)].real)
        rows.append(
            {
                "N": n,
                "ground_energy": energy,
                "per_particle": energy / n,
                "hartree_energy": hartree,
                "correlation_gain": hartree - energy,
            }
        )
    return rows


def chi_hypothesis_expectation(chi: FockVector, ham: FockOperator, n_particles: int) -> float:
    """<χ, (N + 1 + N²/N + H) χ>: boundedness diagnostic for the deviation χ.

    Computable at any fixed N; uniformity in N is not testable at desk scale.
    """
    totals = chi.basis.totals.astype(float)
    w = np.abs(chi.amplitudes) ** 2
    number_part = float(((totals + 1.0 + totals**2 / n_particles) * w).sum())
    return number_part + float(ham.expectation(chi).real)


def log_runtimes(report: ExperimentReport, stream=None) -> None:
    """Runtimes go to stderr so serialized artifacts stay byte-deterministic."""
    stream = stream or sys.stderr
    for n, seconds in report.runtimes.items():
        print(f"[timing] N={n}: {seconds:.2f} s", file=stream)
