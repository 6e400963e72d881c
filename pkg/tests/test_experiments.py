"""Many-body evolution, fluctuation dynamics, and sweep plumbing.

The free-field case (V = 0) is the closed-form oracle: coherent states stay
coherent under the kinetic Hamiltonian and every factor of the fluctuation
dynamics cancels exactly, so U_N(t) Ω must return the vacuum.
"""

import numpy as np
import pytest
from scipy.linalg import expm

from gplab.experiments import (
    ExperimentConfig,
    sector_ground_energy_scan,
    SweepContext,
    chi_hypothesis_expectation,
    convergence_sweep,
    energy_expansion_check,
    evolve_many_body,
    fluctuation_number,
    fluctuation_number_derivative,
    fluctuation_state,
)
from gplab.fock import FockBasis, FockOperator, FockVector, number_operator
from gplab.grids import PeriodicGrid
from gplab.scattering import soft_ball

GRID = PeriodicGrid(dim=3, points_per_dim=16, box_length=1.0)


def make_config(v0=16.0, n_max=12, n_list=(2, 4), t_final=0.05, phi0="uniform", eps=0.0):
    return ExperimentConfig(
        grid=GRID,
        n_modes=3,
        n_list=n_list,
        t_final=t_final,
        dt=1e-3,
        potential=soft_ball(v0, 0.5),
        n_max=n_max,
        phi0_kind=phi0,
        phi0_eps=eps,
    )


class TestEvolveManyBody:
    def test_time_zero_identity(self):
        basis = FockBasis(2, 4)
        ham = FockOperator(basis, np.diag(np.arange(basis.dim, dtype=complex)))
        psi = basis.vacuum()
        out = evolve_many_body(psi, ham, 0.0, 1e-2)
        assert np.abs(out.amplitudes - psi.amplitudes).max() == 0.0

    def test_diagonal_hamiltonian_phases(self):
        basis = FockBasis(2, 3)
        energies = np.linspace(0.0, 4.0, basis.dim)
        ham = FockOperator(basis, np.diag(energies.astype(complex)))
        rng = np.random.default_rng(1)
        amp = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
        amp /= np.linalg.norm(amp)
        out = evolve_many_body(FockVector(basis, amp), ham, 0.5, 1e-2)
        expected = np.exp(-1j * energies * 0.5) * amp
        assert np.abs(out.amplitudes - expected).max() < 1e-10

    def test_toy_hamiltonian_matches_dense_oracle(self):
        basis = FockBasis(2, 2)  # dimension 6
        rng = np.random.default_rng(2)
        h = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = (h + h.conj().T) / 2.0
        ham = FockOperator(basis, h)
        amp = rng.normal(size=6) + 1j * rng.normal(size=6)
        amp /= np.linalg.norm(amp)
        out = evolve_many_body(FockVector(basis, amp), ham, 0.3, 1e-2)
        oracle = expm(-1j * 0.3 * h) @ amp
        assert np.abs(out.amplitudes - oracle).max() < 1e-9

    def test_norm_conserved(self):
        basis = FockBasis(2, 6)
        rng = np.random.default_rng(3)
        h = rng.normal(size=(basis.dim, basis.dim))
        ham = FockOperator(basis, ((h + h.T) / 2.0).astype(complex))
        amp = rng.normal(size=basis.dim) + 0j
        out = evolve_many_body(FockVector(basis, amp), ham, 1.0, 0.05)
        assert abs(np.linalg.norm(out.amplitudes) - np.linalg.norm(amp)) < 1e-8


class TestNumberConservation:
    def test_hamiltonian_commutes_with_number(self):
        ctx = SweepContext(make_config())
        ham = ctx.hamiltonian(2).matrix
        nop = number_operator(ctx.basis).matrix
        comm = ham @ nop - nop @ ham
        assert abs(comm).max() < 1e-12

    def test_sharp_sector_preserved(self):
        cfg = make_config()
        ctx = SweepContext(cfg)
        basis = ctx.basis
        occ = tuple(2 if i == 0 else 0 for i in range(basis.n_modes))
        amp = np.zeros(basis.dim, dtype=complex)
        amp[basis.index_of(occ)] = 1.0
        out = evolve_many_body(FockVector(basis, amp), ctx.hamiltonian(2), 0.05, 1e-3)
        weights = np.abs(out.amplitudes) ** 2
        assert weights[basis.totals != 2].sum() < 1e-16


class TestFluctuationDynamics:
    def test_identity_at_time_zero(self):
        cfg = make_config()
        ctx = SweepContext(cfg)
        chi = ctx.basis.vacuum()
        out = fluctuation_state(0.0, cfg, 4, chi=chi, context=ctx)
        fidelity = abs(np.vdot(chi.amplitudes, out.amplitudes))
        assert fidelity > 1.0 - 1e-8

    def test_free_field_returns_vacuum(self):
        cfg = make_config(v0=0.0)
        ctx = SweepContext(cfg)
        out = fluctuation_state(cfg.t_final, cfg, 4, context=ctx)
        fidelity = abs(out.amplitudes[ctx.basis.vacuum_index])
        assert fidelity > 1.0 - 1e-6

    def test_free_field_fluctuation_number_vanishes(self):
        cfg = make_config(v0=0.0)
        ctx = SweepContext(cfg)
        series = fluctuation_number([0.0, 0.02, 0.05], cfg, 2, context=ctx)
        assert np.abs(series).max() < 1e-6

    def test_interacting_norm_close_to_one(self):
        cfg = make_config()
        ctx = SweepContext(cfg)
        out = fluctuation_state(0.05, cfg, 4, context=ctx)
        assert abs(out.norm() - 1.0) < 1e-4

    def test_vacuum_fluctuation_number_zero_exactly(self):
        cfg = make_config()
        ctx = SweepContext(cfg)
        value = fluctuation_number([0.0], cfg, 2, context=ctx)[0]
        assert value < 1e-10


class TestFluctuationDerivative:
    def test_free_case_nearly_zero(self):
        cfg = make_config(v0=0.0)
        ctx = SweepContext(cfg)
        out = fluctuation_number_derivative(0.02, cfg, 2, context=ctx)
        assert abs(out["derivative"]) < 1e-4

    def test_symmetric_difference_consistency(self):
        cfg = make_config(t_final=0.06)
        ctx = SweepContext(cfg)
        coarse = fluctuation_number_derivative(0.03, cfg, 2, delta=4e-3, context=ctx)
        fine = fluctuation_number_derivative(0.03, cfg, 2, delta=2e-3, context=ctx)
        # both carry O(delta^2) error, so they agree to that order
        assert abs(coarse["derivative"] - fine["derivative"]) < 0.1 * max(
            1.0, abs(fine["derivative"])
        )
        assert fine["number_plus_one"] >= 1.0


class TestEnergyExpansion:
    def test_free_field_residual_vanishes(self):
        cfg = make_config(v0=0.0)
        ctx = SweepContext(cfg)
        rows = energy_expansion_check([2, 4], cfg, context=ctx)
        for row in rows:
            assert abs(row["residual"]) < 1e-6 * row["N"]

    def test_interacting_rows_have_diagnostics(self):
        cfg = make_config()
        ctx = SweepContext(cfg)
        rows = energy_expansion_check([2, 4], cfg, context=ctx)
        assert [row["N"] for row in rows] == [2, 4]
        for row in rows:
            assert np.isfinite(row["residual"])
            assert 0.0 <= row["top_weight"] < 1.0


class TestConvergenceSweep:
    def test_guard_rejects_large_n(self):
        cfg = make_config(n_list=(2, 8), n_max=12)
        with pytest.raises(ValueError, match="truncation guard"):
            cfg.validate_for_sweep()

    def test_guard_rejects_dim_cap(self):
        cfg = ExperimentConfig(
            grid=GRID,
            n_modes=6,
            n_list=(2,),
            t_final=0.01,
            dt=1e-3,
            potential=soft_ball(1.0, 0.5),
            n_max=20,
            dim_cap=1000,
        )
        with pytest.raises(ValueError, match="cap"):
            cfg.validate_for_sweep()

    def test_time_zero_free_kernel_distances_below_floor(self):
        cfg = make_config(v0=0.0, t_final=0.0, n_list=(2, 4))
        report = convergence_sweep(cfg)
        for row in report.rows:
            assert row["trace_dist"] < 1e-8
        assert report.alpha is None

    def test_interacting_sweep_structure(self):
        cfg = make_config(t_final=0.02)
        report = convergence_sweep(cfg)
        assert {row["N"] for row in report.rows} == {2, 4}
        assert report.alpha is not None
        assert report.projection_error < 1e-10  # uniform field stays in span


class TestChiDiagnostic:
    def test_vacuum_expectation(self):
        cfg = make_config()
        ctx = SweepContext(cfg)
        value = chi_hypothesis_expectation(ctx.basis.vacuum(), ctx.hamiltonian(2), 2)
        assert abs(value - 1.0) < 1e-12  # N + N^2/N + H all vanish on the vacuum


class TestSectorGroundEnergies:
    def test_bounds_and_trend(self):
        cfg = make_config(n_max=8)
        ctx = SweepContext(cfg)
        rows = sector_ground_energy_scan([2, 4, 6], cfg, context=ctx)
        for row in rows:
            # V >= 0 and kinetic >= 0 give E_N >= 0; the condensed product
            # state is an exact variational upper bound
            assert row["ground_energy"] >= 0.0
            assert row["ground_energy"] <= row["hartree_energy"] + 1e-12
            assert row["correlation_gain"] > 0.0
        per = [row["per_particle"] for row in rows]
        assert per[0] < per[1] < per[2]

    def test_free_sector_energies_vanish(self):
        cfg = make_config(v0=0.0, n_max=6)
        rows = sector_ground_energy_scan([2, 3], cfg)
        for row in rows:
            assert abs(row["ground_energy"]) < 1e-12  # condensate in the zero mode


class TestSixModeEnvelope:
    def test_sweep_runs_at_six_modes(self):
        # the largest supported mode count; keeps conjugate pairs adjacent
        cfg = ExperimentConfig(
            grid=GRID,
            n_modes=6,
            n_list=(2,),
            t_final=0.01,
            dt=1e-3,
            potential=soft_ball(16.0, 0.5),
            n_max=8,
            phi0_kind="uniform",
        )
        report = convergence_sweep(cfg)
        assert len(report.rows) == 1
        assert np.isfinite(report.rows[0]["trace_dist"])
        assert report.rows[0]["norm_loss"] < 0.05
