"""Command-line entry point wiring TOML configs to the computational modules.

Exit codes: 0 success, 1 validation failure (bad arguments, bad config),
2 numerical-gate failure (an identity check or truncation gate tripped).
Every file-writing run drops `config.normalized.toml` beside its outputs;
re-running on that echo reproduces the artifacts byte for byte.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .checks import run_identity_suite
from .config import (
    ConfigError,
    build_experiment_config,
    build_grid,
    build_potential,
    build_trap_field,
    load_config,
    normalized_toml,
    parse_potential_spec,
)
from .experiments import (
    SweepContext,
    convergence_sweep,
    fluctuation_number_derivative,
    log_runtimes,
)
from .gp import GPParams, build_convolution_kernel, evolve_gp, evolve_modified_gp, field_distance, gp_energy, gp_ground_state
from .grids import WaveField
from .scattering import solve_zero_energy
from .serialize import dumps_json, ensure_dir, write_csv, write_field_dump, write_json

VALIDATION_EXIT = 1
GATE_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit 2; contract says 1
        self.print_usage(sys.stderr)
        raise SystemExit(VALIDATION_EXIT)


def _write_normalized(cfg, out_dir):
    with open(os.path.join(out_dir, "config.normalized.toml"), "w") as fh:
        fh.write(normalized_toml(cfg))


def _phi0_from_cfg(cfg, grid, modes_hint=None):
    from .fock import ModeBasis

    kind = cfg["gp"]["phi0"]
    if kind == "uniform":
        return WaveField.constant(grid)
    modes = modes_hint or ModeBasis.plane_waves(grid, max(3, cfg["fock"]["modes"]))
    c = np.zeros(modes.n_modes, dtype=complex)
    c[0] = 1.0
    c[1] = c[2] = cfg["gp"]["eps"]
    return WaveField.normalized(grid, modes.embed(c))


def _resolve_a0(cfg):
    if cfg["gp"].get("a0") is not None:
        return cfg["gp"]["a0"], None
    potential = build_potential(cfg)
    sol = solve_zero_energy(
        potential,
        r_max=cfg["scattering"]["r_max_factor"] * potential.r_support,
        steps=cfg["scattering"]["steps"],
    )
    return sol.a0, sol


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_scattering(args) -> int:
    potential = parse_potential_spec(args.potential)
    r_max = args.r_max if args.r_max is not None else 10.0 * potential.r_support
    sol = solve_zero_energy(potential, r_max=r_max, steps=args.steps)
    report = {
        "a0": sol.a0,
        "a0_integral": sol.a0_integral,
        "tail_fit_residual": sol.tail_fit_residual,
        "r_max": sol.r_max,
        "steps": args.steps,
    }
    sys.stdout.write(dumps_json(report))
    if args.out:
        ensure_dir(args.out)
        write_json(os.path.join(args.out, "report.json"), report)
        with open(os.path.join(args.out, "config.normalized.toml"), "w") as fh:
            fh.write("[scattering_cli]\n")
            fh.write(f'potential = "{args.potential}"\n')
            fh.write(f"r_max = {r_max!r}\n")
            fh.write(f"steps = {args.steps}\n")
    return 0


def _cmd_gp(args) -> int:
    cfg = load_config(args.config)
    out = ensure_dir(args.out)
    grid = build_grid(cfg)
    a0, _ = _resolve_a0(cfg)
    params = GPParams(a0=a0)
    phi = _phi0_from_cfg(cfg, grid)
    dt, t_final, every = cfg["gp"]["dt"], cfg["gp"]["t_final"], cfg["gp"]["record_every"]
    rows = [(0.0, phi.norm(), gp_energy(phi, params))]
    steps = int(round(t_final / dt))
    current = phi
    for step in range(1, steps + 1):
        current = evolve_gp(current, params, dt, dt)
        if step % every == 0 or step == steps:
            rows.append((step * dt, current.norm(), gp_energy(current, params)))
    write_csv(os.path.join(out, "series.csv"), ["t", "norm", "energy"], rows)
    write_json(
        os.path.join(out, "report.json"),
        {"a0": a0, "t_final": t_final, "dt": dt, "final_energy": rows[-1][2], "final_norm": rows[-1][1]},
    )
    if args.dump_field:
        write_field_dump(
            current, os.path.join(out, "field.bin"), os.path.join(out, "field.json")
        )
    _write_normalized(cfg, out)
    return 0


def _cmd_ground_state(args) -> int:
    cfg = load_config(args.config)
    out = ensure_dir(args.out)
    grid = build_grid(cfg)
    a0, _ = _resolve_a0(cfg)
    trap = build_trap_field(cfg, grid)
    params = GPParams(a0=a0, trap=trap)
    phi = gp_ground_state(params, grid, tol=cfg["gp"]["tol"])
    energy = gp_energy(phi, params)
    write_csv(
        os.path.join(out, "series.csv"),
        ["t", "norm", "energy"],
        [(0.0, phi.norm(), energy)],
    )
    write_json(os.path.join(out, "report.json"), {"a0": a0, "energy": energy})
    if args.dump_field:
        write_field_dump(phi, os.path.join(out, "field.bin"), os.path.join(out, "field.json"))
    _write_normalized(cfg, out)
    return 0


def _cmd_modgp_compare(args) -> int:
    cfg = load_config(args.config)
    out = ensure_dir(args.out)
    grid = build_grid(cfg)
    potential = build_potential(cfg)
    sol = solve_zero_energy(
        potential,
        r_max=cfg["scattering"]["r_max_factor"] * potential.r_support,
        steps=cfg["scattering"]["steps"],
    )
    params = GPParams(a0=sol.a0)
    phi0 = _phi0_from_cfg(cfg, grid)
    dt, t_final, every = cfg["gp"]["dt"], cfg["gp"]["t_final"], cfg["gp"]["record_every"]
    steps = int(round(t_final / dt))
    summary = {"a0": sol.a0, "t_final": t_final, "distances": {}, "kernel_integrals": {}}
    for n in cfg["sweep"]["n_list"]:
        kernel = build_convolution_kernel(grid, sol, potential, n)
        gp_t, mod_t = phi0, phi0
        rows = [(0.0, mod_t.norm(), gp_energy(mod_t, params), 0.0)]
        for step in range(1, steps + 1):
            gp_t = evolve_gp(gp_t, params, dt, dt)
            mod_t = evolve_modified_gp(mod_t, kernel, dt, dt)
            if step % every == 0 or step == steps:
                rows.append(
                    (step * dt, mod_t.norm(), gp_energy(mod_t, params), field_distance(mod_t, gp_t))
                )
        write_csv(
            os.path.join(out, f"modgp_compare_N{n}.csv"),
            ["t", "norm", "energy", "distance"],
            rows,
        )
        summary["distances"][str(n)] = rows[-1][3]
        summary["kernel_integrals"][str(n)] = kernel.integral
    write_json(os.path.join(out, "report.json"), summary)
    _write_normalized(cfg, out)
    return 0


def _cmd_fock_check(args) -> int:
    results = run_identity_suite(
        n_modes=args.modes, n_max=args.nmax, g_norm2=args.g_norm2, hs_norm=args.hs_norm
    )
    payload = [r.as_dict() for r in results]
    sys.stdout.write(dumps_json(payload))
    if args.out:
        ensure_dir(args.out)
        write_json(os.path.join(args.out, "report.json"), payload)
        with open(os.path.join(args.out, "config.normalized.toml"), "w") as fh:
            fh.write("[fock_check_cli]\n")
            fh.write(f"modes = {args.modes}\n")
            fh.write(f"n_max = {args.nmax}\n")
            fh.write(f"g_norm2 = {args.g_norm2!r}\n")
            fh.write(f"hs_norm = {args.hs_norm!r}\n")
    return 0 if all(r.passed for r in results) else GATE_EXIT


def _sweep_outputs(cfg, out, report, extra=None):
    rows = [
        (r["N"], r["t"], r["trace_dist"], r["fluct_number"], r["energy_residual"], r["norm_loss"])
        for r in report.rows
    ]
    write_csv(
        os.path.join(out, "sweep.csv"),
        ["N", "t", "trace_dist", "fluct_number", "energy_residual", "norm_loss"],
        rows,
    )
    payload = {
        "alpha": report.alpha,
        "fit_residual": report.fit_residual,
        "projection_error": report.projection_error,
        "rows": report.rows,
    }
    if extra:
        payload.update(extra)
    write_json(os.path.join(out, "report.json"), payload)
    _write_normalized(cfg, out)


def _cmd_converge(args) -> int:
    cfg = load_config(args.config)
    out = ensure_dir(args.out)
    exp_cfg = build_experiment_config(cfg)
    report = convergence_sweep(exp_cfg)
    log_runtimes(report)
    _sweep_outputs(cfg, out, report)
    return 0


def _cmd_fluctuations(args) -> int:
    cfg = load_config(args.config)
    out = ensure_dir(args.out)
    exp_cfg = build_experiment_config(cfg)
    ctx = SweepContext(exp_cfg)
    report = convergence_sweep(exp_cfg, context=ctx)
    log_runtimes(report)
    derivatives = {
        str(n): fluctuation_number_derivative(exp_cfg.t_final, exp_cfg, n, context=ctx)
        for n in exp_cfg.n_list
    }
    _sweep_outputs(cfg, out, report, extra={"derivatives": derivatives})
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="gplab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"gplab {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("scattering", help="zero-energy scattering length of a potential")
    p.add_argument("--potential", required=True, help="soft_ball:V0,R, gaussian:V0,SIGMA, or a CSV path")
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--steps", type=int, default=20000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_scattering)

    for name, func, needs_dump in [
        ("gp", _cmd_gp, True),
        ("ground-state", _cmd_ground_state, True),
        ("modgp-compare", _cmd_modgp_compare, False),
        ("converge", _cmd_converge, False),
        ("fluctuations", _cmd_fluctuations, False),
    ]:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML configuration file")
        p.add_argument("--out", required=True, help="output directory")
        if needs_dump:
            p.add_argument("--dump-field", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("fock-check", help="operator identity suites")
    p.add_argument("--modes", type=int, default=2)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--g-norm2", type=float, default=0.05)
    p.add_argument("--hs-norm", type=float, default=0.05)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_fock_check)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return VALIDATION_EXIT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return VALIDATION_EXIT
    try:
        return args.func(args)
    except ConfigError as exc:
        for line in exc.errors:
            print(f"config error: {line}", file=sys.stderr)
        return VALIDATION_EXIT
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_EXIT
    except RuntimeError as exc:
        print(f"numerical gate: {exc}", file=sys.stderr)
        return GATE_EXIT


if __name__ == "__main__":
    sys.exit(main())
