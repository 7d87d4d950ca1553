"""Command-line front end.

Subcommands:

* ``figures``  capacity curves C(r), C_ea(r) and their ratio (CSV or JSON)
* ``verify``   randomized structural checks; exit status 0 iff all pass
* ``example1`` two-dimensional signal channel: closed form vs optimizer vs chi_n
* ``example2`` one-dimensional signal channel: closed forms, E1 sweep, gaps

Settings come from flags, then an optional JSON ``--config`` file, then
defaults. Exit codes: 0 pass, 1 property failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import capacity as cap
from .channel import apply, example1_channel, example2_channel, minimal_dilation, weak_complementary
from .errors import NonConvergence, UncertaintyViolation
from .gaussian import entropy, g_function, make_state
from .sampling import random_cq_channel, random_state
from .symplectic import SymplecticSpace, symplectic_eigenvalues

OUTDIR_ENV = "GAUSSIAN_CQ_OUTDIR"

DEFAULTS = {
    "r_min": 1e-2,
    "r_max": 1e2,
    "points": 200,
    "log": True,
    "E": 1.0,
    "N": 0.0,
    "sigma2": 1.0,
    "seed": 12345,
    "tol": 1e-9,
    "out": None,
    "format": "csv",
    "channels": 200,
    "states": 50,
    "n": 20,
    "inject_fault": False,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    r_min: float
    r_max: float
    points: int
    log: bool
    E: float
    N: float
    sigma2: float
    seed: int
    tol: float
    out: str | None
    format: str
    channels: int
    states: int
    n: int
    inject_fault: bool

    def __post_init__(self):
        if self.points < 2:
            raise ValueError("points must be >= 2")
        if self.r_min <= 0 or self.r_max <= self.r_min:
            raise ValueError("need 0 < r_min < r_max")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")


@dataclass(frozen=True)
class CurveRow:
    r: float
    C: float
    C_ea: float
    ratio: float


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- figures

def curve_rows(config: RunConfig) -> list[CurveRow]:
    if config.log:
        grid = np.geomspace(config.r_min, config.r_max, config.points)
    else:
        grid = np.linspace(config.r_min, config.r_max, config.points)
    rows = []
    for r in grid:
        C, C_ea = cap.example2_capacities(1.0, float(r))
        rows.append(CurveRow(float(r), C, C_ea, C_ea / C))
    return rows


def format_rows(rows: list[CurveRow], fmt: str) -> str:
    if fmt == "json":
        data = [{"r": float(f"{row.r:.12g}"), "C_nats": float(f"{row.C:.12g}"),
                 "Cea_nats": float(f"{row.C_ea:.12g}"), "ratio": float(f"{row.ratio:.12g}")}
                for row in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "C_nats", "Cea_nats", "ratio"])
    for row in rows:
        writer.writerow([f"{v:.12g}" for v in (row.r, row.C, row.C_ea, row.ratio)])
    return buf.getvalue()


def _output_path(config: RunConfig, default_name: str) -> str | None:
    if config.out:
        return config.out
    outdir = os.environ.get(OUTDIR_ENV)
    return os.path.join(outdir, default_name) if outdir else None


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def cmd_figures(config: RunConfig) -> int:
    rows = curve_rows(config)
    bad = [r for r in rows if not (r.C_ea >= r.C >= 0)]
    _emit(format_rows(rows, config.format),
          _output_path(config, f"figures.{config.format}"))
    return 1 if bad else 0


# ---------------------------------------------------------------- verify

def _check(name, passed, **details):
    return {"name": name, "passed": bool(passed), **details}


def verify_report(config: RunConfig) -> dict:
    rng = np.random.default_rng(config.seed)
    tol = config.tol
    checks = []

    if config.inject_fault:
        try:
            make_state(None, 0.1 * np.eye(2), SymplecticSpace.canonical(1), tol)
            checks.append(_check("injected_fault", False, error="fault not detected"))
        except UncertaintyViolation as exc:
            checks.append(_check("injected_fault", False,
                                 error=f"UncertaintyViolation: {exc}"))

    t0 = time.perf_counter()
    channels = [random_cq_channel(rng) for _ in range(config.channels)]
    sym_res, det_res, nil_res = [], [], []
    dilations = []
    for ch in channels:
        dil = minimal_dilation(ch, tol)
        dilations.append(dil)
        T = dil.T
        sym_res.append(float(np.abs(T.T @ dil.form_in.form @ T - dil.form_out.form).max()))
        det_res.append(float(abs(abs(np.linalg.det(dil.L)) - 1.0)))
        d_a, d_b = ch.input.form, ch.output.form
        Nm = ch.K @ np.linalg.solve(d_b, ch.K.T @ d_a)
        nil_res.append(float(np.abs(Nm @ Nm).max()))
    checks.append(_check("dilation_symplectic", max(sym_res) <= tol, max_residual=max(sym_res)))
    checks.append(_check("dilation_det_L", max(det_res) <= tol, max_residual=max(det_res),
                         per_channel=det_res))
    checks.append(_check("nilpotent_N", max(nil_res) <= tol, max_residual=max(nil_res)))
    checks.append(_check("dilation_runtime", time.perf_counter() - t0 < 10.0,
                         seconds=time.perf_counter() - t0))

    worst_gain, worst_excess = np.inf, -np.inf
    for ch, dil in zip(channels, dilations):
        comp = weak_complementary(dil, tol)
        for _ in range(config.states):
            rho = random_state(ch.input, rng)
            worst_gain = min(worst_gain, entropy(apply(comp, rho)) - entropy(rho))
    checks.append(_check("entropy_gain_nonnegative", worst_gain >= -1e-8, min_gain=worst_gain))

    for _ in range(config.channels):
        ch = random_cq_channel(rng, minimal_noise=True)
        dil = minimal_dilation(ch, tol)
        for _ in range(max(1, config.states // 5)):
            rho = random_state(ch.input, rng)
            gap = cap.mutual_information(ch, dil, rho) - entropy(apply(ch, rho))
            worst_excess = max(worst_excess, gap)
    checks.append(_check("mutual_info_le_output_entropy", worst_excess <= 1e-8,
                         max_excess=worst_excess))

    eig_res = 0.0
    for E in np.geomspace(0.1, 10, 10):
        for E1 in np.geomspace(1 / (4 * E), 100, 10):
            nu = symplectic_eigenvalues(cap.environment_covariance(E, E1),
                                        SymplecticSpace.canonical(2))
            eig_res = max(eig_res, float(np.abs(nu - cap.environment_eigenvalues(E, E1)).max()))
    checks.append(_check("environment_eigenvalues", eig_res <= tol, max_residual=eig_res))

    ch1 = example1_channel(0.0)
    opt_res = 0.0
    try:
        for E in (0.1, 1.0, 10.0):
            res = cap.max_output_entropy(ch1, cap.EnergyConstraint(np.eye(2) / 2, E),
                                         seed=config.seed)
            opt_res = max(opt_res, abs(res.value - g_function(E)))
        checks.append(_check("optimizer_example1", opt_res <= 1e-4, max_residual=opt_res))
    except NonConvergence as exc:
        checks.append(_check("optimizer_example1", False, error=str(exc),
                             diagnostics=exc.diagnostics))

    return {"seed": config.seed, "passed": all(c["passed"] for c in checks), "checks": checks}


def cmd_verify(config: RunConfig) -> int:
    report = verify_report(config)
    _emit(json.dumps(report, indent=1, default=float) + "\n", _output_path(config, "verify.json"))
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------- examples

def example1_report(config: RunConfig) -> dict:
    """Closed forms, optimizer and chi_n trace for the two-dimensional signal channel.

    With N quanta of noise the maximal output entropy is g(N + E) and the
    chi_n sequence tends to the unassisted capacity g(N + E) - g(N).
    """
    E, N = config.E, config.N
    if E <= 0:
        raise UsageError("E must be positive")
    ch = example1_channel(N)
    constraint = cap.EnergyConstraint(np.eye(2) / 2, E)
    capacity = cap.example1_capacity(N, E)
    max_entropy = g_function(N + E)
    res = cap.max_output_entropy(ch, constraint, seed=config.seed)
    beta0 = cap.beta_from_mu(ch, res.optimal_mu)
    trace = []
    for n in range(1, config.n + 1):
        try:
            step = cap.chi_sequence(ch, constraint, beta0, n)
        except cap.NonPositiveKn:
            continue
        trace.append({"n": n, "eps_n": step.eps_n, "k_n": step.k_n, "chi_n": step.chi_n,
                      "delta": step.chi_n - capacity})
    return {
        "E": E, "N": N,
        "C_unassisted": capacity,
        "g_E": g_function(E),
        "max_output_entropy_closed_form": max_entropy,
        "optimizer_value": res.value,
        "optimizer_delta": res.value - max_entropy,
        "optimizer_residual": res.residual,
        "chi_trace": trace,
    }


def example2_report(config: RunConfig) -> dict:
    E, s2 = config.E, config.sigma2
    if E <= 0 or s2 <= 0:
        raise UsageError("E and sigma2 must be positive")
    C, C_ea = cap.example2_capacities(s2, E)
    ch = example2_channel(s2)
    grid = cap.default_e1_grid(E)
    sweep = cap.cea_sweep(ch, E, grid)
    return {
        "E": E, "sigma2": s2, "r": E / s2, "C": C, "C_ea": C_ea, "ratio": C_ea / C,
        "sweep": [{"E1": e1, "I": i, "delta1": cap.delta1(E, s2, e1)} for e1, i in sweep],
        "environment_delta": [{"E1": float(e1), "delta": cap.delta_environment(E, float(e1))}
                           for e1 in grid[::6]],
    }


def cmd_example1(config: RunConfig) -> int:
    _emit(json.dumps(example1_report(config), indent=1) + "\n", _output_path(config, "example1.json"))
    return 0


def cmd_example2(config: RunConfig) -> int:
    _emit(json.dumps(example2_report(config), indent=1) + "\n", _output_path(config, "example2.json"))
    return 0


COMMANDS = {
    "figures": cmd_figures,
    "verify": cmd_verify,
    "example1": cmd_example1,
    "example2": cmd_example2,
}


# ---------------------------------------------------------------- parsing

HELP = {
    "figures": "capacity curves C(r), C_ea(r) and their ratio",
    "verify": "numerical checks on random channels (JSON report)",
    "example1": "two-mode example: optimizer and chi_n trace",
    "example2": "one-mode example: capacities and E1 sweep",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with default settings")
    common.add_argument("--r-min", dest="r_min", type=float, help="figures: smallest SNR r")
    common.add_argument("--r-max", dest="r_max", type=float, help="figures: largest SNR r")
    common.add_argument("--points", type=int, help="figures: number of grid points")
    common.add_argument("--log", action=argparse.BooleanOptionalAction,
                        help="figures: geometric (default) or linear grid")
    common.add_argument("--E", dest="E", type=float, help="input energy bound")
    common.add_argument("--N", dest="N", type=float, help="example1: thermal noise level")
    common.add_argument("--sigma2", type=float, help="example2: noise variance")
    common.add_argument("--seed", type=int, help="verify: RNG seed")
    common.add_argument("--tol", type=float, help="verify: numerical tolerance")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], help="figures: output format")
    common.add_argument("--channels", type=int, help="verify: number of random channels")
    common.add_argument("--states", type=int, help="verify: random states per channel")
    common.add_argument("--n", dest="n", type=int, help="example1: longest chi_n index")
    common.add_argument("--inject-fault", dest="inject_fault", action="store_true",
                        help="verify: include an invalid covariance to exercise failure")

    parser = argparse.ArgumentParser(prog="gaussian-cq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    settings = dict(DEFAULTS)
    flags = vars(args).copy()
    path = flags.pop("config", None)
    if path:
        with open(path, encoding="utf-8") as fh:
            from_file = json.load(fh)
        unknown = set(from_file) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        settings.update(from_file)
    settings.update(flags)
    return RunConfig(**settings)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        return COMMANDS[config.command](config)
    except UncertaintyViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonConvergence as exc:
        print(f"error: {exc} {exc.diagnostics}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
