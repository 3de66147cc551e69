"""Command-line front end: potential tables, single points, sweeps, resonances, self-check."""

from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .analytic import Branch, match_at_origin
from .errors import ParameterError, ScatteringError
from .oracle import integrate_and_extract
from .potential import HulthenParams, decay_cutoff, evaluate
from .sweep import (
    DEFAULT_ENERGY_RANGE,
    DEFAULT_POINTS,
    DEFAULT_STRENGTH_RANGE,
    SweepSpec,
    SweepVariable,
    find_resonances,
    run_sweep,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_COMPUTE = 2

SWEEP_HEADER = ("independent", "R", "T", "unitarity_defect")
ORACLE_COLUMNS = ("T_oracle", "oracle_difference")

UNITARITY_LIMIT = 1e-8
BRANCH_LIMIT = 1e-10
ORACLE_LIMIT = 1e-5


class Subcommand(str, enum.Enum):
    POTENTIAL = "potential"
    TRANSMIT = "transmit"
    SWEEP_ENERGY = "sweep-energy"
    SWEEP_V0 = "sweep-v0"
    RESONANCES = "resonances"
    VERIFY = "verify"


class OutputFormat(str, enum.Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class RunConfig:
    subcommand: Subcommand
    pot: HulthenParams
    energy: float | None = None
    sweep: SweepSpec | None = None
    output_path: str | None = None
    format: OutputFormat = OutputFormat.CSV
    branch: Branch = Branch.PLUS
    oracle: bool = False
    x_max: float | None = None
    points: int = 201
    prominence: float = 0.1
    oracle_points: int = 5
    workers: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--v0", type=float, default=4.0, help="potential strength (default 4)")
    common.add_argument("--a", type=float, default=1.0, help="inverse diffuseness (default 1)")
    common.add_argument("--q", type=float, default=0.9, help="shape parameter in (0, 1) (default 0.9)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default="csv")
    common.add_argument("--output", help="write to this file instead of stdout")

    physics = argparse.ArgumentParser(add_help=False)
    physics.add_argument("--branch", choices=[b.value for b in Branch], default="plus")

    def energy_range(p):
        p.add_argument("--e-min", type=float, default=DEFAULT_ENERGY_RANGE[0])
        p.add_argument("--e-max", type=float, default=DEFAULT_ENERGY_RANGE[1])

    def workers(p):
        p.add_argument("--workers", type=int, default=1, help="processes for sweep points")

    parser = _Parser(prog="hulthen", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("potential", parents=[common], help="tabulate V(x)")
    p.add_argument("--x-max", type=float, default=None, help="half-width of the table (default 10/a)")
    p.add_argument("--points", type=int, default=201)

    p = sub.add_parser("transmit", parents=[common, physics], help="R and T at one energy")
    p.add_argument("--e", type=float, required=True)
    p.add_argument("--oracle", action="store_true", help="also integrate the ODE directly")

    p = sub.add_parser("sweep-energy", parents=[common, physics], help="T versus E")
    energy_range(p)
    p.add_argument("--points", type=int, default=DEFAULT_POINTS)
    p.add_argument("--oracle", action="store_true")
    workers(p)

    p = sub.add_parser("sweep-v0", parents=[common, physics], help="T versus V0 at fixed E")
    p.add_argument("--e", type=float, default=2.0)
    p.add_argument("--v0-min", type=float, default=DEFAULT_STRENGTH_RANGE[0])
    p.add_argument("--v0-max", type=float, default=DEFAULT_STRENGTH_RANGE[1])
    p.add_argument("--points", type=int, default=DEFAULT_POINTS)
    p.add_argument("--oracle", action="store_true")
    workers(p)

    p = sub.add_parser("resonances", parents=[common, physics], help="locate transmission peaks")
    p.add_argument("--over", choices=["energy", "v0"], default="energy")
    energy_range(p)
    p.add_argument("--e", type=float, default=2.0, help="fixed energy when --over v0")
    p.add_argument("--v0-min", type=float, default=DEFAULT_STRENGTH_RANGE[0])
    p.add_argument("--v0-max", type=float, default=DEFAULT_STRENGTH_RANGE[1])
    p.add_argument("--points", type=int, default=DEFAULT_POINTS)
    p.add_argument("--prominence", type=float, default=0.1)
    workers(p)

    p = sub.add_parser("verify", parents=[common], help="unitarity, branch and oracle self-check")
    energy_range(p)
    p.add_argument("--points", type=int, default=200, help="energies in the unitarity grid")
    p.add_argument("--oracle-points", type=int, default=5, help="energies checked against the ODE")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    """Validate flags into a RunConfig; raises ParameterError on bad combinations."""
    cmd = Subcommand(ns.subcommand)
    pot = HulthenParams(ns.v0, ns.a, ns.q)
    branch = Branch(getattr(ns, "branch", "plus"))
    points = getattr(ns, "points", 201)
    if points < 2:
        raise ParameterError(f"--points must be at least 2, got {points}")
    sweep = None
    energy = getattr(ns, "e", None)
    if cmd is Subcommand.TRANSMIT and energy * energy <= 1.0:
        raise ParameterError(f"--e must satisfy E^2 > 1, got {energy}")
    by_energy = cmd in (Subcommand.SWEEP_ENERGY, Subcommand.VERIFY) or (
        cmd is Subcommand.RESONANCES and ns.over == "energy"
    )
    if by_energy:
        sweep = SweepSpec(SweepVariable.ENERGY, ns.e_min, ns.e_max, points, pot, branch=branch)
    elif cmd in (Subcommand.SWEEP_V0, Subcommand.RESONANCES):
        sweep = SweepSpec(
            SweepVariable.STRENGTH, ns.v0_min, ns.v0_max, points, pot, energy=energy, branch=branch
        )
    x_max = getattr(ns, "x_max", None)
    if x_max is not None and not x_max > 0:
        raise ParameterError(f"--x-max must be positive, got {x_max}")
    oracle_points = getattr(ns, "oracle_points", 5)
    if oracle_points < 1:
        raise ParameterError(f"--oracle-points must be at least 1, got {oracle_points}")
    workers = getattr(ns, "workers", 1)
    if workers < 1:
        raise ParameterError(f"--workers must be at least 1, got {workers}")
    prominence = getattr(ns, "prominence", 0.1)
    if not 0 < prominence < 1:
        raise ParameterError(f"--prominence must lie in (0, 1), got {prominence}")
    return RunConfig(
        subcommand=cmd,
        pot=pot,
        energy=energy,
        sweep=sweep,
        output_path=ns.output,
        format=OutputFormat(ns.format),
        branch=branch,
        oracle=getattr(ns, "oracle", False),
        x_max=x_max,
        points=points,
        prominence=prominence,
        oracle_points=oracle_points,
        workers=workers,
    )


# ---------------------------------------------------------------------------
# serialisation


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return "%.17g" % value


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, float, np.floating, np.integer)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def render(config: RunConfig, header, rows, extra_meta=None) -> str:
    if config.format is OutputFormat.CSV:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    meta = {
        "tool": "hulthen",
        "version": __version__,
        "subcommand": config.subcommand.value,
        "v0": config.pot.v0,
        "a": config.pot.a,
        "q": config.pot.q,
        "branch": config.branch.value,
    }
    if config.sweep is not None:
        meta["sweep"] = {
            "variable": config.sweep.variable.value,
            "start": config.sweep.start,
            "stop": config.sweep.stop,
            "points": config.sweep.points,
            "energy": config.sweep.energy,
        }
    elif config.energy is not None:
        meta["energy"] = config.energy
    meta.update(extra_meta or {})
    doc = {"meta": meta, "rows": [dict(zip(header, map(_json_value, r))) for r in rows]}
    return json.dumps(doc, indent=2) + "\n"


def _emit(config: RunConfig, text: str) -> None:
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _potential(config):
    x_max = config.x_max if config.x_max is not None else 10.0 / config.pot.a
    xs = np.linspace(-x_max, x_max, config.points)
    rows = [(float(x), evaluate(config.pot, float(x))) for x in xs]
    return render(config, ("x", "V"), rows), EXIT_OK


def _oracle_row(energy, pot, trans):
    t_ode = integrate_and_extract(energy, pot).trans
    return (t_ode, abs(t_ode - trans))


def _transmit(config):
    sol = match_at_origin(config.energy, config.pot, config.branch)
    header = ("E", "R", "T", "absA", "absB", "unitarity_defect")
    row = (config.energy, sol.refl, sol.trans, abs(sol.ampA), abs(sol.ampB), sol.unitarity_defect)
    if config.oracle:
        header += ORACLE_COLUMNS
        row += _oracle_row(config.energy, config.pot, sol.trans)
    return render(config, header, [row]), EXIT_OK


def _report_failures(table):
    for fail in table.failures:
        print(
            f"warning: skipped {table.spec.variable.value}={fail.independent!r}: {fail.message}",
            file=sys.stderr,
        )


def _point_potential(spec: SweepSpec, value: float):
    if spec.variable is SweepVariable.ENERGY:
        return value, spec.fixed
    return spec.energy, HulthenParams(value, spec.fixed.a, spec.fixed.q)


def _sweep(config):
    table = run_sweep(config.sweep, workers=config.workers)
    _report_failures(table)
    header = SWEEP_HEADER
    rows = [tuple(r) for r in table.rows]
    if config.oracle:
        header += ORACLE_COLUMNS
        out = []
        for r in table.rows:
            if config.sweep.variable is SweepVariable.STRENGTH and r.independent == 0.0:
                out.append(tuple(r) + (1.0, abs(1.0 - r.trans)))
                continue
            energy, pot = _point_potential(config.sweep, r.independent)
            out.append(tuple(r) + _oracle_row(energy, pot, r.trans))
        rows = out
    meta = {"failures": [{"independent": f.independent, "message": f.message} for f in table.failures]}
    return render(config, header, rows, meta), EXIT_OK


def _resonances(config):
    table = run_sweep(config.sweep, workers=config.workers)
    _report_failures(table)
    found = find_resonances(table, config.prominence)
    if found.degenerate:
        print("warning: transmission is flat over the sweep; no peaks", file=sys.stderr)
    header = ("position", "height", "fwhm", "prominence", "reaches_unity")
    rows = [(r.position, r.height, r.fwhm, r.prominence, r.reaches_unity) for r in found]
    return render(config, header, rows, {"degenerate": found.degenerate}), EXIT_OK


def _verify(config):
    pot = config.pot
    energies = [float(e) for e in config.sweep.grid()]
    worst_unitarity = 0.0
    worst_branch = 0.0
    for e in energies:
        plus = match_at_origin(e, pot, Branch.PLUS)
        minus = match_at_origin(e, pot, Branch.MINUS)
        worst_unitarity = max(worst_unitarity, plus.unitarity_defect, minus.unitarity_defect)
        worst_branch = max(worst_branch, abs(plus.trans - minus.trans))
    worst_oracle = 0.0
    picks = np.linspace(0, len(energies) - 1, config.oracle_points).round().astype(int)
    for i in sorted(set(picks.tolist())):
        e = energies[i]
        t_ana = match_at_origin(e, pot).trans
        worst_oracle = max(worst_oracle, abs(integrate_and_extract(e, pot).trans - t_ana))
    checks = [
        ("max |R+T-1|", worst_unitarity, UNITARITY_LIMIT),
        ("max |T_plus - T_minus|", worst_branch, BRANCH_LIMIT),
        ("max |T_analytic - T_ode|", worst_oracle, ORACLE_LIMIT),
    ]
    rows = [(name, value, limit, value <= limit) for name, value, limit in checks]
    status = EXIT_OK if all(r[3] for r in rows) else EXIT_INVALID
    return render(config, ("check", "value", "limit", "pass"), rows), status


_HANDLERS = {
    Subcommand.POTENTIAL: _potential,
    Subcommand.TRANSMIT: _transmit,
    Subcommand.SWEEP_ENERGY: _sweep,
    Subcommand.SWEEP_V0: _sweep,
    Subcommand.RESONANCES: _resonances,
    Subcommand.VERIFY: _verify,
}


def run(config: RunConfig) -> int:
    """Execute one configured command; returns the process exit status."""
    try:
        text, status = _HANDLERS[config.subcommand](config)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ScatteringError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    _emit(config, text)
    return status


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        config = config_from_args(ns)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
