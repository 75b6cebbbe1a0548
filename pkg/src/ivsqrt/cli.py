"""Command-line interface: ``ivsqrt {solve,figure,scan,verify}``.

Data go to stdout or ``--output`` as CSV (``#`` metadata lines, one header
line, values with 17 significant digits) or JSON.  Exit codes: 0 success,
1 verification failure, 2 invalid input, 3 solver failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import metadata
from typing import Optional, Sequence

import numpy as np

from . import acceptance
from . import closed_form as cf
from .errors import ConventionError, DomainError, IvsqrtError
from .field import (
    FieldConfig,
    c1_normalization,
    crossing_time,
    detuning,
    dimensionless_params,
    lz_parameter,
)
from .oracle import IntegrationSpec, integrate_two_state
from .specfun import EvalPolicy

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return "nan"
    return format(float(v), ".17g")


def _json_value(v):
    if isinstance(v, str):
        return v
    v = float(v)
    return v if math.isfinite(v) else None


def write_table(table: Table, fmt: str, out) -> None:
    if fmt == "json":
        doc = {"meta": table.meta, "columns": table.columns,
               "rows": [[_json_value(v) for v in row] for row in table.rows]}
        json.dump(doc, out, indent=1, sort_keys=True)
        out.write("\n")
        return
    for key in sorted(table.meta):
        out.write(f"# {key}: {table.meta[key]}\n")
    out.write(",".join(table.columns) + "\n")
    for row in table.rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


def _meta(command: str, **kw) -> dict:
    meta = {"tool": f"ivsqrt {_version()}", "command": command}
    meta.update({k: v for k, v in kw.items() if v is not None})
    return meta


def _time_grid(t_max: float, dt: float) -> np.ndarray:
    if not (dt > 0 and t_max > 0):
        raise DomainError("need t_max > 0 and dt_out > 0")
    n = int(math.floor(t_max / dt + 1e-9))
    times = dt * np.arange(n + 1)
    if times[-1] < t_max * (1 - 1e-12):
        times = np.append(times, t_max)
    return times


def _span(text: str, log: bool = False) -> np.ndarray:
    """'v' -> [v]; 'lo:hi:n' -> n points (geometric when log)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)
    except ValueError:
        pass
    raise DomainError(f"bad grid spec {text!r}; expected 'value' or 'lo:hi:n'")


# ---------------------------------------------------------------------------

def cmd_solve(args) -> Table:
    cfg = FieldConfig(args.u0, args.d0, args.d1)
    initial = cf.AmplitudePair(complex(args.a1), complex(args.a2))
    times = _time_grid(args.t_max, args.dt_out)
    policy = EvalPolicy.from_env()
    cols = ["t", "re_a1", "im_a1", "re_a2", "im_a2", "p1", "p2", "norm"]
    analytic = numeric = None
    if args.method in ("analytic", "both"):
        coeffs = cf.solve_ivp_coefficients(initial, cfg, policy)
        analytic = [cf.amplitudes(float(t), coeffs, cfg, policy) for t in times]
    if args.method in ("ode", "both"):
        spec = IntegrationSpec(0.0, float(times[-1]), rel_tol=args.rel_tol, output_grid=times)
        numeric = integrate_two_state(cfg, initial, spec).states
    primary = analytic if analytic is not None else numeric
    if args.method == "both":
        cols.append("abs_diff_a2")
    table = Table(cols, meta=_meta("solve", U0=cfg.U0, Delta0=cfg.Delta0, Delta1=cfg.Delta1,
                                    a1=str(initial.a1), a2=str(initial.a2), t_max=args.t_max,
                                    dt_out=args.dt_out, method=args.method,
                                    rel_tol=args.rel_tol))
    for i, t in enumerate(times):
        s = primary[i]
        row = [t, s.a1.real, s.a1.imag, s.a2.real, s.a2.imag, abs(s.a1) ** 2, abs(s.a2) ** 2,
               s.norm]
        if args.method == "both":
            row.append(abs(analytic[i].a2 - numeric[i].a2))
        table.rows.append(row)
    return table


def _figure1(args) -> Table:
    t_max = args.t_max or 10.0
    times = np.geomspace(1e-2, t_max, args.points)
    table = Table(["series", "Delta0", "Delta1", "t", "value"],
                  meta=_meta("figure", figure=1, U0=1.0, Delta0=4.0, t_max=t_max))
    for t in times:
        table.rows.append(["U", 4.0, -5.0, t, 1.0])
    for d1 in (5.0, 3.0, 1.0, 0.0, -1.0, -3.0, -5.0):
        cfg = FieldConfig(1.0, 4.0, d1)
        for t in times:
            table.rows.append(["detuning", 4.0, d1, t, detuning(float(t), cfg)])
        t0 = crossing_time(cfg)
        if t0 is not None:
            table.rows.append(["crossing", 4.0, d1, t0, 0.0])
    return table


def _scatter_cell(cell):
    u0, d0, d1 = cell
    cfg = FieldConfig(u0, d0, d1)
    nu0, xi0, _, _ = dimensionless_params(cfg)
    t0 = crossing_time(cfg)
    lz = lz_parameter(cfg) if d0 != 0 else math.nan
    if d0 > 0:
        sc = cf.scattering_a2_at_zero(cfg, policy=EvalPolicy.from_env())
        c1, p1, p2 = c1_normalization(cfg), sc.p1, sc.p2
    else:
        c1 = p1 = p2 = math.nan
    return [u0, d0, d1, math.nan if t0 is None else t0, lz, nu0, xi0, c1, p1, p2]


SCAN_COLUMNS = ["U0", "Delta0", "Delta1", "t0", "Lambda", "nu0", "xi0", "C1", "p1_0", "p2_0"]


def _run_cells(cells, jobs: int):
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scatter_cell, cells, chunksize=16))
    return [_scatter_cell(c) for c in cells]


def _figure2(args) -> Table:
    d0s = np.linspace(args.d0_min, args.d0_max, args.points)
    d1s = np.linspace(args.d1_min, args.d1_max, args.points)
    if d0s[0] <= 0:
        raise ConventionError("figure 2 needs Delta0 > 0")
    cells = [(1.0, float(a), float(b)) for a in d0s for b in d1s]
    rows = _run_cells(cells, args.jobs)
    table = Table(["Delta0", "Delta1", "p1_0"],
                  meta=_meta("figure", figure=2, U0=1.0,
                             Delta0_range=f"{args.d0_min}:{args.d0_max}",
                             Delta1_range=f"{args.d1_min}:{args.d1_max}", points=args.points))
    table.rows = [[r[1], r[2], r[8]] for r in rows]
    return table


def _figure3(args) -> Table:
    d0, d1 = 4.0, -5.0
    table = Table(["U0", "nu0", "xi0", "nu0_small_U0", "nu0_large_U0", "xi0_small_U0",
                   "xi0_large_U0"],
                  meta=_meta("figure", figure=3, Delta0=d0, Delta1=d1))
    for u in np.geomspace(1e-2, 1e3, args.points):
        nu0, xi0, _, _ = dimensionless_params(FieldConfig(float(u), d0, d1))
        table.rows.append([u, nu0, xi0, 2 * d1**2 / d0**3 * u**2, d1**2 / 4 / u,
                           d1 / math.sqrt(2 * d0), d0 * d1 / 4 / u**1.5])
    return table


def _figure4(args) -> Table:
    d0, d1 = 4.0, -5.0
    table = Table(["U0", "p2_exact", "p2_weak_field", "p2_strong_field"],
                  meta=_meta("figure", figure=4, Delta0=d0, Delta1=d1))
    policy = EvalPolicy.from_env()
    for u in np.geomspace(1e-2, 1e3, args.points):
        cfg = FieldConfig(float(u), d0, d1)
        table.rows.append([u, cf.scattering_a2_at_zero(cfg, policy=policy).p2,
                           abs(cf.approx_weak_field(cfg)) ** 2,
                           abs(cf.approx_strong_field(cfg)) ** 2])
    return table


FIGURES = {1: _figure1, 2: _figure2, 3: _figure3, 4: _figure4}


def cmd_figure(args) -> Table:
    if args.figure_id not in FIGURES:
        raise DomainError(f"figure id must be one of {sorted(FIGURES)}")
    return FIGURES[args.figure_id](args)


def cmd_scan(args) -> Table:
    u0s = _span(args.u0, log=args.log_u0)
    d0s, d1s = _span(args.d0), _span(args.d1)
    cells = [(float(u), float(a), float(b)) for u in u0s for a in d0s for b in d1s]
    for c in cells:
        FieldConfig(*c)
    table = Table(SCAN_COLUMNS, meta=_meta("scan", U0=args.u0, Delta0=args.d0, Delta1=args.d1,
                                           log_u0=args.log_u0))
    table.rows = _run_cells(cells, args.jobs)
    return table


def cmd_verify(args, out) -> int:
    if args.list:
        for key, (title, _) in acceptance.CRITERIA.items():
            out.write(f"{key}\t{title}\n")
        return EXIT_OK
    results = acceptance.run(args.only or None)
    if args.json:
        json.dump({"passed": all(r.passed for r in results),
                   "criteria": [r.to_dict() for r in results]}, out, indent=1)
        out.write("\n")
    else:
        for r in results:
            out.write(f"{'PASS' if r.passed else 'FAIL'} {r.key}: {r.title}\n")
            for c in r.checks:
                out.write(c.line() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ivsqrt", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=_version())
    sub = p.add_subparsers(dest="command", required=True)

    def add_output(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("-o", "--output", help="output file (default stdout)")

    s = sub.add_parser("solve", help="amplitudes on a time grid")
    s.add_argument("--u0", type=float, required=True)
    s.add_argument("--d0", type=float, required=True)
    s.add_argument("--d1", type=float, required=True)
    s.add_argument("--a1", default="1", help="initial a1 (complex literal, e.g. 0.6 or 0.8j)")
    s.add_argument("--a2", default="0", help="initial a2")
    s.add_argument("--t-max", type=float, default=20.0)
    s.add_argument("--dt-out", type=float, default=0.01)
    s.add_argument("--method", choices=("analytic", "ode", "both"), default="analytic")
    s.add_argument("--rel-tol", type=float, default=1e-10, help="integrator tolerance")
    add_output(s)

    f = sub.add_parser("figure", help="data behind one of the four figures")
    f.add_argument("figure_id", type=int)
    f.add_argument("--points", type=int, default=101)
    f.add_argument("--t-max", type=float, default=None, help="figure 1 time range")
    f.add_argument("--d0-min", type=float, default=0.25)
    f.add_argument("--d0-max", type=float, default=8.0)
    f.add_argument("--d1-min", type=float, default=-8.0)
    f.add_argument("--d1-max", type=float, default=8.0)
    f.add_argument("--jobs", type=int, default=1)
    add_output(f)

    sc = sub.add_parser("scan", help="derived and scattering quantities over a grid")
    sc.add_argument("--u0", default="1", help="value or lo:hi:n")
    sc.add_argument("--d0", default="4")
    sc.add_argument("--d1", default="-5")
    sc.add_argument("--log-u0", action="store_true", help="geometric spacing for U0")
    sc.add_argument("--jobs", type=int, default=1)
    add_output(sc)

    v = sub.add_parser("verify", help="run the acceptance criteria")
    v.add_argument("--list", action="store_true", help="list criteria without running")
    v.add_argument("--only", nargs="+", choices=list(acceptance.CRITERIA))
    v.add_argument("--json", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args, sys.stdout)
        handler = {"solve": cmd_solve, "figure": cmd_figure, "scan": cmd_scan}[args.command]
        table = handler(args)
    except (DomainError, ConventionError, ValueError) as exc:
        print(f"ivsqrt: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (IvsqrtError, ArithmeticError, RuntimeError) as exc:
        print(f"ivsqrt: solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_table(table, args.format, fh)
    else:
        write_table(table, args.format, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
