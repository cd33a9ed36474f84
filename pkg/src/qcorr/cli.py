"""Batch command-line interface.

Exit codes: 0 ok, 1 selftest failure, 2 bad arguments or state invariants,
3 unparseable input, 4 oracle disagrees with the closed form.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import acceptance, highdim, oracle, sweep
from .correlations import NORMALIZATIONS, audit_theorems, full_report, geometric_discord
from .dynamics import audit_trajectory, evolve, trajectory, werner_decay
from .errors import ParseError, QCorrError
from .states import NAMED_STATES, DensityMatrix, load_state, named_state

EXIT_OK, EXIT_SELFTEST, EXIT_INVALID, EXIT_PARSE, EXIT_ORACLE = 0, 1, 2, 3, 4
SIG_DIGITS = 9
TABULAR_DEFAULT = {"sweep": "csv", "trajectory": "csv"}


class UsageError(Exception):
    pass


def round_sig(value):
    """Round floats (recursively) to 9 significant digits for output."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return float(f"{v:.{SIG_DIGITS}g}") if math.isfinite(v) else v
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        return {k: round_sig(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_sig(v) for v in value]
    return value


def emit_json(payload, out) -> None:
    out.write(json.dumps(round_sig(payload), indent=2) + "\n")


def emit_csv(columns: Sequence[str], rows: Sequence[dict], out) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row.get(k) is None else round_sig(row.get(k))) for k in columns})
    out.write(buf.getvalue())


def _default_seed() -> int:
    env = os.environ.get("QCORR_SEED")
    try:
        return int(env) if env is not None else 0
    except ValueError:
        return 0


# ---------------------------------------------------------------------------
# State selection


def _add_state_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--input", metavar="FILE", help="JSON state file")
    src.add_argument("--state", choices=NAMED_STATES, help="named state")
    p.add_argument("--p", type=float, help="two-qubit Werner parameter")
    p.add_argument("--f", type=float, help="isotropic singlet fraction")
    p.add_argument("--w", type=float, help="d x d Werner antisymmetric weight")
    p.add_argument("--d", type=int, default=2, help="local dimension (default 2)")


def _resolve_state(args) -> tuple[DensityMatrix, dict]:
    if args.input:
        return load_state(args.input), {"source": args.input}
    needed = {"werner": "p", "isotropic": "f", "werner-d": "w"}.get(args.state)
    if needed and getattr(args, needed) is None:
        raise UsageError(f"--state {args.state} needs --{needed}")
    rho = named_state(args.state, p=args.p, f=args.f, w=args.w, d=args.d)
    meta = {"state": args.state}
    if needed:
        meta[needed] = getattr(args, needed)
    if args.state in ("bell", "mixed", "isotropic", "werner-d"):
        meta["d"] = args.d
    return rho, meta


# ---------------------------------------------------------------------------
# Commands


def cmd_analyze(args, out) -> int:
    rho, meta = _resolve_state(args)
    if rho.dims == (2, 2):
        report = full_report(rho)
        audit = audit_theorems(report)
        if args.format == "csv":
            emit_csv(sweep.CSV_COLUMNS, [sweep.report_row(args.p, report)], out)
        else:
            emit_json({**meta, "dims": list(rho.dims), **report.as_dict(), "audit": audit.__dict__}, out)
        return EXIT_OK
    if args.state == "isotropic":
        payload = highdim.isotropic_report(args.d, args.f)
    elif args.state == "werner-d":
        payload = highdim.werner_report(args.d, args.w)
    else:
        payload = highdim.generic_report(rho)
    if args.format == "csv":
        emit_csv(list(payload), [payload], out)
    else:
        emit_json({**meta, "dims": list(rho.dims), **payload}, out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    if args.state == "werner":
        result = sweep.werner_sweep(args.start, args.stop, args.steps)
    elif args.state == "isotropic":
        result = sweep.isotropic_sweep(args.d, args.start, args.stop, args.steps)
    else:
        result = sweep.werner_d_sweep(args.d, args.start, args.stop, args.steps)
    if args.format == "csv":
        emit_csv(result.columns, result.rows + result.annotations, out)
    else:
        emit_json({"rows": result.rows, "thresholds": result.thresholds}, out)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    rho, meta = _resolve_state(args)
    res = oracle.discord_bruteforce(rho, args.normalization, args.restarts, args.seed)
    closed = geometric_discord(rho, args.normalization)
    gap = abs(res.value - closed)
    bp = res.best_params
    emit_json(
        {
            **meta,
            "normalization": args.normalization,
            "oracle": res.value,
            "closed_form": closed,
            "gap": gap,
            "converged": res.converged,
            "restarts": res.restarts_used,
            "seed": args.seed,
            "best_params": {"theta": bp.theta, "phi": bp.phi, "p1": bp.p1, "r1": bp.r1.tolist(), "r2": bp.r2.tolist()},
        },
        out,
    )
    return EXIT_ORACLE if gap > args.gap_tol else EXIT_OK


def cmd_isotropic(args, out) -> int:
    emit_json(highdim.isotropic_report(args.d, args.f), out)
    return EXIT_OK


def cmd_werner(args, out) -> int:
    emit_json(highdim.werner_report(args.d, args.w), out)
    return EXIT_OK


def cmd_trajectory(args, out) -> int:
    channel = werner_decay(args.p0, args.gamma)
    traj = trajectory(channel, args.tmax, args.steps)
    audit = audit_trajectory(traj)
    rows = [sweep.report_row(float(t), r) for t, r in zip(traj.times, traj.reports)]
    crossings = {"bell": traj.bell_crossing_time, "useful": traj.usefulness_crossing_time}
    if args.format == "csv":
        for name, t in crossings.items():
            if t is not None:
                rows.append(sweep.report_row(t, full_report(evolve(channel, t)), f"crossing:{name}"))
        emit_csv(sweep.CSV_COLUMNS, rows, out)
    else:
        emit_json(
            {
                "p0": args.p0,
                "gamma": args.gamma,
                "bell_crossing_time": traj.bell_crossing_time,
                "usefulness_crossing_time": traj.usefulness_crossing_time,
                "audit_violations": audit.violations,
                "rows": rows,
            },
            out,
        )
    return EXIT_OK


def cmd_witness_plan(args, out) -> int:
    dec = highdim.witness_local_decomposition(highdim.make_witness(args.family, args.d))
    terms = [{"a": a, "b": b, "coefficient": c} for a, b, c in dec.nonzero_terms]
    if args.format == "csv":
        emit_csv(("a", "b", "coefficient"), terms, out)
    else:
        emit_json(
            {
                "family": args.family,
                "d": args.d,
                "basis": dec.basis_name,
                "residual": dec.residual,
                "nonzero_terms": len(terms),
                "settings": dec.settings,
                "terms": terms,
            },
            out,
        )
    return EXIT_OK


def cmd_selftest(args, out) -> int:
    def show(res):
        out.write(res.line() + "\n")
        out.flush()

    results = acceptance.run_all(show)
    failed = [r.number for r in results if not r.passed]
    out.write(f"{len(results) - len(failed)}/{len(results)} criteria passed\n")
    return EXIT_SELFTEST if failed else EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcorr", description="Bipartite quantum-correlation toolkit")
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="report every measure of one state")
    _add_state_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="sweep a state family over a parameter range")
    p.add_argument("--state", choices=("werner", "isotropic", "werner-d"), required=True)
    p.add_argument("--param", choices=("p", "f", "w"), help="swept parameter (implied by --state)")
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", dest="stop", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--d", type=int, default=2)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="brute-force discord versus the closed form")
    _add_state_args(p)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--normalization", choices=tuple(NORMALIZATIONS), default="paper")
    p.add_argument("--gap-tol", type=float, default=1e-3)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("isotropic", help="d x d isotropic-state bounds")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--f", type=float, required=True)
    p.set_defaults(func=cmd_isotropic)

    p = sub.add_parser("werner", help="d x d Werner-state bounds")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--w", type=float, required=True)
    p.set_defaults(func=cmd_werner)

    p = sub.add_parser("trajectory", help="Werner-decay trajectory with regime crossings")
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("witness-plan", help="local generator decomposition of a witness")
    p.add_argument("--family", choices=("wf", "wx"), required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_witness_plan)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.set_defaults(func=cmd_selftest)

    for action in sub.choices.values():
        # --format is accepted after the subcommand too
        action.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.format is None:
            args.format = TABULAR_DEFAULT.get(args.command, "json")
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"qcorr: error: {exc}\n")
        return EXIT_INVALID
    except ParseError as exc:
        sys.stderr.write(f"qcorr: parse error: {exc}\n")
        return EXIT_PARSE
    except QCorrError as exc:
        kind = getattr(exc, "kind", None)
        label = "invariant violation" if kind else type(exc).__name__
        sys.stderr.write(f"qcorr: {label}: {exc}\n")
        return EXIT_INVALID
    except ValueError as exc:
        sys.stderr.write(f"qcorr: error: {exc}\n")
        return EXIT_INVALID


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
