"""Command line front end.

Subcommands: ``build`` (construct and save a sequence), ``check`` (one
condition against a sequence file or a weight spec), ``scan-gamma``
(growth-index bracket), ``verify`` (a named scenario), ``sample``
(weight values as delimited rows), and ``report`` (the full scenario
sweep with tables and figures).

Exit codes follow the verdict states: 0 for Holds / pass, 1 for Fails,
2 for Inconclusive and for usage or construction errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import conditions
from .errors import GrowthLabError, ParameterError
from .indices import estimate_gamma_omega
from .scenarios import full_report, render_text, run_scenario, scenario_ids
from .sequences import LOG2, BlockSequence, Family, build_sequence
from .verdicts import EXIT_CODE, Verdict, VerdictState, Window, fmt_float
from .weights import WeightFn, associated, parse_weight

#: worker knob read from the environment; the numerics are single
#: process, so anything above one is accepted and simply recorded
ENV_THREADS = "GROWTHLAB_THREADS"

_SEQ_CONDITIONS = ("mg", "nq", "beta3")
_WEIGHT_CONDITIONS = ("om1", "om2", "om3", "om4", "om5", "omnq", "omsnq",
                      "om7", "subadd", "falsify")


def thread_budget() -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(value, 1)


def _load_sequence(path: str) -> BlockSequence:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            record = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read sequence file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"not a sequence file: {exc}") from exc
    return BlockSequence.from_json_dict(record)


_SPEC_HEADS = ("power", "logpow", "explogsq", "assoc", "powcomp", "kappa")


def _resolve_target(target: str) -> tuple[BlockSequence | None, WeightFn]:
    """A target is a sequence file or a weight spec; sequence files also
    provide their associated weight for function-side probes."""
    head = target.partition(":")[0]
    if head not in _SPEC_HEADS and \
            (os.path.exists(target) or target.endswith(".json")):
        seq = _load_sequence(target)
        return seq, associated(seq)
    return None, parse_weight(target, load_sequence=_load_sequence)


def _auto_window(omega: WeightFn, t_min: float | None, t_max: float | None,
                 default: tuple[float, float],
                 headroom_log: float = 0.0) -> Window:
    lo = t_min if t_min is not None else default[0]
    if t_max is not None:
        return Window(lo, t_max)
    if omega.domain_log_max is not None:
        # a stored range is finite for a reason: use all of it, so the
        # tail decade reflects the construction's late behaviour
        top = min(omega.domain_log_max - headroom_log, 708.0)
        hi = math.exp(top) * 0.999
    else:
        hi = default[1]
    return Window(lo, hi)


def _emit_verdict(verdict: Verdict, fmt: str) -> int:
    if fmt == "json":
        print(json.dumps(verdict.to_json_dict(), indent=2, sort_keys=True))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["condition", "state"])
        writer.writerow([verdict.condition, verdict.state.value])
        sys.stdout.write(buf.getvalue())
    else:
        print(f"{verdict.condition}: {verdict.state.value}")
        if verdict.witness:
            parts = ", ".join(f"{k}={_short(v)}"
                              for k, v in verdict.witness.items())
            print(f"  witness: {parts}")
    return verdict.exit_code


def _short(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, tuple)) and len(value) > 6:
        return f"[{len(value)} values]"
    return str(value)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_build(args: argparse.Namespace) -> int:
    params: dict[str, Any] = {}
    if args.A is not None:
        params["A"] = args.A
    if args.A0 is not None:
        params["A0"] = args.A0
    if args.s is not None:
        params["s"] = args.s
    if args.jmax is not None:
        params["j_max"] = args.jmax
    if args.kmax is not None:
        params["k_max"] = args.kmax
    if args.ladder_steps:
        params["ladder_steps"] = [int(x) for x in
                                  args.ladder_steps.split(",")]
    if args.family != Family.GEVREY.value:
        params.setdefault("j_max", 8)
    try:
        seq = build_sequence(args.family, **params)
    except KeyError as exc:
        raise ParameterError(
            f"family '{args.family}' needs parameter {exc}") from exc
    if args.out:
        Path(args.out).write_text(seq.to_json(), encoding="utf-8")
    table = [cp.to_json_dict() for cp in seq.checkpoint_table()]
    if args.format == "json":
        doc = seq.to_json_dict() if not args.out else \
            {"written": args.out, "checkpoints": table}
        print(json.dumps(doc, indent=2))
    elif args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["level", "ladder_start", "ladder_end",
                         "ladder_steps", "ramp_steps", "log_mu_start",
                         "log_mu_end"])
        for row in table:
            writer.writerow([row["level"], row["ladder_start"],
                             row["ladder_end"], row["ladder_steps"],
                             row["ramp_steps"], row["log_mu_start"],
                             row["log_mu_end"]])
    else:
        print(f"{seq.family.value}: {len(seq.blocks)} blocks, "
              f"k_max = {seq.k_max}")
        if table:
            print(f"{'level':>5} {'ladder_start':>14} {'ladder_end':>14} "
                  f"{'depth':>5} {'ramp':>4} {'log_mu_start':>13} "
                  f"{'log_mu_end':>13}")
        for row in table:
            print(f"{row['level']:>5} {row['ladder_start']:>14} "
                  f"{row['ladder_end']:>14} {row['ladder_steps']:>5} "
                  f"{row['ramp_steps']:>4} "
                  f"{float(row['log_mu_start']):>13.6f} "
                  f"{float(row['log_mu_end']):>13.6f}")
        if args.out:
            print(f"written to {args.out}")
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    cond = args.condition
    seq, omega = _resolve_target(args.target)
    if cond in _SEQ_CONDITIONS:
        if seq is None:
            raise ParameterError(
                f"condition '{cond}' needs a sequence file target")
        if cond == "mg":
            verdict, _ = conditions.check_mg(seq)
        elif cond == "nq":
            verdict, _ = conditions.check_nq(seq)
        else:
            verdict, _ = conditions.check_beta3(seq, args.Q)
        return _emit_verdict(verdict, args.format)
    if cond not in _WEIGHT_CONDITIONS:
        raise ParameterError(f"unknown condition '{cond}'")
    if cond == "omnq":
        verdict = conditions.probe_omnq(omega)
        return _emit_verdict(verdict, args.format)
    headroom = LOG2 if cond in ("subadd", "falsify") else 0.0
    default = (1.0e2, 1.0e14) if cond in ("subadd", "falsify") \
        else (1.0e3, 1.0e9)
    window = _auto_window(omega, args.tmin, args.tmax, default, headroom)
    if cond == "om1":
        verdict, _ = conditions.probe_om1(omega, window)
    elif cond in ("om2", "om3", "om5"):
        verdict = conditions.probe_ratio_condition(omega, cond, window)
    elif cond == "om4":
        verdict = conditions.probe_convexity(omega, window)
    elif cond == "omsnq":
        verdict = conditions.probe_omsnq(omega, window)
    elif cond == "om7":
        if args.tmax is None:
            window = _auto_window(omega, args.tmin, None,
                                  (1.0e3, 1.0e9),
                                  headroom_log=0.5 *
                                  (omega.domain_log_max or 0.0))
        verdict = conditions.probe_square_condition(omega, window)
    elif cond == "subadd":
        verdict = conditions.probe_subadditivity(omega, args.q, window)
    else:
        q_list = [float(x) for x in args.q_list.split(",")]
        verdict = conditions.falsify_almost_subadditivity(omega, q_list,
                                                          window)
    return _emit_verdict(verdict, args.format)


def _cmd_scan_gamma(args: argparse.Namespace) -> int:
    _, omega = _resolve_target(args.weight)
    window = _auto_window(omega, args.tmin, args.tmax, (1.0e3, 1.0e9))
    est = estimate_gamma_omega(omega, window, margin=args.margin)
    if args.format == "json":
        print(json.dumps(est.to_json_dict(), indent=2, sort_keys=True))
    else:
        if est.sentinel_infinite:
            print(f"{omega.name}: index is +inf "
                  f"({est.stats.get('square_condition', 'scan ceiling')})")
        elif not est.conclusive:
            print(f"{omega.name}: inconclusive "
                  f"({est.stats.get('reason', 'no exponent confirmed')})")
        else:
            print(f"{omega.name}: gamma in "
                  f"[{est.gamma_lower:.6g}, {est.gamma_upper:.6g}]")
            if est.K_witnesses:
                last = est.K_witnesses[-1]
                print(f"  witness: K = {last['K']:.6g} at "
                      f"gamma = {last['gamma']:.6g}")
    return 0 if est.conclusive else 2


def _cmd_verify(args: argparse.Namespace) -> int:
    params: dict[str, Any] = {}
    if args.A is not None:
        params["A"] = args.A
    if args.A_prime is not None:
        params["A_prime"] = args.A_prime
    if args.A0 is not None:
        params["A0"] = args.A0
    if args.jmax is not None:
        params["j_max"] = args.jmax
    if args.s is not None:
        params["s"] = args.s
    if args.a:
        params["a_list"] = [float(x) for x in args.a]
    if args.q0:
        params["q0_list"] = [float(x) for x in args.q0]
    report = run_scenario(args.scenario, **params)
    if args.format == "json":
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def _cmd_sample(args: argparse.Namespace) -> int:
    _, omega = _resolve_target(args.weight)
    window = _auto_window(omega, args.tmin, args.tmax, (1.0, 1.0e9))
    xs = np.linspace(window.log_min, window.log_max, args.samples)
    vals = omega.eval_log_many(xs)
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out \
        else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["t", "omega_t"])
        for x, v in zip(xs, vals):
            writer.writerow([fmt_float(math.exp(x)), fmt_float(float(v))])
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    params: dict[str, Any] = {}
    if args.A is not None:
        params["A"] = args.A
    if args.jmax is not None:
        params["j_max"] = args.jmax
    reports = full_report(**params)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = [r.to_json_dict() for r in reports]
    (out_dir / "report.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    with open(out_dir / "report.csv", "w", encoding="utf-8",
              newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "description", "expected", "observed",
                         "residual", "pass"])
        for rep in reports:
            for a in rep.assertions:
                writer.writerow([rep.scenario, a.description, a.expected,
                                 a.observed,
                                 "" if a.residual is None
                                 else fmt_float(a.residual),
                                 "pass" if a.passed else "fail"])
    written = [out_dir / "report.json", out_dir / "report.csv"]
    if not args.no_figures:
        from .figures import report_figures
        written += report_figures(out_dir, A=args.A if args.A is not None
                                  else 3.0,
                                  j_max=args.jmax if args.jmax is not None
                                  else 8)
    print(render_text(reports))
    print()
    for path in written:
        print(f"wrote {path}")
    if any(r.skipped_reason is None and not r.passed for r in reports):
        return 1
    if any(r.skipped_reason is not None for r in reports):
        return 2
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_format(p: argparse.ArgumentParser, default: str = "text") -> None:
    p.add_argument("--format", choices=("text", "json", "csv"),
                   default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growthlab",
        description="weight sequences, weight functions, and growth "
                    "indices: construction, condition checks, and "
                    "verification scenarios")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a sequence and print its "
                                     "checkpoint table")
    p.add_argument("--family", required=True,
                   choices=[f.value for f in Family])
    p.add_argument("--A", type=float)
    p.add_argument("--A0", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--jmax", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--ladder-steps", dest="ladder_steps",
                   help="comma separated ladder depths overriding the "
                        "defaults")
    p.add_argument("--out", help="write the sequence as JSON here")
    _add_format(p)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("check", help="run one condition check")
    p.add_argument("--condition", required=True,
                   choices=_SEQ_CONDITIONS + _WEIGHT_CONDITIONS)
    p.add_argument("target", help="sequence JSON file or weight spec")
    p.add_argument("--Q", type=int, default=4,
                   help="multiplier for the beta3 check")
    p.add_argument("--q", type=float, default=1.0,
                   help="defect parameter for the subadd probe")
    p.add_argument("--q-list", dest="q_list", default="1.05,1.5",
                   help="comma separated q values for the falsifier")
    p.add_argument("--tmin", type=float)
    p.add_argument("--tmax", type=float)
    _add_format(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("scan-gamma", help="bracket the growth index")
    p.add_argument("--weight", required=True,
                   help="weight spec, e.g. power:0.5 or assoc:seq.json")
    p.add_argument("--tmin", type=float)
    p.add_argument("--tmax", type=float)
    p.add_argument("--margin", type=float, default=1.0e-3)
    _add_format(p)
    p.set_defaults(func=_cmd_scan_gamma)

    p = sub.add_parser("verify", help="run one verification scenario")
    p.add_argument("scenario", choices=scenario_ids())
    p.add_argument("--A", type=float)
    p.add_argument("--A-prime", dest="A_prime", type=float)
    p.add_argument("--A0", type=float)
    p.add_argument("--jmax", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--a", action="append",
                   help="composition exponent (repeatable)")
    p.add_argument("--q0", action="append",
                   help="generalized threshold (repeatable)")
    _add_format(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sample", help="weight values as t,omega_t rows")
    p.add_argument("--weight", required=True)
    p.add_argument("--tmin", type=float)
    p.add_argument("--tmax", type=float)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("report", help="full scenario sweep with tables "
                                      "and figures")
    p.add_argument("--out-dir", dest="out_dir", default="report")
    p.add_argument("--A", type=float)
    p.add_argument("--jmax", type=int)
    p.add_argument("--no-figures", dest="no_figures", action="store_true")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    thread_budget()  # validated once so a bad value never surprises later
    handler: Callable[[argparse.Namespace], int] = args.func
    try:
        return handler(args)
    except GrowthLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
