"""Command-line front end.

Exit codes: 0 success, 1 I/O error, 2 validation error (including bad
arguments), 3 internal error.  Data goes to stdout (or ``--out``),
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any

from .analysis import AnalysisReport, analyze, solve_state_comparison
from .exceptions import DiscriminationError, EigensolverError, InfeasibleProjection
from .oracle import OracleSettings, optimize
from .problem_io import load_problem, load_vector, povm_to_json, save_problem
from .simulate import OUTCOMES, simulate
from .strategies import Provenance, verify_povm

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_INTERNAL = 0, 1, 2, 3

_STRATEGIES = {
    "n1": Provenance.N1,
    "n1par": Provenance.N1_PAR,
    "n2": Provenance.N2,
    "n2par": Provenance.N2_PAR,
}


def _g(x: float | None) -> str:
    if x is None:
        return "-"
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return f"{x:.6g}"


def _d5(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.5f}"


def _flatten(d: dict[str, Any], prefix: str = "") -> list[tuple[str, Any]]:
    rows = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            rows.extend(_flatten(v, key + "."))
        elif isinstance(v, list):
            rows.append((key, ";".join(str(x) for x in v)))
        else:
            rows.append((key, v))
    return rows


def _render(data: dict[str, Any], text: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(_flatten(data))
        return buf.getvalue()
    return text


def _emit(out: str, path: str | None) -> None:
    if path:
        Path(path).write_text(out)
    else:
        sys.stdout.write(out)


def _settings(args) -> OracleSettings:
    kw = {}
    if getattr(args, "seed", None) is not None:
        kw["seed"] = args.seed
    if getattr(args, "restarts", None) is not None:
        kw["restarts"] = args.restarts
    if getattr(args, "iters", None) is not None:
        kw["max_iterations"] = args.iters
    return OracleSettings(**kw)


def _report_text(rep: AnalysisReport) -> str:
    s, w, d = rep.stats, rep.window, rep.decomposition
    lines = [
        f"dim {rep.problem.dim}  eta1 {_g(rep.problem.eta1)}  eta2 {_g(rep.problem.eta2)}",
        f"ranks d1 {d.d1}  d2 {d.d2}  d1_par {d.d1_par}  d1_perp {d.d1_perp}"
        f"  d2_par {d.d2_par}  d2_perp {d.d2_perp}",
        f"F {_g(s.F)}",
        f"Tr(P1 rho2) {_g(s.t_p1_r2)}  Tr(P2 rho1) {_g(s.t_p2_r1)}",
        f"Tr(P1par rho2) {_g(s.t_p1par_r2)}  Tr(P2par rho1) {_g(s.t_p2par_r1)}",
        f"Q_N1 {_g(rep.q_n1)}  Q_N1par {_g(rep.q_n1_par)}  Q_N2 {_g(rep.q_n2)}  Q_N2par {_g(rep.q_n2_par)}",
        f"Q0 {_g(rep.q0)}",
        f"window [{_d5(w.lower)}, {_d5(w.upper)}]  sqrt(eta2/eta1) {_d5(w.ratio)}"
        f"  {'inside' if w.contains_ratio else 'outside'}",
        f"special case {rep.special_case.value}",
    ]
    if not rep.discriminable:
        lines.append("indiscriminable  Q 1")
    if rep.optimal is not None:
        lines.append(f"Q_opt {_g(rep.optimal.q)} (certified, {rep.optimal.povm.provenance.value})")
    else:
        lines.append(f"upper bound {_g(rep.upper_bound)} (not certified)")
    if rep.branch:
        lines.append(f"branch {rep.branch}")
    if rep.oracle_result is not None:
        lines.append(f"oracle Q {_g(rep.oracle_result.q)}")
    lines.extend(f"note: {n}" for n in rep.notes)
    return "\n".join(lines) + "\n"


def _report_data(rep: AnalysisReport) -> dict[str, Any]:
    data = rep.to_dict()
    data["q_opt"] = 1.0 if not rep.discriminable else data["optimal_q"]
    return data


def cmd_analyze(args) -> int:
    problem, labels = load_problem(args.path)
    if args.dump_problem:
        save_problem(problem, args.dump_problem, labels)
    rep = analyze(problem, run_oracle=args.oracle, oracle_settings=_settings(args))
    _emit(_render(_report_data(rep), _report_text(rep), args.format), args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    problem, _ = load_problem(args.path)
    res = optimize(problem, settings=_settings(args))
    data = {
        "q": res.q,
        "feasible": res.certified_feasible,
        "iterations": res.iterations_used,
        "gap_bound": res.gap_bound,
    }
    text = (
        f"Q {_g(res.q)}\nfeasible {'yes' if res.certified_feasible else 'no'}\n"
        f"iterations {res.iterations_used}\ngap bound {_g(res.gap_bound)}\n"
    )
    if args.dump_povm:
        Path(args.dump_povm).write_text(json.dumps(povm_to_json(res.povm), indent=1) + "\n")
    _emit(_render(data, text, args.format), args.out)
    return EXIT_OK


def _strategy_povm(problem, name: str, seed: int | None):
    if name in _STRATEGIES:
        rep = analyze(problem, run_oracle=False)
        return rep.strategies[_STRATEGIES[name]]
    if name == "optimal":
        rep = analyze(problem, run_oracle=False)
        if rep.optimal is not None:
            return rep.optimal
        print("no certified optimum; using the oracle", file=sys.stderr)
    settings = OracleSettings() if seed is None else OracleSettings(seed=seed)
    res = optimize(problem, settings=settings)
    return res.povm, res.q


def cmd_simulate(args) -> int:
    problem, _ = load_problem(args.path)
    povm, q = _strategy_povm(problem, args.strategy, args.seed)
    verdict = verify_povm(povm, problem)
    if not verdict.ok:
        print(f"warning: POVM fails verification: {verdict}", file=sys.stderr)
    seed = 0 if args.seed is None else args.seed
    keep = args.trials <= args.show_events
    res = simulate(problem, povm, args.trials, seed, shards=args.shards, keep_events=keep)
    sigma = res.failure_sigma(q)
    data = {
        "strategy": args.strategy,
        "trials": res.trials,
        "seed": res.seed,
        "analytic_q": q,
        "empirical_failure": res.empirical_failure,
        "empirical_error": res.empirical_error,
        "sigma": sigma,
        "counts": {f"true{s}": c for s, c in res.counts.items()},
    }
    lines = []
    if keep:
        lines += [
            f"trial {i}: true {int(t)} outcome {OUTCOMES[int(k)]}"
            for i, (t, k) in enumerate(res.events)
        ]
    lines.append(f"{'true':>5} {'infer-1':>10} {'infer-2':>10} {'inconclusive':>13}")
    for s in (1, 2):
        c = res.counts[s]
        lines.append(f"{s:>5} {c['infer-1']:>10} {c['infer-2']:>10} {c['inconclusive']:>13}")
    lines.append(
        f"failure {_g(res.empirical_failure)}  analytic {_g(q)}  sigma {_g(sigma)}"
        f"  errors {_g(res.empirical_error)}"
    )
    _emit(_render(data, "\n".join(lines) + "\n", args.format), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    psi1, psi2 = load_vector(args.psi1), load_vector(args.psi2)
    rep = solve_state_comparison(
        psi1, psi2, args.p1, run_oracle=args.oracle, oracle_settings=_settings(args)
    )
    _emit(_render(_report_data(rep), _report_text(rep), args.format), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--seed", type=int, default=None, help="random seed")

    p = argparse.ArgumentParser(
        prog="unambiguous", description="Unambiguous discrimination of two mixed states."
    )
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="full analysis of a problem file")
    a.add_argument("path")
    a.add_argument("--oracle", action="store_true", help="also run the numerical optimizer")
    a.add_argument("--dump-problem", metavar="FILE", help="write the validated problem back out")
    a.set_defaults(func=cmd_analyze)

    o = sub.add_parser("optimize", parents=[common], help="numerical optimum")
    o.add_argument("path")
    o.add_argument("--restarts", type=int)
    o.add_argument("--iters", type=int, help="Newton step cap per restart")
    o.add_argument("--dump-povm", metavar="FILE")
    o.set_defaults(func=cmd_optimize)

    s = sub.add_parser("simulate", parents=[common], help="sample measurement outcomes")
    s.add_argument("path")
    s.add_argument(
        "--strategy", choices=(*_STRATEGIES, "optimal", "oracle"), default="optimal"
    )
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--shards", type=int, default=1)
    s.add_argument(
        "--show-events", type=int, default=10, metavar="N",
        help="list individual outcomes when trials <= N",
    )
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("compare", parents=[common], help="optimal comparison of two pure states")
    c.add_argument("--psi1", required=True, metavar="FILE")
    c.add_argument("--psi2", required=True, metavar="FILE")
    c.add_argument("--p1", type=float, required=True, help="prior of psi1")
    c.add_argument("--oracle", action="store_true")
    c.set_defaults(func=cmd_compare)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 with usage on bad arguments
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EigensolverError, InfeasibleProjection) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DiscriminationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
