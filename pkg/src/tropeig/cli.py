"""Command-line interface: ``tropeig {roots,solve,bench,verify-bound}``.

Exit codes: 0 success, 2 usage or parse error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import InvalidPolynomialError, SolverFailure
from .experiments import (
    PRESETS,
    ExperimentConfig,
    aggregate_reports,
    run_experiment,
    run_verify_bound,
    summarize,
    verify_one,
    write_csv,
)
from .matpoly import PencilFormatError, polynomial_from_json
from .scaled_solver import KINDS, solve
from .tropical import TropicalPoly, tropical_roots

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("tropeig")


class UsageError(Exception):
    pass


def _floats(text: str, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError(f"{what}: no values given")
    return vals


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated integers, got {text!r}") from None


def _num(x: float) -> str:
    return f"{x:.15g}"


def cmd_roots(args) -> int:
    gammas = _floats(args.gamma, "--gamma")
    if len(gammas) < 2:
        raise UsageError("--gamma: need at least 2 coefficients")
    try:
        tr = tropical_roots(TropicalPoly(gammas))
    except InvalidPolynomialError as exc:
        raise UsageError(f"--gamma: {exc}") from None
    if args.json:
        print(json.dumps({
            "roots": [{"value": v, "multiplicity": m} for v, m in tr.roots],
            "zero_multiplicity": tr.zero_multiplicity,
            "infinite_multiplicity": tr.infinite_multiplicity,
        }))
        return EXIT_OK
    parts = []
    if tr.zero_multiplicity:
        parts.append(f"0 (×{tr.zero_multiplicity})")
    parts += [f"{_num(v)} (×{m})" for v, m in tr.roots]
    if tr.infinite_multiplicity:
        parts.append(f"inf (×{tr.infinite_multiplicity})")
    print(", ".join(parts))
    return EXIT_OK


def _pair_json(p) -> dict:
    return {
        "value": [p.alpha.real, p.alpha.imag] if p.is_finite else "inf",
        "group": p.group_index,
        "source_root": p.source_root,
        "eta": p.eta,
        "vector": [[z.real, z.imag] for z in p.vector],
    }


def cmd_solve(args) -> int:
    try:
        obj = json.loads(Path(args.input).read_text())
    except OSError as exc:
        raise UsageError(f"--input: cannot read {args.input}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"--input: invalid JSON ({exc})") from None
    try:
        P = polynomial_from_json(obj)
    except PencilFormatError as exc:
        raise UsageError(f"malformed pencil, field {exc}") from None
    if args.scaling == "fanlin" and P.degree != 2:
        raise UsageError("--scaling fanlin requires d = 2")

    code, partial = EXIT_OK, False
    try:
        pairs = solve(P, args.scaling)
    except SolverFailure as exc:
        log.error("%s", exc)
        pairs, partial, code = list(exc.partial or []), True, EXIT_NUMERIC
    out = {
        "n": P.n,
        "d": P.degree,
        "scaling": args.scaling,
        "partial": partial,
        "eigenpairs": [_pair_json(p) for p in pairs],
    }
    text = json.dumps(out, indent=1)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return code


def _bench_config(args) -> ExperimentConfig:
    strategies = args.scaling.split(",") if args.scaling else None
    blocks = _ints(args.blocks, "--blocks") if args.blocks else None
    try:
        if args.preset:
            norms = _floats(args.norms, "--norms") if args.norms else None
            return ExperimentConfig.from_preset(
                args.preset, n=args.n, d=args.d, target_norms=norms, trials=args.trials,
                seed=args.seed, strategies=strategies, eigenvector_blocks=blocks)
        if args.n is None or args.d is None or args.norms is None:
            raise UsageError("bench needs --preset or all of --n, --d, --norms")
        if strategies is None:
            strategies = list(KINDS) if args.d == 2 else ["none", "tropical"]
        if blocks is None:
            blocks = [0, 1] if args.d >= 2 else [0]
        return ExperimentConfig(
            n=args.n, d=args.d, target_norms=_floats(args.norms, "--norms"),
            trials=args.trials or 1, seed=args.seed or 0,
            strategies=tuple(strategies), eigenvector_blocks=tuple(blocks))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _print_summary(summary: dict) -> None:
    cols = [k for k in summary["rank_means"][0] if k.startswith("eta_")]
    print(f"n={summary['n']} d={summary['d']} trials={summary['trials']} seed={summary['seed']} "
          f"failed={summary['failed_trials']}")
    print("mean over trials per eigenvalue rank (ascending modulus):")
    print(" ".join(f"{c:>12}" for c in ["rank", "|lambda|"] + cols))

    def f(x):
        return f"{x:12.3e}" if isinstance(x, float) else f"{'NA':>12}"

    for e in summary["rank_means"]:
        print(f"{e['eig_rank']:>12} " + " ".join(f(e[c]) for c in ["modulus"] + cols))
    for label, ser in summary["series"].items():
        print(f"per-trial series, {label}-modulus eigenvalue (rank {ser['eig_rank']}):")
        for c in cols:
            print(f"  {c}: " + " ".join(f(x).strip() for x in ser[c]))


def cmd_bench(args) -> int:
    cfg = _bench_config(args)
    result = run_experiment(cfg, jobs=args.jobs)
    if args.csv:
        write_csv(result, args.csv)
    summary = summarize(result)
    if args.json:
        print(json.dumps(summary))
    else:
        _print_summary(summary)
    if len(result.failures) == cfg.trials:
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_verify_bound(args) -> int:
    if args.input:
        try:
            P = polynomial_from_json(json.loads(Path(args.input).read_text()))
        except OSError as exc:
            raise UsageError(f"--input: cannot read {args.input}: {exc.strerror}") from None
        except (json.JSONDecodeError, PencilFormatError) as exc:
            raise UsageError(f"--input: {exc}") from None
        report = aggregate_reports([verify_one(P)])
    else:
        if args.n is None or args.norms is None:
            raise UsageError("verify-bound needs --input or both --n and --norms")
        norms = _floats(args.norms, "--norms")
        if len(norms) != 3:
            raise UsageError("--norms: verify-bound needs exactly 3 norms (d = 2)")
        if args.d not in (None, 2):
            raise UsageError("--d: verify-bound only supports d = 2")
        try:
            report = run_verify_bound(args.n, norms, args.trials or 1, args.seed or 0,
                                      a2=args.a2, a2_cond=args.a2_cond)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    print(json.dumps(report, indent=None if args.compact else 1))
    return EXIT_NUMERIC if report["failed"] else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropeig", description="Polynomial eigenvalues with tropical scaling.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("roots", help="tropical roots of a max-times polynomial")
    r.add_argument("--gamma", required=True, help="comma-separated nonnegative coefficients")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_roots)

    s = sub.add_parser("solve", help="eigenpairs of a matrix polynomial given as JSON")
    s.add_argument("--input", required=True)
    s.add_argument("--scaling", choices=KINDS, default="tropical")
    s.add_argument("--output", help="output path (default: stdout)")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="backward-error experiment on random pencils")
    b.add_argument("--preset", choices=sorted(PRESETS))
    b.add_argument("--n", type=int)
    b.add_argument("--d", type=int)
    b.add_argument("--norms", help="comma-separated target norms ||A_0||,...,||A_d||")
    b.add_argument("--trials", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--scaling", help="comma-separated subset of none,fanlin,tropical")
    b.add_argument("--blocks", help="eigenvector blocks to evaluate, subset of 0,1")
    b.add_argument("--csv", help="write per-eigenvalue rows to this CSV file")
    b.add_argument("--json", action="store_true", help="print the summary as JSON")
    b.add_argument("--jobs", type=int, default=1, help="trials run concurrently")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify-bound", help="check the quadratic eigenvalue splitting bound")
    v.add_argument("--input", help="single quadratic as pencil JSON")
    v.add_argument("--n", type=int)
    v.add_argument("--d", type=int)
    v.add_argument("--norms", help="||A_0||,||A_1||,||A_2||")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--a2", choices=("unitary", "gaussian"), default="unitary",
                   help="model for A_2 (scaled to its target norm)")
    v.add_argument("--a2-cond", type=float, help="draw A_2 with exactly this condition number")
    v.add_argument("--compact", action="store_true", help="single-line JSON")
    v.set_defaults(func=cmd_verify_bound)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"tropeig: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverFailure as exc:
        print(f"tropeig: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
