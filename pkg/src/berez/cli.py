"""
``berez`` command line.

Exit codes: 0 success, 1 identity violation, 2 input error, 3 a genericity or
invertibility precondition failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report as rep
from .errors import InputError
from .supermatrix import Supermatrix
from .verify import FAIL, battery, verify_matrix

EXIT_OK, EXIT_IDENTITY, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be LO:HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="berez", description="Exact Berezinian and trace invariants of even supermatrices.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("invariants", "report s, c, c*, gamma, P and Q"),
        ("ber", "Berezinian by the block formula and/or the trace formula"),
        ("minpoly", "annihilating polynomial and its residual at A"),
        ("verify", "run every identity check (seeded battery if no input)"),
        ("selftest", "verify with c_2 deliberately corrupted; must exit 1"),
    ]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--input", metavar="FILE", required=name not in ("verify", "selftest"),
                        help="supermatrix JSON document")
        sp.add_argument("--max-k", type=int, default=None, help="highest c_k to report")
        sp.add_argument("--method", choices=("classical", "traces", "both"), default="both")
        sp.add_argument("--window", type=_window, default=None, metavar="LO:HI",
                        help="inclusive k-window for c* and gamma (use --window=-3:4 for negative LO)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", metavar="FILE", default=None)
    return parser


def _load(path: str) -> Supermatrix:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None
    return Supermatrix.from_json(doc)


def _emit(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def _report_command(args, A: Supermatrix) -> int:
    if args.command == "invariants":
        keys = rep.INVARIANT_KEYS
    elif args.command == "ber":
        keys = {
            "classical": ("ber_classical",),
            "traces": rep.BER_KEYS[1:],
            "both": rep.BER_KEYS,
        }[args.method]
        if args.method != "classical" and args.max_k is not None and args.max_k < A.p + A.q:
            raise InputError(f"--max-k must be at least p + q = {A.p + A.q} for the trace formula")
    else:
        keys = rep.MINPOLY_KEYS
    report = rep.build_report(A, keys, max_k=args.max_k, window=args.window)
    _emit(rep.dumps(report), args.output)
    for key, reason in report["skipped"].items():
        print(f"berez: {key} skipped: precondition failed: {reason}", file=sys.stderr)
    if report["skipped"]:
        return EXIT_PRECONDITION
    if report.get("agree") is False:
        print("berez: block formula and trace formula disagree", file=sys.stderr)
        return EXIT_IDENTITY
    if "residual" in report and not report["residual"].is_zero():
        print("berez: annihilating polynomial leaves a nonzero residual", file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_OK


def _verify_command(args) -> int:
    corrupt = args.command == "selftest"
    if args.input:
        cases = [("input", _load(args.input))]
    else:
        cases = list(battery(seed=args.seed, dims=[(2, 1)] if corrupt else None, per_dims=1 if corrupt else 3))
    results = []
    for case, A in sorted(cases, key=lambda t: t[0]):
        results += verify_matrix(A, case, seed=args.seed, corrupt_c2=corrupt, max_k=args.max_k, window=args.window)
    counts = {s: sum(r.status == s for r in results) for s in ("PASS", "FAIL", "SKIP")}
    lines = [r.line() for r in results]
    lines.append(f"SUMMARY\tseed={args.seed}\tpass={counts['PASS']}\tfail={counts['FAIL']}\tskip={counts['SKIP']}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_IDENTITY if counts[FAIL] else EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command in ("verify", "selftest"):
            return _verify_command(args)
        return _report_command(args, _load(args.input))
    except InputError as e:
        print(f"berez: input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
