"""Command-line interface.

Exit status: 0 success / Accepted, 1 FAIL / Rejected / certification
failure, 2 parse or usage error.  ``LILSIGMA_VERBOSE=1`` turns on debug
logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction
from typing import List, Optional

from . import checker, formulas, regression
from .certifier import CertificationFailed, ParseError, certify_supremum, parse, serialize
from .empirical import lil_experiment, orbit, to_csv
from .rational import RationalFormatError, format_rational, parse_rational
from .series import RatioPair, sigma_sq_exact, sigma_sq_truncated

log = logging.getLogger("lilsigma")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _pair(args) -> RatioPair:
    try:
        return RatioPair(args.p, args.q)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except RationalFormatError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, payload: dict, lines: List[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=None, separators=(",", ":")))
    else:
        for line in lines:
            print(line)


def cmd_eval(args) -> int:
    pp = _pair(args)
    x = _rational(args.x)
    if not 0 <= x <= 1:
        raise UsageError("x must lie in [0, 1]")
    r = format_rational
    if args.trunc is None:
        value = sigma_sq_exact(pp, x)
        _emit(args, {"p": pp.p, "q": pp.q, "x": r(x), "sigma_sq": r(value)}, [r(value)])
    else:
        if args.trunc < 1:
            raise UsageError("--trunc needs N >= 1")
        enc = sigma_sq_truncated(pp, x, args.trunc)
        _emit(args, {"p": pp.p, "q": pp.q, "x": r(x), "N": args.trunc,
                     "lower": r(enc.lower), "upper": r(enc.upper)},
              [f"lower {r(enc.lower)}", f"upper {r(enc.upper)}"])
    return EXIT_OK


def cmd_sigma(args) -> int:
    pp = _pair(args)
    info = formulas.classify(pp)
    known = formulas.lookup(pp.p, pp.q)
    r = format_rational
    payload = {
        "p": pp.p,
        "q": pp.q,
        "class": info.cls.value,
        "sigma_sq": None if info.sigma_sq is None else r(info.sigma_sq),
        "type": info.type_index,
        "witness": None if info.witness is None else r(info.witness),
        "table_sigma_sq": None if known is None or known.sigma_sq is None else r(known.sigma_sq),
    }
    lines = [f"class     {info.cls.value}"]
    if info.sigma_sq is not None:
        lines.append(f"sigma^2   {r(info.sigma_sq)}  (~{float(info.sigma_sq):.12g})")
    if info.type_index is not None:
        lines.append(f"type      {info.type_index}")
    if info.witness is not None:
        at = sigma_sq_exact(pp, info.witness)
        payload["sigma_sq_at_witness"] = r(at)
        lines.append(f"witness   {r(info.witness)}  sigma^2(witness) = {r(at)}")
    if payload["table_sigma_sq"] is not None:
        lines.append(f"table     {payload['table_sigma_sq']}")
    _emit(args, payload, lines)
    return EXIT_OK


def scan(pp: RatioPair, kmax: int):
    """Every candidate n/(p^k - q^k) in (0, 1/2] for k <= kmax, best first."""
    seen = {}
    for k in range(1, kmax + 1):
        for x in formulas.candidate_points(pp, k):
            seen.setdefault(x, k)
    ranked = [(sigma_sq_exact(pp, x), x, k) for x, k in seen.items()]
    ranked.sort(key=lambda t: (-t[0], t[1]))
    return ranked


def cmd_scan(args) -> int:
    pp = _pair(args)
    if args.kmax < 1:
        raise UsageError("--kmax must be >= 1")
    ranked = scan(pp, args.kmax)
    shown = ranked if args.top is None else ranked[: args.top]
    r = format_rational
    payload = {"p": pp.p, "q": pp.q, "kmax": args.kmax,
               "candidates": [{"x": r(x), "k": k, "sigma_sq": r(v)} for v, x, k in shown]}
    lines = []
    for i, (v, x, k) in enumerate(shown):
        flag = "*" if i == 0 else " "
        lines.append(f"{flag} k={k:<3d} x={r(x):<16s} sigma^2={r(v)}  (~{float(v):.15g})")
    if not ranked:
        lines.append("no candidates")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_certify(args) -> int:
    pp = _pair(args)
    cstar = _rational(args.cstar)
    t0 = time.perf_counter()
    try:
        cert = certify_supremum(pp, cstar, args.max_level, args.max_depth)
    except CertificationFailed as exc:
        _emit(args, {"status": "failed", "lo": format_rational(exc.lo),
                     "hi": format_rational(exc.hi), "reason": exc.reason},
              [f"CertificationFailed: {exc}"])
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    elapsed = time.perf_counter() - t0
    text = serialize(cert)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        _emit(args, {"status": "certified", "lines": len(cert.lines), "out": args.out,
                     "eta": format_rational(cert.eta), "seconds": elapsed},
              [f"certified {pp} peak at {format_rational(cstar)} with {len(cert.lines)} lines "
               f"in {elapsed:.2f}s -> {args.out}"])
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        cert = parse(text)
    except ParseError as exc:
        _emit(args, {"verdict": "ParseError", "line": exc.line, "field": exc.field,
                     "reason": exc.reason}, [f"ParseError: {exc}"])
        return EXIT_USAGE
    verdict = checker.check(cert)
    _emit(args, {"verdict": "Accepted" if verdict else "Rejected",
                 "line": verdict.line_index, "check": verdict.check, "reason": verdict.reason},
          [str(verdict)])
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_empirical(args) -> int:
    pp = _pair(args)
    x = _rational(args.x)
    if not 0 <= x < 1:
        raise UsageError("x must lie in [0, 1)")
    if args.mode == "orbit":
        if args.N < 1:
            raise UsageError("-N must be >= 1")
        rows = [(pt.k, float(pt.value)) for pt in orbit(pp, x, args.N)]
        sys.stdout.write(to_csv(rows, ["k", "value"]))
        return EXIT_OK
    if args.N < 16:
        raise UsageError("-N must be >= 16 for the LIL experiment")
    res = lil_experiment(pp, x, args.N)
    sys.stdout.write(to_csv(res.checkpoints, ["N_j", "d_n", "lil_ratio"]))
    log.info("running max of the LIL ratio: %r", res.running_max)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    rows = regression.reproduce()
    verdict = checker.check(regression.hand_certificate())
    rows.append(regression.Row("proof-certificate", bool(verdict), str(verdict)))
    failed = [row for row in rows if not row.ok]
    payload = {"rows": [{"tag": row.tag, "ok": row.ok, "detail": row.detail} for row in rows],
               "failed": len(failed)}
    lines = [f"{'PASS' if row.ok else 'FAIL'}  {row.tag:<18s} {row.detail}" for row in rows]
    lines.append(f"{len(rows) - len(failed)}/{len(rows)} rows pass")
    _emit(args, payload, lines)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lilsigma",
        description="Exact limit-variance sigma^2_{p/q}, LIL constants and peak certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, pair=True):
        if pair:
            sp.add_argument("-p", type=int, required=True)
            sp.add_argument("-q", type=int, required=True)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("eval", help="evaluate sigma^2(x) exactly or as an enclosure")
    common(sp)
    sp.add_argument("-x", required=True, help="rational num/den")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--trunc", type=int, metavar="N")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("sigma", help="closed-form Sigma^2 and classification")
    common(sp)
    sp.set_defaults(func=cmd_sigma)

    sp = sub.add_parser("scan", help="rank candidate points n/(p^k - q^k)")
    common(sp)
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--top", type=int, default=10)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("certify", help="build a peak certificate")
    common(sp)
    sp.add_argument("--cstar", required=True)
    sp.add_argument("--max-level", type=int, default=14)
    sp.add_argument("--max-depth", type=int, default=40)
    sp.add_argument("--out", help="write the certificate here instead of stdout")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("check", help="verify a certificate file")
    common(sp, pair=False)
    sp.add_argument("path")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("empirical", help="orbit / discrepancy CSV")
    common(sp)
    sp.add_argument("-x", required=True)
    sp.add_argument("-N", type=int, default=2**17)
    sp.add_argument("--mode", choices=("lil", "orbit"), default="lil")
    sp.set_defaults(func=cmd_empirical)

    sp = sub.add_parser("reproduce-paper", help="recheck every constant of the 3/2 proof")
    common(sp, pair=False)
    sp.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    if os.environ.get("LILSIGMA_VERBOSE"):
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
