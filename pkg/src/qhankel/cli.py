"""Command-line front end.

Exit codes: 0 all checks passed, 1 a verification failed, 2 usage or
precondition error.  Output for a given set of flags is byte-identical
across runs.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import PreconditionError, VerificationFailure
from .hankel.factor import DEFAULT_SEED

RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")

SUITE_NAMES = ["lemma-dl", "operator-relation", "closed-form", "leading", "cyclotomic",
               "w-divisibility", "kdet", "degree-bounds", "conjecture-lambda1", "kronecker",
               "bezivin", "numeric-coherence"]


class UsageError(Exception):
    pass


def parse_rational(text: Optional[str], allow_sym: bool = True):
    """"p/q" or integer -> Fraction; "sym" -> None (symbolic)."""
    if text is None:
        return None
    if text == "sym":
        if not allow_sym:
            raise UsageError("a rational value is required here, not 'sym'")
        return None
    if not RATIONAL.match(text):
        raise UsageError(f"not an exact rational: {text!r} (use p/q, an integer, or sym)")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise UsageError(f"zero denominator in {text!r}")
    return Fraction(text)


def _show(x) -> str:
    return "sym" if x is None else f"{x.numerator}/{x.denominator}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--nmax", type=int)
    common.add_argument("--l", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--alpha")
    common.add_argument("--lambda", dest="lam")
    common.add_argument("--mu")
    common.add_argument("--x")
    common.add_argument("--q")
    common.add_argument("--a", dest="a_param")
    common.add_argument("--c", dest="c_param")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--precision", type=int)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out")
    common.add_argument("--probe-limit", type=int)
    common.add_argument("--force", action="store_true")

    parser = argparse.ArgumentParser(prog="qhankel", description="Exact Hankel determinants of q-series tails.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="Clausen constant, A/B/C and thresholds")
    sub.add_parser("det", parents=[common], help="the Hankel determinant V_n")
    sub.add_parser("factor", parents=[common], help="q-power and cyclotomic factorization of V_n")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite")
    sub.add_parser("decay", parents=[common], help="certified decay of |V_n| at numeric parameters")
    sub.add_parser("asym", parents=[common], help="weighted cyclotomic exponent sum")
    sub.add_parser("sumel", parents=[common], help="totient-weighted floor sums")
    return parser


# -- commands ------------------------------------------------------------------------


def cmd_constants(args) -> tuple[dict, int]:
    from .asym.constants import constants_report
    prec = args.precision or 128
    if prec < 32:
        raise UsageError("precision must be at least 32 bits")
    rep = constants_report(prec)
    digits = max(12, int(prec * 0.30103) - 2)
    rec = rep.to_record(digits=digits)
    if not rep.agreement():
        for (d, lz), (via, closed) in sorted(rep.thresholds.items()):
            if not via.overlaps(closed):
                rec["first_failure"] = VerificationFailure(
                    "threshold via A, B, C equals the closed form", via.to_record(digits),
                    closed.to_record(digits), {"d": d, "lambda_is_zero": lz}).to_record()
                break
        else:
            s, c = rep.degree_constant
            rec["first_failure"] = VerificationFailure(
                "degree constant: series equals closed form", s.to_record(digits),
                c.to_record(digits), {}).to_record()
        return rec, 1
    return rec, 0


def _ctx_from_args(args):
    from .qseq import SeqContext
    alpha = parse_rational(args.alpha)
    lam = parse_rational(args.lam)
    mu = parse_rational(args.mu if args.mu is not None else args.x)
    q = parse_rational(args.q)
    return SeqContext(alpha=alpha, lam=lam, x=mu, q=q)


def cmd_det(args) -> tuple[dict, int]:
    from .hankel.det import hankel_det
    if args.n is None or args.n < 0:
        raise UsageError("det needs --n >= 0")
    ctx = _ctx_from_args(args)
    V = hankel_det(ctx, args.n)
    return {"n": args.n, "det": V.to_record()}, 0


def cmd_factor(args) -> tuple[dict, int]:
    from .hankel.factor import factorize
    if args.n is None or args.n < 1:
        raise UsageError("factor needs --n >= 1")
    ctx = _ctx_from_args(args)
    if ctx.q is not None:
        raise UsageError("factor needs q symbolic")
    try:
        fd = factorize(ctx, args.n, args.probe_limit)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    return fd.to_record(), 0


def _suite_kwargs(name: str, args) -> dict:
    kw = {}
    if name in ("leading", "degree-bounds", "cyclotomic", "conjecture-lambda1", "kronecker",
                "lemma-dl", "w-divisibility"):
        kw["seed"] = args.seed
    if args.nmax is not None and name not in ("w-divisibility",):
        kw["n_max"] = args.nmax
    if args.l is not None and name in ("lemma-dl", "operator-relation", "w-divisibility"):
        kw["l_max"] = args.l
    if args.m is not None and name == "w-divisibility":
        kw["m_max"] = args.m
    if name == "cyclotomic" and args.probe_limit is not None:
        kw["probe_limit"] = args.probe_limit
    if name in ("bezivin", "numeric-coherence") and args.precision is not None:
        kw["precision"] = args.precision
    if name == "kronecker":
        for key, val in (("q", args.q), ("alpha", args.alpha), ("lam", args.lam)):
            if val is not None:
                kw[key] = parse_rational(val, allow_sym=False)
    return kw


def cmd_verify(args) -> tuple[dict, int]:
    from .verify import SUITES
    names = SUITE_NAMES if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {args.suite!r}; available: all, " + ", ".join(SUITE_NAMES))
    results = []
    first_failure = None
    for name in names:
        res = SUITES[name](**_suite_kwargs(name, args))
        results.append(res.to_record())
        if not res.passed and first_failure is None:
            first_failure = dict(res.failure, suite=name)
    if len(results) == 1:
        rec = results[0]
    else:
        rec = {"suites": results, "passed": first_failure is None}
        if first_failure is not None:
            rec["first_failure"] = first_failure
    return rec, 0 if first_failure is None else 1


def cmd_decay(args) -> tuple[object, int]:
    from .asym.experiments import decay_experiment
    q = parse_rational(args.q or "2", allow_sym=False)
    alpha = parse_rational(args.alpha or "1", allow_sym=False)
    lam = parse_rational(args.lam or "0", allow_sym=False)
    nmax = args.nmax or 24
    nmin = args.n or 1
    try:
        rep = decay_experiment(q, alpha, lam, nmax, n_min=nmin, precision=args.precision)
    except ArithmeticError as exc:
        raise VerificationFailure(str(exc)) from None
    if args.format == "csv":
        return rep.to_csv(), 0
    return rep.to_record(), 0


def cmd_asym(args) -> tuple[dict, int]:
    from .asym.experiments import weighted_exponent_sum
    n = args.n or 10 ** 4
    if n < 3:
        raise UsageError("asym needs --n >= 3")
    w = weighted_exponent_sum(n)
    return w.to_record(), 0


def cmd_sumel(args) -> tuple[dict, int]:
    from .asym.experiments import sumel_partial
    a = parse_rational(args.a_param or "3", allow_sym=False)
    c = parse_rational(args.c_param or "1", allow_sym=False)
    n = args.n if args.n is not None else 10 ** 4
    return sumel_partial(a, c, n).to_record(), 0


COMMANDS = {"constants": cmd_constants, "det": cmd_det, "factor": cmd_factor, "verify": cmd_verify,
            "decay": cmd_decay, "asym": cmd_asym, "sumel": cmd_sumel}


# -- output --------------------------------------------------------------------------


def _parameters(args) -> dict:
    keys = ["n", "nmax", "l", "m", "d", "alpha", "lam", "mu", "x", "q", "a_param", "c_param",
            "seed", "precision", "probe_limit", "force"]
    out = {}
    for k in keys:
        v = getattr(args, k, None)
        if v is not None and v is not False:
            out[{"lam": "lambda", "a_param": "a", "c_param": "c"}.get(k, k)] = v
    if getattr(args, "suite", None):
        out["suite"] = args.suite
    return out


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(x, indent) if isinstance(x, (dict, list)) else f"{pad}- {x}" for x in obj)
    return f"{pad}{obj}"


def render(command: str, args, result, code: int) -> str:
    if isinstance(result, str):   # already CSV
        return result
    status = {0: "pass", 1: "fail"}[code]
    doc = {"command": command, "version": __version__, "parameters": _parameters(args),
           "status": status, "result": result}
    if args.format == "text":
        return _text(doc) + "\n"
    if args.format == "csv":
        return _csv_of(result)
    return json.dumps(doc, indent=2) + "\n"


def _csv_of(result) -> str:
    rows = result.get("rows") if isinstance(result, dict) else None
    if not rows:
        flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
        rows = [flat]
    keys = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    import csv
    import io
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        w.writerow([json.dumps(r[k], separators=(",", ":")) if isinstance(r.get(k), (dict, list))
                    else r.get(k, "") for k in keys])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qhankel-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, text: str) -> None:
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        result, code = COMMANDS[args.command](args)
    except (UsageError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        doc = {"command": args.command, "version": __version__, "parameters": _parameters(args),
               "status": "fail", "result": {"first_failure": exc.to_record()}}
        emit(args, json.dumps(doc, indent=2) + "\n")
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    emit(args, render(args.command, args, result, code))
    return code


if __name__ == "__main__":
    sys.exit(main())
