"""Command-line interface.

Exit codes: 0 success / nothing found, 1 exceptions (or theorem failures)
found, 2 usage error, 3 internal error. Structured output goes to stdout,
logs and progress to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import traceback

from mixedsums import counting, theorems, verifier
from mixedsums.expr import ExprError, parse_number_expr
from mixedsums.forms import FormSyntaxError, applicable, builtin_names, describe, resolve_form
from mixedsums.sequences import terms_below

log = logging.getLogger("mixedsums")

WORKERS_ENV = "MIXEDSUMS_WORKERS"
EXIT_OK, EXIT_FOUND, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

#: published counts; a mismatch dumps all witnesses to stderr
PUBLISHED_COUNTS = {
    ("pP2P_count", 10**50 + 10045): 76,
    ("pP2P_count", 10**200 + 33): 443,
    ("pP2P_count", 10**200 + 18): 824,
}


class UsageError(Exception):
    pass


def _number(text: str, nonneg: bool = True) -> int:
    try:
        return parse_number_expr(text, allow_negative=not nonneg)
    except ExprError as e:
        raise UsageError(f"bad number {text!r}: {e}") from None


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=False) + "\n")


def _policy(args, **extra) -> verifier.VerifyPolicy:
    return verifier.VerifyPolicy(
        workers=args.workers,
        segment_size=1 << args.segment_bits,
        checkpoint=args.checkpoint,
        resume=args.resume,
        extra_rounds=args.pp_extra_rounds,
        **extra,
    )


def _form(spec: str):
    try:
        return resolve_form(spec)
    except FormSyntaxError as e:
        raise UsageError(f"bad form {spec!r}: {e}") from None


# ---------------------------------------------------------------------------
# commands

def cmd_verify(args) -> int:
    form = _form(args.form)
    lo, hi = _number(args.lo), _number(args.hi)
    if lo >= hi:
        raise UsageError("--from must be below --to")

    def on_record(rec):
        if args.json:
            _emit(rec)
        else:
            print(f"{rec['status']} n={rec['n']}" + (f" p={rec['p']}" if "p" in rec else ""))

    report = verifier.verify_range(form, lo, hi, _policy(args, emit_witnesses=args.emit_witnesses), on_record)
    summary = report.summary(stable=args.stable_output)
    if args.json:
        _emit({"summary": summary})
    else:
        print(f"{form.name}: [{lo}, {hi}) verified={report.verified_count} exceptions={len(report.exceptions)}")
    return EXIT_FOUND if report.exceptions else EXIT_OK


def cmd_confirm(args) -> int:
    form = _form(args.form)
    n = _number(args.n)
    if not applicable(form, n):
        raise UsageError(f"n={n} is outside the domain of {form.name}")
    rec = verifier.confirm_exception(form, n, args.pp_extra_rounds)
    out = rec.to_record()
    if rec.witness is not None:
        out.update({k: v for k, v in rec.witness.to_record(form).items() if k in ("p", "terms")})
    if args.json:
        _emit(out)
    else:
        print(f"{form.name} n={n}: {rec.status} ({rec.candidates_checked} candidates)")
        if rec.witness:
            print(f"  p={rec.witness.p} indices={rec.witness.term_indices}")
    return EXIT_FOUND if rec.status == "exception" else EXIT_OK


def cmd_count(args) -> int:
    form_spec = args.form or args.form_pos
    n_text = args.n or args.n_pos
    if not form_spec or not n_text:
        raise UsageError("count needs a form and n")
    form = _form(form_spec)
    n = _number(n_text)
    expect = args.expect if args.expect is not None else PUBLISHED_COUNTS.get((form.name, n))
    res = counting.representation_count(form, n, args.pp_extra_rounds, keep_witnesses=True)
    rec = res.to_record()
    if expect is not None:
        rec["expected"] = expect
    _emit(rec)
    if args.dump_witnesses or (expect is not None and expect != res.r):
        if expect is not None and expect != res.r:
            log.warning("count %d differs from expected %d; dumping witnesses", res.r, expect)
        for p, idx in res.witnesses:
            sys.stderr.write(json.dumps({"p": str(p), "indices": list(idx)}) + "\n")
    return EXIT_FOUND if expect is not None and expect != res.r else EXIT_OK


def cmd_scan_s(args) -> int:
    form = _form(args.form)
    base = _number(args.base)
    offsets = range(_number(args.lo), _number(args.hi), args.stride)
    if not len(offsets):
        raise UsageError("empty offset range")
    stats = counting.window_stats(form, base, offsets, args.pp_extra_rounds)
    if args.json:
        for r in stats.results:
            _emit({**r.to_record(), "offset": r.n - base})
    else:
        sys.stdout.write(stats.to_csv())
    log.info("min s at offset %d, max s at offset %d", stats.argmin, stats.argmax)
    sys.stderr.write(json.dumps({"argmin": stats.argmin, "argmax": stats.argmax}) + "\n")
    return EXIT_OK


def cmd_crocker(args) -> int:
    bound = _number(args.bound)
    form = resolve_form(f"crocker{args.min_exponent}")
    found = []

    def on_record(rec):
        found.append(rec)
        if args.json:
            _emit(rec)
        else:
            print(rec["n"])

    if bound > 5:
        verifier.verify_range(form, 6, bound + 1, _policy(args), on_record)
    return EXIT_FOUND if found else EXIT_OK


def cmd_goldbach(args) -> int:
    lo, hi = _number(args.lo), _number(args.hi)
    if not 4 <= lo < hi:
        raise UsageError("goldbach needs 4 <= --from < --to")
    report = verifier.goldbach_check(lo, hi, emit_witnesses=args.emit_witnesses)
    for rec in report.witnesses + [e.to_record() for e in report.exceptions]:
        if args.json:
            _emit(rec)
        else:
            extra = f" = {rec['p']} + {rec['terms'][0]['value']}" if "p" in rec else ""
            print(f"{rec['status']} n={rec['n']}{extra}")
    summary = report.summary(stable=args.stable_output)
    if args.json:
        _emit({"summary": summary})
    else:
        print(f"goldbach: [{lo}, {hi}) verified={report.verified_count} exceptions={len(report.exceptions)}")
    return EXIT_FOUND if report.exceptions else EXIT_OK


def cmd_theorem(args) -> int:
    which = args.which
    if which == "p22":
        return _theorem_p22(args)
    if which == "uau":
        recs = theorems.distinct_sums_check(args.a, args.max_index)
        for r in recs:
            if args.json:
                _emit(r.to_record())
            else:
                print(f"a={r.a} x={r.x}: {r.representations}")
        expected = [(4, ((0, 2), (2, 1)))] if args.a == 2 else []
        got = [(r.x, r.representations) for r in recs]
        if not recs and not args.json:
            print(f"a={args.a}: no collisions up to index {args.max_index}")
        return EXIT_OK if got == expected else EXIT_FOUND
    if which == "coincidences":
        coin = theorems.fib_sum_coincidences(args.max_index, args.min_index)
        for value, pairs in coin:
            if args.json:
                _emit({"theorem": "coincidences", "value": str(value), "pairs": [list(p) for p in pairs]})
            else:
                print(f"{value}: {pairs}")
        return EXIT_OK
    if which == "pellcode":
        if args.x is not None:
            x = _number(args.x)
            res = theorems.pell_pair_decode(x)
            out = {"theorem": "pellcode", "x": str(x), "pair": list(res) if res else None}
        else:
            if args.m is None or args.n is None:
                raise UsageError("pellcode needs --x or both --m and --n")
            code = theorems.pell_pair_encode(args.m, args.n)
            out = {"theorem": "pellcode", "pair": [args.m, args.n], "x": str(code)}
        if args.json:
            _emit(out)
        else:
            print(f"x={out['x']} pair={out['pair']}")
        return EXIT_OK
    raise UsageError(f"unknown theorem {which!r}")


def _theorem_p22(args) -> int:
    if args.m is None or args.n is None:
        raise UsageError("theorem p22 needs --m and --n")
    try:
        if args.part == "i":
            verdicts = [theorems.check_thm1_part_i(args.m, args.n)]
        elif args.a is not None and args.b is not None:
            verdicts = [theorems.check_thm1_part_ii(args.m, args.n, args.a, args.b, args.allow_n2)]
        else:
            if args.n < 3 and not args.allow_n2:
                raise ValueError("n must be >= 3 (use --allow-n2)")
            pairs = theorems.part_ii_pairs(args.m, args.n, args.max_exp)
            verdicts = [theorems.check_thm1_part_ii(args.m, args.n, a, b, args.allow_n2) for a, b in pairs]
    except ValueError as e:
        raise UsageError(str(e)) from None
    failed = False
    for v in verdicts:
        if args.json:
            _emit(v.to_record())
        else:
            tag = "ok" if v.holds else ("ANOMALY (not asserted)" if not v.asserted else "FAILED")
            extra = f" a={v.a} b={v.b}" if v.part == "ii" else f" prime_power={v.is_prime_power}"
            print(f"part {v.part} m={v.m} n={v.n}{extra} witness={v.divisor_witness} divides={v.divides}: {tag}")
        if v.asserted and not v.holds:
            failed = True
    return EXIT_FOUND if failed else EXIT_OK


def cmd_seq(args) -> int:
    bound = _number(args.bound)
    table = terms_below(args.seq, bound, args.min_index)
    for i, v in table:
        if args.json:
            _emit({"seq": args.seq, "index": i, "value": str(v)})
        else:
            print(f"{i}\t{v}")
    return EXIT_OK


def cmd_forms(args) -> int:
    for name in builtin_names():
        if name == "p2k2(k)":
            expr = "odd_prime + 2^[a>=1] + k*2^[b>=1] ; n>2k+3, odd(n)"
        else:
            expr = resolve_form(name).expression()
        if args.json:
            _emit({"name": name, "expression": expr, "description": describe(name)})
        else:
            print(f"{name:14s} {expr}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSONL on stdout")
    common.add_argument("--workers", type=int, default=int(os.environ.get(WORKERS_ENV, "1")))
    common.add_argument("--checkpoint", metavar="PATH", help="JSON checkpoint file for long scans")
    common.add_argument("--resume", action="store_true", help="continue from --checkpoint")
    common.add_argument("--stable-output", action="store_true", help="omit timing fields")
    common.add_argument("--segment-bits", type=int, default=21)
    common.add_argument("--pp-extra-rounds", type=int, default=0, help="extra Miller-Rabin rounds above 2^64")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="mixedsums", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="scan [from, to) for exceptions")
    p.add_argument("--form", required=True)
    p.add_argument("--from", dest="lo", required=True)
    p.add_argument("--to", dest="hi", required=True)
    p.add_argument("--emit-witnesses", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("confirm", parents=[common], help="exhaustively check a single n")
    p.add_argument("--form", required=True)
    p.add_argument("--n", required=True)
    p.set_defaults(func=cmd_confirm)

    p = sub.add_parser("count", parents=[common], help="exact representation count r(n)")
    p.add_argument("form_pos", nargs="?")
    p.add_argument("n_pos", nargs="?")
    p.add_argument("--form")
    p.add_argument("--n")
    p.add_argument("--expect", type=int)
    p.add_argument("--dump-witnesses", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("scan-s", parents=[common], help="s(n) = r(n)/ln n over base + [from, to)")
    p.add_argument("--form", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--from", dest="lo", default="0")
    p.add_argument("--to", dest="hi", required=True)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(func=cmd_scan_s)

    p = sub.add_parser("crocker", parents=[common], help="odd n not of the form p + 2^a + 2^b")
    p.add_argument("--bound", required=True)
    p.add_argument("--min-exponent", type=int, choices=(0, 1), default=1)
    p.set_defaults(func=cmd_crocker)

    p = sub.add_parser("goldbach", parents=[common], help="even n as a sum of two primes")
    p.add_argument("--from", dest="lo", default="4")
    p.add_argument("--to", dest="hi", required=True)
    p.add_argument("--emit-witnesses", action="store_true")
    p.set_defaults(func=cmd_goldbach)

    p = sub.add_parser("theorem", parents=[common], help="theorem checks")
    p.add_argument("which", choices=("p22", "uau", "coincidences", "pellcode"))
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--part", choices=("i", "ii"), default="i")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--max-exp", type=int, help="part ii: largest exponent a when enumerating pairs")
    p.add_argument("--allow-n2", action="store_true", help="part ii: evaluate n=2 (reported, not asserted)")
    p.add_argument("--max-index", type=int, default=30)
    p.add_argument("--min-index", type=int, default=0)
    p.add_argument("--x")
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("seq", parents=[common], help="sequence utilities")
    p.add_argument("action", choices=("dump",))
    p.add_argument("--seq", required=True)
    p.add_argument("--bound", required=True)
    p.add_argument("--min-index", type=int, default=0)
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("forms", parents=[common], help="list registered forms")
    p.set_defaults(func=cmd_forms)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (UsageError, KeyError, verifier.VacuousFormError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
