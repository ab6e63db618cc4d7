"""Acceptance criteria, one test (and one PASS/FAIL line) per criterion.

Run alone with ``pytest tests/test_acceptance.py -v -s``; the verdict lines
are written straight to the terminal either way.
"""

import json
import time

import pytest

from mixedsums.counting import (
    goldbach_pair_count,
    hardy_littlewood_constant,
    hardy_littlewood_estimate,
    representation_count,
)
from mixedsums.forms import COUNTING_FORMS, builtin_form
from mixedsums.theorems import (
    check_thm1_part_i,
    check_thm1_part_ii,
    d_value,
    distinct_sums_check,
    fib_family_present,
    fib_sum_coincidences,
    part_ii_pairs,
    pell_pair_decode,
    pell_pair_encode,
    telescoping_identity_check,
)
from mixedsums.verifier import VerifyPolicy, confirm_exception, crocker_scan, verify_range
from oracles import fib, naive_count, plain_sieve


@pytest.fixture
def verdict(capsys):
    def emit(label: str, ok: bool, detail: str) -> bool:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {label}: {detail}")
        return ok

    return emit


def _timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def test_criterion_01_counting_exact(verdict):
    form = builtin_form("pP2P_count")
    r76, t76 = _timed(representation_count, form, 10**50 + 10045)
    r443, t443 = _timed(representation_count, form, 10**200 + 33)
    r824, t824 = _timed(representation_count, form, 10**200 + 18)
    ok = (r76.r, r443.r, r824.r) == (76, 443, 824) and t76 < 60 and t443 + t824 < 1800
    detail = (
        f"r(10^50+10045)={r76.r} in {t76:.1f}s, r(10^200+33)={r443.r}, r(10^200+18)={r824.r} "
        f"in {t443 + t824:.1f}s combined; policy: {r76.policy}"
    )
    assert verdict("1", ok, detail), detail


def test_criterion_02_window_statistic(verdict):
    n = 10**50 + 39030
    res = representation_count(builtin_form("pFF1_count"), n, keep_witnesses=True)
    ok = abs(res.s - 2.22359) <= 0.005 and res.r == 256
    detail = f"s_1={res.s:.6f} (target 2.22359 +/- 0.005), r={res.r} (derived 256)"
    if not ok:
        dump = "\n".join(json.dumps({"p": str(p), "indices": list(i)}) for p, i in res.witnesses)
        detail += "\nwitness dump:\n" + dump
    assert verdict("2", ok, detail), detail


BATTERY = [
    ("pT1", 216),
    ("pPP", 2176),
    ("p2FC", 3627586),
    ("p2LC", 1389082),
    ("pFF4", 900068),
    ("pLL4", 17540144),
    ("pF5mod6", 857530546),
    ("crocker0", 1117175145),
    ("pP3P", 393185153350),
    ("pP4P", 872377759846),
    ("pPQ", 169421772576),
    ("pFLe", 36930553345551),
    ("p2k2(63)", 253),
    ("polignac", 127),
]


def test_criterion_03_exception_battery(verdict):
    t0 = time.perf_counter()
    statuses = {(f, n): confirm_exception(builtin_form(f), n).status for f, n in BATTERY}
    elapsed = time.perf_counter() - t0
    bad = [k for k, s in statuses.items() if s != "exception"]
    ok = not bad and elapsed < 300
    detail = f"{len(BATTERY) - len(bad)}/{len(BATTERY)} confirmed exceptions in {elapsed:.2f}s" + (
        f"; not exceptions: {bad}" if bad else ""
    )
    assert verdict("3", ok, detail), detail


def test_criterion_04_scaled_range_scans(verdict):
    runs = [
        ("pT1", 0, 10**6 + 1, [216]),
        ("pFF", 5, 10**7 + 1, []),
        ("p222", 9, 10**7 + 1, []),
        ("p2_3x2", 11, 10**6 + 1, []),
    ]
    parts, ok = [], True
    for name, lo, hi, want in runs:
        rep, t = _timed(verify_range, builtin_form(name), lo, hi)
        good = rep.exception_values == want and t < 1800
        ok &= good
        parts.append(f"{name}[{lo},{hi - 1}] -> {rep.exception_values} ({rep.verified_count} checked, {t:.1f}s)")
    detail = "; ".join(parts)
    assert verdict("4", ok, detail), detail


CROCKER_LIST = [6495105, 848629545, 1117175145, 2544265305, 3147056235, 3366991695]


def test_criterion_05_crocker(verdict):
    found, t = _timed(crocker_scan, 10**7, 1)
    ok = found == [6495105] and t < 600
    detail = f"exceptions up to 10^7: {found} in {t:.1f}s"
    assert verdict("5", ok, detail), detail


def test_criterion_05_crocker_extended(verdict):
    found, t = _timed(crocker_scan, 3366991695, 1)
    ok = found == CROCKER_LIST
    detail = f"exceptions up to 3366991695: {found} in {t:.0f}s"
    assert verdict("5 (extended)", ok, detail), detail


def test_criterion_06_theorem_1(verdict):
    problems = []
    for m in range(2, 11):
        for n in range(2, 7):
            if not telescoping_identity_check(m, n):
                problems.append(f"telescoping m={m} n={n}")
    part_i = 0
    for m in (2, 6, 10, 22):
        for n in range(3, 7):
            if d_value(m, n) >= 2**128:
                continue
            v = check_thm1_part_i(m, n)
            part_i += 1
            if not (v.divides and v.is_prime_power is False):
                problems.append(f"part i m={m} n={n}")
    part_ii = 0
    for m in (2, 3):
        for n in (3, 4):
            for a, b in part_ii_pairs(m, n, max_exp=10):
                v = check_thm1_part_ii(m, n, a, b)
                part_ii += 1
                if not v.holds:
                    problems.append(f"part ii m={m} n={n} a={a} b={b}")
    anomaly = check_thm1_part_ii(2, 2, 3, 1, allow_small_n=True)
    anomaly_reported = anomaly.value == 5 and anomaly.value_is_prime and not anomaly.asserted
    ok = not problems and anomaly_reported
    detail = (
        f"telescoping 9x5 exact, {part_i} part-i verdicts, {part_ii} part-ii verdicts, "
        f"n=2 anomaly 15=5+2^3+2^1 reported={anomaly_reported}" + (f"; problems: {problems}" if problems else "")
    )
    assert verdict("6", ok, detail), detail


def test_criterion_07_theorem_2(verdict):
    problems = []
    for a in range(3, 11):
        if distinct_sums_check(a, 30):
            problems.append(f"collision for a={a}")
    a2 = [(r.x, r.representations) for r in distinct_sums_check(2, 30)]
    if a2 != [(4, ((0, 2), (2, 1)))]:
        problems.append(f"a=2 records {a2}")
    for m in range(1, 26):
        for n in range(1, 26):
            if pell_pair_decode(pell_pair_encode(m, n)) != (m, n):
                problems.append(f"pell codec ({m},{n})")
    coin = fib_sum_coincidences(40)
    family = fib_family_present(coin, 40)
    if family != list(range(3, 40)):
        problems.append("Fibonacci family incomplete")
    F = fib(10**12)[:41]
    groups = {}
    for l in range(40, 0, -1):
        for k in range(l, 0, -1):
            groups.setdefault(F[k] + F[l], set()).add((k, l))
    oracle = {v: s for v, s in groups.items() if len(s) > 1}
    restricted = {v: set(p) for v, p in fib_sum_coincidences(40, min_index=1)}
    if restricted != oracle:
        problems.append("index>=1 coincidences differ from brute force")
    ok = not problems
    detail = (
        "a=3..10 collision-free, a=2 only x=4, Pell codec 25x25 round-trips, "
        f"family present for n=3..39, {len(oracle)} coincidence values match brute force"
        + (f"; problems: {problems}" if problems else "")
    )
    assert verdict("7", ok, detail), detail


def test_criterion_08_oracle_equivalence(verdict):
    flags = plain_sieve(10**4)
    mismatches = []
    for name in COUNTING_FORMS:
        form = builtin_form(name)
        for n in range(2, 10**4 + 1):
            got = representation_count(form, n).r
            want = naive_count(name, n, flags)
            if got != want:
                mismatches.append((name, n, got, want))
    ok = not mismatches
    detail = f"{len(COUNTING_FORMS)} counting forms x n in [2, 10^4]: {len(mismatches)} mismatches" + (
        f", first {mismatches[:3]}" if mismatches else ""
    )
    assert verdict("8", ok, detail), detail


def test_criterion_09_determinism(verdict):
    outputs = {}
    for workers in (1, 2, 8):
        recs = []
        pol = VerifyPolicy(workers=workers, segment_size=1 << 16)
        rep = verify_range(builtin_form("pFF"), 5, 10**6 + 1, pol, recs.append)
        outputs[workers] = "\n".join(json.dumps(r) for r in recs + [rep.summary(stable=True)])
    ok = outputs[1] == outputs[2] == outputs[8]
    detail = f"pFF on (4, 10^6], workers 1/2/8, {len(outputs[1])} bytes each, identical={ok}"
    assert verdict("9", ok, detail), detail


def test_criterion_10a_hl_constant(verdict):
    c = hardy_littlewood_constant(10**6)
    ok = abs(c.value - 1.3203) <= 1e-4
    detail = f"c(10^6)={c.value:.8f} (truncation error <= {c.truncation_error:.1e}), target 1.3203 +/- 1e-4"
    assert verdict("10 (constant)", ok, detail), detail


@pytest.mark.xfail(
    strict=True,
    reason="c*n/log^2 n undershoots the Goldbach count at 10^6 by about 15%; analysed in the decisions ledger",
)
def test_criterion_10b_hl_estimate(verdict):
    n = 10**6
    est = hardy_littlewood_estimate(n)
    ordered = goldbach_pair_count(n, ordered=True)
    unordered = goldbach_pair_count(n, ordered=False)
    rel = (est - ordered) / ordered
    ok = abs(rel) <= 0.05
    detail = (
        f"estimate {est:.1f} vs ordered count {ordered} ({rel:+.1%}); "
        f"unordered count {unordered} ({(est - unordered) / unordered:+.1%}); tolerance 5%"
    )
    assert verdict("10 (estimate)", ok, detail), detail
