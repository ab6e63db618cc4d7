"""Witness search, exhaustive exception confirmation and range scans.

Range scans work segment by segment. For a segment ``[a, b)`` the engine

1. sieves the residual window ``[max(0, a - slack), b)``,
2. ORs shifted copies of that prime bitmap for the smallest term sums
   (dense phase), and
3. once few ``n`` remain uncovered, walks the remaining sums over the
   compacted survivor list (sparse phase), falling back to the 64-bit
   deterministic test for residuals outside the sieved windows.

Every survivor is re-checked by :func:`confirm_exception`, which enumerates
all term tuples with exact primality, before being reported.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Callable, Iterator

import numpy as np

from mixedsums.forms import Form, Witness, applicable, builtin_form
from mixedsums.primality import integer_root, is_prime, is_prime_64, sieve_range
from mixedsums.sequences import terms_below

log = logging.getLogger(__name__)

MAX_RANGE_HI = 1 << 63
#: residuals below this are looked up in a per-process dense sieve
LOW_SIEVE_CAP = 1 << 25
CHECKPOINT_CANDIDATES = 10**8
DEFAULT_SEGMENT_SIZE = 1 << 21


class VacuousFormError(ValueError):
    """The form's prime constraint admits at most one prime."""


@dataclass(frozen=True)
class VerifyPolicy:
    workers: int = 1
    segment_size: int = DEFAULT_SEGMENT_SIZE
    checkpoint: str | None = None
    checkpoint_every: int | None = None  # segments per checkpoint; None: about 10^8 candidates
    resume: bool = False
    extra_rounds: int = 0
    emit_witnesses: bool = False

    def describe(self) -> dict:
        return {
            "primality": "sieve + deterministic Miller-Rabin (64-bit)",
            "workers": self.workers,
            "segment_size": self.segment_size,
        }


@dataclass(frozen=True)
class ExceptionRecord:
    form: str
    n: int
    candidates_checked: int
    status: str = "exception"
    witness: Witness | None = None

    def to_record(self) -> dict:
        return {
            "form": self.form,
            "n": str(self.n),
            "status": self.status,
            "candidates_checked": self.candidates_checked,
        }


@dataclass
class VerifyReport:
    form: str
    lo: int
    hi: int
    exceptions: list[ExceptionRecord] = field(default_factory=list)
    verified_count: int = 0
    elapsed: float = 0.0
    policy: dict = field(default_factory=dict)
    witnesses: list[dict] = field(default_factory=list)

    @property
    def exception_values(self) -> list[int]:
        return [e.n for e in self.exceptions]

    def summary(self, stable: bool = False) -> dict:
        out = {
            "form": self.form,
            "lo": str(self.lo),
            "hi": str(self.hi),
            "verified_count": self.verified_count,
            "exceptions": [str(e.n) for e in self.exceptions],
            "policy": self.policy,
        }
        if stable:
            # execution-only fields differ between otherwise identical runs
            out["policy"] = {k: v for k, v in self.policy.items() if k != "workers"}
        else:
            out["elapsed"] = round(self.elapsed, 3)
        return out


# ---------------------------------------------------------------------------
# enumeration of term tuples

def term_tables(form: Form, bound: int) -> list[list[tuple[int, int, int]]]:
    """Per term: (index, value, contribution) for every contribution <= bound."""
    tables = []
    for t in form.terms:
        vmax = integer_root(max(bound, 0) // t.coefficient, t.exponent)
        tab = terms_below(t.sequence, vmax, t.min_index)
        tables.append([(i, v, t.contribution(v)) for i, v in tab])
    return tables


def iter_combos(form: Form, bound: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """All term tuples with total contribution <= bound, in lexicographic index order."""
    tables = term_tables(form, bound)
    k = len(tables)
    if k == 0:
        yield (), (), 0
        return

    def rec(level, idx, vals, total):
        for i, v, c in tables[level]:
            s = total + c
            if s > bound:
                continue
            if level + 1 == k:
                yield idx + (i,), vals + (v,), s
            else:
                yield from rec(level + 1, idx + (i,), vals + (v,), s)

    yield from rec(0, (), (), 0)


def allowed_sums(form: Form, bound: int) -> np.ndarray:
    """Sorted distinct totals of parity-admissible tuples, as int64."""
    limit = bound - form.prime.min_value
    if limit < 0:
        return np.zeros(0, dtype=np.int64)
    sums = {s for _, vals, s in iter_combos(form, limit) if form.parity_ok(vals)}
    return np.array(sorted(sums), dtype=np.int64)


def _prime_fn(extra_rounds: int) -> Callable[[int], bool]:
    return partial(is_prime, extra_rounds=extra_rounds) if extra_rounds else is_prime


def _check_form(form: Form) -> None:
    if form.vacuous:
        raise VacuousFormError(
            f"form {form.name!r}: prime class {form.prime.render()} contains at most one prime"
        )


# ---------------------------------------------------------------------------
# single values

def find_witness(form: Form, n: int, extra_rounds: int = 0) -> Witness | None:
    """Witness with the lexicographically smallest index tuple, or None."""
    prime = _prime_fn(extra_rounds)
    for idx, vals, s in iter_combos(form, n - form.prime.min_value):
        if form.parity_ok(vals) and form.prime.admits(n - s, prime):
            return Witness(n, n - s, idx, vals)
    return None


def confirm_exception(form: Form, n: int, extra_rounds: int = 0) -> ExceptionRecord:
    """Exhaustively enumerate every term tuple for n.

    ``candidates_checked`` counts all index tuples whose contribution does
    not exceed n. The status is ``"exception"`` iff none of them yields an
    admissible prime; otherwise the first witness is attached.
    """
    _check_form(form)
    prime = _prime_fn(extra_rounds)
    checked = 0
    first = None
    for idx, vals, s in iter_combos(form, n):
        checked += 1
        if first is None and form.parity_ok(vals) and form.prime.admits(n - s, prime):
            first = Witness(n, n - s, idx, vals)
    status = "exception" if first is None else "witness"
    return ExceptionRecord(form.name, n, checked, status, first)


# ---------------------------------------------------------------------------
# range engine

def _constraint_mask(form: Form, flags: np.ndarray, start: int) -> np.ndarray:
    """Restrict a primality array for [start, start+len) to admissible p."""
    pc = form.prime
    if pc.kind == "odd_prime" and start <= 2 < start + len(flags):
        flags[2 - start] = False
    elif pc.kind == "prime_in_class":
        r = (pc.residue - start) % pc.modulus
        keep = np.zeros(len(flags), dtype=bool)
        keep[r :: pc.modulus] = True
        flags &= keep
    elif pc.kind == "zero_or_prime" and start == 0 and len(flags):
        flags[0] = True
    return flags


@lru_cache(maxsize=4)
def _low_table(limit: int, form: Form) -> np.ndarray:
    return _constraint_mask(form, sieve_range(0, limit).dense(), 0)


def _scalar_ok(form: Form, v: int) -> bool:
    return form.prime.admits(v, is_prime_64)


def _classify_segment(form: Form, sums: np.ndarray, low_limit: int, slack: int, seg: tuple[int, int]):
    """Exceptions and verified count for applicable n in [a, b)."""
    a, b = seg
    span = b - a
    ns = np.arange(a, b, dtype=np.int64)
    app = np.ones(span, dtype=bool)
    if form.domain_min is not None:
        app &= ns > form.domain_min
    if form.domain_odd:
        app &= (ns & 1) == 1
    n_app = int(np.count_nonzero(app))
    if n_app == 0:
        return [], 0
    sums = sums[sums <= b - 1]
    base = max(0, a - slack)
    if b <= low_limit:
        pr = _low_table(low_limit, form)[base:b]
    else:
        pr = _constraint_mask(form, sieve_range(base, b).dense(), base)
    low = _low_table(low_limit, form) if low_limit else None

    covered = ~app
    j = 0
    # dense phase: every n in the segment has its residual inside pr
    while j < len(sums):
        s = int(sums[j])
        if base > 0 and s > a - base:
            break
        start = max(a, base + s)
        if start < b:
            covered[start - a :] |= pr[start - s - base : b - s - base]
        j += 1
        if j % 4 == 0 and np.count_nonzero(~covered) * 64 < span:
            break
    left = np.flatnonzero(~covered).astype(np.int64) + a
    # sparse phase over the survivors
    while j < len(sums) and len(left):
        s = int(sums[j])
        j += 1
        v = left - s
        hit = np.zeros(len(left), dtype=bool)
        ok = v >= base
        hit[ok] = pr[v[ok] - base]
        rest = np.flatnonzero(~ok & (v >= 0))
        if len(rest):
            vr = v[rest]
            if low is not None:
                in_low = vr < low_limit
                hit[rest[in_low]] = low[vr[in_low]]
                rest, vr = rest[~in_low], vr[~in_low]
            for k, val in zip(rest.tolist(), vr.tolist()):
                hit[k] = _scalar_ok(form, val)
        left = left[~hit]
    return left.tolist(), n_app - len(left)


def _save_checkpoint(path: str, state: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(state, fh, indent=1)
    os.replace(tmp, path)


def load_checkpoint(path: str) -> dict | None:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        return None


def verify_range(
    form: Form,
    lo: int,
    hi: int,
    policy: VerifyPolicy | None = None,
    on_record: Callable[[dict], None] | None = None,
) -> VerifyReport:
    """Classify every applicable n in [lo, hi).

    ``on_record`` receives one JSON-ready dict per exception (and per witness
    when ``policy.emit_witnesses``) in ascending n, and is not called again
    for records emitted before a resumed checkpoint.
    """
    policy = policy or VerifyPolicy()
    _check_form(form)
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    if hi > MAX_RANGE_HI:
        raise OverflowError("range mode is limited to hi <= 2**63; use confirm for single values")
    t0 = time.perf_counter()
    seg_size = policy.segment_size
    state = {
        "form": form.name,
        "expression": form.expression(),
        "lo": str(lo),
        "hi": str(hi),
        "segment_size": seg_size,
        "next_n": str(lo),
        "exceptions": [],
        "verified_count": 0,
    }
    if policy.checkpoint and policy.resume:
        saved = load_checkpoint(policy.checkpoint)
        if saved:
            keys = ("expression", "lo", "hi", "segment_size")
            if any(saved.get(k) != state[k] for k in keys):
                raise ValueError(f"checkpoint {policy.checkpoint} belongs to a different run")
            state = saved
            log.info("resuming %s at n=%s", form.name, state["next_n"])
    start = int(state["next_n"])
    exceptions = [int(x) for x in state["exceptions"]]
    verified = int(state["verified_count"])

    sums = allowed_sums(form, hi - 1)
    low_limit = min(hi, LOW_SIEVE_CAP)
    slack = max(seg_size, 1 << 22)
    segments = [(a, min(a + seg_size, hi)) for a in range(start, hi, seg_size)]
    work = partial(_classify_segment, form, sums, low_limit, slack)
    every = policy.checkpoint_every or -(-CHECKPOINT_CANDIDATES // seg_size)
    batch = max(1, every)
    confirmed: dict[int, ExceptionRecord] = {}

    def record_for(n: int) -> ExceptionRecord:
        if n not in confirmed:
            confirmed[n] = _confirmed(form, n, policy)
        return confirmed[n]

    pool = ProcessPoolExecutor(policy.workers) if policy.workers > 1 else None
    try:
        for k in range(0, len(segments), batch):
            chunk = segments[k : k + batch]
            results = pool.map(work, chunk) if pool else map(work, chunk)
            for (a, b), (exc, ver) in zip(chunk, results):
                verified += ver
                if on_record and policy.emit_witnesses:
                    _emit_witnesses(form, a, b, set(exc), policy, record_for, on_record)
                elif on_record:
                    for n in exc:
                        on_record(record_for(n).to_record())
                exceptions.extend(exc)
            state.update(next_n=str(chunk[-1][1]), exceptions=[str(x) for x in exceptions], verified_count=verified)
            if policy.checkpoint:
                _save_checkpoint(policy.checkpoint, state)
            log.debug("%s: done through %d, %d exceptions", form.name, chunk[-1][1], len(exceptions))
    finally:
        if pool:
            pool.shutdown()
    records = [record_for(n) for n in exceptions]
    return VerifyReport(
        form.name, lo, hi, records, verified, time.perf_counter() - t0, policy.describe()
    )


def _confirmed(form: Form, n: int, policy: VerifyPolicy) -> ExceptionRecord:
    rec = confirm_exception(form, n, policy.extra_rounds)
    if rec.status != "exception":
        raise RuntimeError(f"range engine reported {n} for {form.name} but a witness exists: {rec.witness}")
    return rec


def _emit_witnesses(form, a, b, exc, policy, record_for, on_record):
    for n in range(a, b):
        if not applicable(form, n):
            continue
        if n in exc:
            on_record(record_for(n).to_record())
        else:
            w = find_witness(form, n, policy.extra_rounds)
            on_record(w.to_record(form))


def crocker_scan(bound: int, min_exponent: int = 1, policy: VerifyPolicy | None = None) -> list[int]:
    """Odd n in (5, bound] not of the form p + 2^a + 2^b with a, b >= min_exponent."""
    if min_exponent not in (0, 1):
        raise ValueError("min_exponent must be 0 or 1")
    if bound <= 5:
        return []
    form = builtin_form(f"crocker{min_exponent}")
    return verify_range(form, 6, bound + 1, policy).exception_values


# ---------------------------------------------------------------------------
# Goldbach

@dataclass(frozen=True)
class GoldbachWitness:
    n: int
    p: int
    q: int
    q_index: int  # q is the q_index-th prime, 1-based

    def to_record(self) -> dict:
        return {
            "form": "goldbach",
            "n": str(self.n),
            "status": "witness",
            "p": str(self.p),
            "terms": [{"seq": "prime", "index": self.q_index, "value": str(self.q)}],
        }


def goldbach_check(lo: int, hi: int, emit_witnesses: bool = False) -> VerifyReport:
    """Every even n in [lo, hi) as p + q with primes p <= q (smallest p)."""
    if not 4 <= lo < hi:
        raise ValueError("need 4 <= lo < hi")
    t0 = time.perf_counter()
    flags = sieve_range(0, hi).dense()
    primes = np.flatnonzero(flags)
    first = lo + (lo & 1)
    left = np.arange(first, hi, 2, dtype=np.int64)
    best = np.zeros(len(left), dtype=np.int64)
    pos = np.arange(len(left))
    exceptions = []
    for p in primes.tolist():
        if not len(left):
            break
        too_big = left < 2 * p
        if too_big.any():
            exceptions.extend(left[too_big].tolist())
            left, pos = left[~too_big], pos[~too_big]
        hit = flags[left - p]
        best[pos[hit]] = p
        left, pos = left[~hit], pos[~hit]
    exceptions.extend(left.tolist())
    exceptions.sort()
    report = VerifyReport(
        "goldbach",
        lo,
        hi,
        [ExceptionRecord("goldbach", n, 0) for n in exceptions],
        int(np.count_nonzero(best)),
        time.perf_counter() - t0,
        {"primality": "sieve", "workers": 1},
    )
    if emit_witnesses:
        rank = np.cumsum(flags, dtype=np.int64)
        ns = np.arange(first, hi, 2, dtype=np.int64)
        for n, p in zip(ns.tolist(), best.tolist()):
            if p:
                report.witnesses.append(GoldbachWitness(n, p, n - p, int(rank[n - p])).to_record())
    return report
