"""Exact representation counts r(n), s(n) = r(n)/ln n, and Hardy-Littlewood estimates.

Counting enumerates index tuples (so F_1 and F_2, or Q_0 and Q_1, are
separate slots even when their values coincide) and never short-circuits.
For large n the residuals n - sum are first screened by a vectorised
small-prime residue filter; the survivors go through Baillie-PSW.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from mixedsums.forms import Form
from mixedsums.primality import factor_small, is_prime, sieve_range
from mixedsums.verifier import iter_combos, term_tables

_LN2 = math.log(2.0)
_FILTER_PRIMES = sieve_range(0, 2000).primes()[1:]  # odd primes below 2000
_FILTER_MAX = int(_FILTER_PRIMES[-1])
#: below this, residuals are decided by table lookup
_SMALL_TABLE = 1 << 20


@lru_cache(maxsize=1)
def _small_table() -> np.ndarray:
    return sieve_range(0, _SMALL_TABLE).dense()


def ln_big(n: int) -> float:
    """Natural logarithm of a positive integer of any size."""
    if n < 1:
        raise ValueError("ln_big requires n >= 1")
    k = n.bit_length()
    if k <= 53:
        return math.log(n)
    shift = k - 53
    return math.log(n >> shift) + shift * _LN2


@dataclass(frozen=True)
class CountResult:
    form: str
    n: int
    r: int
    ln_n: float
    s: float
    policy: str
    witnesses: tuple = field(default=(), compare=False, repr=False)

    def to_record(self) -> dict:
        return {
            "form": self.form,
            "n": str(self.n),
            "r": self.r,
            "ln_n": self.ln_n,
            "s": self.s,
            "policy": self.policy,
        }


def _policy(extra_rounds: int) -> str:
    return f"BPSW (strong base-2 + strong Lucas) + {extra_rounds} extra MR rounds above 2^64; exact below"


def _count_small(form: Form, n: int, keep: bool):
    """Direct enumeration with exact primality; used for n below 2**64."""
    table = _small_table()
    r, wits = 0, []
    for idx, vals, s in iter_combos(form, n):
        if not form.parity_ok(vals):
            continue
        p = n - s
        ok = form.prime.admits(p, lambda x: bool(table[x]) if x < _SMALL_TABLE else is_prime(x))
        if ok:
            r += 1
            if keep:
                wits.append((p, idx))
    return r, wits


def _count_big(form: Form, n: int, extra_rounds: int, keep: bool):
    tables = term_tables(form, n)
    if any(not t for t in tables):
        return 0, []
    # every parity-admissible tuple with a non-negative residual
    combos = [(idx, n - s) for idx, vals, s in iter_combos(form, n) if form.parity_ok(vals)]
    if not combos:
        return 0, []
    pos = [{i: j for j, (i, _, _) in enumerate(tab)} for tab in tables]
    where = np.array([[pos[t][i] for t, i in enumerate(idx)] for idx, _ in combos], dtype=np.int64)
    composite = np.zeros(len(combos), dtype=bool)
    for q in _FILTER_PRIMES.tolist():
        res = np.full(len(combos), n % q, dtype=np.int64)
        for t, tab in enumerate(tables):
            cmod = np.array([c % q for _, _, c in tab], dtype=np.int64)
            res -= cmod[where[:, t]]
        composite |= res % q == 0
    cache: dict[int, bool] = {}
    r, wits = 0, []
    for k, (idx, p) in enumerate(combos):
        if p <= _FILTER_MAX:
            ok = form.prime.admits(p, is_prime)
        elif composite[k]:
            continue
        else:
            if p not in cache:
                cache[p] = form.prime.admits(p, lambda x: is_prime(x, extra_rounds))
            ok = cache[p]
        if ok:
            r += 1
            if keep:
                wits.append((p, idx))
    return r, wits


def representation_count(form: Form, n: int, extra_rounds: int = 0, keep_witnesses: bool = False) -> CountResult:
    """Number of index tuples giving n = p + sum of terms under ``form``.

    The form's domain is ignored (counting is meaningful for any n >= 2).
    """
    if n < 2:
        raise ValueError("counting requires n >= 2")
    if n < 1 << 64:
        r, wits = _count_small(form, n, keep_witnesses)
    else:
        r, wits = _count_big(form, n, extra_rounds, keep_witnesses)
    ln_n = ln_big(n)
    return CountResult(form.name, n, r, ln_n, r / ln_n, _policy(extra_rounds), tuple(wits))


@dataclass(frozen=True)
class WindowStats:
    base: int
    results: tuple[CountResult, ...]
    argmin: int  # offset with the smallest s
    argmax: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["offset", "r", "ln_n", "s"])
        for res in self.results:
            w.writerow([res.n - self.base, res.r, repr(res.ln_n), repr(res.s)])
        return buf.getvalue()


def window_stats(form: Form, base: int, offsets: Iterable[int], extra_rounds: int = 0) -> WindowStats:
    """Count at base + offset for every offset; report where s is smallest and largest."""
    offsets = list(offsets)
    if not offsets:
        raise ValueError("offsets must be non-empty")
    results = tuple(representation_count(form, base + off, extra_rounds) for off in offsets)
    lo = min(range(len(results)), key=lambda k: (results[k].s, k))
    hi = max(range(len(results)), key=lambda k: (results[k].s, -k))
    return WindowStats(base, results, offsets[lo], offsets[hi])


# ---------------------------------------------------------------------------
# Hardy-Littlewood

@dataclass(frozen=True)
class HLConstant:
    value: float
    prime_bound: int
    truncation_error: float  # true constant lies in [value - truncation_error, value]


def hardy_littlewood_constant(prime_bound: int = 10**6) -> HLConstant:
    """Partial product 2 * prod_{3 <= p <= bound} (1 - 1/(p-1)^2).

    Every omitted factor is below one, so the partial product decreases
    towards the constant. The omitted tail is at least
    exp(-sum_{k >= bound} 1/k^2) >= exp(-1/(bound - 1)), which gives the
    reported truncation error.
    """
    if prime_bound < 3:
        raise ValueError("prime_bound must be >= 3")
    primes = sieve_range(0, prime_bound + 1).primes()[1:].astype(np.float64)
    log_prod = math.fsum(np.log1p(-1.0 / (primes - 1.0) ** 2).tolist())
    value = 2.0 * math.exp(log_prod)
    tail = 1.0 / (prime_bound - 1)
    return HLConstant(value, prime_bound, value * -math.expm1(-tail))


def hardy_littlewood_estimate(n: int, prime_bound: int = 10**6) -> float:
    """c * n / ln(n)^2 * prod_{odd p | n} (1 + 1/(p-2)) for even n >= 4."""
    if n < 4 or n % 2:
        raise ValueError("n must be an even integer >= 4")
    c = hardy_littlewood_constant(prime_bound).value
    corr = 1.0
    for p in sorted(set(factor_small(n))):
        if p > 2:
            corr *= 1.0 + 1.0 / (p - 2)
    return c * n / ln_big(n) ** 2 * corr


def goldbach_pair_count(n: int, ordered: bool = True) -> int:
    """Number of (p, q) primes with p + q = n, by sieve."""
    flags = sieve_range(0, n + 1).dense()
    ordered_count = int(np.count_nonzero(flags[: n + 1] & flags[n::-1]))
    if ordered:
        return ordered_count
    return (ordered_count + int(n % 2 == 0 and flags[n // 2])) // 2
