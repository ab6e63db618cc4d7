"""Exact generation of the integer sequences used by the representation forms.

Every value is a Python int. Values for each sequence are cached in a
growing list, and :func:`terms_below` hands out immutable tables that can
be shared between worker processes.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

INT64_MAX = (1 << 63) - 1


@dataclass(frozen=True)
class SequenceDef:
    """Descriptor of a monotone (past a short prefix) integer sequence.

    ``rule`` is one of ``"recurrence"``, ``"polynomial"``, ``"power"`` or
    ``"catalan"``. For recurrences, ``initial`` is ``(a0, a1)`` and
    ``coefficients`` is ``(alpha, beta)`` with a[n+1] = alpha*a[n] + beta*a[n-1].
    ``increasing_from`` is the first index from which the sequence is
    strictly increasing.
    """

    id: str
    rule: str
    min_enumeration_index: int
    growth_ratio: float
    increasing_from: int
    initial: tuple[int, int] | None = None
    coefficients: tuple[int, int] | None = None
    base: int | None = None

    def __post_init__(self):
        if self.rule == "recurrence" and (self.initial is None or self.coefficients is None):
            raise ValueError(f"recurrence {self.id} needs initial values and coefficients")
        if self.rule == "power" and (self.base is None or self.base < 2):
            raise ValueError(f"power sequence {self.id} needs a base >= 2")


_SQRT2 = math.sqrt(2.0)
_PHI = (1 + math.sqrt(5.0)) / 2

_REGISTRY: dict[str, SequenceDef] = {
    "F": SequenceDef("F", "recurrence", 2, _PHI, 2, initial=(0, 1), coefficients=(1, 1)),
    "L": SequenceDef("L", "recurrence", 0, _PHI, 1, initial=(2, 1), coefficients=(1, 1)),
    "P": SequenceDef("P", "recurrence", 1, 1 + _SQRT2, 0, initial=(0, 1), coefficients=(2, 1)),
    "Q": SequenceDef("Q", "recurrence", 0, 1 + _SQRT2, 1, initial=(2, 2), coefficients=(2, 1)),
    # half of the even Fibonacci numbers: u_n = F_{3n} / 2
    "U": SequenceDef("U", "recurrence", 1, 2 + math.sqrt(5.0), 0, initial=(0, 1), coefficients=(4, 1)),
    "C": SequenceDef("C", "catalan", 0, 4.0, 1),
    "TRI": SequenceDef("TRI", "polynomial", 0, 1.0, 0),
}

_POW_RE = re.compile(r"POW([0-9]+)$")


def get_sequence(seq_id: str) -> SequenceDef:
    """Look up a sequence by id; ``POW<m>`` ids are created on demand."""
    if seq_id in _REGISTRY:
        return _REGISTRY[seq_id]
    m = _POW_RE.match(seq_id)
    if m:
        base = int(m.group(1))
        if base < 2:
            raise KeyError(f"unknown sequence {seq_id!r}: power base must be >= 2")
        return SequenceDef(seq_id, "power", 1, float(base), 0, base=base)
    raise KeyError(f"unknown sequence {seq_id!r}")


def sequence_ids() -> list[str]:
    return sorted(_REGISTRY) + ["POW<m>"]


class _Cache:
    """Grow-only list of values for one sequence."""

    def __init__(self, seq: SequenceDef):
        self.seq = seq
        self.values: list[int] = []
        self.lock = threading.Lock()

    def _next(self, i: int) -> int:
        seq, vals = self.seq, self.values
        if seq.rule == "recurrence":
            if i < 2:
                return seq.initial[i]
            alpha, beta = seq.coefficients
            return alpha * vals[i - 1] + beta * vals[i - 2]
        if seq.rule == "catalan":
            if i == 0:
                return 1
            # C_i = C_{i-1} * 2(2i-1) / (i+1), always exact
            return vals[i - 1] * 2 * (2 * i - 1) // (i + 1)
        if seq.rule == "polynomial":
            return i * (i + 1) // 2
        return seq.base**i

    def extend_to(self, n: int) -> None:
        with self.lock:
            while len(self.values) <= n:
                self.values.append(self._next(len(self.values)))


_caches: dict[str, _Cache] = {}


def _cache(seq_id: str) -> _Cache:
    c = _caches.get(seq_id)
    if c is None:
        c = _caches.setdefault(seq_id, _Cache(get_sequence(seq_id)))
    return c


def nth_term(seq_id: str, n: int) -> int:
    """Exact n-th term of the named sequence."""
    if n < 0:
        raise ValueError("negative indices are not supported")
    c = _cache(seq_id)
    if c.seq.rule == "polynomial":
        return n * (n + 1) // 2
    if c.seq.rule == "power":
        return c.seq.base**n
    c.extend_to(n)
    return c.values[n]


@dataclass(frozen=True)
class TermTable:
    """All terms of ``sequence`` with index >= ``min_index`` and value <= ``bound``."""

    sequence: SequenceDef
    bound: int
    min_index: int
    entries: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.entries)

    def as_array(self) -> np.ndarray:
        """int64 mirror of the values; refuses tables with values >= 2**63."""
        if self.entries and max(self.values) > INT64_MAX:
            raise OverflowError("term table does not fit in int64")
        return np.array(self.values, dtype=np.int64)


@lru_cache(maxsize=512)
def terms_below(seq_id: str, bound: int, min_index: int = 0) -> TermTable:
    """Complete table of terms with index >= min_index and value <= bound."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    seq = get_sequence(seq_id)
    entries = []
    i = 0
    while True:
        v = nth_term(seq_id, i)
        if v > bound and i >= seq.increasing_from:
            break
        if i >= min_index and v <= bound:
            entries.append((i, v))
        i += 1
    return TermTable(seq, bound, min_index, tuple(entries))
