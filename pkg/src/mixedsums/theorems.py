"""Computational checks of the divisor-witness and distinct-sums results.

* Part (i): for m = 2 (mod 4) with m+1 prime and n >= 3,
  d_n = (m^(2^n - 1) - 1)/(m - 1) - m^n is not a prime power. The divisor
  m^(2^k) + 1 with 2^k || n+1 divides m*d_n.
* Part (ii): D = (m^(2^n) - 1)/(m - 1) - m^a - m^b has the proper divisor
  m^(2^k) + 1 with 2^k || a-b.
* Distinct sums: u_m + a*u_n (m >= 0, n >= 1) never collide for the
  recurrence u_{i+1} = a*u_i + u_{i-1}, except 4 = u_0 + 2u_2 = u_2 + 2u_1
  when a = 2.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

from mixedsums.primality import is_prime, is_probable_prime, prime_power_form
from mixedsums.sequences import nth_term

PRIME_POWER_LIMIT = 1 << 128


def _v2(x: int) -> int:
    return (x & -x).bit_length() - 1


def _repunit(m: int, length: int) -> int:
    """1 + m + ... + m^(length-1)."""
    return (m**length - 1) // (m - 1)


@dataclass(frozen=True)
class Thm1Verdict:
    part: str
    m: int
    n: int
    value: int  # d_n (part i) or D (part ii)
    k: int
    divisor_witness: int
    divides: bool
    a: int | None = None
    b: int | None = None
    is_prime_power: bool | None = None  # None: not checked (value >= 2**128)
    proper_divisor: bool | None = None
    residue_ok: bool | None = None  # d_n = 1 + m + m^2 (mod m^3)
    value_is_prime: bool | None = None
    asserted: bool = True  # False for inputs outside the theorem's hypotheses

    @property
    def fully_checked(self) -> bool:
        if self.part == "i":
            return self.is_prime_power is not None
        return True

    @property
    def holds(self) -> bool:
        """The theorem's conclusion as witnessed by this verdict."""
        if self.part == "i":
            return self.divides and self.is_prime_power is not True and bool(self.residue_ok)
        return self.divides and bool(self.proper_divisor)

    def to_record(self) -> dict:
        rec = {
            "theorem": "p22",
            "part": self.part,
            "m": self.m,
            "n": self.n,
            "value": str(self.value),
            "k": self.k,
            "divisor_witness": str(self.divisor_witness),
            "divides": self.divides,
            "holds": self.holds,
            "asserted": self.asserted,
        }
        if self.part == "i":
            rec["is_prime_power"] = self.is_prime_power
            rec["residue_ok"] = self.residue_ok
        else:
            rec.update(a=self.a, b=self.b, proper_divisor=self.proper_divisor, value_is_prime=self.value_is_prime)
        return rec


def d_value(m: int, n: int) -> int:
    """d_n = (m^(2^n - 1) - 1)/(m - 1) - m^n."""
    if m < 2 or n < 3:
        raise ValueError("need m >= 2 and n >= 3")
    return _repunit(m, 2**n - 1) - m**n


def check_thm1_part_i(m: int, n: int) -> Thm1Verdict:
    if m % 4 != 2:
        raise ValueError(f"m={m} is not 2 mod 4")
    if not is_prime(m + 1):
        raise ValueError(f"m+1={m + 1} is not prime")
    if n < 3:
        raise ValueError("n must be >= 3")
    d = d_value(m, n)
    k = _v2(n + 1)
    witness = m ** (2**k) + 1
    prime_power = None
    if d < PRIME_POWER_LIMIT:
        prime_power = prime_power_form(d) is not None
    return Thm1Verdict(
        part="i",
        m=m,
        n=n,
        value=d,
        k=k,
        divisor_witness=witness,
        divides=(m * d) % witness == 0,
        is_prime_power=prime_power,
        residue_ok=d % m**3 == (1 + m + m * m) % m**3,
    )


def check_thm1_part_ii(m: int, n: int, a: int, b: int, allow_small_n: bool = False) -> Thm1Verdict:
    """Verdict for D = (m^(2^n)-1)/(m-1) - m^a - m^b.

    n = 2 lies outside the default domain; with ``allow_small_n`` it is
    evaluated and reported with ``asserted=False``.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if n < 3 and not (allow_small_n and n == 2):
        raise ValueError("n must be >= 3 (n = 2 needs allow_small_n)")
    if not a > b >= 0:
        raise ValueError("need a > b >= 0")
    total = _repunit(m, 2**n)
    if m**a + m**b >= total:
        raise ValueError("need m^a + m^b < (m^(2^n) - 1)/(m - 1)")
    D = total - m**a - m**b
    k = _v2(a - b)
    witness = m ** (2**k) + 1
    return Thm1Verdict(
        part="ii",
        m=m,
        n=n,
        a=a,
        b=b,
        value=D,
        k=k,
        divisor_witness=witness,
        divides=D % witness == 0,
        proper_divisor=D % witness == 0 and witness < D,
        value_is_prime=is_probable_prime(D),
        asserted=n >= 3,
    )


def part_ii_pairs(m: int, n: int, max_exp: int | None = None) -> list[tuple[int, int]]:
    """All (a, b) with a > b >= 0 inside part (ii)'s hypothesis."""
    total = _repunit(m, 2**n)
    top = 2**n if max_exp is None else max_exp
    return [(a, b) for a in range(top + 1) for b in range(a) if m**a + m**b < total]


def telescoping_identity_check(m: int, n: int) -> bool:
    """(m-1) * prod_{k<n} (m^(2^k)+1) == m^(2^n) - 1."""
    if m < 2 or n < 2:
        raise ValueError("need m, n >= 2")
    return (m - 1) * math.prod(m ** (2**k) + 1 for k in range(n)) == m ** (2**n) - 1


# ---------------------------------------------------------------------------
# distinct sums u_m + a*u_n

@dataclass(frozen=True)
class CollisionRecord:
    a: int
    x: int
    representations: tuple[tuple[int, int], ...]

    def to_record(self) -> dict:
        return {"theorem": "uau", "a": self.a, "x": str(self.x), "representations": [list(r) for r in self.representations]}


def recurrence_terms(a: int, count: int) -> list[int]:
    """u_0..u_{count-1} for u_0=0, u_1=1, u_{i+1} = a*u_i + u_{i-1}."""
    u = [0, 1]
    while len(u) < count:
        u.append(a * u[-1] + u[-2])
    return u[:count]


def distinct_sums_check(a: int, max_index: int) -> list[CollisionRecord]:
    """Every value hit twice by u_m + a*u_n, 0 <= m <= N, 1 <= n <= N."""
    if a < 2 or max_index < 2:
        raise ValueError("need a >= 2 and max_index >= 2")
    u = recurrence_terms(a, max_index + 1)
    sums = sorted((u[m] + a * u[n], m, n) for m in range(max_index + 1) for n in range(1, max_index + 1))
    out = []
    i = 0
    while i < len(sums):
        j = i
        while j + 1 < len(sums) and sums[j + 1][0] == sums[i][0]:
            j += 1
        if j > i:
            out.append(CollisionRecord(a, sums[i][0], tuple((m, n) for _, m, n in sums[i : j + 1])))
        i = j + 1
    return out


def pell_pair_encode(m: int, n: int) -> int:
    if m < 1 or n < 1:
        raise ValueError("Pell pair codes use m, n >= 1")
    return nth_term("P", m) + 2 * nth_term("P", n)


def pell_pair_decode(x: int) -> tuple[int, int] | None:
    """The unique (m, n), m, n >= 1, with P_m + 2P_n = x, or None.

    All candidates are enumerated; more than one would contradict the
    uniqueness of the code and raises AssertionError.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    index_of = {}
    i = 1
    while nth_term("P", i) <= x:
        index_of[nth_term("P", i)] = i
        i += 1
    found = []
    for n in range(1, i):
        rest = x - 2 * nth_term("P", n)
        if rest < 1:
            break
        if rest in index_of:
            found.append((index_of[rest], n))
    if len(found) > 1:
        raise AssertionError(f"Pell pair code {x} is not unique: {found}")
    return found[0] if found else None


# ---------------------------------------------------------------------------
# F_k + F_l = F_m + F_n

def fib_sum_coincidences(max_index: int, min_index: int = 0) -> list[tuple[int, list[tuple[int, int]]]]:
    """Values F_k + F_l (min_index <= k <= l <= max_index) reached by >= 2 index pairs."""
    if max_index < 3:
        raise ValueError("max_index must be >= 3")
    groups: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for k in range(min_index, max_index + 1):
        for l in range(k, max_index + 1):
            groups[nth_term("F", k) + nth_term("F", l)].append((k, l))
    return [(v, pairs) for v, pairs in sorted(groups.items()) if len(pairs) > 1]


def fib_family_present(coincidences, max_index: int) -> list[int]:
    """n in [3, max_index) for which F_{n+1} + F_{n-2} = 2F_n shows up as a coincidence."""
    by_value = dict(coincidences)
    present = []
    for n in range(3, max_index):
        pairs = by_value.get(2 * nth_term("F", n), [])
        if (n - 2, n + 1) in pairs and (n, n) in pairs:
            present.append(n)
    return present
