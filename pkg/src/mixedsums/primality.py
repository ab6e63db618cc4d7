"""Primality at three scales plus small factorisation.

* :func:`sieve_range` -- odd-only segmented sieve of Eratosthenes over a window.
* :func:`is_prime_64` -- deterministic Miller-Rabin for n < 2**64 using the
  seven-base set of Jim Sinclair (2, 325, 9375, 28178, 450775, 9780504,
  1795265022), which has no strong pseudoprime below 2**64.
* :func:`is_probable_prime` -- Baillie-PSW (strong base-2 test plus strong
  Lucas test with Selfridge parameters), optionally followed by extra
  random-base Miller-Rabin rounds.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

#: odd numbers per inner sieving block; results do not depend on it
DEFAULT_SEGMENT_BITS = 18
#: largest window sieve_range will allocate (numbers, not bytes)
MAX_SIEVE_SPAN = 1 << 33
MAX_BASE_PRIME_LIMIT = 1 << 32

MR64_BASES = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)

_SMALL_PRIMES = tuple(p for p in range(2, 1000) if all(p % q for q in range(2, math.isqrt(p) + 1)))
_SMALL_PRIMORIAL = math.prod(_SMALL_PRIMES)
_SMALL_SET = frozenset(_SMALL_PRIMES)
_TRIAL_LIMIT_SQ = 1000 * 1000


class SieveTooLarge(ValueError):
    """The requested window exceeds the configured memory budget."""


@lru_cache(maxsize=8)
def _base_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain sieve)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class SieveSegment:
    """Primality of every integer in ``[lo, hi)``.

    ``bits[i]`` is the primality of the odd number ``first_odd + 2*i``; the
    prime 2 is tracked separately by ``has_two``.
    """

    lo: int
    hi: int
    bits: np.ndarray

    @property
    def first_odd(self) -> int:
        return self.lo | 1

    @property
    def has_two(self) -> bool:
        return self.lo <= 2 < self.hi

    def is_prime(self, n: int) -> bool:
        if not self.lo <= n < self.hi:
            raise IndexError(f"{n} outside sieved window [{self.lo}, {self.hi})")
        if n % 2 == 0:
            return n == 2
        return bool(self.bits[(n - self.first_odd) // 2])

    def primes(self) -> np.ndarray:
        odd = self.first_odd + 2 * np.flatnonzero(self.bits).astype(np.int64)
        if self.has_two:
            return np.concatenate([np.array([2], dtype=np.int64), odd])
        return odd

    def count(self) -> int:
        return int(np.count_nonzero(self.bits)) + int(self.has_two)

    def dense(self) -> np.ndarray:
        """Boolean array ``out`` with ``out[k]`` the primality of ``lo + k``."""
        out = np.zeros(self.hi - self.lo, dtype=bool)
        start = self.first_odd - self.lo
        out[start::2] = self.bits[: len(out[start::2])]
        if self.has_two:
            out[2 - self.lo] = True
        return out


def sieve_range(lo: int, hi: int, segment_bits: int = DEFAULT_SEGMENT_BITS) -> SieveSegment:
    """Sieve ``[lo, hi)`` exactly.

    Work is done in blocks of ``2**segment_bits`` odd numbers so the working
    set stays cache-sized; the result is independent of the block size.
    """
    if not 0 <= lo <= hi:
        raise ValueError("need 0 <= lo <= hi")
    if hi - lo > MAX_SIEVE_SPAN:
        raise SieveTooLarge(f"window of {hi - lo} numbers exceeds budget {MAX_SIEVE_SPAN}")
    root = math.isqrt(max(hi - 1, 0))
    if root > MAX_BASE_PRIME_LIMIT:
        raise SieveTooLarge("base primes for this window exceed the memory budget")
    first_odd = lo | 1
    n_odd = max(0, (hi - first_odd + 1) // 2)
    bits = np.ones(n_odd, dtype=bool)
    if n_odd == 0:
        return SieveSegment(lo, hi, bits)
    base = _base_primes(root)[1:]  # odd base primes
    block = 1 << segment_bits
    for b0 in range(0, n_odd, block):
        b1 = min(n_odd, b0 + block)
        view = bits[b0:b1]
        blk_lo = first_odd + 2 * b0  # odd number at view[0]
        blk_hi = first_odd + 2 * b1  # exclusive
        for p in base.tolist():
            pp = p * p
            if pp >= blk_hi:
                break
            start = max(pp, -(-blk_lo // p) * p)
            if start % 2 == 0:
                start += p
            if start < blk_hi:
                view[(start - blk_lo) // 2 :: p] = False
    if first_odd == 1:
        bits[0] = False  # 1 is not prime
    return SieveSegment(lo, hi, bits)


def _strong_test(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _split(n: int) -> tuple[int, int]:
    d = n - 1
    s = (d & -d).bit_length() - 1
    return d >> s, s


def _small_check(n: int) -> bool | None:
    """Decide n via trial division by primes < 1000, or return None."""
    if n < 2:
        return False
    if n in _SMALL_SET:
        return True
    if math.gcd(n, _SMALL_PRIMORIAL) != 1:
        return False
    if n < _TRIAL_LIMIT_SQ:
        return True
    return None


def is_prime_64(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2**64."""
    if n >= 1 << 64:
        raise ValueError("is_prime_64 requires n < 2**64; use is_probable_prime")
    small = _small_check(n)
    if small is not None:
        return small
    d, s = _split(n)
    for a in MR64_BASES:
        a %= n
        if a == 0:
            continue
        if not _strong_test(n, a, d, s):
            return False
    return True


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    """Strong Lucas probable-prime test, Selfridge method A (P=1)."""
    r = math.isqrt(n)
    if r * r == n:
        return False
    D = 5
    while True:
        j = jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = _split(n + 2)  # n + 1 = d * 2**s
    # binary Lucas chain for U_d, V_d
    U, V, Qk = 1, P, Q % n
    inv2 = (n + 1) // 2
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def is_probable_prime(n: int, extra_rounds: int = 0) -> bool:
    """Baillie-PSW test, plus ``extra_rounds`` Miller-Rabin rounds.

    Extra bases are drawn from a generator seeded by ``n`` so a given call
    is reproducible.
    """
    small = _small_check(n)
    if small is not None:
        return small
    d, s = _split(n)
    if not _strong_test(n, 2, d, s):
        return False
    if not _strong_lucas(n):
        return False
    if extra_rounds:
        rng = random.Random(n)
        for _ in range(extra_rounds):
            if not _strong_test(n, rng.randrange(3, n - 1), d, s):
                return False
    return True


def is_prime(n: int, extra_rounds: int = 0) -> bool:
    """Exact below 2**64, Baillie-PSW above."""
    if n < 1 << 64:
        return is_prime_64(n)
    return is_probable_prime(n, extra_rounds)


def _brent(n: int, seed: int) -> int:
    """One Pollard-Brent run; returns a factor of n, possibly n itself."""
    rng = random.Random(seed)
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def _factor_into(n: int, out: list[int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out.append(n)
        return
    r = math.isqrt(n)
    if r * r == n:
        _factor_into(r, out)
        _factor_into(r, out)
        return
    seed = 1
    while True:
        f = _brent(n, seed)
        if 1 < f < n:
            break
        seed += 1
    _factor_into(f, out)
    _factor_into(n // f, out)


def factor_small(n: int) -> list[int]:
    """Prime factorisation (sorted, with multiplicity) of 2 <= n < 2**128."""
    if n < 2:
        raise ValueError("factor_small requires n >= 2")
    if n.bit_length() > 128:
        raise ValueError("factor_small is limited to 128-bit integers")
    out: list[int] = []
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            out.append(p)
            n //= p
    _factor_into(n, out)
    return sorted(out)


def integer_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) computed exactly."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)  # over-estimate
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def prime_power_form(n: int, extra_rounds: int = 0) -> tuple[int, int] | None:
    """Return (p, a) with n == p**a, p prime, a >= 1; None if n is not a prime power."""
    if n < 2:
        return None
    for a in range(n.bit_length(), 0, -1):
        r = integer_root(n, a)
        if r >= 2 and r**a == n and is_prime(r, extra_rounds):
            return r, a
    return None
