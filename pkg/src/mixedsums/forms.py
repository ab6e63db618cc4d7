"""Representation forms n = p + sum_i c_i * S_i[k_i] ** e_i.

A :class:`Form` bundles a prime constraint, up to three term
specifications, parity constraints on term values and an applicability
domain. Forms have a textual syntax::

    odd_prime + F[i>=2] + F[i>=2] : odd(1)|odd(2) ; n>4
    prime%6=5 + F[i>=0] + F[i>=0]
    odd_prime + 2^[a>=1] + 63*2^[b>=1] ; n>129, odd(n)
    prime + F[i>=0] + L[i>=0] : even(2) ; n>4

Term-level parity is written ``even(k)``/``odd(k)``; a disjunction over
positions is ``odd(i)|odd(j)``. Groups are joined by ``&``. Positions are
1-based.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from mixedsums.primality import is_prime as _exact_prime
from mixedsums.sequences import get_sequence, nth_term

PRIME_KINDS = ("zero_or_prime", "prime", "odd_prime", "prime_in_class")
MAX_EXPONENT = 4


class FormSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}" + (f": {text!r}" if text else ""))
        self.position = position


@dataclass(frozen=True)
class PrimeConstraint:
    kind: str = "prime"
    residue: int | None = None
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in PRIME_KINDS:
            raise ValueError(f"unknown prime constraint {self.kind!r}")
        if self.kind == "prime_in_class":
            if self.modulus is None or self.residue is None or self.modulus < 1:
                raise ValueError("prime_in_class needs a modulus >= 1 and a residue")
            if not 0 <= self.residue < self.modulus:
                raise ValueError("residue must satisfy 0 <= r < m")

    @property
    def min_value(self) -> int:
        return {"zero_or_prime": 0, "prime": 2, "odd_prime": 3}.get(self.kind, 2)

    @property
    def vacuous(self) -> bool:
        """True when the class contains at most one prime."""
        return self.kind == "prime_in_class" and math.gcd(self.residue, self.modulus) > 1

    def admits(self, p: int, is_prime: Callable[[int], bool]) -> bool:
        if self.kind == "zero_or_prime" and p == 0:
            return True
        if p < 2:
            return False
        if self.kind == "odd_prime" and p == 2:
            return False
        if self.kind == "prime_in_class" and p % self.modulus != self.residue:
            return False
        return is_prime(p)

    def render(self) -> str:
        if self.kind == "prime_in_class":
            return f"prime%{self.modulus}={self.residue}"
        return self.kind


@dataclass(frozen=True)
class TermSpec:
    sequence: str
    coefficient: int = 1
    exponent: int = 1
    min_index: int = 0
    value_parity: str | None = None

    def __post_init__(self):
        get_sequence(self.sequence)  # raises KeyError for unknown ids
        if self.coefficient < 1:
            raise ValueError("coefficient must be >= 1")
        if not 1 <= self.exponent <= MAX_EXPONENT:
            raise ValueError(f"exponent must be in [1, {MAX_EXPONENT}]")
        if self.min_index < 0:
            raise ValueError("min_index must be non-negative")
        if self.value_parity not in (None, "odd", "even"):
            raise ValueError("value_parity must be 'odd', 'even' or None")

    def contribution(self, value: int) -> int:
        return self.coefficient * value**self.exponent

    def render(self) -> str:
        s = f"{self.coefficient}*" if self.coefficient != 1 else ""
        if self.sequence.startswith("POW"):
            s += f"{self.sequence[3:]}^[i>={self.min_index}]"
        else:
            s += f"{self.sequence}[i>={self.min_index}]"
        if self.exponent != 1:
            s += f"^{self.exponent}"
        return s


@dataclass(frozen=True)
class Form:
    """An immutable representation form. ``name`` is not part of equality."""

    prime: PrimeConstraint
    terms: tuple[TermSpec, ...] = ()
    odd_disjunction: tuple[int, ...] = ()
    domain_min: int | None = None  # applicable iff n > domain_min
    domain_odd: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if len(self.terms) > 3:
            raise ValueError("a form has at most three terms")
        disj = tuple(sorted(set(self.odd_disjunction)))
        for pos in disj:
            if not 1 <= pos <= len(self.terms):
                raise ValueError(f"parity position {pos} out of range")
        if len(disj) == 1:
            # a one-element disjunction is just a term-level constraint
            pos = disj[0]
            t = self.terms[pos - 1]
            if t.value_parity == "even":
                raise ValueError(f"term {pos} cannot be both odd and even")
            terms = list(self.terms)
            terms[pos - 1] = TermSpec(t.sequence, t.coefficient, t.exponent, t.min_index, "odd")
            object.__setattr__(self, "terms", tuple(terms))
            disj = ()
        object.__setattr__(self, "odd_disjunction", disj)
        if not self.name:
            object.__setattr__(self, "name", format_form(self))

    @property
    def vacuous(self) -> bool:
        return self.prime.vacuous

    def parity_ok(self, values: Sequence[int]) -> bool:
        for t, v in zip(self.terms, values):
            if t.value_parity == "odd" and v % 2 == 0:
                return False
            if t.value_parity == "even" and v % 2 == 1:
                return False
        if self.odd_disjunction:
            return any(values[pos - 1] % 2 == 1 for pos in self.odd_disjunction)
        return True

    def expression(self) -> str:
        return format_form(self)


def applicable(form: Form, n: int) -> bool:
    """True iff n lies in the form's domain (n >= 0 always required)."""
    if n < 0:
        return False
    if form.domain_min is not None and n <= form.domain_min:
        return False
    if form.domain_odd and n % 2 == 0:
        return False
    return True


def format_form(form: Form) -> str:
    parts = [form.prime.render()] + [t.render() for t in form.terms]
    s = " + ".join(parts)
    groups = []
    if form.odd_disjunction:
        groups.append("|".join(f"odd({p})" for p in form.odd_disjunction))
    for pos, t in enumerate(form.terms, 1):
        if t.value_parity:
            groups.append(f"{t.value_parity}({pos})")
    if groups:
        s += " : " + " & ".join(groups)
    dom = []
    if form.domain_min is not None:
        dom.append(f"n>{form.domain_min}")
    if form.domain_odd:
        dom.append("odd(n)")
    if dom:
        s += " ; " + ", ".join(dom)
    return s


# ---------------------------------------------------------------------------
# parser

_TOKEN_RE = re.compile(
    r"(?P<int>-?[0-9]+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>>=|[-+*^\[\]():;|&%=,>])"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise FormSyntaxError("unexpected character", pos, text[pos])
            kind = m.lastgroup
            self.tokens.append((kind, m.group(), pos))
            pos = m.end()
        self.i = 0

    def peek(self, offset: int = 0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else ("eof", "", len(self.text))

    def take(self, kind: str | None = None, value: str | None = None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise FormSyntaxError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        if self.peek()[1] == value:
            self.i += 1
            return True
        return False

    def integer(self) -> int:
        return int(self.take("int")[1])

    def parse(self) -> Form:
        prime = self.prime()
        terms = []
        while self.accept("+"):
            terms.append(self.term())
        disj: list[int] = []
        parities: dict[int, str] = {}
        if self.accept(":"):
            self.parity(disj, parities)
        domain_min, domain_odd = None, False
        if self.accept(";"):
            domain_min, domain_odd = self.domain()
        tok = self.peek()
        if tok[0] != "eof":
            raise FormSyntaxError("trailing input", tok[2], tok[1])
        for pos, par in parities.items():
            if pos > len(terms):
                raise FormSyntaxError(f"parity position {pos} beyond the {len(terms)} terms", 0)
            t = terms[pos - 1]
            terms[pos - 1] = TermSpec(t.sequence, t.coefficient, t.exponent, t.min_index, par)
        if len(terms) > 3:
            raise FormSyntaxError("at most three terms are supported", 0)
        try:
            return Form(PrimeConstraint(*prime), tuple(terms), tuple(disj), domain_min, domain_odd)
        except ValueError as e:
            raise FormSyntaxError(str(e), 0) from None

    def prime(self):
        kind, word, pos = self.take("name")
        if word in ("prime", "odd_prime", "zero_or_prime"):
            if word == "prime" and self.accept("%"):
                m = self.integer()
                self.take(value="=")
                r = self.integer()
                if m < 1 or not 0 <= r < m:
                    raise FormSyntaxError("bad residue class", pos)
                return ("prime_in_class", r, m)
            return (word, None, None)
        raise FormSyntaxError(f"unknown prime constraint {word!r}", pos)

    def term(self) -> TermSpec:
        coef = 1
        kind, val, pos = self.peek()
        if kind == "int" and self.peek(1)[1] == "*":
            coef = self.integer()
            self.take(value="*")
            kind, val, pos = self.peek()
        if kind == "int" and self.peek(1)[1] == "^":
            base = self.integer()
            self.take(value="^")
            seq = f"POW{base}"
        elif kind == "name":
            self.take()
            seq = val
        else:
            raise FormSyntaxError("expected a sequence", pos, val)
        try:
            get_sequence(seq)
        except KeyError:
            raise FormSyntaxError(f"unknown sequence {val!r}", pos) from None
        self.take(value="[")
        self.take("name")
        self.take(value=">=")
        min_index = self.integer()
        self.take(value="]")
        exponent = 1
        if self.accept("^"):
            epos = self.peek()[2]
            exponent = self.integer()
            if not 1 <= exponent <= MAX_EXPONENT:
                raise FormSyntaxError(f"exponent {exponent} out of range 1..{MAX_EXPONENT}", epos)
        if coef < 1:
            raise FormSyntaxError("coefficient must be positive", pos)
        return TermSpec(seq, coef, exponent, min_index)

    def _parity_atom(self) -> tuple[str, int]:
        kind, word, pos = self.take("name")
        if word not in ("odd", "even"):
            raise FormSyntaxError(f"expected odd(...) or even(...), found {word!r}", pos)
        self.take(value="(")
        k = self.integer()
        self.take(value=")")
        return word, k

    def parity(self, disj: list[int], parities: dict[int, str]) -> None:
        while True:
            pos = self.peek()[2]
            group = [self._parity_atom()]
            while self.accept("|"):
                group.append(self._parity_atom())
            if len(group) == 1:
                word, k = group[0]
                parities[k] = word
            else:
                if any(w != "odd" for w, _ in group):
                    raise FormSyntaxError("only odd(...) may be combined with '|'", pos)
                if disj:
                    raise FormSyntaxError("at most one odd disjunction is supported", pos)
                disj.extend(k for _, k in group)
            if not self.accept("&"):
                break

    def domain(self):
        domain_min, domain_odd = None, False
        while True:
            kind, word, pos = self.take("name")
            if word != "n" and word != "odd":
                raise FormSyntaxError(f"bad domain clause {word!r}", pos)
            if word == "n":
                self.take(value=">")
                domain_min = self.integer()
            else:
                self.take(value="(")
                self.take("name", "n")
                self.take(value=")")
                domain_odd = True
            self.accept(",") or self.accept("&")
            if self.peek()[0] == "eof":
                return domain_min, domain_odd


def parse_form(expression: str, name: str = "") -> Form:
    """Parse the textual form syntax into a :class:`Form`."""
    form = _Parser(expression).parse()
    if name:
        object.__setattr__(form, "name", name)
    return form


# ---------------------------------------------------------------------------
# registry

_BUILTINS: dict[str, tuple[str, str]] = {
    "pT1": ("zero_or_prime + TRI[i>=0]", "p + T_x, p zero or prime"),
    "pT2": ("prime + 2*TRI[i>=1] ; n>3, odd(n)", "p + x(x+1), x positive, n odd > 3"),
    "polignac": ("prime + 2^[a>=0] ; n>1, odd(n)", "p + 2^a"),
    "crocker0": ("prime + 2^[a>=0] + 2^[b>=0] ; n>5, odd(n)", "p + 2^a + 2^b, a,b >= 0"),
    "crocker1": ("prime + 2^[a>=1] + 2^[b>=1] ; n>5, odd(n)", "p + 2^a + 2^b, a,b >= 1"),
    "pFF": ("odd_prime + F[i>=2] + F[i>=2] : odd(1)|odd(2) ; n>4", "odd prime + two positive Fibonacci, one odd"),
    "pFF_weak": ("odd_prime + F[i>=2] + F[i>=2] ; n>4", "odd prime + two positive Fibonacci"),
    "pP2P": ("odd_prime + P[i>=0] + 2*P[i>=0] ; n>5", "odd prime + Pell + twice Pell"),
    "pP2P_strict": ("odd_prime + P[i>=1] + 2*P[i>=1] ; n>5", "as pP2P with positive Pell numbers"),
    "pFC": ("odd_prime + F[i>=2] + C[i>=0] ; n>4", "odd prime + positive Fibonacci + Catalan"),
    "pLC": ("odd_prime + L[i>=0] + C[i>=0] ; n>4", "odd prime + Lucas + Catalan"),
    "p222": ("odd_prime + 2^[a>=1] + 2^[b>=1] + 2^[c>=1] ; n>8, odd(n)", "odd prime + three positive powers of two"),
    "p2_3x2": ("prime + 2^[a>=1] + 3*2^[b>=1] ; n>10, odd(n)", "p + 2^a + 3*2^b"),
    "pPP": ("prime + P[i>=0] + P[i>=0] ; n>1", "prime + two Pell numbers"),
    "pP3P": ("prime + P[i>=0] + 3*P[i>=0] ; n>1", "prime + Pell + three times Pell"),
    "pP4P": ("prime + P[i>=0] + 4*P[i>=0] ; n>7", "prime + Pell + four times Pell"),
    "pPQ": ("prime + P[i>=0] + Q[i>=0] ; n>5", "prime + Pell + companion Pell"),
    "pFF2": ("odd_prime + F[i>=2] + F[i>=2]^2 : odd(1)|odd(2) ; n>4", "odd prime + F + F^2, one odd"),
    "pFF2_weak": ("odd_prime + F[i>=2] + F[i>=2]^2 ; n>4", "odd prime + F + F^2"),
    "pFF3": ("odd_prime + F[i>=2] + F[i>=2]^3 : odd(1)|odd(2) ; n>4", "odd prime + F + F^3, one odd"),
    "pFF3_weak": ("odd_prime + F[i>=2] + F[i>=2]^3 ; n>4", "odd prime + F + F^3"),
    "pFF4": ("prime + F[i>=0] + F[i>=0]^4 ; n>4", "prime + Fibonacci + fourth power of Fibonacci"),
    "pLL": ("odd_prime + L[i>=0] + L[i>=0] : odd(1) ; n>4", "odd prime + odd Lucas + Lucas"),
    "pLL2": ("odd_prime + L[i>=0] + L[i>=0]^2 : odd(1)|odd(2) ; n>4", "odd prime + L + L^2, one odd"),
    "pLL3": ("odd_prime + L[i>=0] + L[i>=0]^3 : odd(1)|odd(2) ; n>4", "odd prime + L + L^3, one odd"),
    "pLL4": ("prime + L[i>=0] + L[i>=0]^4 ; n>4", "prime + Lucas + fourth power of Lucas"),
    "pF2F": ("odd_prime + F[i>=2] + 2*F[i>=2] ; n>4", "odd prime + F + 2F"),
    "pFU": ("odd_prime + F[i>=2] + U[i>=1] ; n>4", "odd prime + F + half an even Fibonacci"),
    "p2FF2": ("odd_prime + 2*F[i>=2] + F[i>=2]^2 ; n>4", "odd prime + 2F + F^2"),
    "pFL": ("odd_prime + F[i>=1] + L[i>=0] : odd(1)|odd(2) ; n>4", "odd prime + F_s (s>0) + L_t, one odd"),
    "pFLe": ("prime + F[i>=0] + L[i>=0] : even(2) ; n>4", "prime + Fibonacci + even Lucas"),
    "p2FC": ("prime + 2*F[i>=0] + C[i>=0] ; n>4", "p + 2F_s + C_t"),
    "p2LC": ("prime + 2*L[i>=0] + C[i>=0] ; n>4", "p + 2L_s + C_t"),
    "pF5mod6": ("prime%6=5 + F[i>=0] + F[i>=0] ; n>4", "prime = 5 mod 6 + two Fibonacci"),
    # counting forms (index tuples are counted)
    "pP2P_count": ("prime + P[i>=1] + 2*P[i>=1]", "r(n): prime + P_s + 2P_t, s,t >= 1"),
    "pP2P_count0": ("prime + P[i>=0] + 2*P[i>=0]", "r(n): prime + P_s + 2P_t, s,t >= 0"),
    "pFF1_count": ("odd_prime + F[i>=2] + F[i>=2] : odd(1)|odd(2)", "r_1(n)"),
    "pFF2_count": ("odd_prime + F[i>=2] + F[i>=2]^2 : odd(1)|odd(2)", "r_2(n)"),
    "pFF3_count": ("odd_prime + F[i>=2] + F[i>=2]^3 : odd(1)|odd(2)", "r_3(n)"),
}
_ALIASES = {"pFF_strict": "pFF"}
COUNTING_FORMS = tuple(k for k in _BUILTINS if k.endswith("_count") or k.endswith("_count0"))

_P2K2_RE = re.compile(r"p2k2\((\d+)\)$")


def p2k2(k: int) -> Form:
    """p + 2^a + k*2^b with a,b >= 1, for odd k > 1 and odd n > 2k+3."""
    if k < 3 or k % 2 == 0:
        raise ValueError("k must be an odd integer greater than one")
    return parse_form(f"odd_prime + 2^[a>=1] + {k}*2^[b>=1] ; n>{2 * k + 3}, odd(n)", name=f"p2k2({k})")


def builtin_form(name: str) -> Form:
    """Registered form by name; ``p2k2(k)`` is accepted for odd k >= 3."""
    m = _P2K2_RE.match(name)
    if m:
        return p2k2(int(m.group(1)))
    key = _ALIASES.get(name, name)
    if key not in _BUILTINS:
        raise KeyError(f"unknown form {name!r}")
    return parse_form(_BUILTINS[key][0], name=name)


def builtin_names() -> list[str]:
    return list(_BUILTINS) + list(_ALIASES) + ["p2k2(k)"]


def describe(name: str) -> str:
    key = _ALIASES.get(name, name)
    return _BUILTINS[key][1] if key in _BUILTINS else ""


def resolve_form(spec: str) -> Form:
    """Builtin name, or a full expression if ``spec`` is not a registered name."""
    try:
        return builtin_form(spec)
    except KeyError:
        return parse_form(spec)


# ---------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class Witness:
    n: int
    p: int
    term_indices: tuple[int, ...]
    term_values: tuple[int, ...]

    def to_record(self, form: Form) -> dict:
        return {
            "form": form.name,
            "n": str(self.n),
            "status": "witness",
            "p": str(self.p),
            "terms": [
                {"seq": t.sequence, "index": i, "value": str(v)}
                for t, i, v in zip(form.terms, self.term_indices, self.term_values)
            ],
        }


def witness_problems(form: Form, w: Witness, is_prime: Callable[[int], bool] | None = None) -> list[str]:
    """Everything wrong with ``w`` as a representation under ``form``."""
    is_prime = is_prime or _exact_prime
    problems = []
    k = len(form.terms)
    if len(w.term_indices) != k or len(w.term_values) != k:
        return [f"expected {k} terms"]
    total = w.p
    for pos, (t, i, v) in enumerate(zip(form.terms, w.term_indices, w.term_values), 1):
        if i < t.min_index:
            problems.append(f"term {pos}: index {i} below minimum {t.min_index}")
        if i < 0 or nth_term(t.sequence, i) != v:
            problems.append(f"term {pos}: value {v} is not {t.sequence}[{i}]")
        total += t.contribution(v)
    if not form.parity_ok(w.term_values):
        problems.append("parity constraint violated")
    if total != w.n:
        problems.append(f"sum {total} != n")
    if not form.prime.admits(w.p, is_prime):
        problems.append(f"p={w.p} violates {form.prime.render()}")
    return problems


def is_valid_witness(form: Form, w: Witness) -> bool:
    return not witness_problems(form, w)
