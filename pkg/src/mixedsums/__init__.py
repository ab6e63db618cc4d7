"""Verification tools for mixed sums of primes and sparse integer sequences."""

from mixedsums.sequences import nth_term, terms_below, get_sequence
from mixedsums.primality import (
    sieve_range,
    is_prime_64,
    is_probable_prime,
    factor_small,
    prime_power_form,
)
from mixedsums.forms import Form, TermSpec, PrimeConstraint, Witness, builtin_form, parse_form, applicable

__all__ = [
    "nth_term",
    "terms_below",
    "get_sequence",
    "sieve_range",
    "is_prime_64",
    "is_probable_prime",
    "factor_small",
    "prime_power_form",
    "Form",
    "TermSpec",
    "PrimeConstraint",
    "Witness",
    "builtin_form",
    "parse_form",
    "applicable",
]

__version__ = "0.1.0"
