"""Exact integer/rational helpers and permutation counting.

Rationals are plain :class:`fractions.Fraction` values, which are always kept
in lowest terms with a positive denominator.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence

ExactRational = Fraction

__all__ = [
    "ExactRational",
    "as_rational",
    "format_rational",
    "parse_rational",
    "factorial",
    "derangements",
    "derangement_bounds_check",
    "multinomial",
    "binomial",
    "lcm_of_denominators",
    "log_rational",
]

_lock = threading.Lock()
_fact: list[int] = [1]
_der: list[int] = [1, 0]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions, decimal strings and "p/q" strings to a Fraction.

    Floats are converted exactly (binary expansion), never rounded.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    return Fraction(x)


def format_rational(q) -> str:
    """Serialize as "p/q", or "p" when q == 1."""
    return str(as_rational(q))


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of negative integer")
    if n >= len(_fact):
        with _lock:
            while len(_fact) <= n:
                _fact.append(_fact[-1] * len(_fact))
    return _fact[n]


def derangements(r: int) -> int:
    """Number of fixed-point-free permutations of r symbols.

    Uses D(r) = (r - 1)(D(r - 1) + D(r - 2)) with D(0) = 1, D(1) = 0.
    """
    if r < 0:
        raise ValueError("derangements of negative integer")
    if r >= len(_der):
        with _lock:
            while len(_der) <= r:
                k = len(_der)
                _der.append((k - 1) * (_der[k - 1] + _der[k - 2]))
    return _der[r]


def derangement_bounds_check(r: int) -> bool:
    """True iff r!/3 <= D(r) <= r! holds exactly.

    Fails for r = 1 only (D(1) = 0); every use site needs r = 0 or r >= 2.
    """
    d = derangements(r)
    f = factorial(r)
    return 3 * d >= f and d <= f


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)


def multinomial(m: int, parts: Sequence[int]) -> int:
    if any(p < 0 for p in parts):
        raise ValueError("multinomial parts must be nonnegative")
    if sum(parts) != m:
        raise ValueError(f"parts sum to {sum(parts)}, expected {m}")
    out = factorial(m)
    for p in parts:
        out //= factorial(p)
    return out


def lcm_of_denominators(values: Iterable) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, as_rational(v).denominator)
    return out


def log_rational(q) -> float:
    """Natural log of a positive rational without float underflow."""
    q = as_rational(q)
    if q <= 0:
        raise ValueError("log of nonpositive rational")
    return math.log(q.numerator) - math.log(q.denominator)
