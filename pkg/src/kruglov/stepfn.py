"""Piecewise-constant functions on [0, 1] with exact rational breakpoints."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Sequence

from .exactnum import as_rational, format_rational, parse_rational

__all__ = [
    "InexactComparisonError",
    "StepFunction",
    "constant",
    "indicator",
    "from_vector",
    "average_vector",
    "rearrange",
    "dilate",
    "scale",
    "partial_integral",
    "submajorizes",
    "submajorization_deficit",
    "equimeasurable",
    "add_rearranged",
]


class InexactComparisonError(ValueError):
    """Raised when exact equality is requested on float-valued data."""


def _coerce_value(v):
    if isinstance(v, bool):
        raise TypeError("bool is not a step function value")
    if isinstance(v, Rational):
        return Fraction(v)
    if isinstance(v, Real):
        return float(v)
    if isinstance(v, str):
        return parse_rational(v)
    raise TypeError(f"unsupported value type {type(v).__name__}")


def _is_exact(v) -> bool:
    return isinstance(v, Fraction)


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Ordered ``(length, value)`` pieces covering [0, 1] left to right.

    Lengths are positive Fractions summing to exactly 1. Values are Fractions,
    or floats for inexact data. Equal adjacent values are merged on
    construction so that the representation is canonical.
    """

    pieces: tuple

    def __init__(self, pieces: Iterable[Sequence]):
        merged: list[list] = []
        total = Fraction(0)
        for length, value in pieces:
            length = as_rational(length)
            if length < 0:
                raise ValueError("negative piece length")
            if length == 0:
                continue
            value = _coerce_value(value)
            total += length
            if merged and merged[-1][1] == value and type(merged[-1][1]) is type(value):
                merged[-1][0] += length
            else:
                merged.append([length, value])
        if total != 1:
            raise ValueError(f"piece lengths sum to {total}, expected 1")
        object.__setattr__(self, "pieces", tuple((l, v) for l, v in merged))

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for _, v in self.pieces)

    @property
    def lengths(self) -> list[Fraction]:
        return [l for l, _ in self.pieces]

    @property
    def values(self) -> list:
        return [v for _, v in self.pieces]

    def breakpoints(self) -> list[Fraction]:
        """Right endpoints of the pieces (the last one is 1)."""
        out, t = [], Fraction(0)
        for l, _ in self.pieces:
            t += l
            out.append(t)
        return out

    def __call__(self, t):
        """Value at t, using the left-continuous convention (x(0) is the first value)."""
        if t < 0 or t > 1:
            raise ValueError("t outside [0, 1]")
        idx = bisect.bisect_left(self.breakpoints(), t)
        return self.pieces[min(idx, len(self.pieces) - 1)][1]

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        if not (self.exact and other.exact):
            raise InexactComparisonError("exact equality refused on inexact step functions")
        return self.pieces == other.pieces

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.pieces)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        body = ", ".join(f"({format_rational(l)}, {_fmt_value(v)})" for l, v in self.pieces)
        return f"StepFunction([{body}])"

    def abs(self) -> "StepFunction":
        return StepFunction((l, abs(v)) for l, v in self.pieces)

    def to_json(self) -> dict:
        return {"pieces": [{"len": format_rational(l), "val": _json_value(v)} for l, v in self.pieces]}

    @classmethod
    def from_json(cls, obj: dict) -> "StepFunction":
        return cls((parse_rational(p["len"]), p["val"]) for p in obj["pieces"])


def _fmt_value(v):
    return format_rational(v) if _is_exact(v) else repr(v)


def _json_value(v):
    return format_rational(v) if _is_exact(v) else float(v)


def constant(c) -> StepFunction:
    return StepFunction([(1, c)])


def indicator(s) -> StepFunction:
    """The indicator of [0, s]."""
    s = as_rational(s)
    return StepFunction([(s, 1), (1 - s, 0)])


def from_vector(a: Sequence) -> StepFunction:
    """C_n: the function equal to a[i] on [i/n, (i+1)/n)."""
    n = len(a)
    if n < 1:
        raise ValueError("empty vector")
    w = Fraction(1, n)
    return StepFunction((w, v) for v in a)


def _integral_to(x: StepFunction, t):
    """Integral of x over [0, t]."""
    exact_t = isinstance(t, Rational)
    acc = Fraction(0) if exact_t else 0.0
    left = Fraction(0)
    for l, v in x.pieces:
        right = left + l
        if t <= left:
            break
        overlap = (min(right, t) - left) if exact_t else float(min(right, t) - left)
        acc = acc + overlap * v
        left = right
    return acc


def partial_integral(x: StepFunction, tau):
    """Integral of x (as supplied, not rearranged) over [0, tau]."""
    if isinstance(tau, Rational):
        tau = Fraction(tau)
    if tau < 0 or tau > 1:
        raise ValueError("tau outside [0, 1]")
    return _integral_to(x, tau)


def average_vector(x: StepFunction, n: int) -> list:
    """B_n: the vector of means of x over the n equal subintervals."""
    if n < 1:
        raise ValueError("n must be positive")
    cum = [_integral_to(x, Fraction(i, n)) for i in range(n + 1)]
    return [n * (cum[i + 1] - cum[i]) for i in range(n)]


def rearrange(x: StepFunction) -> StepFunction:
    """Non-increasing rearrangement x* of |x|."""
    totals: dict = {}
    for l, v in x.pieces:
        key = abs(v)
        totals[key] = totals.get(key, Fraction(0)) + l
    ordered = sorted(totals.items(), key=lambda kv: kv[0], reverse=True)
    return StepFunction((l, v) for v, l in ordered)


def scale(x: StepFunction, c) -> StepFunction:
    c = _coerce_value(c)
    return StepFunction((l, c * v) for l, v in x.pieces)


def dilate(x: StepFunction, tau) -> StepFunction:
    """sigma_tau x(t) = x(t / tau) on [0, min(1, tau)], zero beyond."""
    tau = as_rational(tau)
    if tau <= 0:
        raise ValueError("dilation factor must be positive")
    out, used = [], Fraction(0)
    for l, v in x.pieces:
        l = l * tau
        if used + l >= 1:
            out.append((1 - used, v))
            used = Fraction(1)
            break
        out.append((l, v))
        used += l
    if used < 1:
        out.append((1 - used, 0))
    return StepFunction(out)


def _cumulative(xs: StepFunction, ts: Sequence[Fraction]) -> list:
    """Integrals of xs over [0, t] for increasing ts, in one sweep."""
    out = []
    idx, left, acc = 0, Fraction(0), Fraction(0) if xs.exact else 0.0
    pieces = xs.pieces
    for t in ts:
        while idx < len(pieces) and left + pieces[idx][0] <= t:
            acc = acc + pieces[idx][0] * pieces[idx][1]
            left += pieces[idx][0]
            idx += 1
        part = acc
        if idx < len(pieces) and t > left:
            part = acc + (t - left) * pieces[idx][1]
        out.append(part)
    return out


def submajorizes(y: StepFunction, x: StepFunction, slack=0) -> bool:
    """True iff x is submajorized by y up to ``slack``.

    Both cumulative integrals of the rearrangements are piecewise linear and
    concave, so checking the union of their breakpoints covers every tau.
    """
    return submajorization_deficit(y, x) <= slack


def submajorization_deficit(y: StepFunction, x: StepFunction):
    """max over tau of (int_0^tau x* - int_0^tau y*), clipped below at 0."""
    xs, ys = rearrange(x), rearrange(y)
    ts = sorted(set(xs.breakpoints()) | set(ys.breakpoints()))
    fx = _cumulative(xs, ts)
    fy = _cumulative(ys, ts)
    worst = 0
    for a, b in zip(fx, fy):
        d = a - b
        if d > worst:
            worst = d
    return worst


def equimeasurable(x: StepFunction, y: StepFunction) -> bool:
    return rearrange(x) == rearrange(y)


def add_rearranged(terms: Sequence[tuple]) -> StepFunction:
    """Sum of c_i * x_i over ``(c_i, x_i)`` pairs, on the union of breakpoints.

    When every x_i is non-increasing the result is too.
    """
    cuts = sorted({t for _, x in terms for t in x.breakpoints()})
    cursors = [[0, x.breakpoints(), x.values, c] for c, x in terms]
    out, left = [], Fraction(0)
    for t in cuts:
        val = Fraction(0)
        for cur in cursors:
            while cur[1][cur[0]] < t:
                cur[0] += 1
            val = val + cur[3] * cur[2][cur[0]]
        out.append((t - left, val))
        left = t
    return StepFunction(out)
