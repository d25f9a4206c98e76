"""Finite discrete laws with exact masses and a certified tail bound.

A law is a sorted tuple of ``(value, mass)`` atoms plus ``tail``, an upper
bound on probability that is not represented by any atom. ``tail == 0`` marks
an exact law. Values and masses are Fractions on the exact paths and may be
floats elsewhere; floats make the law inexact.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Sequence

import numpy as np

from .exactnum import as_rational, format_rational, lcm_of_denominators, parse_rational
from .stepfn import StepFunction, _coerce_value

__all__ = [
    "DiscreteDistribution",
    "delta",
    "law_of",
    "quantile",
    "convolve",
    "power_convolve",
    "mixture",
    "ccdf",
    "mean",
    "prune",
    "char_fn",
    "scale_values",
    "tau_grid",
    "to_lattice",
    "from_lattice",
]

# float roundoff allowed in total mass of inexact laws
_FLOAT_SLOP = 1e-9


def _coerce_mass(m):
    if isinstance(m, bool):
        raise TypeError("bool is not a mass")
    if isinstance(m, Rational):
        return Fraction(m)
    if isinstance(m, Real):
        return float(m)
    if isinstance(m, str):
        return parse_rational(m)
    raise TypeError(f"unsupported mass type {type(m).__name__}")


class DiscreteDistribution:
    """Atoms with strictly increasing values and positive masses, plus ``tail``.

    ``pruned_span`` records the (min, max) of atom values moved into the tail by
    :func:`prune`, or None.
    """

    __slots__ = ("atoms", "tail", "pruned_span")

    def __init__(self, atoms: Iterable[Sequence] = (), tail=0, pruned_span=None):
        agg: dict = {}
        for v, m in atoms:
            v = _coerce_value(v)
            m = _coerce_mass(m)
            if m < 0:
                raise ValueError("negative mass")
            if m == 0:
                continue
            agg[v] = agg.get(v, 0) + m
        self.atoms = tuple(sorted(agg.items(), key=lambda kv: kv[0]))
        tail = _coerce_mass(tail)
        if tail < 0:
            raise ValueError("negative tail mass")
        self.tail = tail
        self.pruned_span = pruned_span
        total = self.total
        if isinstance(total, Fraction):
            if total > 1:
                raise ValueError(f"atom masses sum to {total} > 1")
        elif total > 1 + _FLOAT_SLOP:
            raise ValueError(f"atom masses sum to {total} > 1")

    @property
    def values(self) -> list:
        return [v for v, _ in self.atoms]

    @property
    def masses(self) -> list:
        return [m for _, m in self.atoms]

    @property
    def total(self):
        return sum((m for _, m in self.atoms), Fraction(0))

    @property
    def exact(self) -> bool:
        return (
            self.tail == 0
            and all(isinstance(v, Fraction) and isinstance(m, Fraction) for v, m in self.atoms)
        )

    def mass_at(self, value):
        for v, m in self.atoms:
            if v == value:
                return m
        return Fraction(0)

    def as_dict(self) -> dict:
        return dict(self.atoms)

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return self.atoms == other.atoms and self.tail == other.tail

    def __hash__(self):
        return hash((self.atoms, self.tail))

    def __repr__(self):
        body = ", ".join(f"{_fmt(v)}: {_fmt(m)}" for v, m in self.atoms)
        tail = f", tail={float(self.tail):.3g}" if self.tail else ""
        return f"DiscreteDistribution({{{body}}}{tail})"

    def to_json(self) -> dict:
        return {
            "atoms": [{"v": _json(v), "m": _json(m)} for v, m in self.atoms],
            "tail": float(self.tail),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DiscreteDistribution":
        return cls(((a["v"], a["m"]) for a in obj["atoms"]), tail=obj.get("tail", 0))


def _fmt(x):
    return format_rational(x) if isinstance(x, Fraction) else repr(x)


def _json(x):
    return format_rational(x) if isinstance(x, Fraction) else float(x)


def delta(c) -> DiscreteDistribution:
    return DiscreteDistribution([(c, 1)])


def law_of(x: StepFunction, require_exact: bool = False) -> DiscreteDistribution:
    """Pushforward of Lebesgue measure on [0, 1] under x."""
    if require_exact and not x.exact:
        raise ValueError("law_of: inexact values where an exact law was requested")
    return DiscreteDistribution((v, l) for l, v in x.pieces)


def quantile(mu: DiscreteDistribution, tail: str = "reject") -> StepFunction:
    """Decreasing step function on [0, 1] whose law is ``|mu|``.

    ``tail="reject"`` refuses laws with unrepresented mass. ``tail="zero"``
    places the unrepresented mass at value 0, which gives a pointwise lower
    bound of the true rearrangement (sound for lower-bound checks).
    """
    if tail not in ("reject", "zero"):
        raise ValueError("tail must be 'reject' or 'zero'")
    if mu.tail > 0 and tail == "reject":
        raise ValueError("quantile of a law with unrepresented tail mass")
    agg: dict = {}
    for v, m in mu.atoms:
        key = abs(v)
        agg[key] = agg.get(key, Fraction(0)) + as_rational(m)
    pieces = sorted(agg.items(), key=lambda kv: kv[0], reverse=True)
    pieces = [[m, v] for v, m in pieces]
    total = sum((p[0] for p in pieces), Fraction(0))
    gap = 1 - total
    inexact = any(isinstance(m, float) for m in mu.masses)
    if gap < 0:
        if not inexact or -gap > _FLOAT_SLOP:
            raise ValueError(f"masses sum to {total} > 1")
        # float roundoff: trim the smallest values first
        excess = -gap
        while excess > 0:
            take = min(excess, pieces[-1][0])
            pieces[-1][0] -= take
            excess -= take
            if pieces[-1][0] == 0:
                pieces.pop()
        gap = Fraction(0)
    if gap > 0:
        if tail == "zero" or (inexact and gap <= _FLOAT_SLOP):
            pieces.append([gap, Fraction(0)])
        else:
            raise ValueError(f"masses sum to {total} < 1 with zero tail")
    return StepFunction(pieces)


def scale_values(mu: DiscreteDistribution, c) -> DiscreteDistribution:
    """Law of c * X."""
    c = _coerce_value(c)
    return DiscreteDistribution(((c * v, m) for v, m in mu.atoms), tail=mu.tail)


def convolve(mu: DiscreteDistribution, nu: DiscreteDistribution) -> DiscreteDistribution:
    """Law of X + Y for independent X ~ mu, Y ~ nu; tails add."""
    acc: dict = {}
    for v1, m1 in mu.atoms:
        for v2, m2 in nu.atoms:
            key = v1 + v2
            acc[key] = acc.get(key, 0) + m1 * m2
    return DiscreteDistribution(acc.items(), tail=mu.tail + nu.tail)


# ---------------------------------------------------------------------------
# lattice kernels
# ---------------------------------------------------------------------------

_LATTICE_CAP = 4_000_000


def to_lattice(mu: DiscreteDistribution, step=None):
    """Map nonnegative atoms onto an integer lattice.

    Returns ``(unit, positions)`` where value ~ position * unit. Rational values
    use the exact common denominator; otherwise ``step`` is required and values
    are rounded *up* to the next multiple of ``step``.
    """
    values = mu.values
    if any(v < 0 for v in values):
        raise ValueError("lattice kernels need nonnegative values")
    if step is None:
        if not all(isinstance(v, Fraction) for v in values):
            raise ValueError("float-valued law needs an explicit lattice step")
        lcm = lcm_of_denominators(values)
        unit = Fraction(1, lcm)
        positions = [int(v * lcm) for v in values]
    else:
        unit = as_rational(step)
        if unit <= 0:
            raise ValueError("lattice step must be positive")
        positions = [math.ceil(as_rational(v) / unit) for v in values]
    if positions and max(positions) > _LATTICE_CAP:
        raise ValueError("lattice too fine; pass a coarser lattice step")
    return unit, positions


def _exact_array(positions, masses):
    """Integer numerators over a common denominator, as an object array."""
    den = lcm_of_denominators(masses)
    arr = np.zeros(max(positions) + 1 if positions else 1, dtype=object)
    arr[:] = 0
    for p, m in zip(positions, masses):
        arr[p] += int(m * den)
    return arr, den


def _float_array(positions, masses):
    arr = np.zeros(max(positions) + 1 if positions else 1, dtype=float)
    for p, m in zip(positions, masses):
        arr[p] += float(m)
    return arr


def from_lattice(unit, arr, den=None, tail=0) -> DiscreteDistribution:
    if den is None:
        atoms = [(unit * i, float(m)) for i, m in enumerate(arr) if m > 0]
    else:
        atoms = [(unit * i, Fraction(int(m), den)) for i, m in enumerate(arr) if m != 0]
    return DiscreteDistribution(atoms, tail=tail)


def power_convolve(mu: DiscreteDistribution, n: int) -> DiscreteDistribution:
    """n-fold convolution power; n = 0 gives the point mass at 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return delta(0)
    if n == 1:
        return mu
    if not mu.atoms:
        return DiscreteDistribution([], tail=n * mu.tail)
    rational = all(isinstance(v, Fraction) for v in mu.values)
    if not rational or any(v < 0 for v in mu.values):
        out = mu
        for _ in range(n - 1):
            out = convolve(out, mu)
        return out
    lo = min(mu.values)
    shifted = DiscreteDistribution(((v - lo, m) for v, m in mu.atoms), tail=mu.tail)
    unit, pos = to_lattice(shifted)
    exact_masses = all(isinstance(m, Fraction) for m in mu.masses)
    if exact_masses:
        base, den = _exact_array(pos, shifted.masses)
        arr, d = base, den
        for _ in range(n - 1):
            arr = np.convolve(arr, base)
            d *= den
        out = from_lattice(unit, arr, d, tail=n * mu.tail)
    else:
        base = _float_array(pos, shifted.masses)
        arr = base
        for _ in range(n - 1):
            arr = np.convolve(arr, base)
        out = from_lattice(unit, arr, tail=n * mu.tail)
    return DiscreteDistribution(((v + n * lo, m) for v, m in out.atoms), tail=out.tail)


def mixture(weights: Sequence, dists: Sequence[DiscreteDistribution]) -> DiscreteDistribution:
    """Weighted atom union; missing weight and component tails go to the tail."""
    if len(weights) != len(dists):
        raise ValueError("weights and dists differ in length")
    weights = [_coerce_mass(w) for w in weights]
    if any(w < 0 for w in weights):
        raise ValueError("negative mixture weight")
    wsum = sum(weights, Fraction(0))
    if (wsum > 1) if isinstance(wsum, Fraction) else (wsum > 1 + _FLOAT_SLOP):
        raise ValueError(f"mixture weights sum to {wsum} > 1")
    acc: dict = {}
    tail = max(1 - wsum, 0)
    for w, d in zip(weights, dists):
        tail = tail + w * d.tail
        for v, m in d.atoms:
            acc[v] = acc.get(v, 0) + w * m
    return DiscreteDistribution(acc.items(), tail=tail)


def ccdf(mu: DiscreteDistribution, tau) -> tuple:
    """(lower, upper) bounds on P(X > tau)."""
    lower = sum((m for v, m in mu.atoms if v > tau), Fraction(0))
    return lower, lower + mu.tail


def mean(mu: DiscreteDistribution):
    """Sum of value * mass over represented atoms."""
    return sum((v * m for v, m in mu.atoms), Fraction(0))


def prune(mu: DiscreteDistribution, theta) -> DiscreteDistribution:
    kept, dropped, span = [], 0, None
    for v, m in mu.atoms:
        if m < theta:
            dropped = dropped + m
            span = (v, v) if span is None else (min(span[0], v), max(span[1], v))
        else:
            kept.append((v, m))
    if mu.pruned_span is not None and span is not None:
        span = (min(span[0], mu.pruned_span[0]), max(span[1], mu.pruned_span[1]))
    elif span is None:
        span = mu.pruned_span
    return DiscreteDistribution(kept, tail=mu.tail + dropped, pruned_span=span)


def char_fn(mu: DiscreteDistribution, t: float) -> complex:
    """E exp(i t X) over represented atoms.

    The true value lies within ``mu.tail`` of the returned number.
    """
    return sum((float(m) * cmath.exp(1j * t * float(v)) for v, m in mu.atoms), 0j)


def tau_grid(*dists: DiscreteDistribution) -> list:
    """Midpoints between adjacent atoms of the merged support, plus one point
    below the minimum and one above the maximum. Survival functions are
    constant between atoms, so this set is exhaustive."""
    vals = sorted({v for d in dists for v in d.values})
    if not vals:
        return [Fraction(0)]
    out = [vals[0] - 1]
    out += [(a + b) / 2 for a, b in zip(vals, vals[1:])]
    out.append(vals[-1] + 1)
    return out
