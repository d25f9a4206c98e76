"""The random-permutation operators, their compound-sum approximants and the
Kruglov operator, all acting on laws.

Every function here returns a :class:`~kruglov.dist.DiscreteDistribution`
(or a :class:`~kruglov.stepfn.StepFunction` for the explicit step versions).
"""

from __future__ import annotations

import functools
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dist import (
    DiscreteDistribution,
    _exact_array,
    _float_array,
    delta,
    from_lattice,
    power_convolve,
    prune,
    to_lattice,
)
from .exactnum import as_rational, binomial, derangements, factorial, lcm_of_denominators
from .stepfn import StepFunction, average_vector

__all__ = [
    "SubsetSumTable",
    "subset_sum_table",
    "t_n_dist",
    "t_n_bruteforce",
    "t_n_stepfn",
    "h_m_dist",
    "kruglov_truncation",
    "kruglov_dist",
    "kruglov_iterate",
    "a_n_matrix_dist",
    "support_iteration",
    "repeat_vector",
]

BRUTE_FORCE_MAX_N = 8


def _nonneg_rationals(a: Sequence) -> list[Fraction]:
    out = [as_rational(v) for v in a]
    if any(v < 0 for v in out):
        raise ValueError("entries must be nonnegative")
    return out


@dataclass(frozen=True)
class SubsetSumTable:
    """counts[k][s]: number of k-subsets of the input whose scaled sum is s.

    Sums are integers after multiplying by ``scale`` (the LCM of denominators).
    """

    n: int
    scale: int
    counts: tuple

    def row_total(self, k: int) -> int:
        return sum(self.counts[k].values())


def subset_sum_table(a: Sequence) -> SubsetSumTable:
    """Subset-sum counts by size, built group by group over equal entries."""
    a = _nonneg_rationals(a)
    scale = lcm_of_denominators(a)
    groups: dict[int, int] = defaultdict(int)
    for v in a:
        groups[int(v * scale)] += 1
    rows: list[dict] = [{0: 1}]
    for w, c in sorted(groups.items()):
        new: list[dict] = [defaultdict(int) for _ in range(len(rows) + c)]
        coeffs = [binomial(c, j) for j in range(c + 1)]
        for k, row in enumerate(rows):
            for s, cnt in row.items():
                for j, cj in enumerate(coeffs):
                    new[k + j][s + j * w] += cnt * cj
        rows = new
    return SubsetSumTable(len(a), scale, tuple(dict(r) for r in rows))


def t_n_dist(a: Sequence) -> DiscreteDistribution:
    """Law of the fixed-point sum of ``a`` under a uniform random permutation.

    A permutation fixes exactly the set U for D(n - |U|) permutations, so
    P(sum = s) = sum_k counts[k][s] * D(n - k) / n!.
    """
    n = len(a)
    if n < 1:
        raise ValueError("need at least one entry")
    table = subset_sum_table(a)
    nf = factorial(n)
    acc: dict[int, int] = defaultdict(int)
    for k, row in enumerate(table.counts):
        d = derangements(n - k)
        if d == 0:
            continue
        for s, cnt in row.items():
            acc[s] += cnt * d
    return DiscreteDistribution(
        (Fraction(s, table.scale), Fraction(c, nf)) for s, c in acc.items()
    )


def t_n_bruteforce(a: Sequence) -> DiscreteDistribution:
    """Same law as :func:`t_n_dist`, by enumerating all n! permutations."""
    a = _nonneg_rationals(a)
    n = len(a)
    if n < 1:
        raise ValueError("need at least one entry")
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}")
    w = Fraction(1, factorial(n))
    acc: dict = defaultdict(Fraction)
    for perm in itertools.permutations(range(n)):
        acc[sum((a[i] for i in range(n) if perm[i] == i), Fraction(0))] += w
    return DiscreteDistribution(acc.items())


def t_n_stepfn(x: StepFunction, n: int) -> StepFunction:
    """T_n x as an explicit step function with n! cells.

    Cells follow the lexicographic order of permutations in one-line notation.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"materializing n! cells limited to n <= {BRUTE_FORCE_MAX_N}")
    if any(v < 0 for v in x.values):
        raise ValueError("x must be nonnegative")
    b = average_vector(x, n)
    w = Fraction(1, factorial(n))
    zero = Fraction(0) if x.exact else 0.0
    cells = (
        (w, sum((b[i] for i in range(n) if perm[i] == i), zero))
        for perm in itertools.permutations(range(n))
    )
    return StepFunction(cells)


def repeat_vector(a: Sequence, m: int) -> list:
    """Each entry of ``a`` repeated ``m`` times, in order."""
    if m < 1:
        raise ValueError("m must be positive")
    return [v for v in a for _ in range(m)]


def h_m_dist(a: Sequence, m: int) -> DiscreteDistribution:
    """Law of the sum of m independent copies of sigma_{1/m} f_a.

    One copy equals a_k with probability 1/(nm) and 0 with probability 1 - 1/m.
    """
    a = _nonneg_rationals(a)
    n = len(a)
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    p = Fraction(1, n * m)
    atoms = [(v, p) for v in a] + [(Fraction(0), 1 - Fraction(1, m))]
    return power_convolve(DiscreteDistribution(atoms), m)


@functools.lru_cache(maxsize=None)
def kruglov_truncation(tail_tol: float) -> tuple[int, float]:
    """Smallest N with sum_{n > N} 1/(e n!) < tail_tol, and that tail bound.

    The rational part is summed exactly for 40 further terms; the rest is
    bounded by twice its first term.
    """
    if not tail_tol > 0:
        raise ValueError("tail_tol must be positive")
    inv_e = math.exp(-1)
    n = 0
    while True:
        rest = sum((Fraction(1, factorial(k)) for k in range(n + 1, n + 41)), Fraction(0))
        rest += Fraction(2, factorial(n + 41))
        bound = float(rest) * inv_e * (1 + 1e-15)
        if bound < tail_tol:
            return n, bound
        n += 1


def kruglov_dist(
    mu: DiscreteDistribution,
    tail_tol: float = 1e-12,
    *,
    lattice_step=None,
    prune_theta=None,
) -> DiscreteDistribution:
    """Law of X_1 + ... + X_N with N ~ Poisson(1) independent of the iid X_i ~ mu.

    The Poisson mixture sum_n mu^{*n} / (e n!) is truncated once the dropped
    weight is below ``tail_tol``; that weight, the propagated input tail and any
    pruned atoms are all charged to the output tail. Masses are floats because
    of the 1/e weight. Float-valued inputs need ``lattice_step``; their values
    are rounded up to the lattice, which can only enlarge the output in the
    stochastic order.
    """
    if not tail_tol > 0:
        raise ValueError("tail_tol must be positive")
    N, series_tail = kruglov_truncation(tail_tol)
    inv_e = math.exp(-1)
    if not mu.atoms:
        return DiscreteDistribution([], tail=1)
    unit, pos = to_lattice(mu, lattice_step)
    if all(isinstance(m, Fraction) for m in mu.masses):
        base, den = _exact_array(pos, mu.masses)
        # common denominator den^N * N! for all Poisson terms
        nf = factorial(N)
        acc = np.zeros(N * (len(base) - 1) + 1, dtype=object)
        acc[:] = 0
        power = np.array([1], dtype=object)
        for n in range(N + 1):
            if n > 0:
                power = np.convolve(power, base)
            acc[: len(power)] += power * (den ** (N - n) * (nf // factorial(n)))
        total_den = den**N * nf
        masses = np.array([float(Fraction(int(c), total_den)) for c in acc]) * inv_e
    else:
        base = _float_array(pos, mu.masses)
        acc = np.zeros(N * (len(base) - 1) + 1)
        power = np.array([1.0])
        weight = 1.0
        for n in range(N + 1):
            if n > 0:
                power = np.convolve(power, base)
                weight /= n
            acc[: len(power)] += weight * power
        masses = acc * inv_e
    input_tail = float(mu.tail) * inv_e * sum(1 / math.factorial(n - 1) for n in range(1, N + 1))
    out = from_lattice(unit, masses, tail=series_tail + input_tail)
    if prune_theta:
        out = prune(out, prune_theta)
    return out


@functools.lru_cache(maxsize=64)
def kruglov_iterate(n: int, tail_tol: float = 1e-12, prune_theta: float = 1e-15) -> DiscreteDistribution:
    """Law of K^n applied to the constant function 1, pruning between steps."""
    if n < 1:
        raise ValueError("n must be positive")
    prev = delta(1) if n == 1 else kruglov_iterate(n - 1, tail_tol, prune_theta)
    return kruglov_dist(prev, tail_tol, prune_theta=prune_theta)


def a_n_matrix_dist(x) -> DiscreteDistribution:
    """Law of sum_i x[i][pi(i)] over a uniform random permutation pi."""
    rows = [_nonneg_rationals(r) for r in x]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"matrix permutation law limited to n <= {BRUTE_FORCE_MAX_N}")
    w = Fraction(1, factorial(n))
    acc: dict = defaultdict(Fraction)
    for perm in itertools.permutations(range(n)):
        acc[sum((rows[i][perm[i]] for i in range(n)), Fraction(0))] += w
    return DiscreteDistribution(acc.items())


def support_iteration(n: int) -> list[float]:
    """Zero-set measures of K^k 1 for k = 1..n: a_1 = 1/e, a_{k+1} = exp(a_k - 1)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = [math.exp(-1)]
    while len(out) < n:
        out.append(math.exp(out[-1] - 1))
    return out
