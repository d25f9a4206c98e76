"""Gauge functions and norms of rearrangement-invariant spaces on [0, 1].

Covers Lorentz and Marcinkiewicz norms for a concave gauge, the Orlicz
``exp L_p`` norms, L1, L-infinity, the ``x*(t)/log2(2/t)`` quasi-norm for
``exp L_1``, the Lorentz-space Kruglov criterion and the epsilon-family of
gauges built from iterates of the Kruglov operator.
"""

from __future__ import annotations

import bisect
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Optional

from scipy.optimize import brentq

from .dist import quantile
from .exactnum import as_rational, log_rational
from .operators import kruglov_iterate
from .stepfn import StepFunction, add_rearranged, constant, rearrange

__all__ = [
    "ConcaveGauge",
    "OrliczYoungFunction",
    "power_gauge",
    "triple_log_gauge",
    "tabulated_gauge",
    "custom_gauge",
    "parse_gauge",
    "eval_gauge",
    "check_gauge",
    "norm_l1",
    "norm_linf",
    "norm_lorentz",
    "norm_marcinkiewicz",
    "norm_orlicz",
    "norm_explog",
    "kruglov_criterion",
    "dyadic_gauge_sum",
    "log_in_lorentz",
    "build_epsilon_gauge",
    "epsilon_density",
]

TRIPLE_LOG_DEFAULT_A = math.exp(math.e**2)


@dataclass(frozen=True)
class ConcaveGauge:
    """Increasing concave function on [0, 1] vanishing at 0.

    ``kind`` is one of ``power``, ``paper-psi``, ``tabulated`` or ``custom``.
    Tabulated gauges are the running integral of a non-increasing ``density``.
    """

    kind: str
    params: tuple = ()
    density: Optional[StepFunction] = None
    func: Optional[Callable] = field(default=None, compare=False)
    info: dict = field(default_factory=dict, compare=False)

    def __call__(self, t):
        return eval_gauge(self, t)

    @property
    def name(self) -> str:
        if self.kind == "custom":
            return self.info.get("name", "custom")
        return ":".join([self.kind] + [str(p) for p in self.params])

    def tail_bound(self, u, ratio: float) -> Optional[float]:
        """Upper bound for sum_{i>=1} phi(u_i) given u_i <= u * ratio**i.

        None when no bound is available for this kind of gauge.
        """
        if ratio >= 1:
            return None
        if self.kind == "power":
            q = ratio ** self.params[0]
            return float(self(u)) * q / (1 - q)
        if self.kind == "paper-psi":
            # psi(u)/sqrt(u) is non-decreasing on (0, 1/e]
            if u > math.exp(-1):
                return None
            q = math.sqrt(ratio)
            return float(self(u)) * q / (1 - q)
        if self.kind == "tabulated":
            top = max(_tabulated_table(self.density)[1])
            return top * float(u) * ratio / (1 - ratio)
        return None


def power_gauge(alpha) -> ConcaveGauge:
    alpha = as_rational(alpha) if not isinstance(alpha, float) else Fraction(repr(alpha))
    if not 0 < alpha <= 1:
        raise ValueError("power gauge exponent must lie in (0, 1]")
    return ConcaveGauge("power", (alpha,))


def triple_log_gauge(a: float = TRIPLE_LOG_DEFAULT_A) -> ConcaveGauge:
    """u ln(e/u) / ln ln ln(a/u); needs a > e^e so the triple log stays positive."""
    if not a > math.exp(math.e):
        raise ValueError("triple-log gauge needs a > e^e")
    return ConcaveGauge("paper-psi", (a,))


def tabulated_gauge(density: StepFunction, **info) -> ConcaveGauge:
    vals = density.values
    if any(v < 0 for v in vals) or any(b > a for a, b in zip(vals, vals[1:])):
        raise ValueError("density must be nonnegative and non-increasing")
    return ConcaveGauge("tabulated", (), density=density, info=info)


def custom_gauge(func: Callable, name: str = "custom") -> ConcaveGauge:
    return ConcaveGauge("custom", (), func=func, info={"name": name})


def parse_gauge(spec: str, **kw) -> ConcaveGauge:
    """Parse ``power:alpha``, ``paper-psi:a`` or ``eps-family:eps:n_max``."""
    parts = spec.strip().split(":")
    kind = parts[0]
    if kind == "power" and len(parts) == 2:
        return power_gauge(Fraction(parts[1]))
    if kind == "paper-psi":
        return triple_log_gauge(float(parts[1])) if len(parts) == 2 else triple_log_gauge()
    if kind == "eps-family" and len(parts) == 3:
        return build_epsilon_gauge(Fraction(parts[1]), int(parts[2]), **kw)
    raise ValueError(f"bad gauge spec {spec!r}")


def eval_gauge(phi: ConcaveGauge, t):
    if t < 0 or t > 1:
        raise ValueError("gauge argument outside [0, 1]")
    if t == 0:
        return 0 if phi.kind != "tabulated" else Fraction(0)
    if phi.kind == "power":
        alpha = phi.params[0]
        if alpha == 1:
            return t
        if isinstance(t, Rational):
            root = _exact_power(Fraction(t), alpha)
            if root is not None:
                return root
        return float(t) ** float(alpha)
    if phi.kind == "paper-psi":
        u = float(t)
        return u * math.log(math.e / u) / math.log(math.log(math.log(phi.params[0] / u)))
    if phi.kind == "tabulated":
        if isinstance(t, Rational):
            cuts, vals, cum = _tabulated_exact(phi.density)
            i = min(bisect.bisect_right(cuts, t) - 1, len(vals) - 1)
            return cum[i] + (t - cuts[i]) * vals[i]
        return _tabulated_float(phi.density, float(t))
    return phi.func(t)


@functools.lru_cache(maxsize=32)
def _tabulated_table(density: StepFunction):
    cuts = [0.0] + [float(b) for b in density.breakpoints()]
    vals = [float(v) for v in density.values]
    cum = [0.0]
    for (l, _), v in zip(density.pieces, vals):
        cum.append(cum[-1] + float(l) * v)
    return cuts, vals, cum


@functools.lru_cache(maxsize=32)
def _tabulated_exact(density: StepFunction):
    cuts = [Fraction(0)] + density.breakpoints()
    cum = [Fraction(0)]
    for l, v in density.pieces:
        cum.append(cum[-1] + l * v)
    return cuts, density.values, cum


def _tabulated_float(density: StepFunction, t: float) -> float:
    cuts, vals, cum = _tabulated_table(density)
    i = min(bisect.bisect_right(cuts, t) - 1, len(vals) - 1)
    return cum[i] + (t - cuts[i]) * vals[i]


def _exact_power(t: Fraction, alpha: Fraction):
    """t**alpha when it is rational, else None."""
    num = _int_root(t.numerator ** alpha.numerator, alpha.denominator)
    den = _int_root(t.denominator ** alpha.numerator, alpha.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(x: int, k: int):
    if x.bit_length() > 4000:
        return None
    r = round(x ** (1.0 / k)) if x.bit_length() < 1000 else None
    if r is None:
        return None
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == x:
            return c
    return None


def check_gauge(phi: ConcaveGauge, grid: int = 1024, tol: float = 1e-12) -> bool:
    """phi(0) = 0, strictly increasing and midpoint concave on k/grid."""
    vals = [float(phi(Fraction(k, grid))) for k in range(grid + 1)]
    if vals[0] != 0:
        return False
    if any(b <= a for a, b in zip(vals, vals[1:])):
        return False
    return all(vals[k] >= (vals[k - 1] + vals[k + 1]) / 2 - tol for k in range(1, grid))


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def norm_l1(x: StepFunction):
    return sum((l * abs(v) for l, v in x.pieces), Fraction(0))


def norm_linf(x: StepFunction):
    return max(abs(v) for v in x.values)


def norm_lorentz(x: StepFunction, phi: ConcaveGauge):
    """Integral of x* against d phi."""
    xs = rearrange(x)
    total, left, phi_left = Fraction(0), Fraction(0), phi(Fraction(0))
    for l, v in xs.pieces:
        right = left + l
        phi_right = phi(right)
        total = total + v * (phi_right - phi_left)
        left, phi_left = right, phi_right
    return total


def norm_marcinkiewicz(x: StepFunction, psi: ConcaveGauge, tol: float = 1e-9):
    """sup over t of (1/psi(t)) * integral of x* over [0, t].

    On each piece of x* the numerator is affine and psi is concave and
    positive, so the ratio is quasi-convex there and peaks at a piece
    endpoint. Breakpoints of x* are therefore an exact candidate set; ``tol``
    only bounds float error in evaluating psi.
    """
    xs = rearrange(x)
    best, acc, left = Fraction(0), Fraction(0), Fraction(0)
    for l, v in xs.pieces:
        acc = acc + l * v
        left += l
        ratio = acc / psi(left)
        if ratio > best:
            best = ratio
    return best


@dataclass(frozen=True)
class OrliczYoungFunction:
    """M_p(u) = exp(u^p) - 1, made convex for p < 1.

    For p < 1 the function is replaced on [0, u1] by the line c*u through the
    origin tangent to M_p at u1, which yields a convex function that agrees
    with M_p for large u.
    """

    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("p must be positive")

    @functools.cached_property
    def kink(self) -> Optional[tuple[float, float]]:
        if self.p >= 1:
            return None
        p = self.p
        # tangency through the origin: p w e^w = e^w - 1 with w = u^p
        w = brentq(lambda w: p * w * math.exp(w) - math.expm1(w), (1 - p) / p, 200.0)
        u1 = w ** (1 / p)
        return u1, math.expm1(w) / u1

    def __call__(self, u: float) -> float:
        k = self.kink
        if k is not None and u <= k[0]:
            return k[1] * u
        return math.expm1(u**self.p)

    def log_value(self, u: float) -> float:
        if u <= 0:
            return -math.inf
        k = self.kink
        if k is not None and u <= k[0]:
            return math.log(k[1]) + math.log(u)
        w = u**self.p
        if w > 1:
            return w + math.log1p(-math.exp(-w))
        return math.log(math.expm1(w))

    def inverse_at_one(self) -> float:
        u0 = math.log(2) ** (1 / self.p)
        k = self.kink
        if k is not None and u0 <= k[0]:
            return 1 / k[1]
        return u0


def _logsumexp(xs: list[float]) -> float:
    top = max(xs)
    if top == -math.inf:
        return top
    return top + math.log(sum(math.exp(v - top) for v in xs))


def norm_orlicz(x: StepFunction, M, tol: float = 1e-10) -> float:
    """Luxemburg norm inf{lam > 0 : integral of M(|x|/lam) <= 1}.

    The modular is evaluated in log space so that tiny piece lengths and huge
    values of M do not underflow or overflow; lam is located by a bracketing
    root finder to relative width ``tol``.
    """
    if not isinstance(M, OrliczYoungFunction):
        M = OrliczYoungFunction(float(M))
    # x* fixes the summation order, so equimeasurable inputs give identical floats
    terms = [(log_rational(l), float(v)) for l, v in rearrange(x).pieces if v != 0]
    if not terms:
        return 0.0

    def log_modular(log_lam: float) -> float:
        lam = math.exp(log_lam)
        return _logsumexp([ll + M.log_value(v / lam) for ll, v in terms])

    top = max(v for _, v in terms)
    hi = math.log(top / M.inverse_at_one()) + 1e-9
    lo = hi - 1.0
    while log_modular(lo) <= 0:
        lo -= 1.0
    root = brentq(log_modular, lo, hi, xtol=tol * 1e-3, rtol=tol)
    return math.exp(root)


def norm_explog(x: StepFunction) -> float:
    """sup over t of x*(t) / log2(2/t).

    On a piece of x* the value is constant and the divisor decreases in t, so
    the sup over the piece is attained at its right endpoint.
    """
    xs = rearrange(x)
    best, right = 0.0, Fraction(0)
    for l, v in xs.pieces:
        right += l
        best = max(best, float(v) / math.log2(2 / float(right)))
    return best


# ---------------------------------------------------------------------------
# criteria and series
# ---------------------------------------------------------------------------


def _criterion_series(phi: ConcaveGauge, t: float, series_tol: float, max_terms: int):
    """sum_k phi(t^k/k!) / phi(t), or None if the tail cannot be certified."""
    phi_t = float(phi(t))
    total = 0.0
    log_t = math.log(t)
    for k in range(1, max_terms + 1):
        u = math.exp(k * log_t - math.lgamma(k + 1))
        if u == 0.0:
            return None
        total += float(phi(u))
        tail = phi.tail_bound(u, t / (k + 1))
        if tail is not None and tail <= series_tol * total:
            return (total + tail) / phi_t
    return None


def kruglov_criterion(
    phi: ConcaveGauge,
    grid_size: int = 1024,
    series_tol: float = 1e-12,
    *,
    cap: float = 1e6,
    max_terms: int = 2000,
    full: bool = False,
):
    """Grid estimate of sup over t in (0, 1] of sum_k phi(t^k/k!) / phi(t).

    The grid is {i / grid_size} together with 2^-j for j <= 60. Returns
    ``math.inf`` when a partial maximum exceeds ``cap`` or when the series tail
    cannot be certified. With ``full=True`` returns ``(value, argmax)``.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be at least 64")
    ts = sorted({i / grid_size for i in range(1, grid_size + 1)} | {2.0**-j for j in range(1, 61)})
    best, arg = 0.0, None
    for t in ts:
        s = _criterion_series(phi, t, series_tol, max_terms)
        if s is None or s > cap:
            best, arg = math.inf, t
            break
        if s > best:
            best, arg = s, t
    return (best, arg) if full else best


def dyadic_gauge_sum(phi: ConcaveGauge, N: int):
    """sum_{k=1}^N phi(2^-k)."""
    if N < 1:
        raise ValueError("N must be positive")
    return sum((phi(Fraction(1, 2**k)) for k in range(1, N + 1)), Fraction(0))


def log_in_lorentz(phi: ConcaveGauge, N: int):
    """sum_{k=1}^N (k+1)(phi(2^{1-k}) - phi(2^-k)), an upper estimate for the
    Lorentz norm of log2(2/t)."""
    if N < 1:
        raise ValueError("N must be positive")
    return sum(
        ((k + 1) * (phi(Fraction(2, 2**k)) - phi(Fraction(1, 2**k))) for k in range(1, N + 1)),
        Fraction(0),
    )


def _eps(eps) -> Fraction:
    return Fraction(repr(eps)) if isinstance(eps, float) else as_rational(eps)


def epsilon_density(eps, n_max: int, tail_tol: float = 1e-12, prune_theta: float = 1e-15):
    """sum_{n=0}^{n_max} eps^n h_n, with h_n the rearranged law of K^n 1.

    Returns ``(density, terms)`` where ``terms`` lists the h_n. Truncated or
    pruned mass of each iterate is placed at 0, so each h_n is a pointwise
    lower bound of the exact one.
    """
    eps = _eps(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    hs = [constant(1)] + [quantile(kruglov_iterate(n, tail_tol, prune_theta), tail="zero") for n in range(1, n_max + 1)]
    density = add_rearranged([(eps**n, h) for n, h in enumerate(hs)])
    return density, hs


def build_epsilon_gauge(eps, n_max: int, tail_tol: float = 1e-12, prune_theta: float = 1e-15) -> ConcaveGauge:
    """psi_eps(t) = integral over [0, t] of the truncated eps-series density.

    The L1 mass dropped by truncating the series is at most
    eps^(n_max+1) / (1 - eps); it is recorded in ``info["remainder"]`` together
    with the summed iterate tails in ``info["iterate_tails"]``.
    """
    eps = _eps(eps)
    density, _ = epsilon_density(eps, n_max, tail_tol, prune_theta)
    tails = sum(float(kruglov_iterate(n, tail_tol, prune_theta).tail) * float(eps) ** n for n in range(1, n_max + 1))
    return ConcaveGauge(
        "tabulated",
        ("eps-family", eps, n_max),
        density=density,
        info={
            "eps": eps,
            "n_max": n_max,
            "remainder": float(eps) ** (n_max + 1) / (1 - float(eps)),
            "iterate_tails": tails,
        },
    )
