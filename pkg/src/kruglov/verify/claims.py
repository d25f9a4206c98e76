"""One function per checkable claim, each returning a VerificationReport.

Conventions: survival functions are compared with the upper bound on the
left-hand side and the lower bound on the right, so unrepresented tail mass
can only make a check harder to pass.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction
from typing import Sequence

from ..dist import (
    DiscreteDistribution,
    ccdf,
    law_of,
    mean,
    quantile,
    scale_values,
    tau_grid,
    to_lattice,
)
from ..exactnum import factorial
from ..operators import (
    a_n_matrix_dist,
    h_m_dist,
    kruglov_dist,
    kruglov_iterate,
    repeat_vector,
    support_iteration,
    t_n_dist,
)
from ..spaces import (
    OrliczYoungFunction,
    build_epsilon_gauge,
    check_gauge,
    dyadic_gauge_sum,
    epsilon_density,
    kruglov_criterion,
    log_in_lorentz,
    norm_l1,
    norm_lorentz,
    norm_marcinkiewicz,
    norm_orlicz,
    parse_gauge,
)
from ..stepfn import average_vector, from_vector, scale, submajorization_deficit
from .report import VerificationReport

WITNESS_CASES = ((1,), (1, 1), (1, 2), (1, 1, 1), (1, 2, 3))
BATTERY = ((1,), (1, 1), (1, 2), (1, 1, 1), (1, 2, 3), (2, 0, 1, 3))
BATTERY_NORMS = ("L1", "lorentz:power:0.5", "marcinkiewicz:power:0.5")


def _vec(a) -> str:
    return "(" + ",".join(str(v) for v in a) + ")"


def _survival(mu: DiscreteDistribution, taus, upper: bool) -> list:
    """ccdf bounds at increasing taus in one sweep."""
    atoms = mu.atoms
    total = sum((m for _, m in atoms), Fraction(0))
    out, idx, below = [], 0, Fraction(0)
    for tau in taus:
        while idx < len(atoms) and atoms[idx][0] <= tau:
            below = below + atoms[idx][1]
            idx += 1
        s = total - below
        out.append(s + mu.tail if upper else s)
    return out


def _ccdf_worst(lhs: DiscreteDistribution, rhs: DiscreteDistribution, c, grid_from=None):
    """Worst tau for ccdf(lhs) <= c * ccdf(rhs): returns (tau, upper lhs, c * lower rhs)."""
    taus = tau_grid(*(grid_from or (lhs, rhs)))
    left = _survival(lhs, taus, upper=True)
    right = _survival(rhs, taus, upper=False)
    best = None
    for tau, l, r in zip(taus, left, right):
        r = c * r
        if best is None or l - r > best[1] - best[2]:
            best = (tau, l, r)
    return best


def parse_norm(spec: str):
    """Norm evaluators: "L1", "lorentz:<gauge>", "marcinkiewicz:<gauge>", "orlicz:<p>"."""
    if spec == "L1":
        return norm_l1
    kind, _, rest = spec.partition(":")
    if kind == "lorentz":
        phi = parse_gauge(rest)
        return lambda x: norm_lorentz(x, phi)
    if kind == "marcinkiewicz":
        psi = parse_gauge(rest)
        return lambda x: norm_marcinkiewicz(x, psi)
    if kind == "orlicz":
        M = OrliczYoungFunction(float(rest))
        return lambda x: norm_orlicz(x, M)
    raise ValueError(f"unknown norm spec {spec!r}")


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.runtime_ms = int(round((time.perf_counter() - t0) * 1000))
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def cmd_lemma5(n_max: int = 4, m_max: int = 4, trials: int = 100, value_cap: int = 8, seed: int = 0):
    """ccdf(H_m a) <= 3 ccdf(T_nm b), b = a repeated m times, on random integer vectors."""
    if n_max * m_max > 16:
        raise ValueError("n_max * m_max exceeds the exact budget of 16")
    rep = VerificationReport(
        "lemma5",
        "survival of H_m a is at most 3 times the survival of T_nm applied to a repeated m times",
        {"n_max": n_max, "m_max": m_max, "trials": trials, "value_cap": value_cap, "seed": seed},
    )
    rng = random.Random(seed)
    worst: dict = {}
    checks = violations = 0
    for trial in range(trials):
        for n in range(1, n_max + 1):
            a = [rng.randint(0, value_cap) for _ in range(n)]
            for m in range(1, m_max + 1):
                H = h_m_dist(a, m)
                T = t_n_dist(repeat_vector(a, m))
                taus = tau_grid(H, T)
                left = _survival(H, taus, upper=True)
                right = _survival(T, taus, upper=False)
                for tau, l, r in zip(taus, left, right):
                    checks += 1
                    label = f"n={n} m={m} a={_vec(a)} tau={tau}"
                    if l > 3 * r:
                        violations += 1
                        rep.add(label, l, 3 * r)
                    key = (n, m)
                    if key not in worst or l - 3 * r > worst[key][1] - worst[key][2]:
                        worst[key] = (label, l, 3 * r)
    for label, l, r in worst.values():
        rep.add("tightest " + label, l, r)
    rep.summary = {"checks": checks, "violations": violations}
    return rep.finalize()


@_timed
def cmd_lemma6(n_max: int = 200):
    """(n-k)!/n! <= 2 (k-1)!/n^k for 4 <= n <= n_max and 1 <= k <= n."""
    if n_max < 4:
        raise ValueError("n_max must be at least 4")
    rep = VerificationReport(
        "lemma6", "(n-k)!/n! <= 2 (k-1)!/n^k for n >= 4 and k <= n", {"n_max": n_max}
    )
    checks = 0
    for n in range(4, n_max + 1):
        nf = factorial(n)
        tight = None
        for k in range(1, n + 1):
            lhs = Fraction(factorial(n - k), nf)
            rhs = Fraction(2 * factorial(k - 1), n**k)
            checks += 1
            if lhs > rhs:
                rep.add(f"n={n} k={k} violation", lhs, rhs)
            ratio = lhs / rhs
            if tight is None or ratio > tight[0]:
                tight = (ratio, k, lhs, rhs)
        rep.add(f"n={n:04d} tightest k={tight[1]}", tight[2], tight[3])
    rep.summary = {"checks": checks, "max_ratio": max(r.lhs / r.rhs for r in rep.evidence)}
    return rep.finalize()


def limit_worst(a: Sequence, m: int):
    """Worst tau for ccdf(T_n a) <= 12 ccdf(2 H_m a)."""
    T = t_n_dist(a)
    H2 = scale_values(h_m_dist(a, m), 2)
    return _ccdf_worst(T, H2, 12)


@_timed
def cmd_lemma7(cases: Sequence = WITNESS_CASES, m_max: int = 64):
    """Smallest m <= m_max with ccdf(T_n a) <= 12 ccdf(2 H_m a) at every tau."""
    rep = VerificationReport(
        "lemma7",
        "survival of T_n a is at most 12 times the survival of 2 H_m a for all large m",
        {"cases": [list(c) for c in cases], "m_max": m_max},
    )
    table, missing = {}, False
    for a in cases:
        witness = None
        for m in range(1, m_max + 1):
            tau, l, r = limit_worst(a, m)
            if l <= r:
                witness = m
                rep.add(f"a={_vec(a)} m={m} tau={tau}", l, r)
                break
        if witness is None:
            missing = True
            table[_vec(a)] = {"witness_m": None}
            continue
        # larger m is re-checked for information only
        recheck = {}
        for mult in (2, 4):
            _, l, r = limit_worst(a, mult * witness)
            recheck[f"{mult}m"] = bool(l <= r)
        table[_vec(a)] = {"witness_m": witness, "recheck": recheck}
    rep.summary = {"witness_table": table}
    return rep.finalize(inconclusive=missing)


@_timed
def cmd_remark(n_list: Sequence = tuple(range(2, 9))):
    """Top-atom masses 1/n! for T_n and 1/n^n for H_n on the all-ones vector."""
    n_list = sorted(n_list)
    if any(n < 1 or n > 10 for n in n_list):
        raise ValueError("n must lie in 1..10")
    rep = VerificationReport(
        "remark-counterexample",
        "T_n 1 equals n on a set of measure 1/n! while H_n 1 equals n on measure 1/n^n",
        {"n_list": list(n_list)},
    )
    ratios = {}
    for n in n_list:
        ones = [1] * n
        t_mass = t_n_dist(ones).mass_at(n)
        h_mass = h_m_dist(ones, n).mass_at(n)
        rep.add(f"n={n:02d} T mass", t_mass, Fraction(1, factorial(n)), op="==")
        rep.add(f"n={n:02d} H mass", h_mass, Fraction(1, n**n), op="==")
        ratios[n] = h_mass / t_mass
    for lo, hi in zip(n_list, n_list[1:]):
        rep.add(f"ratio n={hi:02d} below n={lo:02d}", ratios[hi], ratios[lo], op="<")
    rep.summary = {"ratio_n_factorial_over_n_pow_n": ratios}
    return rep.finalize()


@_timed
def cmd_lemma2(n_steps: int = 200, tail_tol: float = 1e-12):
    """a_{k+1} = exp(a_k - 1) increases towards 1 and matches the zero atom of K^k 1."""
    if n_steps < 2:
        raise ValueError("n_steps must be at least 2")
    rep = VerificationReport(
        "lemma2",
        "the measure of the zero set of K^k 1 follows a_{k+1} = exp(a_k - 1) and tends to 1",
        {"n_steps": n_steps, "tail_tol": tail_tol},
    )
    seq = support_iteration(n_steps)
    rep.add("a_1 equals exp(-1)", seq[0], math.exp(-1), op="==")
    min_step = min(b - a for a, b in zip(seq, seq[1:]))
    rep.add("sequence strictly increasing (min increment)", 0.0, min_step, op="<")
    crossing = next((k + 1 for k, v in enumerate(seq) if v > 0.99), None)
    if crossing is not None:
        rep.add(f"exceeds 0.99 at step {crossing}", 0.99, seq[crossing - 1], op="<")
    cross = {}
    for k in range(1, min(n_steps, 6) + 1):
        mu = kruglov_iterate(k, tail_tol)
        zero = float(mu.mass_at(0))
        tol = 1e-9 if k <= 4 else 1e-6
        # unrepresented or pruned mass might sit at 0
        rep.add(f"k={k} zero atom vs recurrence", zero, seq[k - 1], slack=tol + float(mu.tail), op="==")
        cross[k] = {"atom": zero, "recurrence": seq[k - 1], "tail": float(mu.tail)}
    rep.summary = {"first_step_above_0.99": crossing, "a_last": seq[-1], "cross_check": cross}
    return rep.finalize(inconclusive=crossing is None)


def keystone_check(eps, n_max: int = 6, tail_tol: float = 1e-10, lattice: int = 256):
    """Deficit of K g_eps against g_eps / eps, and the certified slack budget.

    g is rounded up to a lattice of step ceil(max g)/lattice before applying K;
    that only enlarges K g. Mass K leaves unrepresented is charged in L1 units:
    since K preserves the mean, the missing mean is the most that can be lost
    from any partial integral of (K g)*.
    """
    gauge = build_epsilon_gauge(eps, n_max)
    eps = gauge.info["eps"]
    g = gauge.density
    mu = law_of(g)
    step = Fraction(math.ceil(max(mu.values)), lattice)
    unit, pos = to_lattice(mu, step)
    rounded_mean = sum(float(unit * p) * float(m) for p, m in zip(pos, mu.masses))
    K = kruglov_dist(mu, tail_tol, lattice_step=step)
    missing = max(rounded_mean - float(mean(K)), 0.0)
    deficit = float(submajorization_deficit(scale(g, 1 / eps), quantile(K, tail="zero")))
    budget = gauge.info["remainder"] + gauge.info["iterate_tails"] + missing
    return {"gauge": gauge, "deficit": deficit, "budget": budget, "missing_l1": missing, "k_tail": float(K.tail)}


def small_t_ratio(eps, delta, n_max: int, prune_theta: float) -> float:
    """psi_eps'(0+) / psi_delta'(0+) from densities built at a pruning level."""
    de, _ = epsilon_density(eps, n_max, prune_theta=prune_theta)
    dd, _ = epsilon_density(delta, n_max, prune_theta=prune_theta)
    return float(de.values[0]) / float(dd.values[0])


@_timed
def cmd_theorem1(
    eps_list: Sequence = (0.1, 0.2, 0.3),
    n_max: int = 6,
    tail_tol: float = 1e-10,
    lattice: int = 256,
    refinement: Sequence = (1e-6, 1e-9, 1e-12),
):
    """Epsilon-family gauges: gauge axioms, the keystone submajorization and
    the comparison between members of the family."""
    eps_list = sorted(eps_list)
    rep = VerificationReport(
        "theorem1",
        "K g_eps is submajorized by g_eps / eps, with psi_eps an increasing family of concave gauges",
        {"eps_list": list(eps_list), "n_max": n_max, "tail_tol": tail_tol, "lattice": lattice,
         "refinement": list(refinement)},
    )
    per_eps, gauges = {}, {}
    for eps in eps_list:
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        ks = keystone_check(eps, n_max, tail_tol, lattice)
        psi = ks["gauge"]
        gauges[eps] = psi
        e = float(psi.info["eps"])
        rep.add(f"eps={eps} gauge axioms hold", int(check_gauge(psi)), 1, op="==")
        expected = (1 - e ** (n_max + 1)) / (1 - e)
        rep.add(f"eps={eps} psi(1) vs geometric sum", float(psi(Fraction(1))), expected,
                slack=1e-8 + psi.info["iterate_tails"], op="==")
        rep.add(f"eps={eps} keystone deficit", ks["deficit"], 0.0, slack=ks["budget"])
        per_eps[eps] = {k: ks[k] for k in ("deficit", "budget", "missing_l1", "k_tail")}
        per_eps[eps]["pieces"] = len(psi.density.pieces)
    grid = [Fraction(k, 1024) for k in range(1, 1025)]
    ratios = {}
    for i, eps in enumerate(eps_list):
        for delta in eps_list[i + 1:]:
            if eps == delta:
                continue
            lo, hi = gauges[eps], gauges[delta]
            gap = max(float(lo(t)) - float(hi(t)) for t in grid)
            rep.add(f"psi_{eps} <= psi_{delta} on grid (max gap)", gap, 0.0)
            seq = [small_t_ratio(eps, delta, n_max, th) for th in refinement]
            ratios[f"{eps}/{delta}"] = seq
            for j in range(len(seq) - 1):
                rep.add(f"ratio {eps}/{delta} decreases at level {j + 1}", seq[j + 1], seq[j], op="<")
    rep.summary = {"per_eps": per_eps, "small_t_ratios": ratios}
    return rep.finalize()


@_timed
def cmd_criterion(gauge_spec: str = "power:1", grid: int = 1024, tol: float = 1e-12):
    """sup over t of sum_k phi(t^k/k!) / phi(t), with a dyadic side-check."""
    phi = parse_gauge(gauge_spec)
    rep = VerificationReport(
        "criterion",
        "sup over t in (0,1] of sum_k phi(t^k/k!) / phi(t) is finite",
        {"gauge": gauge_spec, "grid": grid, "tol": tol},
    )
    M, arg = kruglov_criterion(phi, grid, tol, full=True)
    phi1 = float(phi(Fraction(1)))
    partial = {N: float(dyadic_gauge_sum(phi, N)) / phi1 for N in (10, 20, 40, 60)}
    rep.summary = {
        "M": M,
        "argmax": arg,
        "dyadic_ratio_partials": partial,
        "empirical_A": partial[60],
        "log_in_lorentz_N60": float(log_in_lorentz(phi, 60)),
    }
    if phi.params == ("power", Fraction(1)):
        rep.add("M vs e - 1", M, math.e - 1, slack=1e-6, op="==")
    if not math.isfinite(M):
        return rep.finalize(inconclusive=True)
    rep.add("M finite", M, math.inf, op="<")
    return rep.finalize()


def _n_of(norm, x):
    return float(norm(x))


@_timed
def cmd_theorem8(
    n_list: Sequence = tuple(range(1, 7)),
    battery: Sequence = BATTERY,
    norms: Sequence = BATTERY_NORMS,
    tail_tol: float = 1e-12,
    rel_slack: float = 1e-9,
):
    """Distribution-level consequences linking T_n, H_m and K on a battery."""
    rep = VerificationReport(
        "theorem8",
        "K is bounded on E exactly when the T_n are uniformly bounded on E",
        {"n_list": list(n_list), "battery": [list(a) for a in battery], "norms": list(norms),
         "tail_tol": tail_tol},
    )
    evals = {name: parse_norm(name) for name in norms}
    inv_e = math.exp(-1)
    r_T, r_K = {name: 0.0 for name in norms}, {name: math.inf for name in norms}
    for a in battery:
        f = from_vector([Fraction(v) for v in a])
        n = len(a)
        K = kruglov_dist(law_of(f), tail_tol)
        Kq = quantile(K, tail="zero")
        m = max(k for k in range(1, 17) if n * k <= 16)
        Hq = quantile(h_m_dist(a, m))
        Tq = quantile(t_n_dist(repeat_vector(a, m)))
        for name, N in evals.items():
            nf = _n_of(N, f)
            if nf == 0:
                continue
            for k in n_list:
                r = _n_of(N, quantile(t_n_dist(average_vector(f, k)))) / nf
                r_T[name] = max(r_T[name], r)
            nk = _n_of(N, Kq)
            r_K[name] = min(r_K[name], nk / nf)
            rep.add(f"{name} a={_vec(a)} K lower bound", inv_e * nf, nk, slack=rel_slack * nf)
            nt = _n_of(N, Tq)
            rep.add(f"{name} a={_vec(a)} H_{m} vs 3 T_{n * m}", _n_of(N, Hq), 3 * nt, slack=rel_slack * nt)
        tau, l, r = _ccdf_worst(t_n_dist(a), scale_values(K, 2), 12)
        rep.add(f"a={_vec(a)} T_{n} vs 12 2K worst tau={tau}", l, float(r), slack=0)
    rep.summary = {"sup_r_T": r_T, "min_r_K": r_K}
    return rep.finalize()


def orlicz_rho(p: float, n: int) -> float:
    M = OrliczYoungFunction(p)
    ones = [1] * n
    return norm_orlicz(quantile(t_n_dist(ones)), M) / norm_orlicz(from_vector(ones), M)


@_timed
def cmd_corollary12(p_list: Sequence = (1, 2), n_list: Sequence = (64, 128, 256, 512, 1024, 2048)):
    """rho_p(n) = ||T_n 1|| / ||1|| in exp L_p: bounded for p = 1, growing for p = 2."""
    n_list = sorted(n_list)
    if any(n > 2048 or n < 1 for n in n_list):
        raise ValueError("n must lie in 1..2048")
    rep = VerificationReport(
        "corollary12",
        "the T_n are uniformly bounded on exp L_p exactly when p <= 1",
        {"p_list": list(p_list), "n_list": list(n_list)},
    )
    rho = {p: [orlicz_rho(float(p), n) for n in n_list] for p in p_list}
    for p, seq in rho.items():
        if p > 1:
            for i in range(len(seq) - 1):
                rep.add(f"p={p} rho(n={n_list[i + 1]:04d}) > rho(n={n_list[i]:04d})", seq[i], seq[i + 1], op="<")
        elif p <= 1 and len(seq) >= 2:
            half = len(seq) // 2
            rep.add(f"p={p} second-half max within first-half max", max(seq[half:]), max(seq[:half]), slack=1e-6)
    rep.summary = {"rho": {p: dict(zip(n_list, seq)) for p, seq in rho.items()}}
    return rep.finalize()


def subset_power_gaps(r: Sequence[Fraction], p: int):
    """Over all subsets U: min of (sum_U r_i)^p - sum_U r_i^p, with its mask."""
    n = len(r)
    s_r = [Fraction(0)] * (1 << n)
    s_y = [Fraction(0)] * (1 << n)
    y = [v**p for v in r]
    best = (Fraction(0), 0)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        s_r[mask] = s_r[rest] + r[low]
        s_y[mask] = s_y[rest] + y[low]
        gap = s_r[mask] ** p - s_y[mask]
        if gap < best[0] or (best[1] == 0 and gap == best[0]):
            best = (gap, mask)
    return best


@_timed
def cmd_corollary13(p_list: Sequence = (2, 3), n_max: int = 12, trials: int = 20, seed: int = 0,
                    value_cap: int = 8):
    """(sum_U y_i^{1/p})^p >= sum_U y_i for every subset U, with y_i = r_i^p exact."""
    if any(p < 1 for p in p_list):
        raise ValueError("p must be at least 1")
    if n_max > 12:
        raise ValueError("exhaustive subsets limited to n <= 12")
    rep = VerificationReport(
        "corollary13",
        "(sum over U of y_i^(1/p))^p >= sum over U of y_i",
        {"p_list": list(p_list), "n_max": n_max, "trials": trials, "seed": seed, "value_cap": value_cap},
    )
    rng = random.Random(seed)
    checks = 0
    for trial in range(trials):
        r = [Fraction(rng.randint(0, value_cap), rng.randint(1, 4)) for _ in range(n_max)]
        for p in p_list:
            gap, mask = subset_power_gaps(r, int(p))
            checks += (1 << n_max) - 1
            U = [i for i in range(n_max) if mask >> i & 1]
            y = [r[i] ** int(p) for i in U]
            rep.add(f"trial={trial:02d} p={p} tightest U={U}", sum(y, Fraction(0)), sum(y, Fraction(0)) + gap)
    rep.summary = {"subsets_checked": checks}
    return rep.finalize()


def _matrix_battery(n: int, rng: random.Random, value_cap: int = 8) -> dict:
    return {
        "diagonal": [[Fraction(i + 1) if i == j else Fraction(0) for j in range(n)] for i in range(n)],
        "all-ones": [[Fraction(1)] * n for _ in range(n)],
        "zero": [[Fraction(0)] * n for _ in range(n)],
        "random": [[Fraction(rng.randint(0, value_cap)) for _ in range(n)] for _ in range(n)],
    }


@_timed
def cmd_corollary10(n: int = 3, norms: Sequence = BATTERY_NORMS, seed: int = 0):
    """Ratio of ||A_n x|| to the bracket ||C_n(x*_1..x*_n)|| + (1/n) sum_{k>n} x*_k.

    The constant in the bound is not specified, so the verdict is always
    inconclusive and the ratios are diagnostic.
    """
    if not 1 <= n <= 8:
        raise ValueError("n must lie in 1..8")
    rep = VerificationReport(
        "corollary10",
        "||A_n x|| is bounded by C times the norm of the n largest entries plus the averaged rest",
        {"n": n, "norms": list(norms), "seed": seed},
    )
    rng = random.Random(seed)
    evals = {name: parse_norm(name) for name in norms}
    ratios = {}
    for label, x in _matrix_battery(n, rng).items():
        law = a_n_matrix_dist(x)
        xs = sorted((v for row in x for v in row), reverse=True)
        head = from_vector(xs[:n])
        rest = sum(xs[n:], Fraction(0)) / n
        ratios[label] = {}
        for name, N in evals.items():
            lhs = _n_of(N, quantile(law))
            bracket = _n_of(N, head) + float(rest)
            ratios[label][name] = 0.0 if bracket == 0 else lhs / bracket
    rep.summary = {"ratios": ratios}
    return rep.finalize(inconclusive=True)


CLAIMS = {
    "lemma5": cmd_lemma5,
    "lemma6": cmd_lemma6,
    "lemma7": cmd_lemma7,
    "remark-counterexample": cmd_remark,
    "lemma2": cmd_lemma2,
    "theorem1": cmd_theorem1,
    "criterion": cmd_criterion,
    "theorem8": cmd_theorem8,
    "corollary12": cmd_corollary12,
    "corollary13": cmd_corollary13,
    "corollary10": cmd_corollary10,
}
