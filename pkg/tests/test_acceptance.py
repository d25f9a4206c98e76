"""Acceptance criteria, one test each, at the stated tolerances and budgets.

A summary with one PASS/FAIL line per criterion is printed at the end of the
pytest run.
"""

import cmath
import math
import random
import time
from fractions import Fraction as F

import pytest

from kruglov.dist import DiscreteDistribution, char_fn, delta, law_of, mean, quantile
from kruglov.exactnum import factorial
from kruglov.operators import (
    h_m_dist,
    kruglov_dist,
    kruglov_iterate,
    support_iteration,
    t_n_bruteforce,
    t_n_dist,
)
from kruglov.spaces import (
    kruglov_criterion,
    norm_l1,
    norm_lorentz,
    norm_marcinkiewicz,
    power_gauge,
)
from kruglov.stepfn import StepFunction, dilate, from_vector, rearrange, scale, submajorizes
from kruglov.verify.claims import (
    BATTERY,
    cmd_corollary12,
    cmd_corollary13,
    cmd_lemma5,
    cmd_lemma6,
    cmd_lemma7,
    cmd_theorem1,
)

SQRT = power_gauge(F(1, 2))
NORMS = {
    "L1": norm_l1,
    "Lorentz power 1/2": lambda x: norm_lorentz(x, SQRT),
    "Marcinkiewicz power 1/2": lambda x: norm_marcinkiewicz(x, SQRT),
}


def test_tn_dp_matches_enumeration():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    for n in range(2, 8):
        for _ in range(50):
            a = [F(rng.randint(0, 12), rng.randint(1, 6)) for _ in range(n)]
            assert t_n_dist(a) == t_n_bruteforce(a), a
    assert time.perf_counter() - t0 < 60


def test_top_atom_masses():
    for n in range(1, 9):
        ones = [1] * n
        assert t_n_dist(ones).mass_at(n) == F(1, factorial(n))
        assert h_m_dist(ones, n).mass_at(n) == F(1, n**n)


def test_l1_isometries():
    rng = random.Random(5)
    for n in range(1, 9):
        for _ in range(4):
            a = [F(rng.randint(0, 9), rng.randint(1, 3)) for _ in range(n)]
            f_mean = mean(law_of(from_vector(a)))
            assert mean(t_n_dist(a)) == f_mean
            for m in range(1, 9):
                if n * m <= 24:
                    assert mean(h_m_dist(a, m)) == f_mean
    for mu in (delta(1), law_of(from_vector([1, 2, 3])), law_of(from_vector([F(1, 2), 0, 4]))):
        assert abs(float(mean(kruglov_dist(mu))) - float(mean(mu))) <= 1e-10


def test_h_vs_t_survival_scan():
    rep = cmd_lemma5(n_max=4, m_max=4, trials=100, value_cap=8, seed=0)
    assert rep.summary["violations"] == 0
    assert rep.verdict == "pass"
    assert rep.runtime_ms < 5 * 60 * 1000


def test_factorial_ratio_scan():
    rep = cmd_lemma6(200)
    assert rep.verdict == "pass"
    assert rep.summary["checks"] == sum(range(4, 201))
    assert rep.runtime_ms < 10 * 1000


def test_h_limit_witness():
    rep = cmd_lemma7(m_max=64)
    table = rep.summary["witness_table"]
    assert set(table) == {"(1)", "(1,1)", "(1,2)", "(1,1,1)", "(1,2,3)"}
    assert all(row["witness_m"] is not None and row["witness_m"] <= 64 for row in table.values())
    assert rep.verdict == "pass"


def test_poisson_identity():
    K = kruglov_dist(delta(1))
    for k in range(16):
        assert abs(float(K.mass_at(k)) - math.exp(-1) / math.factorial(k)) <= 1e-12


def test_zero_set_recurrence():
    seq = support_iteration(6)
    assert seq[0] == 1 / math.e
    for k in range(1, 7):
        tol = 1e-9 if k <= 4 else 1e-6
        assert abs(float(kruglov_iterate(k).mass_at(0)) - seq[k - 1]) <= tol


def test_characteristic_function_identity():
    laws = [
        delta(1),
        DiscreteDistribution([(0, F(1, 2)), (1, F(1, 2))]),
        law_of(from_vector([1, 2, 3])),
    ]
    for mu in laws:
        K = kruglov_dist(mu)
        for t in (0.1, 0.5, 1.0, 2.0, 5.0):
            assert abs(char_fn(K, t) - cmath.exp(char_fn(mu, t) - 1)) <= 2 * float(K.tail) + 1e-15


def test_kruglov_lower_bound():
    for a in BATTERY:
        f = from_vector([F(v) for v in a])
        K = kruglov_dist(law_of(f))
        Kq = quantile(K, tail="zero")
        for name, N in NORMS.items():
            nf = float(N(f))
            assert float(N(Kq)) >= math.exp(-1) * nf - 1e-9 * nf, (a, name)


def test_lorentz_criterion_value():
    M1, arg1 = kruglov_criterion(power_gauge(1), full=True)
    M2, arg2 = kruglov_criterion(SQRT, full=True)
    assert abs(M1 - (math.e - 1)) <= 1e-6
    assert math.isfinite(M2)
    assert arg1 == 1.0 and arg2 == 1.0


def test_epsilon_family_keystone():
    rep = cmd_theorem1(eps_list=(0.1, 0.2, 0.3), n_max=6, tail_tol=1e-10)
    for eps in (0.1, 0.2, 0.3):
        row = next(r for r in rep.evidence if r.input == f"eps={eps} keystone deficit")
        budget_cap = eps**7 / (1 - eps) + rep.summary["per_eps"][eps]["missing_l1"] + 1e-9
        assert row.holds()
        assert row.slack <= budget_cap
    assert rep.verdict == "pass"
    assert rep.runtime_ms < 5 * 60 * 1000


def test_subset_power_scan():
    rep = cmd_corollary13(p_list=(2, 3), n_max=12, trials=20, seed=0)
    assert rep.verdict == "pass"
    assert rep.summary["subsets_checked"] == 2 * 20 * (2**12 - 1)


def test_orlicz_dichotomy():
    n_list = [64, 128, 256, 512, 1024, 2048]
    rep = cmd_corollary12(p_list=(1, 2), n_list=n_list)
    rho2 = [rep.summary["rho"][2][n] for n in n_list]
    rho1 = [rep.summary["rho"][1][n] for n in n_list]
    assert all(a < b for a, b in zip(rho2, rho2[1:]))
    assert max(rho1[3:]) <= max(rho1[:3]) + 1e-6
    assert rep.verdict == "pass"
    assert rep.runtime_ms < 5 * 60 * 1000


def _battery(n=30):
    rng = random.Random(30)
    out = []
    for _ in range(n):
        k = rng.randint(1, 7)
        w = [rng.randint(1, 5) for _ in range(k)]
        out.append(StepFunction((F(wi, sum(w)), F(rng.randint(0, 10), rng.randint(1, 4))) for wi in w))
    return out


def test_norm_evaluator_axioms():
    xs = _battery()
    tol = 1e-12
    for name, N in NORMS.items():
        for x in xs:
            nx = N(x)
            assert N(rearrange(x)) == nx
            for c in (F(1, 2), F(7, 3)):
                assert abs(float(N(scale(x, c))) - float(c) * float(nx)) <= 2 * tol * max(1, float(c * nx))
            y = StepFunction((l, v + 1) for l, v in x.pieces)
            assert float(nx) <= float(N(y)) + tol
            for tau in (F(1, 4), F(1, 2), F(2)):
                assert float(N(dilate(x, tau))) <= max(1, float(tau)) * float(nx) + tol
        for x in xs:
            for y in xs:
                if submajorizes(y, x):
                    assert float(N(x)) <= float(N(y)) + tol
