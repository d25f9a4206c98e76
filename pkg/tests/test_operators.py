import cmath
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from kruglov.dist import DiscreteDistribution, ccdf, char_fn, delta, law_of, mean, quantile, scale_values, tau_grid
from kruglov.exactnum import binomial, factorial
from kruglov.operators import (
    a_n_matrix_dist,
    h_m_dist,
    kruglov_dist,
    kruglov_iterate,
    kruglov_truncation,
    repeat_vector,
    subset_sum_table,
    support_iteration,
    t_n_bruteforce,
    t_n_dist,
    t_n_stepfn,
)
from kruglov.spaces import norm_l1
from kruglov.stepfn import StepFunction, average_vector, constant, from_vector

from conftest import rationals, small_vectors, step_functions


def D(d):
    return DiscreteDistribution(d.items())


# --- T_n ---------------------------------------------------------------------


def test_t_n_examples():
    assert t_n_dist([1]) == delta(1)
    assert t_n_dist([1, 1, 1]) == D({0: F(1, 3), 1: F(1, 2), 3: F(1, 6)})
    assert t_n_bruteforce([1, 2]) == D({0: F(1, 2), 3: F(1, 2)})
    assert t_n_bruteforce([0, 0, 0]) == delta(0)


def test_t_n_rejects_negative_entries():
    with pytest.raises(ValueError):
        t_n_dist([1, -1])


def test_bruteforce_guard():
    with pytest.raises(ValueError):
        t_n_bruteforce([1] * 9)


@pytest.mark.parametrize("n", range(1, 11))
def test_top_atom_of_ones(n):
    assert t_n_dist([1] * n).mass_at(n) == F(1, factorial(n))


def test_oracle_equivalence_seeded():
    rng = random.Random(1)
    for n in range(2, 8):
        for _ in range(10):
            a = [F(rng.randint(0, 9), rng.randint(1, 4)) for _ in range(n)]
            assert t_n_dist(a) == t_n_bruteforce(a)


@given(small_vectors(max_len=6))
def test_oracle_equivalence_property(a):
    assert t_n_dist(a) == t_n_bruteforce(a)


@given(small_vectors(max_len=7))
def test_subset_table_invariants(a):
    table = subset_sum_table(a)
    assert table.counts[0] == {0: 1}
    for k in range(len(a) + 1):
        assert table.row_total(k) == binomial(len(a), k)


@given(small_vectors(max_len=7))
def test_t_n_is_an_l1_isometry(a):
    assert mean(t_n_dist(a)) == mean(law_of(from_vector(a)))


@given(small_vectors(max_len=6))
def test_top_atom_has_at_least_inverse_factorial(a):
    assert t_n_dist(a).mass_at(sum(a)) >= F(1, factorial(len(a)))


def test_t_n_stepfn_examples():
    x = StepFunction([(F(1, 3), 3), (F(2, 3), 0)])
    assert t_n_stepfn(x, 1) == constant(1)
    assert norm_l1(t_n_stepfn(x, 4)) == norm_l1(x)


def test_t_n_stepfn_lexicographic_cells():
    # S_2 in one-line notation: (0,1) fixes both points, (1,0) fixes none
    assert t_n_stepfn(from_vector([1, 2]), 2) == StepFunction([(F(1, 2), 3), (F(1, 2), 0)])


@given(step_functions(max_pieces=4), st.integers(1, 5))
def test_t_n_stepfn_law_matches_dp(x, n):
    assert law_of(t_n_stepfn(x, n)) == t_n_dist(average_vector(x, n))


# --- H_m ---------------------------------------------------------------------


def test_h_m_examples():
    assert h_m_dist([1, 2], 2) == D({0: F(1, 4), 1: F(1, 4), 2: F(5, 16), 3: F(1, 8), 4: F(1, 16)})
    assert h_m_dist([1, 3, 3], 1) == D({1: F(1, 3), 3: F(2, 3)})
    assert repeat_vector([1, 2], 2) == [1, 1, 2, 2]


@pytest.mark.parametrize("n", range(1, 9))
def test_h_top_atom_of_ones(n):
    assert h_m_dist([1] * n, n).mass_at(n) == F(1, n**n)


@given(small_vectors(max_len=4), st.integers(1, 5))
def test_h_m_preserves_mean(a, m):
    assert mean(h_m_dist(a, m)) == sum(a, F(0)) / len(a)


@given(small_vectors(max_len=3), st.integers(1, 4))
def test_h_m_denominators(a, m):
    a = [F(int(v)) for v in a]
    n = len(a)
    assert all((n * m) ** m % mass.denominator == 0 for mass in h_m_dist(a, m).masses)


@given(st.lists(st.integers(0, 8), min_size=1, max_size=4), st.integers(1, 4))
def test_lemma5_inequality(a, m):
    H = h_m_dist(a, m)
    T = t_n_dist(repeat_vector(a, m))
    for tau in tau_grid(H, T):
        assert ccdf(H, tau)[1] <= 3 * ccdf(T, tau)[0]


def test_h_m_approaches_kruglov_law():
    for a in ([1], [1, 2], [1, 1, 1]):
        K = kruglov_dist(law_of(from_vector(a)))
        dists = []
        for m in (2, 8, 32):
            H = h_m_dist(a, m)
            dists.append(max(abs(float(ccdf(H, t)[0]) - float(ccdf(K, t)[0])) for t in tau_grid(H, K)))
        assert all(b <= c + float(K.tail) for b, c in zip(dists[1:], dists))
        assert dists[-1] < 0.01


# --- K -----------------------------------------------------------------------


def test_truncation_level():
    N, bound = kruglov_truncation(1e-12)
    assert bound < 1e-12
    assert sum(1 / math.factorial(k) for k in range(N, N + 30)) / math.e >= 1e-12


def test_kruglov_of_point_mass_is_poisson():
    K = kruglov_dist(delta(1))
    assert len(K.atoms) == 15
    for k in range(15):
        assert K.mass_at(k) == pytest.approx(math.exp(-1) / math.factorial(k), abs=1e-12)
    assert K.tail < 1e-12


def test_kruglov_of_zero():
    K = kruglov_dist(delta(0))
    assert K.values == [0]
    assert K.mass_at(0) == pytest.approx(1 - K.tail, abs=1e-15)


def test_kruglov_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        kruglov_dist(delta(1), 0)


@given(small_vectors(max_len=3, max_value=4))
def test_kruglov_preserves_mean(a):
    mu = law_of(from_vector(a))
    K = kruglov_dist(mu)
    assert float(mean(K)) == pytest.approx(float(mean(mu)), abs=1e-10)
    assert K.mass_at(0) >= math.exp(-1) - 1e-15


@pytest.mark.parametrize("mu", [delta(1), D({0: F(1, 2), 1: F(1, 2)}), D({1: F(1, 3), 2: F(1, 3), 3: F(1, 3)})])
@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0, 5.0])
def test_char_fn_identity(mu, t):
    K = kruglov_dist(mu)
    assert abs(char_fn(K, t) - cmath.exp(char_fn(mu, t) - 1)) <= 2 * float(K.tail) + 1e-15


def test_float_input_needs_lattice_step():
    mu = DiscreteDistribution([(0.3, F(1, 2)), (1.1, F(1, 2))])
    with pytest.raises(ValueError):
        kruglov_dist(mu)
    K = kruglov_dist(mu, lattice_step=F(1, 10))
    assert K.mass_at(F(3, 10)) == pytest.approx(math.exp(-1) / 2, rel=1e-12)


def test_iterate_zero_atoms_follow_recurrence():
    seq = support_iteration(6)
    assert kruglov_iterate(1).mass_at(0) == math.exp(-1)
    for k in range(1, 7):
        tol = 1e-9 if k <= 4 else 1e-6
        assert float(kruglov_iterate(k).mass_at(0)) == pytest.approx(seq[k - 1], abs=tol)


def test_iterate_support_and_tail_sizes():
    sizes = [len(kruglov_iterate(k).atoms) for k in range(1, 5)]
    assert sizes == [15, 34, 50, 66]
    assert kruglov_iterate(4).tail < 1e-11


def test_support_iteration_values():
    seq = support_iteration(200)
    assert seq[0] == math.exp(-1)
    assert seq[1] == pytest.approx(math.exp(math.exp(-1) - 1))
    assert seq[1] == pytest.approx(0.5314636, abs=1e-7)
    assert all(a < b < 1 for a, b in zip(seq, seq[1:]))
    assert seq[-1] > 0.99


# --- A_n ---------------------------------------------------------------------


def test_matrix_law_examples():
    assert a_n_matrix_dist([[1, 0, 0], [0, 2, 0], [0, 0, 3]]) == t_n_dist([1, 2, 3])
    assert a_n_matrix_dist([[1] * 4 for _ in range(4)]) == delta(4)
    assert a_n_matrix_dist([[1, 2], [3, 4]]) == delta(5)


@given(small_vectors(max_len=5))
def test_matrix_law_on_diagonal(a):
    n = len(a)
    x = [[a[i] if i == j else 0 for j in range(n)] for i in range(n)]
    assert a_n_matrix_dist(x) == t_n_dist(a)


def test_matrix_law_rejects_non_square():
    with pytest.raises(ValueError):
        a_n_matrix_dist([[1, 2]])
