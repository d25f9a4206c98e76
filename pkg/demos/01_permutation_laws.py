# Fixed-point sums under a random permutation, computed exactly.
#
# T_n a is the sum of a_i over the fixed points of a uniform permutation of
# {1..n}. Its law comes from a subset-sum table weighted by derangement counts,
# so nothing here enumerates permutations except the cross-check.
from fractions import Fraction

from kruglov import h_m_dist, t_n_bruteforce, t_n_dist
from kruglov.exactnum import derangements, factorial

a = [1, 2, 3]
print("law of T_3 (1,2,3):", t_n_dist(a))
print("same law by enumerating all 3! permutations:", t_n_bruteforce(a))

# Each value gets mass (# subsets with that sum) * D(n - |U|) / n!.
print("derangement counts D(0..8):", [derangements(r) for r in range(9)])

# With all entries equal to 1 the top value n is reached only by the identity.
for n in (2, 4, 6, 8):
    top = t_n_dist([1] * n).mass_at(n)
    print(f"n={n}: P(T_n 1 = n) = {top} = 1/{factorial(n)}")

# H_m a sums m independent copies of a thinned f_a. On the all-ones vector
# its top atom is far heavier than the permutation one.
for n in (2, 3, 4, 5):
    h = h_m_dist([1] * n, n).mass_at(n)
    t = t_n_dist([1] * n).mass_at(n)
    print(f"n={n}: H top mass {h}, T top mass {t}, ratio {t / h}")

# Both operators keep the mean of f_a.
a = [Fraction(1, 2), 0, 4, 3]
mean_f = sum(a) / len(a)
print("mean f_a:", mean_f)
print("mean T_4 a:", sum(v * m for v, m in t_n_dist(a).atoms))
print("mean H_5 a:", sum(v * m for v, m in h_m_dist(a, 5).atoms))
