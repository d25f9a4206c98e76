# The Kruglov operator as a compound Poisson(1) law.
#
# K mu is the law of X_1 + ... + X_N with N ~ Poisson(1). The series over N
# is cut once the dropped weight is below tail_tol; that weight is kept as a
# certified tail on the result.
import cmath
import math

from kruglov import delta, from_vector, h_m_dist, kruglov_dist, kruglov_iterate, law_of, support_iteration
from kruglov.dist import ccdf, char_fn, tau_grid

K = kruglov_dist(delta(1))
print("K applied to the point mass at 1 (a Poisson(1) law):")
for k in range(6):
    print(f"  P({k}) = {K.mass_at(k):.15f}   1/(e k!) = {math.exp(-1) / math.factorial(k):.15f}")
print("  certified tail:", K.tail)

# Characteristic functions multiply through exp(phi - 1).
mu = law_of(from_vector([1, 2, 3]))
Kmu = kruglov_dist(mu)
for t in (0.5, 2.0):
    lhs = char_fn(Kmu, t)
    rhs = cmath.exp(char_fn(mu, t) - 1)
    print(f"t={t}: |phi_K - exp(phi - 1)| = {abs(lhs - rhs):.2e}")

# H_m a converges weakly to K f_a as m grows.
a = [1, 2]
Kf = kruglov_dist(law_of(from_vector(a)))
for m in (2, 8, 32, 128):
    H = h_m_dist(a, m)
    gap = max(abs(float(ccdf(H, t)[0]) - float(ccdf(Kf, t)[0])) for t in tau_grid(H, Kf))
    print(f"m={m:4d}: sup |survival(H_m) - survival(K f)| = {gap:.5f}")

# Iterating K on the constant 1, the zero set grows by a_{k+1} = exp(a_k - 1).
seq = support_iteration(6)
for k in range(1, 7):
    mu_k = kruglov_iterate(k)
    print(f"k={k}: zero atom {float(mu_k.mass_at(0)):.12f}  recurrence {seq[k - 1]:.12f}  atoms {len(mu_k.atoms)}")
seq = support_iteration(400)
print("first k with a_k > 0.99:", next(k + 1 for k, v in enumerate(seq) if v > 0.99))
