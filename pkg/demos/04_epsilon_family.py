# A family of concave gauges built from iterates of K.
#
# g_eps = sum_n eps^n (K^n 1)* and psi_eps(t) is its running integral. Since
# K maps (K^n 1)* to (K^{n+1} 1)*, K g_eps is submajorized by g_eps / eps; the
# check below does that with a certified slack.
from fractions import Fraction

from kruglov import check_gauge
from kruglov.verify.claims import keystone_check, small_t_ratio

for eps in (0.1, 0.2, 0.3):
    res = keystone_check(eps, n_max=6)
    psi = res["gauge"]
    print(
        f"eps={eps}: {len(psi.density.pieces)} pieces, psi(1) = {float(psi(Fraction(1))):.9f}, "
        f"concave {check_gauge(psi)}, deficit {res['deficit']:.2e} <= budget {res['budget']:.2e}"
    )

# Near 0 the smaller eps gauge becomes relatively smaller, and keeping more
# small-mass atoms of the iterates exposes more of that.
for theta in (1e-6, 1e-9, 1e-12):
    print(f"prune level {theta:.0e}: g_0.1(0+) / g_0.3(0+) = {small_t_ratio(0.1, 0.3, 6, theta):.4f}")
