# Rearrangement-invariant norms of step functions, and the Lorentz criterion.
import math
from fractions import Fraction

from kruglov import (
    OrliczYoungFunction,
    StepFunction,
    from_vector,
    kruglov_criterion,
    norm_explog,
    norm_lorentz,
    norm_marcinkiewicz,
    norm_orlicz,
    parse_gauge,
    power_gauge,
    quantile,
    t_n_dist,
)
from kruglov.spaces import custom_gauge

x = StepFunction([(Fraction(1, 4), 4), (Fraction(1, 2), 1), (Fraction(1, 4), 0)])
sqrt = power_gauge(Fraction(1, 2))
print("x =", x)
print("Lorentz, phi = t^(1/2):      ", norm_lorentz(x, sqrt))
print("Marcinkiewicz, psi = t^(1/2):", norm_marcinkiewicz(x, sqrt))
for p in (0.5, 1, 2):
    print(f"{'exp L_' + str(p) + ' (Luxemburg):':29s}", norm_orlicz(x, OrliczYoungFunction(p)))
print("sup x*(t)/log2(2/t):         ", norm_explog(x))

# sup over t of sum_k phi(t^k/k!)/phi(t); finite means K is bounded on the
# Lorentz space of phi.
for spec in ("power:1", "power:1/2", "power:1/10", "paper-psi"):
    M, arg = kruglov_criterion(parse_gauge(spec), full=True)
    print(f"criterion {spec:11s} M = {M:.10f} at t = {arg}")
print("e - 1 =", math.e - 1)
slow = custom_gauge(lambda t: 2 / (2 - math.log(float(t))), "2/(2 - ln t)")
print("criterion 2/(2 - ln t):", kruglov_criterion(slow))

# On exp L_p the fixed-point operators T_n stay bounded for p = 1 and blow up
# for p = 2; the all-ones vector already shows it.
for p in (1, 2):
    M = OrliczYoungFunction(p)
    base = norm_orlicz(from_vector([1]), M)
    row = []
    for n in (16, 64, 256, 1024):
        row.append(norm_orlicz(quantile(t_n_dist([1] * n)), M) / base)
    print(f"p={p}: ||T_n 1|| / ||1|| for n = 16, 64, 256, 1024:", [round(r, 4) for r in row])
