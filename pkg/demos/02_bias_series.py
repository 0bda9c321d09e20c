"""
Exact bias series
=================

b(n) counts monic f of degree n with lambda(f) chi_m(f) = +1 minus those with
-1.  Its generating function is rational, so the whole series comes from a
short integer recurrence.
"""

from ffbias import (
    FieldSpec,
    brute_force,
    expand,
    gf_lambda,
    gf_mu,
    l_polynomial,
    nth_term_fast,
    parse_poly,
    recurrence_from,
)
from ffbias.biasseries import normalized

F5 = FieldSpec(5)
m = parse_poly("T^3+T+4", F5)
L = l_polynomial(F5, m)
gf = gf_lambda(L)
print("numerator  :", gf.numerator)
print("denominator:", gf.denominator)

s = expand(gf, 12)
print("b(1..12):", s.values)
print("B(1..12):", s.cumulative)

# The same numbers by counting every monic polynomial of degree <= 8.
counts = brute_force(F5, m, "lambda", 8)
print("brute force agrees:", counts.series.b == s.b[:9])

rec = recurrence_from(gf)
print(rec)
n = 10_000
print(f"b({n}) has {len(str(abs(nth_term_fast(rec, n))))} digits")

# Normalized by q^(n/2) the series is bounded and oscillates around a positive mean.
big = expand(gf, 400)
tail = [normalized(big.b[k], 5, k) for k in range(300, 400)]
print("mean of q^(-n/2) b(n) over 300..399:", sum(tail) / len(tail))

# Without the lambda twist (mu only) the mean vanishes.
mu = expand(gf_mu(L), 400)
tail = [normalized(mu.b[k], 5, k) for k in range(300, 400)]
print("mean of q^(-n/2) b_mu(n) over 300..399:", sum(tail) / len(tail))
