"""
When an angle is a rational multiple of pi
==========================================

For m = T^3 - T + 1 over F_3 the single angle is pi/6.  The sine terms then
repeat with period 12 and the torus picture collapses to a finite cycle, so
the densities are exact fractions read off one period.
"""

from ffbias import FieldSpec, expand, factor, gf_lambda, gf_mu, l_polynomial, model_densities, parse_poly

spec = FieldSpec(3)
m = parse_poly("T^3-T+1", spec)
L = l_polynomial(spec, m)
print("L(u) =", L)

for kind, gf in (("mu", gf_mu(L)), ("lambda", gf_lambda(L))):
    s = expand(gf, 36)
    signs = "".join("+0-"[1 - ((x > 0) - (x < 0))] for x in s.b[12:36])
    print(f"{kind:>6} signs of b(12..35): {signs}")



def show(r):
    return ", ".join(str(x) for x in r.exact)


for kind in ("lambda", "mu"):
    nc, cum = model_densities(L, factor(m), kind)
    print(f"{kind:>6}  nc ({show(nc)})  cum ({show(cum)})  {nc.notes[0]}")

# The same fallback covers L-polynomials with real zeros such as (1 - 5u^2)^2.
F5 = FieldSpec(5)
m = parse_poly("T^5+4T", F5)
L = l_polynomial(F5, m)
nc, cum = model_densities(L, factor(m))
print(f"\nT^5+4T over F_5: L = {L}  nc ({show(nc)})  cum ({show(cum)})")
