"""
Limiting densities from the oscillatory model
=============================================

For large n, q^(-n/2) b(n) is a constant plus a sum of sines in n theta_j.
The fraction of n with b(n) > 0 becomes the measure of a band on a torus,
which is one arcsin for one angle and a quadrature for two.
"""

from ffbias import FieldSpec, empirical_densities, expand, factor, gf_lambda, l_polynomial, model_densities, parse_poly

for q, text in ((5, "T^3+T+4"), (3, "(T^2+1)(T^3+2T+1)")):
    spec = FieldSpec(q)
    m = parse_poly(text, spec)
    L = l_polynomial(spec, m)
    nc, cum = model_densities(L, factor(m))
    print(f"q={q} m={text}")
    print(f"  model      delta_+ nc {nc.delta_plus:.6f}  cum {cum.delta_plus:.6f}  ({nc.source})")

    # the empirical frequencies creep toward the model values
    series = expand(gf_lambda(L), 20000)
    for n in (10, 100, 1000, 10000, 20000):
        e_nc, e_cum = empirical_densities(series, n)
        print(f"  n={n:>6}   delta_+ nc {e_nc.delta_plus:.4f}  cum {e_cum.delta_plus:.4f}")

# mu carries no bias at all
spec = FieldSpec(5)
m = parse_poly("T^3+T+4", spec)
for r in model_densities(l_polynomial(spec, m), factor(m), "mu"):
    print("mu:", r.delta_plus, r.delta_zero, r.delta_minus, r.source)
