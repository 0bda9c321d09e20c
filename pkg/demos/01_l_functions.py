"""
L-polynomials of quadratic characters
=====================================

Every squarefree monic m in F_q[T] gives a quadratic character chi_m and an
L-polynomial in u.  Its zeros sit on |u| = q^(-1/2), so each one is pinned
down by an angle.
"""

import math

from ffbias import FieldSpec, central_l_value, gsh_diagnostic, inverse_zeros, l_polynomial, parse_poly

# A cubic over F_5: the L-polynomial has degree 2 and a single angle pair.
F5 = FieldSpec(5)
m = parse_poly("T^3+T+4", F5)
L = l_polynomial(F5, m)
print("L(u) =", L)

z = inverse_zeros(L)
print("angle:", z.angles[0], " cos =", math.cos(z.angles[0]), " expected", -3 / math.sqrt(20))
print("RH residual:", z.rh_residual)

# Two cubics over F_3 behave very differently: one angle is pi/6 exactly.
F3 = FieldSpec(3)
for text in ("T^3+2T+1", "T^3+T^2+2"):
    Lm = l_polynomial(F3, parse_poly(text, F3))
    diag = gsh_diagnostic(inverse_zeros(Lm))
    print(f"{text:>12}  L = {Lm}   {diag.describe()}")

# A degree-5 modulus with two prime factors: two angles and no small relation.
m5 = parse_poly("(T^2+1)(T^3+2T+1)", F3)
L5 = l_polynomial(F3, m5)
z5 = inverse_zeros(L5)
print("\ndegree 5:", L5)
print("cosines:", [round(math.cos(t), 12) for t in z5.angles])
print(gsh_diagnostic(z5).describe())

# The central value, by Horner and from the angles.
cv = central_l_value(L5, z5)
print("L(q^-1/2):", cv.horner, "product form:", cv.product)
