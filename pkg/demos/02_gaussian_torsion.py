"""Torsion to second order on y^2 = x^3 + 3x at p = 5, and the d = 2 table.

With pi = 2 + i the embedding sends i to 18 mod 25.  The etale 5-torsion
has two x-coordinates mod 25; the kernel polynomial comes out as
pibar x^2 - i a.  Regenerating the digit table for the doubling rule then
gives eps = (3, 3, 1, 1), which differs at b0 = 2 and b0 = 3 from the
table one gets by a naive sign bookkeeping.  The brute-force cross-check at
the end settles it.
"""

from cmcycles.arith import QuadField, embed_quad
from cmcycles.cm import family, require_admissible
from cmcycles.criteria import epsilon_table
from cmcycles.curve import CurveRing, lift_with_x, scalar_mul
from cmcycles.torsion import brute_force_torsion_x, etale_torsion_x, reconstruct_family_poly

p, a = 5, 3
C = CurveRing(p, 3, a, 0)
sp = require_admissible(C.reduce(1), 1)
print("pi =", sp.pi, " i ->", embed_quad(QuadField(1).integer(0, 1), sp.embedding, 2).unit, "mod 25")

T = etale_torsion_x(C, sp)
assert T == brute_force_torsion_x(C, sp)
print("torsion x mod 25:", sorted(T.values), " (scan and brute force agree)")

K = reconstruct_family_poly(T, a, family(1))
c0, c1 = K.coeffs
print(f"Phi(x, a) = {c0} x^2 + {c1} a  mod 25;  pibar -> {K.pibar_unit}, -i -> {c1}")

eps = epsilon_table(a)
print("\neps(b0) for b0 = 1..4:", tuple(eps[b] for b in range(1, 5)))

# Why b0 = 2 and 3 give 3 and 1: there 3x^2 + a is divisible by 5, so the
# tangent slope squared vanishes mod 25 and x(2P) = -2 x(P) mod 25.
for b0 in (2, 3):
    ybar = next(y for x, y in C.reduce(1).points()[1:] if x == b0)
    for b1 in range(p):
        X = scalar_mul(2, lift_with_x(b0 + p * b1, ybar, C), C)[0] % 25
        mark = "  <- torsion root" if X in T.values else ""
        print(f"  x = {b0} + 5*{b1}: x(2P) = {X:2d} = -2x mod 25: {X == (-2 * (b0 + p * b1)) % 25}{mark}")
