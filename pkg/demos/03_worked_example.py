"""End to end on y^2 = x^3 - 3440x + 77658 over Q(sqrt(-43)) at p = 11.

The rational point (129/4, 129/8) has a non-trivial local symbol.  Each
b = 2 mod 121 gives a quadratic extension K(sqrt(f(b))) in which the prime
above 11 splits and the naive point (b, sqrt f(b)) is non-trivial too, so
the pair is independent and the local group has rank 2.  The certificates
are then re-derived from their JSON alone.
"""

import json
from fractions import Fraction

from cmcycles.criteria import build_context, check_symbol, exact_point, quadratic_split_test
from cmcycles.families import arithmetic_progression, revalidate, scan_b_candidates

ctx = build_context(-3440, 77658, D=43, p=11)
print("family parameter a =", ctx.a, "  torsion x mod 121:", sorted(ctx.table.values))

P = exact_point(Fraction(129, 4), Fraction(129, 8), ctx)
rep = check_symbol(P, ctx)
print("\nsymbol of (129/4, 129/8):", "non-trivial" if rep.nontrivial else "trivial")
for line in rep.trace:
    print("   ", line)

res = scan_b_candidates(ctx, P, arithmetic_progression(2, 121, 10))
print(f"\n{len(res.certificates)} certificates for b = 2, 123, ..., 1091")
print(res.certificates[0].render_text())
print("all re-validate from JSON:", all(revalidate(json.loads(c.dumps())) for c in res.certificates))

# x = 129/4 is the x-coordinate of a K-point already, so it yields nothing new
s = quadratic_split_test(Fraction(129, 4), ctx)
print("\nb = 129/4: degenerate (f(b) is a square in K):", s.degenerate)
