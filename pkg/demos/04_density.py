"""How often does a random second digit give a non-trivial symbol?

Over each torsion residue b0, exactly one digit b1 mod p makes the
linearized kernel polynomial vanish; every other choice is non-trivial.
So the non-trivial share among (b0, b1) is (p - 1)/p exactly.
"""

from cmcycles.cm import admissible_tuples, family
from cmcycles.criteria import build_context
from cmcycles.families import density_report

for D, p in [(1, 5), (19, 5), (3, 7), (43, 11), (67, 17), (163, 41)]:
    t = admissible_tuples(D, p)[0]
    ctx = build_context(*family(D).coefficients(t.a0), D=D, p=p)
    rep = density_report(ctx)
    failing = ", ".join(f"{b0}:{b1}" for b0, b1 in rep.failing[:6])
    more = " ..." if len(rep.failing) > 6 else ""
    print(f"D={D:<4} p={p:<3} a={t.a0:<3} density {rep.density}   failing b0:b1 {failing}{more}")
