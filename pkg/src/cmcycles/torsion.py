"""Etale p-torsion x-coordinates mod p^2 and the family kernel polynomial.

The torsion points reducing isomorphically onto E(F_p)[p] have p-adically
integral x-coordinates.  We find them to precision p^2 by lifting candidates
to Z/p^3 and keeping the ones killed by [p]; mod p^3 the formal p-torsion
cannot be told apart from O, so the second digit is determined and nothing
beyond it is claimed.

From one fiber, weighted homogeneity in the family parameter turns the
monic polynomial on these roots into a two-variable polynomial
Phi(x, a) = sum_k c_k x^(n - w k) a^k, n = (p-1)/2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cm import CMFamily, SplitPrime
from .curve import (
    INFINITY,
    CurveRing,
    Poly,
    add,
    count_points,
    division_poly,
    lift_with_x,
    order_p_test,
    scalar_mul,
)
from .errors import (
    HomogeneityViolation,
    InternalAmbiguity,
    MissingSecondDigit,
    NotAdmissible,
    NotATorsionResidue,
    OracleTooLarge,
)

ORACLE_MAX_P = 13


@dataclass(frozen=True)
class TorsionTable:
    """Roots (x0, x1): x(T) = x0 + x1 p mod p^2 for T in E[pibar] \\ {O}."""

    D: int
    p: int
    A: int
    B: int
    d: int
    pibar_unit: int
    roots: tuple[tuple[int, int], ...]

    @property
    def residues(self) -> list[int]:
        return [r[0] for r in self.roots]

    @property
    def values(self) -> list[int]:
        return [x0 + x1 * self.p for x0, x1 in self.roots]

    def root_over(self, x0: int) -> tuple[int, int] | None:
        x0 %= self.p
        for r in self.roots:
            if r[0] == x0:
                return r
        return None

    def cache_key(self) -> str:
        return f"D{self.D}_p{self.p}_A{self.A}_B{self.B}_u{self.pibar_unit}"

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "p": self.p,
            "A": self.A,
            "B": self.B,
            "d": self.d,
            "pibar_unit": self.pibar_unit,
            "roots": [list(r) for r in self.roots],
        }

    @classmethod
    def from_json(cls, obj: dict) -> TorsionTable:
        return cls(
            obj["D"], obj["p"], obj["A"], obj["B"], obj["d"], obj["pibar_unit"],
            tuple(tuple(r) for r in obj["roots"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _setup(C: CurveRing, sp: SplitPrime, d: int | None):
    if C.N < 3:
        raise ValueError("torsion lifting needs the curve mod p^3")
    C3 = C.reduce(3)
    p = C.p
    M = count_points(C3.reduce(1))
    if M % p:
        raise NotAdmissible(f"#E(F_{p}) = {M} is prime to {p}")
    if d is None:
        d = M // p
    if d * p != M:
        raise NotAdmissible(f"cofactor {d} does not match #E(F_{p}) = {M}")
    return C3, d


def _order_p_point(Cf: CurveRing, d: int):
    """First point (in x order) whose d-multiple is not O."""
    for x0, y0 in Cf.points()[1:]:
        if y0 == 0:
            continue
        Q = scalar_mul(d, (x0, y0), Cf)
        if Q is not INFINITY:
            return Q
    raise NotAdmissible("no point of order p on the special fiber")


def _table(C3: CurveRing, sp: SplitPrime, d: int, roots) -> TorsionTable:
    p = C3.p
    unit = sp.embedding.image(sp.pibar, 2)
    return TorsionTable(sp.D, p, C3.A, C3.B, d, unit, tuple(sorted(roots)))


def etale_torsion_x(C: CurveRing, sp: SplitPrime, d: int | None = None) -> TorsionTable:
    """Torsion table by a per-residue scan over second digits."""
    C3, d = _setup(C, sp, d)
    p = C3.p
    Cf = C3.reduce(1)
    P = _order_p_point(Cf, d)
    roots = []
    for k in range(1, (p - 1) // 2 + 1):
        x0, y0 = scalar_mul(k, P, Cf)
        passing = [
            x1 for x1 in range(p)
            if order_p_test(lift_with_x(x0 + x1 * p, y0, C3), C3)
        ]
        if len(passing) != 1:
            raise InternalAmbiguity(f"{len(passing)} second digits pass over x0={x0}")
        roots.append((x0, passing[0]))
    if len({r[0] for r in roots}) != len(roots):
        raise InternalAmbiguity("torsion residues are not distinct")
    return _table(C3, sp, d, roots)


def torsion_by_multiples(C: CurveRing, sp: SplitPrime, d: int | None = None) -> TorsionTable:
    """Torsion table from one scanned lift and its multiples.

    A lift P passing the order test is T + R with R two levels deep in the
    formal group, and so is each [k]P; hence x([k]P) = x([k]T) mod p^2.  This
    costs one digit scan instead of (p-1)/2 of them, at the price of not
    re-checking uniqueness over every residue.
    """
    C3, d = _setup(C, sp, d)
    p = C3.p
    Cf = C3.reduce(1)
    x0, y0 = _order_p_point(Cf, d)
    passing = [x1 for x1 in range(p) if order_p_test(lift_with_x(x0 + x1 * p, y0, C3), C3)]
    if len(passing) != 1:
        raise InternalAmbiguity(f"{len(passing)} second digits pass over x0={x0}")
    P = lift_with_x(x0 + passing[0] * p, y0, C3)
    roots, Q = [], P
    for k in range(1, (p - 1) // 2 + 1):
        if k > 1:
            Q = add(Q, P, C3)
        r = Q[0] % (p * p)
        roots.append((r % p, r // p))
    if len({r[0] for r in roots}) != len(roots):
        raise InternalAmbiguity("torsion residues are not distinct")
    return _table(C3, sp, d, roots)


def brute_force_torsion_x(C: CurveRing, sp: SplitPrime, d: int | None = None) -> TorsionTable:
    """Oracle: test every x in Z/p^3 with both y-lifts."""
    if C.p > ORACLE_MAX_P:
        raise OracleTooLarge(f"brute force limited to p <= {ORACLE_MAX_P}")
    C3, d = _setup(C, sp, d)
    p = C3.p
    Cf = C3.reduce(1)
    order_p = {}
    for pt in Cf.points()[1:]:
        if pt[1] and scalar_mul(p, pt, Cf) is INFINITY:
            order_p.setdefault(pt[0], []).append(pt[1])
    found = set()
    for x in range(p ** 3):
        for y0 in order_p.get(x % p, ()):
            if order_p_test(lift_with_x(x, y0, C3), C3):
                found.add(x % (p * p))
    roots = sorted((v % p, v // p) for v in found)
    if len({r[0] for r in roots}) != len(roots):
        raise InternalAmbiguity("oracle found two second digits over one residue")
    return _table(C3, sp, d, roots)


# ---------------------------------------------------------------------------
# kernel polynomial


def _residue(a, m: int, p: int) -> int:
    a = Fraction(a)
    if a.denominator % p == 0:
        raise ValueError("parameter is not p-integral")
    return a.numerator * pow(a.denominator, -1, m) % m


@dataclass(frozen=True)
class KernelPoly:
    """Phi(x, a) = sum_k coeffs[k] x^(degree - w k) a^k modulo p^2."""

    D: int
    p: int
    weight: int
    coeffs: tuple[int, ...]
    pibar_unit: int

    @property
    def degree(self) -> int:
        return (self.p - 1) // 2

    @property
    def modulus(self) -> int:
        return self.p * self.p

    def terms(self):
        n, w = self.degree, self.weight
        return [(n - w * k, k, c) for k, c in enumerate(self.coeffs)]

    def __call__(self, x: int, a: int) -> int:
        m = self.modulus
        return sum(c * pow(x, i, m) * pow(a, k, m) for i, k, c in self.terms()) % m

    def dx(self, x: int, a: int) -> int:
        m = self.modulus
        return sum(i * c * pow(x, i - 1, m) * pow(a, k, m) for i, k, c in self.terms() if i) % m

    def da(self, x: int, a: int) -> int:
        m = self.modulus
        return sum(k * c * pow(x, i, m) * pow(a, k - 1, m) for i, k, c in self.terms() if k) % m

    def specialize(self, a) -> Poly:
        m = self.modulus
        a = _residue(a, m, self.p)
        out = [0] * (self.degree + 1)
        for i, k, c in self.terms():
            out[i] = (out[i] + c * pow(a, k, m)) % m
        return Poly(out, m)

    def normalized(self) -> tuple[int, ...]:
        """Coefficients divided by the pibar unit."""
        inv = pow(self.pibar_unit, -1, self.modulus)
        return tuple(c * inv % self.modulus for c in self.coeffs)

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "p": self.p,
            "weight": self.weight,
            "coeffs": list(self.coeffs),
            "pibar_unit": self.pibar_unit,
        }

    @classmethod
    def from_json(cls, obj: dict) -> KernelPoly:
        return cls(obj["D"], obj["p"], obj["weight"], tuple(obj["coeffs"]), obj["pibar_unit"])


def root_polynomial(T: TorsionTable) -> Poly:
    """prod (x - r) over the table's roots, mod p^2."""
    m = T.p * T.p
    out = Poly([1], m)
    for r in T.values:
        out = out * Poly([-r, 1], m)
    return out


def reconstruct_family_poly(T: TorsionTable, a, fam: CMFamily) -> KernelPoly:
    """Homogenize pibar * prod (x - r) from the fiber with parameter a."""
    p, m, w = T.p, T.p * T.p, fam.weight
    a_res = _residue(a, m, p)
    if a_res % p == 0:
        raise ValueError("family parameter must be a unit mod p")
    n = (p - 1) // 2
    monic = root_polynomial(T).coeffs + [0] * (n + 1)
    # monic[n - j] = (-1)^j e_j
    for j in range(1, n + 1):
        if j % w and monic[n - j] % m:
            raise HomogeneityViolation(f"e_{j} of the roots is nonzero mod p^2 but {j} is off-weight")
    coeffs = []
    a_inv = pow(a_res, -1, m)
    for k in range(n // w + 1):
        coeffs.append(T.pibar_unit * monic[n - w * k] * pow(a_inv, k, m) % m)
    return KernelPoly(T.D, p, w, tuple(coeffs), T.pibar_unit)


def divides_division_poly(K: KernelPoly, A: int, B: int, a) -> bool:
    """Whether Phi(x, a) divides psi_p(x) mod p^2 on the fiber (A, B)."""
    m = K.modulus
    psi = division_poly(K.p, A, B, m)
    _, rem = psi.divmod(K.specialize(a))
    return rem.degree < 0


def taylor_criterion_value(K: KernelPoly, b0: int, b1: int, a0: int, a1: int | None) -> int:
    """Phi(b0, a0)/p + b1 dPhi/dx + a1 dPhi/da at (b0, a0), mod p.

    This is Phi(b0 + b1 p, a0 + a1 p)/p mod p, i.e. zero exactly when
    b0 + b1 p is a torsion x-coordinate of the fiber a0 + a1 p to order p^2.
    """
    p = K.p
    if a1 is None:
        raise MissingSecondDigit("the family parameter is known only mod p")
    b0, a0 = b0 % p, a0 % p
    phi = K(b0, a0)
    if phi % p:
        raise NotATorsionResidue(f"{b0} is not a torsion residue of the fiber a = {a0}")
    return (phi // p + b1 * K.dx(b0, a0) + a1 * K.da(b0, a0)) % p
