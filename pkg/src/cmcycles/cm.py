"""CM families over the nine class number one fields and admissible primes.

A prime p >= 5 is admissible for D when some fiber of the family has a point
count divisible by p.  Two independent routes are implemented: a scan over
all fiber residues, and a norm-trace shortcut (an element of norm p whose
trace t satisfies p | p + 1 - t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import primerange

from .arith import (
    CLASS_NUMBER_ONE_D,
    MAX_PRIME,
    PrimeEmbedding,
    QuadField,
    QuadInt,
    check_prime,
    kronecker,
    prime_embedding,
)
from .curve import CurveFp, count_points, count_points_batch, curve_fp
from .errors import (
    InternalAmbiguity,
    NonSplitPrime,
    NotAdmissible,
    NotCMCurve,
    SupersingularFiber,
    UnsupportedD,
)

# (n_D, m_D) for y^2 = x^3 + n a^2 x + m a^3; reduced twist representatives.
_FAMILY_CONSTANTS = {
    2: (-30, 56),
    7: (-35, 98),
    11: (-264, 1694),
    19: (-152, 722),
    43: (-3440, 77658),
    67: (-29480, 1948226),
    163: (-8697680, 9873093538),
}

CM_J_INVARIANT = {
    1: 1728,
    2: 8000,
    3: 0,
    7: -3375,
    11: -32768,
    19: -884736,
    43: -884736000,
    67: -147197952000,
    163: -262537412640768000,
}


def j_invariant(A, B) -> Fraction:
    A, B = Fraction(A), Fraction(B)
    disc = 4 * A ** 3 + 27 * B ** 2
    if disc == 0:
        raise ValueError("singular curve")
    return 1728 * 4 * A ** 3 / disc


@dataclass(frozen=True)
class CMFamily:
    """y^2 = f_a(x) with CM by O_K for every a != 0."""

    field: QuadField
    weight: int
    n: int
    m: int

    @property
    def D(self) -> int:
        return self.field.D

    @property
    def j(self) -> int:
        return CM_J_INVARIANT[self.D]

    def coefficients(self, a):
        """(A, B) of the fiber at a; works for ints, Fractions and residues."""
        if self.D == 1:
            return a, 0 * a
        if self.D == 3:
            return 0 * a, a
        return self.n * a * a, self.m * a * a * a

    def coefficients_mod(self, a: int, modulus: int) -> tuple[int, int]:
        A, B = self.coefficients(a)
        return A % modulus, B % modulus

    def fiber(self, a: int, p: int) -> CurveFp:
        return curve_fp(p, *self.coefficients_mod(a, p))

    def parameter(self, A, B) -> Fraction:
        """The a with (A, B) = f_a, or NotCMCurve."""
        A, B = Fraction(A), Fraction(B)
        if self.D == 1:
            if B != 0 or A == 0:
                raise NotCMCurve(f"y^2 = x^3 + {A}x + {B} is not of the form x^3 + a x")
            return A
        if self.D == 3:
            if A != 0 or B == 0:
                raise NotCMCurve(f"y^2 = x^3 + {A}x + {B} is not of the form x^3 + a")
            return B
        if A == 0 or B == 0 or j_invariant(A, B) != self.j:
            raise NotCMCurve(f"y^2 = x^3 + {A}x + {B} does not have j = {self.j}")
        a = B * self.n / (A * self.m)
        assert (self.n * a * a, self.m * a ** 3) == (A, B)
        return a

    def equation(self) -> str:
        if self.D == 1:
            return "y^2 = x^3 + a*x"
        if self.D == 3:
            return "y^2 = x^3 + a"
        return f"y^2 = x^3 + ({self.n})*a^2*x + ({self.m})*a^3"

    def fiber_orders(self, p: int) -> np.ndarray:
        """Point counts of the fibers a = 1 .. p-1 over F_p (index a - 1)."""
        a = np.arange(1, p, dtype=object)
        A = np.array([int(self.coefficients(int(t))[0]) % p for t in a], dtype=np.int64)
        B = np.array([int(self.coefficients(int(t))[1]) % p for t in a], dtype=np.int64)
        return count_points_batch(p, A, B)


@lru_cache(maxsize=None)
def family(D: int) -> CMFamily:
    if D not in CLASS_NUMBER_ONE_D:
        raise UnsupportedD(f"D={D} is not one of {CLASS_NUMBER_ONE_D}")
    K = QuadField(D)
    w = K.unit_count // 2
    n, m = _FAMILY_CONSTANTS.get(D, (0, 0))
    fam = CMFamily(K, w, n, m)
    for a in (1, 2, -3, 7):
        A, B = fam.coefficients(Fraction(a))
        if j_invariant(A, B) != fam.j:
            raise AssertionError(f"family constants for D={D} have the wrong j-invariant")
    return fam


# ---------------------------------------------------------------------------
# admissibility


def is_split(D: int, p: int) -> bool:
    return p >= 5 and D % p != 0 and kronecker(-D, p) == 1


def _require_split(D: int, p: int) -> None:
    check_prime(p)
    if not is_split(D, p):
        raise NonSplitPrime(f"{p} does not split in Q(sqrt(-{D}))")


def admissible_residues(D: int, p: int) -> list[int]:
    """All a in F_p^x whose fiber has point count divisible by p, ascending."""
    fam = family(D)
    _require_split(D, p)
    orders = fam.fiber_orders(p)
    return [int(a) for a in np.nonzero(orders % p == 0)[0] + 1]


def norm_p_elements(D: int, p: int) -> list[QuadInt]:
    """Every element of O_K of norm p (associates of pi and of its conjugate)."""
    sp = prime_embedding(D, p)
    units = sp.field.units()
    out = []
    for base in (sp.pi, sp.pibar):
        for u in units:
            q = u * base
            if q not in out:
                out.append(q)
    return out


def _admissible_by_trace(D: int, p: int) -> bool:
    return any((p + 1 - q.trace()) % p == 0 for q in norm_p_elements(D, p))


def admissible_primes(D: int, pmax: int, cross_check: bool = True) -> list[int]:
    """Admissible primes 5 <= p < pmax for D, ascending.

    The norm-trace route decides; with ``cross_check`` the fiber scan runs as
    well and any disagreement is an internal error.
    """
    family(D)
    if pmax > MAX_PRIME + 1:
        raise ValueError(f"pmax is limited to {MAX_PRIME + 1}")
    out = []
    for p in primerange(5, pmax):
        p = int(p)
        if not is_split(D, p):
            continue
        by_trace = _admissible_by_trace(D, p)
        if cross_check and by_trace != bool(admissible_residues(D, p)):
            raise InternalAmbiguity(f"trace shortcut and fiber scan disagree at D={D}, p={p}")
        if by_trace:
            out.append(p)
    return out


@dataclass(frozen=True)
class AdmissibleTuple:
    D: int
    p: int
    a0: int
    order: int

    @property
    def d(self) -> int:
        return self.order // self.p


def admissible_tuples(D: int, p: int) -> list[AdmissibleTuple]:
    fam = family(D)
    _require_split(D, p)
    orders = fam.fiber_orders(p)
    return [
        AdmissibleTuple(D, p, a, int(orders[a - 1]))
        for a in admissible_residues(D, p)
    ]


# ---------------------------------------------------------------------------
# Frobenius orientation


@dataclass(frozen=True)
class SplitPrime:
    """p = pi * pibar with the embedding, plus the Frobenius of one fiber.

    ``frobenius`` is the element of norm p and trace ``frob_trace``; it is
    chosen in the ideal (pi) when possible.  ``aligned`` records whether that
    succeeded, i.e. whether the fixed embedding agrees with the curve's own
    action on differentials (Frobenius is inseparable, so it must vanish at
    the formal prime).
    """

    embedding: PrimeEmbedding
    frobenius: QuadInt
    frob_trace: int
    order: int
    aligned: bool = field(default=True)

    @property
    def p(self) -> int:
        return self.embedding.p

    @property
    def D(self) -> int:
        return self.embedding.field.D

    @property
    def pi(self) -> QuadInt:
        return self.embedding.pi

    @property
    def pibar(self) -> QuadInt:
        return self.embedding.pibar

    @property
    def d(self) -> int:
        return self.order // self.p if self.order % self.p == 0 else 0


def orient_frobenius(C: CurveFp, D: int) -> SplitPrime:
    """Frobenius element of the reduced fiber C, relative to the fixed embedding."""
    p = C.p
    _require_split(D, p)
    sp = prime_embedding(D, p)
    M = count_points(C)
    t = p + 1 - M
    if t % p == 0:
        raise SupersingularFiber(f"trace {t} is divisible by {p}")
    cands = [q for q in norm_p_elements(D, p) if q.trace() == t]
    if not cands:
        raise NotCMCurve(f"no element of norm {p} has trace {t}; the fiber lacks CM by D={D}")
    formal = [q for q in cands if sp.image(q, 1) == 0]
    alpha = formal[0] if formal else cands[0]
    return SplitPrime(sp, alpha, t, M, aligned=bool(formal))


def require_admissible(C: CurveFp, D: int) -> SplitPrime:
    sp = orient_frobenius(C, D)
    if sp.order % sp.p:
        raise NotAdmissible(f"#E(F_{sp.p}) = {sp.order} is prime to {sp.p}")
    return sp


def traces_match_norm_form(D: int, pmax: int = 400) -> bool:
    """4p = t^2 + D c^2 for the trace t of the a = 1 fiber, every split p < pmax."""
    fam = family(D)
    for p in primerange(5, pmax):
        p = int(p)
        if not is_split(D, p):
            continue
        t = p + 1 - count_points(fam.fiber(1, p))
        r = 4 * p - t * t
        if r % D or not _is_square(r // D):
            return False
    return True


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n
