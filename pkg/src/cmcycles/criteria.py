"""Local non-triviality criteria for points on an admissible CM curve.

Everything is decided by the valuation of the formal component of a point:
write #E(F_p) = d p, then the formal part of P has the valuation of
x(dP) - x(T) for the unique etale torsion point T over x(dP) mod p, or
-v(x(P))/2 when P already reduces to O.  The symbol is non-trivial exactly
when that valuation is 1.

Three shortcut rules avoid the doubling and the torsion lookup:

* negative valuation: trivial unless v(x) = -2;
* d = 1: a linear test on the first two digits of x and of the family
  parameter (the kernel polynomial's Taylor expansion);
* d = 2 (only D = 1, p = 5): x = b0 + b1 p fails exactly for
  b1 = eps(b0) + b0 a1, with eps regenerated from the torsion table.

``check_symbol`` runs the applicable rule and the direct valuation and
refuses to answer if they disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import (
    DEFAULT_PRECISION,
    INF,
    PadicNum,
    QuadInt,
    QuadNumber,
    as_number,
    embed_quad,
    padic_residue,
)
from .cm import CMFamily, SplitPrime, family, require_admissible
from .curve import INFINITY, CurveRing, add_exact, lift_with_x, mul_exact, scalar_mul
from .errors import (
    BranchMismatch,
    DegenerateQuadratic,
    InternalAmbiguity,
    MissingSecondDigit,
    NoMatchingRoot,
    NotOnCurve,
    NotSplit,
    OddNegativeValuation,
    PrecisionError,
)
from .torsion import (
    KernelPoly,
    TorsionTable,
    etale_torsion_x,
    reconstruct_family_poly,
    taylor_criterion_value,
)

GE2 = ">=2"

NEGATIVE = "negative-valuation"
TAYLOR = "taylor"
EPSILON = "epsilon-table"
POSITIVE = "positive-valuation"


def valuation_to_json(v):
    if v is None or isinstance(v, str):
        return v
    return "inf" if v == INF else int(v)


# ---------------------------------------------------------------------------
# context


@dataclass(frozen=True)
class LocalContext:
    """An admissible curve y^2 = x^3 + A x + B at a split prime, with its torsion data."""

    D: int
    p: int
    A: Fraction
    B: Fraction
    fam: CMFamily
    a: Fraction
    a0: int
    a1: int | None
    sp: SplitPrime
    table: TorsionTable
    kernel: KernelPoly
    N: int

    @property
    def d(self) -> int:
        return self.table.d

    @property
    def ring(self) -> CurveRing:
        return CurveRing(self.p, self.N, _residue(self.A, self.p, self.N), _residue(self.B, self.p, self.N))

    def f(self, x):
        return x * x * x + self.A * x + self.B

    def curve_json(self) -> dict:
        return {"A": str(self.A), "B": str(self.B)}


def _residue(x: Fraction, p: int, k: int) -> int:
    m = p ** k
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, m) % m


def build_context(A, B, D: int, p: int, N: int = DEFAULT_PRECISION, a_mod_p_only: bool = False) -> LocalContext:
    """Validate (A, B) as a CM fiber with good admissible reduction and compute torsion."""
    A, B = Fraction(A), Fraction(B)
    fam = family(D)
    a = fam.parameter(A, B)
    if N < 3:
        raise ValueError("working precision must be at least 3")
    C = CurveRing(p, N, _residue(A, p, N), _residue(B, p, N))
    sp = require_admissible(C.reduce(1), D)
    table = _cached_table(D, p, C.A % p ** 3, C.B % p ** 3, sp)
    kernel = reconstruct_family_poly(table, a, fam)
    a_res = _residue(a, p, 2)
    a1 = None if a_mod_p_only else a_res // p
    return LocalContext(D, p, A, B, fam, a, a_res % p, a1, sp, table, kernel, N)


@lru_cache(maxsize=256)
def _cached_table(D, p, A3, B3, sp) -> TorsionTable:
    return etale_torsion_x(CurveRing(p, 3, A3, B3), sp)


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class PointData:
    """A point with optional exact coordinates and their p-adic images.

    ``x``/``y`` are Fractions or QuadNumbers when known exactly; ``px``/``py``
    are always present for finite points.
    """

    px: PadicNum | None
    py: PadicNum | None
    x: object = None
    y: object = None
    infinity: bool = False

    @property
    def exact(self) -> bool:
        return self.x is not None and self.y is not None

    def to_json(self) -> dict:
        if self.infinity:
            return {"infinity": True}
        out = {"x_padic": str(self.px), "y_padic": str(self.py)}
        if self.exact:
            out["x"], out["y"] = str(self.x), str(self.y)
        return out


def _embed(q, ctx: LocalContext) -> PadicNum:
    if isinstance(q, (QuadInt, QuadNumber)):
        return embed_quad(q, ctx.sp.embedding, ctx.N)
    return embed_quad(Fraction(q), ctx.sp.embedding, ctx.N)


def _exact(q, ctx: LocalContext):
    if isinstance(q, QuadInt):
        q = q.to_number()
    if isinstance(q, QuadNumber):
        return q.a if q.is_rational() else q
    return Fraction(q)


def exact_point(x, y, ctx: LocalContext) -> PointData:
    """A K-rational point, checked against the curve equation exactly."""
    x, y = _exact(x, ctx), _exact(y, ctx)
    lhs, rhs = y * y, ctx.f(x)
    if lhs != rhs:
        raise NotOnCurve(f"({x}, {y}) is not on y^2 = x^3 + {ctx.A}x + {ctx.B}")
    return PointData(_embed(x, ctx), _embed(y, ctx), x, y)


def padic_point(x: PadicNum, y: PadicNum, ctx: LocalContext) -> PointData:
    """A point over Q_p known to finite precision (checked to that precision)."""
    diff = y * y - (x * x * x + x * ctx.A + ctx.B)
    if not diff.is_zero():
        raise NotOnCurve("p-adic point does not satisfy the curve equation")
    return PointData(x, y)


def ring_point(P, ctx: LocalContext, N: int | None = None) -> PointData:
    """Integral point given by residues mod p^N."""
    if P is INFINITY:
        return PointData(None, None, infinity=True)
    N = ctx.N if N is None else N
    return padic_point(padic_residue(P[0], ctx.p, N), padic_residue(P[1], ctx.p, N), ctx)


# ---------------------------------------------------------------------------
# formal valuation


@dataclass(frozen=True)
class FormalValuation:
    value: object
    matched_root: tuple[int, int] | None
    trace: tuple[str, ...]


def _double_padic(x: PadicNum, y: PadicNum, ctx: LocalContext):
    if y.is_zero():
        raise PrecisionError("y is zero to working precision; cannot double")
    lam = (x * x * 3 + ctx.A) / (y * 2)
    x2 = lam * lam - x * 2
    return x2, lam * (x - x2) - y


def _formal_valuation_padic(P: PointData, ctx: LocalContext) -> FormalValuation:
    p, trace = ctx.p, []
    if P.infinity:
        return FormalValuation(INF, None, ("point at infinity",))
    vx = P.px.valuation
    if not P.px.is_zero() and vx < 0:
        trace.append(f"v(x(P)) = {vx}")
        if vx % 2:
            raise OddNegativeValuation(f"v(x(P)) = {vx} is odd")
        return FormalValuation(-vx // 2, None, tuple(trace))
    X = P.px
    if ctx.d == 2:
        if P.x is not None and P.y == 0:
            return FormalValuation(INF, None, ("P is exactly 2-torsion, so dP = O",))
        X, _ = _double_padic(P.px, P.py, ctx)
        trace.append("computed x(2P) p-adically")
    elif ctx.d != 1:
        raise BranchMismatch(f"cofactor d = {ctx.d} is not handled")
    if not X.is_zero() and X.valuation < 0:
        trace.append(f"v(x(dP)) = {X.valuation}")
        if X.valuation % 2:
            raise OddNegativeValuation(f"v(x(dP)) = {X.valuation} is odd")
        return FormalValuation(-X.valuation // 2, None, tuple(trace))
    r2 = X.residue(2)
    root = ctx.table.root_over(r2 % p)
    if root is None:
        raise NoMatchingRoot(f"x(dP) = {r2 % p} mod {p} is not a torsion residue")
    target = root[0] + root[1] * p
    trace.append(f"x(dP) = {r2} mod p^2, torsion root {target} mod p^2")
    if r2 != target:
        return FormalValuation(1, root, tuple(trace))
    return FormalValuation(GE2, root, tuple(trace))


def _is_integral(z) -> bool:
    if isinstance(z, QuadNumber):
        return z.integral_parts()[1] == 1
    return Fraction(z).denominator == 1


def is_exact_torsion(P: PointData, ctx: LocalContext) -> bool:
    """Whether dP has exact order p (or is O), by exact arithmetic in K.

    Torsion of order p on an integral model has integral multiples (the
    prime is unramified), so a non-integral multiple stops the search early.
    """
    if not P.exact:
        raise PrecisionError("exact torsion test needs exact coordinates")
    A, B = ctx.A, ctx.B
    Q = mul_exact(ctx.d, (P.x, P.y), A, B)
    if Q is INFINITY:
        return True
    integral_model = A.denominator == 1 and B.denominator == 1
    R = Q
    for k in range(2, ctx.p + 1):
        if integral_model and not (_is_integral(R[0]) and _is_integral(R[1])):
            return False
        R = add_exact(R, Q, A, B)
        if R is INFINITY:
            return k == ctx.p
    return False


def formal_valuation(P: PointData, ctx: LocalContext) -> FormalValuation:
    """Valuation of the formal component: an int, GE2, or INF (exact torsion only)."""
    fv = _formal_valuation_padic(P, ctx)
    if fv.value == GE2 and P.exact and is_exact_torsion(P, ctx):
        return FormalValuation(INF, fv.matched_root, fv.trace + ("dP is exact torsion",))
    return fv


# ---------------------------------------------------------------------------
# the d = 2 table


@lru_cache(maxsize=None)
def epsilon_table(a_res: int = 3) -> dict[int, int]:
    """eps(b0), b0 = 1..4, on y^2 = x^3 + a x over Z/5^3 with a = a_res mod 25.

    eps(b0) is the unique b1 for which x = b0 + 5 b1 has x(2P) congruent to an
    etale torsion root mod 25, with the torsion roots taken from the computed
    table of the same fiber.
    """
    p = 5
    C = CurveRing(p, 3, a_res, 0)
    sp = require_admissible(C.reduce(1), 1)
    table = etale_torsion_x(C, sp)
    out = {}
    for b0 in range(1, p):
        ybar = next(y for x, y in C.reduce(1).points()[1:] if x == b0)
        failing = []
        for b1 in range(p):
            P = lift_with_x(b0 + b1 * p, ybar, C)
            X = scalar_mul(2, P, C)[0] % (p * p)
            root = table.root_over(X % p)
            if root is None:
                raise NoMatchingRoot(f"x(2P) = {X} is not over a torsion residue")
            if X == root[0] + root[1] * p:
                failing.append(b1)
        if len(failing) != 1:
            raise InternalAmbiguity(f"{len(failing)} failing digits over b0 = {b0}")
        out[b0] = failing[0]
    return out


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class SymbolReport:
    rule: str
    nontrivial: bool
    formal_valuation: object = None
    matched_root: tuple[int, int] | None = None
    trace: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.formal_valuation is not None and self.nontrivial != (self.formal_valuation == 1):
            raise InternalAmbiguity(
                f"rule {self.rule} says nontrivial={self.nontrivial} "
                f"but the formal valuation is {self.formal_valuation}"
            )

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "nontrivial": self.nontrivial,
            "formal_valuation": valuation_to_json(self.formal_valuation),
            "matched_root": list(self.matched_root) if self.matched_root else None,
            "trace": list(self.trace),
        }


def _digits(x: PadicNum, p: int) -> tuple[int, int]:
    r = x.residue(2)
    return r % p, r // p


def _rule_verdict(P: PointData, ctx: LocalContext) -> tuple[str, bool, list[str], tuple | None]:
    """Apply the shortcut rule without computing dP."""
    p = ctx.p
    if P.infinity:
        return POSITIVE, False, ["point at infinity"], None
    x = P.px
    v = INF if x.is_zero() else x.valuation
    if v < 0:
        if v % 2:
            raise OddNegativeValuation(f"v(x(P)) = {v} is odd")
        return NEGATIVE, v == -2, [f"v(x) = {v}", "nontrivial iff v(x) = -2"], None
    if ctx.d == 1:
        b0, b1 = _digits(x, p)
        val = taylor_criterion_value(ctx.kernel, b0, b1, ctx.a0, ctx.a1)
        return (
            TAYLOR,
            val != 0,
            [f"(b0, b1) = ({b0}, {b1})", f"(a0, a1) = ({ctx.a0}, {ctx.a1})", f"Taylor value = {val} mod {p}"],
            ctx.table.root_over(b0),
        )
    if ctx.d == 2 and (ctx.D, p) == (1, 5):
        if v == 0:
            if ctx.a1 is None:
                raise MissingSecondDigit("the family parameter is known only mod p")
            b0, b1 = _digits(x, p)
            eps = epsilon_table(ctx.a0)[b0]
            bad = (eps + b0 * ctx.a1) % p
            return (
                EPSILON,
                b1 != bad,
                [f"(b0, b1) = ({b0}, {b1})", f"a1 = {ctx.a1}", f"eps({b0}) = {eps}", f"failing b1 = {bad}"],
                None,
            )
        if v == INF:
            if P.exact:
                return POSITIVE, False, ["x(P) = 0 exactly, so P is 2-torsion"], None
            raise PrecisionError("x(P) is zero to working precision")
        if v % 2:
            raise NotOnCurve(f"v(x) = {v} is odd, impossible on y^2 = x^3 + a x with a a unit")
        return POSITIVE, v == 2, [f"v(x) = {v}", "nontrivial iff v(x) = 2"], None
    raise BranchMismatch(f"no rule for D={ctx.D}, p={p}, d={ctx.d}")


def check_symbol(P: PointData, ctx: LocalContext) -> SymbolReport:
    """Shortcut rule plus the direct valuation; they must agree."""
    rule, nontrivial, trace, root = _rule_verdict(P, ctx)
    fv = formal_valuation(P, ctx)
    trace = trace + list(fv.trace)
    return SymbolReport(rule, nontrivial, fv.value, fv.matched_root or root, tuple(trace))


# ---------------------------------------------------------------------------
# naive quadratic points


GENERIC = "generic"
NEGATIVE_B = "negative"
D2_UNIT = "d2-unit"
D2_POSITIVE = "d2-positive"


@dataclass(frozen=True)
class SplitReport:
    branch: str
    splits: bool
    degenerate: bool
    valuation: object
    radicand: str
    trace: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "splits": self.splits,
            "degenerate": self.degenerate,
            "valuation": valuation_to_json(self.valuation),
            "radicand": self.radicand,
            "trace": list(self.trace),
        }


def _square_mod_p(u: int, p: int) -> bool:
    u %= p
    return u != 0 and pow(u, (p - 1) // 2, p) == 1


def quadratic_split_test(b, ctx: LocalContext) -> SplitReport:
    """Does v split in F = K(sqrt(f(b)))?  Also flags F = K."""
    p = ctx.p
    b = _exact(b, ctx)
    fb = ctx.f(b)
    eb, efb = _embed(b, ctx), _embed(fb, ctx)
    vb = INF if eb.is_zero() else eb.valuation
    trace = [f"v(b) = {valuation_to_json(vb)}"]
    if vb < 0:
        branch = NEGATIVE_B
        sq = vb % 2 == 0 and _square_mod_p(eb.unit, p)
        trace.append(f"b' = {eb.unit % p} mod p, square: {_square_mod_p(eb.unit, p)}")
    elif ctx.d == 1:
        branch = GENERIC
        b0 = eb.residue(1)
        sq = _square_mod_p(efb.residue(1), p)
        trace.append(f"f(b0) = {efb.residue(1)} mod p with b0 = {b0}")
        if sq and ctx.table.root_over(b0) is None:
            raise InternalAmbiguity("f(b0) is a square but b0 is not a torsion residue")
    elif ctx.d == 2 and vb == 0:
        branch = D2_UNIT
        sq = True
    elif ctx.d == 2:
        branch = D2_POSITIVE
        if vb == INF:
            raise PrecisionError("b is zero to working precision")
        sq = vb % 2 == 0 and not _square_mod_p(eb.unit, p)
        trace.append(f"b' = {eb.unit % p} mod p")
    else:
        raise BranchMismatch(f"no splitting rule for d = {ctx.d}")
    direct = (not efb.is_zero()) and efb.is_square()
    if direct != sq:
        raise InternalAmbiguity(f"branch {branch} says splits={sq}, direct test says {direct}")
    degenerate = as_number(ctx.sp.embedding.field, fb).sqrt() is not None
    trace.append(f"f(b) exact square in K: {degenerate}")
    return SplitReport(branch, sq, degenerate, vb, str(fb), tuple(trace))


def naive_point(b, ctx: LocalContext) -> PointData:
    """(b, sqrt f(b)) in Q_p; requires f(b) to be a square there."""
    b = _exact(b, ctx)
    eb = _embed(b, ctx)
    efb = _embed(ctx.f(b), ctx)
    if efb.is_zero() or not efb.is_square():
        raise NotSplit(f"f({b}) is not a square in Q_{ctx.p}")
    return PointData(eb, efb.sqrt(), x=None, y=None)


def naive_quadratic_symbol(b, ctx: LocalContext) -> tuple[SplitReport, SymbolReport]:
    split = quadratic_split_test(b, ctx)
    if not split.splits:
        raise NotSplit(f"v does not split in K(sqrt({split.radicand}))")
    if split.degenerate:
        raise DegenerateQuadratic(f"{split.radicand} is a square in K")
    Q = naive_point(b, ctx)
    v = split.valuation
    if v < 0:
        rule, nontrivial = NEGATIVE, v == -2
        trace = [f"v(b) = {v}", "nontrivial iff v(b) = -2"]
        fv = _formal_valuation_padic(Q, ctx)
        report = SymbolReport(rule, nontrivial, fv.value, None, tuple(trace) + fv.trace)
    else:
        report = check_symbol(Q, ctx)
    return split, report


def failing_digit(ctx: LocalContext, b0: int) -> int:
    """The unique b1 mod p with trivial symbol at x = b0 + b1 p (d = 1)."""
    p = ctx.p
    bad = [
        b1 for b1 in range(p)
        if taylor_criterion_value(ctx.kernel, b0, b1, ctx.a0, ctx.a1) == 0
    ]
    if len(bad) != 1:
        raise InternalAmbiguity(f"{len(bad)} failing digits over b0 = {b0}")
    return bad[0]


__all__ = [
    "GE2",
    "LocalContext",
    "PointData",
    "FormalValuation",
    "SymbolReport",
    "SplitReport",
    "build_context",
    "exact_point",
    "padic_point",
    "ring_point",
    "naive_point",
    "formal_valuation",
    "is_exact_torsion",
    "check_symbol",
    "epsilon_table",
    "quadratic_split_test",
    "naive_quadratic_symbol",
    "failing_digit",
]

