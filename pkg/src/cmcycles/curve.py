"""Short Weierstrass curves over F_p and Z/p^N.

Points are plain ``(x, y)`` tuples of residues; the point at infinity is
``None``.  Ring arithmetic uses the affine formulas and insists that every
slope denominator is a unit mod p: a collision raises :class:`NonUnitSlope`
instead of silently producing garbage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import hensel_sqrt, kronecker
from .errors import NonResidue, NonUnitSlope, SingularCurve, TwoTorsion

INFINITY = None


@dataclass(frozen=True)
class CurveRing:
    """y^2 = x^3 + A x + B over Z/p^N with good reduction at p."""

    p: int
    N: int
    A: int
    B: int

    def __post_init__(self):
        m = self.p ** self.N
        object.__setattr__(self, "A", self.A % m)
        object.__setattr__(self, "B", self.B % m)
        if (4 * self.A ** 3 + 27 * self.B ** 2) % self.p == 0:
            raise SingularCurve(f"y^2 = x^3 + {self.A}x + {self.B} is singular mod {self.p}")

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def f(self, x: int) -> int:
        return (x * x * x + self.A * x + self.B) % self.modulus

    def contains(self, P) -> bool:
        if P is INFINITY:
            return True
        x, y = P
        return (y * y - self.f(x)) % self.modulus == 0

    def reduce(self, N: int = 1) -> CurveRing:
        if N == 1:
            return CurveFp(self.p, 1, self.A, self.B)
        return CurveRing(self.p, N, self.A, self.B)

    def reduce_point(self, P, N: int = 1):
        if P is INFINITY:
            return P
        m = self.p ** N
        return (P[0] % m, P[1] % m)


class CurveFp(CurveRing):
    """The special fiber: N = 1."""

    def __init__(self, p: int, N: int = 1, A: int = 0, B: int = 0):
        if N != 1:
            raise ValueError("CurveFp has N = 1")
        super().__init__(p, 1, A, B)

    def points(self) -> list:
        """All points, infinity first (only sensible for small p)."""
        p = self.p
        pts = [INFINITY]
        for x in range(p):
            c = self.f(x)
            if c == 0:
                pts.append((x, 0))
            elif kronecker(c, p) == 1:
                r = hensel_sqrt(c, p, 1)
                pts += [(x, r), (x, p - r)]
        return pts


def curve_fp(p: int, A: int, B: int) -> CurveFp:
    return CurveFp(p, 1, A, B)


def _quadratic_character(p: int) -> np.ndarray:
    chi = -np.ones(p, dtype=np.int64)
    chi[0] = 0
    x = np.arange(1, p, dtype=np.int64)
    chi[(x * x) % p] = 1
    return chi


def count_points(C: CurveRing) -> int:
    """#E(F_p) by the character sum p + 1 + sum_x chi(x^3 + A x + B)."""
    p = C.p
    chi = _quadratic_character(p)
    x = np.arange(p, dtype=np.int64)
    A, B = C.A % p, C.B % p
    fx = ((x * x % p) * x + A * x + B) % p
    M = int(p + 1 + chi[fx].sum())
    assert (M - (p + 1)) ** 2 <= 4 * p, "Hasse bound violated"
    return M


def count_points_batch(p: int, A, B) -> np.ndarray:
    """Point counts of y^2 = x^3 + A_i x + B_i over F_p for arrays A, B."""
    chi = _quadratic_character(p)
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    x = np.arange(p, dtype=np.int64)
    x3 = (x * x % p) * x % p
    fx = (x3[None, :] + (A[:, None] * x[None, :]) % p + B[:, None]) % p
    return p + 1 + chi[fx].sum(axis=1)


# ---------------------------------------------------------------------------
# group law


def neg(P, C: CurveRing):
    if P is INFINITY:
        return P
    return (P[0], (-P[1]) % C.modulus)


def _slope_inverse(den: int, C: CurveRing) -> int:
    if den % C.p == 0:
        raise NonUnitSlope("slope denominator is not a unit mod p")
    return pow(den, -1, C.modulus)


def double(P, C: CurveRing):
    if P is INFINITY:
        return P
    m = C.modulus
    x, y = P
    if y % m == 0:
        return INFINITY
    lam = (3 * x * x + C.A) * _slope_inverse(2 * y, C) % m
    x3 = (lam * lam - 2 * x) % m
    return (x3, (lam * (x - x3) - y) % m)


def add(P, Q, C: CurveRing):
    if P is INFINITY:
        return Q
    if Q is INFINITY:
        return P
    m = C.modulus
    (x1, y1), (x2, y2) = P, Q
    if (x1 - x2) % m == 0:
        if (y1 - y2) % m == 0:
            return double(P, C)
        if (y1 + y2) % m == 0:
            return INFINITY
        raise NonUnitSlope("operands agree in x but are neither equal nor opposite")
    lam = (y2 - y1) * _slope_inverse(x2 - x1, C) % m
    x3 = (lam * lam - x1 - x2) % m
    return (x3, (lam * (x1 - x3) - y1) % m)


def scalar_mul(k: int, P, C: CurveRing):
    """[k]P by left-to-right double-and-add.

    For P of order p mod p and 0 <= k <= (p+1)/2 every intermediate multiple
    [j]P has 0 < j < p, so no slope collides mod p.
    """
    if k < 0:
        return scalar_mul(-k, neg(P, C), C)
    R = INFINITY
    for bit in bin(k)[2:] if k else "":
        R = double(R, C)
        if bit == "1":
            R = add(R, P, C)
    return R


def point_order_fp(P, C: CurveRing, group_order: int | None = None) -> int:
    """Exact order of a point on the special fiber."""
    Cf = C.reduce(1)
    P = Cf.reduce_point(P)
    M = group_order if group_order is not None else count_points(Cf)
    order = M
    for q in _prime_factors(M):
        while order % q == 0 and scalar_mul(order // q, P, Cf) is INFINITY:
            order //= q
    return order


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def add_exact(P, Q, A, B):
    """Group law over a field (Fraction or QuadNumber coordinates)."""
    if P is INFINITY:
        return Q
    if Q is INFINITY:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if y1 + y2 == 0:
            return INFINITY
        lam = (3 * x1 * x1 + A) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def mul_exact(k: int, P, A, B):
    R = INFINITY
    for bit in bin(k)[2:] if k else "":
        R = add_exact(R, R, A, B)
        if bit == "1":
            R = add_exact(R, P, A, B)
    return R


# ---------------------------------------------------------------------------
# lifting and the order-p test


def lift_point(Pbar, C: CurveRing):
    """Hensel lift of a point of the special fiber, keeping x fixed."""
    if Pbar is INFINITY:
        return Pbar
    x, ybar = Pbar[0] % C.p, Pbar[1] % C.p
    return lift_with_x(x, ybar, C)


def lift_with_x(x: int, ybar: int, C: CurveRing):
    """The point of C with the given x and y congruent to ybar mod p."""
    p = C.p
    if ybar % p == 0:
        raise TwoTorsion("cannot lift a point with y = 0 mod p")
    c = C.f(x)
    if (c - ybar * ybar) % p:
        raise NonResidue("(x, ybar) is not on the special fiber")
    y = hensel_sqrt(c, p, C.N)
    if (y - ybar) % p:
        y = (-y) % C.modulus
    return (x % C.modulus, y)


def order_p_test(P, C: CurveRing) -> bool:
    """Whether [p]P is trivial in E(Z/p^3).

    Requires C.N == 3 and P reducing to a point of exact order p.  Then
    [p]P = O mod p^3 iff [(p+1)/2]P and -[(p-1)/2]P agree mod p^3; every
    multiple formed along the way is [j]P with 0 < j <= (p+1)/2, so the
    slopes stay units.  Mod p^3 the formal p-torsion is invisible (it sits at
    level p^2), which is why the accepted x are exactly the torsion x mod p^2.
    """
    if C.N != 3:
        raise ValueError("order_p_test works at N = 3")
    p = C.p
    Cf = C.reduce(1)
    Pbar = C.reduce_point(P)
    if Pbar is INFINITY or scalar_mul(p, Pbar, Cf) is not INFINITY:
        raise ValueError("P must reduce to a point of exact order p")
    half = scalar_mul((p - 1) // 2, P, C)
    up = add(half, P, C)
    m = C.modulus
    return (up[0] - half[0]) % m == 0 and (up[1] + half[1]) % m == 0


# ---------------------------------------------------------------------------
# polynomials and division polynomials


class Poly:
    """Univariate polynomial, coefficients low to high, over Z or Z/modulus."""

    __slots__ = ("coeffs", "modulus")

    def __init__(self, coeffs, modulus: int | None = None):
        c = [int(a) for a in coeffs]
        if modulus is not None:
            c = [a % modulus for a in c]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = c
        self.modulus = modulus

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs and self.modulus == other.modulus

    def __repr__(self):
        return f"Poly({self.coeffs}, modulus={self.modulus})"

    def _new(self, c):
        return Poly(c, self.modulus)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return self._new([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self):
        return self._new([-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return self._new([k * a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self._new([])
        m = self.modulus
        if m is not None and (m - 1) ** 2 * min(len(a), len(b)) < 2 ** 62:
            prod = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)) % m
            return self._new(prod.tolist())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self._new([1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x: int) -> int:
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
            if self.modulus is not None:
                acc %= self.modulus
        return acc

    def derivative(self):
        return self._new([i * a for i, a in enumerate(self.coeffs)][1:])

    def divmod(self, other):
        """Long division by a polynomial whose leading coefficient is a unit."""
        m = self.modulus
        if m is None:
            raise ValueError("divmod implemented over Z/m only")
        inv = pow(other.lc(), -1, m)
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return self._new([]), self._new(rem)
        q = [0] * (dq + 1)
        b = other.coeffs
        for i in range(dq, -1, -1):
            c = rem[i + len(b) - 1] * inv % m
            q[i] = c
            if c:
                for j, bj in enumerate(b):
                    rem[i + j] = (rem[i + j] - c * bj) % m
        return self._new(q), self._new(rem[: len(b) - 1])

    def reduce(self, modulus: int):
        return Poly(self.coeffs, modulus)


def division_poly(n: int, A: int, B: int, modulus: int | None = None) -> Poly:
    """The n-th division polynomial psi_n of y^2 = x^3 + A x + B, n odd.

    Even-index psi_m are carried as psi_m = 2y * h_m and (2y)^2 replaced by
    4(x^3 + A x + B), so everything stays in R[x].
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    P = lambda c: Poly(c, modulus)  # noqa: E731
    F2 = P([4 * B, 4 * A, 0, 4]) ** 2  # (2y)^4
    memo = {
        0: P([]),
        1: P([1]),
        2: P([1]),
        3: P([-A * A, 12 * B, 6 * A, 0, 3]),
        4: P([-8 * B * B - A ** 3, -4 * A * B, -5 * A * A, 20 * B, 5 * A, 0, 1]).scale(2),
    }

    def g(m):
        if m in memo:
            return memo[m]
        k = m // 2
        if m % 2:
            # psi_{2k+1} = psi_{k+2} psi_k^3 - psi_{k-1} psi_{k+1}^3
            if k % 2 == 0:
                val = F2 * g(k + 2) * g(k) ** 3 - g(k - 1) * g(k + 1) ** 3
            else:
                val = g(k + 2) * g(k) ** 3 - F2 * g(k - 1) * g(k + 1) ** 3
        else:
            # psi_{2k} = psi_k (psi_{k+2} psi_{k-1}^2 - psi_{k-2} psi_{k+1}^2) / psi_2
            # the 2y factors cancel identically whatever the parity of k
            val = g(k) * (g(k + 2) * g(k - 1) ** 2 - g(k - 2) * g(k + 1) ** 2)
        memo[m] = val
        return val

    return g(n)


def hasse_interval(p: int) -> tuple[int, int]:
    r = 2 * math.isqrt(p) + 2
    lo = max(0, p + 1 - r)
    return lo, p + 1 + r
