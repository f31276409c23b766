"""Exact quadratic-field arithmetic and fixed-precision p-adic numbers.

Rationals are plain :class:`fractions.Fraction`.  Elements of the class
number one fields K = Q(sqrt(-D)) come in two flavours: :class:`QuadInt`
(the ring of integers, stored as ``(s + t*sqrt(-D))/2``) and
:class:`QuadNumber` (arbitrary field elements with rational coordinates).

:class:`PadicNum` carries a p-adic number as ``p**valuation * unit`` with the
unit known modulo ``p**prec``.  All arithmetic is exact on residues; precision
loss from cancellation is tracked, never hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import isprime
from sympy.ntheory import sqrt_mod

from .errors import (
    InertPrime,
    NonResidue,
    PrecisionError,
    PrimeTooLarge,
    RamifiedPrime,
    UnsupportedD,
    ZeroDivisor,
)

CLASS_NUMBER_ONE_D = (1, 2, 3, 7, 11, 19, 43, 67, 163)
INF = math.inf
MAX_PRIME = 8191
DEFAULT_PRECISION = 4


def check_prime(p: int) -> None:
    if p > MAX_PRIME:
        raise PrimeTooLarge(f"p={p} exceeds the supported bound {MAX_PRIME}")
    if p < 5 or not isprime(p):
        raise ValueError(f"expected a prime p >= 5, got {p}")


def vp(n: int, p: int) -> int | float:
    """p-adic valuation of an integer (INF for 0)."""
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kronecker(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p, 0 when p | a."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_square_mod(a: int, p: int) -> bool:
    """True for nonzero squares mod p."""
    return kronecker(a, p) == 1


# ---------------------------------------------------------------------------
# quadratic fields


@dataclass(frozen=True)
class QuadField:
    """K = Q(sqrt(-D)) for one of the nine class number one discriminants."""

    D: int

    def __post_init__(self):
        if self.D not in CLASS_NUMBER_ONE_D:
            raise UnsupportedD(f"D={self.D} is not one of {CLASS_NUMBER_ONE_D}")

    @property
    def half_integral(self) -> bool:
        # integral basis {1, (1+sqrt(-D))/2} exactly when -D = 1 mod 4
        return self.D % 4 == 3

    @property
    def basis(self) -> str:
        return "1, (1+sqrt(-D))/2" if self.half_integral else "1, sqrt(-D)"

    @property
    def unit_count(self) -> int:
        return {1: 4, 3: 6}.get(self.D, 2)

    def __call__(self, a, b=0) -> QuadNumber:
        """The field element a + b*sqrt(-D)."""
        return QuadNumber(self, Fraction(a), Fraction(b))

    def integer(self, a, b=0) -> QuadInt:
        """The integral element a + b*sqrt(-D) (a, b may be half-integers)."""
        return QuadInt(self, int(2 * Fraction(a)), int(2 * Fraction(b)))

    def units(self) -> list[QuadInt]:
        if self.D == 1:
            gens = [(2, 0), (-2, 0), (0, 2), (0, -2)]
        elif self.D == 3:
            gens = [(2, 0), (-2, 0), (1, 1), (-1, -1), (1, -1), (-1, 1)]
        else:
            gens = [(2, 0), (-2, 0)]
        return [QuadInt(self, s, t) for s, t in gens]


@dataclass(frozen=True)
class QuadInt:
    """An algebraic integer (s + t*sqrt(-D))/2 of K."""

    field: QuadField
    s: int
    t: int

    def __post_init__(self):
        if self.field.half_integral:
            ok = (self.s - self.t) % 2 == 0
        else:
            ok = self.s % 2 == 0 and self.t % 2 == 0
        if not ok:
            raise ValueError(f"({self.s} + {self.t}*sqrt(-{self.field.D}))/2 is not integral")

    @property
    def D(self) -> int:
        return self.field.D

    def norm(self) -> int:
        return (self.s * self.s + self.D * self.t * self.t) // 4

    def trace(self) -> int:
        return self.s

    def conj(self) -> QuadInt:
        return QuadInt(self.field, self.s, -self.t)

    def _lift(self, other):
        if isinstance(other, QuadInt):
            return other
        if isinstance(other, int):
            return QuadInt(self.field, 2 * other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadInt(self.field, self.s + other.s, self.t + other.t)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(self.field, -self.s, -self.t)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        s = (self.s * other.s - self.D * self.t * other.t) // 2
        t = (self.s * other.t + self.t * other.s) // 2
        return QuadInt(self.field, s, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = QuadInt(self.field, 2, 0)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return self.s == 0 and self.t == 0

    def divexact(self, other: QuadInt) -> QuadInt | None:
        """self/other if it lies in O_K, else None."""
        n = other.norm()
        if n == 0:
            raise ZeroDivisor("division by zero in O_K")
        num = self * other.conj()
        if num.s % n or num.t % n:
            return None
        try:
            return QuadInt(self.field, num.s // n, num.t // n)
        except ValueError:
            return None

    def to_number(self) -> QuadNumber:
        return QuadNumber(self.field, Fraction(self.s, 2), Fraction(self.t, 2))

    def __str__(self):
        return str(self.to_number())


@dataclass(frozen=True)
class QuadNumber:
    """An arbitrary element a + b*sqrt(-D) of K with rational a, b."""

    field: QuadField
    a: Fraction
    b: Fraction = Fraction(0)

    @property
    def D(self) -> int:
        return self.field.D

    def _lift(self, other):
        if isinstance(other, QuadNumber):
            return other
        if isinstance(other, QuadInt):
            return other.to_number()
        if isinstance(other, (int, Fraction)):
            return QuadNumber(self.field, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadNumber(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(self.field, -self.a, -self.b)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadNumber(
            self.field,
            self.a * other.a - self.D * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def conj(self) -> QuadNumber:
        return QuadNumber(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a + self.D * self.b * self.b

    def inverse(self) -> QuadNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisor("division by zero in K")
        c = self.conj()
        return QuadNumber(self.field, c.a / n, c.b / n)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        out = QuadNumber(self.field, Fraction(1))
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def integral_parts(self) -> tuple[QuadInt, int]:
        """Write self = q/den with q in O_K and den a positive integer."""
        den = math.lcm(self.a.denominator, self.b.denominator)
        q = QuadInt(self.field, int(2 * self.a * den), int(2 * self.b * den))
        return q, den

    def sqrt(self) -> QuadNumber | None:
        """An exact square root in K, or None when self is not a square in K."""
        if self.is_zero():
            return self
        a, b = self.a, self.b
        if b == 0:
            r = _rational_sqrt(a)
            if r is not None:
                return QuadNumber(self.field, r)
            r = _rational_sqrt(-a / self.D)
            if r is not None:
                return QuadNumber(self.field, Fraction(0), r)
            return None
        # (c + e*sqrt(-D))^2 = a + b*sqrt(-D) forces c^2 - D e^2 = a, c^2 + D e^2 = sqrt(norm)
        n = _rational_sqrt(self.norm())
        if n is None:
            return None
        c = _rational_sqrt((a + n) / 2)
        if c is None or c == 0:
            return None
        root = QuadNumber(self.field, c, b / (2 * c))
        return root if root * root == self else None

    def is_square(self) -> bool:
        return self.sqrt() is not None

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt(-{self.D})"


def _rational_sqrt(x) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def as_number(field: QuadField, x) -> QuadNumber:
    if isinstance(x, QuadNumber):
        return x
    if isinstance(x, QuadInt):
        return x.to_number()
    return QuadNumber(field, Fraction(x))


# ---------------------------------------------------------------------------
# p-adic numbers


@dataclass(frozen=True)
class PadicNum:
    """p**valuation * unit, with unit known modulo p**prec.

    A zero-to-precision value has ``valuation == INF``, ``unit == 0`` and
    ``prec`` holding the absolute precision: the value is O(p**prec).
    """

    p: int
    valuation: int | float
    unit: int
    prec: int | float

    @classmethod
    def zero(cls, p: int, absprec=INF) -> PadicNum:
        return cls(p, INF, 0, absprec)

    @property
    def absprec(self):
        if self.valuation == INF:
            return self.prec
        return self.valuation + self.prec

    def is_zero(self) -> bool:
        return self.valuation == INF

    def _coerce(self, other):
        if isinstance(other, PadicNum):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            x = Fraction(other)
            if x == 0:
                return PadicNum.zero(self.p)
            # exact constants get enough digits never to limit the result
            need = [DEFAULT_PRECISION]
            if self.prec != INF:
                need.append(int(self.prec))
            if self.absprec != INF:
                need.append(int(self.absprec) - _rational_valuation(x, self.p))
            return embed_rational(x, self.p, max(need))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        A = min(self.absprec, other.absprec)
        if self.is_zero() and other.is_zero():
            return PadicNum.zero(p, A)
        if self.is_zero() or other.is_zero():
            x = other if self.is_zero() else self
            if A >= x.absprec:
                return x
            return _normalize(p, x.valuation, x.unit, A)
        v = min(self.valuation, other.valuation)
        s = self.unit * p ** int(self.valuation - v) + other.unit * p ** int(other.valuation - v)
        return _normalize(p, v, s, A)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicNum(self.p, self.valuation, (-self.unit) % self.p ** self.prec, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.is_zero() or other.is_zero():
            if self.is_zero() and other.is_zero():
                return PadicNum.zero(p, self.prec + other.prec)
            z, x = (self, other) if self.is_zero() else (other, self)
            return PadicNum.zero(p, z.prec + x.valuation)
        prec = min(self.prec, other.prec)
        return PadicNum(p, self.valuation + other.valuation, (self.unit * other.unit) % p ** prec, prec)

    __rmul__ = __mul__

    def inverse(self) -> PadicNum:
        if self.is_zero():
            raise ZeroDivisor("inverse of a p-adic zero")
        m = self.p ** self.prec
        return PadicNum(self.p, -self.valuation, pow(self.unit, -1, m), self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def residue(self, k: int) -> int:
        """The value modulo p**k, as an integer in [0, p**k)."""
        if self.absprec < k:
            raise PrecisionError(f"value known only to O(p^{self.absprec}), need p^{k}")
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise ValueError("residue of a non-integral p-adic number")
        if self.valuation >= k:
            return 0
        return (self.p ** int(self.valuation) * self.unit) % self.p ** k

    def digits(self, k: int) -> list[int]:
        """First k p-adic digits of an integral value."""
        r = self.residue(k)
        out = []
        for _ in range(k):
            out.append(r % self.p)
            r //= self.p
        return out

    def is_square(self) -> bool:
        if self.is_zero():
            raise PrecisionError("square test of a value that is zero to precision")
        if self.valuation % 2:
            return False
        return is_square_mod(self.unit, self.p)

    def sqrt(self) -> PadicNum:
        if self.is_zero():
            raise PrecisionError("square root of a value that is zero to precision")
        if self.valuation % 2:
            raise NonResidue("odd valuation")
        r = hensel_sqrt(self.unit, self.p, int(self.prec))
        return PadicNum(self.p, self.valuation // 2, r, self.prec)

    def __str__(self):
        if self.is_zero():
            return f"O({self.p}^{self.prec})"
        return f"{self.p}^{self.valuation} * {self.unit} + O({self.p}^{self.absprec})"


def _normalize(p, v, s, absprec) -> PadicNum:
    """p**v * s known to O(p**absprec), with powers of p pulled out of s."""
    if absprec == INF:
        raise PrecisionError("cannot normalize an exact sum")
    s %= p ** int(absprec - v)
    if s == 0:
        return PadicNum.zero(p, absprec)
    k = 0
    while s % p == 0:
        s //= p
        k += 1
    prec = int(absprec - v - k)
    return PadicNum(p, v + k, s % p ** prec, prec)


def padic_residue(r: int, p: int, absprec: int) -> PadicNum:
    """The integer r viewed as a p-adic number known modulo p**absprec."""
    return _normalize(p, 0, r, absprec)


def _rational_valuation(x: Fraction, p: int) -> int:
    return vp(x.numerator, p) - vp(x.denominator, p)


def hensel_sqrt(c: int, p: int, N: int) -> int:
    """Square root of a unit c modulo p**N.

    The root returned is the lift of the smaller of the two square roots
    modulo p.
    """
    if p == 2:
        raise ValueError("p must be odd")
    c0 = c % p
    if c0 == 0:
        raise ZeroDivisor(f"{c} is divisible by {p}")
    if kronecker(c0, p) != 1:
        raise NonResidue(f"{c} is not a square modulo {p}")
    r = min(sqrt_mod(c0, p, all_roots=True))
    target = p ** N
    m = p
    while m < target:
        m = min(m * m, target)
        r = (r - (r * r - c) * pow(2 * r, -1, m)) % m
    r %= target
    assert (r * r - c) % target == 0
    return r


def embed_rational(x, p: int, N: int = DEFAULT_PRECISION) -> PadicNum:
    """Exact valuation and unit part of a rational number to relative precision N."""
    x = Fraction(x)
    if x == 0:
        return PadicNum.zero(p)
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    m = p ** N
    return PadicNum(p, v, num * pow(den, -1, m) % m, N)


# ---------------------------------------------------------------------------
# split primes and the embedding K -> Q_p


def quad_split_prime(K: QuadField, p: int) -> QuadInt:
    """An element of norm p in O_K.

    Canonical choice: smallest positive t in (s + t*sqrt(-D))/2, then s >= 0.
    """
    if p == 2 or not isprime(p):
        raise ValueError(f"expected an odd prime, got {p}")
    if K.D % p == 0:
        raise RamifiedPrime(f"{p} ramifies in Q(sqrt(-{K.D}))")
    if kronecker(-K.D, p) != 1:
        raise InertPrime(f"{p} is inert in Q(sqrt(-{K.D}))")
    t = 1
    while K.D * t * t <= 4 * p:
        s2 = 4 * p - K.D * t * t
        s = math.isqrt(s2)
        if s * s == s2:
            try:
                return QuadInt(K, s, t)
            except ValueError:
                pass
        t += 1
    raise AssertionError(f"no element of norm {p} although {p} splits")


@dataclass(frozen=True)
class PrimeEmbedding:
    """The embedding O_K -> Z_p sending pi to an element of valuation 1.

    ``root`` is the image of sqrt(-D) modulo p**N.
    """

    field: QuadField
    p: int
    pi: QuadInt
    root: int
    N: int

    @property
    def pibar(self) -> QuadInt:
        return self.pi.conj()

    def image(self, q: QuadInt, N: int | None = None) -> int:
        """Residue of q modulo p**N (no valuation bookkeeping)."""
        N = self.N if N is None else N
        if N > self.N:
            raise PrecisionError(f"embedding known to p^{self.N} only")
        m = self.p ** N
        return (q.s + q.t * self.root) * pow(2, -1, m) % m


@lru_cache(maxsize=None)
def prime_embedding(D: int, p: int, N: int = 12) -> PrimeEmbedding:
    K = QuadField(D)
    check_prime(p)
    pi = quad_split_prime(K, p)
    r = hensel_sqrt(-D, p, N)
    if (pi.s + pi.t * r) % p != 0:
        r = (-r) % p ** N
    emb = PrimeEmbedding(K, p, pi, r, N)
    assert emb.image(pi, 1) == 0
    return emb


def pi_valuation(q: QuadInt, sp: PrimeEmbedding) -> int | float:
    """Exponent of the prime pi in q (INF for q = 0)."""
    if q.is_zero():
        return INF
    k = 0
    while True:
        nxt = q.divexact(sp.pi)
        if nxt is None:
            return k
        q = nxt
        k += 1


def embed_quad(q, sp: PrimeEmbedding, N: int = DEFAULT_PRECISION) -> PadicNum:
    """Image of an element of K in Q_p, to relative precision N.

    Accepts QuadInt, QuadNumber, int or Fraction.
    """
    p = sp.p
    if isinstance(q, (int, Fraction)):
        return embed_rational(q, p, N)
    if isinstance(q, QuadNumber):
        num, den = q.integral_parts()
        return embed_quad(num, sp, N) / embed_rational(den, p, N)
    if q.is_zero():
        return PadicNum.zero(p)
    k = pi_valuation(q, sp)
    rest = q
    for _ in range(k):
        rest = rest.divexact(sp.pi)
    m = p ** N
    # iota(pi) = p / iota(pibar)
    u = sp.image(rest, N) * pow(sp.image(sp.pibar, N), -k, m) % m
    assert u % p != 0
    return PadicNum(p, k, u, N)
