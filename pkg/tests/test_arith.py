from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import primerange

from cmcycles.arith import (
    CLASS_NUMBER_ONE_D,
    INF,
    PadicNum,
    QuadField,
    QuadInt,
    embed_quad,
    embed_rational,
    hensel_sqrt,
    kronecker,
    prime_embedding,
    quad_split_prime,
)
from cmcycles.errors import (
    InertPrime,
    NonResidue,
    PrecisionError,
    PrimeTooLarge,
    RamifiedPrime,
    UnsupportedD,
    ZeroDivisor,
)
from oracles import sqrt_mod_naive


class TestQuadField:
    def test_rejects_other_discriminants(self):
        with pytest.raises(UnsupportedD):
            QuadField(5)

    @pytest.mark.parametrize("D", CLASS_NUMBER_ONE_D)
    def test_basis_follows_D_mod_4(self, D):
        assert QuadField(D).half_integral == (D % 4 == 3)

    def test_parity_invariant(self):
        with pytest.raises(ValueError):
            QuadInt(QuadField(1), 1, 1)
        with pytest.raises(ValueError):
            QuadInt(QuadField(43), 1, 2)
        assert QuadInt(QuadField(43), 1, 1).norm() == 11


class TestSplitPrime:
    def test_example_field(self):
        pi = quad_split_prime(QuadField(43), 11)
        assert (pi.s, pi.t) == (1, 1)
        assert pi.norm() == 11 and pi.trace() == 1

    def test_gaussian(self):
        pi = quad_split_prime(QuadField(1), 5)
        assert (pi.s, pi.t) == (4, 2)  # 2 + i
        assert pi.norm() == 5

    def test_inert(self):
        with pytest.raises(InertPrime):
            quad_split_prime(QuadField(43), 7)

    def test_ramified(self):
        with pytest.raises(RamifiedPrime):
            quad_split_prime(QuadField(43), 43)

    @pytest.mark.parametrize("D", CLASS_NUMBER_ONE_D)
    def test_succeeds_iff_kronecker_is_one(self, D):
        K = QuadField(D)
        for p in primerange(3, 1000):
            p = int(p)
            if D % p == 0:
                with pytest.raises(RamifiedPrime):
                    quad_split_prime(K, p)
            elif kronecker(-D, p) == 1:
                assert quad_split_prime(K, p).norm() == p
            else:
                with pytest.raises(InertPrime):
                    quad_split_prime(K, p)


class TestHensel:
    def test_exact_square(self):
        assert hensel_sqrt(4, 5, 3) == 2

    def test_example_root(self):
        r = hensel_sqrt(-43, 11, 4)
        assert (r * r + 43) % 11 ** 4 == 0

    def test_non_residue(self):
        with pytest.raises(NonResidue):
            hensel_sqrt(6, 7, 2)

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisor):
            hensel_sqrt(10, 5, 2)

    def test_smaller_root_rule(self):
        for c in (2, 3, 5, 7, 11):
            roots = sqrt_mod_naive(c, 13 ** 2)
            if roots:
                r = hensel_sqrt(c, 13, 2)
                assert r in roots
                assert r % 13 == min(x % 13 for x in roots)

    @pytest.mark.parametrize("p,N", [(5, 4), (7, 3), (11, 4), (8191, 2)])
    def test_random_residues(self, p, N):
        import random

        rng = random.Random(p * 100 + N)
        m = p ** N
        done = 0
        while done < 1000:
            c = rng.randrange(1, m)
            if c % p == 0 or kronecker(c, p) != 1:
                continue
            r = hensel_sqrt(c, p, N)
            assert (r * r - c) % m == 0
            done += 1


class TestEmbedding:
    def test_gaussian_i(self):
        sp = prime_embedding(1, 5)
        i = QuadField(1).integer(0, 1)
        e = embed_quad(i, sp, 2)
        assert e.valuation == 0 and e.unit == 18
        assert embed_quad(sp.pibar, sp, 2).unit == 9

    def test_pi_has_valuation_one(self):
        for D, p in [(1, 5), (43, 11), (3, 7), (163, 41)]:
            sp = prime_embedding(D, p)
            assert embed_quad(sp.pi, sp).valuation == 1
            assert embed_quad(sp.pibar, sp).valuation == 0
            assert embed_quad(QuadInt(sp.field, 2 * p, 0), sp).valuation == 1

    def test_zero(self):
        sp = prime_embedding(43, 11)
        assert embed_quad(QuadInt(sp.field, 0, 0), sp).valuation == INF

    def test_rationals(self):
        e = embed_rational(Fraction(129, 4), 11)
        assert e.valuation == 0 and e.unit % 11 == 2
        e = embed_rational(Fraction(1, 121), 11)
        assert e.valuation == -2 and e.unit == 1
        assert embed_rational(0, 11).is_zero()

    def test_prime_bound(self):
        with pytest.raises(PrimeTooLarge):
            prime_embedding(3, 8209)


quad_ints = st.tuples(st.integers(-500, 500), st.integers(-500, 500))


@given(D=st.sampled_from(CLASS_NUMBER_ONE_D), st_=quad_ints)
def test_norm_is_q_times_conjugate(D, st_):
    K = QuadField(D)
    s, t = st_
    if K.half_integral:
        t += (s - t) % 2
    else:
        s, t = 2 * s, 2 * t
    q = QuadInt(K, s, t)
    prod = q * q.conj()
    assert prod.t == 0 and prod.s == 2 * q.norm()


@given(D=st.sampled_from([1, 3, 19, 43, 67]), st_=quad_ints)
def test_embedding_respects_norm(D, st_):
    p = {1: 5, 3: 7, 19: 5, 43: 11, 67: 17}[D]
    sp = prime_embedding(D, p)
    K = sp.field
    s, t = st_
    if K.half_integral:
        t += (s - t) % 2
    else:
        s, t = 2 * s, 2 * t
    q = QuadInt(K, s, t)
    if q.is_zero():
        return
    lhs = embed_quad(q, sp) * embed_quad(q.conj(), sp)
    rhs = embed_rational(q.norm(), p)
    diff = lhs - rhs
    assert diff.is_zero() or diff.valuation >= min(lhs.absprec, rhs.absprec)


small_rationals = st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 4).filter(lambda x: x != 0)


def _with_valuation(x: Fraction, p: int, v: int) -> Fraction:
    return x * Fraction(p) ** v


@given(x=small_rationals, y=small_rationals, vx=st.integers(-2, 2), vy=st.integers(-2, 2))
def test_padic_agrees_with_exact(x, y, vx, vy):
    p, N = 7, 4
    x, y = _with_valuation(x, p, vx), _with_valuation(y, p, vy)
    ex, ey = embed_rational(x, p, N), embed_rational(y, p, N)
    for got, exact in ((ex * ey, x * y), (ex + ey, x + y), (ex - ey, x - y), (ex / ey, x / y)):
        if exact == 0:
            assert got.is_zero()
            continue
        ref = embed_rational(exact, p, N + 8)
        if got.is_zero():
            assert ref.valuation >= got.absprec
            continue
        assert got.valuation == ref.valuation
        m = p ** got.prec
        assert (got.unit - ref.unit) % m == 0


def test_precision_loss_is_reported():
    p = 5
    a = PadicNum(p, 0, 1, 2)
    b = PadicNum(p, 0, 26 % 25, 2)
    z = a - b
    assert z.is_zero() and z.absprec == 2
    with pytest.raises(PrecisionError):
        z.residue(3)
