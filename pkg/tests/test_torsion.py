import pytest

from cmcycles.cm import admissible_residues, family, require_admissible
from cmcycles.curve import CurveRing
from cmcycles.errors import (
    HomogeneityViolation,
    MissingSecondDigit,
    NotATorsionResidue,
    OracleTooLarge,
)
from cmcycles.torsion import (
    KernelPoly,
    TorsionTable,
    brute_force_torsion_x,
    divides_division_poly,
    etale_torsion_x,
    reconstruct_family_poly,
    root_polynomial,
    taylor_criterion_value,
    torsion_by_multiples,
)
from frozen import ADMISSIBLE_BELOW_1000, GAUSSIAN_PIBAR_MOD_25, GAUSSIAN_ROOTS, EXAMPLE_ROOTS

SMALL_TUPLES = [(1, 5, 3), (19, 5, 1), (3, 7, 5), (43, 11, 1)]


def fiber(D, p, a, N=3):
    C = CurveRing(p, N, *family(D).coefficients_mod(a, p ** N))
    return C, require_admissible(C.reduce(1), D)


def table(D, p, a):
    return etale_torsion_x(*fiber(D, p, a))


@pytest.mark.parametrize("D,p,a", SMALL_TUPLES)
def test_scan_matches_brute_force(D, p, a):
    C, sp = fiber(D, p, a)
    assert etale_torsion_x(C, sp) == brute_force_torsion_x(C, sp)


@pytest.mark.parametrize("D,p,a", SMALL_TUPLES + [(43, 97, 3), (3, 61, 2)])
def test_multiples_route_matches_scan(D, p, a):
    if a not in admissible_residues(D, p):
        a = admissible_residues(D, p)[0]
    C, sp = fiber(D, p, a)
    assert torsion_by_multiples(C, sp) == etale_torsion_x(C, sp)


def test_frozen_roots():
    T = table(1, 5, 3)
    assert T.roots == GAUSSIAN_ROOTS and T.pibar_unit == GAUSSIAN_PIBAR_MOD_25
    assert table(43, 11, 1).roots == EXAMPLE_ROOTS


def test_oracle_refuses_large_p():
    C, sp = fiber(43, 97, admissible_residues(43, 97)[0])
    with pytest.raises(OracleTooLarge):
        brute_force_torsion_x(C, sp)


@pytest.mark.slow
@pytest.mark.parametrize(
    "D,p", [(D, p) for D, ps in ADMISSIBLE_BELOW_1000.items() for p in ps if p < 300]
)
def test_one_second_digit_per_residue(D, p):
    a = admissible_residues(D, p)[0]
    T = table(D, p, a)  # raises unless exactly one digit passes everywhere
    assert len(T.roots) == (p - 1) // 2
    assert len(set(T.residues)) == len(T.roots)


def test_json_round_trip():
    T = table(43, 11, 1)
    assert TorsionTable.from_json(T.to_json()) == T
    K = reconstruct_family_poly(T, 1, family(43))
    assert KernelPoly.from_json(K.to_json()) == K


class TestKernel:
    def test_gaussian_closed_form(self):
        K = reconstruct_family_poly(table(1, 5, 3), 3, family(1))
        assert K.coeffs == (9, 7)
        assert K.normalized() == (1, 23)

    @pytest.mark.parametrize("D,p,a", SMALL_TUPLES)
    def test_off_weight_symmetric_functions_vanish(self, D, p, a):
        w = family(D).weight
        T = table(D, p, a)
        coeffs = root_polynomial(T).coeffs
        n = (p - 1) // 2
        for j in range(1, n + 1):
            if j % w:
                assert coeffs[n - j] == 0

    def test_homogeneity_violation_is_reported(self):
        T = table(1, 5, 3)
        bad = TorsionTable(T.D, T.p, T.A, T.B, T.d, T.pibar_unit, ((1, 3), (4, 2)))
        with pytest.raises(HomogeneityViolation):
            reconstruct_family_poly(bad, 3, family(1))

    @pytest.mark.parametrize("D,p", [(1, 5), (19, 5), (3, 7), (43, 11)])
    def test_one_fiber_predicts_every_other(self, D, p):
        """Phi built from one fiber specializes to the roots of every fiber a mod p^2."""
        m = p * p
        fam = family(D)
        a_first = admissible_residues(D, p)[0]
        K = reconstruct_family_poly(table(D, p, a_first), a_first, fam)
        for a0 in admissible_residues(D, p):
            for a1 in range(p):
                a = a0 + a1 * p
                T = table(D, p, a)
                expected = root_polynomial(T).scale(K.pibar_unit)
                assert K.specialize(a).coeffs == [c % m for c in expected.coeffs]

    @pytest.mark.parametrize("D,p,a", SMALL_TUPLES)
    def test_divides_division_polynomial(self, D, p, a):
        fam = family(D)
        K = reconstruct_family_poly(table(D, p, a), a, fam)
        A, B = fam.coefficients_mod(a, p * p)
        assert divides_division_poly(K, A, B, a)


class TestTaylor:
    @pytest.mark.parametrize("D,p", [(1, 5), (19, 5), (43, 11)])
    def test_zero_iff_torsion_to_second_order(self, D, p):
        fam = family(D)
        a_first = admissible_residues(D, p)[0]
        K = reconstruct_family_poly(table(D, p, a_first), a_first, fam)
        for a0 in admissible_residues(D, p):
            for a1 in range(p):
                T = table(D, p, a0 + a1 * p)
                for b0 in T.residues:
                    for b1 in range(p):
                        zero = taylor_criterion_value(K, b0, b1, a0, a1) == 0
                        assert zero == (T.root_over(b0) == (b0, b1))

    def test_missing_digit(self):
        K = reconstruct_family_poly(table(1, 5, 3), 3, family(1))
        with pytest.raises(MissingSecondDigit):
            taylor_criterion_value(K, 1, 0, 3, None)

    def test_not_a_residue(self):
        K = reconstruct_family_poly(table(1, 5, 3), 3, family(1))
        with pytest.raises(NotATorsionResidue):
            taylor_criterion_value(K, 2, 0, 3, 0)
