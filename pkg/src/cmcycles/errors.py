"""Exception hierarchy.

Every domain failure raised by the library derives from :class:`CycleError`;
the CLI maps these to exit code 1.
"""


class CycleError(Exception):
    """Base class for domain errors."""


# arithmetic
class InertPrime(CycleError):
    pass


class RamifiedPrime(CycleError):
    pass


class NonResidue(CycleError):
    pass


class ZeroDivisor(CycleError):
    pass


class PrecisionError(CycleError):
    """Not enough known p-adic digits to decide a question."""


class PrimeTooLarge(CycleError):
    pass


# curves
class SingularCurve(CycleError):
    pass


class NonUnitSlope(CycleError):
    """Two operands of the affine group law coincide modulo p."""


class TwoTorsion(CycleError):
    pass


# CM families
class UnsupportedD(CycleError):
    pass


class NonSplitPrime(CycleError):
    pass


class SupersingularFiber(CycleError):
    pass


class NotCMCurve(CycleError):
    """The curve's j-invariant is not the CM j-invariant of the field."""


class NotAdmissible(CycleError):
    pass


# torsion
class InternalAmbiguity(CycleError):
    pass


class OracleTooLarge(CycleError):
    pass


class HomogeneityViolation(CycleError):
    pass


class NotATorsionResidue(CycleError):
    pass


class MissingSecondDigit(CycleError):
    pass


# criteria
class OddNegativeValuation(CycleError):
    pass


class NoMatchingRoot(CycleError):
    pass


class BranchMismatch(CycleError):
    pass


class NotOnCurve(CycleError):
    pass


class NotSplit(CycleError):
    pass


class DegenerateQuadratic(CycleError):
    pass


# families
class ProfileTooLarge(CycleError):
    pass


class GeneratorFailsCriterion(CycleError):
    """The generator point's own symbol is trivial; no family can be built."""
