"""Local non-triviality certificates for zero-cycles on products of CM elliptic curves."""

from .arith import (
    CLASS_NUMBER_ONE_D,
    PadicNum,
    QuadField,
    QuadInt,
    QuadNumber,
    embed_quad,
    embed_rational,
    hensel_sqrt,
    prime_embedding,
    quad_split_prime,
)
from .cm import (
    AdmissibleTuple,
    CMFamily,
    SplitPrime,
    admissible_primes,
    admissible_residues,
    admissible_tuples,
    family,
    orient_frobenius,
)
from .criteria import (
    GE2,
    LocalContext,
    PointData,
    SplitReport,
    SymbolReport,
    build_context,
    check_symbol,
    epsilon_table,
    exact_point,
    formal_valuation,
    naive_quadratic_symbol,
    quadratic_split_test,
)
from .curve import CurveFp, CurveRing, Poly, count_points, division_poly, lift_point, order_p_test
from .errors import CycleError
from .families import (
    DensityReport,
    ExtensionCertificate,
    adelic_structure,
    density_report,
    revalidate,
    scan_b_candidates,
)
from .torsion import (
    KernelPoly,
    TorsionTable,
    brute_force_torsion_x,
    etale_torsion_x,
    reconstruct_family_poly,
    taylor_criterion_value,
    torsion_by_multiples,
)

__version__ = "0.1.0"
