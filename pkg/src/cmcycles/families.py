"""Certified families of quadratic extensions F = K(sqrt(f(b))).

For a generator P with non-trivial local symbol and a parameter b such that
v splits in F, F != K, and the naive point (b, sqrt f(b)) also has
non-trivial symbol, the two symbols are linearly independent over Z/p and
the local group attached to F is (Z/p)^m with m = 2 places above v.
Certificates record exactly which of these checks passed.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .arith import QuadNumber, QuadField
from .criteria import (
    LocalContext,
    PointData,
    SplitReport,
    SymbolReport,
    build_context,
    check_symbol,
    exact_point,
    naive_quadratic_symbol,
    quadratic_split_test,
)
from .errors import CycleError, GeneratorFailsCriterion, InternalAmbiguity, ProfileTooLarge
from .torsion import taylor_criterion_value

SCHEMA_VERSION = 1

HYPOTHESES = (
    "generator symbol nontrivial",
    "naive point symbol nontrivial",
    "v splits in F/K",
    "F != K",
)


def adelic_structure(p: int, degree: int, places: int) -> tuple[int, str]:
    """m and a description of the local group for F/K of the given degree."""
    if degree < 1 or places < 1 or places > degree:
        raise ValueError(f"inconsistent profile: degree {degree}, {places} places")
    if degree >= p - 1:
        raise ProfileTooLarge(f"[F:K] = {degree} is not below p - 1 = {p - 1}")
    m = places
    return m, f"(Z/{p})^{m}; Brauer obstruction term vanishes under these hypotheses (cited, not recomputed)"


# ---------------------------------------------------------------------------
# serialization helpers for elements of K


def encode_k(z) -> list[str]:
    if isinstance(z, QuadNumber):
        return [str(z.a), str(z.b)]
    return [str(Fraction(z)), "0"]


def decode_k(pair, D: int):
    a, b = Fraction(pair[0]), Fraction(pair[1])
    return a if b == 0 else QuadNumber(QuadField(D), a, b)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class ExtensionCertificate:
    D: int
    p: int
    A: Fraction
    B: Fraction
    pi: tuple[int, int]
    pibar_unit: int
    generator: tuple
    generator_report: SymbolReport
    b: object
    split: SplitReport
    point_report: SymbolReport
    adelic_rank: int
    adelic_group: str
    hypotheses: tuple[tuple[str, bool], ...] = field(default_factory=tuple)

    @property
    def independent(self) -> bool:
        return all(ok for _, ok in self.hypotheses)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "inputs": {
                "D": self.D,
                "p": self.p,
                "curve": {"A": str(self.A), "B": str(self.B)},
                "pi": {"s": self.pi[0], "t": self.pi[1], "note": "pi = (s + t*sqrt(-D))/2, valuation 1"},
                "pibar_unit_mod_p2": self.pibar_unit,
                "generator": [encode_k(c) for c in self.generator],
                "b": encode_k(self.b),
            },
            "fields": {
                "F": f"K(sqrt({self.split.radicand}))",
                "L": "F(E[pi])",
                "L_ramification": f"totally ramified of degree {self.p - 1} above v, unramified elsewhere",
            },
            "reports": {
                "generator": self.generator_report.to_json(),
                "split": self.split.to_json(),
                "naive_point": self.point_report.to_json(),
            },
            "adelic_rank": self.adelic_rank,
            "adelic_group": self.adelic_group,
            "hypotheses": [{"name": n, "holds": ok} for n, ok in self.hypotheses],
            "conclusion": {
                "independent": self.independent,
                "statement": "the two local symbols are Z/p-linearly independent"
                if self.independent
                else "independence not certified",
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def render_text(self) -> str:
        lines = [
            f"curve      y^2 = x^3 + ({self.A})x + ({self.B})  over Q(sqrt(-{self.D})), p = {self.p}",
            f"generator  P = ({self.generator[0]}, {self.generator[1]})  "
            f"nontrivial={self.generator_report.nontrivial} [{self.generator_report.rule}]",
            f"parameter  b = {self.b}  F = K(sqrt({self.split.radicand}))",
            f"split      branch={self.split.branch} splits={self.split.splits} degenerate={self.split.degenerate}",
            f"naive pt   nontrivial={self.point_report.nontrivial} [{self.point_report.rule}]",
            f"adelic     m = {self.adelic_rank}: {self.adelic_group}",
        ]
        for n, ok in self.hypotheses:
            lines.append(f"  [{'x' if ok else ' '}] {n}")
        lines.append(f"independent: {self.independent}")
        return "\n".join(lines)


def _certificate(ctx: LocalContext, P: PointData, preport: SymbolReport, b, split, qreport) -> ExtensionCertificate:
    hyps = (
        (HYPOTHESES[0], preport.nontrivial),
        (HYPOTHESES[1], qreport.nontrivial),
        (HYPOTHESES[2], split.splits),
        (HYPOTHESES[3], not split.degenerate),
    )
    places = 2 if split.splits and not split.degenerate else 1
    degree = 1 if split.degenerate else 2
    m, group = adelic_structure(ctx.p, degree, places)
    pi = ctx.sp.pi
    return ExtensionCertificate(
        ctx.D, ctx.p, ctx.A, ctx.B, (pi.s, pi.t), ctx.table.pibar_unit,
        (P.x, P.y), preport, b, split, qreport, m, group, hyps,
    )


# ---------------------------------------------------------------------------
# scanning


@dataclass
class ScanResult:
    certificates: list[ExtensionCertificate]
    rejected: list[tuple[str, str]]
    diagnostic: str | None = None

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "certificates": [c.to_json() for c in self.certificates],
            "rejected": [{"b": b, "reason": r} for b, r in self.rejected],
            "diagnostic": self.diagnostic,
        }


def _evaluate(ctx: LocalContext, P: PointData, preport: SymbolReport, b):
    split = quadratic_split_test(b, ctx)
    if not split.splits:
        return None, "v does not split in F/K"
    if split.degenerate:
        return None, "f(b) is a square in K, so F = K"
    try:
        _, qreport = naive_quadratic_symbol(b, ctx)
    except CycleError as exc:
        return None, f"{type(exc).__name__}: {exc}"
    if not qreport.nontrivial:
        return None, "naive point symbol is trivial"
    return _certificate(ctx, P, preport, b, split, qreport), None


def _evaluate_star(args):
    return _evaluate(*args)


def scan_b_candidates(
    ctx: LocalContext,
    P: PointData,
    bs: Iterable,
    limit: int | None = None,
    jobs: int = 1,
) -> ScanResult:
    """Certificates for the parameters b, in iterator order."""
    preport = check_symbol(P, ctx)
    if not preport.nontrivial:
        err = GeneratorFailsCriterion(f"generator ({P.x}, {P.y}) has trivial symbol")
        return ScanResult([], [], f"{type(err).__name__}: {err}")
    bs = list(bs) if limit is None else [b for _, b in zip(range(limit), bs)]
    work = [(ctx, P, preport, b) for b in bs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            outcomes = list(ex.map(_evaluate_star, work))
    else:
        outcomes = [_evaluate(*w) for w in work]
    certs, rejected = [], []
    for b, (cert, reason) in zip(bs, outcomes):
        if cert is not None:
            certs.append(cert)
        else:
            rejected.append((str(b), reason))
    return ScanResult(certs, rejected)


def arithmetic_progression(start, step, count: int):
    return [start + k * step for k in range(count)]


# ---------------------------------------------------------------------------
# revalidation


def revalidate(obj: dict, N: int = 4) -> bool:
    """Recompute a serialized certificate from its inputs and compare bytes."""
    inp = obj["inputs"]
    D, p = inp["D"], inp["p"]
    ctx = build_context(Fraction(inp["curve"]["A"]), Fraction(inp["curve"]["B"]), D, p, N)
    x, y = (decode_k(c, D) for c in inp["generator"])
    P = exact_point(x, y, ctx)
    b = decode_k(inp["b"], D)
    cert, _ = _evaluate(ctx, P, check_symbol(P, ctx), b)
    if cert is None:
        return False
    return json.dumps(cert.to_json(), sort_keys=True) == json.dumps(obj, sort_keys=True)


# ---------------------------------------------------------------------------
# density


@dataclass(frozen=True)
class DensityReport:
    p: int
    failing: tuple[tuple[int, int], ...]
    density: Fraction

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "failing": [{"b0": b0, "b1": b1} for b0, b1 in self.failing],
            "density": str(self.density),
        }


def density_report(ctx: LocalContext) -> DensityReport:
    """Census of the Taylor test over all (b0, b1) with b0 a torsion residue."""
    p = ctx.p
    failing, good = [], 0
    for b0 in sorted(ctx.table.residues):
        values = [taylor_criterion_value(ctx.kernel, b0, b1, ctx.a0, ctx.a1) for b1 in range(p)]
        zeros = [b1 for b1, v in enumerate(values) if v == 0]
        if len(zeros) != 1:
            raise InternalAmbiguity(f"{len(zeros)} failing digits over b0 = {b0}")
        failing.append((b0, zeros[0]))
        good += p - 1
    return DensityReport(p, tuple(failing), Fraction(good, len(failing) * p))
