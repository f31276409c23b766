"""Command-line front end.

Exit codes: 0 success, 1 domain error (any CycleError), 2 usage or parse
error.  The torsion cache lives in $CMCYCLES_CACHE_DIR (default
~/.cache/cmcycles) and is guarded by a file lock.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from filelock import FileLock

from .arith import CLASS_NUMBER_ONE_D, QuadField, QuadInt, prime_embedding
from .cm import admissible_primes, family, require_admissible
from .criteria import (
    build_context,
    check_symbol,
    exact_point,
    naive_quadratic_symbol,
    quadratic_split_test,
)
from .curve import CurveRing
from .errors import CycleError
from .families import SCHEMA_VERSION, arithmetic_progression, density_report, scan_b_candidates
from .torsion import KernelPoly, TorsionTable, etale_torsion_x, reconstruct_family_poly

CACHE_ENV = "CMCYCLES_CACHE_DIR"


@dataclass(frozen=True)
class Config:
    precision: int = 4
    cache_dir: Path = Path.home() / ".cache" / "cmcycles"
    jobs: int = 1
    output: str = "text"
    use_cache: bool = True

    def __post_init__(self):
        if not 3 <= self.precision <= 8:
            raise ValueError("precision must lie in [3, 8]")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.output not in ("json", "text"):
            raise ValueError("output must be json or text")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing


def rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed rational {text!r}") from None


def rational_pair(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated rationals, got {text!r}")
    return rational(parts[0]), rational(parts[1])


def k_element(text: str, D: int):
    """`num/den` for a rational, `s,t` for (s + t*sqrt(-D))/2."""
    if "," in text:
        s, t = (int(v) for v in text.split(","))
        try:
            return QuadInt(QuadField(D), s, t).to_number()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        return rational(text)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# output


def _emit(cfg: Config, payload: dict, text: str) -> None:
    if cfg.output == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _report_lines(rep: dict, indent: str = "") -> list[str]:
    lines = [
        f"{indent}rule: {rep['rule']}",
        f"{indent}nontrivial: {str(rep['nontrivial']).lower()}",
        f"{indent}formal valuation: {rep['formal_valuation']}",
    ]
    if rep.get("matched_root"):
        lines.append(f"{indent}matched root: {tuple(rep['matched_root'])}")
    lines += [f"{indent}  {t}" for t in rep["trace"]]
    return lines


# ---------------------------------------------------------------------------
# commands


def cmd_fields(args, cfg: Config) -> int:
    rows = []
    for D in CLASS_NUMBER_ONE_D:
        K = QuadField(D)
        rows.append({"D": D, "basis": K.basis, "units": K.unit_count, "weight": K.unit_count // 2})
    text = "\n".join(f"D={r['D']:<4} basis {r['basis']:<18} units {r['units']}  weight {r['weight']}" for r in rows)
    _emit(cfg, {"schema_version": SCHEMA_VERSION, "fields": rows}, text)
    return 0


def _admissible_row(D_maxp_check):
    D, pmax, check = D_maxp_check
    return admissible_primes(D, pmax, cross_check=check)


def cmd_admissible(args, cfg: Config) -> int:
    Ds = [args.D] if args.D is not None else list(CLASS_NUMBER_ONE_D)
    for D in Ds:
        family(D)
    work = [(D, args.max_p, not args.no_cross_check) for D in Ds]
    if cfg.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            lists = list(ex.map(_admissible_row, work))
    else:
        lists = [_admissible_row(w) for w in work]
    rows = [{"D": D, "primes": ps} for D, ps in zip(Ds, lists)]
    text = "\n".join(f"{r['D']}: {' '.join(map(str, r['primes']))}".rstrip() for r in rows)
    _emit(cfg, {"schema_version": SCHEMA_VERSION, "max_p": args.max_p, "rows": rows}, text)
    return 0


def _torsion_payload(D: int, p: int, A: Fraction, B: Fraction) -> dict:
    fam = family(D)
    a = fam.parameter(A, B)
    m3 = p ** 3
    A3 = A.numerator * pow(A.denominator, -1, m3) % m3
    B3 = B.numerator * pow(B.denominator, -1, m3) % m3
    C = CurveRing(p, 3, A3, B3)
    sp = require_admissible(C.reduce(1), D)
    table = etale_torsion_x(C, sp)
    kernel = reconstruct_family_poly(table, a, fam)
    return {
        "schema_version": SCHEMA_VERSION,
        "table": table.to_json(),
        "kernel": kernel.to_json(),
        "x_mod_p2": table.values,
        "pi": {"s": sp.pi.s, "t": sp.pi.t},
        "sqrt_minus_D_mod_p2": sp.embedding.root % (p * p),
        "frobenius": {"s": sp.frobenius.s, "t": sp.frobenius.t, "trace": sp.frob_trace},
    }


def torsion_cache_key(D: int, p: int, A: Fraction, B: Fraction) -> str:
    m3 = p ** 3
    A3 = A.numerator * pow(A.denominator, -1, m3) % m3
    B3 = B.numerator * pow(B.denominator, -1, m3) % m3
    sp = prime_embedding(D, p)
    unit = sp.image(sp.pibar, 2)
    return f"torsion_D{D}_p{p}_A{A3}_B{B3}_u{unit}"


def load_or_compute_torsion(cfg: Config, D: int, p: int, A: Fraction, B: Fraction) -> tuple[str, bool]:
    """Serialized torsion payload and whether it came from the cache."""
    if not cfg.use_cache:
        return json.dumps(_torsion_payload(D, p, A, B), sort_keys=True), False
    cfg.cache_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.cache_dir / (torsion_cache_key(D, p, A, B) + ".json")
    with FileLock(str(path) + ".lock"):
        if path.exists():
            return path.read_text(), True
        blob = json.dumps(_torsion_payload(D, p, A, B), sort_keys=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(blob)
        tmp.replace(path)
        return blob, False


def cmd_torsion(args, cfg: Config) -> int:
    blob, hit = load_or_compute_torsion(cfg, args.D, args.p, args.A, args.B)
    if hit:
        print("served from cache", file=sys.stderr)
    payload = json.loads(blob)
    table = TorsionTable.from_json(payload["table"])
    kernel = KernelPoly.from_json(payload["kernel"])
    lines = [
        f"etale torsion x mod {args.p}^2: {' '.join(map(str, table.values))}",
        f"roots (x0, x1): {' '.join(f'({a},{b})' for a, b in table.roots)}",
        f"cofactor d = {table.d}, pibar -> {table.pibar_unit} mod {args.p}^2",
        "kernel polynomial: " + " + ".join(f"{c}*x^{i}*a^{k}" for i, k, c in kernel.terms()),
    ]
    _emit(cfg, payload, "\n".join(lines))
    return 0


def _context(args, cfg: Config):
    A, B = args.curve
    return build_context(A, B, args.D, args.p, cfg.precision)


def cmd_check_point(args, cfg: Config) -> int:
    ctx = _context(args, cfg)
    P = exact_point(k_element(args.x, args.D), k_element(args.y, args.D), ctx)
    rep = check_symbol(P, ctx).to_json()
    _emit(cfg, {"schema_version": SCHEMA_VERSION, "point": [args.x, args.y], "report": rep}, "\n".join(_report_lines(rep)))
    return 0


def cmd_split_test(args, cfg: Config) -> int:
    ctx = _context(args, cfg)
    b = k_element(args.b, args.D)
    split = quadratic_split_test(b, ctx)
    payload = {"schema_version": SCHEMA_VERSION, "b": args.b, "split": split.to_json(), "symbol": None}
    lines = [
        f"branch: {split.branch}",
        f"splits: {str(split.splits).lower()}",
        f"degenerate: {str(split.degenerate).lower()}",
    ]
    if split.splits and not split.degenerate:
        _, rep = naive_quadratic_symbol(b, ctx)
        payload["symbol"] = rep.to_json()
        lines += ["naive point symbol:"] + _report_lines(payload["symbol"], "  ")
    _emit(cfg, payload, "\n".join(lines))
    return 0


def cmd_family(args, cfg: Config) -> int:
    ctx = _context(args, cfg)
    x, y = args.gen
    P = exact_point(x, y, ctx)
    start = k_element(args.b_start, args.D)
    step = k_element(args.b_step, args.D)
    res = scan_b_candidates(ctx, P, arithmetic_progression(start, step, args.count), jobs=cfg.jobs)
    text = "\n\n".join(c.render_text() for c in res.certificates)
    tail = [f"{len(res.certificates)} certificates"]
    tail += [f"rejected b = {b}: {r}" for b, r in res.rejected]
    if res.diagnostic:
        tail.append(res.diagnostic)
    _emit(cfg, res.to_json(), (text + "\n\n" if text else "") + "\n".join(tail))
    return 0


def cmd_density(args, cfg: Config) -> int:
    rep = density_report(_context(args, cfg))
    text = "\n".join(f"b0 = {b0}: failing b1 = {b1}" for b0, b1 in rep.failing) + f"\ndensity = {rep.density}"
    _emit(cfg, {"schema_version": SCHEMA_VERSION, **rep.to_json()}, text)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--precision", type=int, default=4, help="working p-adic precision N (3..8)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--no-cache", action="store_true", help="recompute instead of using the torsion cache")
    common.add_argument("--cache-dir", type=Path, default=None, help=f"cache directory (default ${CACHE_ENV})")

    parser = argparse.ArgumentParser(prog="cmcycles", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("fields", parents=[common], help="list the nine fields").set_defaults(func=cmd_fields)

    p = sub.add_parser("admissible", parents=[common], help="admissible primes below a bound")
    p.add_argument("--D", type=int, default=None)
    p.add_argument("--max-p", type=int, default=1000)
    p.add_argument("--no-cross-check", action="store_true")
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("torsion", parents=[common], help="etale torsion table and kernel polynomial")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--A", type=rational, required=True)
    p.add_argument("--B", type=rational, required=True)
    p.set_defaults(func=cmd_torsion)

    def curve_args(q):
        q.add_argument("--curve", type=rational_pair, required=True, metavar="A,B")
        q.add_argument("--p", type=int, required=True)
        q.add_argument("--D", type=int, required=True)

    p = sub.add_parser("check-point", parents=[common], help="local symbol of a K-rational point")
    curve_args(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_check_point)

    p = sub.add_parser("split-test", parents=[common], help="splitting of v in K(sqrt(f(b)))")
    curve_args(p)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_split_test)

    p = sub.add_parser("family", parents=[common], help="scan b and emit certificates")
    curve_args(p)
    p.add_argument("--gen", type=rational_pair, required=True, metavar="X,Y")
    p.add_argument("--b-start", required=True)
    p.add_argument("--b-step", required=True)
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("density", parents=[common], help="failing second digits per torsion residue")
    curve_args(p)
    p.set_defaults(func=cmd_density)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn `--opt -3,4` into `--opt=-3,4`; argparse would read -3,4 as a flag."""
    out = []
    for tok in argv:
        if (
            out
            and len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] == "/")
            and out[-1].startswith("--") and "=" not in out[-1]
        ):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        cache_dir = args.cache_dir or Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "cmcycles"))
        cfg = Config(
            precision=args.precision,
            cache_dir=cache_dir,
            jobs=args.jobs,
            output="json" if args.json else "text",
            use_cache=not args.no_cache,
        )
        return args.func(args, cfg)
    except CycleError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
