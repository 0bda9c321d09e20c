"""Command-line front end: ``ffbias {lfunc,bias,density,reproduce-tables,scan}``.

Exit codes: 0 success, 2 usage or parse error, 3 internal integrity failure,
4 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .biasseries import (
    BRUTE_FORCE_LIMIT,
    ResourceGuardError,
    brute_force,
    cumulative_gf,
    empirical_densities,
    expand,
    gf_lambda,
    gf_mu,
    normalized,
    nth_term_fast,
    recurrence_from,
)
from .cache import ExperimentRecord, cache_load, cache_store
from .density import model_densities
from .ffpoly import DomainError, FieldSpec, Poly, PolyParseError, _is_prime, enumerate_monic, format_poly, parse_poly
from .lfunc import IntegrityError, LPolynomial, central_l_value, gsh_diagnostic, inverse_zeros, l_polynomial
from .multfunc import check_modulus, factor, is_squarefree, monic_irreducibles
from .report import SCHEMA_VERSION

EXIT_OK, EXIT_USAGE, EXIT_INTEGRITY, EXIT_RESOURCE = 0, 2, 3, 4

TABLE_MODULI = ((5, "T^3+T+4"), (3, "(T^2+1)(T^3+2T+1)"))
TABLE_HORIZONS = (10, 100, 1000, 10000)


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def field_from_q(q: int, ext_modulus: str | None = None) -> FieldSpec:
    """F_q for an odd prime power q; k > 1 defaults to the first monic irreducible."""
    p = next((d for d in range(3, q + 1, 2) if q % d == 0), None) if q > 2 else None
    if p is None or not _is_prime(p):
        raise DomainError(f"q must be an odd prime power, got {q}")
    k = round(math.log(q, p))
    if p**k != q:
        raise DomainError(f"q must be an odd prime power, got {q}")
    if k == 1:
        if ext_modulus:
            raise DomainError("--ext-modulus only applies to prime powers")
        return FieldSpec(p)
    base = FieldSpec(p)
    if ext_modulus:
        g = parse_poly(ext_modulus, base, var="x")
    else:
        g = monic_irreducibles(base, k)[0]
    return FieldSpec(p, k, g.coeffs)


def _modulus(args) -> tuple[FieldSpec, Poly]:
    spec = field_from_q(args.q, args.ext_modulus)
    m = parse_poly(args.m, spec, reduce=args.reduce)
    check_modulus(m)
    return spec, m


def _record(spec: FieldSpec, m: Poly, use_cache: bool) -> tuple[ExperimentRecord, LPolynomial]:
    text = format_poly(m)
    rec = cache_load(spec.q, text) if use_cache else None
    if rec is not None and rec.ext_modulus == spec.ext_modulus:
        return rec, LPolynomial(spec, m, rec.l_coeffs)
    L = l_polynomial(spec, m)
    z = inverse_zeros(L)
    rec = ExperimentRecord(
        q=spec.q, p=spec.p, k=spec.k, modulus=text, l_coeffs=L.coeffs, angles=z.angles,
        gsh_verdict=gsh_diagnostic(z).verdict, ext_modulus=spec.ext_modulus,
    )
    if use_cache:
        cache_store(rec)
    return rec, L


def _csv_writer(out):
    return csv.writer(out, lineterminator="\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_lfunc(args, out) -> int:
    spec, m = _modulus(args)
    _, L = _record(spec, m, not args.no_cache)
    z = inverse_zeros(L)
    diag = gsh_diagnostic(z)
    if args.json:
        obj = json.loads(L.to_json())
        obj.update(
            angles=list(z.angles),
            rh_residual=z.rh_residual,
            gsh_verdict=diag.verdict,
            central_value=central_l_value(L, z).horner,
        )
        print(json.dumps(obj, sort_keys=True), file=out)
        return EXIT_OK
    print(L, file=out)
    print(f"modulus: {format_poly(m)} over {spec}", file=out)
    for j, t in enumerate(z.angles, 1):
        print(f"theta_{j} = {t:.15f}  (theta/pi = {t / math.pi:.15f})", file=out)
    print(f"RH residual: {z.rh_residual:.3e}", file=out)
    print(f"central value L(q^-1/2): {central_l_value(L, z).horner:.12f}", file=out)
    print(diag.describe(), file=out)
    return EXIT_OK


def _gf(L: LPolynomial, kind: str):
    return gf_lambda(L) if kind == "lambda" else gf_mu(L)


def cmd_bias(args, out) -> int:
    spec, m = _modulus(args)
    _, L = _record(spec, m, not args.no_cache)
    gf = _gf(L, args.kind)
    if args.fast is not None:
        n = args.fast
        terms = [(n, nth_term_fast(recurrence_from(gf), n), nth_term_fast(recurrence_from(cumulative_gf(gf)), n))]
    else:
        if args.brute_force:
            series = brute_force(spec, m, args.kind, args.N, limit=args.limit).series
        else:
            series = expand(gf, args.N)
        terms = [(n, series.b[n], series.B[n]) for n in range(series.N + 1)]

    w = _csv_writer(out)
    cols = ["n", "b", "B", "sign_b", "sign_B"]
    if args.normalized:
        cols += ["b_normalized", "B_normalized"]
    w.writerow(cols)
    for n, b, B in terms:
        row = [n, b, B, _sign(b), _sign(B)]
        if args.normalized:
            row += [repr(normalized(b, spec.q, n)), repr(normalized(B, spec.q, n))]
        w.writerow(row)
    return EXIT_OK


def cmd_density(args, out) -> int:
    spec, m = _modulus(args)
    rec, L = _record(spec, m, not args.no_cache)
    if args.empirical is not None:
        reports = empirical_densities(expand(_gf(L, args.kind), args.empirical), args.empirical)
    else:
        names = (f"{args.kind}-nc", f"{args.kind}-cum")
        if all(n in rec.densities for n in names):
            reports = tuple(rec.densities[n] for n in names)
        else:
            reports = model_densities(L, factor(m), args.kind)
            if not args.no_cache:
                for n, r in zip(names, reports):
                    rec = rec.with_density(n, r)
                cache_store(rec)
    obj = {"schema_version": SCHEMA_VERSION, "reports": [r.to_dict() for r in reports]}
    print(json.dumps(obj, sort_keys=True), file=out)
    return EXIT_OK


def table_rows(horizons=TABLE_HORIZONS):
    """Empirical densities delta_+ of the two worked examples at each horizon (exact)."""
    rows = []
    for q, text in TABLE_MODULI:
        spec = FieldSpec(q)
        m = parse_poly(text, spec)
        L = l_polynomial(spec, m)
        top = max(horizons)
        series = {k: expand(_gf(L, k), top) for k in ("lambda", "mu")}
        for n in horizons:
            cells = []
            for k in ("lambda", "mu"):
                nc, cum = empirical_densities(series[k], n)
                cells += [nc.exact[0], cum.exact[0]]
            rows.append((q, format_poly(m), n, *cells))
    return rows


def round4(x: Fraction) -> str:
    """Exact 4-decimal rounding (half to even) of a non-negative fraction."""
    n = round(Fraction(x) * 10000)
    return f"{n // 10000}.{n % 10000:04d}"


def cmd_reproduce_tables(args, out) -> int:
    w = _csv_writer(out)
    w.writerow(["q", "modulus", "n", "lambda_nc", "lambda_cum", "mu_nc", "mu_cum"])
    for q, text, n, *cells in table_rows(tuple(args.horizons)):
        w.writerow([q, text, n, *(round4(c) for c in cells)])
    return EXIT_OK


def _scan_one(job):
    p, k, ext, coeffs, qmc_points = job
    spec = FieldSpec(p, k, ext)
    m = Poly(spec, coeffs)
    L = l_polynomial(spec, m)
    z = inverse_zeros(L)
    verdict = gsh_diagnostic(z).verdict
    nc, cum = model_densities(L, factor(m), "lambda", qmc_points=qmc_points)
    return {
        "modulus": format_poly(m),
        "q": spec.q,
        "degree": m.degree,
        "l_poly": str(L),
        "central_value": central_l_value(L, z).horner,
        "delta_plus_nc": nc.delta_plus,
        "delta_plus_cum": cum.delta_plus,
        "source": nc.source,
        "gsh_verdict": verdict,
    }


SCAN_COLUMNS = ("modulus", "q", "degree", "l_poly", "central_value", "delta_plus_nc", "delta_plus_cum", "source", "gsh_verdict")


def scan(spec: FieldSpec, degree: int, jobs: int = 1, qmc_points: int | None = None) -> list[dict]:
    from .density import QMC_POINTS

    work = [
        (spec.p, spec.k, spec.ext_modulus, m.coeffs, qmc_points or QMC_POINTS)
        for m in enumerate_monic(spec, degree)
        if is_squarefree(m)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_scan_one, work, chunksize=16))
    else:
        rows = [_scan_one(j) for j in work]
    rows.sort(key=lambda r: (r["central_value"], r["modulus"]))
    return rows


def cmd_scan(args, out) -> int:
    spec = field_from_q(args.q, args.ext_modulus)
    if args.degree < 1:
        raise DomainError("degree must be >= 1")
    rows = scan(spec, args.degree, args.jobs, args.qmc_points)
    w = _csv_writer(out)
    w.writerow(SCAN_COLUMNS)
    for r in rows:
        w.writerow([repr(r[c]) if isinstance(r[c], float) else r[c] for c in SCAN_COLUMNS])
    if args.relate_central_value:
        from scipy.stats import spearmanr

        ok = [r for r in rows if r["gsh_verdict"] == "plausible"]
        xs = [r["central_value"] for r in ok]
        ys = [r["delta_plus_nc"] - 0.5 for r in ok]
        if len(set(xs)) > 1 and len(set(ys)) > 1:
            rho = spearmanr(xs, ys).statistic
            print(f"# spearman(central value, delta_+ - 1/2) = {rho:.4f} over {len(ok)} GSH-plausible moduli",
                  file=sys.stderr)
        else:
            print("# rank correlation undefined (constant column)", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_modulus_args(sp):
    sp.add_argument("--q", type=int, required=True, help="field size (odd prime power)")
    sp.add_argument("--m", required=True, help='modulus, e.g. "T^3+T+4"')
    sp.add_argument("--ext-modulus", help="irreducible x-polynomial over F_p defining F_q (q = p^k, k > 1)")
    sp.add_argument("--reduce", action="store_true", help="reduce coefficients >= p instead of rejecting them")
    sp.add_argument("--no-cache", action="store_true", help="bypass the result cache")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffbias", description="Shanks-type bias for quadratic characters over F_q[T].")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("lfunc", help="L-polynomial, angles, RH residual, GSH verdict")
    _add_modulus_args(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_lfunc)

    sp = sub.add_parser("bias", help="CSV of the bias series b(n), B(n)")
    _add_modulus_args(sp)
    sp.add_argument("--kind", choices=("lambda", "mu"), default="lambda")
    sp.add_argument("--N", type=int, default=30, help="last degree n")
    sp.add_argument("--fast", type=int, metavar="n", help="single term n via the recurrence")
    sp.add_argument("--brute-force", action="store_true", help="count polynomials directly (slow oracle)")
    sp.add_argument("--limit", type=int, default=BRUTE_FORCE_LIMIT, help="brute-force polynomial budget")
    sp.add_argument("--normalized", action="store_true", help="add q^(-n/2)-normalized columns")
    sp.set_defaults(func=cmd_bias)

    sp = sub.add_parser("density", help="sign densities as JSON")
    _add_modulus_args(sp)
    sp.add_argument("--kind", choices=("lambda", "mu"), default="lambda")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--empirical", type=int, metavar="n", help="frequencies over degrees 1..n")
    mode.add_argument("--model", action="store_true", help="limiting densities from the oscillatory model")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("reproduce-tables", help="empirical densities of the two worked examples as CSV")
    sp.add_argument("--horizons", type=int, nargs="+", default=list(TABLE_HORIZONS))
    sp.set_defaults(func=cmd_reproduce_tables)

    sp = sub.add_parser("scan", help="all squarefree monic moduli of one degree, sorted by central value")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--ext-modulus")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--qmc-points", type=int, help="lattice size for moduli with three or more angles")
    sp.add_argument("--relate-central-value", action="store_true", help="report the rank correlation on stderr")
    sp.set_defaults(func=cmd_scan)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args, out)
    except (PolyParseError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrityError, ArithmeticError) as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
