"""Command line front end.

Exit codes for ``certify``: 0 the property holds, 1 it fails, 2 inconclusive,
3 unreadable matrix file, 4 property incompatible with the matrix, 5 any
other error (e.g. an enumeration guard was hit).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .almost_inj import (
    AlmostVerdict,
    almost_inj_bounds,
    real_almost_injectivity,
    untf_almost_injectivity,
    untf_check,
)
from .constructions import GOLDEN_RATIO, Family, FamilySpec
from .ensemble import Field, MeasurementEnsemble
from .errors import IncompatibleSpec, ParseError, PhaseInjError
from .explorer import GridSpec, Property, emit_csv, run_grid
from .injectivity import (
    Verdict,
    complement_property,
    complex_injectivity,
    complex_injectivity_m2,
    full_spark,
    hmw_test,
    injectivity_bounds,
    real_injectivity,
)

EXIT_HOLDS, EXIT_FAILS, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_PARSE, EXIT_INCOMPATIBLE, EXIT_ERROR = 3, 4, 5


@dataclass
class Outcome:
    verdict: str
    rule: str
    exit_code: int
    witness_subset: tuple[int, ...] | None = None
    has_pair: bool = False


# property name -> (required field or None, required M or None)
CERTIFY_PROPERTIES = {
    "real-injectivity": (Field.REAL, None),
    "complement-property": (Field.REAL, None),
    "full-spark": (None, None),
    "real-almost-injectivity": (Field.REAL, None),
    "untf": (None, None),
    "untf-almost-injectivity": (None, None),
    "complex-m2": (Field.COMPLEX, 2),
    "hmw": (Field.COMPLEX, 3),
    "complex-injectivity": (Field.COMPLEX, None),
}


def _from_injectivity(v) -> Outcome:
    code = {Verdict.INJECTIVE: EXIT_HOLDS, Verdict.NOT_INJECTIVE: EXIT_FAILS}.get(v.verdict, EXIT_INCONCLUSIVE)
    return Outcome(v.verdict.value, v.rule, code, v.subset, v.pair is not None)


def _from_almost(v) -> Outcome:
    code = {AlmostVerdict.ALMOST_INJECTIVE: EXIT_HOLDS, AlmostVerdict.NOT_ALMOST_INJECTIVE: EXIT_FAILS}.get(
        v.verdict, EXIT_INCONCLUSIVE
    )
    return Outcome(v.verdict.value, v.rule, code, v.subset)


def certify(phi: MeasurementEnsemble, prop: str) -> Outcome:
    if prop not in CERTIFY_PROPERTIES:
        raise IncompatibleSpec(f"unknown property {prop!r}")
    need_field, need_m = CERTIFY_PROPERTIES[prop]
    if need_field is not None and phi.field is not need_field:
        raise IncompatibleSpec(f"{prop} requires a {need_field.value} ensemble")
    if need_m is not None and phi.M != need_m:
        raise IncompatibleSpec(f"{prop} requires M={need_m}, got M={phi.M}")

    if prop == "real-injectivity":
        return _from_injectivity(real_injectivity(phi))
    if prop == "complement-property":
        ok, s = complement_property(phi)
        return Outcome("Holds" if ok else "Fails", "complement property", EXIT_HOLDS if ok else EXIT_FAILS, s)
    if prop == "full-spark":
        if phi.N < phi.M:
            raise IncompatibleSpec("full spark needs N >= M")
        ok = full_spark(phi)
        return Outcome("FullSpark" if ok else "NotFullSpark", "all M x M minors", EXIT_HOLDS if ok else EXIT_FAILS)
    if prop == "real-almost-injectivity":
        return _from_almost(real_almost_injectivity(phi))
    if prop == "untf":
        r = untf_check(phi)
        rule = (
            f"row norm dev {r.row_norm_deviation:.3g}, row orth dev {r.row_orthogonality_deviation:.3g}, "
            f"column norm dev {r.column_norm_deviation:.3g}"
        )
        return Outcome("UNTF" if r.is_untf else "NotUNTF", rule, EXIT_HOLDS if r.is_untf else EXIT_FAILS)
    if prop == "untf-almost-injectivity":
        if not untf_check(phi).is_untf:
            raise IncompatibleSpec("matrix is not a unit norm tight frame")
        return _from_almost(untf_almost_injectivity(phi))
    if prop == "complex-m2":
        return _from_injectivity(complex_injectivity_m2(phi))
    if prop == "hmw":
        return _from_injectivity(hmw_test(phi))
    return _from_injectivity(complex_injectivity(phi))


def _cmd_certify(args) -> int:
    try:
        phi = MeasurementEnsemble.load(args.infile)
    except (ParseError, OSError, PhaseInjError) as exc:
        print(f"error: cannot read {args.infile}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        out = certify(phi, args.property)
    except IncompatibleSpec as exc:
        print(f"error: incompatible: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except PhaseInjError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    witness = None if out.witness_subset is None else [i + 1 for i in out.witness_subset]
    if args.json:
        record = {
            "property": args.property,
            "field": phi.field.value,
            "M": phi.M,
            "N": phi.N,
            "verdict": out.verdict,
            "rule": out.rule,
            "witness_subset": witness,
            "exit_code": out.exit_code,
        }
        print(json.dumps(record))
    else:
        print(out.verdict)
        print(f"rule: {out.rule}")
        if witness is not None:
            print("witness: S = {" + ", ".join(map(str, witness)) + "} (1-based columns)")
        if out.has_pair:
            print("witness: verified pair of signals with equal intensities")
    return out.exit_code


def _cmd_construct(args) -> int:
    params = {
        "circle_param": GOLDEN_RATIO if args.param is None else args.param,
        "seed": 0 if args.seed is None else args.seed,
        "field": args.field,
    }
    try:
        phi = FamilySpec(Family(args.family), args.m, args.n, params).build()
    except (ValueError, PhaseInjError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    phi.save(args.out)
    print(f"wrote {args.family} ensemble ({phi.field.value}, M={phi.M}, N={phi.N}) to {args.out}")
    return 0


def _int_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None


def _u64(text: str) -> int:
    v = int(text, 10)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a decimal 64-bit unsigned integer")
    return v


def _cmd_explore(args) -> int:
    try:
        spec = GridSpec(args.field, args.property, args.m_range, args.n_range, args.trials, args.seed)
        results = run_grid(spec, workers=args.workers)
    except IncompatibleSpec as exc:
        print(f"error: incompatible: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    emit_csv(results, args.out)
    label = " [necessity-only]" if spec.property.necessity_only else ""
    for r in results:
        print(f"M={r.M:<3d} N={r.N:<3d} {r.successes:>5d}/{r.trials} succeeded{label}")
    print(f"wrote {len(results)} cells to {args.out}")
    return 0


def _cmd_bounds(args) -> int:
    try:
        inj = injectivity_bounds(args.field, args.m)
        alm = almost_inj_bounds(args.field, args.m)
    except PhaseInjError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for name, rep in (("injectivity", inj), ("almost injectivity", alm)):
        print(f"{name} ({rep.field.value}, M={rep.M}):")
        print(f"  necessary N >= {rep.necessary_N}")
        print(f"  generically sufficient N = {rep.generic_sufficient_N}")
        if rep.conjectured_N is not None:
            print(f"  conjectured transition N = {rep.conjectured_N}")
        for note in rep.notes:
            print(f"  - {note}")
    return 0


class _Parser(argparse.ArgumentParser):
    # usage errors must not collide with the verdict exit codes 0-2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="phaseinj", description="Injectivity certificates for intensity measurements.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="certify a property of a matrix file")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--property", required=True, help="one of: " + ", ".join(sorted(CERTIFY_PROPERTIES)))
    c.add_argument("--json", action="store_true", help="print a machine-readable record")
    c.set_defaults(func=_cmd_certify)

    k = sub.add_parser("construct", help="write an explicit ensemble as a matrix file")
    k.add_argument("--family", required=True, choices=[f.value for f in Family])
    k.add_argument("--m", type=int, required=True)
    k.add_argument("--n", type=int)
    k.add_argument("--seed", type=_u64)
    k.add_argument("--param", type=float)
    k.add_argument("--field", choices=[f.value for f in Field], default="complex")
    k.add_argument("--out", required=True)
    k.set_defaults(func=_cmd_construct)

    e = sub.add_parser("explore", help="Monte Carlo sweep over an (M, N) grid")
    e.add_argument("--field", required=True, choices=[f.value for f in Field])
    e.add_argument("--property", required=True, choices=[q.value for q in Property])
    e.add_argument("--m-range", required=True, type=_int_range)
    e.add_argument("--n-range", required=True, type=_int_range)
    e.add_argument("--trials", required=True, type=int)
    e.add_argument("--seed", required=True, type=_u64)
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--out", required=True)
    e.set_defaults(func=_cmd_explore)

    b = sub.add_parser("bounds", help="proven and conjectured thresholds")
    b.add_argument("--field", required=True, choices=[f.value for f in Field])
    b.add_argument("--m", type=int, required=True)
    b.set_defaults(func=_cmd_bounds)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
