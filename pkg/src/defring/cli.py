"""Command-line front end.

Exit codes: 0 success, 2 parse / I/O / unknown fixture, 3 invalid
presentation, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .deform import InconsistentInput, compare_surjection, ring_presentation, universal_matrices
from .fox import fox_matrix, restrict_to_xinf
from .presentation import ParseError, Presentation, ValidationError, parse_presentation, validate
from .verify import check_action_lemma, check_relations

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_VERIFY = 0, 2, 3, 4

FIXTURES = (
    "cyclotomic_regular",
    "cyclotomic_691",
    "cyclotomic_691_g",
    "cyclotomic_augmented",
    "wingberg_tame",
    "wingberg_wild",
)


class UsageError(Exception):
    pass


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise UsageError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return resources.files("defring.fixtures").joinpath(f"{name}.dsl").read_text()


def read_source(src: str) -> str:
    """A path, ``-`` for standard input, or ``fixture:NAME``."""
    if src == "-":
        return sys.stdin.read()
    if src.startswith("fixture:"):
        return fixture_text(src.split(":", 1)[1])
    try:
        with open(src) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {src}: {exc.strerror}") from None


def load(src: str, args) -> Presentation:
    pres = parse_presentation(read_source(src))
    if args.p is not None or args.prec is not None or args.deg is not None:
        pres = pres.with_params(args.p, args.prec, args.deg)
    return pres


def emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_compute(args) -> int:
    pres = load(args.input, args)
    rp = ring_presentation(pres)
    emit(args, rp.to_json() if args.json else str(rp))
    return EXIT_OK


def cmd_fox(args) -> int:
    pres = load(args.input, args)
    M = fox_matrix(pres)
    if args.xinf:
        M = restrict_to_xinf(M, pres.n)
    if args.json:
        emit(args, json.dumps(M.to_dict(), indent=2))
        return EXIT_OK
    lines = [f"# p = {M.p}, prec = {M.N}, deg = {M.D}", "# rows = generators, columns = relations"]
    for i, row in enumerate(M.rows):
        for j, col in enumerate(M.cols):
            lines.append(f"d {col} / d {row} = {M.entries[i][j]}")
    emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    pres = load(args.input, args)
    rp = ring_presentation(pres)
    report = check_relations(pres, rp, universal_matrices(pres, rp))
    ok = report.passed
    payload = report.to_dict()
    text = str(report)
    if args.lemmas:
        lemmas = [check_action_lemma(c, pres.p, pres.N, pres.D) for c in ("i", "ii", "iii")]
        ok = ok and all(r.passed for r in lemmas)
        payload["action_lemma"] = {r.case: r.passed for r in lemmas}
        text += "\n" + "\n".join(str(r) for r in lemmas)
    emit(args, json.dumps(payload, indent=2) if args.json else text)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_compare(args) -> int:
    gs = load(args.gs, args)
    g = load(args.g, args)
    rep = compare_surjection(gs, g)
    emit(args, json.dumps(rep.to_dict(), indent=2) if args.json else str(rep))
    return EXIT_OK


def cmd_fixture(args) -> int:
    if args.list or not args.name:
        emit(args, "\n".join(FIXTURES))
        return EXIT_OK
    text = fixture_text(args.name)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    pres = parse_presentation(read_source(args.input), check=False)
    found = validate(pres)
    if args.json:
        emit(args, json.dumps([{"code": v.code, "message": v.message, "pipeline_only": v.blocks_pipeline_only} for v in found], indent=2))
    else:
        emit(args, "\n".join(str(v) for v in found) or "ok")
    return EXIT_INVALID if found else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="override the prime")
    common.add_argument("--prec", type=int, help="work modulo p^PREC")
    common.add_argument("--deg", type=int, help="truncate series above this total degree")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", metavar="FILE", help="write output to FILE")

    ap = argparse.ArgumentParser(prog="defring", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="ring presentation Z_p[[Y]]/I")
    c.add_argument("input", help="DSL file, '-' for stdin, or fixture:NAME")
    c.set_defaults(func=cmd_compute)

    f = sub.add_parser("fox", parents=[common], help="projected Fox matrix")
    f.add_argument("input")
    f.add_argument("--xinf", action="store_true", help="keep only the X_inf rows")
    f.set_defaults(func=cmd_fox)

    v = sub.add_parser("verify", parents=[common], help="evaluate relations on universal matrices")
    v.add_argument("input")
    v.add_argument("--lemmas", action="store_true", help="also check the commutator closed forms")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("compare", parents=[common], help="variable map R_GS -> R_G")
    m.add_argument("gs", help="presentation of G_S")
    m.add_argument("g", help="presentation of the quotient G")
    m.set_defaults(func=cmd_compare)

    x = sub.add_parser("fixture", parents=[common], help="print a bundled fixture")
    x.add_argument("name", nargs="?")
    x.add_argument("--list", action="store_true")
    x.set_defaults(func=cmd_fixture)

    k = sub.add_parser("validate", parents=[common], help="list violated requirements")
    k.add_argument("input")
    k.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, InconsistentInput) as exc:
        print(f"invalid presentation: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, KeyError) as exc:
        print(f"invalid presentation: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
