"""Command-line front end.

Every verb prints JSON on stdout. Exit status is 0 on success, 1 on a hard
error (unreadable or malformed input, search cap exceeded, failed batch
files without ``--keep-going``) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .algebra import rank
from .classifier import classify, emit_closed_forms, verify_closed_forms
from .derivations import derivations, float_check
from .errors import EvoderError
from .generate import CASES, generate
from .io import build_report, classification_to_dict, jsonable, read_matrix_file, run_batch, serialize_matrix


def _emit(obj, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(obj, indent=2) + "\n")


def _cmd_rank(args) -> int:
    E = read_matrix_file(args.file)
    _emit({"n": E.n, "rank": rank(E)})
    return 0


def _cmd_der(args) -> int:
    E = read_matrix_file(args.file)
    space = derivations(E)
    _emit({"n": E.n, "dim": space.dim, "basis": jsonable(space.basis)})
    return 0


def _cmd_classify(args) -> int:
    E = read_matrix_file(args.file)
    _emit(classification_to_dict(classify(E)))
    return 0


def _cmd_verify(args) -> int:
    E = read_matrix_file(args.file)
    space = derivations(E)
    res = classify(E)
    results = []
    for match in (res,) + res.alternatives:
        fam = emit_closed_forms(match, E)
        check = verify_closed_forms(E, fam, space)
        results.append(
            {
                "tag": match.tag.value,
                "generators": jsonable(fam.generators),
                "free_parameters": fam.free_parameter_description,
                **check.to_dict(),
            }
        )
    _emit({"dim": space.dim, "results": results})
    return 0


def _cmd_float_check(args) -> int:
    E = read_matrix_file(args.file)
    report = float_check(E, derivations(E), threshold=args.threshold)
    _emit(report.to_dict())
    return 0


def _cmd_report(args) -> int:
    E = read_matrix_file(args.file)
    rep = build_report(E, path=str(args.file), with_float_check=args.float_check)
    _emit(rep.to_dict())
    return 0


def _cmd_gen(args) -> int:
    inst = generate(args.case, args.n, args.seed, k=args.k, rank=args.rank, m=args.m)
    meta = {
        "case": inst.case,
        "seed": inst.seed,
        "params": jsonable(inst.params),
        "perm": list(inst.perm),
        "generator": inst.generator,
    }
    text = serialize_matrix(inst.algebra, meta) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_batch(args) -> int:
    exclude = [args.report] if args.report else []
    result = run_batch(args.dir, jobs=args.jobs, with_float_check=args.float_check, exclude=exclude)
    text = result.to_json(indent=2) + "\n"
    if args.report:
        Path(args.report).write_text(text)
        _emit(result.summary)
    else:
        sys.stdout.write(text)
    if result.errors and not args.keep_going:
        for rep in result.reports:
            if rep.error:
                print(f"{rep.path}: {rep.error['type']}: {rep.error['message']}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evoder", description="Exact derivations of evolution algebras over Q(i)."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_text in (
        ("rank", _cmd_rank, "rank of the structure matrix"),
        ("der", _cmd_der, "basis of the derivation algebra"),
        ("classify", _cmd_classify, "canonical form under basis permutation"),
        ("verify", _cmd_verify, "check closed-form families against the solver"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", type=Path)
        p.set_defaults(func=fn)

    p = sub.add_parser("float-check", help="double-precision cross-check of the solver")
    p.add_argument("file", type=Path)
    p.add_argument("--threshold", type=float, default=1e-9)
    p.set_defaults(func=_cmd_float_check)

    p = sub.add_parser("report", help="full JSON report for one file")
    p.add_argument("file", type=Path)
    p.add_argument("--float-check", action="store_true")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("gen", help="seeded random instance of a structural case")
    p.add_argument("--case", required=True, help=f"one of {', '.join(CASES)} or random-rank-R")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, help="form parameter (s for a1; k for a2, a5, ek)")
    p.add_argument("--m", type=int, help="second a2 parameter")
    p.add_argument("--rank", type=int, help="target rank for random-rank")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("batch", help="report on every *.json matrix file in a directory")
    p.add_argument("dir", type=Path)
    p.add_argument("--report", type=Path, help="write the full JSON report here")
    p.add_argument("--keep-going", action="store_true", help="exit 0 even if some files fail")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--float-check", action="store_true")
    p.set_defaults(func=_cmd_batch)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EvoderError, ValueError, OSError) as exc:
        print(f"evoder: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
