"""Command line interface.

Exit status: 0 on success / consistent input, 1 when an inconsistency is
detected, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from math import lcm
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .completion import IncompatibleTables, complete_table, merge_many
from .exterior_det import det_s2, det_s2_companion
from .oracle import GeneratorConfig, gen_random_joint
from .probmodel import conditional_matrix
from .reconstruct import (
    build_interval_model,
    check_pair_witness,
    check_stochastic,
    minimal_population,
    reconstruct_points,
    solve_weights,
)
from .s2rank import S2Error, TooSmall, ZeroFamily, s2_rank_is_one, selectors
from .tableio import (
    ParseError,
    TableDocument,
    format_rational,
    parse_refinement_map,
    parse_table,
    serialize_table,
)

OK, INCONSISTENT, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x: Fraction) -> str:
    return format_rational(x)


def _load(path: str, fmt: str | None = None) -> TableDocument:
    if fmt is None:
        fmt = "json" if path.lower().endswith(".json") else "csv"
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_table(text, fmt)


def _load_family(path: str, fmt: str | None = None):
    """Conditional tables load as-is; joint count tables are turned into
    their conditional matrix."""
    doc = _load(path, fmt)
    if doc.kind == "joint-counts":
        return conditional_matrix(doc.to_joint())
    return doc.to_family()


def _pair_label(p) -> str:
    return f"({p[0]},{p[1]})"


def cmd_eval(args, out: TextIO) -> int:
    fam = _load_family(args.table, args.input_format)
    if fam.s != 4 or fam.d != 2:
        raise UsageError(f"eval needs a 2x6 table (s=4, d=2), got s={fam.s}, d={fam.d}")
    cols = [fam[p] for p in fam.pairs()]
    v1 = det_s2(cols)
    v2 = det_s2_companion(cols)
    out.write(f"det_s2 (12-term formula)    = {_fmt(v1)}\n")
    out.write(f"det_s2 (6x6 companion det)  = {_fmt(v2)}\n")
    if v1 != v2:
        out.write("formulas DISAGREE\n")
        return INCONSISTENT
    return OK if v1 == 0 else INCONSISTENT


def _check_report(fam, out: TextIO) -> bool | None:
    out.write(f"s={fam.s} d={fam.d}\n")
    out.write(f"stochastic: {'yes' if check_stochastic(fam) else 'no'}\n")
    try:
        ok, violations = s2_rank_is_one(fam)
    except TooSmall as exc:
        out.write(f"verdict: vacuous ({exc})\n")
        return None
    n = sum(1 for _ in selectors(fam.s, fam.d))
    out.write(f"2-minors checked: {n}\n")
    for v in violations:
        q, c = v.selector.quadruple, v.selector.coords
        out.write(f"  minor X={q} Y={c}: det_s2 = {_fmt(v.value)}\n")
    out.write(f"verdict: {'S2-rank 1' if ok else 'NOT S2-rank 1'} ({len(violations)} violations)\n")
    return ok


def cmd_check(args, out: TextIO) -> int:
    fam = _load_family(args.table, args.input_format)
    try:
        ok = _check_report(fam, out)
    except ZeroFamily as exc:
        out.write(f"verdict: invalid ({exc})\n")
        return INCONSISTENT
    return INCONSISTENT if ok is False else OK


def cmd_audit(args, out: TextIO) -> int:
    status = OK
    for path in args.tables:
        fam = _load_family(path, args.input_format)
        problems = []
        if not check_stochastic(fam):
            problems.append("not stochastic")
        try:
            ok, violations = s2_rank_is_one(fam)
            if not ok:
                vals = ", ".join(_fmt(v.value) for v in violations[:3])
                problems.append(f"S2-rank != 1 ({len(violations)} nonzero minors: {vals})")
        except TooSmall:
            pass
        except ZeroFamily:
            problems.append("all-zero table")
        if not problems:
            try:
                solve_weights(fam)
            except S2Error as exc:
                problems.append(f"no weights: {exc}")
        if problems:
            status = INCONSISTENT
            out.write(f"{path}: WRONG - {'; '.join(problems)}\n")
        else:
            out.write(f"{path}: consistent\n")
    return status


def cmd_reconstruct(args, out: TextIO) -> int:
    fam = _load_family(args.table, args.input_format)
    try:
        w = solve_weights(fam)
        pts = reconstruct_points(fam, w)
        pop = minimal_population(fam, w)
    except S2Error as exc:
        out.write(f"reconstruction failed: {type(exc).__name__}: {exc}\n")
        return INCONSISTENT
    if fam.s >= 4:
        witness, failures = check_pair_witness(fam)
        out.write(f"pair-witness condition: {'holds' if witness else f'fails ({len(failures)} cases)'}\n")
    pairs = fam.pairs()
    out.write("weights (lambda_1s = 1):\n")
    for p in pairs:
        out.write(f"  {_pair_label(p)}: {_fmt(w[p])}  (x N = {_fmt(w[p] * pop.N)})\n")
    out.write("distribution vectors:\n")
    for i, pt in enumerate(pts, start=1):
        out.write(f"  p_{i} = ({', '.join(_fmt(x) for x in pt)})\n")
    out.write(f"minimal population N = {pop.N}\n")
    out.write("pair counts:\n")
    out.write("pair," + ",".join(_pair_label(p) for p in pairs) + "\n")
    for a, row in enumerate(pop.count_rows(), start=1):
        out.write(f"Y={a}," + ",".join(map(str, row)) + "\n")
    if args.joint:
        counts = [[pop.counts[(x, a)] for x in range(2, fam.s + 1)] for a in range(1, fam.d + 1)]
        out.write("joint counts:\n")
        out.write(serialize_table(TableDocument.from_counts(counts), args.format))
    if args.intervals:
        model = build_interval_model(fam, w, pts)
        out.write("interval model:\n")
        for seg in model.segments:
            out.write(f"  ({_fmt(seg.lo)}, {_fmt(seg.hi)}]  X={seg.x} Y={seg.y}\n")
    return OK


def cmd_complete(args, out: TextIO) -> int:
    doc = _load(args.table, args.input_format)
    pf = doc.to_partial()
    try:
        res = complete_table(pf)
    except S2Error as exc:
        out.write(f"# completion failed: {type(exc).__name__}: {exc}\n")
        return INCONSISTENT
    if args.format == "csv":
        filled = ", ".join(f"{_pair_label(p)}[{a + 1}]" for p, a in res.inferred) or "none"
        out.write(f"# filled: {filled}\n")
        out.write("# weights: " + " ".join(f"{_pair_label(p)}={_fmt(v)}" for p, v in res.weights.items()) + "\n")
    out.write(serialize_table(TableDocument.from_family(res.family, doc.labels), args.format))
    return OK


def cmd_merge(args, out: TextIO) -> int:
    docs = [_load(p, args.input_format) for p in args.tables]
    rm = parse_refinement_map(Path(args.map).read_text())
    tables = [d.to_partial() for d in docs]
    try:
        pf, report = merge_many(tables, rm)
    except IncompatibleTables as exc:
        out.write("# incompatible tables:\n")
        for pair, a, b in exc.conflicts:
            sa = ",".join(format_rational(x) for x in a)
            sb = ",".join(format_rational(x) for x in b)
            out.write(f"#   {_pair_label(pair)}: [{sa}] vs [{sb}]\n")
        return INCONSISTENT
    labels = docs[0].labels
    if args.complete:
        try:
            res = complete_table(pf)
        except S2Error as exc:
            out.write(f"# completion failed: {type(exc).__name__}: {exc}\n")
            return INCONSISTENT
        out.write(serialize_table(TableDocument.from_family(res.family, labels), args.format))
        return OK
    if args.format == "csv":
        unknown = ", ".join(map(_pair_label, report.unknown)) or "none"
        out.write(f"# unknown pairs: {unknown}\n")
    out.write(serialize_table(TableDocument.from_partial(pf, labels), args.format))
    return OK


def cmd_gen_joint(args, out: TextIO) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("S2RANK_SEED", "0"))
    cfg = GeneratorConfig(seed, (args.s, args.s), (args.d, args.d), args.denominator)
    joint = gen_random_joint(cfg)
    if args.conditional:
        doc = TableDocument.from_family(conditional_matrix(joint))
    else:
        table = joint.table()
        scale = lcm(*(x.denominator for row in table for x in row))
        doc = TableDocument.from_counts([[x * scale for x in row] for row in table])
    out.write(serialize_table(doc, args.format))
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="s2cpm", description="S^2-rank tools for conditional probability tables")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--input-format", choices=("csv", "json"), default=None,
                       help="input format (default: from file extension)")
        return p

    p = add("eval", cmd_eval, "det^S2 of a 2x6 table by both formulas")
    p.add_argument("table")
    p = add("check", cmd_check, "S^2-rank-1 audit listing every nonzero 2-minor")
    p.add_argument("table")
    p = add("audit", cmd_audit, "flag which of several tables are inconsistent")
    p.add_argument("tables", nargs="+")
    p = add("reconstruct", cmd_reconstruct, "weights, distribution vectors and minimal population")
    p.add_argument("table")
    p.add_argument("--intervals", action="store_true", help="dump the interval model on (0,1]")
    p.add_argument("--joint", action="store_true", help="also print the joint count table")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p = add("complete", cmd_complete, "fill '?' cells of a partial table")
    p.add_argument("table")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p = add("merge", cmd_merge, "merge tables over a refined index set")
    p.add_argument("tables", nargs="+")
    p.add_argument("--map", required=True, help="JSON refinement map file")
    p.add_argument("--complete", action="store_true", help="complete the merged table")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p = add("gen-joint", cmd_gen_joint, "seeded random joint distribution")
    p.add_argument("--seed", type=int, default=None, help="default: $S2RANK_SEED or 0")
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--denominator", type=int, default=12)
    p.add_argument("--conditional", action="store_true", help="emit the conditional matrix instead")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args, out)
    except (ParseError, UsageError, ValueError, OSError, S2Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    raise SystemExit(main())
