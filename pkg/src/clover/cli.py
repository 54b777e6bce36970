"""
Command-line front end.

Exit status: 0 success, 1 verification failure, 2 input error, 3 resource
limit.  ``CLOVER_THREADS`` bounds the number of worker processes.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .enumeration import DEFAULT_DEGREE_LIMIT, ResourceLimitError, enumerate_basis
from .graphs import GraphError, canonicalize, expand, format_graph, graph_from_key, parse_graph
from .homology import ModelError, closed_rational_model, load_model
from .moves import apply_move_to_model, parse_move, verify_isomorphism
from .quotient import GROUPS, group_quotient, relation_system
from .relations import RelationSet
from .verification import model_label, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

__all__ = ["RankRow", "RankTable", "rank_table", "parse_machine_table", "main"]


@dataclass(frozen=True, order=True)
class RankRow:
    degree: int
    group: str
    ring: str
    free_rank: int
    torsion: tuple
    generators: int
    relations: int
    seconds: float = field(default=0.0, compare=False)


@dataclass
class RankTable:
    label: str
    rows: list = field(default_factory=list)

    def lines(self, fmt="text", timing=True):
        rows = sorted(self.rows, key=lambda r: (r.degree, GROUPS.index(r.group)))
        if fmt == "machine":
            yield f"table model={self.label}"
            for r in rows:
                line = (f"degree={r.degree} group={r.group} ring={r.ring} free_rank={r.free_rank} "
                        f"torsion={','.join(map(str, r.torsion))} generators={r.generators} "
                        f"relations={r.relations}")
                yield line + (f" seconds={r.seconds:.3f}" if timing else "")
            return
        yield f"# model {self.label}"
        head = f"{'degree':>6} {'group':>5} {'ring':>4} {'rank':>5} {'torsion':<16} {'gens':>6} {'rels':>7}"
        yield head + (f" {'seconds':>8}" if timing else "")
        for r in rows:
            tors = " ".join(f"Z/{d}" for d in r.torsion) or "-"
            line = (f"{r.degree:>6} {r.group:>5} {r.ring:>4} {r.free_rank:>5} {tors:<16} "
                    f"{r.generators:>6} {r.relations:>7}")
            yield line + (f" {r.seconds:>8.3f}" if timing else "")

    def __str__(self):
        return "\n".join(self.lines())


def parse_machine_table(text: str) -> RankTable:
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or not lines[0].startswith("table "):
        raise ValueError("not a machine-format rank table")
    label = lines[0].split("model=", 1)[1]
    table = RankTable(label)
    for line in lines[1:]:
        kv = dict(part.split("=", 1) for part in line.split())
        table.rows.append(RankRow(
            int(kv["degree"]), kv["group"], kv["ring"], int(kv["free_rank"]),
            tuple(int(t) for t in kv["torsion"].split(",") if t),
            int(kv["generators"]), int(kv["relations"]), float(kv.get("seconds", 0.0)),
        ))
    return table


def _threads() -> int:
    raw = os.environ.get("CLOVER_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CLOVER_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"CLOVER_THREADS must be a positive integer, got {raw!r}")
    return n


def _pmap(fn, jobs):
    n = _threads()
    if n == 1 or len(jobs) < 2:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(n, len(jobs))) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _rank_job(model, degree, group, ring, degree_limit, legs=None):
    q = group_quotient(model, degree, group, ring, degree_limit=degree_limit, legs=legs)
    return RankRow(degree, group, q.ring, q.free_rank, q.torsion, q.generator_count,
                   q.relation_count, q.wall_clock)


def rank_table(model, degree_max, ring="Q", groups=GROUPS, degree_limit=DEFAULT_DEGREE_LIMIT,
               label=None, legs=None) -> RankTable:
    """Ranks for degrees 0..degree_max.

    ``legs`` restricts to generators with those leg counts.  That is exact
    for B, A and Aphi; for Ao it bounds the rank of the image of the sector
    from above, since OBR mixes leg counts.
    """
    if degree_limit is not None and degree_max > degree_limit:
        raise ResourceLimitError(f"degree {degree_max} exceeds the limit {degree_limit}")
    jobs = [(model, d, g, ring, degree_limit, legs) for d in range(degree_max + 1) for g in groups]
    rows = sorted(_pmap(_rank_job, jobs), key=lambda r: (r.degree, GROUPS.index(r.group)))
    return RankTable(label or model_label(model), rows)


# ---------------------------------------------------------------------------


def _model(args):
    if getattr(args, "model", None):
        return load_model(args.model).validate()
    spec = getattr(args, "closed", None)
    if spec is None:
        raise ValueError("give --model FILE or --closed B1[:T1,T2,...]")
    b1, _, tors = spec.partition(":")
    return closed_rational_model(int(b1), [int(t) for t in tors.split(",") if t]).validate()


def _limit(args):
    return None if args.unsafe_degree else DEFAULT_DEGREE_LIMIT


def _ring(args):
    return "Z" if getattr(args, "integral", False) else "Q"


def _emit(lines):
    out = "\n".join(lines)
    if out:
        print(out)


def cmd_enumerate(args):
    if args.model or args.closed:
        alphabet = _model(args).alphabet
    else:
        alphabet = tuple(a for a in args.alphabet.split(",") if a)
    legs = None if args.legs is None else [int(x) for x in args.legs.split(",") if x]
    basis = enumerate_basis(args.degree, alphabet, connected_only=args.connected_only,
                            star=args.star, legs=legs, degree_limit=_limit(args))
    if args.format == "machine":
        lines = [f"basis degree={args.degree} alphabet={','.join(alphabet)} "
                 f"generators={len(basis.generators)} degenerate={len(basis.degenerates)}"]
        lines += [f"graph degenerate={int(cg.degenerate)} {format_graph(cg.graph())}" for cg in basis.all]
    else:
        lines = [f"# degree {args.degree} over [{','.join(alphabet)}]: "
                 f"{len(basis.generators)} generators, {len(basis.degenerates)} degenerate"]
        lines += [("  (degenerate) " if cg.degenerate else "  ") + format_graph(cg.graph()) for cg in basis.all]
    _emit(lines)
    return EXIT_OK


def cmd_relations(args):
    model = _model(args)
    sel = RelationSet.parse(args.set)
    group = "Ao" if "obr" in sel else "A" if "br" in sel else "B"
    basis, rels = relation_system(model, args.degree, group, selection=sel,
                                  connected_only=args.connected_only, degree_limit=_limit(args))
    if args.dump_matrix:
        cols = list(basis.all)
        index = {cg: j for j, cg in enumerate(cols)}
        rows = [[(index[cg], c) for cg, c in v.items()] for v in rels]
        if "as" in sel:
            rows += [[(index[cg], 2)] for cg in basis.degenerates]
        with open(args.dump_matrix, "w") as fh:
            fh.write(f"# {len(rows)} rows, {len(cols)} columns; one 'row col value' triplet per line\n")
            for i, row in enumerate(rows):
                for j, c in row:
                    fh.write(f"{i} {j} {c}\n")
    if args.list:
        for v in rels:
            terms = " ".join(f"{c:+d}*[{format_graph(cg.graph())}]" for cg, c in v.items())
            print(terms if args.format == "text" else f"relation {terms}")
    if args.format == "machine":
        _emit([f"relations degree={args.degree} set={','.join(sorted(sel.selection))} "
               f"generators={len(basis.all)} relations={len(rels)} degenerate={len(basis.degenerates)}"])
    else:
        _emit([f"degree {args.degree}, relations {{{','.join(sorted(sel.selection))}}}: "
               f"{len(rels)} relation vectors on {len(basis.all)} generators "
               f"({len(basis.degenerates)} degenerate, 2G = 0 over Z)"])
    return EXIT_OK


def cmd_ranks(args):
    model = _model(args)
    groups = tuple(g for g in args.groups.split(",") if g) if args.groups else GROUPS
    for g in groups:
        if g not in GROUPS:
            raise ValueError(f"unknown group {g!r}; choose from {GROUPS}")
    legs = None if args.legs is None else [int(x) for x in args.legs.split(",") if x]
    table = rank_table(model, args.degree_max, _ring(args), groups, _limit(args), legs=legs)
    _emit(table.lines(args.format, timing=not args.no_timing))
    return EXIT_OK


def cmd_move(args):
    model = _model(args)
    mv = parse_move(args.apply)
    target = apply_move_to_model(model, mv)
    if not args.verify:
        print(target.dumps())
        return EXIT_OK
    ring = "Q" if args.rational else "Z"
    report = verify_isomorphism(mv, args.degree, model, ring, degree_limit=_limit(args))
    if args.format == "machine":
        lines = [l.replace("  witness ", "witness ") for l in report.lines()]
    else:
        lines = list(report.lines())
    _emit(lines)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify(args):
    if args.suite != "corollaries":
        raise ValueError(f"unknown suite {args.suite!r}")
    model = _model(args)
    if _limit(args) is not None and args.degree_max > _limit(args):
        raise ResourceLimitError(f"degree {args.degree_max} exceeds the limit {_limit(args)}")
    reports = run_suite(model, args.degree_max, ring=_ring(args), degree_limit=_limit(args))
    lines = []
    for r in sorted(reports, key=lambda r: r.name):
        lines += list(r.lines(args.format, verbose=args.verbose))
    failed = any(r.status == "fail" for r in reports)
    lines.append(f"result={'fail' if failed else 'pass'}" if args.format == "machine"
                 else f"overall: {'fail' if failed else 'pass'}")
    _emit(lines)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_expand(args):
    g = parse_graph(args.graph)
    v = expand(g)
    if args.format == "machine":
        lines = [f"terms={len(v.items())}"]
        lines += [f"coefficient={c} degenerate={int(cg.degenerate)} graph={format_graph(cg.graph())}"
                  for cg, c in v.items()]
    else:
        lines = []
        if all(isinstance(l, str) for l in g.legs):
            cg, sign = canonicalize(g)
            lines.append(f"canonical: {format_graph(graph_from_key(cg.key))}")
            lines.append(f"sign: {'+1' if sign > 0 else '-1'}" + ("  (degenerate: 2G = 0)" if cg.degenerate else ""))
        lines.append(f"expansion: {len(v.items())} term(s)")
        lines += [f"  {c:+d} * {format_graph(cg.graph())}" for cg, c in v.items()]
    _emit(lines)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="clover", description="Graph groups of spanning links: ranks, moves, checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, model=True):
        sp.add_argument("--format", choices=("text", "machine"), default="text")
        sp.add_argument("--unsafe-degree", action="store_true",
                        help=f"allow degrees above {DEFAULT_DEGREE_LIMIT}")
        if model:
            sp.add_argument("--model", help="model JSON file")
            sp.add_argument("--closed", metavar="B1[:T,...]",
                            help="built-in closed model, e.g. 1 or 1:3 or 0:2,4")

    sp = sub.add_parser("enumerate", help="list generator isomorphism classes")
    common(sp)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--colors", "--alphabet", dest="alphabet", default="",
                    help="comma-separated colors (when no model is given)")
    sp.add_argument("--connected-only", action="store_true")
    sp.add_argument("--star", action="store_true", help="graphs with exactly one star leg")
    sp.add_argument("--legs", help="allowed leg counts, comma-separated")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("relations", help="count relation vectors, optionally dump the matrix")
    common(sp)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--set", default="as,ihx,loop,br,obr")
    sp.add_argument("--connected-only", action="store_true")
    sp.add_argument("--dump-matrix", metavar="PATH", help="write the relation matrix as 'row col value' triplets")
    sp.add_argument("--list", action="store_true", help="print every relation vector")
    sp.set_defaults(func=cmd_relations)

    sp = sub.add_parser("ranks", help="rank table of B, A, Ao and Aphi")
    common(sp)
    sp.add_argument("--degree-max", type=int, required=True)
    sp.add_argument("--integral", action="store_true", help="compute over Z (torsion)")
    sp.add_argument("--groups", help="subset of B,A,Ao,Aphi")
    sp.add_argument("--legs", help="leg-count sector, e.g. 0 for the legless sub-table")
    sp.add_argument("--no-timing", action="store_true")
    sp.set_defaults(func=cmd_ranks)

    sp = sub.add_parser("move", help="apply a move; with --verify check the induced isomorphism")
    common(sp)
    sp.add_argument("--apply", required=True, help="m1:x:y:+1 | m2:x:-1 | m3:insert:b0:x=1 | m3:delete:b0")
    sp.add_argument("--degree", type=int, default=2)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--rational", action="store_true", help="verify over Q instead of Z")
    sp.set_defaults(func=cmd_move)

    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", default="corollaries")
    sp.add_argument("--degree-max", type=int, required=True)
    sp.add_argument("--integral", action="store_true")
    sp.add_argument("--verbose", action="store_true", help="list passing instances too")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("expand", help="canonical form, sign and multilinear expansion of a graph")
    common(sp, model=False)
    sp.add_argument("graph", help="e.g. 'deg=1; legs=[x,y,x+y]; edges=[v0.0-l0, v0.1-l1, v0.2-l2]'")
    sp.set_defaults(func=cmd_expand)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (ModelError, GraphError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
