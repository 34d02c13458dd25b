"""Command-line front end: graph / atlas / audit / order / inverse.

Exit codes: 0 success, 1 invalid arguments, 2 computation failure,
3 search exhausted.  Output is deterministic; a timestamp header is
included unless --no-meta is given.  Files are written via a temporary
name and an atomic rename, so failures never leave partial output.
"""

import argparse
import os
import sys
import tempfile
from datetime import datetime, timezone

from . import classgroup, graph, inverse, modpoly
from .config import Limits
from .graph import CraterShape

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2
EXIT_EXHAUSTED = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="isovolc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write output to this path instead of stdout")
        p.add_argument("--no-meta", action="store_true",
                       help="omit the timestamp header for byte-stable output")
        p.add_argument("--threads", type=int, default=1)

    g = sub.add_parser("graph", help="build and export one isogeny graph")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--ell", type=int, required=True)
    g.add_argument("--format", choices=("json", "dot", "text"), default="json")
    g.add_argument("--graph-cap", type=int, default=Limits.graph_cap)
    common(g)

    a = sub.add_parser("atlas", help="per-cordillera belt tables and the tally")
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--ell", type=int, required=True)
    a.add_argument("--trace", type=int, help="restrict to one cordillera")
    a.add_argument("--graph-cap", type=int, default=Limits.graph_cap)
    common(a)

    u = sub.add_parser("audit", help="run all counting checks; exit 0 iff clean")
    u.add_argument("--p", type=int, required=True)
    u.add_argument("--ell", type=int, required=True)
    u.add_argument("--graph-cap", type=int, default=Limits.graph_cap)
    common(u)

    o = sub.add_parser("order", help="splitting type and prime-class order")
    o.add_argument("--disc", type=int, required=True)
    o.add_argument("--ell", type=int, required=True)
    common(o)

    i = sub.add_parser("inverse", help="solve the inverse volcano problem")
    i.add_argument("--crater", required=True,
                   help="point|selfloop|doubleselfloop|edge2|doubleedge2|cycle:<n>")
    i.add_argument("--ell", type=int)
    i.add_argument("--depth", type=int, default=0)
    i.add_argument("--strategy", choices=("family", "minimal"), default="minimal")
    i.add_argument("--count", type=int, default=1)
    i.add_argument("--verify-cap", type=int, default=Limits.verify_cap)
    i.add_argument("--search-bound", type=int, default=Limits.search_bound)
    common(i)
    return parser


def _meta_line(args) -> str | None:
    if args.no_meta:
        return None
    return datetime.now(timezone.utc).strftime("generated %Y-%m-%dT%H:%M:%SZ")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".isovolc-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _validate_p(p: int, ell: int) -> None:
    from . import arith
    if p < 5 or not arith.is_prime(p):
        raise _UsageError(f"--p must be a prime >= 5, got {p}")
    if ell not in modpoly.SUPPORTED_LEVELS:
        raise _UsageError(
            f"--ell must be one of {modpoly.SUPPORTED_LEVELS}, got {ell}")
    if ell == p:
        raise _UsageError("--ell must differ from --p")


def cmd_graph(args) -> int:
    _validate_p(args.p, args.ell)
    limits = Limits(graph_cap=args.graph_cap, threads=args.threads)
    g = graph.build_graph(args.p, args.ell, limits)
    dec = graph.decompose(g, with_belts=True, limits=limits)
    meta = _meta_line(args)
    if args.format == "json":
        audits = graph.audit_graph(g, dec)
        text = graph.export_json(g, dec, audits,
                                 meta={"generated": meta} if meta else None)
    elif args.format == "dot":
        text = graph.export_dot(g, dec, meta=meta)
    else:
        text = render_atlas(g, dec, meta=meta)
    _emit(text, args.out)
    return EXIT_OK


def cmd_atlas(args) -> int:
    _validate_p(args.p, args.ell)
    limits = Limits(graph_cap=args.graph_cap, threads=args.threads)
    g = graph.build_graph(args.p, args.ell, limits)
    if args.trace is not None:
        dec = graph.decompose(g, with_belts=False, limits=limits)
        rep = graph.belt_labels(g, dec, args.trace, limits=limits)
        text = render_cordillera(g, dec, rep, meta=_meta_line(args))
    else:
        dec = graph.decompose(g, with_belts=True, limits=limits)
        text = render_atlas(g, dec, meta=_meta_line(args))
    _emit(text, args.out)
    return EXIT_OK


def cmd_audit(args) -> int:
    _validate_p(args.p, args.ell)
    limits = Limits(graph_cap=args.graph_cap, threads=args.threads)
    report = graph.audit(args.p, args.ell, limits)
    lines = []
    meta = _meta_line(args)
    if meta:
        lines.append(f"# {meta}")
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(f"{status} {check.name}: {check.detail}")
    lines.append(f"hurwitz-sum {report.hurwitz_sum}")
    tally = report.tally
    joined = "+".join(str(x) for x in tally.parts())
    if tally.total == report.p:
        lines.append(f"tally {joined} = {tally.total} = p")
    else:
        lines.append(f"tally {joined} = {tally.total} != p = {report.p}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_order(args) -> int:
    try:
        classgroup.validate_discriminant(args.disc)
    except ValueError as exc:
        raise _UsageError(str(exc))
    form = classgroup.prime_form(args.disc, args.ell)
    if form is classgroup.NON_INVERTIBLE:
        text = f"non-invertible ({args.ell} divides the conductor)\n"
    elif form is None:
        text = "inert\n"
    else:
        st = classgroup.splitting_type(args.disc, args.ell)
        text = f"{st.kind}, order {st.order}\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_inverse(args) -> int:
    try:
        shape = CraterShape.parse(args.crater)
    except ValueError as exc:
        raise _UsageError(str(exc))
    try:
        target = inverse.AbstractVolcano(shape, args.depth, args.ell)
    except ValueError as exc:
        raise _UsageError(str(exc))
    limits = Limits(verify_cap=args.verify_cap, search_bound=args.search_bound,
                    threads=args.threads)
    certs = inverse.solve_inverse(target, args.strategy, args.count, limits)
    text = "".join(c.to_json() + "\n" for c in certs)
    _emit(text, args.out)
    return EXIT_OK


def render_atlas(g, dec, meta=None) -> str:
    """The full per-cordillera table set plus the closing tally line."""
    lines = []
    if meta:
        lines.append(f"# {meta}")
    lines.append(f"atlas of the {g.ell}-isogeny graph over F_{g.p}")
    lines.append(f"supersingular ({len(g.supersingular)}): "
                 + " ".join(str(j) for j in g.supersingular))
    for t in sorted(dec.cordilleras):
        rep = dec.cordilleras[t]
        lines.extend(_cordillera_lines(g, dec, rep))
    tally = graph.atlas_tally(g, dec)
    lines.append("tally " + "+".join(str(x) for x in tally.parts())
                 + f" = {tally.total} = p")
    return "\n".join(lines) + "\n"


def render_cordillera(g, dec, rep, meta=None) -> str:
    lines = []
    if meta:
        lines.append(f"# {meta}")
    lines.extend(_cordillera_lines(g, dec, rep))
    return "\n".join(lines) + "\n"


def _cordillera_lines(g, dec, rep) -> list[str]:
    lines = [
        f"cordillera t={rep.trace}: D_K={rep.field_discriminant} "
        f"v={rep.conductor} depth={rep.depth} v'={rep.dry_conductor}"
        + ("" if rep.certified else " [count-matched]")
        + (" [unresolved]" if rep.unresolved else "")
    ]
    for belt in rep.belts:
        comps = [dec.components[i] for i in belt.component_ids]
        shapes = sorted(c.crater.render() for c in comps)
        shape_desc = " ".join(f"{s}x{shapes.count(s)}" for s in dict.fromkeys(shapes))
        note = ""
        if belt.shared_special:
            note = " shared:" + ",".join(str(j) for j in belt.shared_special)
        lines.append(
            f"  belt m={belt.index}: order disc {belt.discriminant} "
            f"h={belt.class_number} crater_order={belt.crater_order} "
            f"volcanoes={len(comps)} {shape_desc}{note}")
    return lines


_COMMANDS = {
    "graph": cmd_graph,
    "atlas": cmd_atlas,
    "audit": cmd_audit,
    "order": cmd_order,
    "inverse": cmd_inverse,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if getattr(args, "threads", 1) < 1:
            raise _UsageError("--threads must be >= 1")
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except graph.CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except inverse.SearchExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (ValueError, RuntimeError, modpoly.UnsupportedLevelError,
            modpoly.DataFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
