"""Command-line interface: ``clusterforge <command> -q QUIVER [options]``.

Exit status is 0 on success, 1 when a theorem-level check fails and 2 for
usage errors (bad flags, unreadable or invalid quivers).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import quiver as qv
from .errors import ClusterForgeError, NonExactDivision, TheoremViolation
from .exchange import (
    CACHE_ENV,
    ClassCache,
    ExchangeGraph,
    Limits,
    classify_finite_type,
    enumerate_quiver_class,
    enumerate_seeds,
    export_dot,
    export_json,
    predicted_finite_class,
    sorted_cluster_variables,
    verify_cluster_determines_seed,
    verify_unique_exchange,
)
from .laurent import coefficients_positive, positivity_condition, reduced_form
from .quiver import Quiver
from .seeds import initial_seed

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

CHECKS = (
    "laurent",
    "positivity",
    "unique-exchange",
    "cluster-determines-seed",
    "denominators",
    "2cy-symmetry",
    "complements",
    "connectivity",
    "mesh",
    "tilting-quivers",
)
# Checks that need a Dynkin quiver (they go through the representation theory).
_REP_CHECKS = {"denominators", "2cy-symmetry", "complements", "connectivity", "mesh", "tilting-quivers"}

_DIAGRAM = re.compile(r"^(~?[ADE]\d+|Kronecker)$")


class UsageError(Exception):
    pass


# -- input ----------------------------------------------------------------------


def load_quiver(source: str) -> Quiver:
    """A file path, a diagram name such as ``A3`` or ``~D4``, or inline text.

    Inline text is the line format with ``;`` standing for newlines, e.g.
    ``"3; 1 2; 3 2"``, or a JSON object.
    """
    path = Path(source)
    if path.is_file():
        return qv.parse_quiver(path.read_text())
    if _DIAGRAM.match(source.strip()):
        if source.strip() == "Kronecker":
            return qv.kronecker()
        return qv.oriented_diagram(source.strip())
    text = source if source.lstrip().startswith("{") else source.replace(";", "\n")
    return qv.parse_quiver(text)


def _vertices(values: Sequence[str]) -> list[int]:
    out = []
    for v in values:
        for part in v.replace(",", " ").split():
            try:
                out.append(int(part))
            except ValueError:
                raise UsageError(f"vertex {part!r} is not an integer") from None
    return out


DEFAULT_NODES = 100_000
# Seeds of an infinite-type quiver never run out and their variables grow fast,
# so verify samples this many unless --limit-nodes says otherwise.
VERIFY_SAMPLE_NODES = 64


def _limits(args) -> Limits:
    nodes = DEFAULT_NODES if args.limit_nodes is None else args.limit_nodes
    return Limits(max_nodes=nodes, max_depth=args.limit_depth)


def _cache(args) -> Optional[ClassCache]:
    root = os.environ.get(CACHE_ENV) or args.cache_dir
    return ClassCache(root) if root else None


# -- rendering helpers ------------------------------------------------------------


def render_quiver(q: Quiver) -> str:
    """``1 -> 2 <- 3`` when the arrows form the path 1 - 2 - ... - n, else an arrow list."""
    arrows = q.arrows()
    pairs = {tuple(sorted((i, j))) for i, j, _ in arrows}
    if q.n > 1 and pairs == {(i, i + 1) for i in range(1, q.n)} and q.max_multiplicity() == 1:
        out = "1"
        for i in range(1, q.n):
            out += " -> " if q.b[i - 1][i] > 0 else " <- "
            out += str(i + 1)
        return out
    if not arrows:
        return f"{q.n} vertices, no arrows"
    return ", ".join(f"{i} -> {j}" if m == 1 else f"{i} -({m})-> {j}" for i, j, m in arrows)


def quiver_dot(q: Quiver, name: str = "quiver") -> str:
    lines = [f"digraph {name} {{"]
    lines += [f"  v{i};" for i in range(1, q.n + 1)]
    for i, j, m in q.arrows():
        for _ in range(m):
            lines.append(f"  v{i} -> v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------------


def cmd_mutate(args, q: Quiver) -> tuple[str, int]:
    ks = _vertices(args.k)
    for k in ks:
        if not 1 <= k <= q.n:
            raise UsageError(f"vertex {k} out of range 1..{q.n}")
        q = q.mutate(k)
    if args.format == "json":
        return qv.to_json(q) + "\n", EXIT_OK
    if args.format == "dot":
        return quiver_dot(q), EXIT_OK
    return render_quiver(q) + "\n", EXIT_OK


def cmd_class(args, q: Quiver) -> tuple[str, int]:
    mc = enumerate_quiver_class(q, _limits(args), cache=_cache(args))
    if args.figure:
        from .plotting import plot_exchange_graph
        plot_exchange_graph(mc, args.figure, title="mutation class")
    if args.format == "json":
        return export_json(mc), EXIT_OK
    if args.format == "dot":
        return export_dot(mc, "mutation_class"), EXIT_OK
    lines = [f"quivers: {len(mc.nodes)}", f"complete: {str(mc.complete).lower()}"]
    for k, member in enumerate(mc.nodes.values()):
        lines.append(f"Q{k + 1}: {render_quiver(member)}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_seeds(args, q: Quiver) -> tuple[str, int]:
    g = enumerate_seeds(q, _limits(args))
    if args.figure:
        from .plotting import plot_exchange_graph
        plot_exchange_graph(g, args.figure, title="exchange graph")
    if args.format == "json":
        return export_json(g), EXIT_OK
    if args.format == "dot":
        return export_dot(g), EXIT_OK
    lines = [f"seeds: {len(g.nodes)}", f"edges: {len(g.edges)}", f"complete: {str(g.complete).lower()}"]
    for k, s in enumerate(g.nodes.values()):
        lines.append(f"{k}: {{" + ", ".join(str(reduced_form(f)) for f in s.cluster) + "}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_variables(args, q: Quiver) -> tuple[str, int]:
    g = enumerate_seeds(q, _limits(args))
    vs = sorted_cluster_variables(g)
    if args.format == "json":
        data = {
            "complete": g.complete,
            "variables": [
                {"numerator": str(v.numerator), "denominator": list(v.denominator), "text": str(v)}
                for v in vs
            ],
        }
        return json.dumps(data, indent=1, sort_keys=True) + "\n", EXIT_OK
    lines = [f"variables: {len(vs)}", f"complete: {str(g.complete).lower()}"]
    lines += [str(v) for v in vs]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_classify(args, q: Quiver) -> tuple[str, int]:
    verdict = classify_finite_type(q, _limits(args))
    kind = qv.diagram_type(q)
    data = {
        "diagram": str(kind),
        "finite_type": verdict.finite,
        "finite_mutation_class_predicted": predicted_finite_class(q) if qv.is_acyclic(q) else None,
    }
    if verdict.finite:
        data.update(type=str(verdict.diagram), class_size=verdict.class_size, variables=verdict.variable_count)
    else:
        data.update(witness=qv.to_dict(verdict.witness) if verdict.witness else None,
                    exhausted=verdict.exhausted)
    if args.format == "json":
        return json.dumps(data, indent=1, sort_keys=True) + "\n", EXIT_OK
    if verdict.finite:
        lines = [
            f"finite type {verdict.diagram}",
            f"mutation class: {verdict.class_size} quivers",
            f"cluster variables: {verdict.variable_count}",
        ]
    else:
        w = render_quiver(verdict.witness) if verdict.witness else "none (limit exhausted)"
        lines = ["infinite type", f"witness: {w}"]
    lines.append(f"diagram of input: {kind}")
    return "\n".join(lines) + "\n", EXIT_OK


def _dynkin_context(args, q: Quiver):
    from .arquiver import knit_ar_quiver
    from .cluster_category import _require_dynkin
    _require_dynkin(q, args.allow_large)
    return knit_ar_quiver(q)


def cmd_denominators(args, q: Quiver) -> tuple[str, int]:
    from .cluster_category import denominator_correspondence, label
    ar = _dynkin_context(args, q)
    g = enumerate_seeds(q, _limits(args))
    corr = denominator_correspondence(g, q, ar)
    rows = sorted(corr.items(), key=lambda kv: reduced_form(kv[0]).sort_key)
    if args.format == "json":
        data = [
            {"variable": str(reduced_form(f)), "object": label(o, ar),
             "dims": None if o.shifted else list(ar.dims[o.index])}
            for f, o in rows
        ]
        return json.dumps(data, indent=1, sort_keys=True) + "\n", EXIT_OK
    lines = [f"{reduced_form(f)}\t{label(o, ar)}" for f, o in rows]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_arquiver(args, q: Quiver) -> tuple[str, int]:
    from .arquiver import ar_to_dot, ar_to_json
    ar = _dynkin_context(args, q)
    if args.figure:
        from .plotting import plot_ar_quiver
        plot_ar_quiver(ar, args.figure)
    if args.format == "json":
        return ar_to_json(ar) + "\n", EXIT_OK
    if args.format == "dot":
        return ar_to_dot(ar), EXIT_OK
    lines = [f"objects: {len(ar)}"]
    for k, d in enumerate(ar.dims):
        flags = ("P" if ar.is_projective(k) else "-") + ("I" if ar.is_injective(k) else "-")
        tau = ar.label(ar.tau[k]) if k in ar.tau else "-"
        lines.append(f"{k}\t{ar.label(k)}\t{''.join(map(str, d))}\t{flags}\ttau={tau}")
    for (a, b), m in ar.arrows.items():
        lines.append(f"{ar.label(a)} -> {ar.label(b)}" + (f" x{m}" if m > 1 else ""))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_ctgraph(args, q: Quiver) -> tuple[str, int]:
    from .cluster_category import (
        cluster_tilting_graph, ctgraph_to_dot, ctgraph_to_json, enumerate_cluster_tilting, label,
    )
    ar = _dynkin_context(args, q)
    g = cluster_tilting_graph(enumerate_cluster_tilting(q, ar, allow_large=args.allow_large))
    if args.figure:
        from .plotting import plot_ctgraph
        plot_ctgraph(g, ar, args.figure)
    if args.format == "json":
        return ctgraph_to_json(g, ar) + "\n", EXIT_OK
    if args.format == "dot":
        return ctgraph_to_dot(g, ar), EXIT_OK
    lines = [f"cluster-tilting objects: {len(g.nodes)}", f"edges: {len(g.edges)}"]
    lines += [f"{k}: " + " ".join(label(o, ar) for o in t) for k, t in enumerate(g.nodes)]
    return "\n".join(lines) + "\n", EXIT_OK


# -- verify -------------------------------------------------------------------------


def _check_table(q: Quiver, limits: Limits, allow_large: bool) -> dict[str, Callable[[], Optional[bool]]]:
    """Lazily evaluated checks; each returns True/False, or None to skip."""
    state: dict = {}

    def graph() -> ExchangeGraph:
        if "g" not in state:
            try:
                state["g"] = enumerate_seeds(q, limits)
            except NonExactDivision:
                state["g"] = None
        return state["g"]

    def complete_graph() -> Optional[ExchangeGraph]:
        g = graph()
        return g if g is not None and g.complete else None

    dynkin = qv.is_connected(q) and qv.is_dynkin(q)

    def rep():
        if "rep" not in state:
            from .arquiver import knit_ar_quiver
            from .cluster_category import cluster_tilting_graph, enumerate_cluster_tilting
            ar = knit_ar_quiver(q)
            ctos = enumerate_cluster_tilting(q, ar, allow_large=allow_large)
            state["rep"] = (ar, ctos, cluster_tilting_graph(ctos))
        return state["rep"]

    def laurent():
        g = graph()
        return g is not None and all(
            reduced_form(f).numerator.is_polynomial() for s in g.nodes.values() for f in s.cluster
        )

    def positivity():
        g = graph()
        if g is None:
            return False
        # The initial x_i fail the condition trivially (x_i vanishes at e_i).
        initial = set(initial_seed(q).cluster)
        variables = {f for s in g.nodes.values() for f in s.cluster} - initial
        return all(coefficients_positive(f) and positivity_condition(reduced_form(f).numerator) for f in variables)

    def unique_exchange():
        g = complete_graph()
        return None if g is None else verify_unique_exchange(g)

    def determines():
        g = complete_graph()
        return None if g is None else verify_cluster_determines_seed(g)

    def denominators():
        from .cluster_category import clusters_to_ctos, denominator_correspondence
        g = complete_graph()
        if g is None:
            return None
        ar, ctos, _ = rep()
        clusters_to_ctos(g, denominator_correspondence(g, q, ar), ctos)
        return True

    def symmetry():
        from .cluster_category import ext1_cluster, fundamental_domain
        ar = rep()[0]
        dom = fundamental_domain(ar)
        return all(ext1_cluster(a, b, ar) == ext1_cluster(b, a, ar) for a in dom for b in dom)

    def complements():
        from .cluster_category import exchange_pairs
        ar, _, g = rep()
        exchange_pairs(g, ar)
        return all(d == q.n for d in g.degrees())

    def connectivity():
        return rep()[2].is_connected()

    def mesh():
        from .arquiver import mesh_defects
        return not mesh_defects(rep()[0])

    def tilting_quivers():
        from .cluster_category import tilting_seed_quivers
        ar, _, g = rep()
        seeds = tilting_seed_quivers(q, g, ar)
        mc = enumerate_quiver_class(q, limits)
        return {s.quiver.key() for s in seeds.values()} == set(mc.nodes)

    table = {
        "laurent": laurent,
        "positivity": positivity,
        "unique-exchange": unique_exchange,
        "cluster-determines-seed": determines,
        "denominators": denominators,
        "2cy-symmetry": symmetry,
        "complements": complements,
        "connectivity": connectivity,
        "mesh": mesh,
        "tilting-quivers": tilting_quivers,
    }
    if not dynkin:
        for name in _REP_CHECKS:
            table[name] = lambda: None
    return table


def cmd_verify(args, q: Quiver) -> tuple[str, int]:
    wanted = []
    for part in ",".join(args.checks).split(","):
        part = part.strip()
        if not part:
            continue
        if part == "all":
            wanted.extend(CHECKS)
        elif part in CHECKS:
            wanted.append(part)
        else:
            raise UsageError(f"unknown check {part!r}; choose from all, {', '.join(CHECKS)}")
    wanted = list(dict.fromkeys(wanted))
    limits = _limits(args)
    if args.limit_nodes is None and qv.is_connected(q):
        if not classify_finite_type(q, limits, count_variables=False).finite:
            limits = Limits(max_nodes=VERIFY_SAMPLE_NODES, max_depth=args.limit_depth)
    table = _check_table(q, limits, args.allow_large)
    results = []
    for name in wanted:
        try:
            ok = table[name]()
            status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
            detail = ""
        except TheoremViolation as exc:
            status, detail = "FAIL", str(exc)
        results.append((name, status, detail))
    failed = any(s == "FAIL" for _, s, _ in results)
    if args.format == "json":
        data = {"quiver": qv.to_dict(q), "checks": [{"check": n, "status": s, "detail": d} for n, s, d in results],
                "passed": not failed}
        text = json.dumps(data, indent=1, sort_keys=True) + "\n"
    else:
        width = max(len(n) for n, _, _ in results)
        text = "".join(f"{n.ljust(width)}  {s}" + (f"  {d}" if d else "") + "\n" for n, s, d in results)
        text += f"result: {'FAIL' if failed else 'PASS'}\n"
    return text, EXIT_FAILED if failed else EXIT_OK


COMMANDS = {
    "mutate": (cmd_mutate, "mutate a quiver along a vertex sequence"),
    "class": (cmd_class, "enumerate the mutation class up to isomorphism"),
    "seeds": (cmd_seeds, "enumerate the exchange graph of seeds"),
    "variables": (cmd_variables, "list cluster variables in reduced form"),
    "classify": (cmd_classify, "decide finite type"),
    "denominators": (cmd_denominators, "match cluster variables with cluster-category objects"),
    "arquiver": (cmd_arquiver, "knit the AR quiver of a Dynkin quiver"),
    "ctgraph": (cmd_ctgraph, "cluster-tilting objects and their exchange graph"),
    "verify": (cmd_verify, "run theorem checks and report PASS/FAIL"),
}
_FIGURES = {"class", "seeds", "arquiver", "ctgraph"}
_FORMATS = {
    "mutate": ("text", "json", "dot"),
    "class": ("text", "json", "dot"),
    "seeds": ("text", "json", "dot"),
    "variables": ("text", "json"),
    "classify": ("text", "json"),
    "denominators": ("text", "json"),
    "arquiver": ("text", "json", "dot"),
    "ctgraph": ("text", "json", "dot"),
    "verify": ("text", "json"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clusterforge", description="Cluster algebra and cluster category toolkit.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    p.set_defaults(subparsers={})
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, description=help_text)
        p.get_default("subparsers")[name] = sp
        sp.add_argument("-q", "--quiver", required=True, metavar="QUIVER",
                        help="file, diagram name (A3, D4, ~A2, Kronecker) or inline '3; 1 2; 2 3'")
        sp.add_argument("--format", choices=_FORMATS[name], default="text")
        sp.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
        sp.add_argument("--limit-nodes", type=int, default=None, metavar="N",
                        help=f"enumeration budget (default {DEFAULT_NODES}; verify samples "
                             f"{VERIFY_SAMPLE_NODES} seeds of an infinite type)")
        sp.add_argument("--limit-depth", type=int, default=None, metavar="D")
        sp.add_argument("--cache-dir", default=None, metavar="DIR",
                        help=f"mutation-class cache directory (env {CACHE_ENV} takes precedence)")
        sp.add_argument("--allow-large", action="store_true", help="permit E7 and E8 in representation-theoretic commands")
        if name in _FIGURES:
            sp.add_argument("--figure", metavar="PATH", help="also render a figure (png, svg or pdf)")
        else:
            sp.set_defaults(figure=None)
        if name == "mutate":
            sp.add_argument("-k", nargs="+", required=True, metavar="VERTEX", help="vertices, applied left to right")
        if name == "verify":
            sp.add_argument("--checks", nargs="+", default=["all"], metavar="CHECK",
                            help="comma or space separated: all, " + ", ".join(CHECKS))
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    parser = args.subparsers[args.command]
    if args.limit_nodes is not None and args.limit_nodes < 1:
        return _usage(parser, stderr, "--limit-nodes must be positive")
    try:
        q = load_quiver(args.quiver)
    except (ClusterForgeError, ValueError, OSError) as exc:
        return _usage(parser, stderr, f"cannot read quiver: {exc}")
    func = COMMANDS[args.command][0]
    try:
        text, code = func(args, q)
    except UsageError as exc:
        return _usage(parser, stderr, str(exc))
    except TheoremViolation as exc:
        print(f"clusterforge: check failed: {exc}", file=stderr)
        return EXIT_FAILED
    except ClusterForgeError as exc:
        return _usage(parser, stderr, str(exc))
    except ValueError as exc:
        return _usage(parser, stderr, str(exc))
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return code


def _usage(parser: argparse.ArgumentParser, stderr, message: str) -> int:
    parser.print_usage(stderr)
    print(f"clusterforge: error: {message}", file=stderr)
    return EXIT_USAGE


def main() -> None:
    raise SystemExit(run())
