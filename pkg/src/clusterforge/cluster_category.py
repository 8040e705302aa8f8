"""The cluster category of a Dynkin quiver on its fundamental domain.

Objects are the indecomposable modules together with the shifted
projectives ``P_i[1]``.  Everything here is combinatorial on top of the AR
quiver plus the Ext table computed from explicit representations.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import quiver as qv
from .errors import (
    ComplementCountViolation,
    CycleInconsistency,
    InternalInconsistency,
    MaximalityViolation,
    NoMatchingModule,
    NotBijective,
    NotDynkin,
    TheoremViolation,
)
from .arquiver import ARQuiver, knit_ar_quiver
from .exchange import ExchangeGraph
from .laurent import LaurentPolynomial, reduced_form
from .quiver import Quiver

# Exceptional types above this rank have thousands of cluster-tilting objects.
LARGE_RANK = 6


@dataclass(frozen=True, order=True)
class CCObject:
    """``Module(k)`` is AR-quiver object ``k``; ``ShiftedProjective(i)`` is ``P_i[1]``."""

    shifted: bool
    index: int

    def __repr__(self) -> str:
        return f"P{self.index}[1]" if self.shifted else f"Module({self.index})"


def Module(k: int) -> CCObject:
    return CCObject(False, k)


def ShiftedProjective(i: int) -> CCObject:
    return CCObject(True, i)


def label(o: CCObject, ar: ARQuiver) -> str:
    return f"P{o.index}[1]" if o.shifted else ar.label(o.index)


def fundamental_domain(ar: ARQuiver) -> list[CCObject]:
    return [Module(k) for k in range(len(ar))] + [
        ShiftedProjective(i) for i in range(1, ar.quiver.n + 1)
    ]


def ext1_cluster(a: CCObject, b: CCObject, ar: ARQuiver) -> int:
    """``dim Ext^1`` in the cluster category (symmetric by construction)."""
    if a.shifted and b.shifted:
        return 0
    if a.shifted:
        return ar.dims[b.index][a.index - 1]
    if b.shifted:
        return ar.dims[a.index][b.index - 1]
    t = ar.ext_table
    return t[a.index][b.index] + t[b.index][a.index]


def tau_cluster(o: CCObject, ar: ARQuiver) -> CCObject:
    if o.shifted:
        return Module(ar.injective[o.index])
    i = ar.projective_vertex(o.index)
    if i is not None:
        return ShiftedProjective(i)
    return Module(ar.tau[o.index])


def tau_inverse_cluster(o: CCObject, ar: ARQuiver) -> CCObject:
    if o.shifted:
        return Module(ar.projective[o.index])
    i = ar.injective_vertex(o.index)
    if i is not None:
        return ShiftedProjective(i)
    return Module(ar.tau_inverse[o.index])


# -- cluster-tilting objects --------------------------------------------------------


@dataclass(frozen=True, order=True)
class ClusterTiltingObject:
    summands: tuple[CCObject, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "summands", tuple(sorted(set(self.summands))))

    def __iter__(self):
        return iter(self.summands)

    def __len__(self) -> int:
        return len(self.summands)

    def __contains__(self, o: object) -> bool:
        return o in self.summands


def _require_dynkin(q: Quiver, allow_large: bool) -> None:
    t = qv.diagram_type(q)
    if not t.is_dynkin:
        raise NotDynkin(f"quiver of type {t} is not Dynkin")
    if t.family == "E" and t.rank > LARGE_RANK and not allow_large:
        raise ValueError(f"{t} is large; pass allow_large=True to proceed")


def compatibility(ar: ARQuiver) -> dict[CCObject, set[CCObject]]:
    dom = fundamental_domain(ar)
    for o in dom:
        if ext1_cluster(o, o, ar):
            raise InternalInconsistency(f"{label(o, ar)} has self-extensions")
    return {a: {b for b in dom if b != a and ext1_cluster(a, b, ar) == 0} for a in dom}


def enumerate_cluster_tilting(
    q: Quiver, ar: Optional[ARQuiver] = None, allow_large: bool = False
) -> list[ClusterTiltingObject]:
    """All basic cluster-tilting objects, as ``n``-cliques of the compatibility graph."""
    _require_dynkin(q, allow_large)
    ar = ar or knit_ar_quiver(q)
    n = q.n
    comp = compatibility(ar)
    dom = fundamental_domain(ar)
    out: list[ClusterTiltingObject] = []

    def extend(clique: list[CCObject], cands: list[CCObject]) -> None:
        if len(clique) == n:
            out.append(ClusterTiltingObject(tuple(clique)))
            return
        for k, c in enumerate(cands):
            if len(clique) + len(cands) - k < n:
                return
            extend(clique + [c], [d for d in cands[k + 1:] if d in comp[c]])

    extend([], dom)
    for t in out:
        for x in dom:
            if x not in t and all(x in comp[s] for s in t):
                raise MaximalityViolation(f"{x} could be added to {t}")
    return sorted(out)


@dataclass(frozen=True)
class CTGraph:
    nodes: tuple[ClusterTiltingObject, ...]
    edges: tuple[tuple[int, int], ...]

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {k: [] for k in range(len(self.nodes))}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        adj, seen, todo = self.adjacency(), {0}, [0]
        while todo:
            for b in adj[todo.pop()]:
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return len(seen) == len(self.nodes)

    def degrees(self) -> list[int]:
        return [len(v) for _, v in sorted(self.adjacency().items())]


def cluster_tilting_graph(ctos: Sequence[ClusterTiltingObject]) -> CTGraph:
    """Join objects sharing all but one summand; check two complements per face."""
    nodes = tuple(sorted(ctos))
    faces: dict[tuple[CCObject, ...], list[int]] = {}
    for k, t in enumerate(nodes):
        for drop in t:
            faces.setdefault(tuple(s for s in t if s != drop), []).append(k)
    for face, owners in faces.items():
        if len(owners) != 2:
            raise ComplementCountViolation(
                f"almost complete object {face} has {len(owners)} complements"
            )
    edges = tuple(sorted(tuple(v) for v in faces.values()))
    g = CTGraph(nodes, edges)
    if not g.is_connected():
        raise TheoremViolation("cluster-tilting graph is not connected")
    return g


def _exchanged(a: ClusterTiltingObject, b: ClusterTiltingObject) -> tuple[CCObject, CCObject]:
    (m,) = set(a) - set(b)
    (m_star,) = set(b) - set(a)
    return m, m_star


def exchange_pairs(g: CTGraph, ar: ARQuiver) -> set[frozenset[CCObject]]:
    """Complement pairs read off the graph, cross-checked against ``Ext^1 = 1``."""
    from_graph = {frozenset(_exchanged(g.nodes[a], g.nodes[b])) for a, b in g.edges}
    dom = fundamental_domain(ar)
    from_ext = {
        frozenset((a, b)) for a, b in itertools.combinations(dom, 2)
        if ext1_cluster(a, b, ar) == 1
    }
    if from_graph != from_ext:
        raise TheoremViolation("exchange pairs differ from pairs with one-dimensional Ext")
    return from_graph


# -- tilting seeds --------------------------------------------------------------------


@dataclass(frozen=True)
class TiltingSeed:
    """``order[i - 1]`` is the summand sitting at vertex ``i`` of ``quiver``."""

    cto: ClusterTiltingObject
    order: tuple[CCObject, ...]
    quiver: Quiver


def tilting_seed_quivers(q: Quiver, g: CTGraph, ar: ARQuiver) -> dict[ClusterTiltingObject, TiltingSeed]:
    """Propagate ``Q_T`` from ``(kQ, Q)`` by mutation along the cluster-tilting graph."""
    start_order = tuple(Module(ar.projective[i]) for i in range(1, q.n + 1))
    start = ClusterTiltingObject(start_order)
    index = {t: k for k, t in enumerate(g.nodes)}
    if start not in index:
        raise InternalInconsistency("the projectives do not form a node of the graph")
    adj = g.adjacency()
    seeds = {start: TiltingSeed(start, start_order, q)}
    todo = deque([start])
    while todo:
        t = todo.popleft()
        s = seeds[t]
        for nb in sorted(adj[index[t]]):
            u = g.nodes[nb]
            m, m_star = _exchanged(t, u)
            k = s.order.index(m) + 1
            order = tuple(m_star if o == m else o for o in s.order)
            mq = s.quiver.mutate(k)
            if u not in seeds:
                seeds[u] = TiltingSeed(u, order, mq)
                todo.append(u)
                continue
            old = seeds[u]
            perm = [order.index(o) for o in old.order]
            if mq.relabel(perm) != old.quiver:
                raise CycleInconsistency(f"quiver of {u} depends on the path taken")
    return seeds


# -- AR quiver of the cluster category and cluster-tilted algebras --------------------


def cluster_category_arrows(ar: ARQuiver) -> dict[tuple[CCObject, CCObject], int]:
    """Irreducible maps between fundamental-domain objects.

    Module arrows are those of ``mod kQ``.  Translating ``X -> Y`` iff
    ``tau Y -> X`` with ``tau P_i[1] = I_i`` gives ``M -> P_i[1]`` once per arrow
    ``I_i -> M``, ``P_i[1] -> P_j[1]`` once per ``P_i -> P_j`` and
    ``P_i[1] -> P_j`` once per ``P_j -> P_i``.
    """
    out: dict[tuple[CCObject, CCObject], int] = {}
    pv = ar.projective_vertex
    for (a, b), m in ar.arrows.items():
        out[(Module(a), Module(b))] = m
        ia = ar.injective_vertex(a)
        if ia is not None:
            out[(Module(b), ShiftedProjective(ia))] = m
        if pv(a) is not None and pv(b) is not None:
            out[(ShiftedProjective(pv(a)), ShiftedProjective(pv(b)))] = m
            out[(ShiftedProjective(pv(b)), Module(a))] = m
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class Subquiver:
    objects: tuple[CCObject, ...]
    arrows: dict[tuple[CCObject, CCObject], int]
    dropped: tuple[CCObject, ...]


def cluster_tilted_ar_quiver(t: ClusterTiltingObject, ar: ARQuiver) -> Subquiver:
    """The cluster-category AR quiver with the vertices ``tau T_i`` removed."""
    dropped = tuple(sorted(tau_cluster(s, ar) for s in t))
    keep = tuple(o for o in fundamental_domain(ar) if o not in dropped)
    kept = set(keep)
    arrows = {
        (a, b): m for (a, b), m in cluster_category_arrows(ar).items()
        if a in kept and b in kept
    }
    return Subquiver(keep, arrows, dropped)


def check_selfinjective(t: ClusterTiltingObject, ar: ARQuiver) -> bool:
    return {tau_cluster(tau_cluster(s, ar), ar) for s in t} == set(t)


# -- denominators -------------------------------------------------------------------


def denominator_correspondence(g: ExchangeGraph, q: Quiver, ar: Optional[ARQuiver] = None) -> dict[LaurentPolynomial, CCObject]:
    """Send each cluster variable to the object named by its denominator vector."""
    ar = ar or knit_ar_quiver(q)
    n = q.n
    initial = {LaurentPolynomial.variable(n, i): i for i in range(1, n + 1)}
    if not g.complete:
        raise ValueError("the exchange graph is not fully enumerated")
    variables = sorted({f for s in g.nodes.values() for f in s.cluster}, key=lambda f: f.sort_key)
    out: dict[LaurentPolynomial, CCObject] = {}
    for f in variables:
        if f in initial:
            out[f] = ShiftedProjective(initial[f])
            continue
        d = reduced_form(f).denominator
        k = ar.index_of(d)
        if k is None:
            raise NoMatchingModule(f"no indecomposable module has dimension vector {d}")
        out[f] = Module(k)
    if sorted(out.values()) != sorted(fundamental_domain(ar)):
        raise NotBijective("denominator map is not a bijection onto the fundamental domain")
    return out


def clusters_to_ctos(g: ExchangeGraph, corr: dict[LaurentPolynomial, CCObject],
                     ctos: Iterable[ClusterTiltingObject]) -> dict[frozenset, ClusterTiltingObject]:
    """Check that clusters go to cluster-tilting objects, bijectively."""
    cto_set = set(ctos)
    out = {}
    for seed in g.nodes.values():
        t = ClusterTiltingObject(tuple(corr[f] for f in seed.cluster))
        if t not in cto_set:
            raise NotBijective(f"a cluster maps to the non-tilting object {t}")
        out[frozenset(seed.cluster)] = t
    if len(set(out.values())) != len(out) or len(out) != len(cto_set):
        raise NotBijective("clusters and cluster-tilting objects are not in bijection")
    return out


# -- export -----------------------------------------------------------------------------


def ctgraph_to_dict(g: CTGraph, ar: ARQuiver) -> dict:
    return {
        "nodes": [[label(o, ar) for o in t] for t in g.nodes],
        "edges": [list(e) for e in g.edges],
    }


def ctgraph_to_json(g: CTGraph, ar: ARQuiver) -> str:
    return json.dumps(ctgraph_to_dict(g, ar), indent=1, sort_keys=True)


def ctgraph_to_dot(g: CTGraph, ar: ARQuiver, name: str = "ctgraph") -> str:
    lines = [f"graph {name} {{"]
    for k, t in enumerate(g.nodes):
        lines.append(f'  t{k} [label="{" ".join(label(o, ar) for o in t)}"];')
    for a, b in g.edges:
        lines.append(f"  t{a} -- t{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _node(o: CCObject) -> str:
    return f"s{o.index}" if o.shifted else f"m{o.index}"


def cluster_ar_to_dot(ar: ARQuiver, t: Optional[ClusterTiltingObject] = None, name: str = "cluster_ar") -> str:
    """DOT of the cluster-category AR quiver; with ``t`` the ``tau T_i`` are greyed out."""
    dropped = set(cluster_tilted_ar_quiver(t, ar).dropped) if t is not None else set()
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for o in fundamental_domain(ar):
        style = ', style=dashed, color=gray' if o in dropped else ""
        lines.append(f'  {_node(o)} [label="{label(o, ar)}"{style}];')
    for (a, b), m in cluster_category_arrows(ar).items():
        style = " [color=gray]" if a in dropped or b in dropped else ""
        for _ in range(m):
            lines.append(f"  {_node(a)} -> {_node(b)}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
