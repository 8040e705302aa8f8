"""Exchange graphs, quiver mutation classes and finite-type classification.

Both enumerations are breadth-first.  Each layer is expanded in sorted key
order, so node order, edge lists and exports are reproducible across runs.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from . import quiver as qv
from .errors import ClusterForgeError, InternalInconsistency, NotAcyclic, NotConnected
from .laurent import ReducedFraction, reduced_form
from .quiver import DiagramType, Quiver
from .seeds import Seed, SeedKey, canonical_seed, initial_seed, mutate_seed, seed_from_dict, seed_to_dict

log = logging.getLogger(__name__)

Edge = tuple[bytes, bytes, int]


@dataclass(frozen=True)
class Limits:
    """Enumeration bounds; ``None`` means unbounded."""

    max_nodes: Optional[int] = 100_000
    max_depth: Optional[int] = None
    max_arrow_multiplicity: Optional[int] = 1024


DEFAULT_LIMITS = Limits()


def _norm_edge(a: bytes, va: int, b: bytes, vb: int) -> Edge:
    return min((a, b, va), (b, a, vb))


@dataclass
class ExchangeGraph:
    nodes: dict[SeedKey, Seed]
    edges: list[Edge]
    root: SeedKey
    complete: bool

    def index(self) -> dict[SeedKey, int]:
        return {k: i for i, k in enumerate(self.nodes)}

    def degree(self, key: SeedKey) -> int:
        return sum((a == key) + (b == key) for a, b, _ in self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExchangeGraph):
            return NotImplemented
        return (
            list(self.nodes.items()) == list(other.nodes.items())
            and self.edges == other.edges
            and self.root == other.root
            and self.complete == other.complete
        )


@dataclass
class MutationClass:
    nodes: dict[bytes, Quiver]
    edges: list[Edge]
    root: bytes
    complete: bool

    def __contains__(self, q: Quiver) -> bool:
        return q.key() in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MutationClass):
            return NotImplemented
        return (
            list(self.nodes.items()) == list(other.nodes.items())
            and self.edges == other.edges
            and self.root == other.root
            and self.complete == other.complete
        )


def _too_many_arrows(q: Quiver, limits: Limits) -> bool:
    return limits.max_arrow_multiplicity is not None and q.max_multiplicity() > limits.max_arrow_multiplicity


def enumerate_seeds(q: Quiver, limits: Limits = DEFAULT_LIMITS) -> ExchangeGraph:
    """Breadth-first enumeration of the exchange graph from the initial seed.

    Mutating back along the edge a node was discovered by is skipped, since
    seed mutation is an involution.
    """
    root, root_key = canonical_seed(initial_seed(q))
    nodes: dict[SeedKey, Seed] = {root_key: root}
    edges: set[Edge] = set()
    known: set[tuple[SeedKey, int]] = set()
    complete = True
    frontier = [root_key]
    depth = 0
    while frontier:
        at_depth_cap = limits.max_depth is not None and depth >= limits.max_depth
        nxt: list[SeedKey] = []
        for key in sorted(frontier):
            seed = nodes[key]
            for k in range(1, seed.n + 1):
                if (key, k) in known:
                    continue
                raw = mutate_seed(seed, k)
                child, child_key = canonical_seed(raw)
                back = child.cluster.index(raw.cluster[k - 1]) + 1
                if child_key not in nodes:
                    full = limits.max_nodes is not None and len(nodes) >= limits.max_nodes
                    if at_depth_cap or full or _too_many_arrows(child.quiver, limits):
                        complete = False
                        continue
                    nodes[child_key] = child
                    nxt.append(child_key)
                known.add((child_key, back))
                edges.add(_norm_edge(key, k, child_key, back))
        frontier = nxt
        depth += 1
    return ExchangeGraph(nodes, sorted(edges), root_key, complete)


def cluster_variables(g: ExchangeGraph) -> set[ReducedFraction]:
    return {reduced_form(f) for s in g.nodes.values() for f in s.cluster}


def sorted_cluster_variables(g: ExchangeGraph) -> list[ReducedFraction]:
    return sorted(cluster_variables(g))


def enumerate_quiver_class(
    q: Quiver, limits: Limits = DEFAULT_LIMITS, cache: Optional["ClassCache"] = None
) -> MutationClass:
    """Breadth-first enumeration of the mutation class modulo isomorphism."""
    root = qv.canonical_form(q)[0]
    root_key = qv.encode_matrix(root.b)
    if cache is not None:
        hit = cache.load(root_key)
        if hit is not None:
            return hit
    nodes = {root_key: root}
    edges: set[Edge] = set()
    complete = True
    frontier = [root_key]
    depth = 0
    stop = False
    while frontier and not stop:
        at_depth_cap = limits.max_depth is not None and depth >= limits.max_depth
        nxt = []
        for key in sorted(frontier):
            cur = nodes[key]
            for k in range(1, cur.n + 1):
                mutated = qv.mutate(cur, k)
                canon, perm = qv.canonical_form(mutated)
                ckey = qv.encode_matrix(canon.b)
                if ckey not in nodes:
                    if _too_many_arrows(canon, limits):
                        complete = False
                        stop = True
                        break
                    full = limits.max_nodes is not None and len(nodes) >= limits.max_nodes
                    if at_depth_cap or full:
                        complete = False
                        continue
                    nodes[ckey] = canon
                    nxt.append(ckey)
                edges.add(_norm_edge(key, k, ckey, perm.index(k - 1) + 1))
            if stop:
                break
        frontier = nxt
        depth += 1
    result = MutationClass(nodes, sorted(edges), root_key, complete)
    if cache is not None and complete:
        cache.store(root_key, result)
    return result


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class FiniteType:
    diagram: DiagramType
    class_size: int
    variable_count: Optional[int]

    finite = True


@dataclass(frozen=True)
class InfiniteType:
    """Infinite type, witnessed by a multi-arrow quiver in the class.

    ``witness`` is None when only an enumeration limit was exhausted.
    """

    witness: Optional[Quiver]
    exhausted: bool = False

    finite = False


TypeVerdict = Union[FiniteType, InfiniteType]


def _require_connected(q: Quiver) -> None:
    if not qv.is_connected(q):
        raise NotConnected("operation is defined for connected quivers")


def classify_finite_type(
    q: Quiver, limits: Limits = DEFAULT_LIMITS, count_variables: bool = True
) -> TypeVerdict:
    """Decide finite type by exploring the quiver mutation class.

    Any member with a multiple arrow proves infinite type; a class that closes
    with single arrows only must contain a Dynkin quiver.
    """
    _require_connected(q)
    if q.max_multiplicity() >= 2:
        return InfiniteType(q)
    single = Limits(limits.max_nodes, limits.max_depth, 1)
    mclass = enumerate_quiver_class(q, single)
    if not mclass.complete:
        for member in mclass.nodes.values():
            for k in range(1, member.n + 1):
                m = qv.mutate(member, k)
                if m.max_multiplicity() >= 2:
                    return InfiniteType(qv.canonical_form(m)[0])
        return InfiniteType(None, exhausted=True)
    dynkin = [qd for qd in (qv.diagram_type(m) for m in mclass.nodes.values()) if qd.is_dynkin]
    if not dynkin:
        raise InternalInconsistency(f"class of {q} closed with single arrows but has no Dynkin member")
    variables = None
    if count_variables:
        g = enumerate_seeds(q, limits)
        if not g.complete:
            raise InternalInconsistency("finite-type exchange graph did not close within limits")
        variables = len(cluster_variables(g))
    return FiniteType(min(dynkin), len(mclass), variables)


def predicted_finite_class(q: Quiver) -> bool:
    kind = qv.diagram_type(q)
    return q.n <= 2 or kind.is_dynkin or kind.is_extended_dynkin


def check_finite_mutation_class(
    q: Quiver, limits: Limits = Limits(max_nodes=5000, max_arrow_multiplicity=64)
) -> tuple[bool, Optional[bool]]:
    """Compare the predicted finiteness of the mutation class with enumeration.

    Returns ``(predicted, verified)`` where ``verified`` is True when the
    bounded enumeration closed and None when a limit was hit.
    """
    if not qv.is_acyclic(q):
        raise NotAcyclic("finite mutation class prediction needs an acyclic quiver")
    _require_connected(q)
    predicted = predicted_finite_class(q)
    mclass = enumerate_quiver_class(q, limits)
    verified = True if mclass.complete else None
    if mclass.complete and not predicted:
        raise InternalInconsistency(f"mutation class of {q} closed but was predicted infinite")
    return predicted, verified


# -- theorem checks -----------------------------------------------------------


def _require_complete(g: ExchangeGraph) -> None:
    if not g.complete:
        raise ValueError("check needs a completely enumerated exchange graph")


def verify_cluster_determines_seed(g: ExchangeGraph) -> bool:
    _require_complete(g)
    seen: dict[frozenset, Quiver] = {}
    for s in g.nodes.values():
        cl = frozenset(s.cluster)
        if cl in seen and seen[cl] != s.quiver:
            return False
        seen[cl] = s.quiver
    return True


def verify_unique_exchange(g: ExchangeGraph) -> bool:
    """Every cluster variable in every cluster has exactly one replacement."""
    _require_complete(g)
    clusters = [frozenset(s.cluster) for s in g.nodes.values()]
    if len(set(clusters)) != len(clusters):
        return False
    by_face: dict[frozenset, int] = defaultdict(int)
    for cl in clusters:
        for x in cl:
            by_face[cl - {x}] += 1
    return all(by_face[cl - {x}] == 2 for cl in clusters for x in cl)


def quiver_class_membership(g: ExchangeGraph, mclass: MutationClass) -> bool:
    return all(s.quiver.key() in mclass.nodes for s in g.nodes.values())


# -- export -------------------------------------------------------------------


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(g: Union[ExchangeGraph, MutationClass], name: str = "exchange") -> str:
    idx = {k: i for i, k in enumerate(g.nodes)}
    lines = [f"graph {name} {{"]
    for key, val in g.nodes.items():
        if isinstance(val, Seed):
            label = "{" + ", ".join(str(reduced_form(f)) for f in val.cluster) + "}"
        else:
            label = str(val)
        lines.append(f'  n{idx[key]} [label="{_dot_escape(label)}"];')
    for a, b, k in g.edges:
        lines.append(f'  n{idx[a]} -- n{idx[b]} [label="{k}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(g: ExchangeGraph) -> dict:
    idx = g.index()
    return {
        "kind": "exchange-graph",
        "complete": g.complete,
        "root": idx[g.root],
        "nodes": [{"key": k.decode(), "seed": seed_to_dict(s)} for k, s in g.nodes.items()],
        "edges": [[idx[a], idx[b], k] for a, b, k in g.edges],
    }


def graph_from_dict(data: dict) -> ExchangeGraph:
    keys = [n["key"].encode() for n in data["nodes"]]
    nodes = {k: seed_from_dict(n["seed"]) for k, n in zip(keys, data["nodes"])}
    edges = [(keys[a], keys[b], k) for a, b, k in data["edges"]]
    return ExchangeGraph(nodes, edges, keys[data["root"]], data["complete"])


def class_to_dict(c: MutationClass) -> dict:
    idx = {k: i for i, k in enumerate(c.nodes)}
    return {
        "kind": "mutation-class",
        "complete": c.complete,
        "root": idx[c.root],
        "nodes": [qv.to_dict(q) for q in c.nodes.values()],
        "edges": [[idx[a], idx[b], k] for a, b, k in c.edges],
    }


def class_from_dict(data: dict) -> MutationClass:
    quivers = [qv.from_dict(d) for d in data["nodes"]]
    keys = [qv.encode_matrix(q.b) for q in quivers]
    nodes = dict(zip(keys, quivers))
    edges = [(keys[a], keys[b], k) for a, b, k in data["edges"]]
    return MutationClass(nodes, edges, keys[data["root"]], data["complete"])


def export_json(g: Union[ExchangeGraph, MutationClass]) -> str:
    data = graph_to_dict(g) if isinstance(g, ExchangeGraph) else class_to_dict(g)
    return json.dumps(data, sort_keys=True, indent=1) + "\n"


def import_json(text: str) -> Union[ExchangeGraph, MutationClass]:
    data = json.loads(text)
    if data.get("kind") == "exchange-graph":
        return graph_from_dict(data)
    if data.get("kind") == "mutation-class":
        return class_from_dict(data)
    raise ValueError("unknown graph kind")


# -- cache ------------------------------------------------------------------------

CACHE_VERSION = 1
CACHE_ENV = "CLUSTERFORGE_CACHE"


class CacheError(ClusterForgeError, OSError):
    pass


class ClassCache:
    """One JSON file per canonical quiver key under ``root``."""

    def __init__(self, root: Union[str, os.PathLike]):
        self.root = Path(root)

    def path_for(self, key: bytes) -> Path:
        return self.root / f"{hashlib.sha256(key).hexdigest()}.json"

    def store(self, key: bytes, mclass: MutationClass) -> Path:
        path = self.path_for(key)
        payload = {"version": CACHE_VERSION, "key": key.decode(), "class": class_to_dict(mclass)}
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(payload, sort_keys=True))
            tmp.replace(path)
        except OSError as exc:
            raise CacheError(f"{path}: {exc}") from exc
        return path

    def load(self, key: bytes) -> Optional[MutationClass]:
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            text = path.read_text()
        except OSError as exc:
            raise CacheError(f"{path}: {exc}") from exc
        try:
            payload = json.loads(text)
            if payload.get("version") != CACHE_VERSION or payload.get("key") != key.decode():
                raise ValueError("version or key mismatch")
            return class_from_dict(payload["class"])
        except (ValueError, KeyError, TypeError, ClusterForgeError) as exc:
            log.warning("ignoring corrupt cache entry %s: %s", path, exc)
            return None


def cache_store(cache_dir: Union[str, os.PathLike], key: bytes, mclass: MutationClass) -> Path:
    return ClassCache(cache_dir).store(key, mclass)


def cache_load(cache_dir: Union[str, os.PathLike], key: bytes) -> Optional[MutationClass]:
    return ClassCache(cache_dir).load(key)
