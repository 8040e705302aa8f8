"""Cluster quivers as skew-symmetric integer matrices.

Vertices are labelled ``1..n`` in every public function that takes a vertex
argument; the matrix itself is stored 0-based, so ``q.b[i - 1][j - 1] > 0``
means there are that many arrows ``i -> j``.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Optional

from .errors import FormatError, LoopError, QuiverError, TwoCycleError

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Quiver:
    """A loop-free, 2-cycle-free quiver encoded by its exchange matrix.

    ``b[i][j] > 0`` means ``b[i][j]`` arrows from vertex ``i+1`` to ``j+1``.
    """

    b: Matrix

    def __post_init__(self) -> None:
        b = tuple(tuple(int(x) for x in row) for row in self.b)
        n = len(b)
        if n == 0:
            raise QuiverError("a quiver needs at least one vertex")
        for i, row in enumerate(b):
            if len(row) != n:
                raise QuiverError("exchange matrix must be square")
            if row[i] != 0:
                raise LoopError(f"nonzero diagonal entry at vertex {i + 1}")
            for j in range(i):
                if row[j] != -b[j][i]:
                    raise QuiverError(f"matrix not skew-symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.b)

    def arrows(self) -> list[tuple[int, int, int]]:
        """``(i, j, m)`` triples with ``m > 0`` arrows ``i -> j``, 1-based, sorted."""
        return [
            (i + 1, j + 1, self.b[i][j])
            for i in range(self.n)
            for j in range(self.n)
            if self.b[i][j] > 0
        ]

    def mutate(self, k: int) -> "Quiver":
        return mutate(self, k)

    def relabel(self, perm: Sequence[int]) -> "Quiver":
        """Quiver whose vertex ``a`` is the old vertex ``perm[a]`` (0-based)."""
        return Quiver(tuple(tuple(self.b[p][r] for r in perm) for p in perm))

    def max_multiplicity(self) -> int:
        return max((abs(x) for row in self.b for x in row), default=0)

    def is_sink(self, k: int) -> bool:
        return all(x <= 0 for x in self.b[k - 1])

    def is_source(self, k: int) -> bool:
        return all(x >= 0 for x in self.b[k - 1])

    def key(self) -> bytes:
        """Byte encoding of the canonical form; equal iff isomorphic."""
        canon, _ = canonical_form(self)
        return encode_matrix(canon.b)

    def __str__(self) -> str:
        parts = [
            f"{i}->{j}" if m == 1 else f"{i}={m}=>{j}" for i, j, m in self.arrows()
        ]
        return f"Quiver(n={self.n}; " + ", ".join(parts) + ")"


def encode_matrix(b: Matrix) -> bytes:
    return ";".join(",".join(str(x) for x in row) for row in b).encode()


def from_arrows(n: int, arrows: Iterable[Sequence[int]]) -> Quiver:
    """Build a quiver from 1-based ``(i, j)`` or ``(i, j, m)`` arrow tuples.

    Loops and 2-cycles are rejected rather than cancelled.
    """
    if n < 1:
        raise QuiverError("a quiver needs at least one vertex")
    count: Counter[tuple[int, int]] = Counter()
    for arrow in arrows:
        if len(arrow) == 2:
            i, j = arrow
            m = 1
        elif len(arrow) == 3:
            i, j, m = arrow
        else:
            raise QuiverError(f"bad arrow specification {arrow!r}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise QuiverError(f"arrow {i}->{j} out of range for n={n}")
        if m < 0:
            raise QuiverError(f"negative multiplicity on arrow {i}->{j}")
        if i == j:
            raise LoopError(f"loop at vertex {i}")
        count[(i, j)] += m
    for i, j in count:
        if count[(i, j)] and count.get((j, i)):
            raise TwoCycleError(f"2-cycle between vertices {i} and {j}")
    b = [[0] * n for _ in range(n)]
    for (i, j), m in count.items():
        b[i - 1][j - 1] += m
        b[j - 1][i - 1] -= m
    return Quiver(tuple(map(tuple, b)))


def from_matrix(b: Sequence[Sequence[int]]) -> Quiver:
    return Quiver(tuple(tuple(row) for row in b))


def mutate(q: Quiver, k: int) -> Quiver:
    """Quiver mutation at the 1-based vertex ``k``."""
    n = q.n
    if not 1 <= k <= n:
        raise IndexError(f"vertex {k} out of range for n={n}")
    k -= 1
    b = q.b
    col_k = [b[i][k] for i in range(n)]
    out = []
    for i in range(n):
        bik = col_k[i]
        row = list(b[i])
        if i == k:
            row = [-x for x in row]
        else:
            row[k] = -bik
            if bik:
                bk = b[k]
                for j in range(n):
                    bkj = bk[j]
                    # Only paths i -> k -> j (or j -> k -> i) change b[i][j].
                    if j != k and bik * bkj > 0:
                        row[j] += bik * bkj if bik > 0 else -bik * bkj
        out.append(tuple(row))
    return Quiver(tuple(out))


def _vertex_invariants(b: Matrix) -> list[tuple]:
    n = len(b)
    base = [tuple(sorted(row)) for row in b]
    # One round of refinement: neighbour weights paired with neighbour invariants.
    return [
        (base[v], tuple(sorted((b[v][w], base[w]) for w in range(n) if b[v][w])))
        for v in range(n)
    ]


def canonical_form(q: Quiver) -> tuple[Quiver, tuple[int, ...]]:
    """Canonical representative of the isomorphism class of ``q``.

    Vertices are first grouped by a relabelling-invariant signature and the
    groups ordered by signature; within that constraint the permutation
    minimising the upper triangle read column by column is chosen (the
    lexicographically smallest such permutation on ties).  Returns
    ``(canon, perm)`` with ``q.relabel(perm) == canon``.
    """
    b = q.b
    n = q.n
    inv = _vertex_invariants(b)
    order = sorted(range(n), key=lambda v: inv[v])
    slot_inv = [inv[v] for v in order]

    best: Optional[list[int]] = None
    best_perm: Optional[tuple[int, ...]] = None
    perm: list[int] = []
    seq: list[int] = []
    used = [False] * n

    def search(depth: int) -> None:
        nonlocal best, best_perm
        if depth == n:
            if best is None or seq < best:
                best = seq.copy()
                best_perm = tuple(perm)
            return
        want = slot_inv[depth]
        for v in range(n):
            if used[v] or inv[v] != want:
                continue
            col = [b[perm[i]][v] for i in range(depth)]
            start = len(seq)
            seq.extend(col)
            if best is not None and seq > best[: len(seq)]:
                del seq[start:]
                continue
            used[v] = True
            perm.append(v)
            search(depth + 1)
            perm.pop()
            used[v] = False
            del seq[start:]

    search(0)
    assert best_perm is not None
    return q.relabel(best_perm), best_perm


def is_isomorphic(q1: Quiver, q2: Quiver) -> bool:
    if q1.n != q2.n:
        return False
    return canonical_form(q1)[0] == canonical_form(q2)[0]


def is_acyclic(q: Quiver) -> bool:
    n = q.n
    indeg = [sum(1 for i in range(n) if q.b[i][j] > 0) for j in range(n)]
    ready = deque(v for v in range(n) if indeg[v] == 0)
    seen = 0
    while ready:
        v = ready.popleft()
        seen += 1
        for w in range(n):
            if q.b[v][w] > 0:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
    return seen == n


def components(q: Quiver) -> list[list[int]]:
    """Connected components of the underlying graph as sorted 1-based vertex lists."""
    n = q.n
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            v = stack.pop()
            comp.append(v + 1)
            for w in range(n):
                if q.b[v][w] and not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(q: Quiver) -> bool:
    return len(components(q)) == 1


def full_subquiver(q: Quiver, vertices: Sequence[int]) -> Quiver:
    """Full subquiver on the given 1-based vertices, relabelled in that order."""
    return q.relabel([v - 1 for v in vertices])


# -- Dynkin / extended Dynkin recognition -------------------------------------


@dataclass(frozen=True, order=True)
class DiagramType:
    """Classification of the underlying (weighted) graph of a quiver.

    ``family`` is one of ``A, D, E, ExtendedA, ExtendedD, ExtendedE,
    Kronecker, Other``; ``rank`` is the subscript (0 where it has none).
    """

    family: str
    rank: int = 0

    @property
    def is_dynkin(self) -> bool:
        return self.family in ("A", "D", "E")

    @property
    def is_extended_dynkin(self) -> bool:
        return self.family in ("ExtendedA", "ExtendedD", "ExtendedE", "Kronecker")

    def __str__(self) -> str:
        if self.family in ("Kronecker", "Other"):
            return self.family
        if self.family.startswith("Extended"):
            return f"~{self.family[-1]}{self.rank}"
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "DiagramType":
        text = text.strip()
        if text in ("Kronecker", "Other"):
            return cls(text)
        if text.startswith("~"):
            return cls("Extended" + text[1], int(text[2:]))
        return cls(text[0], int(text[1:]))


OTHER = DiagramType("Other")


def _arm_lengths(adj: list[list[int]], center: int) -> Optional[list[int]]:
    """Lengths of the simple paths hanging off ``center``; None if not paths."""
    arms = []
    for start in adj[center]:
        prev, cur, length = center, start, 1
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return sorted(arms)


def diagram_type(q: Quiver) -> DiagramType:
    """Recognise simply-laced Dynkin / extended Dynkin diagrams and Kronecker."""
    n = q.n
    if n == 1:
        return DiagramType("A", 1)
    if not is_connected(q):
        return OTHER
    mult = q.max_multiplicity()
    if mult >= 2:
        if n == 2 and mult == 2:
            return DiagramType("Kronecker")
        return OTHER
    adj = [[w for w in range(n) if q.b[v][w]] for v in range(n)]
    deg = [len(a) for a in adj]
    edges = sum(deg) // 2
    if edges == n and all(d == 2 for d in deg):
        return DiagramType("ExtendedA", n - 1)
    if edges != n - 1:
        return OTHER
    branch = [v for v in range(n) if deg[v] >= 3]
    if not branch:
        return DiagramType("A", n)
    if len(branch) == 1:
        c = branch[0]
        arms = _arm_lengths(adj, c)
        if arms is None:
            return OTHER
        if deg[c] == 4:
            return DiagramType("ExtendedD", 4) if arms == [1, 1, 1, 1] else OTHER
        if deg[c] != 3:
            return OTHER
        if arms[:2] == [1, 1]:
            return DiagramType("D", n)
        table = {
            (1, 2, 2): DiagramType("E", 6),
            (1, 2, 3): DiagramType("E", 7),
            (1, 2, 4): DiagramType("E", 8),
            (2, 2, 2): DiagramType("ExtendedE", 6),
            (1, 3, 3): DiagramType("ExtendedE", 7),
            (1, 2, 5): DiagramType("ExtendedE", 8),
        }
        return table.get(tuple(arms), OTHER)
    if len(branch) == 2 and all(deg[v] == 3 for v in branch):
        leaves = {v for v in range(n) if deg[v] == 1}
        if all(sum(1 for w in adj[v] if w in leaves) == 2 for v in branch):
            return DiagramType("ExtendedD", n - 1)
    return OTHER


def is_dynkin(q: Quiver) -> bool:
    return diagram_type(q).is_dynkin


# -- standard quivers -----------------------------------------------------------


def linear_quiver(n: int) -> Quiver:
    """The equioriented path ``1 -> 2 -> ... -> n``."""
    return from_arrows(n, [(i, i + 1) for i in range(1, n)])


def kronecker(m: int = 2) -> Quiver:
    return from_arrows(2, [(1, 2, m)])


def dynkin_tree_edges(kind: "DiagramType | str") -> list[tuple[int, int]]:
    """Undirected edge list of a Dynkin or extended Dynkin diagram (1-based)."""
    if isinstance(kind, str):
        kind = DiagramType.parse(kind)
    f, r = kind.family, kind.rank
    if f == "A":
        return [(i, i + 1) for i in range(1, r)]
    if f == "D":
        return [(i, i + 1) for i in range(1, r - 1)] + [(r - 2, r)]
    if f == "E":
        return [(i, i + 1) for i in range(1, r - 1)] + [(3, r)]
    if f == "ExtendedA":
        return [(i, i + 1) for i in range(1, r + 1)] + [(1, r + 1)]
    if f == "ExtendedD":
        if r == 4:
            return [(1, 2), (1, 3), (1, 4), (1, 5)]
        return [(1, 3), (2, 3)] + [(i, i + 1) for i in range(3, r - 1)] + [
            (r - 1, r), (r - 1, r + 1)
        ]
    if f == "ExtendedE":
        arms = {6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}[r]
        edges, nxt = [], 2
        for length in arms:
            prev = 1
            for _ in range(length):
                edges.append((prev, nxt))
                prev, nxt = nxt, nxt + 1
        return edges
    raise ValueError(f"no standard diagram for {kind}")


def oriented_diagram(kind: "DiagramType | str", orientation: Optional[Sequence[bool]] = None) -> Quiver:
    """A quiver on the given diagram; ``orientation[e]`` flips edge ``e`` when true."""
    edges = dynkin_tree_edges(kind)
    n = max(max(e) for e in edges) if edges else 1
    if orientation is None:
        orientation = [False] * len(edges)
    arrows = [(j, i) if flip else (i, j) for (i, j), flip in zip(edges, orientation)]
    return from_arrows(n, arrows)


# -- serialisation -------------------------------------------------------------


def to_text(q: Quiver) -> str:
    lines = [str(q.n)]
    lines += [f"{i} {j}" if m == 1 else f"{i} {j} {m}" for i, j, m in q.arrows()]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Quiver:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty quiver text")
    try:
        n = int(lines[0])
        arrows = []
        for ln in lines[1:]:
            parts = [int(p) for p in ln.split()]
            if len(parts) not in (2, 3):
                raise FormatError(f"bad arrow line {ln!r}")
            arrows.append(tuple(parts))
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"cannot parse quiver text: {exc}") from exc
    return from_arrows(n, arrows)


def to_dict(q: Quiver) -> dict:
    return {"n": q.n, "arrows": [list(a) for a in q.arrows()]}


def from_dict(data: dict) -> Quiver:
    try:
        return from_arrows(int(data["n"]), [tuple(a) for a in data["arrows"]])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad quiver JSON: {exc}") from exc


def to_json(q: Quiver) -> str:
    return json.dumps(to_dict(q), sort_keys=True)


def from_json(text: str) -> Quiver:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad quiver JSON: {exc}") from exc
    return from_dict(data)


def parse_quiver(text: str) -> Quiver:
    """Accept either the JSON or the line-based text format."""
    if text.lstrip().startswith("{"):
        return from_json(text)
    return from_text(text)
