"""Representations of acyclic quivers over the rationals.

A representation assigns a vector space ``V_i = Q^{d_i}`` to each vertex and
a ``d_j x d_i`` matrix to each arrow ``i -> j``.  Arrows of multiplicity ``m``
are expanded into keys ``(i, j, 0) .. (i, j, m - 1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import quiver as qv
from .errors import InternalInconsistency, NegativeExt, NotAcyclic, NotDynkin, ShapeMismatch
from .linalg import Matrix, left_nullspace, nullspace, vstack
from .quiver import Quiver

ArrowKey = tuple[int, int, int]
DimVector = tuple[int, ...]


def arrow_keys(q: Quiver) -> list[ArrowKey]:
    return [(i, j, c) for i, j, m in q.arrows() for c in range(m)]


@dataclass(frozen=True)
class Representation:
    quiver: Quiver
    dims: DimVector
    maps: tuple[tuple[ArrowKey, Matrix], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(self.dims))
        if len(self.dims) != self.quiver.n or min(self.dims, default=0) < 0:
            raise ShapeMismatch("dimension vector does not fit the quiver")
        keys = arrow_keys(self.quiver)
        if sorted(k for k, _ in self.maps) != keys:
            raise ShapeMismatch("maps do not match the arrows of the quiver")
        for (i, j, _), a in self.maps:
            if a.shape != (self.dims[j - 1], self.dims[i - 1]):
                raise ShapeMismatch(f"map on arrow {i}->{j} has shape {a.shape}")

    @classmethod
    def build(cls, q: Quiver, dims: Sequence[int], maps: Mapping[ArrowKey, Matrix]) -> "Representation":
        return cls(q, tuple(dims), tuple(sorted(maps.items())))

    def map(self, key: ArrowKey) -> Matrix:
        return dict(self.maps)[key]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)


def zero_maps(q: Quiver, dims: Sequence[int]) -> dict[ArrowKey, Matrix]:
    return {(i, j, c): Matrix.zeros(dims[j - 1], dims[i - 1]) for i, j, c in arrow_keys(q)}


def simple(q: Quiver, k: int) -> Representation:
    dims = [0] * q.n
    dims[k - 1] = 1
    return Representation.build(q, dims, zero_maps(q, dims))


# -- projectives and injectives from paths --------------------------------------


def paths_from(q: Quiver, i: int) -> list[tuple[ArrowKey, ...]]:
    """All paths starting at ``i`` (the trivial path first); ``q`` must be acyclic."""
    out: list[tuple[ArrowKey, ...]] = [()]
    stack: list[tuple[int, tuple[ArrowKey, ...]]] = [(i, ())]
    keys = arrow_keys(q)
    while stack:
        v, p = stack.pop()
        for a in keys:
            if a[0] == v:
                out.append(p + (a,))
                stack.append((a[1], p + (a,)))
    return out


def _end(i: int, path: tuple[ArrowKey, ...]) -> int:
    return path[-1][1] if path else i


def projective(q: Quiver, i: int) -> Representation:
    """``P_i``: at vertex ``j`` the span of paths ``i ~> j``; arrows append."""
    if not qv.is_acyclic(q):
        raise NotAcyclic("path-basis projectives need an acyclic quiver")
    paths = paths_from(q, i)
    basis = {j: [p for p in paths if _end(i, p) == j] for j in range(1, q.n + 1)}
    maps = {}
    for a in arrow_keys(q):
        src, dst = basis[a[0]], basis[a[1]]
        index = {p: r for r, p in enumerate(dst)}
        rows = [[0] * len(src) for _ in dst]
        for c, p in enumerate(src):
            rows[index[p + (a,)]][c] = 1
        maps[a] = Matrix.of(rows, len(src))
    return Representation.build(q, [len(basis[j]) for j in range(1, q.n + 1)], maps)


def projective_dims(q: Quiver, i: int) -> DimVector:
    counts = [0] * q.n
    for p in paths_from(q, i):
        counts[_end(i, p) - 1] += 1
    return tuple(counts)


def injective_dims(q: Quiver, i: int) -> DimVector:
    """``dim I_i``: number of paths ending at ``i`` from each vertex."""
    return projective_dims(opposite(q), i)


def opposite(q: Quiver) -> Quiver:
    return Quiver(tuple(tuple(-x for x in row) for row in q.b))


# -- reflection functors --------------------------------------------------------


def reflect_vector(q: Quiver, d: Sequence[int], k: int) -> DimVector:
    """Simple reflection of a dimension vector at ``k``."""
    s = sum(abs(q.b[k - 1][j]) * d[j] for j in range(q.n))
    out = list(d)
    out[k - 1] = s - d[k - 1]
    return tuple(out)


def reflect_source(rep: Representation, k: int) -> Representation:
    """BGP functor at a source ``k``: ``V_k`` becomes the cokernel of ``V_k -> (+) V_j``.

    The result lives on the quiver with every arrow at ``k`` reversed, so
    ``k`` becomes a sink.
    """
    q = rep.quiver
    if not q.is_source(k):
        raise ValueError(f"vertex {k} is not a source")
    out_keys = [a for a in arrow_keys(q) if a[0] == k]
    maps = dict(rep.maps)
    dk = rep.dims[k - 1]
    h = vstack([maps[a] for a in out_keys], dk)
    c = left_nullspace(h)
    new_dims = list(rep.dims)
    new_dims[k - 1] = c.rows
    expected = reflect_vector(q, rep.dims, k)[k - 1]
    if c.rows != expected:
        raise InternalInconsistency("source map is not injective; representation has an S_k summand")
    new_maps = {a: m for a, m in maps.items() if a[0] != k}
    start = 0
    for a in out_keys:
        width = rep.dims[a[1] - 1]
        new_maps[(a[1], k, a[2])] = c.column_block(start, start + width)
        start += width
    return Representation.build(reverse_at(q, k), new_dims, new_maps)


def reverse_at(q: Quiver, k: int) -> Quiver:
    b = [list(r) for r in q.b]
    for j in range(q.n):
        b[k - 1][j] = -b[k - 1][j]
        b[j][k - 1] = -b[j][k - 1]
    return Quiver(tuple(tuple(r) for r in b))


def _require_dynkin(q: Quiver) -> None:
    if not qv.is_dynkin(q):
        raise NotDynkin(f"quiver of type {qv.diagram_type(q)} is not Dynkin")


def indecomposable(q: Quiver, d: Sequence[int]) -> Representation:
    """The indecomposable with dimension vector ``d`` (a positive root).

    Sink reflections are applied until ``d`` becomes a simple root, then the
    simple is carried back with source reflections in reverse order.
    """
    _require_dynkin(q)
    d = tuple(d)
    steps: list[int] = []
    cur = q
    order = sink_order(q)
    # A positive root reaches a simple root within one Coxeter number (<= 30) of rounds.
    limit = 32 * q.n
    while sum(d) != 1:
        if len(steps) > limit or min(d) < 0:
            raise InternalInconsistency(f"{d} is not a positive root")
        k = order[len(steps) % q.n]
        assert cur.is_sink(k)
        d = reflect_vector(cur, d, k)
        cur = reverse_at(cur, k)
        steps.append(k)
    rep = simple(cur, d.index(1) + 1)
    for k in reversed(steps):
        rep = reflect_source(rep, k)
    assert rep.quiver == q
    return rep


def sink_order(q: Quiver) -> list[int]:
    """Admissible ordering: each vertex is a sink once its predecessors are reflected."""
    out_deg = {v: sum(1 for i, _, _ in q.arrows() if i == v) for v in range(1, q.n + 1)}
    order: list[int] = []
    ready = sorted(v for v, d in out_deg.items() if d == 0)
    while ready:
        v = ready.pop(0)
        order.append(v)
        for i, j, _ in q.arrows():
            if j == v:
                out_deg[i] -= 1
                if out_deg[i] == 0:
                    ready.append(i)
        ready.sort()
    if len(order) != q.n:
        raise NotAcyclic("quiver has an oriented cycle")
    return order


def build_indecomposables(q: Quiver, roots: Optional[Sequence[DimVector]] = None) -> list[Representation]:
    """One explicit indecomposable per positive root, each with ``End = k``."""
    _require_dynkin(q)
    if roots is None:
        roots = positive_roots(q)
    reps = []
    for d in roots:
        rep = indecomposable(q, d)
        if rep.dims != tuple(d):
            raise InternalInconsistency(f"reflection produced {rep.dims} instead of {tuple(d)}")
        if hom_dim(rep, rep) != 1:
            raise InternalInconsistency(f"representation with dims {d} is not a brick")
        reps.append(rep)
    return reps


# -- Hom and Ext ------------------------------------------------------------------


def hom_dim(x: Representation, y: Representation) -> int:
    """Dimension of the space of morphisms ``x -> y``."""
    if x.quiver != y.quiver:
        raise ShapeMismatch("representations live on different quivers")
    n = x.quiver.n
    offsets, total = [], 0
    for v in range(n):
        offsets.append(total)
        total += y.dims[v] * x.dims[v]
    if total == 0:
        return 0

    def var(v: int, r: int, c: int) -> int:
        # entry (r, c) of phi_v, a dims_y[v] x dims_x[v] matrix
        return offsets[v] + r * x.dims[v] + c

    xm, ym = dict(x.maps), dict(y.maps)
    rows: list[list[Fraction]] = []
    for a in arrow_keys(x.quiver):
        i, j = a[0] - 1, a[1] - 1
        xa, ya = xm[a], ym[a]
        # (phi_j X_a - Y_a phi_i)[r, c] = 0 for r < dy_j, c < dx_i
        for r in range(y.dims[j]):
            for c in range(x.dims[i]):
                row = [Fraction(0)] * total
                for t in range(x.dims[j]):
                    if xa[t, c]:
                        row[var(j, r, t)] += xa[t, c]
                for t in range(y.dims[i]):
                    if ya[r, t]:
                        row[var(i, t, c)] -= ya[r, t]
                if any(row):
                    rows.append(row)
    return len(nullspace(rows, total))


def euler_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    s = sum(a * b for a, b in zip(d, e))
    for i, j, m in q.arrows():
        s -= m * d[i - 1] * e[j - 1]
    return s


def ext_dim(x: Representation, y: Representation) -> int:
    """``dim Ext^1(x, y)`` from the hereditary Euler form."""
    e = hom_dim(x, y) - euler_form(x.quiver, x.dims, y.dims)
    if e < 0:
        raise NegativeExt(f"Euler form gives Ext dimension {e}")
    return e


# -- positive roots (brute-force oracle) ------------------------------------------

_ROOT_BOUND = {"A": 1, "D": 2}
_E_BOUND = {6: 3, 7: 4, 8: 6}


def tits_form(q: Quiver, d: Sequence[int]) -> int:
    s = sum(x * x for x in d)
    for i, j, m in q.arrows():
        s -= m * d[i - 1] * d[j - 1]
    return s


def positive_roots(q: Quiver) -> list[DimVector]:
    """Positive roots of a Dynkin quiver: closure of the simple roots under reflections.

    Output order: by total dimension, then lexicographically.
    """
    _require_dynkin(q)
    n = q.n
    simple_roots = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    seen = set(simple_roots)
    todo = list(simple_roots)
    while todo:
        d = todo.pop()
        for k in range(1, n + 1):
            r = reflect_vector(q, d, k)
            if min(r) >= 0 and any(r) and r not in seen:
                seen.add(r)
                todo.append(r)
    return sorted(seen, key=lambda d: (sum(d), d))


def positive_roots_bruteforce(q: Quiver) -> list[DimVector]:
    """Independent oracle: every ``d > 0`` in a box with Tits form ``q(d) = 1``.

    The box bound is the largest coefficient of the highest root of the type.
    """
    _require_dynkin(q)
    t = qv.diagram_type(q)
    bound = _ROOT_BOUND.get(t.family) or _E_BOUND[t.rank]
    roots = [
        d for d in itertools.product(range(bound + 1), repeat=q.n)
        if any(d) and tits_form(q, d) == 1
    ]
    return sorted(roots, key=lambda d: (sum(d), d))
