"""Auslander-Reiten quivers of Dynkin path algebras by knitting."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from . import quiver as qv
from .errors import InternalInconsistency, NotDynkin
from .quiver import Quiver
from .representations import (
    DimVector,
    Representation,
    build_indecomposables,
    ext_dim,
    hom_dim,
    injective_dims,
    projective_dims,
    sink_order,
)


@dataclass(frozen=True, eq=False)
class ARQuiver:
    """Indecomposables of ``mod kQ`` as indexed vertices.

    ``arrows[(a, b)]`` is the number of irreducible maps from object ``a`` to
    object ``b``; ``tau[z]`` is defined for every non-projective ``z``.
    """

    quiver: Quiver
    dims: tuple[DimVector, ...]
    arrows: dict[tuple[int, int], int]
    tau: dict[int, int]
    projective: dict[int, int]  # vertex -> object index of P_i
    injective: dict[int, int]  # vertex -> object index of I_i
    _index: dict[DimVector, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index.update({d: k for k, d in enumerate(self.dims)})

    def __len__(self) -> int:
        return len(self.dims)

    def index_of(self, d) -> Optional[int]:
        return self._index.get(tuple(d))

    def is_projective(self, k: int) -> bool:
        return k in self.projective.values()

    def is_injective(self, k: int) -> bool:
        return k in self.injective.values()

    def projective_vertex(self, k: int) -> Optional[int]:
        return next((i for i, o in self.projective.items() if o == k), None)

    def injective_vertex(self, k: int) -> Optional[int]:
        return next((i for i, o in self.injective.items() if o == k), None)

    @cached_property
    def tau_inverse(self) -> dict[int, int]:
        return {v: k for k, v in self.tau.items()}

    def predecessors(self, k: int) -> list[tuple[int, int]]:
        return sorted((a, m) for (a, b), m in self.arrows.items() if b == k)

    def successors(self, k: int) -> list[tuple[int, int]]:
        return sorted((b, m) for (a, b), m in self.arrows.items() if a == k)

    def label(self, k: int) -> str:
        i = self.projective_vertex(k)
        if i is not None:
            return f"P{i}"
        d = self.dims[k]
        if sum(d) == 1:
            return f"S{d.index(1) + 1}"
        i = self.injective_vertex(k)
        if i is not None:
            return f"I{i}"
        return "M" + "".join(map(str, d)) if max(d) < 10 else "M" + ",".join(map(str, d))

    @cached_property
    def representations(self) -> tuple[Representation, ...]:
        """Explicit models, aligned with ``dims``."""
        return tuple(build_indecomposables(self.quiver, self.dims))

    @cached_property
    def ext_table(self) -> tuple[tuple[int, ...], ...]:
        reps = self.representations
        return tuple(tuple(ext_dim(x, y) for y in reps) for x in reps)

    @cached_property
    def hom_table(self) -> tuple[tuple[int, ...], ...]:
        reps = self.representations
        return tuple(tuple(hom_dim(x, y) for y in reps) for x in reps)


def _add(u, v, c=1):
    return tuple(a + c * b for a, b in zip(u, v))


def knit_ar_quiver(q: Quiver) -> ARQuiver:
    """Knit the AR quiver starting from the indecomposable projectives.

    For a processed object ``X`` the mesh rule gives
    ``dim tau^-1 X = sum(dim E) - dim X`` over the direct successors ``E`` of
    ``X``; those are ``tau^-1`` of its predecessors plus any projective it maps
    to.  A non-positive result marks ``X`` as injective.
    """
    if not qv.is_dynkin(q):
        raise NotDynkin(f"quiver of type {qv.diagram_type(q)} is not Dynkin")
    n = q.n
    # Projectives P_j with j a sink come first (they have no predecessors).
    order = sink_order(q)
    dims: list[DimVector] = [projective_dims(q, i) for i in order]
    projective = {i: k for k, i in enumerate(order)}
    arrows: dict[tuple[int, int], int] = {}
    for i, j, m in q.arrows():
        # rad P_i contains P_j once per arrow i -> j
        arrows[(projective[j], projective[i])] = m
    preds: dict[int, list[tuple[int, int]]] = {k: [] for k in range(n)}
    for (a, b), m in arrows.items():
        preds[b].append((a, m))
    tau_inv: dict[int, int] = {}
    injective_objs: set[int] = set()
    inj_dims = {injective_dims(q, i): i for i in range(1, n + 1)}
    processed: set[int] = set()
    limit = 64 * n * n
    while len(processed) < len(dims):
        ready = [
            k for k in range(len(dims))
            if k not in processed and all(a in processed for a, _ in preds[k])
        ]
        if not ready or len(dims) > limit:
            raise InternalInconsistency("knitting stalled")
        for x in ready:
            processed.add(x)
            succ: list[tuple[int, int]] = [
                (tau_inv[a], m) for a, m in preds[x] if a in tau_inv
            ]
            succ += [(b, m) for (a, b), m in arrows.items() if a == x and b in projective.values()]
            total = tuple([0] * n)
            for e, m in succ:
                total = _add(total, dims[e], m)
            new = _add(total, dims[x], -1)
            if dims[x] in inj_dims:
                lost = inj_dims[dims[x]]
                if new != tuple(-int(v == lost - 1) for v in range(n)):
                    raise InternalInconsistency(f"mesh at injective I{lost} does not close")
                injective_objs.add(x)
                continue
            if min(new) < 0 or not any(new):
                raise InternalInconsistency(f"mesh at {dims[x]} produced {new}")
            y = len(dims)
            dims.append(new)
            tau_inv[x] = y
            preds[y] = []
            for e, m in succ:
                arrows[(e, y)] = arrows.get((e, y), 0) + m
                preds[y].append((e, m))
    injective = {inj_dims[dims[k]]: k for k in injective_objs}
    if len(injective) != n:
        raise InternalInconsistency("knitting did not reach every injective")
    ar = ARQuiver(
        quiver=q,
        dims=tuple(dims),
        arrows=dict(sorted(arrows.items())),
        tau={y: x for x, y in sorted(tau_inv.items())},
        projective=dict(sorted(projective.items())),
        injective=dict(sorted(injective.items())),
    )
    if len(set(ar.dims)) != len(ar.dims):
        raise InternalInconsistency("knitting produced a repeated dimension vector")
    return ar


def mesh_defects(ar: ARQuiver) -> list[int]:
    """Non-projective objects at which mesh additivity fails (empty when sound)."""
    bad = []
    for z, tz in ar.tau.items():
        total = _add(ar.dims[z], ar.dims[tz])
        mid = tuple([0] * ar.quiver.n)
        for e, m in ar.predecessors(z):
            mid = _add(mid, ar.dims[e], m)
        if total != mid:
            bad.append(z)
    return bad


# -- export -----------------------------------------------------------------------


def ar_to_dict(ar: ARQuiver) -> dict:
    return {
        "quiver": qv.to_dict(ar.quiver),
        "objects": [
            {
                "index": k,
                "label": ar.label(k),
                "dims": list(d),
                "projective": ar.is_projective(k),
                "injective": ar.is_injective(k),
            }
            for k, d in enumerate(ar.dims)
        ],
        "arrows": [[a, b, m] for (a, b), m in sorted(ar.arrows.items())],
        "tau": [[z, t] for z, t in sorted(ar.tau.items())],
    }


def ar_to_json(ar: ARQuiver) -> str:
    return json.dumps(ar_to_dict(ar), indent=1, sort_keys=True)


def ar_to_dot(ar: ARQuiver, name: str = "ar") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for k, d in enumerate(ar.dims):
        shape = "box" if ar.is_projective(k) else "ellipse"
        lines.append(f'  n{k} [label="{ar.label(k)}\\n{"".join(map(str, d))}", shape={shape}];')
    for (a, b), m in sorted(ar.arrows.items()):
        for _ in range(m):
            lines.append(f"  n{a} -> n{b};")
    for z, t in sorted(ar.tau.items()):
        lines.append(f"  n{z} -> n{t} [style=dashed, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
