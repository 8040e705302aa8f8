"""Seeds, the exchange relation and seed equivalence."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from . import quiver as qv
from .laurent import LaurentPolynomial, exact_div, laurent_from_json, laurent_to_json
from .quiver import Quiver

log = logging.getLogger(__name__)

SeedKey = bytes


@dataclass(frozen=True)
class Seed:
    """An ordered cluster whose ``i``-th entry labels vertex ``i`` of ``quiver``."""

    cluster: tuple[LaurentPolynomial, ...]
    quiver: Quiver

    def __post_init__(self) -> None:
        object.__setattr__(self, "cluster", tuple(self.cluster))
        if len(self.cluster) != self.quiver.n:
            raise ValueError("cluster size does not match the quiver")

    @property
    def n(self) -> int:
        return self.quiver.n

    def mutate(self, k: int) -> "Seed":
        return mutate_seed(self, k)

    def relabel(self, perm) -> "Seed":
        return Seed(tuple(self.cluster[p] for p in perm), self.quiver.relabel(perm))


def initial_seed(q: Quiver) -> Seed:
    n = q.n
    return Seed(tuple(LaurentPolynomial.variable(n, i) for i in range(1, n + 1)), q)


def exchange_monomials(s: Seed, k: int) -> tuple[LaurentPolynomial, LaurentPolynomial]:
    """The two monomials of the exchange relation at the 1-based vertex ``k``.

    The first collects arrows into ``k``, the second arrows out of ``k``.
    """
    n = s.n
    b = s.quiver.b
    one = LaurentPolynomial.constant(s.cluster[0].n)
    into, out = one, one
    for j in range(n):
        m = b[j][k - 1]
        if m > 0:
            into = into * s.cluster[j] ** m
        elif m < 0:
            out = out * s.cluster[j] ** (-m)
    return into, out


def mutate_seed(s: Seed, k: int) -> Seed:
    """Seed mutation at the 1-based vertex ``k``.

    Raises NonExactDivision if the new variable is not a Laurent polynomial,
    which for seeds reached from an initial seed means an engine bug.
    """
    if not 1 <= k <= s.n:
        raise IndexError(f"vertex {k} out of range for n={s.n}")
    m_in, m_out = exchange_monomials(s, k)
    new = exact_div(m_in + m_out, s.cluster[k - 1])
    cluster = list(s.cluster)
    cluster[k - 1] = new
    return Seed(tuple(cluster), qv.mutate(s.quiver, k))


def _flat(b) -> tuple[int, ...]:
    return tuple(x for row in b for x in row)


def canonical_seed(s: Seed) -> tuple[Seed, SeedKey]:
    """Representative of ``s`` up to simultaneous rearrangement, plus its key.

    Entries are sorted by the total order on Laurent polynomials; if equal
    entries occur (never observed), every ordering of the tied blocks is
    tried and the smallest permuted matrix wins.
    """
    order = sorted(range(s.n), key=lambda i: s.cluster[i].sort_key)
    blocks = [list(g) for _, g in itertools.groupby(order, key=lambda i: s.cluster[i])]
    if len(blocks) == s.n:
        canon = s.relabel(order)
    else:
        log.warning("seed has repeated cluster entries; canonicalising over ties")
        best = None
        for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
            perm = [i for block in choice for i in block]
            cand = s.relabel(perm)
            if best is None or _flat(cand.quiver.b) < _flat(best.quiver.b):
                best = cand
        canon = best
    return canon, seed_key(canon)


def seed_key(s: Seed) -> SeedKey:
    """Byte encoding of a seed exactly as ordered (canonicalise first)."""
    parts = []
    for f in s.cluster:
        parts.append(";".join(
            f"{c}:" + ",".join(map(str, e)) for e, c in f.sorted_terms()
        ))
    return ("|".join(parts) + "#").encode() + qv.encode_matrix(s.quiver.b)


def cluster_set(s: Seed) -> frozenset[LaurentPolynomial]:
    return frozenset(s.cluster)


def has_distinct_entries(s: Seed) -> bool:
    return len(set(s.cluster)) == s.n


def seed_to_dict(s: Seed) -> dict:
    return {"cluster": [laurent_to_json(f) for f in s.cluster], "quiver": qv.to_dict(s.quiver)}


def seed_from_dict(data: dict) -> Seed:
    q = qv.from_dict(data["quiver"])
    return Seed(tuple(laurent_from_json(f, q.n) for f in data["cluster"]), q)
