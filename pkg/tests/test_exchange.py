import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterforge import exchange as ex
from clusterforge import quiver as qv
from clusterforge.errors import NotAcyclic, NotConnected
from clusterforge.exchange import FiniteType, InfiniteType, Limits
from clusterforge.laurent import LaurentPolynomial as L
from clusterforge.laurent import ReducedFraction, parse_laurent, reduced_form
from clusterforge.quiver import DiagramType

from conftest import acyclic_quivers

Q1 = qv.linear_quiver(3)
Q2 = qv.from_arrows(3, [(2, 1), (2, 3)])
Q3 = qv.from_arrows(3, [(1, 2), (2, 3), (3, 1)])
Q4 = qv.from_arrows(3, [(1, 2), (3, 2)])
POINT = qv.from_arrows(1, [])
TRIANGLE = qv.from_arrows(3, [(1, 2), (2, 3), (1, 3)])


def frac(num: str, den, n=3) -> ReducedFraction:
    return ReducedFraction(parse_laurent(num, n), tuple(den))


A3_VARIABLES = {
    frac("x1", (0, 0, 0)),
    frac("x2", (0, 0, 0)),
    frac("x3", (0, 0, 0)),
    frac("1 + x2", (1, 0, 0)),
    frac("x1 + x3", (0, 1, 0)),
    frac("1 + x2", (0, 0, 1)),
    frac("x1 + x3 + x2 x3", (1, 1, 0)),
    frac("x1 + x1 x2 + x3", (0, 1, 1)),
    frac("x1 + x1 x2 + x3 + x2 x3", (1, 1, 1)),
}


def brute_class(q: qv.Quiver, cap: int = 200) -> list[qv.Quiver]:
    """Mutation class up to isomorphism, deduplicated by trying every permutation."""
    found = [q]
    frontier = [q]
    while frontier and len(found) < cap:
        cur = frontier.pop()
        for k in range(1, q.n + 1):
            m = cur.mutate(k)
            if not any(m.relabel(p) == f for f in found for p in itertools.permutations(range(q.n))):
                found.append(m)
                frontier.append(m)
    return found


@pytest.fixture(scope="module")
def a3_graph():
    return ex.enumerate_seeds(Q1)


class TestEnumerateSeeds:
    def test_a3(self, a3_graph):
        assert len(a3_graph.nodes) == 14
        assert len(a3_graph.edges) == 21
        assert a3_graph.complete

    def test_point(self):
        g = ex.enumerate_seeds(POINT)
        assert len(g.nodes) == 2 and g.complete
        clusters = {s.cluster for s in g.nodes.values()}
        assert clusters == {(L.variable(1, 1),), (2 * L.variable(1, 1, -1),)}
        assert ex.cluster_variables(g) == {frac("x1", (0,), 1), frac("2", (1,), 1)}

    def test_kronecker_hits_limit(self):
        g = ex.enumerate_seeds(qv.kronecker(), Limits(max_nodes=100))
        assert len(g.nodes) == 100
        assert not g.complete

    def test_depth_limit(self):
        g = ex.enumerate_seeds(Q1, Limits(max_depth=1))
        assert len(g.nodes) == 4 and not g.complete

    def test_a2_variables(self):
        g = ex.enumerate_seeds(qv.linear_quiver(2))
        assert len(g.nodes) == 5
        assert len(ex.cluster_variables(g)) == 5

    def test_a3_variables_exact(self, a3_graph):
        assert ex.cluster_variables(a3_graph) == A3_VARIABLES

    def test_a3_clusters(self, a3_graph):
        clusters = {frozenset(reduced_form(f) for f in s.cluster) for s in a3_graph.nodes.values()}
        assert len(clusters) == 14
        assert all(c <= A3_VARIABLES for c in clusters)
        # x1 sits in 5 clusters: those of the A2 subalgebra on {2, 3}
        assert sum(frac("x1", (0, 0, 0)) in c for c in clusters) == 5

    def test_regular(self, a3_graph):
        assert all(a3_graph.degree(k) == 3 for k in a3_graph.nodes)
        d4 = ex.enumerate_seeds(qv.oriented_diagram("D4"))
        assert len(d4.nodes) == 50
        assert all(d4.degree(k) == 4 for k in d4.nodes)

    def test_root_is_initial_seed(self, a3_graph):
        root = a3_graph.nodes[a3_graph.root]
        assert set(root.cluster) == {L.variable(3, i) for i in (1, 2, 3)}

    def test_deterministic(self, a3_graph):
        again = ex.enumerate_seeds(Q1)
        assert again == a3_graph
        assert list(again.nodes) == list(a3_graph.nodes)
        assert ex.export_json(again) == ex.export_json(a3_graph)
        assert ex.export_dot(again) == ex.export_dot(a3_graph)

    def test_edges_are_mutations(self, a3_graph):
        from clusterforge.seeds import canonical_seed
        for a, b, k in a3_graph.edges:
            assert canonical_seed(a3_graph.nodes[a].mutate(k))[1] == b

    @settings(max_examples=15)
    @given(acyclic_quivers(max_n=4))
    def test_class_membership(self, q):
        g = ex.enumerate_seeds(q, Limits(max_nodes=40))
        mclass = ex.enumerate_quiver_class(q, Limits(max_nodes=2000))
        if mclass.complete:
            assert ex.quiver_class_membership(g, mclass)
            assert all(qv.canonical_form(s.quiver)[0] in mclass for s in g.nodes.values())


class TestQuiverClass:
    def test_a3_class(self):
        c = ex.enumerate_quiver_class(Q1)
        assert c.complete and len(c) == 4
        for q in (Q1, Q2, Q3, Q4):
            assert qv.canonical_form(q)[0] in c

    def test_kronecker_and_triangle(self):
        assert len(ex.enumerate_quiver_class(qv.kronecker())) == 1
        assert len(ex.enumerate_quiver_class(TRIANGLE)) == 2

    @pytest.mark.parametrize("q", [Q1, TRIANGLE, qv.linear_quiver(4), qv.oriented_diagram("D4")])
    def test_matches_bruteforce(self, q):
        assert len(ex.enumerate_quiver_class(q)) == len(brute_class(q))

    def test_stops_at_multiplicity(self):
        wild = qv.from_arrows(3, [(1, 2)] * 3 + [(2, 3)])
        c = ex.enumerate_quiver_class(wild, Limits(max_nodes=5000, max_arrow_multiplicity=64))
        assert not c.complete

    def test_cache(self, tmp_path):
        cache = ex.ClassCache(tmp_path)
        fresh = ex.enumerate_quiver_class(Q3, cache=cache)
        # relabelled and mutated inputs share the cache entry
        assert len(list(tmp_path.iterdir())) == 1
        hit = ex.enumerate_quiver_class(Q3.relabel((2, 0, 1)), cache=cache)
        assert hit == fresh == ex.enumerate_quiver_class(Q3)
        key = qv.encode_matrix(qv.canonical_form(Q3)[0].b)
        assert ex.cache_load(tmp_path, key) == fresh

    def test_corrupt_cache_recomputes(self, tmp_path):
        cache = ex.ClassCache(tmp_path)
        key = qv.encode_matrix(qv.canonical_form(Q1)[0].b)
        cache.path_for(key).write_text("{not json")
        assert cache.load(key) is None
        assert ex.enumerate_quiver_class(Q1, cache=cache) == ex.enumerate_quiver_class(Q1)
        assert cache.load(key) is not None

    def test_incomplete_not_cached(self, tmp_path):
        cache = ex.ClassCache(tmp_path)
        ex.enumerate_quiver_class(qv.linear_quiver(5), Limits(max_nodes=3), cache=cache)
        assert list(tmp_path.iterdir()) == []

    def test_json_roundtrip(self):
        c = ex.enumerate_quiver_class(qv.oriented_diagram("D4"))
        assert ex.import_json(ex.export_json(c)) == c


class TestClassify:
    def test_a3(self):
        v = ex.classify_finite_type(Q1)
        assert v == FiniteType(DiagramType("A", 3), 4, 9)

    def test_kronecker(self):
        v = ex.classify_finite_type(qv.kronecker())
        assert isinstance(v, InfiniteType) and v.witness == qv.kronecker()

    def test_cycle(self):
        v = ex.classify_finite_type(Q3)
        assert v.finite and v.diagram == DiagramType("A", 3)

    def test_triangle_is_infinite(self):
        v = ex.classify_finite_type(TRIANGLE)
        assert isinstance(v, InfiniteType)
        assert v.witness.max_multiplicity() >= 2

    def test_disconnected(self):
        with pytest.raises(NotConnected):
            ex.classify_finite_type(qv.from_arrows(3, [(1, 2)]))

    def test_exhausted_limit(self):
        v = ex.classify_finite_type(qv.linear_quiver(5), Limits(max_nodes=2))
        assert not v.finite

    @pytest.mark.parametrize("name", ["A2", "A4", "D4", "D5"])
    def test_variable_counts(self, name):
        q = qv.oriented_diagram(name)
        v = ex.classify_finite_type(q)
        n = q.n
        positive = {"A": n * (n + 1) // 2, "D": n * (n - 1)}[name[0]]
        assert v.diagram == DiagramType.parse(name)
        assert v.variable_count == positive + n

    @settings(max_examples=25)
    @given(acyclic_quivers(max_n=4, max_mult=2), st.data())
    def test_invariant_under_relabel_and_mutation(self, q, data):
        limits = Limits(max_nodes=400)
        base = ex.classify_finite_type(q, limits, count_variables=False)
        perm = data.draw(st.permutations(range(q.n)))
        k = data.draw(st.integers(1, q.n))
        for other in (q.relabel(perm), q.mutate(k)):
            v = ex.classify_finite_type(other, limits, count_variables=False)
            assert v.finite == base.finite
            if base.finite:
                assert v == base


class TestFiniteMutationClass:
    def test_examples(self):
        assert ex.check_finite_mutation_class(Q1) == (True, True)
        assert ex.check_finite_mutation_class(qv.kronecker()) == (True, True)
        wild = qv.from_arrows(3, [(1, 2)] * 3 + [(2, 3)])
        assert ex.check_finite_mutation_class(wild) == (False, None)

    def test_triangle(self):
        assert ex.check_finite_mutation_class(TRIANGLE) == (True, True)

    def test_rank_two_always_finite(self):
        for m in range(1, 6):
            assert ex.check_finite_mutation_class(qv.kronecker(m)) == (True, True)

    def test_preconditions(self):
        with pytest.raises(NotAcyclic):
            ex.check_finite_mutation_class(Q3)
        with pytest.raises(NotConnected):
            ex.check_finite_mutation_class(qv.from_arrows(2, []))


class TestVerifications:
    @pytest.mark.parametrize("q", [Q1, qv.linear_quiver(2), POINT, qv.oriented_diagram("D4")])
    def test_pass(self, q):
        g = ex.enumerate_seeds(q)
        assert ex.verify_cluster_determines_seed(g)
        assert ex.verify_unique_exchange(g)

    def test_incomplete_rejected(self):
        g = ex.enumerate_seeds(qv.kronecker(), Limits(max_nodes=10))
        with pytest.raises(ValueError):
            ex.verify_unique_exchange(g)
        with pytest.raises(ValueError):
            ex.verify_cluster_determines_seed(g)

    def test_detects_tampering(self, a3_graph):
        nodes = dict(a3_graph.nodes)
        k, s = next(iter(nodes.items()))
        other = next(t for t in nodes.values() if t.quiver != s.quiver)
        nodes[b"fake"] = type(s)(s.cluster, other.quiver)
        bad = ex.ExchangeGraph(nodes, a3_graph.edges, a3_graph.root, True)
        assert not ex.verify_cluster_determines_seed(bad)
        assert not ex.verify_unique_exchange(bad)


class TestExport:
    def test_empty_edge_dot(self):
        g = ex.ExchangeGraph({}, [], b"", True)
        assert ex.export_dot(g) == "graph exchange {\n}\n"
        single = ex.enumerate_quiver_class(POINT)
        dot = ex.export_dot(single)
        assert dot.startswith("graph exchange {") and dot.rstrip().endswith("}")

    def test_dot_lists_nodes_and_edges(self, a3_graph):
        dot = ex.export_dot(a3_graph)
        assert dot.count(" -- ") == 21
        assert dot.count("[label=\"{") == 14

    def test_json_roundtrip(self, a3_graph):
        text = ex.export_json(a3_graph)
        back = ex.import_json(text)
        assert back == a3_graph
        data = json.loads(text)
        assert data["kind"] == "exchange-graph" and len(data["nodes"]) == 14

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ex.import_json('{"kind": "other"}')
