import itertools
import json
import random
from collections import Counter

import pytest

from clusterforge import arquiver as arq
from clusterforge import cluster_category as cc
from clusterforge import exchange as ex
from clusterforge import quiver as qv
from clusterforge import representations as rp
from clusterforge.cluster_category import Module, ShiftedProjective
from clusterforge.errors import NotDynkin, ShapeMismatch
from clusterforge.laurent import LaurentPolynomial as L
from clusterforge.laurent import exact_div
from clusterforge.linalg import Matrix, left_nullspace, nullspace, rank

Q1 = qv.linear_quiver(3)
D4_SUBSPACE = qv.from_arrows(4, [(1, 2), (3, 2), (4, 2)])


def random_orientation(name: str, rng: random.Random) -> qv.Quiver:
    edges = qv.dynkin_tree_edges(name)
    return qv.oriented_diagram(name, [rng.random() < 0.5 for _ in edges])


@pytest.fixture(scope="module")
def a3():
    return arq.knit_ar_quiver(Q1)


def obj(ar, dims):
    k = ar.index_of(dims)
    assert k is not None
    return Module(k)


class TestLinalg:
    def test_rank_and_nullspace(self):
        rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
        assert rank(Matrix.of(rows, 3)) == 2
        ns = nullspace(rows, 3)
        assert len(ns) == 1
        assert all(sum(a * b for a, b in zip(r, ns[0])) == 0 for r in rows)

    def test_left_nullspace(self):
        a = Matrix.of([[1, 0], [0, 1], [1, 1]], 2)
        left = left_nullspace(a)
        assert left.shape == (1, 3)
        assert (left @ a).is_zero()

    def test_identity(self):
        m = Matrix.of([[1, 2], [3, 4]], 2)
        assert Matrix.identity(2) @ m == m


class TestRepresentations:
    def test_simple(self):
        s = rp.simple(Q1, 1)
        assert s.dims == (1, 0, 0)
        assert all(a.is_zero() for _, a in s.maps)

    def test_projective_p1(self):
        p = rp.projective(Q1, 1)
        assert p.dims == (1, 1, 1)
        assert p.map((1, 2, 0)) == Matrix.identity(1)
        assert p.map((2, 3, 0)) == Matrix.identity(1)

    def test_shape_checked(self):
        with pytest.raises(ShapeMismatch):
            rp.Representation.build(Q1, (1, 1, 0), rp.zero_maps(Q1, (1, 0, 0)))
        with pytest.raises(ShapeMismatch):
            rp.Representation.build(Q1, (1, 0), {})

    def test_hom_examples(self):
        p1, p3 = rp.projective(Q1, 1), rp.projective(Q1, 3)
        assert rp.hom_dim(p3, p1) == 1
        assert rp.hom_dim(p1, p3) == 0
        assert rp.hom_dim(rp.simple(Q1, 1), rp.simple(Q1, 3)) == 0
        assert rp.hom_dim(p1, rp.simple(Q1, 1)) == 1

    def test_ext_examples(self):
        s1, s2 = rp.simple(Q1, 1), rp.simple(Q1, 2)
        assert rp.ext_dim(s1, s2) == 1
        assert rp.ext_dim(s2, s1) == 0
        assert rp.euler_form(Q1, (1, 0, 0), (0, 1, 0)) == -1

    def test_hom_mismatch(self):
        with pytest.raises(ShapeMismatch):
            rp.hom_dim(rp.simple(Q1, 1), rp.simple(qv.linear_quiver(2), 1))

    def test_non_dynkin(self):
        with pytest.raises(NotDynkin):
            rp.build_indecomposables(qv.kronecker())

    def test_reflected_projectives_match_path_basis(self):
        # The reflection construction and the path-basis construction agree up to iso.
        for q in (Q1, D4_SUBSPACE, qv.oriented_diagram("E6")):
            for i in range(1, q.n + 1):
                p = rp.projective(q, i)
                x = rp.indecomposable(q, p.dims)
                assert rp.hom_dim(p, x) >= 1 and rp.hom_dim(x, p) >= 1
                assert rp.hom_dim(p, p) == 1

    @pytest.mark.parametrize("name", ["A1", "A2", "A3", "A4", "A5", "D4", "D5", "E6"])
    def test_roots_match_oracle(self, name):
        rng = random.Random(name)
        for _ in range(3):
            q = random_orientation(name, rng)
            assert rp.positive_roots(q) == rp.positive_roots_bruteforce(q)

    def test_root_counts(self):
        expected = {"A4": 10, "D4": 12, "D5": 20, "E6": 36, "E7": 63, "E8": 120}
        for name, count in expected.items():
            assert len(rp.positive_roots(qv.oriented_diagram(name))) == count

    @pytest.mark.parametrize("name", ["A3", "A4", "D4", "D5"])
    def test_indecomposables_are_bricks(self, name):
        q = random_orientation(name, random.Random(3))
        reps = rp.build_indecomposables(q)
        assert [r.dims for r in reps] == rp.positive_roots(q)
        for x, y in itertools.combinations(reps, 2):
            # distinct indecomposables of a Dynkin quiver: not both Hom directions nonzero
            assert rp.hom_dim(x, y) == 0 or rp.hom_dim(y, x) == 0
        for x, y in itertools.product(reps, repeat=2):
            assert rp.ext_dim(x, y) >= 0


class TestKnitting:
    def test_a3_objects(self, a3):
        assert list(a3.dims) == [(0, 0, 1), (0, 1, 1), (1, 1, 1), (0, 1, 0), (1, 1, 0), (1, 0, 0)]
        assert [a3.label(k) for k in range(6)] == ["P3", "P2", "P1", "S2", "I2", "S1"]
        s1, s2 = a3.index_of((1, 0, 0)), a3.index_of((0, 1, 0))
        assert a3.tau[s1] == s2

    def test_a3_arrows(self, a3):
        # P3 -> P2 -> P1, P2 -> S2, P1 -> I2, S2 -> I2, I2 -> S1
        assert a3.arrows == {(0, 1): 1, (1, 2): 1, (1, 3): 1, (2, 4): 1, (3, 4): 1, (4, 5): 1}
        assert a3.projective == {1: 2, 2: 1, 3: 0}
        assert a3.injective == {1: 5, 2: 4, 3: 2}

    def test_a2_and_d4(self):
        assert len(arq.knit_ar_quiver(qv.linear_quiver(2))) == 3
        assert len(arq.knit_ar_quiver(D4_SUBSPACE)) == 12

    @pytest.mark.parametrize("name", ["A1", "A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "E8"])
    def test_counts_and_mesh(self, name):
        rng = random.Random(name)
        for _ in range(3):
            q = random_orientation(name, rng)
            ar = arq.knit_ar_quiver(q)
            # the box search is too slow for E8; its 120 roots are checked elsewhere
            oracle = rp.positive_roots(q) if name == "E8" else rp.positive_roots_bruteforce(q)
            assert sorted(ar.dims) == sorted(oracle)
            assert arq.mesh_defects(ar) == []
            assert len(ar.tau) == len(ar) - q.n

    def test_projective_and_injective_dims(self):
        q = random_orientation("D5", random.Random(1))
        ar = arq.knit_ar_quiver(q)
        for i in range(1, q.n + 1):
            assert ar.dims[ar.projective[i]] == rp.projective_dims(q, i)
            assert ar.dims[ar.injective[i]] == rp.injective_dims(q, i)

    def test_arrows_are_irreducible_maps(self, a3):
        hom = a3.hom_table
        for (a, b) in a3.arrows:
            assert hom[a][b] == 1
        # tau X has Ext^1(X, tau X) = Hom(tau X, tau X) = 1 by the AR formula
        ext = a3.ext_table
        for z, t in a3.tau.items():
            assert ext[z][t] == 1

    def test_non_dynkin(self):
        with pytest.raises(NotDynkin):
            arq.knit_ar_quiver(qv.kronecker())
        with pytest.raises(NotDynkin):
            arq.knit_ar_quiver(qv.from_arrows(3, [(1, 2), (2, 3), (3, 1)]))

    def test_exports(self, a3):
        data = json.loads(arq.ar_to_json(a3))
        assert len(data["objects"]) == 6 and data["tau"]
        assert data == arq.ar_to_dict(a3)
        dot = arq.ar_to_dot(a3)
        assert dot.count("style=dashed") == 3
        assert arq.ar_to_json(arq.knit_ar_quiver(Q1)) == arq.ar_to_json(a3)


class TestClusterCategory:
    def test_fundamental_domain(self, a3):
        dom = cc.fundamental_domain(a3)
        assert len(dom) == 9 and len(set(dom)) == 9

    def test_tau(self, a3):
        s1, s2 = obj(a3, (1, 0, 0)), obj(a3, (0, 1, 0))
        assert cc.tau_cluster(s1, a3) == s2
        p1 = Module(a3.projective[1])
        assert cc.tau_cluster(p1, a3) == ShiftedProjective(1)
        assert cc.tau_cluster(ShiftedProjective(1), a3) == Module(a3.injective[1])

    def test_tau_is_a_permutation(self, a3):
        dom = cc.fundamental_domain(a3)
        image = [cc.tau_cluster(o, a3) for o in dom]
        assert sorted(image) == sorted(dom)
        for o in dom:
            assert cc.tau_inverse_cluster(cc.tau_cluster(o, a3), a3) == o
        lengths = []
        seen = set()
        for o in dom:
            if o in seen:
                continue
            cur, n = o, 0
            while True:
                seen.add(cur)
                cur, n = cc.tau_cluster(cur, a3), n + 1
                if cur == o:
                    break
            lengths.append(n)
        assert sorted(lengths) == [3, 6]

    def test_ext_examples(self, a3):
        p2, s1, s2 = Module(a3.projective[2]), obj(a3, (1, 0, 0)), obj(a3, (0, 1, 0))
        assert cc.ext1_cluster(p2, s1, a3) == 1
        assert cc.ext1_cluster(ShiftedProjective(1), s1, a3) == 1
        assert cc.ext1_cluster(s1, s2, a3) == 1
        p3 = Module(a3.projective[3])
        assert cc.ext1_cluster(ShiftedProjective(3), p3, a3) == 1
        assert cc.ext1_cluster(ShiftedProjective(1), ShiftedProjective(2), a3) == 0

    @pytest.mark.parametrize("q", [Q1, D4_SUBSPACE, qv.oriented_diagram("A4")])
    def test_2cy_symmetry(self, q):
        ar = arq.knit_ar_quiver(q)
        dom = cc.fundamental_domain(ar)
        for a, b in itertools.product(dom, repeat=2):
            assert cc.ext1_cluster(a, b, ar) == cc.ext1_cluster(b, a, ar)

    def test_ext_is_tau_invariant(self, a3):
        dom = cc.fundamental_domain(a3)
        for a, b in itertools.product(dom, repeat=2):
            assert cc.ext1_cluster(a, b, a3) == cc.ext1_cluster(cc.tau_cluster(a, a3), cc.tau_cluster(b, a3), a3)


class TestClusterTilting:
    def test_a3_ctos(self, a3):
        ctos = cc.enumerate_cluster_tilting(Q1, a3)
        assert len(ctos) == 14
        projectives = cc.ClusterTiltingObject(tuple(Module(a3.projective[i]) for i in (1, 2, 3)))
        shifted = cc.ClusterTiltingObject(tuple(ShiftedProjective(i) for i in (1, 2, 3)))
        assert projectives in ctos and shifted in ctos

    def test_bruteforce_agrees(self, a3):
        dom = cc.fundamental_domain(a3)
        rigid = [
            set(s) for s in itertools.combinations(dom, 3)
            if all(cc.ext1_cluster(a, b, a3) == 0 for a, b in itertools.combinations(s, 2))
        ]
        assert len(rigid) == 14
        assert {frozenset(t) for t in cc.enumerate_cluster_tilting(Q1, a3)} == {frozenset(s) for s in rigid}

    def test_counts(self):
        assert len(cc.enumerate_cluster_tilting(qv.linear_quiver(2))) == 5
        assert len(cc.enumerate_cluster_tilting(qv.from_arrows(1, []))) == 2
        assert len(cc.enumerate_cluster_tilting(D4_SUBSPACE)) == 50
        assert len(cc.enumerate_cluster_tilting(qv.oriented_diagram("A4"))) == 42

    def test_gating(self):
        with pytest.raises(ValueError):
            cc.enumerate_cluster_tilting(qv.oriented_diagram("E7"))
        with pytest.raises(NotDynkin):
            cc.enumerate_cluster_tilting(qv.kronecker())

    def test_graph_a3(self, a3):
        g = cc.cluster_tilting_graph(cc.enumerate_cluster_tilting(Q1, a3))
        assert len(g.nodes) == 14 and len(g.edges) == 21
        assert g.is_connected()
        assert set(g.degrees()) == {3}

    def test_graph_small(self):
        g = cc.cluster_tilting_graph(cc.enumerate_cluster_tilting(qv.linear_quiver(2)))
        assert len(g.edges) == 5 and set(g.degrees()) == {2} and g.is_connected()
        g1 = cc.cluster_tilting_graph(cc.enumerate_cluster_tilting(qv.from_arrows(1, [])))
        assert len(g1.nodes) == 2 and g1.edges == ((0, 1),)

    def test_graph_rejects_missing_complements(self, a3):
        from clusterforge.errors import ComplementCountViolation
        ctos = cc.enumerate_cluster_tilting(Q1, a3)
        with pytest.raises(ComplementCountViolation):
            cc.cluster_tilting_graph(ctos[:-1])

    def test_exchange_pairs(self, a3):
        g = cc.cluster_tilting_graph(cc.enumerate_cluster_tilting(Q1, a3))
        pairs = cc.exchange_pairs(g, a3)
        p2, p3 = Module(a3.projective[2]), Module(a3.projective[3])
        s1, s2 = obj(a3, (1, 0, 0)), obj(a3, (0, 1, 0))
        assert frozenset((p2, s1)) in pairs
        assert frozenset((p3, ShiftedProjective(3))) in pairs
        assert frozenset((s1, s2)) in pairs
        assert len(pairs) == len({frozenset(p) for p in pairs})

    def test_tilting_seed_quivers(self, a3):
        g = cc.cluster_tilting_graph(cc.enumerate_cluster_tilting(Q1, a3))
        seeds = cc.tilting_seed_quivers(Q1, g, a3)
        assert len(seeds) == 14
        t = cc.ClusterTiltingObject((ShiftedProjective(1), Module(a3.projective[2]), Module(a3.projective[3])))
        s = seeds[t]
        arrows = {(cc.label(s.order[i - 1], a3), cc.label(s.order[j - 1], a3)) for i, j, _ in s.quiver.arrows()}
        assert arrows == {("P2", "P1[1]"), ("P2", "P3")}

    @pytest.mark.parametrize("q", [Q1, D4_SUBSPACE, qv.from_arrows(4, [(2, 1), (2, 3), (4, 3)])])
    def test_tilting_quivers_form_mutation_class(self, q):
        ar = arq.knit_ar_quiver(q)
        g = cc.cluster_tilting_graph(cc.enumerate_cluster_tilting(q, ar))
        seeds = cc.tilting_seed_quivers(q, g, ar)
        forms = {qv.canonical_form(s.quiver)[0] for s in seeds.values()}
        mclass = ex.enumerate_quiver_class(q)
        assert forms == set(mclass.nodes.values())
        for s in seeds.values():
            assert s.quiver.max_multiplicity() <= 1

    def test_tilting_quivers_match_seed_quivers(self, a3):
        # cluster -> cto transports the seed quivers onto the tilting quivers
        g = ex.enumerate_seeds(Q1)
        corr = cc.denominator_correspondence(g, Q1, a3)
        graph = cc.cluster_tilting_graph(cc.enumerate_cluster_tilting(Q1, a3))
        seeds = cc.tilting_seed_quivers(Q1, graph, a3)
        for s in g.nodes.values():
            order = tuple(corr[f] for f in s.cluster)
            ts = seeds[cc.ClusterTiltingObject(order)]
            perm = [order.index(o) for o in ts.order]
            assert s.quiver.relabel(perm) == ts.quiver


class TestClusterTilted:
    def test_counts(self, a3):
        ctos = cc.enumerate_cluster_tilting(Q1, a3)
        for t in ctos:
            sub = cc.cluster_tilted_ar_quiver(t, a3)
            assert len(sub.objects) == 6
            assert len(sub.dropped) == 3
        proj = cc.ClusterTiltingObject(tuple(Module(a3.projective[i]) for i in (1, 2, 3)))
        sub = cc.cluster_tilted_ar_quiver(proj, a3)
        assert set(sub.dropped) == {ShiftedProjective(i) for i in (1, 2, 3)}
        assert set(sub.objects) == {Module(k) for k in range(6)}
        assert sub.arrows == {(Module(a), Module(b)): m for (a, b), m in a3.arrows.items()}

    def test_a1(self):
        ar = arq.knit_ar_quiver(qv.from_arrows(1, []))
        t = cc.ClusterTiltingObject((Module(0),))
        assert len(cc.cluster_tilted_ar_quiver(t, ar).objects) == 1
        assert cc.check_selfinjective(t, ar)

    def test_selfinjective(self, a3):
        proj = cc.ClusterTiltingObject(tuple(Module(a3.projective[i]) for i in (1, 2, 3)))
        assert not cc.check_selfinjective(proj, a3)
        ctos = cc.enumerate_cluster_tilting(Q1, a3)
        # tau^2 has three orbits of size 3; only the two rigid ones among them qualify
        flags = [cc.check_selfinjective(t, a3) for t in ctos]
        assert flags.count(True) == 2

    @pytest.mark.parametrize("q", [Q1, D4_SUBSPACE])
    def test_translation_quiver(self, q):
        ar = arq.knit_ar_quiver(q)
        arrows = cc.cluster_category_arrows(ar)
        dom = cc.fundamental_domain(ar)
        for (a, b), m in arrows.items():
            assert arrows.get((cc.tau_cluster(b, ar), a)) == m
        # every object has as many arrows in as out, as in the stable AR quiver
        ins = Counter(b for (a, b), m in arrows.items() for _ in range(m))
        outs = Counter(a for (a, b), m in arrows.items() for _ in range(m))
        assert all(ins[o] == outs[o] for o in dom)

    def test_dot_export(self, a3):
        t = cc.enumerate_cluster_tilting(Q1, a3)[0]
        dot = cc.cluster_ar_to_dot(a3, t)
        assert dot.count("style=dashed") >= 3 or dot.count("gray") >= 3
        plain = cc.cluster_ar_to_dot(a3)
        assert plain.startswith("digraph")


class TestDenominators:
    def test_a3_spot_values(self, a3):
        g = ex.enumerate_seeds(Q1)
        corr = cc.denominator_correspondence(g, Q1, a3)
        x = lambda i: L.variable(3, i)
        s1 = exact_div(1 + x(2), x(1))
        assert corr[s1] == obj(a3, (1, 0, 0))
        p1 = exact_div((1 + x(2)) * x(1) + (1 + x(2)) * x(3), x(1) * x(2) * x(3))
        assert corr[p1] == Module(a3.projective[1])
        assert corr[x(2)] == ShiftedProjective(2)
        # the P2 variable has denominator x2 x3
        p2 = exact_div(x(1) + x(1) * x(2) + x(3), x(2) * x(3))
        assert corr[p2] == Module(a3.projective[2])
        assert sorted(corr.values()) == sorted(cc.fundamental_domain(a3))

    @pytest.mark.parametrize("q", [qv.linear_quiver(2), Q1, D4_SUBSPACE, qv.from_arrows(3, [(2, 1), (2, 3)])])
    def test_bijection_and_clusters(self, q):
        ar = arq.knit_ar_quiver(q)
        g = ex.enumerate_seeds(q)
        corr = cc.denominator_correspondence(g, q, ar)
        ctos = cc.enumerate_cluster_tilting(q, ar)
        mapping = cc.clusters_to_ctos(g, corr, ctos)
        assert len(mapping) == len(ctos)

    def test_incomplete_graph(self):
        g = ex.enumerate_seeds(Q1, ex.Limits(max_nodes=3))
        with pytest.raises(ValueError):
            cc.denominator_correspondence(g, Q1)


class TestCTGraphExport:
    def test_json_and_dot(self, a3):
        g = cc.cluster_tilting_graph(cc.enumerate_cluster_tilting(Q1, a3))
        data = json.loads(cc.ctgraph_to_json(g, a3))
        assert len(data["nodes"]) == 14 and len(data["edges"]) == 21
        assert cc.ctgraph_to_dot(g, a3).count(" -- ") == 21
