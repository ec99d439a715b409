import numpy as np
import pytest

import simplicial_filters as sf
from simplicial_filters import (
    DataError,
    IndexOutOfRange,
    MissingFace,
    UnsupportedOrder,
    build_complex,
    incidence_matrix,
    infer_triangles,
    lower_neighborhood,
    upper_neighborhood,
)
from simplicial_filters.complexes import (
    OrientationPlan,
    PermutationPlan,
    boundary_dense,
    permutation_signs,
)

from conftest import random_complex


def dense_b1(sc):
    """Node-edge incidence built directly from the sign rule."""
    out = np.zeros((sc.vertex_count, sc.n_edges), dtype=np.int64)
    for j, (u, v) in enumerate(sc.edges):
        out[u, j] = -1
        out[v, j] = 1
    return out


def dense_b2(sc):
    """Edge-triangle incidence built directly from the sign rule."""
    idx = {e: i for i, e in enumerate(sc.edges)}
    out = np.zeros((sc.n_edges, sc.n_triangles), dtype=np.int64)
    for j, (u, v, w) in enumerate(sc.triangles):
        out[idx[(u, v)], j] = 1
        out[idx[(u, w)], j] = -1
        out[idx[(v, w)], j] = 1
    return out


def test_build_normalizes_and_sorts():
    sc = build_complex(4, [(2, 1), (0, 1), (1, 2), (3, 2), (1, 3)], [(3, 1, 2)])
    assert sc.edges == ((0, 1), (1, 2), (1, 3), (2, 3))
    assert sc.triangles == ((1, 2, 3),)
    assert sc.n_edges == 4 and sc.n_triangles == 1
    assert [sc.simplex_count(k) for k in (0, 1, 2)] == [4, 4, 1]


def test_build_rejects_bad_input():
    with pytest.raises(MissingFace):
        build_complex(4, [(0, 1), (1, 2)], [(0, 1, 2)])
    with pytest.raises(IndexOutOfRange):
        build_complex(3, [(0, 5)])
    with pytest.raises(DataError):
        build_complex(3, [(1, 1)])
    with pytest.raises(DataError):
        build_complex(0, [])


def test_edge_index_lookup(toy):
    for i, e in enumerate(toy.edges):
        assert toy.edge_index[e] == i
    assert (0, 1) in toy.edge_index


def test_infer_triangles_matches_bruteforce(rng):
    for _ in range(20):
        sc = random_complex(rng, clique_fill=False)
        edge_set = set(sc.edges)
        expect = sorted(
            (u, v, w)
            for u in range(sc.vertex_count)
            for v in range(u + 1, sc.vertex_count)
            for w in range(v + 1, sc.vertex_count)
            if {(u, v), (u, w), (v, w)} <= edge_set
        )
        assert infer_triangles(sc.vertex_count, sc.edges) == expect


def test_incidence_signs(toy):
    b1 = incidence_matrix(toy, 1).to_dense()
    np.testing.assert_array_equal(b1, dense_b1(toy))
    b2 = incidence_matrix(toy, 2).to_dense()
    np.testing.assert_array_equal(b2, dense_b2(toy))
    # triangle (0,1,2) touches edges (0,1),(0,2),(1,2) with signs +,-,+
    col = b2[:, 0]
    assert col[toy.edge_index[(0, 1)]] == 1
    assert col[toy.edge_index[(0, 2)]] == -1
    assert col[toy.edge_index[(1, 2)]] == 1


def test_boundary_of_boundary_zero(rng):
    for _ in range(20):
        sc = random_complex(rng)
        b1 = incidence_matrix(sc, 1).to_dense()
        b2 = incidence_matrix(sc, 2).to_dense()
        assert not (b1 @ b2).any()


def test_incidence_order_guard(toy):
    with pytest.raises(UnsupportedOrder):
        incidence_matrix(toy, 3)
    with pytest.raises(UnsupportedOrder):
        incidence_matrix(toy, 0)


def test_csr_matches_dense(toy):
    m = incidence_matrix(toy, 1)
    assert np.array_equal(m.to_csr().toarray(), m.to_dense())


def test_neighborhoods_against_bruteforce(rng):
    for _ in range(10):
        sc = random_complex(rng, max_nodes=12)
        eidx = sc.edge_index
        for i, (u, v) in enumerate(sc.edges):
            low = {
                eidx[e] for e in sc.edges
                if e != (u, v) and len({u, v} & set(e)) == 1
            }
            assert lower_neighborhood(sc, 1, i) == low
            up = set()
            for t in sc.triangles:
                if u in t and v in t:
                    for a in range(3):
                        for b in range(a + 1, 3):
                            e = (t[a], t[b])
                            if e != (u, v):
                                up.add(eidx[e])
            assert upper_neighborhood(sc, 1, i) == up


def test_neighborhood_toy_values(toy):
    eidx = toy.edge_index
    i = eidx[(4, 5)]
    assert lower_neighborhood(toy, 1, i) == {
        eidx[e] for e in [(3, 4), (2, 5), (4, 6), (5, 6)]
    }
    assert upper_neighborhood(toy, 1, i) == {eidx[(4, 6)], eidx[(5, 6)]}
    with pytest.raises(IndexOutOfRange):
        lower_neighborhood(toy, 1, toy.n_edges)


def test_node_and_triangle_neighborhoods(toy):
    assert upper_neighborhood(toy, 0, 0) == {1, 2}
    # triangle (0,1,2) shares edge (1,2) with (1,2,3)
    assert lower_neighborhood(toy, 2, 0) == {1}


def test_permute_roundtrip(rng):
    sc = random_complex(rng)
    plan = PermutationPlan.identity(sc)
    assert sf.permute(sc, plan) == sc
    plan = PermutationPlan.random(sc, rng)
    sc_p = sf.permute(sc, plan)
    assert (sc_p.n_edges, sc_p.n_triangles) == (sc.n_edges, sc.n_triangles)
    # new slot i holds the relabeled edge that sat at edge_perm[i]
    back = {old: new for new, old in enumerate(plan.node_perm)}
    expect = [
        tuple(sorted((back[u], back[v])))
        for u, v in (sc.edges[j] for j in plan.edge_perm)
    ]
    assert list(sc_p.edges) == expect


def test_permutation_composition_identity(rng):
    for _ in range(10):
        sc = random_complex(rng, max_nodes=12)
        plan = PermutationPlan.random(sc, rng)
        signs = permutation_signs(sc, plan)
        sc_p = sf.permute(sc, plan)
        b1 = incidence_matrix(sc, 1).to_dense()
        b2 = incidence_matrix(sc, 2).to_dense()
        n0, n1, n2 = sc.vertex_count, sc.n_edges, sc.n_triangles
        p0 = np.zeros((n0, n0), dtype=np.int64)
        p0[np.arange(n0), np.asarray(plan.node_perm, dtype=np.int64)] = 1
        p1 = np.zeros((n1, n1), dtype=np.int64)
        p1[np.arange(n1), np.asarray(plan.edge_perm, dtype=np.int64)] = 1
        p2 = np.zeros((n2, n2), dtype=np.int64)
        p2[np.arange(n2), np.asarray(plan.triangle_perm, dtype=np.int64)] = 1
        d1 = np.diag(np.asarray(signs.edge_signs, dtype=np.int64))
        d2 = np.diag(np.asarray(signs.triangle_signs, dtype=np.int64)).reshape(n2, n2)
        np.testing.assert_array_equal(
            incidence_matrix(sc_p, 1).to_dense(), p0 @ b1 @ p1.T @ d1
        )
        np.testing.assert_array_equal(
            incidence_matrix(sc_p, 2).to_dense(), d1 @ p1 @ b2 @ p2.T @ d2
        )


def test_reorient_scales_columns(toy, rng):
    plan = OrientationPlan.random(toy, rng)
    osc = sf.reorient(toy, plan)
    d1 = np.diag(np.asarray(plan.edge_signs))
    d2 = np.diag(np.asarray(plan.triangle_signs))
    b1 = incidence_matrix(toy, 1).to_dense()
    b2 = incidence_matrix(toy, 2).to_dense()
    np.testing.assert_array_equal(boundary_dense(osc, 1), b1 @ d1)
    np.testing.assert_array_equal(boundary_dense(osc, 2), d1 @ b2 @ d2)
    # reorientation never breaks the chain identity
    assert not (boundary_dense(osc, 1) @ boundary_dense(osc, 2)).any()


def test_plan_validation(toy):
    with pytest.raises(DataError):
        PermutationPlan((0, 1), tuple(range(toy.n_edges)),
                        tuple(range(toy.n_triangles))).validate(toy)
    with pytest.raises(DataError):
        OrientationPlan((1,) * toy.n_edges, (2,) * toy.n_triangles).validate(toy)


def test_complex_is_hashable(toy):
    assert hash(toy) == hash(sf.toy_complex())
    assert toy == sf.toy_complex()
