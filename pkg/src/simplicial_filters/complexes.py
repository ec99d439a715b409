"""Order-2 simplicial complexes.

Construction and validation, signed incidence matrices, adjacency queries,
and index/orientation transforms. The reference orientation is lexicographic:
every stored simplex is an ascending vertex tuple, and incidence signs are
derived from that ordering alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .errors import (
    DataError,
    DimensionMismatch,
    IndexOutOfRange,
    MissingFace,
    UnsupportedOrder,
)

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


@dataclass(frozen=True)
class SimplicialComplex:
    """Immutable complex of order 2: vertices, oriented edges, oriented triangles.

    Simplices are ascending vertex tuples; list positions define the simplex
    indices used by every signal and matrix in the package.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    triangles: tuple[Triangle, ...]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def simplex_count(self, k: int) -> int:
        if k == 0:
            return self.vertex_count
        if k == 1:
            return self.n_edges
        if k == 2:
            return self.n_triangles
        raise UnsupportedOrder(f"order {k} not supported")

    @property
    def edge_index(self) -> Mapping[Edge, int]:
        return _edge_index(self)


@lru_cache(maxsize=256)
def _edge_index(sc: SimplicialComplex) -> Mapping[Edge, int]:
    return MappingProxyType({e: i for i, e in enumerate(sc.edges)})


def _normalize_simplex(raw, vertex_count: int, size: int) -> tuple[int, ...]:
    t = tuple(sorted(int(v) for v in raw))
    if len(t) != size:
        raise DataError(f"expected a {size}-vertex simplex, got {raw!r}")
    if len(set(t)) != size:
        raise DataError(f"degenerate simplex with repeated vertex: {raw!r}")
    if t[0] < 0 or t[-1] >= vertex_count:
        raise IndexOutOfRange(
            f"simplex {raw!r} references a vertex outside [0, {vertex_count})"
        )
    return t


def build_complex(
    vertex_count: int,
    edges: Iterable[Iterable[int]],
    triangles: Iterable[Iterable[int]] = (),
) -> SimplicialComplex:
    """Normalize, deduplicate, and validate an order-2 complex.

    Vertex tuples are sorted ascending (the reference orientation), duplicates
    are merged, and both lists come out lexicographically ordered. Every
    triangle must have all three of its edges present (raises MissingFace
    otherwise).
    """
    vertex_count = int(vertex_count)
    if vertex_count <= 0:
        raise DataError("vertex_count must be positive")
    es = sorted({_normalize_simplex(e, vertex_count, 2) for e in edges})
    ts = sorted({_normalize_simplex(t, vertex_count, 3) for t in triangles})
    edge_set = set(es)
    for (u, v, w) in ts:
        for face in ((u, v), (u, w), (v, w)):
            if face not in edge_set:
                raise MissingFace(f"triangle {(u, v, w)} needs missing edge {face}")
    return SimplicialComplex(vertex_count, tuple(es), tuple(ts))


def infer_triangles(vertex_count: int, edges: Iterable[Iterable[int]]) -> list[Triangle]:
    """Return every 3-clique of the edge list as a triangle, lexicographically."""
    es = sorted({_normalize_simplex(e, int(vertex_count), 2) for e in edges})
    adjacency: dict[int, set[int]] = {}
    for u, v in es:
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)
    out: list[Triangle] = []
    for u, v in es:
        for w in sorted(adjacency[u] & adjacency[v]):
            if w > v:
                out.append((u, v, w))
    return sorted(out)


@dataclass(frozen=True)
class SignedIncidence:
    """Sparse signed incidence matrix with entries in {-1, +1}."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], int]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (r, c), v in self.entries.items():
            out[r, c] = v
        return out

    def to_csr(self) -> sp.csr_matrix:
        if not self.entries:
            return sp.csr_matrix((self.rows, self.cols), dtype=np.float64)
        rr, cc, vv = zip(*((r, c, v) for (r, c), v in self.entries.items()))
        return sp.csr_matrix(
            (np.asarray(vv, dtype=np.float64), (rr, cc)),
            shape=(self.rows, self.cols),
        )


@lru_cache(maxsize=256)
def incidence_matrix(sc: SimplicialComplex, k: int) -> SignedIncidence:
    """Signed incidence matrix B_k for k in {1, 2}.

    B1 column for edge (u, v): -1 at u, +1 at v. B2 column for triangle
    (u, v, w): +1 at edge (u, v), -1 at (u, w), +1 at (v, w). Under these
    conventions B1 @ B2 is exactly zero in integer arithmetic.
    """
    if k == 1:
        entries = {}
        for j, (u, v) in enumerate(sc.edges):
            entries[(u, j)] = -1
            entries[(v, j)] = 1
        return SignedIncidence(sc.vertex_count, sc.n_edges, MappingProxyType(entries))
    if k == 2:
        eidx = sc.edge_index
        entries = {}
        for j, (u, v, w) in enumerate(sc.triangles):
            entries[(eidx[(u, v)], j)] = 1
            entries[(eidx[(u, w)], j)] = -1
            entries[(eidx[(v, w)], j)] = 1
        return SignedIncidence(sc.n_edges, sc.n_triangles, MappingProxyType(entries))
    raise UnsupportedOrder(f"incidence matrix defined for k in {{1, 2}}, got {k}")


@lru_cache(maxsize=256)
def _adjacency(sc: SimplicialComplex, k: int, upper: bool) -> tuple[frozenset, ...]:
    n = sc.simplex_count(k)
    sets: list[set[int]] = [set() for _ in range(n)]
    if k == 0 and upper:
        for (u, v) in sc.edges:
            sets[u].add(v)
            sets[v].add(u)
    elif k == 1 and not upper:
        by_vertex: dict[int, list[int]] = {}
        for i, (u, v) in enumerate(sc.edges):
            by_vertex.setdefault(u, []).append(i)
            by_vertex.setdefault(v, []).append(i)
        for members in by_vertex.values():
            for i, j in combinations(members, 2):
                sets[i].add(j)
                sets[j].add(i)
    elif k == 1 and upper:
        eidx = sc.edge_index
        for (u, v, w) in sc.triangles:
            tri_edges = [eidx[(u, v)], eidx[(u, w)], eidx[(v, w)]]
            for i, j in combinations(tri_edges, 2):
                sets[i].add(j)
                sets[j].add(i)
    elif k == 2 and not upper:
        by_edge: dict[Edge, list[int]] = {}
        for i, (u, v, w) in enumerate(sc.triangles):
            for face in ((u, v), (u, w), (v, w)):
                by_edge.setdefault(face, []).append(i)
        for members in by_edge.values():
            for i, j in combinations(members, 2):
                sets[i].add(j)
                sets[j].add(i)
    # k == 0 lower and k == 2 upper stay empty: no (-1)-faces, no 3-simplices
    return tuple(frozenset(s) for s in sets)


def _check_simplex_index(sc: SimplicialComplex, k: int, i: int) -> None:
    if k not in (0, 1, 2):
        raise UnsupportedOrder(f"order {k} not supported")
    if not 0 <= i < sc.simplex_count(k):
        raise IndexOutOfRange(
            f"simplex index {i} outside [0, {sc.simplex_count(k)}) for order {k}"
        )


def lower_neighborhood(sc: SimplicialComplex, k: int, i: int) -> frozenset[int]:
    """Indices of k-simplices sharing a (k-1)-face with simplex i (i excluded)."""
    _check_simplex_index(sc, k, i)
    return _adjacency(sc, k, upper=False)[i]


def upper_neighborhood(sc: SimplicialComplex, k: int, i: int) -> frozenset[int]:
    """Indices of k-simplices that share a (k+1)-coface with simplex i."""
    _check_simplex_index(sc, k, i)
    return _adjacency(sc, k, upper=True)[i]


def _check_perm(perm: tuple[int, ...], n: int, label: str) -> None:
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise DimensionMismatch(f"{label} is not a bijection on [0, {n})")


@dataclass(frozen=True)
class PermutationPlan:
    """Relabeling of nodes/edges/triangles.

    Gather convention: ``edge_perm[new] = old``, i.e. the simplex placed at
    new index ``i`` is the one that previously sat at ``edge_perm[i]``. The
    associated permutation matrix P_k has (P_k)[new, old] = 1.
    """

    node_perm: tuple[int, ...]
    edge_perm: tuple[int, ...]
    triangle_perm: tuple[int, ...]

    @classmethod
    def identity(cls, sc: SimplicialComplex) -> "PermutationPlan":
        return cls(
            tuple(range(sc.vertex_count)),
            tuple(range(sc.n_edges)),
            tuple(range(sc.n_triangles)),
        )

    @classmethod
    def random(cls, sc: SimplicialComplex, rng: np.random.Generator) -> "PermutationPlan":
        return cls(
            tuple(int(x) for x in rng.permutation(sc.vertex_count)),
            tuple(int(x) for x in rng.permutation(sc.n_edges)),
            tuple(int(x) for x in rng.permutation(sc.n_triangles)),
        )

    def validate(self, sc: SimplicialComplex) -> None:
        _check_perm(self.node_perm, sc.vertex_count, "node_perm")
        _check_perm(self.edge_perm, sc.n_edges, "edge_perm")
        _check_perm(self.triangle_perm, sc.n_triangles, "triangle_perm")


@dataclass(frozen=True)
class OrientationPlan:
    """Per-simplex orientation flips; node signs are implicitly all +1."""

    edge_signs: tuple[int, ...]
    triangle_signs: tuple[int, ...]

    @classmethod
    def identity(cls, sc: SimplicialComplex) -> "OrientationPlan":
        return cls((1,) * sc.n_edges, (1,) * sc.n_triangles)

    @classmethod
    def random(cls, sc: SimplicialComplex, rng: np.random.Generator) -> "OrientationPlan":
        return cls(
            tuple(int(s) for s in rng.choice((-1, 1), size=sc.n_edges)),
            tuple(int(s) for s in rng.choice((-1, 1), size=sc.n_triangles)),
        )

    def validate(self, sc: SimplicialComplex) -> None:
        if len(self.edge_signs) != sc.n_edges or len(self.triangle_signs) != sc.n_triangles:
            raise DimensionMismatch("orientation plan does not match the complex")
        if any(s not in (-1, 1) for s in self.edge_signs + self.triangle_signs):
            raise DataError("orientation signs must be +1 or -1")


def permute(sc: SimplicialComplex, plan: PermutationPlan) -> SimplicialComplex:
    """Relabel simplex indices according to the plan.

    Relabeled simplices are renormalized to ascending vertex order, so a node
    relabeling that reverses the order inside a simplex flips its reference
    orientation; `permutation_signs` reports exactly those flips.
    """
    plan.validate(sc)
    inverse_node = [0] * sc.vertex_count
    for new, old in enumerate(plan.node_perm):
        inverse_node[old] = new
    new_edges = []
    for old_e in plan.edge_perm:
        u, v = sc.edges[old_e]
        new_edges.append(tuple(sorted((inverse_node[u], inverse_node[v]))))
    new_triangles = []
    for old_t in plan.triangle_perm:
        u, v, w = sc.triangles[old_t]
        new_triangles.append(
            tuple(sorted((inverse_node[u], inverse_node[v], inverse_node[w])))
        )
    return SimplicialComplex(sc.vertex_count, tuple(new_edges), tuple(new_triangles))


def permutation_signs(sc: SimplicialComplex, plan: PermutationPlan) -> OrientationPlan:
    """Orientation flips induced by renormalizing a permuted complex.

    With D_k built from these signs (indexed like the permuted complex), the
    permuted incidence matrices satisfy B1' = P0 B1 P1^T D1 and
    B2' = D1 P1 B2 P2^T D2 exactly.
    """
    plan.validate(sc)
    inverse_node = [0] * sc.vertex_count
    for new, old in enumerate(plan.node_perm):
        inverse_node[old] = new
    edge_signs = []
    for old_e in plan.edge_perm:
        u, v = sc.edges[old_e]
        edge_signs.append(1 if inverse_node[u] < inverse_node[v] else -1)
    triangle_signs = []
    for old_t in plan.triangle_perm:
        mapped = [inverse_node[x] for x in sc.triangles[old_t]]
        # parity of the 3-element sort = orientation sign of the relabeling
        inversions = sum(
            1 for a, b in combinations(range(3), 2) if mapped[a] > mapped[b]
        )
        triangle_signs.append(1 if inversions % 2 == 0 else -1)
    return OrientationPlan(tuple(edge_signs), tuple(triangle_signs))


@dataclass(frozen=True)
class OrientedComplex:
    """A complex whose edges/triangles carry non-reference orientations.

    Incidence matrices are the reference ones with rows/columns sign-flipped:
    B1' = B1 D1 and B2' = D1 B2 D2 (node orientations are fixed at +1).
    """

    base: SimplicialComplex
    edge_signs: tuple[int, ...]
    triangle_signs: tuple[int, ...]


def reorient(sc: SimplicialComplex, plan: OrientationPlan) -> OrientedComplex:
    plan.validate(sc)
    return OrientedComplex(sc, plan.edge_signs, plan.triangle_signs)


def boundary_dense(obj: SimplicialComplex | OrientedComplex, k: int) -> np.ndarray:
    """Dense integer incidence matrix of either a plain or oriented complex."""
    if isinstance(obj, OrientedComplex):
        base = boundary_dense(obj.base, k)
        d1 = np.asarray(obj.edge_signs, dtype=np.int64)
        if k == 1:
            return base * d1[np.newaxis, :]
        d2 = np.asarray(obj.triangle_signs, dtype=np.int64)
        return d1[:, np.newaxis] * base * d2[np.newaxis, :]
    return incidence_matrix(obj, k).to_dense()


def boundary_csr(obj: SimplicialComplex | OrientedComplex, k: int) -> sp.csr_matrix:
    if isinstance(obj, OrientedComplex):
        return sp.csr_matrix(boundary_dense(obj, k).astype(np.float64))
    return incidence_matrix(obj, k).to_csr()
