"""Hodge Laplacians and their spectral machinery.

Eigendecomposition into harmonic/gradient/curl blocks, the simplicial Fourier
transform, divergence/curl operators, the Hodge decomposition of edge flows,
and the normalized edge Laplacian used for ranking.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .complexes import OrientedComplex, SimplicialComplex, boundary_dense
from .errors import DimensionMismatch, EigenFailure, UnsupportedOrder

# relative threshold separating zero (harmonic) eigenvalues from the rest
ZERO_TOL_FACTOR = 1e-8


@dataclass(frozen=True)
class HodgeLaplacians:
    """Lower, upper, and total Hodge Laplacian of one simplex order."""

    lower: np.ndarray
    upper: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.lower + self.upper


@lru_cache(maxsize=128)
def _laplacians_cached(sc: SimplicialComplex, k: int) -> HodgeLaplacians:
    b1 = boundary_dense(sc, 1).astype(np.float64)
    if k == 0:
        zero = np.zeros((sc.vertex_count, sc.vertex_count))
        return HodgeLaplacians(zero, b1 @ b1.T)
    b2 = boundary_dense(sc, 2).astype(np.float64)
    if k == 1:
        return HodgeLaplacians(b1.T @ b1, b2 @ b2.T)
    if k == 2:
        zero = np.zeros((sc.n_triangles, sc.n_triangles))
        return HodgeLaplacians(b2.T @ b2, zero)
    raise UnsupportedOrder(f"Hodge Laplacian defined for k in {{0, 1, 2}}, got {k}")


def hodge_laplacian(obj: SimplicialComplex | OrientedComplex, k: int = 1) -> HodgeLaplacians:
    """Dense Hodge Laplacians at order k (lower part zero for k=0, upper for k=2)."""
    if isinstance(obj, OrientedComplex):
        if k not in (0, 1, 2):
            raise UnsupportedOrder(f"Hodge Laplacian defined for k in {{0, 1, 2}}, got {k}")
        b1 = boundary_dense(obj, 1).astype(np.float64)
        b2 = boundary_dense(obj, 2).astype(np.float64)
        if k == 0:
            zero = np.zeros((obj.base.vertex_count, obj.base.vertex_count))
            return HodgeLaplacians(zero, b1 @ b1.T)
        if k == 1:
            return HodgeLaplacians(b1.T @ b1, b2 @ b2.T)
        zero = np.zeros((obj.base.n_triangles, obj.base.n_triangles))
        return HodgeLaplacians(b2.T @ b2, zero)
    return _laplacians_cached(obj, k)


@dataclass(frozen=True)
class HodgeSpectrum:
    """Eigenbasis of the edge space split into harmonic/gradient/curl blocks.

    Gradient vectors are nonzero-eigenvalue eigenvectors of the lower
    Laplacian, curl vectors of the upper one, harmonic vectors span the null
    space of the total Laplacian. The full basis [U_H U_G U_C] is orthonormal.
    """

    u_harmonic: np.ndarray
    u_gradient: np.ndarray
    u_curl: np.ndarray
    lambda_gradient: np.ndarray
    lambda_curl: np.ndarray
    zero_tol: float

    @property
    def n_harmonic(self) -> int:
        return self.u_harmonic.shape[1]

    @property
    def n_gradient(self) -> int:
        return self.u_gradient.shape[1]

    @property
    def n_curl(self) -> int:
        return self.u_curl.shape[1]

    @property
    def basis(self) -> np.ndarray:
        return np.hstack([self.u_harmonic, self.u_gradient, self.u_curl])


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # deterministic eigenvector signs: largest-magnitude entry made positive
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            out[:, j] = -col
    return out


def _eigh(matrix: np.ndarray):
    try:
        return np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"symmetric eigensolver failed: {exc}") from exc


@lru_cache(maxsize=64)
def hodge_spectrum(sc: SimplicialComplex) -> HodgeSpectrum:
    """Full spectral split of the edge space with deterministic signs."""
    lap = hodge_laplacian(sc, 1)
    w_total, v_total = _eigh(lap.total)
    lam_max = float(w_total[-1]) if w_total.size else 0.0
    zero_tol = ZERO_TOL_FACTOR * lam_max

    w_low, v_low = _eigh(lap.lower)
    keep = w_low > zero_tol
    u_gradient = _fix_signs(v_low[:, keep])
    lambda_gradient = w_low[keep]

    w_up, v_up = _eigh(lap.upper)
    keep = w_up > zero_tol
    u_curl = _fix_signs(v_up[:, keep])
    lambda_curl = w_up[keep]

    u_harmonic = _fix_signs(v_total[:, w_total <= zero_tol])
    return HodgeSpectrum(
        u_harmonic=u_harmonic,
        u_gradient=u_gradient,
        u_curl=u_curl,
        lambda_gradient=lambda_gradient,
        lambda_curl=lambda_curl,
        zero_tol=zero_tol,
    )


@dataclass(frozen=True)
class Embeddings:
    """Spectral coefficients of an edge flow per subspace."""

    harmonic: np.ndarray
    gradient: np.ndarray
    curl: np.ndarray


def _check_flow(n_edges: int, flow) -> np.ndarray:
    flow = np.asarray(flow, dtype=np.float64)
    if flow.shape != (n_edges,):
        raise DimensionMismatch(
            f"flow has shape {flow.shape}, expected ({n_edges},)"
        )
    return flow


def sft(spectrum: HodgeSpectrum, flow) -> Embeddings:
    """Project an edge flow onto the harmonic/gradient/curl eigenbases."""
    n = spectrum.n_harmonic + spectrum.n_gradient + spectrum.n_curl
    flow = _check_flow(n, flow)
    return Embeddings(
        harmonic=spectrum.u_harmonic.T @ flow,
        gradient=spectrum.u_gradient.T @ flow,
        curl=spectrum.u_curl.T @ flow,
    )


def inverse_sft(spectrum: HodgeSpectrum, emb: Embeddings) -> np.ndarray:
    if (
        emb.harmonic.shape != (spectrum.n_harmonic,)
        or emb.gradient.shape != (spectrum.n_gradient,)
        or emb.curl.shape != (spectrum.n_curl,)
    ):
        raise DimensionMismatch("embedding block sizes do not match the spectrum")
    return (
        spectrum.u_harmonic @ emb.harmonic
        + spectrum.u_gradient @ emb.gradient
        + spectrum.u_curl @ emb.curl
    )


def hodge_decompose(
    sc: SimplicialComplex, flow, spectrum: HodgeSpectrum | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split an edge flow into (gradient, curl, harmonic) components."""
    if spectrum is None:
        spectrum = hodge_spectrum(sc)
    flow = _check_flow(sc.n_edges, flow)
    f_gradient = spectrum.u_gradient @ (spectrum.u_gradient.T @ flow)
    f_curl = spectrum.u_curl @ (spectrum.u_curl.T @ flow)
    f_harmonic = flow - f_gradient - f_curl
    return f_gradient, f_curl, f_harmonic


def divergence(sc: SimplicialComplex, flow) -> np.ndarray:
    """Net outflow per node: B1 @ f."""
    flow = _check_flow(sc.n_edges, flow)
    return boundary_dense(sc, 1).astype(np.float64) @ flow


def curl(sc: SimplicialComplex, flow) -> np.ndarray:
    """Circulation per triangle: B2^T @ f."""
    flow = _check_flow(sc.n_edges, flow)
    return boundary_dense(sc, 2).astype(np.float64).T @ flow


def _group_sorted(values: np.ndarray, tol: float) -> list[float]:
    groups: list[list[float]] = []
    for v in np.sort(values):
        if groups and v - groups[-1][-1] <= tol:
            groups[-1].append(float(v))
        else:
            groups.append([float(v)])
    return [float(np.mean(g)) for g in groups]


def distinct_frequencies(
    spectrum: HodgeSpectrum, grouping_tol: float = 0.0
) -> tuple[list[float], list[float]]:
    """Distinct gradient and curl frequencies under single-linkage grouping.

    A new group starts when the gap to the previous (sorted) eigenvalue
    exceeds grouping_tol; each group is represented by its mean.
    """
    if grouping_tol < 0:
        raise ValueError("grouping_tol must be nonnegative")
    return (
        _group_sorted(spectrum.lambda_gradient, grouping_tol),
        _group_sorted(spectrum.lambda_curl, grouping_tol),
    )


@dataclass(frozen=True)
class NormalizedLaplacian:
    """Degree-normalized edge Laplacian and its symmetrized similar form.

    lower/upper are the (generally non-symmetric) normalized parts whose sum
    has real spectrum in [0, 1]; sym_lower/sym_upper are their similarity
    transforms under W = diag(weight)^(-1/2), which are symmetric and satisfy
    sym_lower @ sym_upper = 0.
    """

    lower: np.ndarray
    upper: np.ndarray
    weight: np.ndarray
    sym_lower: np.ndarray
    sym_upper: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.lower + self.upper


@lru_cache(maxsize=64)
def normalized_laplacian(sc: SimplicialComplex) -> NormalizedLaplacian:
    b1 = boundary_dense(sc, 1).astype(np.float64)
    b2 = boundary_dense(sc, 2).astype(np.float64)
    # d2: triangle-degree weights per edge, floored at 1
    d2 = np.maximum(np.abs(b2).sum(axis=1), 1.0)
    # d1: weighted node degrees; isolated nodes have a zero B1 row, so the
    # guard value never contributes
    d1 = 2.0 * (np.abs(b1) @ d2)
    d1[d1 == 0.0] = 1.0
    bt_scaled = b1.T @ (b1 / d1[:, np.newaxis])
    lower = d2[:, np.newaxis] * bt_scaled
    upper = (b2 / 3.0) @ (b2.T / d2[np.newaxis, :])
    root = np.sqrt(d2)
    sym_lower = root[:, np.newaxis] * bt_scaled * root[np.newaxis, :]
    sym_upper = (b2 / root[:, np.newaxis]) @ (b2.T / root[np.newaxis, :]) / 3.0
    return NormalizedLaplacian(
        lower=lower, upper=upper, weight=d2, sym_lower=sym_lower, sym_upper=sym_upper
    )


def normalized_hodge_laplacian(sc: SimplicialComplex) -> np.ndarray:
    """Normalized edge Laplacian L_n = D2 B1^T D1^{-1} B1 + B2 D3 B2^T D2^{-1}."""
    return normalized_laplacian(sc).total
