"""Simplicial convolutional filters.

A filter is the matrix polynomial h0*I + sum_l alpha_l * L_lower^l
+ sum_l beta_l * L_upper^l applied to edge flows. Application always runs as
a per-step vector recursion over sparse shifts; dense polynomial matrices are
never formed.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from ._kernels import ShiftMatrix
from .complexes import (
    OrientedComplex,
    SimplicialComplex,
    boundary_csr,
    lower_neighborhood,
    upper_neighborhood,
)
from .errors import DataError, DimensionMismatch
from .spectral import HodgeSpectrum, hodge_laplacian


@dataclass(frozen=True)
class FilterCoefficients:
    """Polynomial filter taps: constant h0, lower taps alpha, upper taps beta."""

    h0: float
    alpha: tuple[float, ...] = ()
    beta: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "h0", float(self.h0))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        values = (self.h0,) + self.alpha + self.beta
        if not all(np.isfinite(values)):
            raise DataError("filter coefficients must be finite")

    @property
    def order_lower(self) -> int:
        return len(self.alpha)

    @property
    def order_upper(self) -> int:
        return len(self.beta)


@lru_cache(maxsize=128)
def _shift_csr(obj: SimplicialComplex | OrientedComplex):
    b1 = boundary_csr(obj, 1)
    b2 = boundary_csr(obj, 2)
    return (b1.T @ b1).tocsr(), (b2 @ b2.T).tocsr()


def shift_operators(
    obj: SimplicialComplex | OrientedComplex, backend: str | None = None
) -> tuple[ShiftMatrix, ShiftMatrix]:
    """Sparse lower/upper Laplacian operators bound to a kernel backend."""
    low, up = _shift_csr(obj)
    return ShiftMatrix(low, backend), ShiftMatrix(up, backend)


def _edge_count(obj: SimplicialComplex | OrientedComplex) -> int:
    return obj.base.n_edges if isinstance(obj, OrientedComplex) else obj.n_edges


def _check_flow(obj, flow) -> np.ndarray:
    flow = np.asarray(flow, dtype=np.float64)
    n = _edge_count(obj)
    if flow.shape != (n,):
        raise DimensionMismatch(f"flow has shape {flow.shape}, expected ({n},)")
    return flow


def shift_lower(obj: SimplicialComplex | OrientedComplex, flow) -> np.ndarray:
    """One lower shift: L_lower @ f."""
    flow = _check_flow(obj, flow)
    return shift_operators(obj)[0].matvec(flow)


def shift_upper(obj: SimplicialComplex | OrientedComplex, flow) -> np.ndarray:
    """One upper shift: L_upper @ f."""
    flow = _check_flow(obj, flow)
    return shift_operators(obj)[1].matvec(flow)


def apply_operators(
    op_lower: ShiftMatrix | None,
    op_upper: ShiftMatrix | None,
    coeffs: FilterCoefficients,
    flow: np.ndarray,
) -> np.ndarray:
    """Run the filter recursion against explicit shift operators."""
    out = coeffs.h0 * flow
    if coeffs.alpha:
        if op_lower is None:
            raise ValueError("lower taps given but no lower operator")
        x = flow
        for a in coeffs.alpha:
            x = op_lower.matvec(x)
            out = out + a * x
    if coeffs.beta:
        if op_upper is None:
            raise ValueError("upper taps given but no upper operator")
        x = flow
        for b in coeffs.beta:
            x = op_upper.matvec(x)
            out = out + b * x
    return out


def apply(
    obj: SimplicialComplex | OrientedComplex,
    coeffs: FilterCoefficients,
    flow,
    backend: str | None = None,
) -> np.ndarray:
    """Apply a filter to an edge flow by repeated shifting."""
    flow = _check_flow(obj, flow)
    low, up = shift_operators(obj, backend)
    return apply_operators(low, up, coeffs, flow)


@dataclass(frozen=True)
class ShiftRound:
    """One synchronous communication round of the distributed simulation."""

    kind: str  # "lower" or "upper"
    messages_per_edge: tuple[int, ...]

    @property
    def total_messages(self) -> int:
        return sum(self.messages_per_edge)


@dataclass(frozen=True)
class DistributedShiftResult:
    lower_flow: np.ndarray
    upper_flow: np.ndarray
    rounds: tuple[ShiftRound, ...]

    @property
    def total_messages(self) -> int:
        return sum(r.total_messages for r in self.rounds)


def distributed_shift(
    sc: SimplicialComplex, flow, rounds_lower: int, rounds_upper: int
) -> DistributedShiftResult:
    """Simulate shifting as synchronous neighbor-to-neighbor message rounds.

    Each round, every edge recomputes its value from its own state plus one
    message per lower (resp. upper) neighbor, weighted by the corresponding
    Laplacian entry. The final vectors equal L_lower^rounds_lower @ f and
    L_upper^rounds_upper @ f.
    """
    flow = _check_flow(sc, flow)
    if rounds_lower < 0 or rounds_upper < 0:
        raise ValueError("round counts must be nonnegative")
    n = sc.n_edges
    lap = hodge_laplacian(sc, 1)
    trace: list[ShiftRound] = []

    def run(matrix: np.ndarray, neighbors, rounds: int, kind: str) -> np.ndarray:
        current = flow.copy()
        for _ in range(rounds):
            nxt = np.empty(n)
            counts = []
            for i in range(n):
                acc = matrix[i, i] * current[i]
                for j in neighbors[i]:
                    acc += matrix[i, j] * current[j]
                nxt[i] = acc
                counts.append(len(neighbors[i]))
            current = nxt
            trace.append(ShiftRound(kind, tuple(counts)))
        return current

    low_nbrs = [lower_neighborhood(sc, 1, i) for i in range(n)]
    up_nbrs = [upper_neighborhood(sc, 1, i) for i in range(n)]
    final_lower = run(lap.lower, low_nbrs, rounds_lower, "lower")
    final_upper = run(lap.upper, up_nbrs, rounds_upper, "upper")
    return DistributedShiftResult(final_lower, final_upper, tuple(trace))


@dataclass(frozen=True)
class FrequencyResponse:
    """Filter response per frequency block."""

    at_harmonic: float
    at_gradient: Mapping[float, float]
    at_curl: Mapping[float, float]


def polynomial_response(coeffs: FilterCoefficients, lam: float, block: str) -> float:
    """Scalar response of the filter at one frequency of the given block."""
    lam = float(lam)
    if block == "harmonic":
        return coeffs.h0
    if block == "gradient":
        taps: Sequence[float] = coeffs.alpha
    elif block == "curl":
        taps = coeffs.beta
    else:
        raise ValueError(f"unknown block {block!r}")
    powers = lam ** np.arange(1, len(taps) + 1)
    return float(coeffs.h0 + np.dot(taps, powers)) if taps else coeffs.h0


def frequency_response(
    coeffs: FilterCoefficients, spectrum: HodgeSpectrum
) -> FrequencyResponse:
    """Evaluate the filter response at every frequency of a spectrum."""
    grad = {
        float(l): polynomial_response(coeffs, l, "gradient")
        for l in spectrum.lambda_gradient
    }
    cur = {
        float(l): polynomial_response(coeffs, l, "curl")
        for l in spectrum.lambda_curl
    }
    return FrequencyResponse(at_harmonic=coeffs.h0, at_gradient=grad, at_curl=cur)
