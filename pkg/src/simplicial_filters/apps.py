"""Applications built on the filter stack: subcomponent extraction, edge-flow
denoising, arbitrage detection/correction on exchange markets, and edge
PageRank with subspace influence norms."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from ._kernels import ShiftMatrix
from .complexes import SimplicialComplex, build_complex, infer_triangles
from .design import (
    ResponseSpec,
    chebyshev_apply_operators,
    chebyshev_design,
    estimate_lambda_max,
    grid_design,
    ls_joint,
    ls_tied,
    response_constant,
    response_custom,
    response_inverse_shift,
    response_logistic,
)
from .errors import (
    DataError,
    IncompleteMarket,
    IndexOutOfRange,
    NonPositiveRate,
    SingularSystem,
    UnsupportedCombination,
    ZeroReference,
)
from .filters import FilterCoefficients, apply, apply_operators, shift_operators
from .spectral import (
    distinct_frequencies,
    hodge_decompose,
    hodge_laplacian,
    hodge_spectrum,
    normalized_laplacian,
)

# safety margin applied to power-iteration spectral bounds before designing
LAMBDA_MAX_MARGIN = 1.01
# lower end of sampled frequency intervals; keeps 1/lambda-type targets finite
GRID_LAMBDA_MIN = 1e-8


def nrmse(estimate, truth) -> float:
    """||estimate - truth|| / ||truth||."""
    estimate = np.asarray(estimate, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    denom = float(np.linalg.norm(truth))
    if denom == 0.0:
        raise ZeroReference("NRMSE reference signal is identically zero")
    return float(np.linalg.norm(estimate - truth) / denom)


# ---------------------------------------------------------------------------
# subcomponent extraction

_BLOCKS = ("gradient", "curl", "harmonic")


@dataclass(frozen=True)
class ExtractionResult:
    flow: np.ndarray
    nrmse: float | None  # vs the spectral projection; None if that is zero


def _indicator_spec(which: str, lam_max_g: float, lam_max_c: float) -> ResponseSpec:
    g0 = 1.0 if which == "harmonic" else 0.0
    return ResponseSpec(
        g0=g0,
        gradient=response_constant(1.0 if which == "gradient" else 0.0, lam_max_g),
        curl=response_constant(1.0 if which == "curl" else 0.0, lam_max_c),
    )


def _onesided_taps(freqs: np.ndarray, order: int) -> tuple[float, ...]:
    # solve Phi a = 1 with Phi the pure Vandermonde block (no constant column)
    phi = freqs[:, None] ** np.arange(1, order + 1)
    ones = np.ones(len(freqs))
    if order == len(freqs):
        taps = np.linalg.solve(phi, ones)
    else:
        taps, _, _, _ = np.linalg.lstsq(phi, ones, rcond=None)
    return tuple(taps)


def extract_component(
    sc: SimplicialComplex,
    flow,
    which: str = "gradient",
    method: str = "spectral",
    *,
    order_lower: int | None = None,
    order_upper: int | None = None,
    tied: bool = False,
    steepness: float | None = None,
    midpoint: float | None = None,
    quadrature_points: int | None = None,
    grouping_tol: float = 0.0,
    seed: int = 0,
    power_steps: int = 50,
) -> ExtractionResult:
    """Extract one Hodge component of an edge flow.

    Methods: exact spectral projection, least-squares filter with indicator
    targets (optionally tap-tied), a one-sided design without constant term,
    or a Chebyshev filter with a smooth step response.
    """
    if which not in _BLOCKS:
        raise DataError(f"unknown component {which!r}")
    flow = np.asarray(flow, dtype=np.float64)
    spectrum = hodge_spectrum(sc)
    f_g, f_c, f_h = hodge_decompose(sc, flow, spectrum)
    reference = {"gradient": f_g, "curl": f_c, "harmonic": f_h}[which]

    def result(estimate: np.ndarray) -> ExtractionResult:
        if np.linalg.norm(reference) == 0.0:
            return ExtractionResult(estimate, None)
        return ExtractionResult(estimate, nrmse(estimate, reference))

    if method == "spectral":
        return ExtractionResult(reference, 0.0 if np.linalg.norm(reference) else None)

    freqs_g, freqs_c = distinct_frequencies(spectrum, grouping_tol)
    freqs_g, freqs_c = np.asarray(freqs_g), np.asarray(freqs_c)

    if method == "filter_ls":
        spec = _indicator_spec(
            which,
            float(freqs_g[-1]) if freqs_g.size else 1.0,
            float(freqs_c[-1]) if freqs_c.size else 1.0,
        )
        if tied:
            order = order_lower if order_lower is not None else len(freqs_g)
            design = ls_tied(freqs_g, freqs_c, spec, order)
        else:
            l1 = order_lower if order_lower is not None else len(freqs_g)
            l2 = order_upper if order_upper is not None else len(freqs_c)
            design = ls_joint(freqs_g, freqs_c, spec, l1, l2)
        return result(apply(sc, design.coefficients, flow))

    if method == "filter_onesided":
        if which == "harmonic":
            raise UnsupportedCombination(
                "a one-sided design cannot isolate the harmonic component"
            )
        if which == "gradient":
            order = order_lower if order_lower is not None else len(freqs_g)
            coeffs = FilterCoefficients(0.0, _onesided_taps(freqs_g, order), ())
        else:
            order = order_upper if order_upper is not None else len(freqs_c)
            coeffs = FilterCoefficients(0.0, (), _onesided_taps(freqs_c, order))
        return result(apply(sc, coeffs, flow))

    if method == "filter_cheb":
        low, up = shift_operators(sc)
        lam_g = LAMBDA_MAX_MARGIN * estimate_lambda_max(low, power_steps, seed)
        lam_c = LAMBDA_MAX_MARGIN * estimate_lambda_max(up, power_steps, seed)
        lam_c = lam_c if lam_c > 0 else 1.0
        own_freqs = freqs_g if which == "gradient" else freqs_c
        others = np.concatenate([freqs_g, freqs_c])
        if which == "harmonic":
            lam0 = midpoint if midpoint is not None else 0.5 * float(np.min(others))
            k = steepness if steepness is not None else 40.0 / lam0
            curve_g = response_logistic(-k, lam0, lam_g)
            curve_c = response_logistic(-k, lam0, lam_c)
        else:
            if own_freqs.size == 0:
                raise DataError(f"complex has no {which} frequencies to extract")
            lam0 = midpoint if midpoint is not None else 0.5 * float(np.min(own_freqs))
            k = steepness if steepness is not None else 40.0 / lam0
            rising = response_logistic(k, lam0, lam_g if which == "gradient" else lam_c)
            flat = response_constant(
                float(rising(0.0)), lam_c if which == "gradient" else lam_g
            )
            curve_g, curve_c = (rising, flat) if which == "gradient" else (flat, rising)
        spec = ResponseSpec(float(curve_g(0.0)), curve_g, curve_c)
        l1 = order_lower if order_lower is not None else 40
        l2 = order_upper if order_upper is not None else 40
        filt = chebyshev_design(spec, lam_g, lam_c, l1, l2, quadrature_points)
        return result(chebyshev_apply_operators(filt, low, up, flow))

    raise DataError(f"unknown extraction method {method!r}")


# ---------------------------------------------------------------------------
# denoising


def denoise(
    sc: SimplicialComplex,
    flow,
    mu: float,
    regularizer: str = "hodge_laplacian",
    method: str = "exact",
    order: int | None = None,
    samples: int = 10,
    seed: int = 0,
    power_steps: int = 50,
) -> np.ndarray:
    """Solve (I + mu*P) f_hat = f exactly or via a filter approximation.

    P is the full Hodge Laplacian or the lower (edge) Laplacian alone. Filter
    methods realize the response 1/(1 + mu*lambda): a two-sided design for the
    Hodge regularizer, a one-sided lower design for the edge regularizer.
    """
    if mu <= 0:
        raise DataError("mu must be positive")
    if regularizer not in ("edge_laplacian", "hodge_laplacian"):
        raise DataError(f"unknown regularizer {regularizer!r}")
    flow = np.asarray(flow, dtype=np.float64)
    if flow.shape != (sc.n_edges,):
        raise DataError(f"flow has shape {flow.shape}, expected ({sc.n_edges},)")
    lap = hodge_laplacian(sc, 1)
    penalty = lap.total if regularizer == "hodge_laplacian" else lap.lower

    if method == "exact":
        system = np.eye(sc.n_edges) + mu * penalty
        try:
            return np.linalg.solve(system, flow)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - mu>0 keeps it SPD
            raise SingularSystem(str(exc)) from exc

    if method not in ("grid", "cheb"):
        raise DataError(f"unknown denoising method {method!r}")
    if order is None:
        raise DataError(f"method {method!r} needs a filter order")

    low, up = shift_operators(sc)
    lam_g = LAMBDA_MAX_MARGIN * estimate_lambda_max(low, power_steps, seed)
    lam_c = LAMBDA_MAX_MARGIN * estimate_lambda_max(up, power_steps, seed)
    response = lambda lam: 1.0 / (1.0 + mu * lam)
    two_sided = regularizer == "hodge_laplacian"
    spec = ResponseSpec(
        g0=1.0,
        gradient=response_custom(response, lam_g, family="inverse-regularizer"),
        curl=response_custom(response, lam_c if lam_c > 0 else 1.0,
                             family="inverse-regularizer") if two_sided else None,
    )
    if method == "grid":
        design = grid_design(
            spec, samples, samples if two_sided else 0, order,
            order if two_sided else 0,
        )
        return apply_operators(low, up, design.coefficients, flow)
    filt = chebyshev_design(
        spec,
        lam_g,
        (lam_c if lam_c > 0 else 1.0) if two_sided else None,
        order,
        order if two_sided else None,
    )
    return chebyshev_apply_operators(filt, low, up, flow)


# ---------------------------------------------------------------------------
# exchange markets and arbitrage


@dataclass(frozen=True)
class ExchangeMarket:
    """Pairwise exchange-rate matrix with unit diagonal.

    rate[i, j] is how much of currency j one unit of currency i buys. NaN
    marks a missing quote. Quotes may be asymmetric (rounded data); logs are
    read directly from the stored direction.
    """

    currency_names: tuple[str, ...]
    rate: np.ndarray

    def __post_init__(self):
        rate = np.array(self.rate, dtype=np.float64)
        n = len(self.currency_names)
        if rate.shape != (n, n):
            raise DataError(f"rate matrix shape {rate.shape} != ({n}, {n})")
        if np.any(np.abs(np.diag(rate) - 1.0) > 1e-12):
            raise DataError("rate matrix must have a unit diagonal")
        off = rate[~np.eye(n, dtype=bool)]
        finite = off[np.isfinite(off)]
        if np.any(finite <= 0.0):
            raise NonPositiveRate("exchange rates must be positive")
        rate.setflags(write=False)
        object.__setattr__(self, "rate", rate)
        object.__setattr__(self, "currency_names", tuple(self.currency_names))

    @property
    def n_currencies(self) -> int:
        return len(self.currency_names)

    def directed_rate(self, i: int, j: int) -> float:
        """Rate for converting i into j, falling back to the reciprocal quote."""
        r = self.rate[i, j]
        if math.isfinite(r):
            return float(r)
        back = self.rate[j, i]
        if math.isfinite(back):
            return 1.0 / float(back)
        raise DataError(
            f"no quote between {self.currency_names[i]} and {self.currency_names[j]}"
        )

    def is_complete(self) -> bool:
        n = self.n_currencies
        for i in range(n):
            for j in range(i + 1, n):
                if not (math.isfinite(self.rate[i, j]) or math.isfinite(self.rate[j, i])):
                    return False
        return True


def market_complex(market: ExchangeMarket) -> SimplicialComplex:
    """Complex of quoted pairs with every 3-clique filled as a triangle."""
    n = market.n_currencies
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if math.isfinite(market.rate[i, j]) or math.isfinite(market.rate[j, i])
    ]
    return build_complex(n, edges, infer_triangles(n, edges))


def _log_flow(market: ExchangeMarket, sc: SimplicialComplex) -> np.ndarray:
    # one number per edge (i, j), i < j: the log-rate read in the i -> j direction
    return np.array([math.log(market.directed_rate(i, j)) for i, j in sc.edges])


def arbitrage_check(
    market: ExchangeMarket, threshold: float = 0.003
) -> list[tuple[tuple[int, int, int], float]]:
    """Triangles whose forward round trip beats the threshold.

    For each filled triangle (i, j, k), i<j<k, the round trip converts i
    through j and k back to i; the reported gain is that product minus one
    (positive means free profit). Returned sorted by decreasing gain.
    """
    sc = market_complex(market)
    hits = []
    for (i, j, k) in sc.triangles:
        roundtrip = (
            market.directed_rate(i, j)
            * market.directed_rate(j, k)
            * market.directed_rate(k, i)
        )
        gain = roundtrip - 1.0
        if gain > threshold:
            hits.append(((i, j, k), float(gain)))
    hits.sort(key=lambda item: (-item[1], item[0]))
    return hits


def arbitrage_correct(market: ExchangeMarket) -> ExchangeMarket:
    """Project the log-rate flow onto its gradient part, making rates consistent.

    For a complete market the projector is the single-tap filter
    (1/N0) * L_lower applied to the log flow. An incomplete market falls back
    to the spectral gradient projection of its quoted-pair complex (with an
    IncompleteMarket warning). Corrected rates are reciprocal-consistent.
    """
    sc = market_complex(market)
    flow = _log_flow(market, sc)
    if market.is_complete():
        coeffs = FilterCoefficients(0.0, (1.0 / market.n_currencies,), ())
        corrected = apply(sc, coeffs, flow)
    else:
        warnings.warn(
            IncompleteMarket(
                "market is missing pair quotes; using the spectral gradient "
                "projector of the quoted-pair complex"
            )
        )
        corrected, _, _ = hodge_decompose(sc, flow)
    n = market.n_currencies
    rate = np.full((n, n), np.nan)
    np.fill_diagonal(rate, 1.0)
    for e, (i, j) in enumerate(sc.edges):
        rate[i, j] = math.exp(corrected[e])
        rate[j, i] = 1.0 / rate[i, j]
    return ExchangeMarket(market.currency_names, rate)


# ---------------------------------------------------------------------------
# edge PageRank


class SubspaceNorms(NamedTuple):
    total: float
    harmonic: float
    gradient: float
    curl: float


@dataclass(frozen=True)
class PageRankResult:
    edge_index: int
    pi: np.ndarray
    norms_abs: SubspaceNorms
    norms_rel: SubspaceNorms


@lru_cache(maxsize=32)
def _normalized_split(sc: SimplicialComplex):
    """Eigenbases of the symmetrized normalized parts, for subspace norms."""
    norm = normalized_laplacian(sc)
    w_low, v_low = np.linalg.eigh(norm.sym_lower)
    w_up, v_up = np.linalg.eigh(norm.sym_upper)
    top = max(w_low[-1] if w_low.size else 0.0, w_up[-1] if w_up.size else 0.0)
    tol = 1e-8 * top if top > 0 else 1e-12
    return (
        v_low[:, w_low > tol],
        v_up[:, w_up > tol],
        np.sqrt(norm.weight),
    )


def _subspace_norms(sc: SimplicialComplex, pi: np.ndarray) -> tuple[SubspaceNorms, SubspaceNorms]:
    v_grad, v_curl, root_weight = _normalized_split(sc)
    # weighted coordinates in which the normalized parts are symmetric and the
    # gradient/curl/harmonic split is orthogonal
    y = pi / root_weight
    y_g = v_grad @ (v_grad.T @ y)
    y_c = v_curl @ (v_curl.T @ y)
    y_h = y - y_g - y_c
    norms = SubspaceNorms(
        float(np.linalg.norm(y)),
        float(np.linalg.norm(y_h)),
        float(np.linalg.norm(y_g)),
        float(np.linalg.norm(y_c)),
    )
    total = norms.total if norms.total > 0 else 1.0
    rel = SubspaceNorms(1.0, norms.harmonic / total, norms.gradient / total,
                        norms.curl / total)
    return norms, rel


def _pagerank_filter_matrix(
    sc: SimplicialComplex,
    gamma: float,
    method: str,
    order: int | None,
    samples: int,
    seed: int,
    power_steps: int,
):
    """Shift operators plus the designed filter for the 1/(gamma+lambda) response."""
    norm = normalized_laplacian(sc)
    low = ShiftMatrix(sp.csr_matrix(norm.lower))
    up = ShiftMatrix(sp.csr_matrix(norm.upper))
    lam_g = LAMBDA_MAX_MARGIN * estimate_lambda_max(norm.sym_lower, power_steps, seed)
    lam_c = LAMBDA_MAX_MARGIN * estimate_lambda_max(norm.sym_upper, power_steps, seed)
    lam_c = lam_c if lam_c > 0 else 1.0
    if method == "grid":
        spec = ResponseSpec(
            g0=1.0 / gamma,
            gradient=response_inverse_shift(gamma, lam_g, GRID_LAMBDA_MIN),
            curl=response_inverse_shift(gamma, lam_c, GRID_LAMBDA_MIN),
        )
        design = grid_design(spec, samples, samples, order, order)
        return low, up, ("poly", design.coefficients)
    if method == "cheb":
        spec = ResponseSpec(
            g0=1.0 / gamma,
            gradient=response_inverse_shift(gamma, lam_g),
            curl=response_inverse_shift(gamma, lam_c),
        )
        filt = chebyshev_design(spec, lam_g, lam_c, order, order)
        return low, up, ("cheb", filt)
    raise DataError(f"unknown pagerank method {method!r}")


def edge_pagerank(
    sc: SimplicialComplex,
    gamma: float,
    edge_index: int,
    method: str = "exact",
    order: int | None = None,
    samples: int = 200,
    seed: int = 0,
    power_steps: int = 50,
) -> PageRankResult:
    """Influence of one edge: solve (gamma*I + L_n) pi = indicator(edge).

    Exact method solves the dense system; grid/cheb realize the response
    1/(gamma + lambda) as filters over the normalized Laplacian parts. Norms
    split pi into harmonic/gradient/curl parts of the normalized operator.
    """
    if gamma <= 0:
        raise DataError("gamma must be positive")
    if not 0 <= edge_index < sc.n_edges:
        raise IndexOutOfRange(f"edge index {edge_index} outside [0, {sc.n_edges})")
    f = np.zeros(sc.n_edges)
    f[edge_index] = 1.0
    if method == "exact":
        norm = normalized_laplacian(sc)
        pi = np.linalg.solve(gamma * np.eye(sc.n_edges) + norm.total, f)
    else:
        if order is None:
            raise DataError(f"method {method!r} needs a filter order")
        low, up, (kind, filt) = _pagerank_filter_matrix(
            sc, gamma, method, order, samples, seed, power_steps
        )
        if kind == "poly":
            pi = apply_operators(low, up, filt, f)
        else:
            pi = chebyshev_apply_operators(filt, low, up, f)
    norms, rel = _subspace_norms(sc, pi)
    return PageRankResult(edge_index, pi, norms, rel)


def edge_pagerank_all(
    sc: SimplicialComplex,
    gamma: float,
    method: str = "exact",
    order: int | None = None,
    samples: int = 200,
    seed: int = 0,
    power_steps: int = 50,
) -> list[PageRankResult]:
    """PageRank for every edge; the exact path factorizes the system once."""
    if gamma <= 0:
        raise DataError("gamma must be positive")
    n = sc.n_edges
    if method == "exact":
        norm = normalized_laplacian(sc)
        lu, piv = scipy.linalg.lu_factor(gamma * np.eye(n) + norm.total)
        columns = scipy.linalg.lu_solve((lu, piv), np.eye(n))
    else:
        if order is None:
            raise DataError(f"method {method!r} needs a filter order")
        low, up, (kind, filt) = _pagerank_filter_matrix(
            sc, gamma, method, order, samples, seed, power_steps
        )
        columns = np.empty((n, n))
        eye = np.eye(n)
        for j in range(n):
            if kind == "poly":
                columns[:, j] = apply_operators(low, up, filt, eye[:, j])
            else:
                columns[:, j] = chebyshev_apply_operators(filt, low, up, eye[:, j])
    out = []
    for j in range(n):
        norms, rel = _subspace_norms(sc, columns[:, j])
        out.append(PageRankResult(j, columns[:, j].copy(), norms, rel))
    return out
