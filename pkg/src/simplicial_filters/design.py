"""Filter design: least-squares (joint, decoupled, tied), grid-based, and
shifted-Chebyshev procedures, plus the response-curve library and the power
iteration used to bound spectra.

All LS solves run on column-scaled systems to soften Vandermonde
ill-conditioning; the condition number reported alongside the result is that
of the raw, unscaled system.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from ._kernels import ShiftMatrix
from .errors import DataError, DomainMismatch, EmptySpec, IllConditioned
from .filters import FilterCoefficients

COND_WARN_THRESHOLD = 1e10


# ---------------------------------------------------------------------------
# response curves


@dataclass(frozen=True)
class ResponseCurve:
    """A desired frequency response over one block, defined on [lam_min, lam_max]."""

    family: str
    params: tuple[tuple[str, float], ...]
    fn: Callable[[np.ndarray], np.ndarray]
    lam_min: float
    lam_max: float

    def __post_init__(self):
        if self.lam_min < 0 or self.lam_min > self.lam_max:
            raise DataError("need 0 <= lam_min <= lam_max")

    def __call__(self, lam) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(lam, dtype=np.float64)))


def response_constant(value: float, lam_max: float, lam_min: float = 0.0) -> ResponseCurve:
    value = float(value)
    return ResponseCurve(
        "constant", (("value", value),), lambda lam: np.full_like(lam, value),
        float(lam_min), float(lam_max),
    )


def response_step(
    cutoff: float, low: float, high: float, lam_max: float, lam_min: float = 0.0
) -> ResponseCurve:
    """Ideal step: `low` below the cutoff frequency, `high` at and above it."""
    cutoff, low, high = float(cutoff), float(low), float(high)
    return ResponseCurve(
        "ideal-step",
        (("cutoff", cutoff), ("low", low), ("high", high)),
        lambda lam: np.where(lam < cutoff, low, high),
        float(lam_min), float(lam_max),
    )


def response_logistic(
    k: float, lam0: float, lam_max: float, lam_min: float = 0.0
) -> ResponseCurve:
    """Smooth step 1 / (1 + exp(-k (lam - lam0))); negative k flips it."""
    k, lam0 = float(k), float(lam0)
    return ResponseCurve(
        "logistic", (("k", k), ("lambda0", lam0)),
        lambda lam: 1.0 / (1.0 + np.exp(-k * (lam - lam0))),
        float(lam_min), float(lam_max),
    )


def response_inverse_shift(
    gamma: float, lam_max: float, lam_min: float = 0.0
) -> ResponseCurve:
    """1 / (gamma + lam): the ranking / regularization response."""
    gamma = float(gamma)
    if gamma <= 0:
        raise DataError("gamma must be positive")
    return ResponseCurve(
        "inverse-shift", (("gamma", gamma),),
        lambda lam: 1.0 / (gamma + lam),
        float(lam_min), float(lam_max),
    )


def response_table(points: Sequence[tuple[float, float]]) -> ResponseCurve:
    """Piecewise-linear curve through tabulated (frequency, response) pairs."""
    pts = sorted((float(l), float(g)) for l, g in points)
    if not pts:
        raise EmptySpec("response table is empty")
    lams = np.array([p[0] for p in pts])
    vals = np.array([p[1] for p in pts])
    params = tuple(
        (name, value)
        for i, (l, g) in enumerate(pts)
        for name, value in ((f"lambda{i}", l), (f"g{i}", g))
    )
    return ResponseCurve(
        "table", params, lambda lam: np.interp(lam, lams, vals),
        float(lams[0]), float(lams[-1]),
    )


def response_custom(
    fn: Callable, lam_max: float, lam_min: float = 0.0, family: str = "custom"
) -> ResponseCurve:
    return ResponseCurve(family, (), fn, float(lam_min), float(lam_max))


@dataclass(frozen=True)
class ResponseSpec:
    """Target response: harmonic value g0 plus per-block curves.

    Either curve may be None for one-sided designs. For Chebyshev use both
    present curves must satisfy curve(0) == g0.
    """

    g0: float
    gradient: ResponseCurve | None
    curl: ResponseCurve | None


# ---------------------------------------------------------------------------
# least-squares designs


@dataclass(frozen=True)
class DesignResult:
    coefficients: FilterCoefficients
    residual: float
    condition: float


def _scaled_lstsq(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float, float]:
    scale = np.linalg.norm(a, axis=0)
    scale[scale == 0.0] = 1.0
    x, _, _, _ = np.linalg.lstsq(a / scale, b, rcond=None)
    x = x / scale
    cond = float(np.linalg.cond(a))
    if cond > COND_WARN_THRESHOLD:
        warnings.warn(
            IllConditioned(
                f"design system condition number {cond:.3e}; "
                "coefficients returned but may be unstable"
            )
        )
    residual = float(np.linalg.norm(a @ x - b))
    return x, residual, cond


def _design_system(
    freqs_gradient: np.ndarray,
    freqs_curl: np.ndarray,
    g_gradient: np.ndarray,
    g_curl: np.ndarray,
    g0: float,
    order_lower: int,
    order_upper: int,
) -> tuple[np.ndarray, np.ndarray]:
    ng, nc = len(freqs_gradient), len(freqs_curl)
    a = np.zeros((1 + ng + nc, 1 + order_lower + order_upper))
    a[:, 0] = 1.0
    rhs = np.concatenate(([g0], g_gradient, g_curl))
    if order_lower:
        a[1 : 1 + ng, 1 : 1 + order_lower] = freqs_gradient[:, None] ** np.arange(
            1, order_lower + 1
        )
    if order_upper:
        a[1 + ng :, 1 + order_lower :] = freqs_curl[:, None] ** np.arange(
            1, order_upper + 1
        )
    return a, rhs


def _targets_at(
    targets: ResponseSpec, freqs_gradient, freqs_curl
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    fg = np.asarray(freqs_gradient, dtype=np.float64)
    fc = np.asarray(freqs_curl, dtype=np.float64)
    gg = targets.gradient(fg) if (targets.gradient is not None and fg.size) else np.zeros(0)
    gc = targets.curl(fc) if (targets.curl is not None and fc.size) else np.zeros(0)
    if fg.size and targets.gradient is None:
        raise EmptySpec("gradient frequencies given but no gradient response curve")
    if fc.size and targets.curl is None:
        raise EmptySpec("curl frequencies given but no curl response curve")
    return fg[: gg.size], fc[: gc.size], gg, gc


def _warn_order(order: int, n_freqs: int, label: str) -> None:
    if order > n_freqs:
        warnings.warn(
            f"{label} order {order} exceeds the {n_freqs} distinct frequencies; "
            "higher powers are redundant",
            stacklevel=3,
        )


def ls_joint(
    freqs_gradient: Sequence[float],
    freqs_curl: Sequence[float],
    targets: ResponseSpec,
    order_lower: int,
    order_upper: int,
) -> DesignResult:
    """Jointly fit h0, alpha, beta to targets at distinct frequencies."""
    fg, fc, gg, gc = _targets_at(targets, freqs_gradient, freqs_curl)
    if order_lower > 0 and fg.size == 0:
        raise EmptySpec("lower taps requested but no gradient frequencies")
    if order_upper > 0 and fc.size == 0:
        raise EmptySpec("upper taps requested but no curl frequencies")
    _warn_order(order_lower, fg.size, "lower")
    _warn_order(order_upper, fc.size, "upper")
    a, rhs = _design_system(fg, fc, gg, gc, targets.g0, order_lower, order_upper)
    x, residual, cond = _scaled_lstsq(a, rhs)
    coeffs = FilterCoefficients(
        h0=x[0],
        alpha=tuple(x[1 : 1 + order_lower]),
        beta=tuple(x[1 + order_lower :]),
    )
    return DesignResult(coeffs, residual, cond)


def ls_decoupled(
    freqs_gradient: Sequence[float],
    freqs_curl: Sequence[float],
    targets: ResponseSpec,
    order_lower: int,
    order_upper: int,
) -> DesignResult:
    """Fix h0 = g0, then fit the lower and upper taps independently."""
    fg, fc, gg, gc = _targets_at(targets, freqs_gradient, freqs_curl)
    if order_lower > 0 and fg.size == 0:
        raise EmptySpec("lower taps requested but no gradient frequencies")
    if order_upper > 0 and fc.size == 0:
        raise EmptySpec("upper taps requested but no curl frequencies")
    _warn_order(order_lower, fg.size, "lower")
    _warn_order(order_upper, fc.size, "upper")
    h0 = float(targets.g0)
    conds = [1.0]
    alpha = np.zeros(0)
    beta = np.zeros(0)
    if order_lower:
        phi = fg[:, None] ** np.arange(1, order_lower + 1)
        alpha, _, cond = _scaled_lstsq(phi, gg - h0)
        conds.append(cond)
    if order_upper:
        phi = fc[:, None] ** np.arange(1, order_upper + 1)
        beta, _, cond = _scaled_lstsq(phi, gc - h0)
        conds.append(cond)
    coeffs = FilterCoefficients(h0=h0, alpha=tuple(alpha), beta=tuple(beta))
    a, rhs = _design_system(fg, fc, gg, gc, targets.g0, order_lower, order_upper)
    residual = float(np.linalg.norm(a @ np.concatenate(([h0], alpha, beta)) - rhs))
    return DesignResult(coeffs, residual, float(max(conds)))


def ls_tied(
    freqs_gradient: Sequence[float],
    freqs_curl: Sequence[float],
    targets: ResponseSpec,
    order: int,
) -> DesignResult:
    """Shared-tap variant: one tap vector drives both shifts (alpha == beta)."""
    fg, fc, gg, gc = _targets_at(targets, freqs_gradient, freqs_curl)
    if order > 0 and fg.size == 0 and fc.size == 0:
        raise EmptySpec("taps requested but no frequencies")
    freqs = np.concatenate([fg, fc])
    a = np.zeros((1 + freqs.size, 1 + order))
    a[:, 0] = 1.0
    if order:
        a[1:, 1:] = freqs[:, None] ** np.arange(1, order + 1)
    rhs = np.concatenate(([targets.g0], gg, gc))
    x, residual, cond = _scaled_lstsq(a, rhs)
    shared = tuple(x[1:])
    return DesignResult(FilterCoefficients(x[0], shared, shared), residual, cond)


# ---------------------------------------------------------------------------
# spectral bound and grid design


def estimate_lambda_max(matrix, iterations: int = 50, seed: int = 0) -> float:
    """Power-iteration estimate of the dominant eigenvalue (Rayleigh quotient).

    Deterministic for a fixed seed. Returns 0.0 for the zero matrix.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if isinstance(matrix, ShiftMatrix):
        n = matrix.shape[0]
        matvec = matrix.matvec
    else:
        if not hasattr(matrix, "shape"):
            matrix = np.asarray(matrix, dtype=np.float64)
        n = matrix.shape[0]
        matvec = lambda x: matrix @ x
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(iterations):
        w = matvec(v)
        norm = np.linalg.norm(w)
        if norm < 1e-300:
            return 0.0
        v = w / norm
    return float(v @ matvec(v))


def grid_design(
    spec: ResponseSpec,
    samples_gradient: int,
    samples_curl: int,
    order_lower: int,
    order_upper: int,
    mode: str = "joint",
) -> DesignResult:
    """Universal design: sample the continuous curves on uniform frequency
    grids and solve the same LS system on the sampled points."""
    if mode not in ("joint", "decoupled"):
        raise DataError(f"unknown design mode {mode!r}")
    fg = np.zeros(0)
    fc = np.zeros(0)
    if spec.gradient is not None:
        if samples_gradient < max(order_lower, 1):
            raise DataError("need at least as many gradient samples as taps")
        fg = np.linspace(spec.gradient.lam_min, spec.gradient.lam_max, samples_gradient)
    if spec.curl is not None:
        if samples_curl < max(order_upper, 1):
            raise DataError("need at least as many curl samples as taps")
        fc = np.linspace(spec.curl.lam_min, spec.curl.lam_max, samples_curl)
    solver = ls_joint if mode == "joint" else ls_decoupled
    return solver(fg, fc, spec, order_lower, order_upper)


# ---------------------------------------------------------------------------
# Chebyshev design


@dataclass(frozen=True)
class ChebyshevFilter:
    """Truncated shifted-Chebyshev series per shift, plus the constant g0.

    Either side may be empty (one-sided filter). The assembled operator is
    H_lower + H_upper - g0*I when both sides are present, or the single
    present side alone.
    """

    c_lower: tuple[float, ...]
    c_upper: tuple[float, ...]
    omega_lower: float
    omega_upper: float
    g0: float

    def __post_init__(self):
        if self.c_lower and self.omega_lower <= 0:
            raise DataError("omega_lower must be positive for a nonempty series")
        if self.c_upper and self.omega_upper <= 0:
            raise DataError("omega_upper must be positive for a nonempty series")

    @property
    def two_sided(self) -> bool:
        return bool(self.c_lower) and bool(self.c_upper)


def chebyshev_coefficients(
    fn: Callable, omega: float, order: int, quadrature_points: int
) -> np.ndarray:
    """Chebyshev coefficients of fn(omega*(cos(phi)+1)) by midpoint quadrature."""
    j = np.arange(quadrature_points)
    phi = np.pi * (j + 0.5) / quadrature_points
    values = np.asarray(fn(omega * (np.cos(phi) + 1.0)), dtype=np.float64)
    ls = np.arange(order + 1)
    return (2.0 / quadrature_points) * (np.cos(np.outer(ls, phi)) @ values)


def default_quadrature_points(order: int) -> int:
    return max(256, 8 * order)


def chebyshev_design(
    spec: ResponseSpec,
    lambda_max_gradient: float | None,
    lambda_max_curl: float | None,
    order_lower: int | None,
    order_upper: int | None,
    quadrature_points: int | None = None,
) -> ChebyshevFilter:
    """Design a shifted-Chebyshev filter for continuous response curves.

    Both present curves must match the harmonic response at frequency 0
    (within 1e-12), since the series are anchored there. Pass None for one
    side to build a one-sided filter.
    """
    has_lower = spec.gradient is not None and order_lower is not None
    has_upper = spec.curl is not None and order_upper is not None
    if not has_lower and not has_upper:
        raise EmptySpec("chebyshev design needs at least one response curve")
    for present, curve, label in (
        (has_lower, spec.gradient, "gradient"),
        (has_upper, spec.curl, "curl"),
    ):
        if present and abs(float(curve(0.0)) - spec.g0) > 1e-12:
            raise DomainMismatch(
                f"{label} curve value at 0 ({float(curve(0.0)):.17g}) must equal "
                f"g0 ({spec.g0:.17g})"
            )
    c_lower: tuple[float, ...] = ()
    c_upper: tuple[float, ...] = ()
    omega_lower = omega_upper = 0.0
    if has_lower:
        if lambda_max_gradient is None or lambda_max_gradient <= 0:
            raise DataError("lambda_max_gradient must be positive")
        omega_lower = float(lambda_max_gradient) / 2.0
        q = quadrature_points or default_quadrature_points(order_lower)
        c_lower = tuple(
            chebyshev_coefficients(spec.gradient, omega_lower, order_lower, q)
        )
    if has_upper:
        if lambda_max_curl is None or lambda_max_curl <= 0:
            raise DataError("lambda_max_curl must be positive")
        omega_upper = float(lambda_max_curl) / 2.0
        q = quadrature_points or default_quadrature_points(order_upper)
        c_upper = tuple(chebyshev_coefficients(spec.curl, omega_upper, order_upper, q))
    return ChebyshevFilter(c_lower, c_upper, omega_lower, omega_upper, float(spec.g0))


def _series_apply(
    op: ShiftMatrix, omega: float, coeffs: Sequence[float], flow: np.ndarray
) -> np.ndarray:
    # three-term recursion in the shifted variable P1(L) = L/omega - I
    out = 0.5 * coeffs[0] * flow
    if len(coeffs) == 1:
        return out
    w_prev2 = flow
    w_prev1 = op.matvec(flow) / omega - flow
    out = out + coeffs[1] * w_prev1
    for c in coeffs[2:]:
        w = 2.0 * (op.matvec(w_prev1) / omega - w_prev1) - w_prev2
        out = out + c * w
        w_prev2, w_prev1 = w_prev1, w
    return out


def chebyshev_apply_operators(
    filt: ChebyshevFilter,
    op_lower: ShiftMatrix | None,
    op_upper: ShiftMatrix | None,
    flow: np.ndarray,
) -> np.ndarray:
    parts = []
    if filt.c_lower:
        if op_lower is None:
            raise ValueError("lower series present but no lower operator")
        parts.append(_series_apply(op_lower, filt.omega_lower, filt.c_lower, flow))
    if filt.c_upper:
        if op_upper is None:
            raise ValueError("upper series present but no upper operator")
        parts.append(_series_apply(op_upper, filt.omega_upper, filt.c_upper, flow))
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    if filt.two_sided:
        out = out - filt.g0 * flow
    return out


def chebyshev_apply(filt: ChebyshevFilter, sc, flow, backend: str | None = None) -> np.ndarray:
    """Apply a Chebyshev filter to an edge flow by the three-term recursion."""
    from .filters import _check_flow, shift_operators

    flow = _check_flow(sc, flow)
    low, up = shift_operators(sc, backend)
    return chebyshev_apply_operators(filt, low, up, flow)


def _series_value(coeffs: Sequence[float], omega: float, lam: float) -> float:
    x = lam / omega - 1.0
    series = np.array([0.5 * coeffs[0], *coeffs[1:]])
    return float(_cheb.chebval(x, series))


def _identity_weight(coeffs: Sequence[float], omega: float) -> float:
    # series value at frequency 0, i.e. at Chebyshev argument -1
    return _series_value(coeffs, omega, 0.0) if coeffs else 0.0


def chebyshev_response(filt: ChebyshevFilter, lam: float, block: str) -> float:
    """Scalar frequency response of the assembled Chebyshev operator.

    At a gradient frequency the upper series contributes only its value at 0
    (and vice versa), because the other Laplacian annihilates that eigenvector.
    """
    if block not in ("harmonic", "gradient", "curl"):
        raise ValueError(f"unknown block {block!r}")
    p_lower0 = _identity_weight(filt.c_lower, filt.omega_lower)
    p_upper0 = _identity_weight(filt.c_upper, filt.omega_upper)
    correction = -filt.g0 if filt.two_sided else 0.0
    if block == "gradient" and filt.c_lower:
        return _series_value(filt.c_lower, filt.omega_lower, lam) + p_upper0 + correction
    if block == "curl" and filt.c_upper:
        return _series_value(filt.c_upper, filt.omega_upper, lam) + p_lower0 + correction
    # harmonic, or the block the one-sided filter cannot see
    return p_lower0 + p_upper0 + correction


def chebyshev_error_bound(
    filt: ChebyshevFilter, spec: ResponseSpec, sample_count: int = 1000
) -> float:
    """Worst-case response error max over uniform frequency grids.

    Bounds the operator error of the assembled filter against the exact
    target-response operator on any complex whose frequencies lie inside
    the sampled intervals.
    """
    if sample_count < 100:
        raise DataError("sample_count must be >= 100")
    worst = 0.0
    if filt.c_lower and spec.gradient is not None:
        grid = np.linspace(0.0, 2.0 * filt.omega_lower, sample_count)
        resp = np.array([chebyshev_response(filt, l, "gradient") for l in grid])
        worst = max(worst, float(np.max(np.abs(resp - spec.gradient(grid)))))
    if filt.c_upper and spec.curl is not None:
        grid = np.linspace(0.0, 2.0 * filt.omega_upper, sample_count)
        resp = np.array([chebyshev_response(filt, l, "curl") for l in grid])
        worst = max(worst, float(np.max(np.abs(resp - spec.curl(grid)))))
    return worst


def chebyshev_operator_error(filt: ChebyshevFilter, spec: ResponseSpec, sc) -> float:
    """Dense spectral-norm distance between the assembled filter and the
    exact operator realizing the target response on the given complex."""
    from .spectral import hodge_spectrum

    spectrum = hodge_spectrum(sc)
    n = spectrum.basis.shape[0]
    target = np.full(spectrum.n_harmonic, spec.g0)
    g_grad = (
        spec.gradient(spectrum.lambda_gradient)
        if spec.gradient is not None
        else np.full(spectrum.n_gradient, spec.g0)
    )
    g_curl = (
        spec.curl(spectrum.lambda_curl)
        if spec.curl is not None
        else np.full(spectrum.n_curl, spec.g0)
    )
    exact = spectrum.basis @ np.diag(np.concatenate([target, g_grad, g_curl])) @ spectrum.basis.T
    dense = np.zeros((n, n))
    from .filters import shift_operators

    low, up = shift_operators(sc)
    eye = np.eye(n)
    for j in range(n):
        dense[:, j] = chebyshev_apply_operators(filt, low, up, eye[:, j])
    return float(np.linalg.norm(exact - dense, 2))
