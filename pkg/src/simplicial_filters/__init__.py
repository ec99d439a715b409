"""Simplicial complexes of order two: spectral theory, filters, applications."""
from .complexes import (
    OrientationPlan,
    OrientedComplex,
    PermutationPlan,
    SignedIncidence,
    SimplicialComplex,
    boundary_csr,
    boundary_dense,
    build_complex,
    incidence_matrix,
    infer_triangles,
    lower_neighborhood,
    permutation_signs,
    permute,
    reorient,
    upper_neighborhood,
)
from .spectral import (
    HodgeLaplacians,
    HodgeSpectrum,
    NormalizedLaplacian,
    curl,
    distinct_frequencies,
    divergence,
    hodge_decompose,
    hodge_laplacian,
    hodge_spectrum,
    inverse_sft,
    normalized_hodge_laplacian,
    normalized_laplacian,
    sft,
)
from .filters import (
    FilterCoefficients,
    FrequencyResponse,
    apply,
    distributed_shift,
    frequency_response,
    polynomial_response,
    shift_lower,
    shift_operators,
    shift_upper,
)
from .design import (
    ChebyshevFilter,
    DesignResult,
    ResponseCurve,
    ResponseSpec,
    chebyshev_apply,
    chebyshev_design,
    chebyshev_error_bound,
    chebyshev_response,
    estimate_lambda_max,
    grid_design,
    ls_decoupled,
    ls_joint,
    ls_tied,
    response_constant,
    response_custom,
    response_inverse_shift,
    response_logistic,
    response_step,
    response_table,
)
from .apps import (
    ExchangeMarket,
    PageRankResult,
    arbitrage_check,
    arbitrage_correct,
    denoise,
    edge_pagerank,
    edge_pagerank_all,
    extract_component,
    market_complex,
    nrmse,
)
from ._kernels import ShiftMatrix, active_backend
from .errors import (
    DataError,
    DimensionMismatch,
    DomainMismatch,
    EigenFailure,
    EmptySpec,
    IllConditioned,
    IncompleteMarket,
    IndexOutOfRange,
    MissingFace,
    NonPositiveRate,
    NumericalError,
    SingularSystem,
    UnsupportedCombination,
    UnsupportedOrder,
    ZeroReference,
)
from .fixtures import demo_market, generate_road_complex, toy_complex

__version__ = "0.1.0"

__all__ = [
    "SimplicialComplex", "OrientedComplex", "SignedIncidence",
    "PermutationPlan", "OrientationPlan",
    "build_complex", "infer_triangles", "incidence_matrix",
    "boundary_dense", "boundary_csr",
    "lower_neighborhood", "upper_neighborhood",
    "permute", "permutation_signs", "reorient",
    "HodgeLaplacians", "HodgeSpectrum", "NormalizedLaplacian",
    "hodge_laplacian", "normalized_hodge_laplacian", "normalized_laplacian",
    "hodge_spectrum", "sft", "inverse_sft", "hodge_decompose",
    "divergence", "curl", "distinct_frequencies",
    "FilterCoefficients", "FrequencyResponse",
    "shift_lower", "shift_upper", "shift_operators",
    "apply", "distributed_shift", "frequency_response", "polynomial_response",
    "ResponseCurve", "ResponseSpec", "DesignResult", "ChebyshevFilter",
    "response_constant", "response_step", "response_logistic",
    "response_inverse_shift", "response_table", "response_custom",
    "ls_joint", "ls_decoupled", "ls_tied", "grid_design",
    "estimate_lambda_max",
    "chebyshev_design", "chebyshev_apply", "chebyshev_response",
    "chebyshev_error_bound",
    "ExchangeMarket", "PageRankResult",
    "extract_component", "denoise", "nrmse",
    "arbitrage_check", "arbitrage_correct", "market_complex",
    "edge_pagerank", "edge_pagerank_all",
    "ShiftMatrix", "active_backend",
    "DataError", "MissingFace", "IndexOutOfRange", "UnsupportedOrder",
    "DimensionMismatch", "EmptySpec", "DomainMismatch", "ZeroReference",
    "NonPositiveRate", "UnsupportedCombination",
    "NumericalError", "EigenFailure", "SingularSystem",
    "IllConditioned", "IncompleteMarket",
    "toy_complex", "generate_road_complex", "demo_market",
    "__version__",
]
