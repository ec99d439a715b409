"""File formats: complexes and filters as JSON, signals/markets/tables as CSV.

All floating-point output is rendered with 17 significant digits so repeated
runs produce byte-identical files.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .apps import ExchangeMarket
from .complexes import SimplicialComplex, build_complex, infer_triangles
from .design import (
    ResponseCurve,
    ResponseSpec,
    response_constant,
    response_inverse_shift,
    response_logistic,
    response_step,
    response_table,
)
from .errors import DataError
from .filters import FilterCoefficients
from .design import ChebyshevFilter
from .spectral import HodgeSpectrum


def format_float(x: float) -> str:
    return "%.17g" % float(x)


def _render_json(obj) -> str:
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_render_json(x) for x in obj) + "]"
    if isinstance(obj, dict):
        parts = (f"{json.dumps(str(k))}: {_render_json(v)}" for k, v in obj.items())
        return "{" + ", ".join(parts) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_json(obj, path) -> None:
    Path(path).write_text(_render_json(obj) + "\n")


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read JSON file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# complexes


def save_complex(sc: SimplicialComplex, path) -> None:
    dump_json(
        {
            "vertex_count": sc.vertex_count,
            "edges": [list(e) for e in sc.edges],
            "triangles": [list(t) for t in sc.triangles],
        },
        path,
    )


def load_complex(path) -> SimplicialComplex:
    """Read a complex; ``"infer_triangles": true`` fills every 3-clique."""
    data = _read_json(path)
    try:
        vertex_count = data["vertex_count"]
        edges = data["edges"]
    except (TypeError, KeyError) as exc:
        raise DataError(f"complex file {path} is missing {exc}") from exc
    if data.get("infer_triangles"):
        triangles = infer_triangles(vertex_count, edges)
    else:
        triangles = data.get("triangles", [])
    return build_complex(vertex_count, edges, triangles)


# ---------------------------------------------------------------------------
# signals


def _data_rows(path) -> list[list[str]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = [
        [cell.strip() for cell in line.split(",")]
        for line in text.splitlines()
        if line.strip()
    ]
    if rows:
        try:
            float(rows[0][0])
        except ValueError:
            rows = rows[1:]  # header row
    return rows


def load_signal(path, sc: SimplicialComplex | None = None) -> np.ndarray:
    """Read a signal CSV: ``index,value`` rows, or ``u,v,value`` edge rows.

    In the pair form the edge is resolved by its sorted vertices and the value
    sign is flipped when the row lists the reversed (v, u) direction, so flows
    written against either orientation load consistently.
    """
    rows = _data_rows(path)
    if not rows:
        raise DataError(f"signal file {path} is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DataError(f"signal file {path} has ragged rows")
    if width == 2:
        pairs = [(int(r[0]), float(r[1])) for r in rows]
        n = max(i for i, _ in pairs) + 1
        if sc is not None:
            n = sc.n_edges
        values = np.zeros(n)
        for i, v in pairs:
            if not 0 <= i < n:
                raise DataError(f"signal index {i} outside [0, {n})")
            values[i] = v
        return values
    if width == 3:
        if sc is None:
            raise DataError("edge-pair signal files need the complex to resolve edges")
        index = sc.edge_index
        values = np.zeros(sc.n_edges)
        for r in rows:
            u, v, val = int(r[0]), int(r[1]), float(r[2])
            key = (min(u, v), max(u, v))
            if key not in index:
                raise DataError(f"unknown edge {key} in signal file {path}")
            values[index[key]] = val if u < v else -val
        return values
    raise DataError(f"signal file {path} must have 2 or 3 columns")


def save_signal(values, path) -> None:
    lines = ["index,value"]
    for i, v in enumerate(np.asarray(values, dtype=np.float64)):
        lines.append(f"{i},{format_float(v)}")
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# markets


def save_market(market: ExchangeMarket, path) -> None:
    """Labeled rate-matrix layout: header of codes, one labeled row per currency."""
    names = market.currency_names
    lines = ["," + ",".join(names)]
    for i, name in enumerate(names):
        cells = [
            "" if not math.isfinite(market.rate[i, j]) else format_float(market.rate[i, j])
            for j in range(len(names))
        ]
        lines.append(name + "," + ",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def load_market(path) -> ExchangeMarket:
    """Read a rate matrix CSV, with or without the leading label column."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines:
        raise DataError(f"market file {path} is empty")
    header = [c.strip() for c in lines[0].split(",")]
    labeled = header[0] == ""
    names = header[1:] if labeled else header
    n = len(names)
    if len(lines) != n + 1:
        raise DataError(f"market file {path} needs {n} data rows, found {len(lines) - 1}")
    rate = np.full((n, n), np.nan)
    for i, line in enumerate(lines[1:]):
        cells = [c.strip() for c in line.split(",")]
        if labeled:
            if cells[0] != names[i]:
                raise DataError(
                    f"market row label {cells[0]!r} does not match header {names[i]!r}"
                )
            cells = cells[1:]
        if len(cells) != n:
            raise DataError(f"market row {i} has {len(cells)} cells, expected {n}")
        for j, cell in enumerate(cells):
            if cell:
                rate[i, j] = float(cell)
    return ExchangeMarket(tuple(names), rate)


# ---------------------------------------------------------------------------
# filters and specs


def save_filter(filt: FilterCoefficients | ChebyshevFilter, path) -> None:
    if isinstance(filt, ChebyshevFilter):
        dump_json(
            {
                "type": "chebyshev",
                "g0": filt.g0,
                "c_lower": list(filt.c_lower),
                "c_upper": list(filt.c_upper),
                "omega_lower": filt.omega_lower,
                "omega_upper": filt.omega_upper,
            },
            path,
        )
    else:
        dump_json(
            {"h0": filt.h0, "alpha": list(filt.alpha), "beta": list(filt.beta)},
            path,
        )


def load_filter(path) -> FilterCoefficients | ChebyshevFilter:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise DataError(f"filter file {path} must hold a JSON object")
    if data.get("type") == "chebyshev" or "c_lower" in data:
        try:
            return ChebyshevFilter(
                c_lower=tuple(data.get("c_lower", ())),
                c_upper=tuple(data.get("c_upper", ())),
                omega_lower=float(data.get("omega_lower", 0.0)),
                omega_upper=float(data.get("omega_upper", 0.0)),
                g0=float(data["g0"]),
            )
        except KeyError as exc:
            raise DataError(f"chebyshev filter file {path} is missing {exc}") from exc
    try:
        return FilterCoefficients(
            h0=float(data["h0"]),
            alpha=tuple(data.get("alpha", ())),
            beta=tuple(data.get("beta", ())),
        )
    except KeyError as exc:
        raise DataError(f"filter file {path} is missing {exc}") from exc


def _curve_from_json(obj, label: str) -> ResponseCurve | None:
    if obj is None:
        return None
    if not isinstance(obj, dict) or "family" not in obj:
        raise DataError(f"{label} curve needs a 'family' field")
    family = obj["family"]
    lam_min = float(obj.get("min", 0.0))
    try:
        if family == "constant":
            return response_constant(obj["value"], obj["max"], lam_min)
        if family == "ideal-step":
            return response_step(obj["cutoff"], obj["low"], obj["high"], obj["max"], lam_min)
        if family == "logistic":
            return response_logistic(obj["k"], obj["lambda0"], obj["max"], lam_min)
        if family == "inverse-shift":
            return response_inverse_shift(obj["gamma"], obj["max"], lam_min)
        if family == "table":
            return response_table([(p[0], p[1]) for p in obj["points"]])
    except KeyError as exc:
        raise DataError(f"{label} {family} curve is missing parameter {exc}") from exc
    raise DataError(f"unknown response family {family!r}")


def load_response_spec(path) -> ResponseSpec:
    data = _read_json(path)
    if not isinstance(data, dict) or "g0" not in data:
        raise DataError(f"response spec {path} needs a 'g0' field")
    return ResponseSpec(
        g0=float(data["g0"]),
        gradient=_curve_from_json(data.get("gradient"), "gradient"),
        curl=_curve_from_json(data.get("curl"), "curl"),
    )


# ---------------------------------------------------------------------------
# spectra and tabular outputs


def save_spectrum(spectrum: HodgeSpectrum, path) -> None:
    dump_json(
        {
            "n_harmonic": spectrum.n_harmonic,
            "n_gradient": spectrum.n_gradient,
            "n_curl": spectrum.n_curl,
            "zero_tol": spectrum.zero_tol,
            "lambda_gradient": list(spectrum.lambda_gradient),
            "lambda_curl": list(spectrum.lambda_curl),
        },
        path,
    )


def save_response_csv(rows: Iterable[tuple[float, str, float]], path) -> None:
    """Rows of (frequency, block letter H/G/C, response value)."""
    lines = ["lambda,type,response"]
    for lam, kind, value in rows:
        lines.append(f"{format_float(lam)},{kind},{format_float(value)}")
    Path(path).write_text("\n".join(lines) + "\n")


def save_pagerank_csv(rows: Iterable[Sequence], path) -> None:
    """Batch ranking output; one row per edge with absolute and relative norms."""
    lines = ["edge_index,u,v,norm_total,norm_H,norm_G,norm_C,rel_H,rel_G,rel_C"]
    for edge_index, u, v, *norms in rows:
        cells = [str(edge_index), str(u), str(v)] + [format_float(x) for x in norms]
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")
