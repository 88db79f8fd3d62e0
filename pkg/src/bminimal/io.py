"""JSON documents and CSV point clouds for the command-line surface.

Matrices travel as {"n": n, "entries": [[[re, im], ...], ...]}; frames as
{"n": n, "columns": [[[re, im], ...], ...]} with one list per spanning
vector; algebras as a tagged document resolving to a basis.  Floats are
emitted with repr, the shortest representation that round-trips exactly.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .algebra import (
    SubalgebraBasis,
    build_block,
    build_diagonal,
    build_pauli_diagonal,
    orthonormalize,
)
from .hermitian import as_hermitian
from .minimality import Certificate, MinimalityReport
from .moment import Subspace


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_to_doc(m) -> dict[str, Any]:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return {
        "n": arr.shape[0],
        "entries": [[_pair(z) for z in row] for row in arr],
    }


def matrix_from_doc(doc: dict[str, Any]) -> np.ndarray:
    if not isinstance(doc, dict) or "n" not in doc or "entries" not in doc:
        raise ValueError("matrix document needs keys 'n' and 'entries'")
    n = int(doc["n"])
    entries = doc["entries"]
    if len(entries) != n or any(len(row) != n for row in entries):
        raise ValueError(f"entries do not form an {n} x {n} array")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(entries):
        for j, pair in enumerate(row):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ValueError("each entry must be a [re, im] pair")
            out[i, j] = complex(float(pair[0]), float(pair[1]))
    return out


def hermitian_from_doc(doc: dict[str, Any]) -> np.ndarray:
    return as_hermitian(matrix_from_doc(doc))


def frame_to_doc(s: Subspace) -> dict[str, Any]:
    return {
        "n": s.n,
        "columns": [[_pair(z) for z in s.frame[:, j]] for j in range(s.r)],
    }


def frame_from_doc(doc: dict[str, Any]) -> Subspace:
    """Read spanning columns and orthonormalize them into a subspace."""
    if not isinstance(doc, dict) or "n" not in doc or "columns" not in doc:
        raise ValueError("frame document needs keys 'n' and 'columns'")
    n = int(doc["n"])
    cols = doc["columns"]
    if not cols:
        raise ValueError("frame document has no columns")
    mat = np.empty((n, len(cols)), dtype=complex)
    for j, col in enumerate(cols):
        if len(col) != n:
            raise ValueError(f"column {j} has length {len(col)}, expected {n}")
        for i, pair in enumerate(col):
            mat[i, j] = complex(float(pair[0]), float(pair[1]))
    return Subspace.from_span(mat)


def algebra_to_doc(basis: SubalgebraBasis) -> dict[str, Any]:
    return {
        "kind": "custom",
        "n": basis.n,
        "elements": [matrix_to_doc(e) for e in basis.elements],
    }


def algebra_from_doc(doc: dict[str, Any], n_hint: int | None = None) -> SubalgebraBasis:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("algebra document needs a 'kind'")
    kind = doc["kind"]
    if kind == "diag":
        n = int(doc.get("n", n_hint or 0))
        if n < 1:
            raise ValueError("diag algebra needs a positive 'n'")
        return build_diagonal(n)
    if kind == "pauli-diag":
        return build_pauli_diagonal(int(doc["q"]))
    if kind == "block":
        pattern = [(int(size), str(kind_)) for size, kind_ in doc["pattern"]]
        return build_block(pattern, n=int(doc["n"]) if "n" in doc else None)
    if kind == "custom":
        elems = [hermitian_from_doc(e) for e in doc["elements"]]
        return orthonormalize(elems)
    raise ValueError(f"unknown algebra kind {kind!r}")


def certificate_to_doc(cert: Certificate) -> dict[str, Any]:
    return {
        "x": matrix_to_doc(cert.x),
        "residual_eq": float(cert.residual_eq),
        "residual_perp": float(cert.residual_perp),
    }


def report_to_doc(
    report: MinimalityReport, timings: dict[str, float] | None = None
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "verdict": report.verdict,
        "reason": report.reason,
        "norm": float(report.norm),
        "distance": None if report.distance is None else float(report.distance),
        "gap": None if report.gap is None else float(report.gap),
        "certificate": None
        if report.certificate is None
        else certificate_to_doc(report.certificate),
    }
    if timings is not None:
        doc["timings"] = timings
    return doc


def dumps(doc: dict[str, Any]) -> str:
    """Serialize with stable key order and lossless float repr."""
    return json.dumps(doc, indent=2, sort_keys=True)


def points_to_csv(points: np.ndarray) -> str:
    """CSV with header B_1..B_t and one sampled moment point per row."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("expected a (count, t) array of points")
    header = ",".join(f"B_{k + 1}" for k in range(pts.shape[1]))
    lines = [header]
    for row in pts:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
