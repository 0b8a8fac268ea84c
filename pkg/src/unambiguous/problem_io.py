"""JSON problem files.

Layout::

    {"dim": 4, "eta1": 0.5,
     "rho1": [[[re, im], ...], ...], "rho2": [...],
     "labels": {"rho1": "...", "rho2": "..."}}

Complex entries are ``[re, im]`` pairs; plain numbers are accepted as real.
Matrices are row-major lists of rows.  ``labels`` is optional.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import ValidationError
from .hermitian import DiscriminationProblem

__all__ = [
    "ProblemFileError",
    "encode_matrix",
    "decode_matrix",
    "decode_vector",
    "problem_to_json",
    "problem_from_json",
    "load_problem",
    "save_problem",
    "load_vector",
    "povm_to_json",
]


class ProblemFileError(ValidationError):
    """A problem file parsed as JSON but a field is missing or malformed."""


def _encode_entry(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _decode_entry(x: Any, where: str) -> complex:
    if isinstance(x, bool):
        raise ProblemFileError(f"{where}: expected number or [re, im], got {x!r}")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        return complex(x[0], x[1])
    raise ProblemFileError(f"{where}: expected number or [re, im], got {x!r}")


def encode_matrix(m: np.ndarray) -> list[list[list[float]]]:
    return [[_encode_entry(z) for z in row] for row in np.asarray(m, complex)]


def decode_matrix(rows: Any, field: str, dim: int | None = None) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ProblemFileError(f"field {field!r}: expected a non-empty list of rows")
    n = len(rows) if dim is None else dim
    if len(rows) != n:
        raise ProblemFileError(f"field {field!r}: {len(rows)} rows, expected {n}")
    out = np.empty((n, n), complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ProblemFileError(f"field {field!r} row {i}: expected {n} entries")
        for j, x in enumerate(row):
            out[i, j] = _decode_entry(x, f"field {field!r} row {i} column {j}")
    return out


def decode_vector(entries: Any, field: str = "vector") -> np.ndarray:
    if not isinstance(entries, list) or not entries:
        raise ProblemFileError(f"field {field!r}: expected a non-empty list")
    return np.array([_decode_entry(x, f"field {field!r} entry {i}") for i, x in enumerate(entries)])


def problem_to_json(problem: DiscriminationProblem, labels: dict[str, str] | None = None) -> dict:
    doc: dict[str, Any] = {
        "dim": problem.dim,
        "eta1": problem.eta1,
        "rho1": encode_matrix(problem.rho1.matrix),
        "rho2": encode_matrix(problem.rho2.matrix),
    }
    if labels:
        doc["labels"] = dict(labels)
    return doc


def problem_from_json(doc: Any) -> tuple[DiscriminationProblem, dict[str, str]]:
    if not isinstance(doc, dict):
        raise ProblemFileError("top level must be an object")
    for key in ("rho1", "rho2", "eta1"):
        if key not in doc:
            raise ProblemFileError(f"missing field {key!r}")
    dim = doc.get("dim")
    if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 1):
        raise ProblemFileError(f"field 'dim': expected a positive integer, got {dim!r}")
    eta1 = doc["eta1"]
    if not isinstance(eta1, (int, float)) or isinstance(eta1, bool):
        raise ProblemFileError(f"field 'eta1': expected a number, got {eta1!r}")
    rho1 = decode_matrix(doc["rho1"], "rho1", dim)
    rho2 = decode_matrix(doc["rho2"], "rho2", dim if dim is not None else rho1.shape[0])
    labels = doc.get("labels") or {}
    if not isinstance(labels, dict):
        raise ProblemFileError("field 'labels': expected an object")
    return DiscriminationProblem.from_matrices(rho1, rho2, float(eta1)), {
        str(k): str(v) for k, v in labels.items()
    }


def _read_json(path: str | Path) -> Any:
    # OSError propagates (I/O); malformed JSON is reported with its line number
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_problem(path: str | Path) -> tuple[DiscriminationProblem, dict[str, str]]:
    return problem_from_json(_read_json(path))


def save_problem(
    problem: DiscriminationProblem, path: str | Path, labels: dict[str, str] | None = None
) -> None:
    Path(path).write_text(json.dumps(problem_to_json(problem, labels), indent=1) + "\n")


def load_vector(path: str | Path) -> np.ndarray:
    """A state vector file: either a bare list of entries or ``{"psi": [...]}``."""
    doc = _read_json(path)
    if isinstance(doc, dict):
        if "psi" not in doc:
            raise ProblemFileError(f"{path}: missing field 'psi'")
        doc = doc["psi"]
    return decode_vector(doc, "psi")


def povm_to_json(povm) -> dict:
    return {
        "provenance": povm.provenance.value,
        "parameters": {k: float(v) for k, v in povm.parameters.items()},
        "Pi0": encode_matrix(povm.Pi0),
        "Pi1": encode_matrix(povm.Pi1),
        "Pi2": encode_matrix(povm.Pi2),
    }
