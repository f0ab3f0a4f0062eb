"""JSON / CSV file formats and atomic, byte-deterministic writes.

Polynomial files look like::

    {"basis": "monomial", "coefficients": [[re, im], ...]}

with coefficients in ascending order. For ``"basis": "chebyshev"`` every
imaginary part must be zero. Floats are written with Python's shortest
round-trip ``repr``.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .polycore import ComplexPoly, RealChebPoly


class FormatError(ValueError):
    pass


def _pair(c: complex) -> list[float]:
    # +0.0 avoids "-0.0" from sign-only differences in roundoff
    return [float(c.real) + 0.0, float(c.imag) + 0.0]


def poly_to_json(p: ComplexPoly | RealChebPoly) -> dict:
    if isinstance(p, RealChebPoly):
        return {"basis": "chebyshev", "coefficients": [[float(c) + 0.0, 0.0] for c in p.cheb_coeffs]}
    return {"basis": "monomial", "coefficients": [_pair(c) for c in p.coeffs]}


def poly_from_json(obj) -> ComplexPoly | RealChebPoly:
    if not isinstance(obj, dict):
        raise FormatError("polynomial JSON must be an object")
    basis = obj.get("basis")
    coeffs = obj.get("coefficients")
    if basis not in ("monomial", "chebyshev"):
        raise FormatError(f"unknown basis {basis!r}")
    if not isinstance(coeffs, list) or not coeffs:
        raise FormatError("'coefficients' must be a non-empty list of [re, im] pairs")
    try:
        arr = np.array(coeffs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad coefficient entry: {exc}") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FormatError("each coefficient must be an [re, im] pair")
    if not np.all(np.isfinite(arr)):
        raise FormatError("coefficients must be finite")
    if basis == "chebyshev":
        if np.any(arr[:, 1] != 0):
            raise FormatError("Chebyshev coefficients must have zero imaginary parts")
        return RealChebPoly(arr[:, 0])
    return ComplexPoly(arr[:, 0] + 1j * arr[:, 1])


def read_poly(path) -> ComplexPoly | RealChebPoly:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
    return poly_from_json(obj)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def write_atomic(path, text: str) -> str:
    """Write ``text`` via a temp file + rename; return its SHA-256 hex digest."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return hashlib.sha256(text.encode()).hexdigest()


def write_json(path, obj) -> str:
    return write_atomic(path, dumps(obj))


def csv_text(header: str, *columns) -> str:
    lines = [header]
    for row in zip(*columns):
        lines.append(",".join(repr(float(v) + 0.0) for v in row))
    return "\n".join(lines) + "\n"
