"""Reading and writing polynomials and matrices.

Text format::

    degree 2
    2 0 1
    0 2 1
    0 0 -5 0

one ``i j re [im]`` line per nonzero coefficient of ``x**i y**j``; blank
lines and ``#`` comments are ignored.  JSON format::

    {"degree": 2, "coeffs": [[2, 0, 1.0, 0.0], [0, 2, 1.0, 0.0], ...]}

Complex numbers in JSON output are ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .polycore import AffinePoly


def _term(i, j, re, im, degree, where):
    if i < 0 or j < 0 or i + j > degree:
        raise ParseError(f"{where}: exponent pair ({i}, {j}) outside degree {degree}")
    return i, j, complex(re, im)


def _assemble(degree, terms):
    if degree < 0:
        raise ParseError(f"negative degree {degree}")
    c = np.zeros((degree + 1, degree + 1), dtype=complex)
    for i, j, v in terms:
        c[i, j] += v
    return AffinePoly(c)


def parse_text(text):
    """Polynomial from the whitespace text format."""
    degree = None
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        where = f"line {lineno}"
        if degree is None:
            if len(parts) != 2 or parts[0].lower() != "degree":
                raise ParseError(f"{where}: expected 'degree n', got {raw!r}")
            try:
                degree = int(parts[1])
            except ValueError:
                raise ParseError(f"{where}: degree must be an integer, got {parts[1]!r}") from None
            continue
        if len(parts) not in (3, 4):
            raise ParseError(f"{where}: expected 'i j re [im]', got {raw!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
            re = float(parts[2])
            im = float(parts[3]) if len(parts) == 4 else 0.0
        except ValueError:
            raise ParseError(f"{where}: malformed number in {raw!r}") from None
        terms.append(_term(i, j, re, im, degree, where))
    if degree is None:
        raise ParseError("missing 'degree n' header")
    return _assemble(degree, terms)


def parse_json(text):
    """Polynomial from the JSON format."""
    try:
        obj = json.loads(text)
        degree = int(obj["degree"])
        rows = obj["coeffs"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"invalid polynomial JSON: {exc}") from None
    terms = []
    for k, row in enumerate(rows):
        if not isinstance(row, (list, tuple)) or len(row) not in (3, 4):
            raise ParseError(f"coeffs[{k}]: expected [i, j, re, im]")
        try:
            i, j, re = int(row[0]), int(row[1]), float(row[2])
            im = float(row[3]) if len(row) == 4 else 0.0
        except (TypeError, ValueError):
            raise ParseError(f"coeffs[{k}]: malformed entry {row!r}") from None
        terms.append(_term(i, j, re, im, degree, f"coeffs[{k}]"))
    return _assemble(degree, terms)


def parse_poly(text):
    """Polynomial from either format (JSON when the text starts with ``{``)."""
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_text(text)


def read_poly(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_poly(text)


def _nonzero_terms(poly):
    c = poly.coeffs
    return [(i, j, c[i, j]) for i in range(poly.degree + 1) for j in range(poly.degree + 1 - i) if c[i, j] != 0]


def format_text(poly):
    lines = [f"degree {poly.degree}"]
    for i, j, v in _nonzero_terms(poly):
        lines.append(f"{i} {j} {float(v.real)!r} {float(v.imag)!r}")
    return "\n".join(lines) + "\n"


def poly_to_json(poly):
    return {"degree": poly.degree, "coeffs": [[i, j, float(v.real), float(v.imag)] for i, j, v in _nonzero_terms(poly)]}


def format_json(poly):
    return json.dumps(poly_to_json(poly))


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(M):
    """Nested lists with ``[re, im]`` entries."""
    M = np.asarray(M, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in M]


def matrix_from_json(rows):
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("matrix entries must be [re, im] pairs") from None
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ParseError(f"matrix entries must be [re, im] pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]
