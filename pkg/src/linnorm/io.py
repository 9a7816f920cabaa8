"""Text formats for systems, functions and hypergraphs.

Matrix files::

    # comment lines start with '#'
    q m k
    a11 ... a1k
    ...

Function files: ``q n`` then q^n lines of ``re im`` (or a single real),
points in radix-q little-endian order. Hypergraph files: ``d r`` then one
edge per line as r vertex indices, 1-based.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from linnorm.errors import ParseError
from linnorm.fq import FqMatrix, LinearSystem, is_prime


def _lines(text: str):
    """Yield (line number, tokens) for non-blank, non-comment lines."""
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield no, raw, stripped.split()


def _ints(no: int, raw: str, tokens: list[str]) -> list[int]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", no, raw.find(tok) + 1) from None
    return out


def parse_system(text: str) -> LinearSystem:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty system file")
    no, raw, head = lines[0]
    header = _ints(no, raw, head)
    if len(header) != 3:
        raise ParseError("header must be 'q m k'", no)
    q, m, k = header
    if not is_prime(q):
        raise ParseError(f"q={q} is not prime (extension fields are not supported)", no, 1)
    if m < 0 or k < 1 or m > k:
        raise ParseError(f"invalid shape m={m}, k={k}", no)
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"expected {m} matrix rows, found {len(body)}", body[-1][0] if body else no)
    rows = []
    for no, raw, tokens in body:
        vals = _ints(no, raw, tokens)
        if len(vals) != k:
            raise ParseError(f"expected {k} entries, found {len(vals)}", no)
        rows.append(vals)
    matrix = FqMatrix(np.array(rows, dtype=np.int64).reshape(m, k), q, cols=k)
    if matrix.rank() != m:
        raise ParseError("rows not independent")
    return LinearSystem(matrix)


def format_system(system: LinearSystem) -> str:
    out = [f"{system.q} {system.m} {system.k}"]
    out.extend(" ".join(str(v) for v in row) for row in system.matrix.tolist())
    return "\n".join(out) + "\n"


def load_system(path) -> LinearSystem:
    return parse_system(Path(path).read_text())


def save_system(system: LinearSystem, path) -> None:
    Path(path).write_text(format_system(system))


def parse_function(text: str):
    from linnorm.harmonic import FunctionOnG

    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty function file")
    no, raw, head = lines[0]
    header = _ints(no, raw, head)
    if len(header) != 2:
        raise ParseError("header must be 'q n'", no)
    q, n = header
    if not is_prime(q):
        raise ParseError(f"q={q} is not prime", no, 1)
    body = lines[1:]
    if len(body) != q**n:
        raise ParseError(f"expected {q ** n} values, found {len(body)}", body[-1][0] if body else no)
    values = np.empty(q**n, dtype=np.complex128)
    for i, (no, raw, tokens) in enumerate(body):
        if len(tokens) not in (1, 2):
            raise ParseError("expected 're' or 're im'", no)
        try:
            parts = [float(t) for t in tokens]
        except ValueError:
            raise ParseError("malformed number", no) from None
        values[i] = complex(parts[0], parts[1] if len(parts) == 2 else 0.0)
    return FunctionOnG(values, q, n)


def format_function(f) -> str:
    out = [f"{f.q} {f.n}"]
    real = not np.any(f.values.imag)
    for v in f.values:
        out.append(repr(float(v.real)) if real else f"{float(v.real)!r} {float(v.imag)!r}")
    return "\n".join(out) + "\n"


def load_function(path):
    return parse_function(Path(path).read_text())


def save_function(f, path) -> None:
    Path(path).write_text(format_function(f))


def parse_hypergraph(text: str):
    from linnorm.cayley import Hypergraph

    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty hypergraph file")
    no, raw, head = lines[0]
    header = _ints(no, raw, head)
    if len(header) != 2:
        raise ParseError("header must be 'd r'", no)
    d, r = header
    edges = []
    for no, raw, tokens in lines[1:]:
        vals = _ints(no, raw, tokens)
        if len(vals) != r:
            raise ParseError(f"edge must list {r} vertices", no)
        for v, tok in zip(vals, tokens):
            if not 1 <= v <= d:
                raise ParseError(f"vertex {v} out of range 1..{d}", no, raw.find(tok) + 1)
        edges.append(tuple(v - 1 for v in vals))
    if not edges:
        raise ParseError("edge list non-empty required")
    try:
        return Hypergraph(d, r, tuple(edges))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_hypergraph(h) -> str:
    out = [f"{h.d} {h.r}"]
    out.extend(" ".join(str(v + 1) for v in e) for e in h.edges)
    return "\n".join(out) + "\n"


def load_hypergraph(path):
    return parse_hypergraph(Path(path).read_text())


def save_hypergraph(h, path) -> None:
    Path(path).write_text(format_hypergraph(h))
