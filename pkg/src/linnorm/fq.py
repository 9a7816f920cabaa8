"""Exact linear algebra over prime fields F_q and row-space analytics.

Matrices are numpy int64 arrays with entries in [0, q). Products of two
entries stay below 2**32 because q is capped at 2**16, so plain integer
arithmetic followed by ``% q`` is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from linnorm.errors import BudgetExceeded, DimensionMismatch, ParseError

MAX_Q = 2**16
DEFAULT_ROWSPACE_BUDGET = 10**7


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def check_modulus(q: int) -> int:
    q = int(q)
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime; only prime fields are supported")
    if q > MAX_Q:
        raise ValueError(f"q={q} exceeds the supported field size 2**16")
    return q


def inverse(a: int, q: int) -> int:
    a = int(a) % q
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in F_q")
    return pow(a, q - 2, q)


@dataclass(frozen=True)
class FqScalar:
    """An element of the prime field F_q."""

    value: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "q", check_modulus(self.q))
        object.__setattr__(self, "value", int(self.value) % self.q)

    def _coerce(self, other) -> int:
        if isinstance(other, FqScalar):
            if other.q != self.q:
                raise DimensionMismatch(f"moduli differ: {self.q} vs {other.q}")
            return other.value
        return int(other)

    def __add__(self, other):
        return FqScalar(self.value + self._coerce(other), self.q)

    __radd__ = __add__

    def __sub__(self, other):
        return FqScalar(self.value - self._coerce(other), self.q)

    def __rsub__(self, other):
        return FqScalar(self._coerce(other) - self.value, self.q)

    def __mul__(self, other):
        return FqScalar(self.value * self._coerce(other), self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return FqScalar(-self.value, self.q)

    def inverse(self) -> FqScalar:
        return FqScalar(inverse(self.value, self.q), self.q)

    def __truediv__(self, other):
        return self * FqScalar(self._coerce(other), self.q).inverse()

    def __int__(self):
        return self.value


def _as_array(entries, q: int, cols: int | None = None) -> np.ndarray:
    arr = np.asarray(entries, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, cols or 0)
    if arr.ndim != 2:
        raise DimensionMismatch("matrix entries must be two-dimensional")
    if cols is not None and arr.shape[1] != cols:
        raise DimensionMismatch(f"expected {cols} columns, got {arr.shape[1]}")
    return np.mod(arr, q)


def rref_array(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_q; returns (nonzero rows, pivot columns)."""
    a = np.mod(np.array(a, dtype=np.int64), q)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * inverse(a[r, c], q)) % q
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % q
        pivots.append(c)
        r += 1
    return a[:r], pivots


class FqMatrix:
    """An immutable m x k matrix over F_q stored row-major."""

    __slots__ = ("q", "_a")

    def __init__(self, entries, q: int, cols: int | None = None):
        self.q = check_modulus(q)
        a = _as_array(entries, self.q, cols)
        a.setflags(write=False)
        self._a = a

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def __getitem__(self, idx):
        return self._a[idx]

    def __eq__(self, other):
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return self.q == other.q and self.shape == other.shape and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((self.q, self.shape, self._a.tobytes()))

    def __repr__(self):
        return f"FqMatrix(q={self.q}, {self.tolist()})"

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def transpose(self) -> FqMatrix:
        return FqMatrix(self._a.T, self.q, cols=self.rows)

    @property
    def T(self) -> FqMatrix:
        return self.transpose()

    def __matmul__(self, other: FqMatrix) -> FqMatrix:
        if self.q != other.q or self.cols != other.rows:
            raise DimensionMismatch("incompatible matrices")
        return FqMatrix((self._a @ other._a) % self.q, self.q, cols=other.cols)

    def rref(self) -> FqMatrix:
        return rref(self)

    def rank(self) -> int:
        return len(rref_array(self._a, self.q)[1])

    def is_zero(self) -> bool:
        return not bool(np.any(self._a))


def rref(a: FqMatrix) -> FqMatrix:
    """Reduced row echelon form; zero rows are dropped, so the result has rank-many rows."""
    r, _ = rref_array(a.array, a.q)
    return FqMatrix(r, a.q, cols=a.cols)


def left_kernel_array(a: np.ndarray, q: int) -> np.ndarray:
    """Rows spanning {c : c @ a = 0}, in reduced echelon form."""
    return kernel_rows(np.asarray(a).T, q)


def kernel_rows(a: np.ndarray, q: int) -> np.ndarray:
    """Basis of {x : a @ x = 0} as rows, in reduced echelon form."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    r, pivots = rref_array(a, q) if a.shape[0] else (np.zeros((0, cols), np.int64), [])
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for j, f in enumerate(free):
        basis[j, f] = 1
        for i, p in enumerate(pivots):
            basis[j, p] = (-r[i, f]) % q
    if basis.shape[0]:
        basis, _ = rref_array(basis, q)
    return basis


class LinearSystem:
    """An m x k system over F_q with linearly independent rows.

    ``rows`` may be any nested sequence of integers; entries are reduced mod q.
    A system with zero rows is allowed (all variables free) and must be built
    with :meth:`empty` or by passing ``k``.
    """

    def __init__(self, rows, q: int | None = None, k: int | None = None):
        if isinstance(rows, FqMatrix):
            matrix = rows
        else:
            if q is None:
                raise ValueError("q is required unless rows is an FqMatrix")
            matrix = FqMatrix(rows, q, cols=k)
        if matrix.rank() != matrix.rows:
            raise ParseError("rows not independent")
        if matrix.rows > matrix.cols:
            raise ParseError("more equations than variables")
        self.matrix = matrix

    @classmethod
    def empty(cls, k: int, q: int) -> LinearSystem:
        return cls(np.zeros((0, k), dtype=np.int64), q, k=k)

    @classmethod
    def from_spanning(cls, rows, q: int, k: int | None = None) -> LinearSystem:
        """Build a system from a possibly dependent spanning set, via rref."""
        m = FqMatrix(rows, q, cols=k)
        return cls(rref(m))

    @property
    def q(self) -> int:
        return self.matrix.q

    @property
    def m(self) -> int:
        return self.matrix.rows

    @property
    def k(self) -> int:
        return self.matrix.cols

    @property
    def array(self) -> np.ndarray:
        return self.matrix.array

    @property
    def rank(self) -> int:
        return self.m

    @cached_property
    def kernel(self) -> FqMatrix:
        """k x (k - m) matrix K with L K = 0, columns in reduced column echelon form."""
        rows = kernel_rows(self.array, self.q) if self.m else np.eye(self.k, dtype=np.int64)
        return FqMatrix(rows.T, self.q, cols=rows.shape[0])

    def kernel_basis(self) -> FqMatrix:
        return self.kernel

    def rref(self) -> LinearSystem:
        return LinearSystem(rref(self.matrix))

    def permute_columns(self, perm) -> LinearSystem:
        """Return the system whose j-th column is column ``perm[j]`` of this one."""
        return LinearSystem(self.array[:, list(perm)], self.q)

    def row_sums(self) -> np.ndarray:
        return self.array.sum(axis=1) % self.q

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other):
        if not isinstance(other, LinearSystem):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"LinearSystem(q={self.q}, m={self.m}, k={self.k}, rows={self.matrix.tolist()})"

    def signed_rows(self) -> list[list[int]]:
        """Rows with entries in (-q/2, q/2], convenient for display."""
        half = self.q // 2
        return [[v - self.q if v > half else v for v in row] for row in self.matrix.tolist()]


def kernel_basis(system: LinearSystem) -> FqMatrix:
    return system.kernel


def _combinations(q: int, m: int) -> np.ndarray:
    """All vectors of F_q^m, radix-q little-endian order (first coordinate fastest)."""
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(q**m, dtype=np.int64)
    return np.stack([(idx // q**i) % q for i in range(m)], axis=1)


def row_space(system: LinearSystem, budget: int = DEFAULT_ROWSPACE_BUDGET) -> np.ndarray:
    """All q^m row-space vectors, including zero (row 0)."""
    q, m = system.q, system.m
    if q**m > budget:
        raise BudgetExceeded(f"row space has {q}^{m} vectors, budget {budget}")
    return (_combinations(q, m) @ system.array) % q


def support_size(v) -> int:
    return int(np.count_nonzero(v))


def normalize(v: np.ndarray, q: int) -> np.ndarray:
    """Scale so the first nonzero coordinate is 1."""
    v = np.asarray(v, dtype=np.int64) % q
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        return v
    return (v * inverse(v[nz[0]], q)) % q


def is_schatten_vector(v, q: int) -> tuple[bool, int | None]:
    """Return ``(True, a)`` when every entry lies in {0, a, -a} with #a == #(-a).

    The zero vector is reported as ``(True, 0)``: the condition holds for
    a = 0, which flags it as degenerate.
    """
    v = np.asarray(v, dtype=np.int64) % q
    nz = v[v != 0]
    if nz.size == 0:
        return True, 0
    for a in range(1, q):
        if not np.all((nz == a) | (nz == (q - a) % q)):
            continue
        if np.count_nonzero(nz == a) == np.count_nonzero(nz == (q - a) % q):
            return True, a
    return False, None


class RowSpaceProfile(NamedTuple):
    girth: int
    mu: tuple[tuple[int, ...], ...]
    schatten_count: int
    schatten: tuple[tuple[int, ...], ...] = ()


def row_space_profile(system: LinearSystem, budget: int = DEFAULT_ROWSPACE_BUDGET) -> RowSpaceProfile:
    """Girth, normalized minimum-support vectors and Schatten count by enumeration.

    For a rank-0 system there is no nonzero codeword; girth is reported as 0.
    """
    vecs = row_space(system, budget)
    q = system.q
    weights = np.count_nonzero(vecs, axis=1)
    nonzero = weights > 0
    if not np.any(nonzero):
        return RowSpaceProfile(0, (), 0, ())
    girth = int(weights[nonzero].min())
    minimal = vecs[weights == girth]
    first = minimal[np.arange(len(minimal)), np.argmax(minimal != 0, axis=1)]
    normalized = minimal[first == 1]
    mu = tuple(sorted(tuple(int(x) for x in row) for row in normalized))
    schatten = tuple(v for v in mu if is_schatten_vector(v, q)[0])
    return RowSpaceProfile(girth, mu, len(schatten), schatten)


def girth(system: LinearSystem, budget: int = DEFAULT_ROWSPACE_BUDGET) -> int:
    return row_space_profile(system, budget).girth


def in_row_space(v, system: LinearSystem) -> bool:
    stacked = np.vstack([system.array, np.asarray(v, dtype=np.int64).reshape(1, -1) % system.q])
    return len(rref_array(stacked, system.q)[1]) == system.m


def random_system(rng: np.random.Generator, q: int, m: int, k: int) -> LinearSystem:
    """Uniformly random m x k system with independent rows (rejection sampling)."""
    for _ in range(10_000):
        a = rng.integers(0, q, size=(m, k))
        if len(rref_array(a, q)[1]) == m:
            return LinearSystem(a, q, k=k)
    raise RuntimeError("could not sample an independent system")


__all__ = [
    "FqScalar",
    "FqMatrix",
    "LinearSystem",
    "RowSpaceProfile",
    "rref",
    "rref_array",
    "kernel_basis",
    "kernel_rows",
    "left_kernel_array",
    "row_space",
    "row_space_profile",
    "girth",
    "is_schatten_vector",
    "normalize",
    "in_row_space",
    "inverse",
    "is_prime",
    "random_system",
]
