"""Functions on G = F_q^n, their Fourier transforms and density functionals.

A point x = (x_1, ..., x_n) of G is stored as the integer sum x_i q^(i-1)
(radix q, first coordinate least significant). Function tables are dense
complex arrays in that index order.

Characters follow e(y) = exp(2 pi i y / q), with
``f_hat(xi) = E_x f(x) e(-xi.x)`` and ``f(x) = sum_xi f_hat(xi) e(xi.x)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from linnorm.errors import BudgetExceeded, DimensionMismatch
from linnorm.fq import LinearSystem, check_modulus

MAX_TABLE = 2**20
DEFAULT_ENUM_BUDGET = 10**7
_CHUNK = 1 << 16


@lru_cache(maxsize=64)
def group_digits(q: int, n: int) -> np.ndarray:
    """(q^n, n) array whose row x holds the coordinates of point x."""
    idx = np.arange(q**n, dtype=np.int64)
    d = np.stack([(idx // q**i) % q for i in range(n)], axis=1) if n else np.zeros((1, 0), np.int64)
    d.setflags(write=False)
    return d


def _weights(q: int, n: int) -> np.ndarray:
    return q ** np.arange(n, dtype=np.int64)


@dataclass(frozen=True)
class GroupPoint:
    index: int
    q: int
    n: int

    @classmethod
    def from_coords(cls, coords: Sequence[int], q: int) -> GroupPoint:
        coords = [int(c) % q for c in coords]
        return cls(sum(c * q**i for i, c in enumerate(coords)), q, len(coords))

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(int(c) for c in group_digits(self.q, self.n)[self.index])

    def _check(self, other: GroupPoint):
        if (self.q, self.n) != (other.q, other.n):
            raise DimensionMismatch("points live in different groups")

    def __add__(self, other: GroupPoint) -> GroupPoint:
        self._check(other)
        return GroupPoint.from_coords([a + b for a, b in zip(self.coords, other.coords)], self.q)

    def __neg__(self) -> GroupPoint:
        return GroupPoint.from_coords([-a for a in self.coords], self.q)

    def __sub__(self, other: GroupPoint) -> GroupPoint:
        return self + (-other)

    def scale(self, c: int) -> GroupPoint:
        return GroupPoint.from_coords([c * a for a in self.coords], self.q)

    def dot(self, other: GroupPoint) -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self.coords, other.coords)) % self.q


def add_indices(i, j, q: int, n: int):
    d = group_digits(q, n)
    return ((d[i] + d[j]) % q) @ _weights(q, n)


def scale_indices(i, c: int, q: int, n: int):
    d = group_digits(q, n)
    return ((c * d[i]) % q) @ _weights(q, n)


def _check_table(q: int, n: int, limit: int = MAX_TABLE):
    if q**n > limit:
        raise BudgetExceeded(f"table of size {q}^{n} exceeds limit {limit}")


class FunctionOnG:
    """A complex-valued function on F_q^n stored as a dense table."""

    __slots__ = ("q", "n", "values")

    def __init__(self, values, q: int, n: int):
        self.q = check_modulus(q)
        self.n = int(n)
        _check_table(self.q, self.n)
        v = np.array(values, dtype=np.complex128).reshape(-1)
        if v.size != self.q**self.n:
            raise DimensionMismatch(f"expected {self.q ** self.n} values, got {v.size}")
        v.setflags(write=False)
        self.values = v

    # constructors
    @classmethod
    def constant(cls, c, q: int, n: int) -> FunctionOnG:
        return cls(np.full(q**n, c, dtype=np.complex128), q, n)

    @classmethod
    def indicator(cls, points, q: int, n: int) -> FunctionOnG:
        v = np.zeros(q**n)
        v[list(points)] = 1.0
        return cls(v, q, n)

    @classmethod
    def from_callable(cls, func, q: int, n: int) -> FunctionOnG:
        d = group_digits(q, n)
        return cls([func(tuple(int(c) for c in row)) for row in d], q, n)

    @classmethod
    def character(cls, gamma: int, q: int, n: int) -> FunctionOnG:
        """x -> e(gamma . x)."""
        d = group_digits(q, n)
        phase = (d @ d[gamma]) % q
        return cls(np.exp(2j * np.pi * phase / q), q, n)

    @classmethod
    def hyperplane_indicator(cls, q: int, n: int, coord: int | None = None) -> FunctionOnG:
        """Indicator of {x : x_coord = 0}; defaults to the last coordinate."""
        coord = n - 1 if coord is None else coord
        return cls((group_digits(q, n)[:, coord] == 0).astype(float), q, n)

    @classmethod
    def random_real(cls, rng: np.random.Generator, q: int, n: int, nonneg: bool = False) -> FunctionOnG:
        v = rng.random(q**n) if nonneg else rng.standard_normal(q**n)
        return cls(v, q, n)

    @classmethod
    def random_complex(cls, rng: np.random.Generator, q: int, n: int) -> FunctionOnG:
        return cls(rng.standard_normal(q**n) + 1j * rng.standard_normal(q**n), q, n)

    # basic algebra
    @property
    def size(self) -> int:
        return self.values.size

    def _same(self, other: FunctionOnG):
        if (self.q, self.n) != (other.q, other.n):
            raise DimensionMismatch("functions live on different groups")

    def __add__(self, other):
        if isinstance(other, FunctionOnG):
            self._same(other)
            return FunctionOnG(self.values + other.values, self.q, self.n)
        return FunctionOnG(self.values + other, self.q, self.n)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, FunctionOnG):
            self._same(other)
            return FunctionOnG(self.values - other.values, self.q, self.n)
        return FunctionOnG(self.values - other, self.q, self.n)

    def __mul__(self, other):
        if isinstance(other, FunctionOnG):
            self._same(other)
            return FunctionOnG(self.values * other.values, self.q, self.n)
        return FunctionOnG(self.values * other, self.q, self.n)

    __rmul__ = __mul__

    def __neg__(self):
        return FunctionOnG(-self.values, self.q, self.n)

    def __abs__(self):
        return FunctionOnG(np.abs(self.values), self.q, self.n)

    def conj(self) -> FunctionOnG:
        return FunctionOnG(np.conj(self.values), self.q, self.n)

    def __call__(self, x) -> complex:
        if isinstance(x, GroupPoint):
            x = x.index
        elif not isinstance(x, (int, np.integer)):
            x = GroupPoint.from_coords(x, self.q).index
        return complex(self.values[x])

    def mean(self) -> complex:
        return complex(self.values.mean())

    def shift(self, g: int) -> FunctionOnG:
        """x -> f(x + g)."""
        idx = add_indices(np.arange(self.size), g, self.q, self.n)
        return FunctionOnG(self.values[idx], self.q, self.n)

    def reflect(self) -> FunctionOnG:
        """x -> f(-x)."""
        return FunctionOnG(self.values[scale_indices(np.arange(self.size), -1, self.q, self.n)], self.q, self.n)

    def dilate(self, c: int) -> FunctionOnG:
        """x -> f(c x)."""
        return FunctionOnG(self.values[scale_indices(np.arange(self.size), c, self.q, self.n)], self.q, self.n)

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.values.imag), initial=0.0) <= tol)

    def sup_distance_from_constant(self) -> float:
        return float(np.max(np.abs(self.values - self.values.mean())))

    def __repr__(self):
        return f"FunctionOnG(q={self.q}, n={self.n})"


class SpectrumOnG:
    """Fourier coefficients indexed by xi in the dual group (same encoding as G)."""

    __slots__ = ("q", "n", "coefficients")

    def __init__(self, coefficients, q: int, n: int):
        self.q = check_modulus(q)
        self.n = int(n)
        _check_table(self.q, self.n)
        c = np.array(coefficients, dtype=np.complex128).reshape(-1)
        if c.size != self.q**self.n:
            raise DimensionMismatch(f"expected {self.q ** self.n} coefficients, got {c.size}")
        c.setflags(write=False)
        self.coefficients = c

    @classmethod
    def from_dict(cls, entries: dict, q: int, n: int) -> SpectrumOnG:
        c = np.zeros(q**n, dtype=np.complex128)
        for xi, val in entries.items():
            c[xi] += val
        return cls(c, q, n)

    def __getitem__(self, xi):
        return self.coefficients[xi]

    def is_real_function(self, tol: float = 1e-12) -> bool:
        """True iff f_hat(-xi) = conj(f_hat(xi)) for every xi."""
        neg = scale_indices(np.arange(self.coefficients.size), -1, self.q, self.n)
        return bool(np.max(np.abs(self.coefficients[neg] - np.conj(self.coefficients))) <= tol)


def fourier(f: FunctionOnG) -> SpectrumOnG:
    """n-fold tensor DFT; numpy's FFT along each coordinate axis."""
    # one axis per coordinate; the flat index encodes xi exactly as it encodes x
    shape = (f.q,) * f.n
    table = np.fft.fftn(f.values.reshape(shape)) / f.size if f.n else f.values
    return SpectrumOnG(np.asarray(table).reshape(-1), f.q, f.n)


def inverse_fourier(s: SpectrumOnG) -> FunctionOnG:
    shape = (s.q,) * s.n
    table = np.fft.ifftn(s.coefficients.reshape(shape)) * s.coefficients.size if s.n else s.coefficients
    return FunctionOnG(np.asarray(table).reshape(-1), s.q, s.n)


def fourier_direct(f: FunctionOnG) -> SpectrumOnG:
    """O(q^{2n}) character-sum transform, used as an independent check."""
    d = group_digits(f.q, f.n)
    phase = (d @ d.T) % f.q
    return SpectrumOnG(np.exp(-2j * np.pi * phase / f.q) @ f.values / f.size, f.q, f.n)


# --- solution-space and frequency-space enumeration -----------------------


def _linear_images(coeffs: np.ndarray, q: int, n: int, budget: int):
    """Yield (chunk, k) arrays of indices of x_j = sum_c coeffs[j, c] v_c over v in G^d."""
    k, d = coeffs.shape
    size = q**n
    total = size**d
    if total > budget:
        raise BudgetExceeded(f"enumeration of {q}^({n}*{d}) tuples exceeds budget {budget}")
    digits = group_digits(q, n)
    w = _weights(q, n)
    for start in range(0, total, _CHUNK):
        t = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        acc = np.zeros((t.size, k, n), dtype=np.int64)
        for c in range(d):
            u = (t // size**c) % size
            acc += coeffs[:, c][None, :, None] * digits[u][:, None, :]
        yield (acc % q) @ w


def _prepare(system: LinearSystem, fs) -> list[FunctionOnG]:
    if isinstance(fs, FunctionOnG):
        fs = [fs] * system.k
    fs = list(fs)
    if len(fs) != system.k:
        raise DimensionMismatch(f"need {system.k} functions, got {len(fs)}")
    q, n = fs[0].q, fs[0].n
    if q != system.q:
        raise DimensionMismatch(f"functions over F_{q} but system over F_{system.q}")
    for f in fs:
        if (f.q, f.n) != (q, n):
            raise DimensionMismatch("functions must share (q, n)")
    return fs


def _product_sum(tables: list[np.ndarray], images) -> complex:
    total = 0j
    for idx in images:
        prod = np.ones(idx.shape[0], dtype=np.complex128)
        for j, table in enumerate(tables):
            prod *= table[idx[:, j]]
        total += prod.sum()
    return complex(total)


def t_direct(system: LinearSystem, fs, budget: int = DEFAULT_ENUM_BUDGET) -> complex:
    """Mean of prod f_j(x_j) over Sol(L), enumerated as {K v : v in G^(k-m)}."""
    fs = _prepare(system, fs)
    if system.m == 0:
        return complex(np.prod([f.mean() for f in fs]))
    q, n = fs[0].q, fs[0].n
    kernel = system.kernel.array
    count = (q**n) ** kernel.shape[1]
    total = _product_sum([f.values for f in fs], _linear_images(kernel, q, n, budget))
    return total / count


def t_spectral(system: LinearSystem, spectra: Sequence[SpectrumOnG], budget: int = DEFAULT_ENUM_BUDGET) -> complex:
    """sum over xi in G^m of prod_j s_j(L_j^t xi)."""
    if len(spectra) != system.k:
        raise DimensionMismatch(f"need {system.k} spectra, got {len(spectra)}")
    q, n = spectra[0].q, spectra[0].n
    return _product_sum([s.coefficients for s in spectra], _linear_images(system.array.T, q, n, budget))


def t_fourier(system: LinearSystem, fs, budget: int = DEFAULT_ENUM_BUDGET) -> complex:
    """Spectral-side evaluation of t_L through the inversion formula."""
    fs = _prepare(system, fs)
    cache: dict[int, SpectrumOnG] = {}
    spectra = [cache.setdefault(id(f), fourier(f)) for f in fs]
    return t_spectral(system, spectra, budget)


def density(system: LinearSystem, fs, oracle: str = "auto", budget: int = DEFAULT_ENUM_BUDGET) -> complex:
    """t_L by the requested oracle; ``auto`` picks the smaller enumeration."""
    if oracle == "direct":
        return t_direct(system, fs, budget)
    if oracle == "fourier":
        return t_fourier(system, fs, budget)
    if oracle != "auto":
        raise ValueError(f"unknown oracle {oracle!r}")
    return t_fourier(system, fs, budget) if system.m <= system.k - system.m else t_direct(system, fs, budget)


def norm_L(system: LinearSystem, f: FunctionOnG, oracle: str = "auto") -> float:
    """|t_L(f)|^(1/k)."""
    return abs(density(system, f, oracle)) ** (1.0 / system.k)


def weak_norm_L(system: LinearSystem, f: FunctionOnG, oracle: str = "auto") -> float:
    """t_L(|f|)^(1/k); tiny negative round-off is clipped to zero."""
    t = density(system, abs(f), oracle).real
    return max(t, 0.0) ** (1.0 / system.k)


def u2_norm(f: FunctionOnG) -> float:
    return float(np.sum(np.abs(fourier(f).coefficients) ** 4)) ** 0.25


def tensor(f: FunctionOnG, g: FunctionOnG) -> FunctionOnG:
    """(f ⊗ g)(y, z) = f(y) g(z) on F_q^(n_f + n_g), y in the low coordinates."""
    if f.q != g.q:
        raise DimensionMismatch("tensor factors must share q")
    _check_table(f.q, f.n + g.n)
    return FunctionOnG(np.outer(g.values, f.values).reshape(-1), f.q, f.n + g.n)


def tensor_power(f: FunctionOnG, m: int) -> FunctionOnG:
    out = f
    for _ in range(m - 1):
        out = tensor(out, f)
    return out


def convolve(fs: Sequence[FunctionOnG]) -> FunctionOnG:
    """x -> E_{y_1 + ... + y_k = x} prod f_i(y_i), via products of spectra."""
    fs = list(fs)
    q, n = fs[0].q, fs[0].n
    coeffs = np.ones(q**n, dtype=np.complex128)
    for f in fs:
        if (f.q, f.n) != (q, n):
            raise DimensionMismatch("functions must share (q, n)")
        coeffs = coeffs * fourier(f).coefficients
    return inverse_fourier(SpectrumOnG(coeffs, q, n))


def convolve_direct(fs: Sequence[FunctionOnG]) -> FunctionOnG:
    """Brute-force convolution over all (y_1, ..., y_k); small groups only."""
    fs = list(fs)
    q, n = fs[0].q, fs[0].n
    size = q**n
    if size ** len(fs) > DEFAULT_ENUM_BUDGET:
        raise BudgetExceeded("direct convolution too large")
    out = np.zeros(size, dtype=np.complex128)
    counts = np.zeros(size)
    for ys in itertools.product(range(size), repeat=len(fs)):
        x = 0
        prod = 1.0 + 0j
        for f, y in zip(fs, ys):
            x = int(add_indices(x, y, q, n))
            prod *= f.values[y]
        out[x] += prod
        counts[x] += 1
    return FunctionOnG(out / counts, q, n)


def symmetrised_density(system: LinearSystem, fs, max_k: int = 8) -> complex:
    """sum over permutations pi of t_L(f_pi(1), ..., f_pi(k))."""
    fs = _prepare(system, fs)
    if system.k > max_k:
        raise BudgetExceeded(f"k! terms for k={system.k} exceeds the k <= {max_k} guard")
    spectra = [fourier(f) for f in fs]
    total = 0j
    for perm in itertools.permutations(range(system.k)):
        total += t_spectral(system, [spectra[p] for p in perm])
    return total


def apply_conjugation(fs: Sequence[FunctionOnG], alpha: Sequence[int]) -> list[FunctionOnG]:
    """Keep f_i where alpha_i = 1 and conjugate it where alpha_i = 0."""
    if len(fs) != len(alpha):
        raise DimensionMismatch("conjugation pattern length must equal k")
    return [f if a else f.conj() for f, a in zip(fs, alpha)]


def t_complex(system: LinearSystem, alpha: Sequence[int], fs, budget: int = DEFAULT_ENUM_BUDGET) -> complex:
    """Complex density t_{L,alpha}, evaluated by direct enumeration."""
    fs = _prepare(system, fs)
    alpha = [int(a) for a in alpha]
    if any(a not in (0, 1) for a in alpha):
        raise ValueError("alpha must be 0/1-valued")
    return t_direct(system, apply_conjugation(fs, alpha), budget)


def all_patterns(k: int):
    return itertools.product((0, 1), repeat=k)


def s_L(system: LinearSystem, fs, budget: int = DEFAULT_ENUM_BUDGET) -> float:
    """max over conjugation patterns alpha of |t_{L,alpha}(f_1, ..., f_k)|."""
    fs = _prepare(system, fs)
    spectra = [fourier(f) for f in fs]
    conj_spectra = [fourier(f.conj()) for f in fs]
    best = 0.0
    for alpha in all_patterns(system.k):
        chosen = [s if a else c for s, c, a in zip(spectra, conj_spectra, alpha)]
        best = max(best, abs(t_spectral(system, chosen, budget)))
    return best


def parseval_gap(f: FunctionOnG) -> float:
    lhs = float(np.sum(np.abs(fourier(f).coefficients) ** 2))
    rhs = float(np.mean(np.abs(f.values) ** 2))
    return abs(lhs - rhs) / max(1.0, rhs)


def function_from_spectrum(entries: dict, q: int, n: int) -> FunctionOnG:
    return inverse_fourier(SpectrumOnG.from_dict(entries, q, n))


def closeness(a: complex, b: complex) -> float:
    """|a - b| / max(1, |a|, |b|)."""
    return abs(a - b) / max(1.0, abs(a), abs(b))

