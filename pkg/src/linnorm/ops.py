"""Structural operators on linear systems.

Subdivision, variable deletion, induced subsystems, component splitting and
isomorphism testing through a canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from linnorm.errors import BudgetExceeded, DimensionMismatch
from linnorm.fq import (
    DEFAULT_ROWSPACE_BUDGET,
    FqMatrix,
    LinearSystem,
    inverse,
    left_kernel_array,
    rref,
    rref_array,
    row_space,
)

DEFAULT_NODE_BUDGET = 10**6
MAX_CANONICAL_K = 12


def subdivide(system: LinearSystem, r: int = 1) -> LinearSystem:
    """r-subdivision: column v becomes r copies of v followed by r copies of -v."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    q = system.q
    blocks = []
    for col in system.array.T:
        blocks.extend([col] * r)
        blocks.extend([(-col) % q] * r)
    a = np.stack(blocks, axis=1) if blocks else np.zeros((system.m, 0), np.int64)
    return LinearSystem(a, q, k=a.shape[1])


def induced_subsystem(system: LinearSystem, keep) -> LinearSystem:
    """Subsystem induced on the variables in ``keep`` (kept in the given order).

    Its rows are the rref basis of the row-space vectors vanishing off ``keep``,
    restricted to ``keep``.
    """
    keep = list(keep)
    drop = [j for j in range(system.k) if j not in set(keep)]
    q = system.q
    a = system.array
    if drop and system.m:
        coeffs = left_kernel_array(a[:, drop], q)
    else:
        coeffs = np.eye(system.m, dtype=np.int64)
    if coeffs.shape[0] == 0:
        return LinearSystem.empty(len(keep), q)
    rows = (coeffs @ a) % q
    reduced, _ = rref_array(rows[:, keep], q)
    return LinearSystem(reduced, q, k=len(keep))


def delete_variable(system: LinearSystem, i: int) -> LinearSystem:
    """Delete variable ``i`` (0-based): project Sol(L) off coordinate i."""
    if not 0 <= i < system.k:
        raise IndexError(f"variable index {i} out of range for k={system.k}")
    return induced_subsystem(system, [j for j in range(system.k) if j != i])


def delete_equation(system: LinearSystem, row: int) -> LinearSystem:
    a = np.delete(system.array, row, axis=0)
    return LinearSystem(a, system.q, k=system.k)


# --- canonical form -------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    """Minimal rref over admissible column orders, plus the order achieving it.

    ``permutation[j]`` is the original column placed at position j.
    """

    matrix: FqMatrix
    permutation: tuple[int, ...]

    def key(self):
        return (self.matrix.q, self.matrix.shape, self.matrix.array.tobytes())

    def __eq__(self, other):
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)


def column_signatures(system: LinearSystem, budget: int = 10**5) -> list[tuple]:
    """Per-column isomorphism invariants.

    For each column j, counts of row-space vectors of each support size that
    are nonzero at j. Falls back to a constant signature when the row space is
    too large to enumerate.
    """
    k = system.k
    if system.m == 0:
        return [()] * k
    try:
        vecs = row_space(system, budget)
    except BudgetExceeded:
        return [()] * k
    weights = np.count_nonzero(vecs, axis=1)
    sigs = []
    for j in range(k):
        hits = weights[vecs[:, j] != 0]
        sigs.append(tuple(np.bincount(hits, minlength=k + 1).tolist()))
    return sigs


class _Node:
    __slots__ = ("perm", "remaining", "mat", "rank")

    def __init__(self, perm, remaining, mat, rank):
        self.perm = perm
        self.remaining = remaining
        self.mat = mat
        self.rank = rank


def _extend(node: _Node, c: int, q: int) -> tuple[tuple[int, ...], _Node]:
    """Append original column c; return (new rref column, child node)."""
    mat = node.mat.copy()
    r = node.rank
    col = mat[:, c]
    nz = np.nonzero(col[r:])[0]
    if nz.size:
        p = r + int(nz[0])
        if p != r:
            mat[[r, p]] = mat[[p, r]]
        mat[r] = (mat[r] * inverse(mat[r, c], q)) % q
        for i in np.nonzero(mat[:, c])[0]:
            if i != r:
                mat[i] = (mat[i] - mat[i, c] * mat[r]) % q
        r += 1
    value = tuple(int(x) for x in mat[:, c])
    remaining = tuple(x for x in node.remaining if x != c)
    return value, _Node(node.perm + (c,), remaining, mat, r)


def _state_key(node: _Node, q: int):
    """Canonical description of what remains to be decided from this node."""
    rem = list(node.remaining)
    sub = node.mat[:, rem]
    r = node.rank
    lower, pivots = rref_array(sub[r:], q) if sub.shape[0] > r else (sub[r:], [])
    upper = sub[:r].copy()
    for i, p in enumerate(pivots):
        for t in range(r):
            if upper[t, p]:
                upper[t] = (upper[t] - upper[t, p] * lower[i]) % q
    return (tuple(rem), upper.tobytes(), lower.tobytes())


def canonical_form(
    system: LinearSystem,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_k: int = MAX_CANONICAL_K,
) -> CanonicalForm:
    """Lexicographically minimal rref over signature-respecting column orders.

    Columns are first grouped by :func:`column_signatures` (an isomorphism
    invariant), groups sorted; within the fixed group order the search keeps
    every partial order whose rref prefix is column-wise minimal, merging
    partial orders that leave identical residual problems. The prefix of
    rref(A) on its first j columns is rref of those columns, which makes the
    column-by-column comparison exact.
    """
    if system.k > max_k:
        raise BudgetExceeded(f"canonical form limited to k <= {max_k}, got k={system.k}")
    q, k = system.q, system.k
    if system.m == 0:
        return CanonicalForm(FqMatrix(np.zeros((0, k), np.int64), q, cols=k), tuple(range(k)))
    sigs = column_signatures(system)
    slot_sigs = sorted(sigs)
    root = _Node((), tuple(range(k)), rref_array(system.array, q)[0].copy(), 0)
    frontier = [root]
    nodes = 0
    for depth in range(k):
        want = slot_sigs[depth]
        best = None
        children: dict = {}
        for node in frontier:
            seen_cols = set()
            for c in node.remaining:
                if sigs[c] != want:
                    continue
                colkey = node.mat[:, c].tobytes()
                if colkey in seen_cols:
                    continue
                seen_cols.add(colkey)
                nodes += 1
                if nodes > node_budget:
                    raise BudgetExceeded(f"canonical form search exceeded {node_budget} nodes")
                value, child = _extend(node, c, q)
                if best is None or value < best:
                    best = value
                    children = {}
                if value == best:
                    children.setdefault(_state_key(child, q), child)
        frontier = list(children.values())
    winner = min(frontier, key=lambda n: n.perm)
    matrix = rref(FqMatrix(system.array[:, list(winner.perm)], q))
    return CanonicalForm(matrix, winner.perm)


def is_isomorphic(a: LinearSystem, b: LinearSystem, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    if (a.q, a.m, a.k) != (b.q, b.m, b.k):
        return False
    return canonical_form(a, node_budget) == canonical_form(b, node_budget)


def isomorphism(a: LinearSystem, b: LinearSystem, node_budget: int = DEFAULT_NODE_BUDGET):
    """Column map sigma with a.permute_columns(sigma) row-equivalent to b, or None."""
    if (a.q, a.m, a.k) != (b.q, b.m, b.k):
        return None
    ca, cb = canonical_form(a, node_budget), canonical_form(b, node_budget)
    if ca != cb:
        return None
    sigma = [0] * a.k
    for pos, col_b in enumerate(cb.permutation):
        sigma[col_b] = ca.permutation[pos]
    return tuple(sigma)


# --- components -----------------------------------------------------------


@dataclass(frozen=True)
class ComponentSplit:
    partition: tuple[tuple[int, ...], ...]
    subsystems: tuple[LinearSystem, ...]

    def __len__(self):
        return len(self.partition)


def circuit_supports(system: LinearSystem, budget: int = DEFAULT_ROWSPACE_BUDGET) -> list[int]:
    """Inclusion-minimal supports of nonzero row-space vectors, as bitmasks."""
    vecs = row_space(system, budget)
    masks = set()
    weights = 1 << np.arange(system.k, dtype=np.int64)
    for v in vecs:
        mask = int(((v != 0) * weights).sum())
        if mask:
            masks.add(mask)
    ordered = sorted(masks, key=lambda m: (bin(m).count("1"), m))
    minimal: list[int] = []
    for m in ordered:
        if not any(c & m == c for c in minimal):
            minimal.append(m)
    return minimal


def components(system: LinearSystem, budget: int = DEFAULT_ROWSPACE_BUDGET) -> ComponentSplit:
    """Finest partition of the variables splitting Sol(L) as a direct sum."""
    k = system.k
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mask in circuit_supports(system, budget):
        members = [j for j in range(k) if mask >> j & 1]
        for j in members[1:]:
            ra, rb = find(members[0]), find(j)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for j in range(k):
        groups.setdefault(find(j), []).append(j)
    partition = tuple(tuple(g) for g in sorted(groups.values()))
    subsystems = tuple(induced_subsystem(system, part) for part in partition)
    return ComponentSplit(partition, subsystems)


# --- row-space intersections ---------------------------------------------


def image_intersection_dim(a: LinearSystem, b: LinearSystem) -> int:
    if a.q != b.q or a.k != b.k:
        raise DimensionMismatch("systems must share q and k")
    stacked = np.vstack([a.array, b.array])
    return a.m + b.m - len(rref_array(stacked, a.q)[1])


def image_intersection_count(a: LinearSystem, b: LinearSystem, n: int) -> int:
    """|im(A^t) ∩ im(B^t)|^n for the transposes acting on (F_q^n)^m."""
    if a.m != b.m:
        raise DimensionMismatch("systems must have the same number of rows")
    return a.q ** (n * image_intersection_dim(a, b))


def scramble(system: LinearSystem, rng: np.random.Generator, row_ops: int = 100) -> LinearSystem:
    """Random row operations followed by a random column shuffle."""
    q = system.q
    a = system.array.copy()
    m = system.m
    for _ in range(row_ops if m else 0):
        kind = rng.integers(3) if m > 1 else 1
        i = int(rng.integers(m))
        if kind == 0:
            j = int(rng.integers(m - 1))
            j += j >= i
            a[i] = (a[i] + int(rng.integers(1, q)) * a[j]) % q if q > 1 else a[i]
        elif kind == 1:
            a[i] = (a[i] * int(rng.integers(1, q))) % q
        else:
            j = int(rng.integers(m))
            a[[i, j]] = a[[j, i]]
    perm = rng.permutation(system.k)
    return LinearSystem(a[:, perm], q, k=system.k)
