"""Compile hypergraphs into linear H-systems.

The standard parametrisation sends vertex values x_v to edge variables
y_e = sum of x_v over v in e, so Sol(L_H) is the image of the edge-vertex
incidence matrix B and the rows of L_H span the left null space of B.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from linnorm.errors import BudgetExceeded, NotAGraph
from linnorm.fq import FqMatrix, LinearSystem, in_row_space, left_kernel_array, rref_array
from linnorm.harmonic import (
    DEFAULT_ENUM_BUDGET,
    FunctionOnG,
    _weights,
    group_digits,
    norm_L,
    t_fourier,
    u2_norm,
)


@dataclass(frozen=True)
class Hypergraph:
    """Uniform hypergraph on vertices 0..d-1; edge order fixes column order."""

    d: int
    r: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        edges = tuple(tuple(int(v) for v in e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if not edges:
            raise ValueError("edge list non-empty required")
        seen = set()
        for e in edges:
            if len(e) != self.r or len(set(e)) != self.r:
                raise ValueError(f"edge {e} does not have {self.r} distinct vertices")
            if any(not 0 <= v < self.d for v in e):
                raise ValueError(f"edge {e} has a vertex outside 0..{self.d - 1}")
            key = frozenset(e)
            if key in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(key)

    @property
    def k(self) -> int:
        return len(self.edges)

    def incidence(self, q: int) -> FqMatrix:
        b = np.zeros((self.k, self.d), dtype=np.int64)
        for i, e in enumerate(self.edges):
            b[i, list(e)] = 1
        return FqMatrix(b, q, cols=self.d)

    def is_graph(self) -> bool:
        return self.r == 2

    def to_networkx(self) -> nx.Graph:
        if not self.is_graph():
            raise NotAGraph("only 2-uniform hypergraphs are graphs")
        g = nx.Graph()
        g.add_nodes_from(range(self.d))
        for i, (u, v) in enumerate(self.edges):
            g.add_edge(u, v, index=i)
        return g

    def connected_components(self) -> int:
        """Number of connected components, isolated vertices included (union-find)."""
        parent = list(range(self.d))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            for v in e[1:]:
                a, b = find(e[0]), find(v)
                if a != b:
                    parent[b] = a
        return len({find(v) for v in range(self.d)})


def graph(d: int, edges) -> Hypergraph:
    return Hypergraph(d, 2, tuple(tuple(e) for e in edges))


def complete_bipartite(a: int, b: int) -> Hypergraph:
    """K_{a,b} with edges (i, a + j) in row-major order."""
    return graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cycle(length: int) -> Hypergraph:
    return graph(length, [(i, (i + 1) % length) for i in range(length)])


def one_subdivision_complete(t: int) -> Hypergraph:
    """K_t with every edge replaced by a path of length two.

    Vertices 0..t-1 are the original ones, t.. the subdivision vertices;
    edges are listed pair by pair as (i, s), (s, j).
    """
    edges = []
    s = t
    for i in range(t):
        for j in range(i + 1, t):
            edges.extend([(i, s), (s, j)])
            s += 1
    return graph(s, edges)


def octahedron() -> Hypergraph:
    """3-graph on {x0, x1, y0, y1, z0, z1} with the 8 edges x_i y_j z_k."""
    edges = [(i, 2 + j, 4 + k) for i in range(2) for j in range(2) for k in range(2)]
    return Hypergraph(6, 3, tuple(edges))


def blowup_extension(h: Hypergraph) -> Hypergraph:
    """beta^2(H): two disjoint copies of H plus one new vertex per edge.

    Edges 2i and 2i+1 (0-based) are e_i^+ ∪ {w_i} and e_i^- ∪ {w_i}.
    """
    d = h.d
    edges = []
    for i, e in enumerate(h.edges):
        w = 2 * d + i
        edges.append(tuple(e) + (w,))
        edges.append(tuple(v + d for v in e) + (w,))
    return Hypergraph(2 * d + h.k, h.r + 1, tuple(edges))


@dataclass(frozen=True)
class HSystem:
    system: LinearSystem
    hypergraph: Hypergraph
    incidence: FqMatrix
    edge_index: tuple[tuple[int, ...], ...] = field(default=())
    degenerate: bool = False

    @property
    def rank(self) -> int:
        return self.system.m


def build_h_system(h: Hypergraph, q: int) -> HSystem:
    """L_H over F_q: rref basis of {a : a^t B = 0}.

    When B has full row rank the null space is trivial; the result is then the
    rank-0 system on k variables and ``degenerate`` is set.
    """
    b = h.incidence(q)
    rows = left_kernel_array(b.array, q)
    if rows.shape[0] == 0:
        system = LinearSystem.empty(h.k, q)
        degenerate = True
    else:
        system = LinearSystem(rows, q, k=h.k)
        degenerate = False
    return HSystem(system, h, b, tuple(h.edges), degenerate)


def graph_rank_formula(h: Hypergraph) -> int:
    """|E| - |V| + number of components."""
    return h.k - h.d + h.connected_components()


def t_hypergraph(h: Hypergraph, f: FunctionOnG, budget: int = DEFAULT_ENUM_BUDGET) -> complex:
    """E over x in G^V of prod_e f(sum of x_v over v in e)."""
    q, n = f.q, f.n
    size = q**n
    total_count = size**h.d
    if total_count > budget:
        raise BudgetExceeded(f"enumerating G^{h.d} with |G|={size} exceeds budget {budget}")
    digits = group_digits(q, n)
    w = _weights(q, n)
    total = 0j
    chunk = 1 << 16
    for start in range(0, total_count, chunk):
        t = np.arange(start, min(start + chunk, total_count), dtype=np.int64)
        point = [digits[(t // size**v) % size] for v in range(h.d)]
        prod = np.ones(t.size, dtype=np.complex128)
        for e in h.edges:
            s = sum(point[v] for v in e) % q
            prod *= f.values[s @ w]
        total += prod.sum()
    return complex(total / total_count)


def cayley_density_crosscheck(h: Hypergraph, q: int, n: int, f: FunctionOnG, budget: int = DEFAULT_ENUM_BUDGET):
    """(t_H(W) with W(x_1..x_r) = f(x_1+..+x_r), t_{L_H}(f))."""
    hs = build_h_system(h, q)
    return t_hypergraph(h, f, budget), t_fourier(hs.system, f, budget)


@dataclass(frozen=True)
class CycleVector:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    vector: tuple[int, ...] | None
    in_row_space: bool


def graph_circuits(h: Hypergraph, q: int, max_edges: int = 20) -> list[CycleVector]:
    """Simple cycles of a graph with their alternating-sign edge vectors.

    Even cycles get the ±1 alternating vector. Odd cycles get the all-ones
    vector over F_2 and ``vector=None`` otherwise, since no ±1 sign pattern
    annihilates an odd cycle when q is odd.
    """
    if not h.is_graph():
        raise NotAGraph("graph_circuits needs a 2-uniform hypergraph")
    if h.k > max_edges:
        raise BudgetExceeded(f"cycle enumeration limited to {max_edges} edges")
    g = h.to_networkx()
    hs = build_h_system(h, q)
    out = []
    cycles = sorted(tuple(c) for c in nx.simple_cycles(g))
    for cyc in cycles:
        length = len(cyc)
        edge_ids = tuple(g.edges[cyc[i], cyc[(i + 1) % length]]["index"] for i in range(length))
        vec = np.zeros(h.k, dtype=np.int64)
        if length % 2 == 0:
            for i, e in enumerate(edge_ids):
                vec[e] = 1 if i % 2 == 0 else q - 1
        elif q == 2:
            vec[list(edge_ids)] = 1
        else:
            out.append(CycleVector(tuple(cyc), edge_ids, None, False))
            continue
        vec %= q
        annihilates = not np.any((vec @ hs.incidence.array) % q)
        ok = annihilates and (hs.system.m > 0 and in_row_space(vec, hs.system))
        out.append(CycleVector(tuple(cyc), edge_ids, tuple(int(v) for v in vec), ok))
    return out


def independent_cycle_rank(circuits: list[CycleVector], q: int, k: int) -> int:
    vecs = [c.vector for c in circuits if c.vector is not None]
    if not vecs:
        return 0
    return len(rref_array(np.array(vecs, dtype=np.int64).reshape(-1, k), q)[1])


@dataclass
class SpotcheckReport:
    """Violations use (i) as stated and (ii) in the form ||f||_L^e <= ||f||_U2.

    ``stated_ii_failures`` lists samples breaking the literal exponent-one
    reading of (ii), which fails e.g. for K_{2,3} and f = (1, 1, -1) on F_3.
    """

    samples: int
    violations: list = field(default_factory=list)
    stated_ii_failures: list = field(default_factory=list)
    worst_i: float = float("-inf")
    worst_ii: float = float("-inf")
    seed: int = 0


def u2_equivalence_spotcheck(
    h: Hypergraph, q: int, n: int = 1, samples: int = 1000, seed: int = 0, tol: float = 1e-9
) -> SpotcheckReport:
    """Sample real f with |f| <= 1 and compare ||f||_L with ||f||_U2.

    (i) ||f||_U2 <= ||f||_L^(2/e(H)); (ii) ||f||_L^e(H) <= ||f||_U2.
    """
    hs = build_h_system(h, q)
    rng = np.random.default_rng(seed)
    report = SpotcheckReport(samples, seed=seed)
    e = h.k
    for s in range(samples):
        raw = rng.uniform(-1.0, 1.0, size=q**n)
        if s % 3 == 1:
            raw = np.sign(raw)
        elif s % 3 == 2:
            raw = raw * rng.uniform(0, 1)
        f = FunctionOnG(np.clip(raw, -1.0, 1.0), q, n)
        nl = norm_L(hs.system, f)
        nu = u2_norm(f)
        gap_i = nu - nl ** (2.0 / e)
        gap_ii = nl**e - nu
        report.worst_i = max(report.worst_i, gap_i)
        report.worst_ii = max(report.worst_ii, gap_ii)
        record = {"sample": s, "norm_L": nl, "norm_U2": nu}
        if gap_i > tol or gap_ii > tol:
            report.violations.append(record)
        if nl - nu > tol:
            report.stated_ii_failures.append(record)
    return report
