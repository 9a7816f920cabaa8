import itertools

import numpy as np
import pytest

import oracles
from linnorm.catalog import k23, k33, k41_sub, u2
from linnorm.cayley import (
    Hypergraph,
    blowup_extension,
    build_h_system,
    cayley_density_crosscheck,
    complete_bipartite,
    cycle,
    graph,
    graph_circuits,
    graph_rank_formula,
    independent_cycle_rank,
    octahedron,
    one_subdivision_complete,
    t_hypergraph,
    u2_equivalence_spotcheck,
)
from linnorm.errors import NotAGraph
from linnorm.harmonic import FunctionOnG
from linnorm.ops import is_isomorphic


def test_k22_gives_u2():
    hs = build_h_system(complete_bipartite(2, 2), 5)
    assert hs.system.matrix.tolist() == [[1, 4, 4, 1]]
    assert is_isomorphic(hs.system, u2(5))


@pytest.mark.parametrize("a,b", [(a, b) for a in range(1, 5) for b in range(1, 5)])
def test_complete_bipartite_rank(a, b):
    h = complete_bipartite(a, b)
    for q in (2, 3):
        assert build_h_system(h, q).rank == (a - 1) * (b - 1) == graph_rank_formula(h)


def test_named_graph_systems():
    assert is_isomorphic(build_h_system(complete_bipartite(2, 3), 5).system, k23(5))
    assert is_isomorphic(build_h_system(complete_bipartite(3, 3), 5).system, k33(5))
    assert is_isomorphic(build_h_system(one_subdivision_complete(4), 5).system, k41_sub(5))


def test_left_kernel_matches_brute_force():
    h = complete_bipartite(2, 3)
    b = np.array(h.incidence(3).tolist())
    rows = [a for a in itertools.product(range(3), repeat=h.k) if not np.any(np.array(a) @ b % 3)]
    hs = build_h_system(h, 3)
    assert len(rows) == 3 ** hs.rank
    assert oracles.gf_rank(hs.system.matrix.tolist(), 3) == hs.rank


def test_trees_are_degenerate():
    hs = build_h_system(graph(4, [(0, 1), (1, 2), (1, 3)]), 5)
    assert hs.degenerate and hs.rank == 0


def test_odd_cycle_depends_on_characteristic():
    assert build_h_system(cycle(3), 2).rank == 1
    assert build_h_system(cycle(3), 3).rank == 0


def test_crosscheck_random_instances():
    rng = np.random.default_rng(0)
    hs = [complete_bipartite(2, 2), complete_bipartite(2, 3), cycle(4), cycle(3), one_subdivision_complete(3), octahedron()]
    for i in range(24):
        h = hs[i % len(hs)]
        q = int(rng.choice([2, 3]))
        n = 1 if h.d > 5 else int(rng.integers(1, 3))
        f = FunctionOnG.random_real(rng, q, n)
        lhs, rhs = cayley_density_crosscheck(h, q, n, f)
        assert abs(lhs - rhs) <= 1e-9 * max(1, abs(lhs))


def test_t_hypergraph_small_case():
    # single edge: E f(x + y) = E f
    f = FunctionOnG([1, 2, 6], 3, 1)
    assert t_hypergraph(graph(2, [(0, 1)]), f) == pytest.approx(3.0)


def test_blowup_extension_shape():
    b = blowup_extension(complete_bipartite(1, 2))
    assert (b.d, b.r, b.k) == (8, 3, 4)
    assert b.edges[0] == (0, 1, 6) and b.edges[1] == (3, 4, 6)


def test_hypergraph_validation():
    with pytest.raises(ValueError, match="non-empty"):
        Hypergraph(3, 2, ())
    with pytest.raises(ValueError):
        graph(3, [(0, 0)])
    with pytest.raises(NotAGraph):
        graph_circuits(octahedron(), 3)


def test_circuits_of_k23():
    circuits = graph_circuits(complete_bipartite(2, 3), 5)
    assert len(circuits) == 3
    assert all(c.in_row_space for c in circuits)
    assert independent_cycle_rank(circuits, 5, 6) == 2


def test_odd_circuits_have_no_vector_for_odd_q():
    (c,) = graph_circuits(cycle(3), 3)
    assert c.vector is None
    (c,) = graph_circuits(cycle(3), 2)
    assert c.in_row_space


def test_u2_spotcheck_for_even_cycle():
    report = u2_equivalence_spotcheck(cycle(4), 3, samples=200, seed=1)
    assert report.violations == []
    assert report.worst_i <= 1e-9


def test_u2_spotcheck_stated_exponent_fails_for_k23():
    # the exponent-one reading of the upper comparison is false here
    report = u2_equivalence_spotcheck(complete_bipartite(2, 3), 3, samples=300, seed=0)
    assert report.violations == []
    assert report.stated_ii_failures
