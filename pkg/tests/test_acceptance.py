"""Acceptance criteria, one test (or group of tests) per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import itertools
import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest

import oracles
from linnorm import LinearSystem
from linnorm.catalog import (
    chain,
    disjoint_pair,
    identity,
    k23,
    k41_sub,
    norming_templates,
    one_sub_k4,
    triple_equal,
    triple_schatten,
    u2,
)
from linnorm.cayley import (
    Hypergraph,
    build_h_system,
    cayley_density_crosscheck,
    complete_bipartite,
    one_subdivision_complete,
)
from linnorm.checks import (
    _dual_points,
    check_even_girth,
    classify_rank_le2,
    complex_alpha_screen,
    forcing_witness_single_eq,
    holder_sample,
    holder_search,
    character_functions,
    odd_girth_falsifier,
    rowspace_count,
    schatten_falsifier,
    sidorenko_search,
    variable_transitivity_check,
)
from linnorm.cli import main
from linnorm.fq import random_system, row_space_profile
from linnorm.harmonic import FunctionOnG, density, fourier, t_complex, t_direct, t_fourier
from linnorm.io import save_system
from linnorm.ops import (
    canonical_form,
    delete_variable,
    image_intersection_count,
    is_isomorphic,
    scramble,
    subdivide,
)

criterion = pytest.mark.criterion


def _tol(t):
    return 1e-9 * max(1.0, abs(t))


# 1 -------------------------------------------------------------------------


@criterion(1, "oracle equivalence on 200 random systems within 60 s")
def test_oracle_equivalence():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        q = int(rng.choice([2, 3, 5]))
        n = int(rng.integers(1, 3))
        k = int(rng.integers(1, 7))
        m = int(rng.integers(0, min(3, k) + 1))
        system = random_system(rng, q, m, k) if m else LinearSystem.empty(k, q)
        fs = [FunctionOnG.random_real(rng, q, n) for _ in range(k)]
        a, b = t_direct(system, fs), t_fourier(system, fs)
        assert abs(a - b) <= _tol(a), (system, a, b)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    elapsed = time.perf_counter() - start
    print(f"criterion 1: worst scaled gap {worst:.2e}, {elapsed:.1f} s")
    assert elapsed <= 60.0


# 2 -------------------------------------------------------------------------


@criterion(2, "hyperplane identity t_L(1_{x_n=0}) = q^-(k-m)")
@pytest.mark.parametrize("system,q,n,expected", [(u2(2), 2, 3, 0.125), (k23(3), 3, 2, 3.0**-4)])
def test_hyperplane_identity(system, q, n, expected):
    f = FunctionOnG.hyperplane_indicator(q, n)
    assert float(q) ** -(system.k - system.m) == pytest.approx(expected, abs=1e-15)
    for value in (t_direct(system, f), t_fourier(system, f)):
        assert abs(value - expected) <= 1e-12


# 3 -------------------------------------------------------------------------


@criterion(3, "girth regressions and even girth of norming templates")
def test_girth_regressions():
    assert row_space_profile(k23(5)).girth == 4
    assert oracles.min_support(k23(5).matrix.tolist(), 5) == 4
    assert row_space_profile(triple_equal(5)).girth == 2
    assert oracles.min_support(triple_equal(5).matrix.tolist(), 5) == 2
    for q in (2, 3, 5):
        for name, system in norming_templates(q).items():
            g = oracles.min_support(system.matrix.tolist(), q)
            assert g % 2 == 0, name
            assert check_even_girth(system).verdict == "pass", name


# 4 -------------------------------------------------------------------------


@criterion(4, "subdivided identity gives spectral l^2r norms; chain gives moments")
@pytest.mark.parametrize("m,r", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_subdivision_norms(m, r):
    rng = np.random.default_rng(100 + 10 * m + r)
    system = subdivide(identity(m, 3), r)
    for _ in range(100):
        f = FunctionOnG.random_real(rng, 3, 1)
        expected = float(np.sum(np.abs(fourier(f).coefficients) ** (2 * r))) ** m
        assert abs(density(system, f) - expected) <= 1e-9


@criterion(4, "subdivided identity gives spectral l^2r norms; chain gives moments")
def test_theta_chain():
    rng = np.random.default_rng(4)
    for m in (2, 3, 4, 5):
        for _ in range(20):
            f = FunctionOnG.random_real(rng, 5, 1)
            for oracle in ("direct", "fourier"):
                assert abs(density(chain(m, 5), f, oracle) - np.mean(f.values**m)) <= 1e-9


# 5 -------------------------------------------------------------------------


def _random_hypergraph(rng):
    r = int(rng.integers(2, 4))
    d = int(rng.integers(r + 1, 6))
    pool = list(itertools.combinations(range(d), r))
    size = int(rng.integers(1, min(len(pool), 7) + 1))
    picks = rng.choice(len(pool), size=size, replace=False)
    return Hypergraph(d, r, tuple(pool[i] for i in sorted(picks)))


@criterion(5, "Cayley compilation and hypergraph density crosscheck")
def test_cayley():
    assert is_isomorphic(build_h_system(complete_bipartite(2, 2), 5).system, LinearSystem([[1, -1, -1, 1]], 5))
    for a in range(1, 5):
        for b in range(1, 5):
            for q in (2, 3, 5):
                assert build_h_system(complete_bipartite(a, b), q).rank == (a - 1) * (b - 1)
    for q in (3, 5):
        assert is_isomorphic(build_h_system(one_subdivision_complete(4), q).system, k41_sub(q))
    rng = np.random.default_rng(5)
    for _ in range(50):
        h = _random_hypergraph(rng)
        q = int(rng.choice([2, 3]))
        n = 1 if q**h.d > 100 else int(rng.integers(1, 3))
        f = FunctionOnG.random_real(rng, q, n)
        lhs, rhs = cayley_density_crosscheck(h, q, n, f)
        assert abs(lhs - rhs) <= _tol(lhs), h


# 6 -------------------------------------------------------------------------


@criterion(6, "odd-girth falsifier for (1,1,1) over F_3 at alpha = 0.1")
def test_odd_girth_falsifier():
    system = LinearSystem([[1, 1, 1]], 3)
    f, info = odd_girth_falsifier(system, alpha=0.1)
    assert f.mean() == 1.0 or abs(f.mean() - 1.0) <= 1e-15
    assert np.all(f.values.real >= 0)
    for t in (t_direct(system, f), t_fourier(system, f)):
        assert abs(t - 0.998) <= 1e-12
        assert abs(t - (1 - 2 * 0.1**3)) <= 1e-12
    assert t_direct(system, f).real < f.mean().real ** 3


# 7 -------------------------------------------------------------------------


@criterion(7, "variable transitivity")
def test_transitivity():
    res = variable_transitivity_check(one_sub_k4(5))
    assert res.verdict == "fail"
    i, j = res.witness["pair"]
    assert canonical_form(delete_variable(one_sub_k4(5), i)) != canonical_form(delete_variable(one_sub_k4(5), j))
    assert variable_transitivity_check(u2(5)).verdict == "pass"
    assert variable_transitivity_check(k23(5)).verdict == "pass"


# 8 -------------------------------------------------------------------------


@criterion(8, "rank <= 2 classifier under scrambling")
def test_classifier():
    rng = np.random.default_rng(8)
    cases = [(triple_equal, "L3_triple_equal")]
    for r in (1, 2):
        cases.append((lambda q, r=r: disjoint_pair(r, q), f"disjoint_pair({r})"))
        cases.append((lambda q, r=r: triple_schatten(r, q), f"triple_schatten({r})"))
    wrong = 0
    for build, label in cases:
        for i in range(20):
            q = (3, 5, 7)[i % 3]
            if classify_rank_le2(scramble(build(q), rng)).label != label:
                wrong += 1
    assert wrong == 0
    assert classify_rank_le2(one_sub_k4(5)).tag == "not_weakly_norming"


# 9 -------------------------------------------------------------------------


@criterion(9, "forcing witness and exhausted search")
def test_forcing_witness():
    system = LinearSystem([[1, -1, 2, -2]], 5)
    res = forcing_witness_single_eq(system)
    f = res.function
    assert f.sup_distance_from_constant() > 0.1
    assert np.all(f.values.real >= -1e-15)
    assert abs(t_direct(system, f) - f.mean() ** 4) <= 1e-12
    assert oracles.density(system.matrix.tolist(), 5, 1, [f.values] * 4) == pytest.approx(f.mean().real ** 4, abs=1e-12)
    assert forcing_witness_single_eq(LinearSystem([[1, -1, 1, -1]], 5)).exhausted


# 10 ------------------------------------------------------------------------


@criterion(10, "row-space count statistic and image intersection")
def test_isomorphism_statistic():
    rng = np.random.default_rng(10)
    q, n = 3, 1
    for _ in range(100):
        k = int(rng.integers(2, 6))
        m = int(rng.integers(1, min(3, k)))
        l_sys, m_sys = random_system(rng, q, m, k), random_system(rng, q, m, k)
        gammas = _dual_points(q, n, m)
        gamma = gammas[int(rng.integers(len(gammas)))]
        t = t_direct(m_sys, character_functions(l_sys, gamma, n))
        count = rowspace_count(l_sys, m_sys, gamma, n)
        assert abs(t - round(t.real)) < 1e-9 and int(round(t.real)) == count
        aggregate = sum(rowspace_count(l_sys, m_sys, g, n) for g in gammas)
        assert aggregate == image_intersection_count(l_sys, m_sys, n)


# 11 ------------------------------------------------------------------------


@criterion(11, "Hölder sanity on norming templates and certified Schatten falsifier")
@pytest.mark.parametrize("name", sorted(norming_templates(3)))
def test_holder_templates(name):
    system = norming_templates(3)[name]
    assert holder_sample(system, trials=1000, seed=11, nonneg=False) <= 1 + 1e-9


@criterion(11, "Hölder sanity on norming templates and certified Schatten falsifier")
def test_schatten_pipeline():
    system = LinearSystem([[1, 2, -1, -2]], 5)
    w = schatten_falsifier(system)
    res = holder_search(system, trials=3, seed=0, nonneg=False, ascent_steps=20, start=w.functions)
    assert res.certified and res.ratio > 1 + 1e-6


# 12 ------------------------------------------------------------------------


@criterion(12, "complex pattern screening for U^2")
def test_complex_screening():
    screen = complex_alpha_screen(u2(3), trials=1000, seed=12)
    assert (1, 0, 0, 1) in screen.survivors
    rng = np.random.default_rng(12)
    for _ in range(100):
        f = FunctionOnG.random_complex(rng, 3, 1)
        assert abs(t_complex(u2(3), (1, 0, 0, 1), [f] * 4).imag) <= 1e-10


# 13 ------------------------------------------------------------------------


@criterion(13, "byte-identical JSON reports for fixed seeds")
def test_determinism(tmp_path):
    path = tmp_path / "k23.txt"
    save_system(k23(3), path)
    runs = [
        ["check", str(path), "--trials", "20", "--seed", "3"],
        ["alpha-screen", str(path), "--trials", "30", "--seed", "3"],
        ["falsify", str(path), "--method", "holder", "--trials", "5", "--seed", "3"],
    ]
    for argv in runs:
        blobs = []
        out = tmp_path / f"{argv[0]}.json"
        wdir = tmp_path / f"{argv[0]}_witness"
        for _ in range(2):
            main(argv + ["--format", "json", "--out", str(out), "--witness-dir", str(wdir)])
            witnesses = [f.read_bytes() for f in sorted(wdir.glob("*"))] if wdir.exists() else []
            blobs.append((out.read_bytes(), witnesses))
        assert blobs[0] == blobs[1]
        json.loads(blobs[0][0])
    # a fresh interpreter with a different hash seed must agree too
    first = (tmp_path / "check.json").read_bytes()
    env = dict(os.environ, PYTHONHASHSEED="123")
    subprocess.run(
        [sys.executable, "-m", "linnorm.cli", *runs[0], "--format", "json", "--out", str(tmp_path / "check.json"),
         "--witness-dir", str(tmp_path / "check_witness")],
        env=env,
        check=False,
    )
    assert (tmp_path / "check.json").read_bytes() == first
    a = sidorenko_search(k23(3), trials=3, seed=9, steps=20)
    b = sidorenko_search(k23(3), trials=3, seed=9, steps=20)
    assert a.gap == b.gap and np.array_equal(a.function.values, b.function.values)
