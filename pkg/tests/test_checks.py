import json

import numpy as np
import pytest

import oracles
from linnorm import LinearSystem
from linnorm.catalog import (
    disjoint_pair,
    k23,
    norming_templates,
    one_sub_k4,
    triple_equal,
    triple_schatten,
    u2,
    weakly_norming_templates,
)
from linnorm.checks import (
    FAIL,
    PASS,
    SKIPPED,
    RunOptions,
    check_even_girth,
    check_even_k,
    check_translation_invariance,
    check_zero_column,
    check_zero_matrix,
    classify_rank_le2,
    complex_alpha_screen,
    component_isomorphism_check,
    forcing_gap,
    forcing_witness_single_eq,
    holder_ratio,
    holder_sample,
    holder_search,
    isomorphism_statistic_crosscheck,
    odd_girth_falsifier,
    run_checks,
    schatten_census,
    schatten_falsifier,
    sidorenko_search,
    variable_transitivity_check,
)
from linnorm.errors import NotApplicable, RankTooHigh
from linnorm.harmonic import FunctionOnG, t_direct
from linnorm.ops import scramble


def test_translation_invariance():
    assert check_translation_invariance(u2(3)).verdict == PASS
    res = check_translation_invariance(LinearSystem([[1, 1, 1]], 5))
    assert res.verdict == FAIL and res.witness["row"] == 0 and res.witness["row_sum"] == 3
    assert res.witness["fibers_uniform"] is True
    ok = check_translation_invariance(k23(3))
    assert ok.witness["solutions"] == len(oracles.solutions(k23(3).matrix.tolist(), 3, 1))


def test_zero_matrix_targets():
    zero = LinearSystem.empty(4, 3)
    assert check_zero_matrix(zero, "weak").verdict == PASS
    assert check_zero_matrix(zero, "norming").verdict == FAIL
    assert check_zero_column(zero).verdict == SKIPPED
    report = run_checks(zero)
    assert report.overall == PASS
    assert all(r.verdict == SKIPPED for r in report.results[1:])


def test_zero_column():
    res = check_zero_column(LinearSystem([[1, -1, 0]], 5))
    assert res.verdict == FAIL and res.witness["column"] == 2


def test_even_k_only_for_norming():
    assert check_even_k(triple_equal(3)).verdict == SKIPPED
    assert check_even_k(triple_equal(3), "norming").verdict == FAIL
    assert check_even_k(u2(3), "norming").verdict == PASS


@pytest.mark.parametrize("q", [3, 5])
def test_templates_have_even_girth(q):
    for name, system in norming_templates(q).items():
        assert check_even_girth(system).verdict == PASS, name


def test_odd_girth_attaches_falsifier():
    res = check_even_girth(LinearSystem([[1, 1, 1]], 3))
    assert res.verdict == FAIL and res.witness["girth"] == 3
    (f,) = res.functions
    assert f.mean().real == pytest.approx(1.0, abs=1e-12)
    assert np.all(f.values.real >= -1e-12)
    assert t_direct(LinearSystem([[1, 1, 1]], 3), f).real < 1


def test_odd_girth_closed_form():
    system = LinearSystem([[1, 1, 1]], 3)
    f, info = odd_girth_falsifier(system, alpha=0.1)
    assert abs(f.mean() - 1) < 1e-15
    assert abs(info["t"] - (1 - 2 * 0.1**3)) < 1e-12
    assert abs(t_direct(system, f).real - 0.998) < 1e-12
    with pytest.raises(NotApplicable):
        odd_girth_falsifier(u2(3))


def test_schatten_census():
    for name, system in weakly_norming_templates(5).items():
        assert schatten_census(system).verdict == PASS, name
    res = schatten_census(LinearSystem([[1, 2, -1, -2]], 5))
    assert res.verdict == FAIL and "vector" in res.witness


def test_transitivity():
    assert variable_transitivity_check(u2(5)).verdict == PASS
    assert variable_transitivity_check(k23(5)).verdict == PASS
    res = variable_transitivity_check(one_sub_k4(5))
    assert res.verdict == FAIL
    assert res.witness["pair"] == [0, 3]


def test_component_isomorphism():
    assert component_isomorphism_check(disjoint_pair(2, 5)).verdict == PASS
    mixed = LinearSystem([[1, -1, 0, 0, 0, 0], [0, 0, 1, 1, -1, -1]], 5)
    res = component_isomorphism_check(mixed)
    assert res.verdict == FAIL and res.witness["pair"] == [[0, 1], [2, 3, 4, 5]]


def test_schatten_falsifier_certifies():
    system = LinearSystem([[1, 2, -1, -2]], 5)
    w = schatten_falsifier(system)
    assert w.certified and w.ratio > 1 + 1e-6
    assert holder_ratio(system, w.functions, "direct") > 1 + 1e-6
    res = holder_search(system, trials=2, ascent_steps=5, nonneg=False, start=w.functions)
    assert res.certified and res.ratio >= w.ratio
    with pytest.raises(NotApplicable):
        schatten_falsifier(u2(5))


@pytest.mark.parametrize("q", [3, 5])
def test_holder_holds_for_norming_templates(q):
    for name, system in norming_templates(q).items():
        assert holder_sample(system, trials=100, seed=1, nonneg=False) <= 1 + 1e-9, name


def test_sidorenko_search():
    bad = sidorenko_search(LinearSystem([[1, 1, 1]], 3), trials=2, steps=10)
    assert bad.certified and bad.gap < 0
    good = sidorenko_search(u2(3), trials=3, steps=20)
    assert not good.certified and good.gap >= -1e-9


def test_forcing_witness():
    res = forcing_witness_single_eq(LinearSystem([[1, -1, 2, -2]], 5))
    assert not res.exhausted
    assert abs(res.gap) <= 1e-12 and res.distance > 0.1
    gap, dist = forcing_gap(LinearSystem([[1, -1, 2, -2]], 5), res.function)
    assert abs(gap) <= 1e-12 and dist == res.distance
    assert forcing_witness_single_eq(LinearSystem([[1, -1, 1, -1]], 5)).exhausted
    with pytest.raises(NotApplicable):
        forcing_witness_single_eq(LinearSystem([[1, 1, 1]], 5))


@pytest.mark.parametrize(
    "system,label",
    [
        (triple_equal(5), "L3_triple_equal"),
        (disjoint_pair(1, 5), "disjoint_pair(1)"),
        (disjoint_pair(2, 5), "disjoint_pair(2)"),
        (triple_schatten(1, 5), "triple_schatten(1)"),
        (triple_schatten(2, 5), "triple_schatten(2)"),
        (u2(5), "single_schatten(2)"),
        (one_sub_k4(5), "not_weakly_norming"),
        (LinearSystem([[1, 2, -1, -2]], 5), "not_weakly_norming"),
        (LinearSystem.empty(3, 5), "unknown"),
    ],
)
def test_classifier(system, label):
    assert classify_rank_le2(system).label == label


def test_classifier_under_scrambles():
    rng = np.random.default_rng(0)
    for system, label in [(disjoint_pair(1, 5), "disjoint_pair(1)"), (triple_schatten(2, 3), "triple_schatten(2)")]:
        for _ in range(5):
            assert classify_rank_le2(scramble(system, rng)).label == label
    with pytest.raises(RankTooHigh):
        classify_rank_le2(LinearSystem(np.eye(3, dtype=int), 5))


def test_alpha_screen_u2():
    screen = complex_alpha_screen(u2(3), trials=100, seed=0)
    assert (1, 0, 0, 1) in screen.survivors
    assert (1, 1, 1, 1) not in screen.survivors
    json.dumps(screen.to_dict())


def test_statistic_crosscheck():
    rng = np.random.default_rng(0)
    from linnorm.fq import random_system

    for _ in range(5):
        l_sys = random_system(rng, 3, 2, 4)
        m_sys = random_system(rng, 3, 2, 4)
        assert isomorphism_statistic_crosscheck(l_sys, m_sys).ok
    with pytest.raises(ValueError):
        isomorphism_statistic_crosscheck(u2(3), k23(3))


def test_run_checks_reports():
    report = run_checks(u2(3), RunOptions(holder_trials=10, sidorenko_trials=2))
    assert report.overall == PASS and report.exit_code == 0
    bad = run_checks(LinearSystem([[1, 1, 1]], 3), RunOptions(holder_trials=10, sidorenko_trials=2))
    assert bad.exit_code == 1
    assert bad["even_girth"].verdict == FAIL
    text = json.dumps(report.to_dict(), sort_keys=True)
    again = json.dumps(run_checks(u2(3), RunOptions(holder_trials=10, sidorenko_trials=2)).to_dict(), sort_keys=True)
    assert text == again
    with pytest.raises(ValueError):
        run_checks(u2(3), RunOptions(target="strong"))


def _weak_suite():
    from linnorm.cayley import build_h_system, complete_bipartite, cycle

    out = dict(weakly_norming_templates(5))
    for name, h in [("K22", complete_bipartite(2, 2)), ("K23", complete_bipartite(2, 3)), ("C6", cycle(6))]:
        out["cayley_" + name] = build_h_system(h, 5).system
    return out


@pytest.mark.parametrize("name", sorted(_weak_suite()))
def test_weakly_norming_templates_pass_every_check(name):
    report = run_checks(_weak_suite()[name], RunOptions(holder_trials=20, sidorenko_trials=3))
    assert report.overall == PASS, report.verdicts()
