"""Necessary conditions for (weakly) norming systems and falsifiers.

Every check returns a :class:`CheckResult`. A ``fail`` verdict always ships a
witness that can be re-evaluated independently: a row index, a vector, a pair
of deleted variables or a tuple of functions together with the inequality it
violates. Searches that find nothing report ``pass`` (no violation seen) and
never claim that a system is norming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from linnorm.catalog import disjoint_pair, triple_equal, triple_schatten
from linnorm.errors import (
    BudgetExceeded,
    NotApplicable,
    RankTooHigh,
    SearchFailed,
)
from linnorm.fq import (
    DEFAULT_ROWSPACE_BUDGET,
    LinearSystem,
    is_schatten_vector,
    rref_array,
    row_space_profile,
)
from linnorm.harmonic import (
    DEFAULT_ENUM_BUDGET,
    FunctionOnG,
    SpectrumOnG,
    _linear_images,
    all_patterns,
    density,
    fourier,
    function_from_spectrum,
    group_digits,
    t_direct,
    t_fourier,
    t_spectral,
)
from linnorm.ops import (
    canonical_form,
    components,
    delete_variable,
    image_intersection_count,
    isomorphism,
)

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
SKIPPED = "skipped"

CHECK_ORDER = (
    "zero_matrix",
    "translation_invariance",
    "zero_column",
    "even_girth",
    "even_k",
    "schatten_census",
    "variable_transitivity",
    "component_isomorphism",
    "holder_sample",
    "sidorenko_search",
)

CERTIFY_MARGIN = 1e-6


@dataclass
class CheckResult:
    name: str
    verdict: str
    witness: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    functions: list = field(default_factory=list)
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "verdict": self.verdict,
            "witness": self.witness,
            "params": self.params,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class CheckReport:
    system: LinearSystem
    target: str
    seed: int
    results: list = field(default_factory=list)

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def verdicts(self) -> dict:
        return {r.name: r.verdict for r in self.results}

    @property
    def overall(self) -> str:
        v = [r.verdict for r in self.results]
        if FAIL in v:
            return FAIL
        if INCONCLUSIVE in v:
            return INCONCLUSIVE
        return PASS

    @property
    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}[self.overall]

    def to_dict(self) -> dict:
        s = self.system
        return {
            "system": {"q": s.q, "m": s.m, "k": s.k, "rows": s.matrix.tolist()},
            "target": self.target,
            "seed": self.seed,
            "overall": self.overall,
            "checks": [r.to_dict() for r in self.results],
        }


# --- small helpers ---------------------------------------------------------


def _as_int_list(v) -> list[int]:
    return [int(x) for x in np.asarray(v).reshape(-1)]


def _frequency(c: int, gamma: int, q: int, n: int) -> int:
    """Index of c * gamma in the dual group."""
    d = group_digits(q, n)
    w = q ** np.arange(n, dtype=np.int64)
    return int(((c * d[gamma]) % q) @ w)


def _norm(system: LinearSystem, f: FunctionOnG, oracle: str = "auto") -> float:
    return abs(density(system, f, oracle)) ** (1.0 / system.k)


def holder_ratio(system: LinearSystem, fs, oracle: str = "auto") -> float:
    """|t_L(f_1, ..., f_k)| / prod ||f_i||_L; 0 when some ||f_i||_L vanishes."""
    fs = list(fs)
    denom = 1.0
    cache: dict[int, float] = {}
    for f in fs:
        if id(f) not in cache:
            cache[id(f)] = _norm(system, f, oracle)
        denom *= cache[id(f)]
    if denom < 1e-12:
        return 0.0
    return abs(density(system, fs, oracle)) / denom


def _certified_ratio(system: LinearSystem, fs) -> tuple[float, float]:
    """Hölder ratio under both oracles."""
    return holder_ratio(system, fs, "direct"), holder_ratio(system, fs, "fourier")


def _random_function(rng, q: int, n: int, nonneg: bool) -> FunctionOnG:
    return FunctionOnG.random_real(rng, q, n, nonneg=nonneg)


# --- structural checks -----------------------------------------------------


def fiber_counts(system: LinearSystem, n: int = 1, budget: int = DEFAULT_ENUM_BUDGET) -> np.ndarray:
    """(k, q^n) array of |{x in Sol : x_i = v}|, by enumerating Sol."""
    q, k = system.q, system.k
    counts = np.zeros((k, q**n), dtype=np.int64)
    for idx in _linear_images(system.kernel.array, q, n, budget):
        for i in range(k):
            counts[i] += np.bincount(idx[:, i], minlength=q**n)
    return counts


def check_translation_invariance(
    system: LinearSystem, n: int = 1, budget: int = DEFAULT_ENUM_BUDGET
) -> CheckResult:
    """Pass iff every row sums to 0, i.e. (1, ..., 1) solves L.

    The fiber sizes |{x in Sol : x_i = v}| are reported alongside; they all
    equal |Sol|/|G| for translation invariant systems.
    """
    sums = system.row_sums()
    bad = [i for i, s in enumerate(sums.tolist()) if s]
    params = {"n": n}
    witness: dict = {}
    try:
        counts = fiber_counts(system, n, budget)
        sol = int(counts[0].sum()) if system.k else 0
        witness["fibers_uniform"] = bool(np.all(counts * system.q**n == sol))
        witness["solutions"] = sol
    except BudgetExceeded:
        witness["fibers_uniform"] = None
    if bad:
        witness.update({"row": bad[0], "row_sum": int(sums[bad[0]])})
        return CheckResult("translation_invariance", FAIL, witness, params)
    return CheckResult("translation_invariance", PASS, witness, params)


def check_zero_matrix(system: LinearSystem, target: str = "weak") -> CheckResult:
    """The zero system is semi-norming but not norming.

    t_L(f) = (E f)^k, so ||f||_L vanishes on every mean-zero f; its weak
    counterpart t_L(|f|)^(1/k) = E|f| is the L^1 norm.
    """
    if not system.is_zero():
        return CheckResult("zero_matrix", PASS, {"zero": False})
    if target == "norming":
        return CheckResult(
            "zero_matrix",
            FAIL,
            {"zero": True, "function": "1_{0} - 1_{1}", "t": 0.0},
            note="mean-zero nonzero function has ||f||_L = 0",
        )
    return CheckResult("zero_matrix", PASS, {"zero": True}, note="t_L(|f|)^(1/k) is the L^1 norm")


def check_zero_column(system: LinearSystem) -> CheckResult:
    if system.is_zero():
        return CheckResult("zero_column", SKIPPED, note="zero matrix")
    cols = [j for j in range(system.k) if not np.any(system.array[:, j])]
    if cols:
        return CheckResult("zero_column", FAIL, {"column": cols[0]})
    return CheckResult("zero_column", PASS)


def check_even_k(system: LinearSystem, target: str = "weak") -> CheckResult:
    """Norming systems have an even number of variables; weak ones need not."""
    if target != "norming":
        return CheckResult("even_k", SKIPPED, {"k": system.k}, note="applies to the norming target only")
    verdict = PASS if system.k % 2 == 0 else FAIL
    return CheckResult("even_k", verdict, {"k": system.k})


def check_even_girth(system: LinearSystem, n: int = 1, budget: int = DEFAULT_ROWSPACE_BUDGET) -> CheckResult:
    if system.m == 0:
        return CheckResult("even_girth", SKIPPED, note="no nonzero row-space vector")
    try:
        prof = row_space_profile(system, budget)
    except BudgetExceeded as exc:
        return CheckResult("even_girth", INCONCLUSIVE, note=str(exc))
    witness = {"girth": prof.girth}
    if prof.girth % 2 == 0:
        return CheckResult("even_girth", PASS, witness)
    witness["vector"] = list(prof.mu[0])
    result = CheckResult("even_girth", FAIL, witness)
    try:
        f, info = odd_girth_falsifier(system, n=n, budget=budget)
        witness.update(info)
        result.functions = [f]
    except (NotApplicable, SearchFailed, BudgetExceeded) as exc:
        result.note = f"no function witness: {exc}"
    return result


def schatten_census(system: LinearSystem, budget: int = DEFAULT_ROWSPACE_BUDGET) -> CheckResult:
    """Minimum-support vectors against the Schatten conditions.

    Fails when mu(L) has a non-Schatten vector while s(L) < k / girth, or when
    m >= 2 and mu(L) lacks two independent Schatten vectors.
    """
    if system.m == 0:
        return CheckResult("schatten_census", SKIPPED, note="zero matrix")
    try:
        prof = row_space_profile(system, budget)
    except BudgetExceeded as exc:
        return CheckResult("schatten_census", INCONCLUSIVE, note=str(exc))
    q, k, ell = system.q, system.k, prof.girth
    non = [v for v in prof.mu if not is_schatten_vector(v, q)[0]]
    schatten_rank = len(rref_array(np.array(prof.schatten, dtype=np.int64).reshape(-1, k), q)[1])
    witness = {
        "girth": ell,
        "mu_size": len(prof.mu),
        "schatten_count": prof.schatten_count,
        "schatten_rank": schatten_rank,
    }
    if non and prof.schatten_count * ell < k:
        witness.update({"vector": list(non[0]), "bound": f"s(L) >= {k}/{ell}"})
        return CheckResult("schatten_census", FAIL, witness)
    if system.m >= 2 and schatten_rank < 2:
        witness["bound"] = "two independent Schatten vectors in mu(L)"
        return CheckResult("schatten_census", FAIL, witness)
    return CheckResult("schatten_census", PASS, witness)


def variable_transitivity_check(system: LinearSystem, node_budget: int = 10**6) -> CheckResult:
    """All single-variable deletions must be isomorphic; the witness pair is 0-based."""
    try:
        forms = [canonical_form(delete_variable(system, i), node_budget) for i in range(system.k)]
    except BudgetExceeded as exc:
        return CheckResult("variable_transitivity", INCONCLUSIVE, note=str(exc))
    for j in range(1, system.k):
        if forms[j] != forms[0]:
            witness = {
                "pair": [0, j],
                "deleted_0": forms[0].matrix.tolist(),
                "deleted_1": forms[j].matrix.tolist(),
            }
            return CheckResult("variable_transitivity", FAIL, witness)
    return CheckResult("variable_transitivity", PASS, {"classes": 1})


def component_isomorphism_check(system: LinearSystem, budget: int = DEFAULT_ROWSPACE_BUDGET) -> CheckResult:
    """Components carrying equations must be pairwise isomorphic."""
    try:
        split = components(system, budget)
    except BudgetExceeded as exc:
        return CheckResult("component_isomorphism", INCONCLUSIVE, note=str(exc))
    parts = [(p, s) for p, s in zip(split.partition, split.subsystems) if s.m > 0]
    witness = {"partition": [list(p) for p in split.partition]}
    if len(parts) < 2:
        return CheckResult("component_isomorphism", PASS, witness)
    try:
        base = canonical_form(parts[0][1])
        for p, s in parts[1:]:
            if (s.m, s.k) != (parts[0][1].m, parts[0][1].k) or canonical_form(s) != base:
                witness["pair"] = [list(parts[0][0]), list(p)]
                return CheckResult("component_isomorphism", FAIL, witness)
    except BudgetExceeded as exc:
        return CheckResult("component_isomorphism", INCONCLUSIVE, witness, note=str(exc))
    return CheckResult("component_isomorphism", PASS, witness)


# --- explicit constructions ------------------------------------------------


def odd_girth_falsifier(
    system: LinearSystem,
    n: int = 1,
    gamma: int = 1,
    alpha: float | None = None,
    margin: float = 1e-9,
    max_halvings: int = 40,
    budget: int = DEFAULT_ROWSPACE_BUDGET,
) -> tuple[FunctionOnG, dict]:
    """Spectrum 1 at 0 and -alpha at each +-a_i gamma, a_i the entries of an odd minimum-support vector.

    With alpha <= 1/(2 girth) the function takes values in [0, 2] and has mean 1,
    while t_L(f_alpha) = 1 - 2 alpha^girth + O(alpha^(girth+1)) < 1. Without an
    explicit ``alpha`` the sweep halves alpha from the largest power of two
    below 1/(2 girth) until t_L falls below 1 - margin.
    """
    prof = row_space_profile(system, budget)
    ell = prof.girth
    if ell == 0 or ell % 2 == 0:
        raise NotApplicable(f"girth {ell} is not odd")
    q = system.q
    vector = prof.mu[0]
    coeffs = sorted({int(a) for a in vector if a})

    def build(a: float) -> FunctionOnG:
        entries = {0: 1.0}
        for c in coeffs:
            entries[_frequency(c, gamma, q, n)] = -a
            entries[_frequency(-c, gamma, q, n)] = -a
        f = function_from_spectrum(entries, q, n)
        return FunctionOnG(f.values.real, q, n)

    if alpha is not None:
        candidates = [alpha]
    else:
        start = 2.0 ** -math.ceil(math.log2(2 * ell))
        candidates = [start * 2.0**-t for t in range(max_halvings)]
    for a in candidates:
        f = build(a)
        t = density(system, f).real
        if t < 1.0 - margin:
            info = {
                "alpha": a,
                "t": t,
                "mean": f.mean().real,
                "min": float(f.values.real.min()),
                "vector": list(vector),
                "gamma": gamma,
            }
            return f, info
    if alpha is not None:
        f = build(alpha)
        raise SearchFailed(f"alpha={alpha} gives t={density(system, f).real}", {"alpha": alpha})
    raise SearchFailed("no alpha in the sweep gave t_L < 1", {"girth": ell})


def schatten_functions(system: LinearSystem, vector, eps: float, z: complex, n: int = 1, gamma: int = 1):
    """Test functions built on a non-Schatten minimum-support vector.

    Slot s_i (the i-th support position, i from 1) gets spectrum 1 at 0,
    eps*z at (-1)^i a_i gamma and eps*conj(z) at (-1)^(i+1) a_i gamma; other
    slots get the constant 1.
    """
    q, k = system.q, system.k
    support = [j for j in range(k) if vector[j] % q]
    ones = FunctionOnG.constant(1.0, q, n)
    fs = [ones] * k
    for i, j in enumerate(support, start=1):
        a = int(vector[j])
        sign = 1 if i % 2 == 0 else -1
        entries = {0: 1.0}
        entries[_frequency(sign * a, gamma, q, n)] = eps * z
        entries[_frequency(-sign * a, gamma, q, n)] = eps * np.conj(z)
        if q == 2:
            entries[_frequency(a, gamma, q, n)] = eps
        f = function_from_spectrum(entries, q, n)
        fs[j] = FunctionOnG(f.values.real, q, n)
    return fs


@dataclass
class HolderWitness:
    ratio: float
    functions: list
    params: dict = field(default_factory=dict)
    certified: bool = False


def schatten_falsifier(
    system: LinearSystem,
    n: int = 1,
    gamma: int = 1,
    grid: int = 360,
    refine: int = 10,
    halvings: int = 12,
    margin: float = CERTIFY_MARGIN,
    budget: int = DEFAULT_ROWSPACE_BUDGET,
) -> HolderWitness:
    """Search (eps, z) so that :func:`schatten_functions` break the rainbow Hölder inequality.

    eps runs over 2^-1, 2^-2, ...; for each eps, z sweeps ``grid`` points of
    the unit circle and then ``refine`` times finer around the best one. The
    first pair with ratio > 1 + margin under both oracles is returned.
    """
    if system.m == 0:
        raise NotApplicable("zero matrix")
    prof = row_space_profile(system, budget)
    q = system.q
    non = [v for v in prof.mu if not is_schatten_vector(v, q)[0]]
    if not non:
        raise NotApplicable("every minimum-support vector is Schatten")
    vector = non[0]
    best = (0.0, None, None)
    for t in range(1, halvings + 1):
        eps = 2.0**-t
        zs = [1.0 + 0j] if q == 2 else list(np.exp(2j * np.pi * np.arange(grid) / grid))
        scored = [(holder_ratio(system, schatten_functions(system, vector, eps, z, n, gamma)), i) for i, z in enumerate(zs)]
        ratio, i = max(scored, key=lambda p: (p[0], -p[1]))
        z = zs[i]
        if q != 2 and refine > 1:
            step = 2 * np.pi / grid
            theta0 = 2 * np.pi * i / grid
            fine = [np.exp(1j * (theta0 + step * (s / refine - 1))) for s in range(2 * refine + 1)]
            for zf in fine:
                r = holder_ratio(system, schatten_functions(system, vector, eps, zf, n, gamma))
                if r > ratio:
                    ratio, z = r, zf
        if ratio > best[0]:
            best = (ratio, eps, z)
        if ratio > 1 + margin:
            fs = schatten_functions(system, vector, eps, z, n, gamma)
            rd, rf = _certified_ratio(system, fs)
            if min(rd, rf) > 1 + margin:
                params = {"eps": eps, "z": [float(np.real(z)), float(np.imag(z))], "vector": list(vector), "gamma": gamma}
                return HolderWitness(min(rd, rf), fs, params, True)
    raise SearchFailed(
        "no (eps, z) on the grid violates Hölder",
        {"best_ratio": best[0], "eps": best[1], "vector": list(vector)},
    )


def _paired_classes(row, q: int):
    """Classes {a, -a} of a paired equation, or None if the row is not paired."""
    row = [int(v) % q for v in row]
    if 0 in row or len(row) % 2:
        return None
    counts: dict[int, int] = {}
    for v in row:
        counts[v] = counts.get(v, 0) + 1
    if q == 2:
        return [1]
    classes = []
    for a, c in counts.items():
        if counts.get((-a) % q, 0) != c:
            return None
        rep = min(a, (-a) % q)
        if rep not in classes:
            classes.append(rep)
    return sorted(classes)


@dataclass
class ForcingResult:
    exhausted: bool
    function: FunctionOnG | None = None
    gap: float | None = None
    distance: float | None = None
    classes: tuple = ()


def forcing_witness_single_eq(system: LinearSystem, n: int = 1, gamma: int = 1, tol: float = 1e-12) -> ForcingResult:
    """Non-constant f >= 0 with t_L(f) = (E f)^k for a paired equation, if one exists.

    The spectrum is 1 at 0 and 1/2 at +-gamma. When two coefficient classes
    {a_i, -a_i} and {a_j, -a_j} differ, products of spectral values vanish off 0.
    """
    if system.m != 1:
        raise NotApplicable("forcing witness needs a single equation")
    q = system.q
    classes = _paired_classes(system.array[0], q)
    if classes is None:
        raise NotApplicable("equation is not of paired form (a_1, -a_1, ..., a_r, -a_r)")
    if len(classes) < 2:
        return ForcingResult(True, classes=tuple(classes))
    entries = {0: 1.0, _frequency(1, gamma, q, n): 0.5, _frequency(-1, gamma, q, n): 0.5}
    if q == 2:
        entries[_frequency(1, gamma, q, n)] = 1.0
    f = function_from_spectrum(entries, q, n)
    f = FunctionOnG(f.values.real, q, n)
    gap, dist = forcing_gap(system, f)
    if abs(gap) > tol or dist <= 0.1:
        raise SearchFailed("constructed function does not certify non-forcing", {"gap": gap, "distance": dist})
    return ForcingResult(False, f, gap, dist, tuple(classes))


def forcing_gap(system: LinearSystem, f: FunctionOnG, oracle: str = "auto") -> tuple[float, float]:
    """(t_L(f) - (E f)^k, max |f - E f|)."""
    t = density(system, f, oracle).real
    return t - f.mean().real ** system.k, f.sup_distance_from_constant()


# --- numerical searches ----------------------------------------------------


def _ascend(objective, fs: list, rng, steps: int, step0: float, project):
    """Coordinate perturbation ascent with geometric step decay."""
    value = objective(fs)
    step = step0
    fails = 0
    k = len(fs)
    size = fs[0].size
    for _ in range(steps):
        i = int(rng.integers(k))
        x = int(rng.integers(size))
        delta = step * (1 if rng.random() < 0.5 else -1)
        vals = fs[i].values.real.copy()
        vals[x] += delta
        cand = list(fs)
        cand[i] = project(FunctionOnG(vals, fs[i].q, fs[i].n))
        new = objective(cand)
        if new > value:
            fs, value, fails = cand, new, 0
        else:
            fails += 1
            if fails >= 2 * k * size:
                step *= 0.5
                fails = 0
                if step < 1e-8:
                    break
    return fs, value


def holder_search(
    system: LinearSystem,
    trials: int = 100,
    seed: int = 0,
    n: int = 1,
    nonneg: bool = True,
    ascent_steps: int = 200,
    start=None,
    margin: float = CERTIFY_MARGIN,
) -> HolderWitness:
    """Maximise |t_L(f_1..f_k)| / prod ||f_i||_L over random restarts and local ascent.

    ``nonneg`` restricts to f_i >= 0 (weak Hölder). ``start`` seeds the first
    restart with a given tuple, e.g. :func:`schatten_falsifier` output. A ratio
    above 1 + margin is re-evaluated with both oracles before it is reported
    as certified.
    """
    rng = np.random.default_rng(seed)
    q, k = system.q, system.k

    def project(f):
        return FunctionOnG(np.maximum(f.values.real, 0.0), f.q, f.n) if nonneg else f

    def objective(fs):
        return holder_ratio(system, fs)

    best_ratio, best_fs = -1.0, None
    for trial in range(trials):
        if trial == 0 and start is not None:
            fs = list(start)
        else:
            fs = [_random_function(rng, q, n, nonneg) for _ in range(k)]
        if ascent_steps:
            fs, ratio = _ascend(objective, fs, rng, ascent_steps, 0.25, project)
        else:
            ratio = objective(fs)
        if ratio > best_ratio:
            best_ratio, best_fs = ratio, fs
    certified = False
    if best_ratio > 1 + margin:
        rd, rf = _certified_ratio(system, best_fs)
        certified = min(rd, rf) > 1 + margin
    params = {"trials": trials, "seed": seed, "n": n, "nonneg": nonneg, "ascent_steps": ascent_steps}
    return HolderWitness(best_ratio, best_fs, params, certified)


def holder_sample(system: LinearSystem, trials: int = 1000, seed: int = 0, n: int = 1, nonneg: bool = True) -> float:
    """Largest Hölder ratio over ``trials`` independent random tuples."""
    return holder_search(system, trials, seed, n, nonneg, ascent_steps=0).ratio


@dataclass
class SidorenkoWitness:
    gap: float
    function: FunctionOnG
    certified: bool
    params: dict = field(default_factory=dict)


def sidorenko_search(
    system: LinearSystem,
    trials: int = 20,
    seed: int = 0,
    n: int = 1,
    steps: int = 200,
    margin: float = 1e-9,
) -> SidorenkoWitness:
    """Minimise t_L(f) - 1 over f >= 0 with E f = 1.

    Starts: the constant 1, f_alpha when the girth is odd, then random
    non-negative tables. Moves are projected back by clipping at 0 and
    rescaling the mean to 1.
    """
    rng = np.random.default_rng(seed)
    q, k = system.q, system.k

    def project(f):
        v = np.maximum(f.values.real, 0.0)
        mean = v.mean()
        return FunctionOnG(v / mean if mean > 0 else np.ones_like(v), f.q, f.n)

    def objective(fs):
        f = fs[0]
        return -(density(system, f).real - f.mean().real ** k)

    starts = [FunctionOnG.constant(1.0, q, n)]
    try:
        starts.append(odd_girth_falsifier(system, n=n)[0])
    except (NotApplicable, SearchFailed, BudgetExceeded):
        pass
    best_gap, best_f = math.inf, starts[0]
    for trial in range(max(trials, len(starts))):
        f = starts[trial] if trial < len(starts) else project(_random_function(rng, q, n, True))
        fs, value = _ascend(objective, [f], rng, steps, 0.25, project) if trial > 0 else ([f], objective([f]))
        if -value < best_gap:
            best_gap, best_f = -value, fs[0]
    certified = False
    if best_gap < -margin:
        gd = t_direct(system, best_f).real - best_f.mean().real ** k
        gf = t_fourier(system, best_f).real - best_f.mean().real ** k
        certified = max(gd, gf) < -margin
    return SidorenkoWitness(best_gap, best_f, certified, {"trials": trials, "seed": seed, "n": n, "steps": steps})


# --- rank <= 2 classification ----------------------------------------------


@dataclass(frozen=True)
class Rank2Class:
    tag: str
    r: int | None = None
    permutation: tuple[int, ...] | None = None

    @property
    def label(self) -> str:
        return f"{self.tag}({self.r})" if self.r is not None else self.tag


def classify_rank_le2(system: LinearSystem) -> Rank2Class:
    """Place a system of rank at most 2 among the weakly norming families."""
    if system.m > 2:
        raise RankTooHigh(f"classifier handles m <= 2, got m={system.m}")
    q, k = system.q, system.k
    if system.m == 0:
        return Rank2Class("unknown")
    if system.m == 1:
        row = system.array[0]
        ok, _ = is_schatten_vector(row, q)
        if ok and np.all(row % q):
            return Rank2Class("single_schatten", k // 2)
        return Rank2Class("not_weakly_norming")
    candidates = []
    if k == 3:
        candidates.append(("L3_triple_equal", None, triple_equal(q)))
    if k % 4 == 0:
        candidates.append(("disjoint_pair", k // 4, disjoint_pair(k // 4, q)))
    if k % 6 == 0:
        candidates.append(("triple_schatten", k // 6, triple_schatten(k // 6, q)))
    for tag, r, template in candidates:
        sigma = isomorphism(system, template)
        if sigma is not None:
            return Rank2Class(tag, r, sigma)
    return Rank2Class("not_weakly_norming")


# --- complex patterns ------------------------------------------------------


@dataclass
class AlphaScreen:
    survivors: list
    eliminated: dict
    trials: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "survivors": [list(a) for a in self.survivors],
            "eliminated": {"".join(map(str, a)): v for a, v in sorted(self.eliminated.items())},
            "trials": self.trials,
            "seed": self.seed,
        }


def _conj_spectrum(s: SpectrumOnG) -> SpectrumOnG:
    """Spectrum of conj(f): xi -> conj(f_hat(-xi))."""
    d = group_digits(s.q, s.n)
    w = s.q ** np.arange(s.n, dtype=np.int64)
    neg = ((-d) % s.q) @ w
    return SpectrumOnG(np.conj(s.coefficients[neg]), s.q, s.n)


def complex_alpha_screen(
    system: LinearSystem,
    trials: int = 1000,
    seed: int = 0,
    n: int = 1,
    tol: float = 1e-9,
    max_k: int = 12,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> AlphaScreen:
    """Triangle-inequality probes for |t_{L,alpha}|^(1/k) over every pattern alpha.

    A pattern is eliminated at the first probe (f, g) with
    |t(f+g)|^(1/k) > |t(f)|^(1/k) + |t(g)|^(1/k) + tol; the rest survive.
    Surviving is evidence, not a proof.
    """
    k, q = system.k, system.q
    if k > max_k:
        raise BudgetExceeded(f"2^{k} patterns exceeds the k <= {max_k} guard")
    rng = np.random.default_rng(seed)
    patterns = list(all_patterns(k))
    alive = {a: True for a in patterns}
    eliminated: dict = {}

    def value(spec, cspec, alpha):
        chosen = [spec if a else cspec for a in alpha]
        return abs(t_spectral(system, chosen, budget)) ** (1.0 / k)

    for trial in range(trials):
        f = FunctionOnG.random_complex(rng, q, n)
        g = FunctionOnG.random_complex(rng, q, n)
        if trial % 2:
            g = g * float(rng.uniform(0.0, 0.5))
        specs = [fourier(h) for h in (f, g, f + g)]
        cspecs = [_conj_spectrum(s) for s in specs]
        for alpha in patterns:
            if not alive[alpha]:
                continue
            vf, vg, vs = (value(s, c, alpha) for s, c in zip(specs, cspecs))
            if vs > vf + vg + tol:
                alive[alpha] = False
                eliminated[alpha] = trial
    survivors = [a for a in patterns if alive[a]]
    return AlphaScreen(survivors, eliminated, trials, seed)


# --- row-space statistic ---------------------------------------------------


def _dual_points(q: int, n: int, m: int) -> np.ndarray:
    """All gamma in (F_q^n)^m as an (q^(nm), m, n) array of digits."""
    size = q**n
    digits = group_digits(q, n)
    idx = np.arange(size**m, dtype=np.int64)
    return np.stack([digits[(idx // size**c) % size] for c in range(m)], axis=1)


def character_functions(l_sys: LinearSystem, gamma: np.ndarray, n: int) -> list[FunctionOnG]:
    """f_j with spectrum the indicator of L_j^t gamma, i.e. the character e(eta_j . x)."""
    q = l_sys.q
    w = q ** np.arange(n, dtype=np.int64)
    eta = (l_sys.array.T @ gamma) % q
    return [FunctionOnG.character(int(e @ w), q, n) for e in eta]


def rowspace_count(l_sys: LinearSystem, m_sys: LinearSystem, gamma: np.ndarray, n: int) -> int:
    """#{xi in (F_q^n)^m : M^t xi = L^t gamma} by enumeration."""
    q = l_sys.q
    target = (l_sys.array.T @ gamma) % q
    xs = _dual_points(q, n, m_sys.m)
    images = np.einsum("km,smn->skn", m_sys.array.T, xs) % q
    return int(np.sum(np.all(images == target[None], axis=(1, 2))))


@dataclass
class StatisticCheck:
    matches: int
    samples: int
    aggregate: int
    expected_aggregate: int
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.matches == self.samples and self.aggregate == self.expected_aggregate


def isomorphism_statistic_crosscheck(
    l_sys: LinearSystem,
    m_sys: LinearSystem,
    n: int = 1,
    samples: int | None = None,
    seed: int = 0,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> StatisticCheck:
    """Compare t_M(f^(gamma)) with the exact count, and aggregate over all gamma.

    ``samples`` gammas are drawn at random (all of them when None); the
    aggregate always runs over every gamma and must equal
    :func:`image_intersection_count`.
    """
    q, m = l_sys.q, l_sys.m
    if (m_sys.q, m_sys.m, m_sys.k) != (q, m, l_sys.k):
        raise ValueError("L and M must share q, m and k")
    gammas = _dual_points(q, n, m)
    if gammas.shape[0] ** 2 > budget:
        raise BudgetExceeded("gamma x xi enumeration exceeds budget")
    rng = np.random.default_rng(seed)
    chosen = range(len(gammas)) if samples is None else rng.integers(len(gammas), size=samples)
    matches, mismatches, total = 0, [], 0
    for gi in chosen:
        gamma = gammas[int(gi)]
        t = t_direct(m_sys, character_functions(l_sys, gamma, n), budget)
        count = rowspace_count(l_sys, m_sys, gamma, n)
        rounded = int(round(t.real))
        if rounded == count and abs(t - rounded) < 1e-6:
            matches += 1
        else:
            mismatches.append({"gamma": _as_int_list(gamma), "t": [t.real, t.imag], "count": count})
    total = sum(rowspace_count(l_sys, m_sys, g, n) for g in gammas)
    expected = image_intersection_count(l_sys, m_sys, n)
    n_samples = len(gammas) if samples is None else samples
    return StatisticCheck(matches, n_samples, total, expected, mismatches)


# --- the full suite ----------------------------------------------------------


@dataclass
class RunOptions:
    target: str = "weak"
    seed: int = 0
    n: int = 1
    holder_trials: int = 200
    sidorenko_trials: int = 10
    rowspace_budget: int = DEFAULT_ROWSPACE_BUDGET
    node_budget: int = 10**6


def _holder_check(system: LinearSystem, opts: RunOptions) -> CheckResult:
    nonneg = opts.target != "norming"
    params = {"trials": opts.holder_trials, "n": opts.n, "nonneg": nonneg, "seed": opts.seed}
    try:
        seeded = None
        try:
            w = schatten_falsifier(system, n=opts.n, budget=opts.rowspace_budget)
            seeded = w.functions
        except (NotApplicable, SearchFailed):
            pass
        res = holder_search(system, opts.holder_trials, opts.seed, opts.n, nonneg, ascent_steps=20, start=seeded)
    except BudgetExceeded as exc:
        return CheckResult("holder_sample", INCONCLUSIVE, params=params, note=str(exc))
    witness = {"ratio": res.ratio}
    if res.certified:
        return CheckResult("holder_sample", FAIL, witness, params, res.functions)
    return CheckResult("holder_sample", PASS, witness, params)


def _sidorenko_check(system: LinearSystem, opts: RunOptions) -> CheckResult:
    params = {"trials": opts.sidorenko_trials, "n": opts.n, "seed": opts.seed}
    try:
        res = sidorenko_search(system, opts.sidorenko_trials, opts.seed, opts.n)
    except BudgetExceeded as exc:
        return CheckResult("sidorenko_search", INCONCLUSIVE, params=params, note=str(exc))
    witness = {"gap": res.gap}
    if res.certified:
        return CheckResult("sidorenko_search", FAIL, witness, params, [res.function])
    return CheckResult("sidorenko_search", PASS, witness, params)


def run_checks(system: LinearSystem, opts: RunOptions | None = None) -> CheckReport:
    """Run the necessary-condition suite in a fixed order.

    The zero matrix is detected first; the remaining checks are then skipped
    because every quantity they test is degenerate.
    """
    opts = opts or RunOptions()
    if opts.target not in ("weak", "norming"):
        raise ValueError("target must be 'weak' or 'norming'")
    report = CheckReport(system, opts.target, opts.seed)
    report.results.append(check_zero_matrix(system, opts.target))
    if system.is_zero():
        for name in CHECK_ORDER[1:]:
            report.results.append(CheckResult(name, SKIPPED, note="zero matrix"))
        return report
    report.results.append(check_translation_invariance(system, opts.n))
    report.results.append(check_zero_column(system))
    report.results.append(check_even_girth(system, opts.n, opts.rowspace_budget))
    report.results.append(check_even_k(system, opts.target))
    report.results.append(schatten_census(system, opts.rowspace_budget))
    report.results.append(variable_transitivity_check(system, opts.node_budget))
    report.results.append(component_isomorphism_check(system, opts.rowspace_budget))
    report.results.append(_holder_check(system, opts))
    report.results.append(_sidorenko_check(system, opts))
    return report


__all__ = [
    "AlphaScreen",
    "CheckReport",
    "CheckResult",
    "ForcingResult",
    "HolderWitness",
    "Rank2Class",
    "RunOptions",
    "SidorenkoWitness",
    "StatisticCheck",
    "check_even_girth",
    "check_even_k",
    "check_translation_invariance",
    "check_zero_column",
    "check_zero_matrix",
    "classify_rank_le2",
    "complex_alpha_screen",
    "component_isomorphism_check",
    "forcing_gap",
    "forcing_witness_single_eq",
    "holder_ratio",
    "holder_sample",
    "holder_search",
    "isomorphism_statistic_crosscheck",
    "odd_girth_falsifier",
    "run_checks",
    "schatten_census",
    "schatten_falsifier",
    "schatten_functions",
    "sidorenko_search",
    "variable_transitivity_check",
]
