import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csiszar import divergence as dv
from csiszar.core_functions import CoreFunction, catalog_lookup
from csiszar.errors import DomainError, IndeterminateFormError

L = catalog_lookup
CONVEX = ("kl", "tv", "hellinger", "chi2")


def brute(f, p, q):
    return sum(qj * f(pj / qj) for pj, qj in zip(p, q))


def test_examples():
    assert dv.csiszar_divergence(L("chi2"), [1, 2], [1, 1]).value == 1.0
    assert dv.csiszar_divergence(L("kl"), [0.5, 0.5], [0.5, 0.5]).value == 0.0
    kl = dv.csiszar_divergence(L("kl"), [0.5, 0.5], [0.25, 0.75]).value
    assert kl == pytest.approx(0.5 * math.log(2) + 0.5 * math.log(2 / 3), rel=1e-14)
    assert kl == pytest.approx(0.143841036, rel=1e-8)


def test_p_over_zero_convention():
    v = dv.csiszar_divergence(L("chi2"), [1, 1], [1, 0])
    assert v.value == math.inf and v.flags == {dv.P_OVER_ZERO}
    v = dv.csiszar_divergence(L("tv"), [1, 2], [1, 0])
    assert v.value == 2.0


def test_zero_over_zero_and_limit_conventions():
    v = dv.csiszar_divergence(L("kl"), [0, 1], [0, 1])
    assert v.value == 0.0 and v.flags == {dv.ZERO_OVER_ZERO}
    v = dv.csiszar_divergence(L("hellinger"), [0, 1], [2, 1])
    assert v.value == 4.0 and v.flags == {dv.F_AT_ZERO}
    v = dv.csiszar_divergence(L("hellinger"), [0, 0, 3], [2, 0, 0])
    assert v.flags == {dv.F_AT_ZERO, dv.ZERO_OVER_ZERO, dv.P_OVER_ZERO}
    assert v.value == 2 * 2 + 0 + 3 * 2


def test_missing_limit_is_an_error():
    with pytest.raises(DomainError):
        dv.csiszar_divergence(L("mobius"), [1, 1], [1, 0])


def test_indeterminate_sum():
    f = CoreFunction(lambda t: np.log(t), (0.0, math.inf), -math.inf, math.inf, "ln")
    with pytest.raises(IndeterminateFormError):
        dv.csiszar_divergence(f, [0, 1], [1, 0])


def test_input_validation():
    with pytest.raises(DomainError):
        dv.csiszar_divergence(L("kl"), [1, 2], [1])
    with pytest.raises(DomainError):
        dv.csiszar_divergence(L("kl"), [-1, 2], [1, 1])
    with pytest.raises(DomainError):
        dv.csiszar_divergence(L("kl"), [math.nan], [1])
    with pytest.raises(DomainError):
        dv.as_positive_tuple([0, 0])


def test_perspective_examples():
    assert dv.perspective(L("kl"), 1, 1) == 0.0
    assert dv.perspective(L("kl"), 2, 1) == pytest.approx(2 * math.log(2), rel=1e-15)
    assert dv.perspective(L("hellinger"), 0, 3) == 6.0
    g = dv.Perspective(L("kl"))
    assert g(2, 1) == dv.perspective(L("kl"), 2, 1) and g.core.name == "kl"


def test_named():
    assert dv.named("hellinger", [4, 1], [1, 1]).value == 2.0
    assert dv.named("tv", [0.2, 0.8], [0.8, 0.2]).value == pytest.approx(1.2, rel=1e-15)
    assert dv.named("renyi_rho", [0.5, 0.5], [0.5, 0.5], alpha=0.5).value == 1.0
    r = dv.named("renyi_R", [0.5, 0.5], [0.25, 0.75], alpha=0.5)
    rho = dv.named("renyi_rho", [0.5, 0.5], [0.25, 0.75], alpha=0.5).value
    assert r.value == pytest.approx(math.log(rho) / (0.5 * -0.5), rel=1e-14)
    with pytest.raises(DomainError):
        dv.named("renyi_R", [1], [1], alpha=1.0)
    with pytest.raises(KeyError):
        dv.named("bogus", [1], [1])


def test_tuple_sum():
    assert dv.tuple_sum([1, 2, 3]) == 6
    assert dv.tuple_sum([0.5]) == 0.5
    assert dv.tuple_sum([0, 0, 5]) == 5


def test_kahan_beats_naive_sum():
    vals = [1.0] + [1e-16] * 10_000
    assert dv.tuple_sum(vals) == pytest.approx(1.0 + 1e-12, rel=1e-15)


def probability(n):
    return st.lists(st.floats(1e-6, 1.0), min_size=n, max_size=n).map(lambda v: np.array(v) / sum(v))


@given(st.integers(2, 8).flatmap(lambda n: st.tuples(probability(n), probability(n))))
def test_nonnegativity_on_probability_vectors(pq):
    p, q = pq
    for name in CONVEX:
        assert dv.csiszar_divergence(L(name), p, q).value >= -1e-12
        assert abs(dv.csiszar_divergence(L(name), p, p).value) <= 1e-12


positive = st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=8)


@given(positive.flatmap(lambda p: st.tuples(st.just(p), st.lists(st.floats(1e-3, 1e3), min_size=len(p), max_size=len(p)))),
       st.sampled_from(CONVEX))
def test_subadditivity(pq, name):
    p, q = pq
    f = L(name)
    whole = dv.perspective(f, sum(p), sum(q))
    parts = dv.csiszar_divergence(f, p, q).value
    assert whole <= parts + 1e-9 * max(abs(whole), abs(parts), 1.0)
    assert parts == pytest.approx(brute(f, p, q), rel=1e-10, abs=1e-10)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.sampled_from(CONVEX))
def test_perspective_homogeneity(x, y, c, name):
    f = L(name)
    assert dv.perspective(f, c * x, c * y) == pytest.approx(c * dv.perspective(f, x, y), rel=1e-12, abs=1e-300)


@given(st.lists(st.sampled_from(["both", "p0", "q0", "zz"]), min_size=1, max_size=6))
def test_flags_follow_term_pattern(pattern):
    p = [{"both": 1.0, "p0": 0.0, "q0": 2.0, "zz": 0.0}[k] for k in pattern]
    q = [{"both": 3.0, "p0": 1.0, "q0": 0.0, "zz": 0.0}[k] for k in pattern]
    if not any(p) and not any(q):
        return
    flags = dv.csiszar_divergence(L("tv"), p, q).flags
    expected = set()
    if "p0" in pattern:
        expected.add(dv.F_AT_ZERO)
    if "q0" in pattern:
        expected.add(dv.P_OVER_ZERO)
    if "zz" in pattern:
        expected.add(dv.ZERO_OVER_ZERO)
    assert flags == expected


def test_batch_matches_scalar():
    rng = np.random.default_rng(0)
    p = rng.uniform(0.1, 5, (20, 6))
    q = rng.uniform(0.1, 5, (20, 6))
    for name in CONVEX:
        batch = dv.csiszar_divergence_batch(L(name), p, q)
        single = [dv.csiszar_divergence(L(name), a, b).value for a, b in zip(p, q)]
        assert batch.tolist() == single


def test_subadditivity_suite_small_and_deterministic():
    a = dv.subadditivity_suite(trials=2000, seed=5)
    b = dv.subadditivity_suite(trials=2000, seed=5, jobs=3)
    assert [r.violations for r in a] == [0, 0, 0, 0]
    assert a == b
