import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csiszar import matrix_jensen as mj
from csiszar._sampling import random_unit
from csiszar.core_functions import catalog_lookup
from csiszar.divergence import Perspective
from csiszar.errors import DomainError

L = catalog_lookup
S2 = 1 / math.sqrt(2)


def test_eig_examples():
    sf = mj.eigendecompose(np.diag([3.0, 1.0]))
    assert sf.values.tolist() == [1.0, 3.0]
    np.testing.assert_array_equal(sf.projections[0], np.diag([0.0, 1.0]))
    sf = mj.eigendecompose([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(sf.values, [1.0, 3.0], rtol=1e-14)
    np.testing.assert_allclose(sf.projections[1], 0.5 * np.ones((2, 2)), atol=1e-15)
    np.testing.assert_allclose(sf.projections[0], [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)
    sf = mj.eigendecompose(np.eye(4))
    assert len(sf.clusters) == 1
    np.testing.assert_array_equal(sf.projections[0], np.eye(4))


def test_eig_sign_convention_and_read_only():
    sf = mj.eigendecompose([[2.0, 1.0], [1.0, 2.0]])
    for k in range(2):
        nz = np.flatnonzero(np.abs(sf.vectors[:, k]) > 1e-14)
        assert sf.vectors[nz[0], k] > 0
    with pytest.raises(ValueError):
        sf.eigenvalues[0] = 5.0


def test_eig_validation():
    with pytest.raises(DomainError):
        mj.eigendecompose([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(DomainError):
        mj.eigendecompose([[1.0, 2.0]])
    with pytest.raises(DomainError):
        mj.eigendecompose([[math.nan]])
    with pytest.raises(DomainError):
        mj.eigendecompose(np.eye(65))


def test_matrix_function_examples():
    a = [[2.0, 1.0], [1.0, 2.0]]
    sq = mj.matrix_function(L("power_r", r=2), a)
    np.testing.assert_allclose(sq, np.array(a) @ np.array(a), rtol=1e-13)
    root = mj.matrix_function(L("power_r", r=0.5), a)
    np.testing.assert_allclose(root @ root, a, rtol=1e-13)
    e = mj.matrix_function(L("exp"), np.diag([0.0, 1.0]))
    np.testing.assert_allclose(e, np.diag([1.0, math.e]), rtol=1e-15)
    with pytest.raises(DomainError):
        mj.matrix_function(L("kl"), np.diag([-1.0, 1.0]))


def test_two_variable_product_is_kronecker():
    rng = np.random.default_rng(0)
    a, _, _ = mj.random_symmetric(rng, 3, 0.5, 2)
    b, _, _ = mj.random_symmetric(rng, 2, 0.5, 2)
    got = mj.two_variable_matrix_function(lambda t, s: t * s, a, b)
    np.testing.assert_allclose(got, np.kron(a, b), atol=1e-12)
    got = mj.two_variable_matrix_function(lambda t, s: t + s, a, b)
    np.testing.assert_allclose(got, np.kron(a, np.eye(2)) + np.kron(np.eye(3), b), atol=1e-12)


def test_perspective_with_nonpositive_eigenvalue():
    with pytest.raises(DomainError):
        mj.two_variable_matrix_function(Perspective(L("kl")), np.diag([1.0, 0.0]), np.eye(2))


def test_jensen_examples():
    c = mj.jensen_scalar_form(L("power_r", r=2), "AA", [[2.0, 1.0], [1.0, 2.0]], [1.0, 0.0])
    assert c.lhs == pytest.approx(4.0, rel=1e-14) and c.rhs == pytest.approx(5.0, rel=1e-14)
    # eta an eigenvector: every variant collapses to equality
    for variant in mj.VARIANTS:
        c = mj.jensen_scalar_form(L("exp"), variant, [[2.0, 1.0], [1.0, 2.0]], [S2, S2])
        assert c.lhs == pytest.approx(math.exp(3), rel=1e-12)
        assert c.rhs == pytest.approx(math.exp(3), rel=1e-12)
    c = mj.jensen_scalar_form(L("inv_sqrt"), "AH", np.diag([1.0, 4.0]), [S2, S2])
    assert c.lhs == pytest.approx(1 / math.sqrt(2.5), rel=1e-14)
    assert c.rhs == pytest.approx(1 / (0.5 + 0.5 * 2), rel=1e-14) and c.holds


def test_jensen_validation():
    with pytest.raises(DomainError):
        mj.jensen_scalar_form(L("exp"), "AA", np.eye(2), [1.0, 1.0])
    with pytest.raises(DomainError):
        mj.jensen_scalar_form(L("exp"), "GA", np.diag([-1.0, 1.0]), [1.0, 0.0])
    with pytest.raises(ValueError):
        mj.jensen_scalar_form(L("exp"), "XY", np.eye(2), [1.0, 0.0])


def test_weights_sum_to_one():
    rng = np.random.default_rng(4)
    for n in range(1, 8):
        a, _, _ = mj.random_symmetric(rng, n, -3, 3)
        eta = random_unit(rng, n)
        assert abs(mj.eigendecompose(a).weights(eta).sum() - 1) <= 1e-13


def test_geometric_side_identity():
    # exp <log A eta, eta> equals the eigenvalue-weighted geometric mean
    rng = np.random.default_rng(5)
    a, _, _ = mj.random_symmetric(rng, 5, 0.1, 10)
    eta = random_unit(rng, 5)
    sf = mj.eigendecompose(a)
    w = sf.weights(eta)
    log_a = mj.matrix_function(L("kl"), a) @ np.linalg.inv(a)  # A ln A A^-1 = ln A
    direct = math.exp(float(eta @ log_a @ eta))
    assert direct == pytest.approx(float(np.prod(sf.values ** w)), rel=1e-10)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.sampled_from(mj.VARIANTS))
def test_matches_scalar_oracle(seed, n, variant):
    rng = np.random.default_rng(seed)
    a, _, _ = mj.random_symmetric(rng, n, 0.1, 10)
    eta = random_unit(rng, n)
    m = mj.jensen_scalar_form(L("inv_sqrt"), variant, a, eta)
    s = mj.spectral_scalar_oracle(L("inv_sqrt"), variant, a, eta)
    assert m.lhs == pytest.approx(s.lhs, rel=1e-10)
    assert m.rhs == pytest.approx(s.rhs, rel=1e-10)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_spectral_invariants_hold(seed, n):
    rng = np.random.default_rng(seed)
    a, lam, q = mj.random_symmetric(rng, n, 0.1, 10)
    assert mj.spectral_invariants(a, lam, q, L("kl")).holds


def test_two_variable_examples():
    h = Perspective(L("kl"))
    a, b = np.diag([1.0, 3.0]), np.diag([2.0, 0.5])
    c = mj.jensen_two_variable(h, "separately_convex", a, b, [S2, S2], [S2, S2])
    assert c.lhs == pytest.approx(h(2.0, 1.25), rel=1e-14)
    expected = 0.25 * sum(h(s, t) for s in (1.0, 3.0) for t in (2.0, 0.5))
    assert c.rhs == pytest.approx(expected, rel=1e-13) and c.holds


def test_separately_hh_with_scalar_b():
    h = Perspective(L("power_r", r=0.5))
    rng = np.random.default_rng(8)
    a, _, _ = mj.random_symmetric(rng, 4, 0.1, 10)
    eta = random_unit(rng, 4)
    c = mj.jensen_two_variable(h, "separately_HH", a, [[2.0]], eta, [1.0])
    assert c.holds
    sf = mj.eigendecompose(a)
    v = sf.vectors[:, 0]
    c = mj.jensen_two_variable(h, "separately_HH", a, [[2.0]], v, [1.0])
    assert c.lhs == pytest.approx(c.rhs, rel=1e-10)


def test_mixed_chains():
    rng = np.random.default_rng(9)
    a, _, _ = mj.random_symmetric(rng, 3, 0.1, 10)
    b, _, _ = mj.random_symmetric(rng, 4, 0.1, 10)
    eta, zeta = random_unit(rng, 3), random_unit(rng, 4)
    h = Perspective(L("inv_sqrt"))
    c = mj.jensen_two_variable(h, "AH_first_convex_second", a, b, eta, zeta)
    assert len(c.links) == 3 and c.holds
    c = mj.jensen_two_variable(h, "convex_first_convex_second", a, b, eta, zeta)
    assert len(c.links) == 2 and c.holds
    with pytest.raises(ValueError):
        mj.jensen_two_variable(h, "nope", a, b, eta, zeta)


def test_tensor_power_product_case():
    a, b = np.diag([1.0, 4.0]), np.diag([2.0, 8.0])
    e = [S2, S2]
    for r in (0.0, 0.3, 1.0):
        c = mj.remark_scalar_product_case(r, a, b, e, e)
        # harmonic means of the spectra under equal weights
        ha = 1 / (0.5 / 1 + 0.5 / 4)
        hb = 1 / (0.5 / 2 + 0.5 / 8)
        assert c.lhs == pytest.approx(ha ** r * hb ** (1 - r), rel=1e-13)
        rhs = 0.25 * sum(s ** r * t ** (1 - r) for s in (1, 4) for t in (2, 8))
        assert c.rhs == pytest.approx(rhs, rel=1e-13) and c.holds
    with pytest.raises(DomainError):
        mj.remark_scalar_product_case(1.5, a, b, e, e)


def test_random_symmetric_plants_degeneracy():
    rng = np.random.default_rng(1)
    seen = False
    for _ in range(50):
        a, lam, q = mj.random_symmetric(rng, 6, 0.1, 10)
        if len(set(lam.tolist())) < 6:
            seen = True
            sf = mj.eigendecompose(a)
            assert len(sf.clusters) == len(set(lam.tolist()))
    assert seen


def test_matrix_suite_small():
    r = mj.randomized_matrix_suite(trials=30, seed=2)
    assert r.violations == 0 and r.invariant_failures == 0
    assert {e.suite for e in r.entries} == set(mj.MATRIX_SUITES) | set(mj.TWO_VARIABLE_SUITES)
    r2 = mj.randomized_matrix_suite(trials=30, seed=2, suites={"jensen_AH"}, jobs=2)
    assert [e for e in r.entries if e.suite == "jensen_AH"] == list(r2.entries)
