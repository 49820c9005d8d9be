import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boostedhp.errors import ParameterError
from boostedhp.theory import (
    CUBIC_THRESHOLD,
    SHRINKAGE_THRESHOLD,
    KLBasis,
    empirical_shrinkage_error,
    exponential_shrinkage_check,
    interior_slice,
    max_admissible_k,
    polynomial_annihilation_error,
    residual_power,
    run_checks,
    shrinkage_factor,
    smoother_power,
)

from oracles import dense_residual_power

MU = 1.6e-5


def quiet(fn, *args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args, **kw)


class TestBasis:
    def test_eigenvalues(self):
        assert KLBasis(1, 10).eigenvalue == pytest.approx(4 / math.pi**2)
        assert KLBasis(1, 10).eigenvalue == pytest.approx(0.405285, abs=1e-6)
        assert KLBasis(1, 10).eigenvalue ** 2 == pytest.approx(0.164256, abs=1e-6)
        assert KLBasis(3, 10).eigenvalue == 1 / (2.5 * math.pi) ** 2

    def test_sample(self):
        x = KLBasis(2, 50, "cosine").sample()
        t = np.arange(1, 51)
        np.testing.assert_allclose(x, math.sqrt(2) * np.cos(t * 1.5 * math.pi / 50), rtol=1e-12, atol=1e-14)

    @pytest.mark.parametrize("kw", [dict(k=0, n=5), dict(k=1, n=0), dict(k=1, n=5, kind="tan")])
    def test_invalid(self, kw):
        with pytest.raises(ParameterError):
            KLBasis(**kw)


class TestFactor:
    def test_scalar(self):
        l1 = 4 / math.pi**2
        assert shrinkage_factor(MU, 1, 1) == pytest.approx(MU / (MU + l1**2), rel=1e-14)

    @given(k=st.integers(1, 20), m=st.integers(1, 10), mu=st.floats(1e-8, 1e2))
    def test_range_and_monotone_in_k(self, k, m, mu):
        f = shrinkage_factor(mu, k, m)
        assert 0 <= f < 1
        assert shrinkage_factor(mu, k + 1, m) >= f

    def test_small_mu_limit(self):
        assert shrinkage_factor(1e-300, 1, 3) == pytest.approx(0.0, abs=1e-100)

    def test_mu_positive(self):
        with pytest.raises(ParameterError):
            shrinkage_factor(0.0, 1, 1)


class TestShrinkage:
    @pytest.mark.parametrize("kind", ["sine", "cosine"])
    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("m", [1, 2, 5])
    def test_below_threshold(self, kind, k, m):
        for n in (400, 800):
            chk = quiet(empirical_shrinkage_error, k, n, MU, m, kind)
            assert chk.empirical_sup_error < SHRINKAGE_THRESHOLD
            assert 0 <= chk.predicted_factor < 1

    def test_flag_outside_admissible_range(self):
        with pytest.warns(UserWarning):
            chk = empirical_shrinkage_error(3, 400, MU, 1)
        assert not chk.within_bound

    def test_admissible_bound(self):
        assert max_admissible_k(400) == 1
        assert max_admissible_k(10**6) == 1
        assert max_admissible_k(10**30) == 3

    @pytest.mark.parametrize("m", [1, 2, 5])
    def test_constant_annihilated(self, m):
        assert np.array_equal(residual_power(np.ones(400), MU * 400.0**4, m), np.zeros(400))

    @pytest.mark.parametrize("n", [5, 10, 30, 60])
    @pytest.mark.parametrize("m", [1, 3])
    def test_composition_matches_dense_power(self, n, m):
        x = KLBasis(1, n).sample()
        lam = MU * float(n) ** 4
        np.testing.assert_allclose(residual_power(x, lam, m), dense_residual_power(n, lam, m) @ x, rtol=1e-9, atol=1e-9)

    def test_interior_slice(self):
        s = interior_slice(400, 0.6)
        assert (s.start, s.stop) == (80, 320)
        assert interior_slice(10, 1.0) == slice(0, 10)
        with pytest.raises(ParameterError):
            interior_slice(10, 0.0)


class TestExponential:
    def test_c0_exact(self):
        chk = exponential_shrinkage_check(0.0, 200, MU)
        assert chk.predicted_factor == 1.0 and chk.empirical_sup_error == 0.0

    @pytest.mark.parametrize("c", [-3.0, 3.0])
    def test_below_threshold(self, c):
        for n in (400, 800):
            assert exponential_shrinkage_check(c, n, MU).empirical_sup_error < 0.05

    def test_symmetric_factor(self):
        a = exponential_shrinkage_check(3.0, 100, MU)
        b = exponential_shrinkage_check(-3.0, 100, MU)
        assert a.predicted_factor == b.predicted_factor

    def test_large_c_warns(self):
        with pytest.warns(UserWarning):
            exponential_shrinkage_check(8.0, 100, MU)

    def test_smoother_power(self):
        x = np.exp(np.arange(1, 31) / 30)
        s1 = smoother_power(x, 50.0, 1)
        np.testing.assert_allclose(s1 + residual_power(x, 50.0, 1), x, rtol=1e-12)
        np.testing.assert_allclose(smoother_power(x, 50.0, 2), smoother_power(s1, 50.0, 1), rtol=1e-15)


def lam_rule(n):
    return 1600.0 * (n / 100.0) ** 4


class TestPolynomial:
    @pytest.mark.parametrize("d", [0, 1])
    @pytest.mark.parametrize("m", [1, 2, 5])
    @pytest.mark.parametrize("n", [50, 400])
    def test_exact_low_degree(self, d, m, n):
        assert polynomial_annihilation_error(d, n, lam_rule(n), m) <= 1e-12

    def test_cubic_threshold(self):
        assert polynomial_annihilation_error(3, 400, lam_rule(400), 1) < CUBIC_THRESHOLD
        assert polynomial_annihilation_error(3, 800, lam_rule(800), 1) < CUBIC_THRESHOLD

    def test_degree_seven_comparative(self):
        e1 = polynomial_annihilation_error(7, 400, lam_rule(400), 1)
        e2 = polynomial_annihilation_error(7, 400, lam_rule(400), 2)
        assert e2 < e1

    def test_negative_degree(self):
        with pytest.raises(ParameterError):
            polynomial_annihilation_error(-1, 10, 1.0)


def test_run_checks_grid():
    rows = run_checks(n=100)
    kinds = {r["check"] for r in rows}
    assert kinds == {"shrinkage_sine", "shrinkage_cosine", "exponential", "polynomial", "polynomial_degree_7"}
    assert len([r for r in rows if r["check"].startswith("shrinkage")]) == 18
