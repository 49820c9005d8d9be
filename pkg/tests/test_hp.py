import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from boostedhp.errors import DataError, DimensionError, InvalidLengthError, ParameterError
from boostedhp.hp import (
    SmootherSpec,
    _factor,
    apply_residual,
    apply_smoother,
    build_penalty_operator,
    hp_smooth,
    penalty_spectrum,
    second_difference_matrix,
    smoother_traces,
)

from oracles import dense_penalty, dense_residual_power, dense_smoother

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def series(min_size=5, max_size=60):
    return st.integers(min_size, max_size).flatmap(lambda n: arrays(np.float64, n, elements=finite))


class TestPenaltyOperator:
    def test_n5_rows(self):
        op = build_penalty_operator(5)
        np.testing.assert_array_equal(op.row(2), [1, -4, 6, -4, 1])
        np.testing.assert_array_equal(op.row(0), [1, -2, 1, 0, 0])

    @pytest.mark.parametrize("n", [5, 6, 10, 30, 60])
    def test_matches_dense_composition(self, n):
        op = build_penalty_operator(n)
        d = second_difference_matrix(n)
        np.testing.assert_array_equal(op.dense(), d.T @ d)
        np.testing.assert_array_equal(op.dense(), dense_penalty(n))

    @pytest.mark.parametrize("n", [5, 9, 50, 400])
    def test_linear_null_space(self, n):
        op = build_penalty_operator(n)
        t = np.arange(1.0, n + 1)
        np.testing.assert_array_equal(op.matvec(t), 0.0)
        np.testing.assert_array_equal(op.matvec(np.ones(n)), 0.0)

    @pytest.mark.parametrize("n", [10, 50])
    def test_interior_stencil(self, n):
        dense = build_penalty_operator(n).dense()
        for i in range(2, n - 2):
            np.testing.assert_array_equal(dense[i, i - 2 : i + 3], [1, -4, 6, -4, 1])

    @pytest.mark.parametrize("n", [0, 3, 4])
    def test_too_short(self, n):
        with pytest.raises(InvalidLengthError):
            build_penalty_operator(n)

    def test_cached_bands_read_only(self):
        op = build_penalty_operator(12)
        assert build_penalty_operator(12) is op
        with pytest.raises(ValueError):
            op.bands[0, 0] = 3.0


class TestHPSmooth:
    def test_dense_example(self):
        y = np.array([1.0, -1.0, 2.0, -2.0, 3.0])
        res = hp_smooth(y, 1.0)
        expected = np.linalg.inv(np.eye(5) + dense_penalty(5)) @ y
        np.testing.assert_allclose(res.trend, expected, rtol=1e-12, atol=1e-14)
        assert res.method == "HP" and res.iterations == 1

    @pytest.mark.parametrize("n", [5, 10, 30, 60])
    @pytest.mark.parametrize("lam", [1.0, 1600.0, 129600.0])
    def test_dense_oracle(self, n, lam, rng):
        y = rng.standard_normal(n).cumsum()
        res = hp_smooth(y, lam)
        expected = dense_smoother(n, lam) @ y
        np.testing.assert_allclose(res.trend, expected, rtol=1e-9, atol=1e-9 * np.abs(y).max())

    @pytest.mark.parametrize("lam", [0.0, 1.0, 1600.0, 1e8])
    def test_constant_passes_through(self, lam):
        y = np.full(40, 3.7)
        res = hp_smooth(y, lam)
        np.testing.assert_array_equal(res.cycle, 0.0)
        np.testing.assert_array_equal(res.trend, y)

    def test_linear_exact_zero_cycle(self):
        y = np.arange(1.0, 101.0)
        np.testing.assert_array_equal(hp_smooth(y, 1600).cycle, 0.0)

    @given(a=finite, b=st.floats(-10, 10), n=st.integers(5, 200), lam=st.floats(0, 1e6))
    def test_affine_pass_through(self, a, b, n, lam):
        y = a + b * np.arange(1, n + 1)
        res = hp_smooth(y, lam)
        assert np.max(np.abs(res.cycle)) <= 1e-10 * max(1.0, np.abs(y).max())

    @given(y=series(), lam=st.floats(0, 1e6))
    def test_additivity(self, y, lam):
        res = hp_smooth(y, lam)
        scale = max(1.0, np.abs(y).max())
        np.testing.assert_allclose(res.trend + res.cycle, y, rtol=0, atol=1e-10 * scale)

    def test_large_lambda_tends_to_ols_line(self, rng):
        n = 40
        y = rng.standard_normal(n) + 0.3 * np.arange(n)
        t = np.arange(1.0, n + 1)
        x = np.column_stack([np.ones(n), t])
        line = x @ np.linalg.lstsq(x, y, rcond=None)[0]
        res = hp_smooth(y, 1e12)
        np.testing.assert_allclose(res.trend, line, rtol=1e-4, atol=1e-4 * np.abs(line).max())

    def test_lambda_zero_identity(self, rng):
        y = rng.standard_normal(12)
        np.testing.assert_array_equal(hp_smooth(y, 0).trend, y)

    @pytest.mark.parametrize(
        "y,err",
        [
            ([1.0, 2.0, np.nan, 4.0, 5.0], DataError),
            ([1.0, 2.0, np.inf, 4.0, 5.0], DataError),
            ([1.0, 2.0, 3.0, 4.0], InvalidLengthError),
            (np.ones((5, 2)), DimensionError),
        ],
    )
    def test_invalid_input(self, y, err):
        with pytest.raises(err):
            hp_smooth(y, 1600)

    def test_negative_lambda(self):
        with pytest.raises(ParameterError):
            hp_smooth(np.ones(10), -1.0)


class TestSmoother:
    def test_dense_example_n6(self, rng):
        v = rng.standard_normal(6)
        out = apply_smoother(SmootherSpec(2.0, 6), v)
        np.testing.assert_allclose(out, np.linalg.solve(np.eye(6) + 2.0 * dense_penalty(6), v), rtol=1e-12)

    def test_linear_fixed_point(self):
        t = np.arange(1.0, 21.0)
        np.testing.assert_allclose(apply_smoother(SmootherSpec(50.0, 20), t), t, rtol=1e-12)

    def test_lambda_zero(self, rng):
        v = rng.standard_normal(8)
        np.testing.assert_array_equal(apply_smoother(SmootherSpec(0.0, 8), v), v)
        np.testing.assert_array_equal(apply_residual(SmootherSpec(0.0, 8), v), 0.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            apply_smoother(SmootherSpec(1.0, 8), np.ones(9))

    def test_factor_cached(self):
        _factor.cache_clear()
        spec = SmootherSpec(77.0, 33)
        for _ in range(5):
            apply_smoother(spec, np.ones(33))
        info = _factor.cache_info()
        assert info.misses == 1 and info.hits == 4

    @pytest.mark.parametrize("n", [5, 20, 50])
    def test_dense_reconstruction_symmetric_psd(self, n):
        spec = SmootherSpec(1600.0, n)
        s = np.column_stack([apply_smoother(spec, e) for e in np.eye(n)])
        np.testing.assert_allclose(s, s.T, atol=1e-12)
        eig = np.linalg.eigvalsh(s)
        assert eig.min() > 0 and eig.max() <= 1 + 1e-12
        assert np.sum(np.isclose(eig, 1.0, atol=1e-9)) == 2

    @pytest.mark.parametrize("n", [5, 10, 30, 60])
    @pytest.mark.parametrize("m", [1, 2, 5])
    def test_residual_power_matches_dense(self, n, m, rng):
        lam = 1600.0
        v = rng.standard_normal(n)
        out = v
        spec = SmootherSpec(lam, n)
        for _ in range(m):
            out = apply_residual(spec, out)
        np.testing.assert_allclose(out, dense_residual_power(n, lam, m) @ v, rtol=1e-9, atol=1e-9)


class TestSpectrum:
    def test_n5(self):
        eig = penalty_spectrum(5).eigenvalues
        assert np.count_nonzero(eig == 0.0) == 2
        assert eig.sum() == pytest.approx(18.0, abs=1e-10)
        assert np.all(np.diff(eig) >= 0)

    @pytest.mark.parametrize("n", [5, 17, 100])
    def test_trace_identity(self, n):
        eig = penalty_spectrum(n).eigenvalues
        assert eig.sum() == pytest.approx(np.trace(dense_penalty(n)), rel=1e-12)
        assert np.all(eig[2:] > 0)

    def test_trace_of_smoother_n30(self):
        lam = 1600.0
        eig = penalty_spectrum(30).eigenvalues
        assert abs(np.sum(1 / (1 + lam * eig)) - np.trace(dense_smoother(30, lam))) < 1e-8

    def test_traces_m1_is_trace_s(self):
        lam = 10.0
        tr = smoother_traces(penalty_spectrum(12), lam, 3)
        assert tr.trace_b[0] == pytest.approx(np.trace(dense_smoother(12, lam)), rel=1e-12)

    def test_traces_dense_power(self):
        n, lam, m = 20, 1600.0, 5
        tr = smoother_traces(penalty_spectrum(n), lam, m)
        dense = np.trace(np.eye(n) - dense_residual_power(n, lam, m))
        assert tr.trace_b[m - 1] == pytest.approx(dense, rel=1e-10)
        assert tr.trace_resid == pytest.approx(np.trace(np.eye(n) - dense_smoother(n, lam)), rel=1e-10)

    def test_traces_monotone_and_limit(self):
        n = 8
        tr = smoother_traces(penalty_spectrum(n), 5.0, 2000)
        assert np.all(np.diff(tr.trace_b) > 0) or np.allclose(tr.trace_b[-1], n)
        # the two null directions keep eigenvalue 1 in B_m, so the limit is n
        assert abs(tr.trace_b[-1] - n) < 1e-6

    def test_traces_need_positive_lambda(self):
        with pytest.raises(ParameterError):
            smoother_traces(penalty_spectrum(10), 0.0, 3)
