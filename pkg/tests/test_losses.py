import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subsetsel import SquaredLoss

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


def test_squared_conj_examples():
    loss = SquaredLoss()
    assert loss.conj(0.0, 3.0) == 0.0
    assert loss.conj(1.0, 1.0) == 1.5
    assert loss.conj(-2.0, 0.5) == 1.0


def test_squared_dual_from_fit_examples():
    loss = SquaredLoss()
    assert loss.dual_from_fit(0.0, 1.0) == -1.0
    assert loss.dual_from_fit(2.0, 0.5) == 1.5
    assert loss.dual_from_fit(0.7, 0.7) == 0.0


def test_squared_eval_and_constants():
    loss = SquaredLoss()
    assert loss.eval(1.0, 3.0) == 2.0
    assert loss.mu == 1.0
    assert loss.project_feasible(-7.3) == -7.3
    assert loss.supports_primal_cd


@given(u=finite, y=finite)
@settings(max_examples=200, deadline=None)
def test_deriv_conj_deriv_inverse(u, y):
    loss = SquaredLoss()
    assert loss.conj_deriv(loss.deriv(u, y), y) == pytest.approx(u, abs=1e-10)


@given(u=finite, y=finite)
@settings(max_examples=200, deadline=None)
def test_conj_deriv_dual_from_fit_roundtrip(u, y):
    # exact in real arithmetic; (u - y) + y rounds once in floats
    loss = SquaredLoss()
    assert loss.conj_deriv(loss.dual_from_fit(u, y), y) == pytest.approx(u, rel=1e-12, abs=1e-12)


def test_fenchel_young_grid():
    # conj(a,y) + eval(u,y) >= a*u, equality iff a = deriv(u,y)
    loss = SquaredLoss()
    y = 0.7
    us = np.linspace(-5, 5, 100)
    avs = np.linspace(-5, 5, 100)
    for u in us:
        lhs = np.array([loss.conj(a, y) + loss.eval(u, y) - a * u for a in avs])
        assert (lhs >= -1e-12).all()
        a_star = loss.deriv(u, y)
        assert loss.conj(a_star, y) + loss.eval(u, y) - a_star * u == pytest.approx(0.0, abs=1e-12)


def test_vectorized_hooks_match_scalar_loops(rng):
    loss = SquaredLoss()
    u = rng.normal(size=40)
    a = rng.normal(size=40)
    y = rng.normal(size=40)
    assert loss.eval_sum(u, y) == pytest.approx(sum(loss.eval(ui, yi) for ui, yi in zip(u, y)))
    assert loss.conj_sum(a, y) == pytest.approx(sum(loss.conj(ai, yi) for ai, yi in zip(a, y)))
    np.testing.assert_allclose(loss.deriv_vec(u, y), [loss.deriv(ui, yi) for ui, yi in zip(u, y)])
    np.testing.assert_allclose(
        loss.conj_deriv_vec(a, y), [loss.conj_deriv(ai, yi) for ai, yi in zip(a, y)]
    )
    np.testing.assert_array_equal(loss.project_vec(a), a)
    np.testing.assert_allclose(
        loss.dual_from_fit_vec(u, y), [loss.dual_from_fit(ui, yi) for ui, yi in zip(u, y)]
    )
