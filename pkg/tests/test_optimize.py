"""Tests for the maximizers and the adaptive quadrature."""

import math

import pytest

from wyner_rates.optimize import (
    AccuracyError,
    EvaluationError,
    integrate_1d,
    integrate_2d,
    maximize_scalar,
    maximize_simplex,
)


def test_scalar_quadratic():
    res = maximize_scalar(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, tol=1e-6)
    assert abs(res.argmax - 0.3) < 1e-6
    assert res.value <= 0.0


def test_scalar_constant():
    res = maximize_scalar(lambda x: 2.5, 0.0, 1.0)
    assert res.value == 2.5


def test_scalar_never_below_grid():
    # Multi-modal objective: result must match the best of the 64-point grid.
    f = lambda x: math.sin(40.0 * x) + 0.2 * x
    res = maximize_scalar(f, 0.0, 1.0, tol=1e-6)
    grid_best = max(f(i / 63.0) for i in range(64))
    assert res.value >= grid_best - 1e-12


def test_scalar_rejects_nan():
    with pytest.raises(EvaluationError):
        maximize_scalar(lambda x: float("nan"), 0.0, 1.0)
    with pytest.raises(ValueError):
        maximize_scalar(lambda x: x, 1.0, 0.0)


def test_simplex_linear_hits_vertex():
    res = maximize_simplex(lambda w: 1.0 * w[0] + 3.0 * w[2], 3, budget=200)
    assert res.value > 3.0 - 1e-6
    assert abs(res.argmax[2] - 1.0) < 1e-6


def test_simplex_symmetric_concave():
    res = maximize_simplex(lambda w: -sum(x * x for x in w), 3, budget=300)
    assert res.value > -1.0 / 3.0 - 1e-4
    for x in res.argmax:
        assert abs(x - 1.0 / 3.0) < 2e-2


def test_simplex_dim_one_and_guard():
    res = maximize_simplex(lambda w: w[0], 1)
    assert res.argmax == (1.0,)
    with pytest.raises(ValueError):
        maximize_simplex(lambda w: 0.0, 0)
    with pytest.raises(ValueError):
        maximize_simplex(lambda w: 0.0, 33)


def test_simplex_deterministic():
    f = lambda w: -((w[0] - 0.2) ** 2 + (w[1] - 0.5) ** 2)
    a = maximize_simplex(f, 3, budget=250)
    b = maximize_simplex(f, 3, budget=250)
    assert a.argmax == b.argmax and a.value == b.value


def test_quadrature_basics():
    assert abs(integrate_1d(lambda t: 1.0, 0.0, 1.0) - 1.0) < 1e-12
    assert abs(integrate_1d(lambda t: math.cos(2 * math.pi * t), 0.0, 1.0)) < 1e-10
    assert abs(integrate_1d(lambda t: t * t, 0.0, 1.0) - 1.0 / 3.0) < 1e-10
    assert abs(integrate_2d(lambda u, v: u + v) - 1.0) < 1e-8


def test_quadrature_depth_guard():
    # A step discontinuity at an irrational point defeats the error estimate
    # at extreme tolerance and must raise rather than return silently.
    c = 1.0 / math.sqrt(2.0)
    with pytest.raises(AccuracyError):
        integrate_1d(lambda t: 0.0 if t < c else 1.0, 0.0, 1.0, tol=1e-300)


def test_quadrature_wyner_integrand_consistency():
    # Refinement consistency on the bound integrand family.
    f = lambda t: 0.5 * math.log2(1.0 + (1.0 + math.cos(2 * math.pi * t)) ** 2 * 10.0)
    coarse = integrate_1d(f, 0.0, 1.0, tol=1e-8)
    fine = integrate_1d(f, 0.0, 1.0, tol=1e-12)
    assert abs(coarse - fine) < 1e-7
