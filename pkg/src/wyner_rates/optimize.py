"""Scalar / simplex maximizers and adaptive Simpson quadrature.

The power-split objectives are continuous but not proven unimodal, so both
maximizers are grid-then-refine: the returned value is never below the best
grid point, which keeps every reported rate a certified achievable value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class EvaluationError(ValueError):
    """Objective returned a non-finite value."""


class AccuracyError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class OptResult:
    argmax: object  # float for scalar searches, tuple of floats on a simplex
    value: float
    evaluations: int


def maximize_scalar(f, lo: float, hi: float, tol: float = 1e-6,
                    grid: int = 64) -> OptResult:
    """Coarse grid scan followed by golden-section refinement.

    For unimodal f the argmax is located to within `tol`; otherwise the
    result is at least the best of the initial grid points.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    evals = 0

    def ev(x):
        nonlocal evals
        evals += 1
        v = f(x)
        if not math.isfinite(v):
            raise EvaluationError(f"objective returned {v} at {x}")
        return v

    xs = [lo + (hi - lo) * i / (grid - 1) for i in range(grid)]
    vals = [ev(x) for x in xs]
    best = max(range(grid), key=lambda i: vals[i])
    best_x, best_v = xs[best], vals[best]

    # Golden-section on the bracket around the best grid point.
    a = xs[max(best - 1, 0)]
    b = xs[min(best + 1, grid - 1)]
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = ev(c), ev(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = ev(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = ev(d)
    for x, v in ((c, fc), (d, fd)):
        if v > best_v:
            best_x, best_v = x, v
    return OptResult(best_x, best_v, evals)


def _compositions(total: int, parts: int):
    """All ways to write `total` as an ordered sum of `parts` nonnegatives."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def maximize_simplex(f, dim: int, budget: int = 300) -> OptResult:
    """Maximize f over the probability simplex of dimension `dim`.

    Coarse lattice scan (resolution chosen to fit `budget` evaluations)
    followed by pairwise-transfer local search with geometrically shrinking
    steps down to 1e-4.  Deterministic for a given budget.
    """
    if not 1 <= dim <= 32:
        raise ValueError(f"simplex dimension {dim} out of range [1, 32]")
    evals = 0

    def ev(w):
        nonlocal evals
        evals += 1
        v = f(w)
        if not math.isfinite(v):
            raise EvaluationError(f"objective returned {v} at {w}")
        return v

    if dim == 1:
        return OptResult((1.0,), ev((1.0,)), evals)

    # Largest lattice resolution whose point count fits the budget.
    k = 1
    while math.comb(k + dim, dim - 1) <= budget and k < 64:
        k += 1
    best_w, best_v = None, -math.inf
    for comp in _compositions(k, dim):
        w = tuple(c / k for c in comp)
        v = ev(w)
        if v > best_v:
            best_w, best_v = w, v

    # Pairwise mass transfers, coarse-to-fine.
    step = 1.0 / (2 * k)
    w = list(best_w)
    while True:
        improved = True
        while improved:
            improved = False
            for i, j in combinations(range(dim), 2):
                for src, dst in ((i, j), (j, i)):
                    amt = min(step, w[src])
                    if amt <= 0:
                        continue
                    cand = list(w)
                    cand[src] -= amt
                    cand[dst] += amt
                    v = ev(tuple(cand))
                    if v > best_v + 1e-9:
                        w, best_v = cand, v
                        improved = True
        if step <= 1e-4:
            break
        step = max(step / 4.0, 1e-4)
    total = sum(w)
    return OptResult(tuple(x / total for x in w), best_v, evals)


def _adaptive_simpson(f, a, fa, m, fm, b, fb, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    h = b - a
    left = h / 12.0 * (fa + 4.0 * flm + fm)
    right = h / 12.0 * (fm + 4.0 * frm + fb)
    err = left + right - whole
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    if depth <= 0:
        raise AccuracyError("adaptive Simpson exceeded maximum depth")
    return (_adaptive_simpson(f, a, fa, lm, flm, m, fm, left, tol / 2.0, depth - 1)
            + _adaptive_simpson(f, m, fm, rm, frm, b, fb, right, tol / 2.0, depth - 1))


def integrate_1d(f, a: float, b: float, tol: float = 1e-10) -> float:
    """Adaptive composite Simpson quadrature of f over [a, b]."""
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _adaptive_simpson(f, a, fa, m, fm, b, fb, whole, tol, 48)


def integrate_2d(f, tol: float = 1e-9) -> float:
    """Integral of f(u, v) over the unit square, by tensored 1-D quadrature."""
    inner_tol = tol / 2.0

    def outer(u):
        return integrate_1d(lambda v: f(u, v), 0.0, 1.0, inner_tol)

    return integrate_1d(outer, 0.0, 1.0, tol / 2.0)
