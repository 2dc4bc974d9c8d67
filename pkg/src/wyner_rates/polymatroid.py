"""Weighted group-rate maximization over MAC polymatroid regions.

Schemes tie several MAC columns to a common rate (all `d` parts share one
R_d, etc.).  With groups g of per-subset column counts n_g(S), the problem

    max sum_g w_g R_g   s.t.   sum_g n_g(S) R_g <= f(S)  for all S,  R >= 0

is a small dense LP: at most a handful of variables against the subset
bounds f(S).  A tableau simplex with Bland's rule solves it; an optional
`masks` argument restricts the constraint family (used by symmetric 2-D
clusters, where invariant subsets provably suffice).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .info_core import (
    MAX_ENUM_COLUMNS,
    GaussianMac,
    SizeError,
    mac_region_contains,
    subset_rate_table,
    subset_rates_for_masks,
)


class SolverError(RuntimeError):
    """LP solve failed (iteration limit or inconsistent numerics)."""


@dataclass(frozen=True)
class RateGrouping:
    """Assignment of MAC columns to rate groups with objective weights.

    group_of : per-column group id, length N_t
    weights  : objective weight per group id (nonnegative, not all zero)
    """

    group_of: tuple
    weights: dict

    def __init__(self, group_of, weights):
        object.__setattr__(self, "group_of", tuple(group_of))
        object.__setattr__(self, "weights", dict(weights))
        if set(self.weights) != set(self.group_of):
            raise ValueError("weights keys must match the group ids in group_of")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be nonnegative")
        if not any(w > 0 for w in self.weights.values()):
            raise ValueError("at least one weight must be positive")

    @property
    def group_ids(self) -> list:
        return sorted(self.weights)

    @property
    def multiplicity(self) -> dict:
        return {g: self.group_of.count(g) for g in self.group_ids}

    def column_masks(self) -> dict:
        masks = {g: 0 for g in self.group_ids}
        for i, g in enumerate(self.group_of):
            masks[g] |= 1 << i
        return masks

    def expand(self, group_rates: dict) -> np.ndarray:
        """Full per-column rate tuple from per-group rates."""
        return np.array([group_rates[g] for g in self.group_of])


@dataclass(frozen=True)
class GroupedRateSolution:
    objective: float
    group_rates: dict
    binding_subsets: list
    grouping: RateGrouping


def _simplex_max(A: np.ndarray, b: np.ndarray, c: np.ndarray):
    """max c.x s.t. A x <= b, x >= 0, with b >= 0 (slack basis is feasible).

    Dense tableau simplex, Bland's rule for entering and leaving variables,
    so cycling is impossible.  Returns (x, value).
    """
    tol = 1e-10
    m, n = A.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -c
    basis = np.arange(n, n + m)
    for _ in range(20000):
        negative = np.nonzero(T[-1, :-1] < -tol)[0]
        if negative.size == 0:
            break
        j = int(negative[0])
        col = T[:m, j]
        pos = col > tol
        if not pos.any():
            raise SolverError("LP unbounded; grouping has an unconstrained group")
        ratios = np.where(pos, T[:m, -1] / np.where(pos, col, 1.0), np.inf)
        rmin = ratios.min()
        ties = np.nonzero(ratios <= rmin + 1e-12)[0]
        i = int(ties[np.argmin(basis[ties])])
        piv = T[i] / T[i, j]
        T -= np.outer(T[:, j], piv)
        T[i] = piv
        basis[i] = j
    else:
        raise SolverError("simplex iteration limit reached")
    x = np.zeros(n)
    inside = basis < n
    x[basis[inside]] = T[:m, -1][inside]
    return x, float(T[-1, -1])


def _lexicographic_refine(A, b, c, order, value):
    """Among LP optima, pick the lexicographically largest x along `order`.

    Returns None when the refinement subproblem is reported infeasible
    (the optimal-value cut can sit a hair outside the region when the
    tableau value carries rounding error); callers keep the tableau
    solution in that case.
    """
    from scipy.optimize import linprog

    A_ub = np.vstack([A, -c])
    b_ub = np.append(b, -(value - 1e-8))
    a_eq, b_eq = [], []
    x = None
    for g in order:
        obj = np.zeros(len(c))
        obj[g] = -1.0
        res = linprog(obj, A_ub=A_ub, b_ub=b_ub,
                      A_eq=np.array(a_eq) if a_eq else None,
                      b_eq=np.array(b_eq) if b_eq else None,
                      method="highs")
        if not res.success:
            if "nfeasible" in str(res.message):
                return None
            raise SolverError(f"lexicographic refinement failed: {res.message}")
        x = res.x
        row = np.zeros(len(c))
        row[g] = 1.0
        a_eq.append(row)
        b_eq.append(res.x[g])
    return x


def group_counts(grouping: RateGrouping, masks) -> np.ndarray:
    """Per-subset column counts n_g(S), one row per mask, groups sorted."""
    gmasks = grouping.column_masks()
    ids = grouping.group_ids
    return np.array([[(m & gmasks[g]).bit_count() for g in ids] for m in masks],
                    dtype=float)


def max_grouped_rate(mac: GaussianMac, grouping: RateGrouping, masks=None,
                     refine: bool = True) -> GroupedRateSolution:
    """Solve the grouped polymatroid LP.

    masks  : optional explicit subset family (bit masks).  Default is full
             enumeration of the 2^N_t - 1 nonempty subsets (N_t <= 20).
             A restricted family must be known to dominate the full one
             (e.g. orbit unions of a symmetry of the MAC and grouping).
    refine : resolve degenerate optima to the lexicographically largest
             group-rate vector (ordered by group id) for deterministic output.
    """
    if len(grouping.group_of) != mac.n_tx:
        raise ValueError("grouping does not cover the MAC columns")
    if masks is None:
        if mac.n_tx > MAX_ENUM_COLUMNS:
            raise SizeError(f"N_t = {mac.n_tx}: pass an explicit subset family")
        table = subset_rate_table(mac)
        masks = list(range(1, 1 << mac.n_tx))
        f = table[1:]
    else:
        masks = [m for m in masks if m != 0]
        if mac.n_tx <= 14:
            # Building the full table beats per-mask factorizations here.
            f = subset_rate_table(mac)[np.asarray(masks)]
        else:
            f = subset_rates_for_masks(mac, masks)
    b = np.maximum(f, 0.0)
    A = group_counts(grouping, masks)
    ids = grouping.group_ids
    c = np.array([grouping.weights[g] for g in ids])
    x, value = _simplex_max(A, b, c)
    if refine:
        refined = _lexicographic_refine(A, b, c, range(len(ids)), value)
        if refined is not None:
            x = refined
            value = float(c @ x)
    x = np.maximum(x, 0.0)
    slack = b - A @ x
    binding = [frozenset(i for i in range(mac.n_tx) if m >> i & 1)
               for m, s in zip(masks, slack) if s <= 1e-7]
    return GroupedRateSolution(
        objective=float(value),
        group_rates={g: float(x[k]) for k, g in enumerate(ids)},
        binding_subsets=binding,
        grouping=grouping,
    )


def _floor_to_grid(x, step):
    return np.floor(x / step + 1e-9) * step


def brute_force_grouped_rate(mac: GaussianMac, grouping: RateGrouping,
                             grid_step: float) -> float:
    """Independent grid-search oracle for max_grouped_rate (<= 3 groups).

    Exhaustive over the group-rate grid: the leading groups run over their
    full [0, singleton bound] grids while the last coordinate's grid maximum
    is read off the subset constraints directly (the region is down-closed,
    so this equals the full grid scan).  The middle coordinate of a 3-group
    search uses exact discrete ternary search, valid because the objective
    is concave along it.  Result is within sum_g w_g * grid_step of the
    true optimum.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    ids = grouping.group_ids
    G = len(ids)
    if G > 3:
        raise SizeError(f"{G} groups exceed the brute-force limit of 3")
    if len(grouping.group_of) != mac.n_tx:
        raise ValueError("grouping does not cover the MAC columns")

    table = subset_rate_table(mac)
    masks = np.arange(1, 1 << mac.n_tx)
    f = np.maximum(table[1:], 0.0)
    N = group_counts(grouping, masks)
    w = np.array([grouping.weights[g] for g in ids])

    # Per-group box bound: tightest singleton constraint.
    bound = np.empty(G)
    for k in range(G):
        singles = (N[:, k] >= 1) & (N.sum(axis=1) == N[:, k]) & (N[:, k] == 1) \
            & (np.array([m.bit_count() for m in masks]) == 1)
        bound[k] = f[singles].min()

    def last_max(prefix):
        """Largest feasible value of the last group rate given the others.

        prefix: (G-1, L) array of leading rates; returns (L,) array with
        -inf where the prefix itself is infeasible.
        """
        resid = f[:, None] - N[:, :G - 1] @ prefix
        nl = N[:, G - 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            lim = np.where(nl[:, None] > 0, resid / np.where(nl[:, None] > 0, nl[:, None], 1.0), np.inf)
        best = lim.min(axis=0)
        ok = best >= -1e-12
        if (nl == 0).any():
            ok &= resid[nl == 0].min(axis=0) >= -1e-12
        return np.where(ok, np.maximum(best, 0.0), -np.inf)

    if G == 1:
        top = last_max(np.zeros((0, 1)))[0]
        return float(w[0] * _floor_to_grid(top, grid_step)) if np.isfinite(top) else 0.0

    r1 = np.arange(0.0, bound[0] + grid_step / 2, grid_step)
    if G == 2:
        top = last_max(r1[None, :])
        vals = w[0] * r1 + w[1] * _floor_to_grid(top, grid_step)
        return float(vals[np.isfinite(vals)].max())

    # G == 3: exact discrete ternary over the middle coordinate.
    k2 = int(np.floor(bound[1] / grid_step + 1e-9))

    def val(i2):
        r2 = i2 * grid_step
        top = last_max(np.vstack([r1, r2]))
        return np.where(np.isfinite(top), w[0] * r1 + w[1] * r2 + w[2] * top, -np.inf)

    lo = np.zeros(len(r1), dtype=int)
    hi = np.full(len(r1), k2, dtype=int)
    while (hi - lo).max() > 2:
        third = np.maximum((hi - lo) // 3, 1)
        m1 = lo + third
        m2 = hi - third
        v1, v2 = val(m1), val(m2)
        left = v1 < v2
        lo = np.where(left & (hi - lo > 2), np.minimum(m1 + 1, hi), lo)
        hi = np.where(~left & (hi - lo > 2), np.maximum(m2 - 1, lo), hi)
    best = np.full(len(r1), -np.inf)
    best_i2 = np.zeros(len(r1), dtype=int)
    candidates = [lo, np.minimum(lo + 1, hi), hi]
    # Safety sweep against numerical plateau artifacts.
    candidates += [np.minimum(np.full_like(lo, i2), k2)
                   for i2 in range(0, k2 + 1, max(1, k2 // 40))]
    for i2 in candidates:
        v = val(i2)
        upd = v > best
        best = np.where(upd, v, best)
        best_i2 = np.where(upd, i2, best_i2)
    j = int(np.argmax(best))
    top = last_max(np.vstack([r1[j:j + 1], [best_i2[j] * grid_step]]))[0]
    value = w[0] * r1[j] + w[1] * best_i2[j] * grid_step \
        + w[2] * _floor_to_grid(top, grid_step)
    return float(value)
