"""Per-cell uplink rates of the collaboration schemes on Wyner arrays.

One entry point per scheme, each mapping a CellArrayModel to its optimized
per-cell rate (bits per channel use).  Power-split searches use the grid
then refine maximizers from `optimize`, so every reported rate is a
certified achievable value (never above the scheme's true optimum, never
below the best searched split).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .info_core import GaussianMac, SizeError, awgn_capacity, log_det_psd
from .optimize import integrate_1d, integrate_2d, maximize_scalar, maximize_simplex
from .polymatroid import RateGrouping, max_grouped_rate
from .topology import (
    RING_CELLS,
    SHELL_CELLS,
    CellArrayModel,
    Dimension,
    PowerSplit,
    SchemeMatrices,
    build_nonoverlap,
    build_overlap_full,
    build_overlap_scheduled_phase1,
    build_overlap_simplified,
    cluster_channel,
    hex_columns,
    orbit_union_masks,
)

SCHEME_IDS = (
    "wyner",
    "naive",
    "hk",
    "nonoverlap-naive",
    "nonoverlap-hk",
    "overlap-simplified",
    "overlap-full",
    "time-sharing",
    "scheduled",
    "overlap-scheduled",
    "multilayer",
)


@dataclass(frozen=True)
class SchemeResult:
    """Optimized rate of one scheme at one operating point.

    optimal_split is a PowerSplit for single-split schemes, a tuple of
    PowerSplits (one per cell class) for the multi-layer scheme, or None
    for schemes without a free split.
    """

    scheme_id: str
    model: CellArrayModel
    rate: float
    optimal_split: object = None
    group_rates: dict = None
    diagnostics: dict = field(default_factory=dict)


def _scheme_mac(matrices: SchemeMatrices, power: float) -> GaussianMac:
    """MAC with noise covariance I + P (H_ud H_ud^T + H_inter H_inter^T)."""
    k = np.eye(matrices.h_d.shape[0])
    for m in (matrices.h_ud, matrices.h_inter):
        if m.shape[1]:
            k = k + power * (m @ m.T)
    return GaussianMac(matrices.h_d, power, k)


def _lp(matrices: SchemeMatrices, power: float, refine: bool = False):
    mac = _scheme_mac(matrices, power)
    masks = orbit_union_masks(matrices.orbits)
    return max_grouped_rate(mac, matrices.grouping, masks=masks, refine=refine)


# ---------------------------------------------------------------------------
# Joint-processing upper bound

@lru_cache(maxsize=4096)
def _wyner_bound_cached(dimension: Dimension, alpha: float, power: float) -> float:
    tau = 2.0 * math.pi
    if dimension is Dimension.LINE_1D:
        def integrand(theta):
            g = 1.0 + 2.0 * alpha * math.cos(tau * theta)
            return awgn_capacity(g * g * power)
        return integrate_1d(integrand, 0.0, 1.0, tol=1e-10)

    def integrand2(t1, t2):
        g = 1.0 + 2.0 * alpha * (math.cos(tau * t1) + math.cos(tau * t2)
                                 + math.cos(tau * (t1 + t2)))
        return awgn_capacity(g * g * power)
    return integrate_2d(integrand2, tol=1e-9)


def wyner_bound(model: CellArrayModel) -> float:
    """Per-cell capacity with unlimited joint processing of all antennas."""
    return _wyner_bound_cached(model.dimension, model.alpha, model.power)


# ---------------------------------------------------------------------------
# Closed-form schemes

def naive_rate(model: CellArrayModel) -> float:
    """Single-cell decoding, all neighbor interference treated as noise."""
    p = model.power
    a2 = model.alpha * model.alpha
    n_nb = 2 if model.dimension is Dimension.LINE_1D else 6
    return awgn_capacity(p / (1.0 + n_nb * a2 * p))


def time_sharing_rate(model: CellArrayModel) -> float:
    """Only every second (third) cell transmits, at boosted power."""
    p = model.power
    if model.dimension is Dimension.LINE_1D:
        return 0.5 * awgn_capacity(2.0 * p)
    return awgn_capacity(3.0 * p) / 3.0


def _layer_phase_rates(alpha: float, power: float, allocs) -> list:
    """Per-class sum rates of the layered schedule.

    allocs: one power-allocation vector per cell class (2 classes in 1-D,
    3 colors in 2-D), each on the simplex.  Class j's layer k is decoded
    after layers < k of every class and after layer k of classes < j, so
    its interference is the residual layers, neighbors attenuated by α².
    """
    a2 = alpha * alpha
    p = power
    n_classes = len(allocs)
    cross = (2.0 if n_classes == 2 else 3.0) * a2 * p
    m = len(allocs[0])
    out = []
    for j, lam in enumerate(allocs):
        total = 0.0
        for k in range(m):
            den = 1.0 + p * math.fsum(lam[k + 1:])
            for jo, other in enumerate(allocs):
                if jo == j:
                    continue
                start = k if jo > j else k + 1
                den += cross * math.fsum(other[start:])
            total += awgn_capacity(lam[k] * p / den)
        out.append(total)
    return out


def scheduled_digital_rate(model: CellArrayModel) -> float:
    """One decoding phase per cell class; earlier classes are subtracted."""
    n_classes = 2 if model.dimension is Dimension.LINE_1D else 3
    allocs = tuple((1.0,) for _ in range(n_classes))
    rates = _layer_phase_rates(model.alpha, model.power, allocs)
    return math.fsum(rates) / n_classes


def multilayer_scheduled_rate(model: CellArrayModel, layers: int) -> SchemeResult:
    """Layered transmission with alternating per-layer decoding.

    Each cell class splits its power over `layers` superposed layers;
    classes take turns decoding one layer, subtracting everything already
    decoded.  The per-class allocations are optimized by block-coordinate
    ascent starting from the single-phase (all power in the last layer)
    point, so the result never falls below scheduled_digital_rate.
    """
    if layers < 1:
        raise ValueError(f"layers must be >= 1, got {layers}")
    if layers > 16:
        raise SizeError(f"layers = {layers} exceeds the limit of 16")
    n_classes = 2 if model.dimension is Dimension.LINE_1D else 3
    a, p = model.alpha, model.power

    def value(allocs):
        return math.fsum(_layer_phase_rates(a, p, allocs)) / n_classes

    if layers == 1:
        allocs = tuple((1.0,) for _ in range(n_classes))
        rate = value(allocs)
    else:
        start = (0.0,) * (layers - 1) + (1.0,)
        allocs = [start] * n_classes
        best = value(allocs)
        for _ in range(6):
            improved = False
            for j in range(n_classes):
                def block_obj(w, j=j):
                    trial = list(allocs)
                    trial[j] = w
                    return value(trial)
                res = maximize_simplex(block_obj, layers, budget=300)
                if res.value > best + 1e-9:
                    allocs[j] = res.argmax
                    best = res.value
                    improved = True
            if not improved:
                break
        allocs = tuple(allocs)
        rate = best
    return SchemeResult(
        scheme_id="multilayer", model=model, rate=rate,
        optimal_split=tuple(PowerSplit(w) for w in allocs),
        diagnostics={"layers": layers})


# ---------------------------------------------------------------------------
# Single-cell rate splitting

def _hk_matrices(model: CellArrayModel, lam: float):
    a = model.alpha
    p = model.power
    sl = math.sqrt(lam)
    su = math.sqrt(1.0 - lam)
    a2 = a * a
    if model.dimension is Dimension.LINE_1D:
        h = np.array([[a * sl, sl, su, a * sl]])
        noise = np.array([[1.0 + 2.0 * a2 * (1.0 - lam) * p]])
        grouping = RateGrouping(["rd", "rd", "rud", "rd"],
                                {"rd": 1.0, "rud": 1.0})
    else:
        h = np.array([[sl, su] + [a * sl] * 6])
        noise = np.array([[1.0 + 6.0 * a2 * (1.0 - lam) * p]])
        grouping = RateGrouping(["rd", "rud"] + ["rd"] * 6,
                                {"rd": 1.0, "rud": 1.0})
    return GaussianMac(h, p, noise), grouping


def hk_closed_form_rate(alpha: float, power: float, lam: float) -> float:
    """Max-min expression for the 1-D single-cell rate-splitting value."""
    a2 = alpha * alpha
    p = power
    den = 1.0 + (1.0 + 2.0 * a2) * (1.0 - lam) * p
    ud = awgn_capacity((1.0 - lam) * p / (1.0 + 2.0 * a2 * (1.0 - lam) * p))
    d_pair = 0.5 * awgn_capacity(2.0 * a2 * lam * p / den)
    d_all = awgn_capacity((1.0 + 2.0 * a2) * lam * p / den) / 3.0
    return ud + min(d_pair, d_all)


def hk_single_cell_rate(model: CellArrayModel) -> SchemeResult:
    """Rate splitting with partial decoding at the neighboring cells."""
    p = model.power

    def objective(lam):
        mac, grouping = _hk_matrices(model, lam)
        return max_grouped_rate(mac, grouping, refine=False).objective

    res = maximize_scalar(objective, 0.0, 1.0, tol=1e-6)
    lam = res.argmax
    mac, grouping = _hk_matrices(model, lam)
    sol = max_grouped_rate(mac, grouping, refine=True)
    diagnostics = {"binding_subsets": sol.binding_subsets}
    if model.dimension is Dimension.LINE_1D:
        cf = maximize_scalar(
            lambda x: hk_closed_form_rate(model.alpha, p, x), 0.0, 1.0,
            tol=1e-6)
        diagnostics["closed_form_rate"] = cf.value
    return SchemeResult(
        scheme_id="hk", model=model, rate=res.value,
        optimal_split=PowerSplit((lam, 1.0 - lam)),
        group_rates=sol.group_rates, diagnostics=diagnostics)


def hk_region_constraints(alpha: float, power: float, lam: float) -> list:
    """The explicit rate-splitting region bounds for the 1-D model.

    Returns (label, bound) pairs: the ud bound, the d bounds for one / two /
    three tied d streams, and the combined d+ud bounds.  All share the
    denominator of the effective noise 1 + 2 α² (1-λ) P.
    """
    a2 = alpha * alpha
    p = power
    d = 1.0 + 2.0 * a2 * (1.0 - lam) * p
    ud_p = (1.0 - lam) * p
    return [
        ("ud", awgn_capacity(ud_p / d)),
        ("d_1", awgn_capacity(a2 * lam * p / d)),
        ("d_2", 0.5 * awgn_capacity(2.0 * a2 * lam * p / d)),
        ("d_3", awgn_capacity((1.0 + 2.0 * a2) * lam * p / d) / 3.0),
        ("d1_ud", awgn_capacity((ud_p + a2 * lam * p) / d)),
        ("d2_ud", awgn_capacity((ud_p + 2.0 * a2 * lam * p) / d)),
        ("d3_ud", awgn_capacity((p + 2.0 * a2 * lam * p) / d)),
    ]


# ---------------------------------------------------------------------------
# Clustered decoding

def nonoverlap_cluster_rate(model: CellArrayModel, mode: str) -> SchemeResult:
    """Disjoint clusters decode jointly; mode 'hk' adds boundary splitting."""
    p = model.power
    scheme_id = f"nonoverlap-{mode}"
    if mode == "naive":
        h, h_inter = cluster_channel(model)
        size = h.shape[0]
        k = np.eye(size) + p * (h_inter @ h_inter.T)
        rate = 0.5 * (log_det_psd(k + p * (h @ h.T)) - log_det_psd(k)) / size
        return SchemeResult(scheme_id=scheme_id, model=model, rate=rate)
    if mode != "hk":
        raise ValueError(f"unknown mode {mode!r}, expected 'naive' or 'hk'")

    def objective(lam):
        sm = build_nonoverlap(model, lam)
        return _lp(sm, p).objective / sm.cluster_size

    res = maximize_scalar(objective, 0.0, 1.0, tol=1e-6)
    lam = res.argmax
    sm = build_nonoverlap(model, lam)
    sol = _lp(sm, p, refine=True)
    return SchemeResult(
        scheme_id=scheme_id, model=model, rate=res.value,
        optimal_split=PowerSplit((lam, 1.0 - lam)),
        group_rates=sol.group_rates)


def overlap_simplified_rate(model: CellArrayModel) -> SchemeResult:
    """Every cell runs its own cluster; second-shell signals stay noise."""
    p = model.power

    def objective(lam):
        return _lp(build_overlap_simplified(model, lam), p).objective

    res = maximize_scalar(objective, 0.0, 1.0, tol=1e-6)
    lam = res.argmax
    sol = _lp(build_overlap_simplified(model, lam), p, refine=True)
    return SchemeResult(
        scheme_id="overlap-simplified", model=model, rate=res.value,
        optimal_split=PowerSplit((lam, 1.0 - lam)),
        group_rates=sol.group_rates)


def overlap_full_rate(alpha: float, power: float,
                      budget: int = 200) -> SchemeResult:
    """Overlapped clusters with three-way power splits (1-D only)."""
    model = CellArrayModel(Dimension.LINE_1D, alpha, power)

    def objective(w):
        return _lp(build_overlap_full(alpha, PowerSplit(w)), power).objective

    res = maximize_simplex(objective, 3, budget=budget)
    split = PowerSplit(res.argmax)
    sol = _lp(build_overlap_full(alpha, split), power, refine=True)
    return SchemeResult(
        scheme_id="overlap-full", model=model, rate=res.value,
        optimal_split=split, group_rates=sol.group_rates)


# ---------------------------------------------------------------------------
# Overlapped clustering with scheduled decoding

def overlap_scheduled_phase2_rate(alpha: float, power: float,
                                  lam: float) -> float:
    """Second-phase rate of the residual split part in the 1-D schedule.

    After the first phase the remaining unknowns are the (1-λ) parts of
    every second cell; matched filtering across the three observing
    antennas yields the printed SNR expression.
    """
    a2 = alpha * alpha
    resid = (1.0 - lam) * power
    return awgn_capacity(resid * (1.0 + 2.0 * a2 / (1.0 + resid * a2)))


def _hex_ud_phase_rate(alpha: float, power: float, lam: float,
                       phase: int) -> float:
    """Residual-part rate of a phase-`phase` cell in the 2-D color schedule.

    The center's 7 antennas matched-filter its (1-λ) part; interference is
    the (1-λ) parts of same-or-later color classes, everything else having
    been decoded and subtracted in earlier phases.
    """
    resid = (1.0 - lam) * power
    cols = []
    for cells, chan in ((RING_CELLS, hex_columns("ring", alpha)),
                        (SHELL_CELLS, hex_columns("shell", alpha))):
        for j, (q, r) in enumerate(cells):
            color = (phase + q - r) % 3
            if color != 0 and color >= phase:
                cols.append(chan[:, j])
    k = np.eye(7)
    if cols:
        u = np.column_stack(cols)
        k = k + resid * (u @ u.T)
    h = hex_columns("center", alpha)[:, 0]
    snr = resid * float(h @ np.linalg.solve(k, h))
    return awgn_capacity(snr)


def overlap_scheduled_rate(model: CellArrayModel) -> SchemeResult:
    """Overlapped clusters combined with a per-class decoding schedule."""
    p = model.power
    a = model.alpha
    two_phase = model.dimension is Dimension.LINE_1D

    def objective(lam):
        sm = build_overlap_scheduled_phase1(model, lam)
        first = _lp(sm, p).objective
        if two_phase:
            return 0.5 * (first + overlap_scheduled_phase2_rate(a, p, lam))
        later = (_hex_ud_phase_rate(a, p, lam, 1)
                 + _hex_ud_phase_rate(a, p, lam, 2))
        return (first + later) / 3.0

    res = maximize_scalar(objective, 0.0, 1.0, tol=1e-6)
    lam = res.argmax
    sol = _lp(build_overlap_scheduled_phase1(model, lam), p, refine=True)
    return SchemeResult(
        scheme_id="overlap-scheduled", model=model, rate=res.value,
        optimal_split=PowerSplit((lam, 1.0 - lam)),
        group_rates=sol.group_rates)


# ---------------------------------------------------------------------------
# Uniform entry point

def evaluate_scheme(scheme_id: str, model: CellArrayModel,
                    layers: int = 4) -> SchemeResult:
    """Evaluate any scheme by id, wrapping closed forms in SchemeResult."""
    if scheme_id == "wyner":
        return SchemeResult("wyner", model, wyner_bound(model))
    if scheme_id == "naive":
        return SchemeResult("naive", model, naive_rate(model))
    if scheme_id == "time-sharing":
        return SchemeResult("time-sharing", model, time_sharing_rate(model))
    if scheme_id == "scheduled":
        return SchemeResult("scheduled", model, scheduled_digital_rate(model))
    if scheme_id == "hk":
        return hk_single_cell_rate(model)
    if scheme_id == "nonoverlap-naive":
        return nonoverlap_cluster_rate(model, "naive")
    if scheme_id == "nonoverlap-hk":
        return nonoverlap_cluster_rate(model, "hk")
    if scheme_id == "overlap-simplified":
        return overlap_simplified_rate(model)
    if scheme_id == "overlap-full":
        if model.dimension is not Dimension.LINE_1D:
            raise ValueError("overlap-full is defined for the 1-D model only")
        return overlap_full_rate(model.alpha, model.power)
    if scheme_id == "overlap-scheduled":
        return overlap_scheduled_rate(model)
    if scheme_id == "multilayer":
        return multilayer_scheduled_rate(model, layers)
    raise ValueError(f"unknown scheme {scheme_id!r}; known: {', '.join(SCHEME_IDS)}")
