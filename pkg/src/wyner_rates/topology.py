"""Channel / interference matrix builders for the 1-D line and hex lattice.

Every builder returns a SchemeMatrices bundle: decoded-signal columns h_d,
treated-as-noise columns h_ud (split residues) and h_inter (out-of-cluster
signals), the rate grouping over h_d's columns, and the symmetry orbits of
the decoded columns under the cluster automorphism (mirror in 1-D, the
dihedral group of the 7-cell hex cluster in 2-D).

Orbit unions matter for the LP: the subset function f and the tied rates
are invariant under the automorphism, so f(S) - sum_i c_i is an invariant
submodular function and its minimizer set is closed under unions; hence an
invariant (orbit-union) minimizer always exists and the orbit-union
constraints alone cut out the exact feasible region.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .polymatroid import RateGrouping


class Dimension(enum.Enum):
    LINE_1D = "1d"
    HEX_2D = "2d"


@dataclass(frozen=True)
class CellArrayModel:
    """Wyner array: unit own-cell gain, alpha to each immediate neighbor."""

    dimension: Dimension
    alpha: float
    power: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.power > 0:
            raise ValueError(f"power must be positive, got {self.power}")


@dataclass(frozen=True)
class PowerSplit:
    """Point on a probability simplex (power shares of the signal parts)."""

    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if any(x < 0 for x in w):
            raise ValueError("split weights must be nonnegative")
        if abs(sum(w) - 1.0) > 1e-12:
            raise ValueError(f"split weights must sum to 1, got {sum(w)}")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class SchemeMatrices:
    """Matrices, grouping and bookkeeping for one scheme's MIMO MAC."""

    h_d: np.ndarray
    h_ud: np.ndarray
    h_inter: np.ndarray
    grouping: RateGrouping
    column_labels: tuple  # one label per column of [h_d | h_ud | h_inter]
    cluster_size: int
    orbits: tuple  # symmetry orbits of h_d's columns, as index tuples

    def __post_init__(self):
        rows = self.h_d.shape[0]
        for m in (self.h_ud, self.h_inter):
            if m.shape[0] != rows:
                raise ValueError("matrix row counts differ")
        n_cols = self.h_d.shape[1] + self.h_ud.shape[1] + self.h_inter.shape[1]
        if len(self.column_labels) != n_cols:
            raise ValueError("column labels do not match the column count")
        if len(self.grouping.group_of) != self.h_d.shape[1]:
            raise ValueError("grouping must cover exactly h_d's columns")
        covered = sorted(i for orbit in self.orbits for i in orbit)
        if covered != list(range(self.h_d.shape[1])):
            raise ValueError("orbits must partition h_d's columns")


def orbit_union_masks(orbits) -> list:
    """All nonempty unions of the given column orbits, as bit masks."""
    base = []
    for orbit in orbits:
        m = 0
        for i in orbit:
            m |= 1 << i
        base.append(m)
    out = []
    for sel in range(1, 1 << len(base)):
        m = 0
        for k, om in enumerate(base):
            if sel >> k & 1:
                m |= om
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# Hexagonal lattice (axial coordinates)

AXIAL_DIRS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))


def hex_distance(cell) -> int:
    q, r = cell
    return (abs(q) + abs(r) + abs(q + r)) // 2


def hex_neighbors(cell) -> list:
    q, r = cell
    return [(q + dq, r + dr) for dq, dr in AXIAL_DIRS]


def hex_color(cell) -> int:
    """3-coloring of the lattice; neighbors never share a color."""
    q, r = cell
    return (q - r) % 3


RING_CELLS = AXIAL_DIRS
SHELL_CELLS = tuple(sorted(
    {c for ring in RING_CELLS for c in hex_neighbors(ring) if hex_distance(c) == 2}))
CLUSTER_ROWS = ((0, 0),) + RING_CELLS

# Shell cells adjacent to one ring cell ("axis") vs two ("diagonal") form
# the two orbits of the cluster's dihedral symmetry on the second shell.
_SHELL_RING_DEG = tuple(
    sum(1 for nb in hex_neighbors(c) if nb in RING_CELLS) for c in SHELL_CELLS)
SHELL_AXIS_IDX = tuple(i for i, d in enumerate(_SHELL_RING_DEG) if d == 1)
SHELL_DIAG_IDX = tuple(i for i, d in enumerate(_SHELL_RING_DEG) if d == 2)


def _structure(cells):
    """(self, adjacency) indicator matrices of `cells` seen by the 7 antennas."""
    s = np.zeros((len(CLUSTER_ROWS), len(cells)))
    a = np.zeros_like(s)
    for j, c in enumerate(cells):
        for i, row in enumerate(CLUSTER_ROWS):
            if c == row:
                s[i, j] = 1.0
            elif hex_distance((c[0] - row[0], c[1] - row[1])) == 1:
                a[i, j] = 1.0
    return s, a


_S_CENTER, _A_CENTER = _structure([(0, 0)])
_S_RING, _A_RING = _structure(RING_CELLS)
_S_SHELL, _A_SHELL = _structure(SHELL_CELLS)


def hex_columns(which: str, alpha: float) -> np.ndarray:
    """Channel columns (7 rows) of the center / ring / shell cells."""
    s, a = {
        "center": (_S_CENTER, _A_CENTER),
        "ring": (_S_RING, _A_RING),
        "shell": (_S_SHELL, _A_SHELL),
    }[which]
    return s + alpha * a


# ---------------------------------------------------------------------------
# 1-D line helpers

def line_gain(cell: int, row: int, alpha: float) -> float:
    d = abs(cell - row)
    return 1.0 if d == 0 else alpha if d == 1 else 0.0


def line_cluster_channel(alpha: float):
    """Full-signal cluster channel H (3x3) and out-of-cluster H_inter (3x2)."""
    h = np.array([[1.0, alpha, 0.0],
                  [alpha, 1.0, alpha],
                  [0.0, alpha, 1.0]])
    h_inter = np.array([[alpha, 0.0],
                        [0.0, 0.0],
                        [0.0, alpha]])
    return h, h_inter


def hex_cluster_channel(alpha: float):
    """7-antenna cluster channel of the 7 cluster cells, plus shell columns."""
    return hex_columns("ring", alpha), hex_columns("shell", alpha)


def cluster_channel(model: CellArrayModel):
    if model.dimension is Dimension.LINE_1D:
        return line_cluster_channel(model.alpha)
    h_center = hex_columns("center", model.alpha)
    h_ring = hex_columns("ring", model.alpha)
    return np.hstack([h_center, h_ring]), hex_columns("shell", model.alpha)


# ---------------------------------------------------------------------------
# Scheme builders

def build_nonoverlap(model: CellArrayModel, lam: float) -> SchemeMatrices:
    """Non-overlapping clustering with rate splitting (cluster decodes its
    own cells fully plus the d parts of the adjacent out-of-cluster cells)."""
    _check_lambda(lam)
    a = model.alpha
    sl = math.sqrt(lam)
    su = math.sqrt(1.0 - lam)
    if model.dimension is Dimension.LINE_1D:
        h_d = np.array([
            [a * sl, sl, su, a, 0.0, 0.0, 0.0],
            [0.0, a * sl, a * su, 1.0, a * su, a * sl, 0.0],
            [0.0, 0.0, 0.0, a, su, sl, a * sl],
        ])
        _, h_inter_base = line_cluster_channel(a)
        h_ud = su * h_inter_base
        grouping = RateGrouping(
            ["rd", "rd", "rud", "r0", "rud", "rd", "rd"],
            {"r0": 1.0, "rd": 2.0, "rud": 2.0})
        labels = ("-2:d", "-1:d", "-1:ud", "0:full", "+1:ud", "+1:d", "+2:d",
                  "-2:ud", "+2:ud")
        orbits = ((3,), (1, 5), (0, 6), (2, 4))
        return SchemeMatrices(h_d, h_ud, np.zeros((3, 0)), grouping, labels,
                              3, orbits)

    ring = hex_columns("ring", a)
    shell = hex_columns("shell", a)
    center = hex_columns("center", a)
    h_d = np.hstack([center, sl * ring, su * ring, sl * shell])
    h_ud = su * shell
    n_shell = len(SHELL_CELLS)
    grouping = RateGrouping(
        ["r0"] + ["rd"] * 6 + ["rud"] * 6 + ["rd"] * n_shell,
        {"r0": 1.0, "rd": 6.0, "rud": 6.0})
    labels = tuple(["0,0:full"]
                   + [f"{q},{r}:d" for q, r in RING_CELLS]
                   + [f"{q},{r}:ud" for q, r in RING_CELLS]
                   + [f"{q},{r}:d" for q, r in SHELL_CELLS]
                   + [f"{q},{r}:ud" for q, r in SHELL_CELLS])
    shell0 = 13
    orbits = ((0,), tuple(range(1, 7)), tuple(range(7, 13)),
              tuple(shell0 + i for i in SHELL_AXIS_IDX),
              tuple(shell0 + i for i in SHELL_DIAG_IDX))
    return SchemeMatrices(h_d, h_ud, np.zeros((7, 0)), grouping, labels,
                          7, orbits)


def build_overlap_simplified(model: CellArrayModel, lam: float) -> SchemeMatrices:
    """Overlapped cluster, simplified: out-of-cluster signals stay noise."""
    _check_lambda(lam)
    a = model.alpha
    sl = math.sqrt(lam)
    su = math.sqrt(1.0 - lam)
    if model.dimension is Dimension.LINE_1D:
        h_d = np.array([
            [sl, a * sl, a * su, 0.0],
            [a * sl, sl, su, a * sl],
            [0.0, a * sl, a * su, sl],
        ])
        h_ud = su * np.array([[1.0, 0.0],
                              [a, a],
                              [0.0, 1.0]])
        _, h_inter = line_cluster_channel(a)
        grouping = RateGrouping(["rd", "rd", "rud", "rd"],
                                {"rd": 1.0, "rud": 1.0})
        labels = ("-1:d", "0:d", "0:ud", "+1:d",
                  "-1:ud", "+1:ud", "-2:full", "+2:full")
        orbits = ((0, 3), (1,), (2,))
        return SchemeMatrices(h_d, h_ud, h_inter, grouping, labels, 1, orbits)

    ring = hex_columns("ring", a)
    center = hex_columns("center", a)
    h_d = np.hstack([sl * ring, sl * center, su * center])
    h_ud = su * ring
    h_inter = hex_columns("shell", a)  # both parts lumped, full power
    grouping = RateGrouping(["rd"] * 6 + ["rd", "rud"],
                            {"rd": 1.0, "rud": 1.0})
    labels = tuple([f"{q},{r}:d" for q, r in RING_CELLS]
                   + ["0,0:d", "0,0:ud"]
                   + [f"{q},{r}:ud" for q, r in RING_CELLS]
                   + [f"{q},{r}:full" for q, r in SHELL_CELLS])
    orbits = (tuple(range(6)), (6,), (7,))
    return SchemeMatrices(h_d, h_ud, h_inter, grouping, labels, 1, orbits)


def build_overlap_full(alpha: float, split: PowerSplit) -> SchemeMatrices:
    """Overlapped cluster with three-way splits (1-D only).

    Each signal is divided into a self part (decoded only by its own cell),
    an intra part (decoded by immediate neighbors) and an inter part
    (decoded up to two cells away).
    """
    if len(split.weights) != 3:
        raise ValueError("overlap-full split must have exactly 3 parts")
    lam_self, lam_intra, lam_inter = split.weights
    a = alpha
    ss = math.sqrt(lam_self)
    st = math.sqrt(lam_intra)
    si = math.sqrt(lam_inter)
    h_d = np.array([
        [a * si, si, st, a * si, a * st, a * ss, 0.0, 0.0, 0.0],
        [0.0, a * si, a * st, si, st, ss, a * si, a * st, 0.0],
        [0.0, 0.0, 0.0, a * si, a * st, a * ss, si, st, a * si],
    ])
    h_ud = np.array([
        [a * st, a * ss, ss, 0.0, 0.0, 0.0],
        [0.0, 0.0, a * ss, a * ss, 0.0, 0.0],
        [0.0, 0.0, 0.0, ss, a * st, a * ss],
    ])
    grouping = RateGrouping(
        ["rinter", "rinter", "rintra", "rinter", "rintra", "rself",
         "rinter", "rintra", "rinter"],
        {"rself": 1.0, "rintra": 1.0, "rinter": 1.0})
    labels = ("-2:inter", "-1:inter", "-1:intra", "0:inter", "0:intra",
              "0:self", "+1:inter", "+1:intra", "+2:inter",
              "-2:intra", "-2:self", "-1:self", "+1:self", "+2:intra",
              "+2:self")
    orbits = ((0, 8), (1, 6), (2, 7), (3,), (4,), (5,))
    return SchemeMatrices(h_d, h_ud, np.zeros((3, 0)), grouping, labels,
                          1, orbits)


def build_overlap_scheduled_phase1(model: CellArrayModel,
                                   lam: float) -> SchemeMatrices:
    """First decoding phase of overlapped clustering + scheduled decoding.

    1-D: even cells decode their (unsplit) message together with the d
    parts of the neighboring odd cells.  2-D: the first color class decodes
    its message plus the d parts of its 6 neighbors; remaining ud parts are
    picked up in later phases (handled by the scheme layer).
    """
    _check_lambda(lam)
    a = model.alpha
    sl = math.sqrt(lam)
    su = math.sqrt(1.0 - lam)
    if model.dimension is Dimension.LINE_1D:
        h_d = np.array([
            [sl, a, 0.0],
            [a * sl, 1.0, a * sl],
            [0.0, a, sl],
        ])
        h_ud = su * np.array([[1.0, 0.0],
                              [a, a],
                              [0.0, 1.0]])
        # Cells +-2 belong to the other schedule class: unsplit, undecoded
        # during this phase, so they interfere at full power.
        _, h_inter = line_cluster_channel(a)
        grouping = RateGrouping(["rodd_d", "reven", "rodd_d"],
                                {"reven": 1.0, "rodd_d": 1.0})
        labels = ("-1:d", "0:full", "+1:d", "-1:ud", "+1:ud",
                  "-2:full", "+2:full")
        orbits = ((1,), (0, 2))
        return SchemeMatrices(h_d, h_ud, h_inter, grouping, labels, 2, orbits)

    ring = hex_columns("ring", a)
    center = hex_columns("center", a)
    h_d = np.hstack([center, sl * ring])
    h_ud = su * ring
    h_inter = hex_columns("shell", a)  # undecoded shell, full power
    # Weight 2: the d rate is earned by both non-center color classes.
    grouping = RateGrouping(["r_phase"] + ["rd"] * 6,
                            {"r_phase": 1.0, "rd": 2.0})
    labels = tuple(["0,0:full"]
                   + [f"{q},{r}:d" for q, r in RING_CELLS]
                   + [f"{q},{r}:ud" for q, r in RING_CELLS]
                   + [f"{q},{r}:full" for q, r in SHELL_CELLS])
    orbits = ((0,), tuple(range(1, 7)))
    return SchemeMatrices(h_d, h_ud, h_inter, grouping, labels, 3, orbits)


def _check_lambda(lam: float):
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"power split must lie in [0, 1], got {lam}")
