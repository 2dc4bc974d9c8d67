"""Scalar capacity, log-determinants and Gaussian MIMO-MAC subset rates.

All rates are in bits per channel use (logarithms base 2).  The central
object is the Gaussian multiple-access channel

    y = H x + z,    z ~ N(0, K),

with independent equal-power scalar codebooks of power P on each column of
H.  The achievable region is the polymatroid

    sum_{i in S} R_i <= (1/2) log2 |K + P H_S H_S^T| / |K|

over all column subsets S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_LN2 = math.log(2.0)

# Enumerating all 2^N_t - 1 subsets; anything beyond this is a caller bug.
MAX_ENUM_COLUMNS = 20


class DefinitenessError(ValueError):
    """Matrix expected to be symmetric positive definite is not."""


class SizeError(ValueError):
    """Combinatorial guard tripped (too many MAC columns to enumerate)."""


def awgn_capacity(snr: float) -> float:
    """Capacity (1/2) log2(1 + snr) of a scalar AWGN channel, in bits."""
    if snr < 0:
        raise ValueError(f"snr must be nonnegative, got {snr}")
    return 0.5 * math.log1p(snr) / _LN2


def log_det_psd(m: np.ndarray) -> float:
    """log2-determinant of a symmetric positive-definite matrix.

    The input is symmetrized as (m + m^T)/2 before factorization; asymmetry
    beyond 1e-9 or a failed Cholesky factorization raises DefinitenessError.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.T), initial=0.0) > 1e-9:
        raise DefinitenessError("matrix is not symmetric within 1e-9")
    sym = 0.5 * (m + m.T)
    try:
        chol = np.linalg.cholesky(sym)
    except np.linalg.LinAlgError as exc:
        raise DefinitenessError("matrix is not positive definite") from exc
    return 2.0 * float(np.sum(np.log2(np.diag(chol))))


@dataclass(frozen=True)
class GaussianMac:
    """Gaussian MIMO MAC with per-column power and colored noise.

    h_d        : (N_r, N_t) channel matrix of the decoded signals
    power      : per-column transmit power P (linear, unit-noise scale)
    noise_cov  : (N_r, N_r) effective noise covariance K
    """

    h_d: np.ndarray
    power: float
    noise_cov: np.ndarray

    def __post_init__(self):
        h = np.atleast_2d(np.asarray(self.h_d, dtype=float))
        k = np.atleast_2d(np.asarray(self.noise_cov, dtype=float))
        if self.power < 0:
            raise ValueError(f"power must be nonnegative, got {self.power}")
        if k.shape[0] != k.shape[1]:
            raise ValueError("noise_cov must be square")
        if h.shape[0] != k.shape[0]:
            raise ValueError("h_d and noise_cov row counts differ")
        if h.shape[1] < 1:
            raise ValueError("need at least one transmit column")
        if np.max(np.abs(k - k.T), initial=0.0) > 1e-9:
            raise DefinitenessError("noise_cov is not symmetric within 1e-9")
        k = 0.5 * (k + k.T)
        h.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "h_d", h)
        object.__setattr__(self, "noise_cov", k)

    @property
    def n_rx(self) -> int:
        return self.h_d.shape[0]

    @property
    def n_tx(self) -> int:
        return self.h_d.shape[1]


def _mask_of(subset) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << i
    return mask


def mac_subset_rate(mac: GaussianMac, subset) -> float:
    """Polymatroid bound f(S) = (1/2) log2 |K + P H_S H_S^T| / |K| in bits.

    `subset` is an iterable of 0-based column indices; empty subset gives 0.
    """
    cols = sorted(set(subset))
    if not cols:
        return 0.0
    if cols[0] < 0 or cols[-1] >= mac.n_tx:
        raise IndexError(f"subset {cols} out of range for {mac.n_tx} columns")
    hs = mac.h_d[:, cols]
    k = mac.noise_cov
    num = log_det_psd(k + mac.power * (hs @ hs.T))
    return 0.5 * (num - log_det_psd(k))


def _batched_log2_det(mats: np.ndarray) -> np.ndarray:
    """log2 det of a (m, r, r) stack of SPD matrices."""
    r = mats.shape[-1]
    if r == 1:
        return np.log2(mats[:, 0, 0])
    if r == 2:
        det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
        return np.log2(det)
    if r == 3:
        a, b, c = mats[:, 0, 0], mats[:, 0, 1], mats[:, 0, 2]
        d, e, f = mats[:, 1, 0], mats[:, 1, 1], mats[:, 1, 2]
        g, h, i = mats[:, 2, 0], mats[:, 2, 1], mats[:, 2, 2]
        det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        return np.log2(det)
    sign, logdet = np.linalg.slogdet(mats)
    if np.any(sign <= 0):
        raise DefinitenessError("non-positive determinant in subset batch")
    return logdet / _LN2


def subset_rate_table(mac: GaussianMac) -> np.ndarray:
    """f(S) for every subset, indexed by bit mask (bit i = column i).

    Returns an array of length 2^N_t; entry 0 is 0.  Built by a bit-doubling
    recursion so the whole table costs N_t vectorized rank-one batches.
    """
    n = mac.n_tx
    if n > MAX_ENUM_COLUMNS:
        raise SizeError(f"refusing to enumerate 2^{n} subsets (limit {MAX_ENUM_COLUMNS})")
    r = mac.n_rx
    h = mac.h_d
    mats = np.empty((1 << n, r, r))
    mats[0] = mac.noise_cov
    for i in range(n):
        half = 1 << i
        outer = mac.power * np.outer(h[:, i], h[:, i])
        mats[half:2 * half] = mats[:half] + outer
    logdets = _batched_log2_det(mats)
    return 0.5 * (logdets - logdets[0])


def subset_rates_for_masks(mac: GaussianMac, masks) -> np.ndarray:
    """f(S) for an explicit list of subset bit masks (no 2^N_t guard)."""
    k = mac.noise_cov
    base = log_det_psd(k)
    out = np.empty(len(masks))
    for j, mask in enumerate(masks):
        cols = [i for i in range(mac.n_tx) if mask >> i & 1]
        if not cols:
            out[j] = 0.0
            continue
        hs = mac.h_d[:, cols]
        out[j] = 0.5 * (log_det_psd(k + mac.power * (hs @ hs.T)) - base)
    return out


def mac_region_contains(mac: GaussianMac, rates, tol: float = 1e-9) -> bool:
    """True iff the rate tuple satisfies every subset bound within tol."""
    rates = np.asarray(rates, dtype=float)
    if rates.shape != (mac.n_tx,):
        raise ValueError(f"expected {mac.n_tx} rates, got shape {rates.shape}")
    if np.any(rates < 0):
        raise ValueError("rates must be nonnegative")
    table = subset_rate_table(mac)
    n = mac.n_tx
    sums = np.zeros(1 << n)
    for i in range(n):
        half = 1 << i
        sums[half:2 * half] = sums[:half] + rates[i]
    return bool(np.all(sums <= table + tol))
