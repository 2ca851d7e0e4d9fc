"""Dyadic (Littlewood-Paley) frequency decomposition and Besov norms.

The partition of unity on the represented frequencies is, in the default
"sharp" mode,

    rho_{-1} = 1 on |k| <= 1,
    rho_j    = 1 on 2^j < |k| <= 2^{j+1}   for 0 <= j < j_max,
    rho_{j_max} = 1 on |k| > 2^{j_max},

so the sum over blocks is exactly one at every lattice frequency; the top
block absorbs the corner modes above the last full annulus.  A smooth mode
replaces the indicators by the usual C^infty radial bumps built from
chi(r) = 1 for r <= 3/4, 0 for r >= 4/3 (block profiles supported in
[3/4 * 2^j, 8/3 * 2^j]), with the same absorbing top block.

Norm conventions:

* block L^p norms use the normalized (probability) measure for finite p and
  the max over the 2x oversampled point set for p = infinity;
* besov_norm(f, alpha, p, q) = ( sum_j 2^{alpha j q} ||D_j f||_p^q )^{1/q},
  with the sup convention at q = infinity;
* hoelder_norm(f, alpha) = besov_norm(f, alpha, inf, inf);
* weighted trajectory norms carry the blow-up weight t^gamma, and the
  parabolic space-time norm adds the t^{gamma}-weighted time-Hoelder
  seminorm of exponent alpha/2 measured in L^infinity.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, RealField, embed_spectral

_INF = np.inf


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C^infty transition, 0 for t <= 0 and 1 for t >= 1."""
    out = np.zeros_like(t)
    inside = (t > 0) & (t < 1)
    ti = t[inside]
    a = np.exp(-1.0 / ti)
    b = np.exp(-1.0 / (1.0 - ti))
    out[inside] = a / (a + b)
    out[t >= 1] = 1.0
    return out


def _chi(r: np.ndarray) -> np.ndarray:
    """Radial cutoff: 1 on r <= 3/4, 0 on r >= 4/3, smooth in between."""
    return 1.0 - _smooth_step((r - 0.75) / (4.0 / 3.0 - 0.75))


class DyadicPartition:
    """Block multipliers rho_j(k) for j = -1 .. j_max on a fixed grid."""

    def __init__(self, grid: Grid, mode: str = "sharp"):
        if mode not in ("sharp", "smooth"):
            raise ValueError(f"mode must be 'sharp' or 'smooth', got {mode!r}")
        self.grid = grid
        self.mode = mode
        self.j_max = grid.j_max
        self.levels = list(range(-1, self.j_max + 1))
        r = grid.k_abs
        profiles = np.zeros((len(self.levels), grid.n, grid.n))
        if mode == "sharp":
            profiles[0] = (r <= 1.0).astype(float)
            for j in range(0, self.j_max):
                profiles[j + 1] = ((r > 2.0**j) & (r <= 2.0 ** (j + 1))).astype(float)
            profiles[self.j_max + 1] = (r > 2.0**self.j_max).astype(float)
        else:
            profiles[0] = _chi(r)
            for j in range(0, self.j_max):
                profiles[j + 1] = _chi(r / 2.0 ** (j + 1)) - _chi(r / 2.0**j)
            profiles[self.j_max + 1] = 1.0 - _chi(r / 2.0**self.j_max)
        self.profiles = profiles
        # caches keyed by field identity; evicted when fields are collected
        self._block_values_2x = weakref.WeakKeyDictionary()
        self._block_sups = weakref.WeakKeyDictionary()

    # -- blocks ---------------------------------------------------------

    def _index(self, j: int) -> int:
        if not (-1 <= j <= self.j_max):
            raise ValueError(f"block index {j} outside [-1, {self.j_max}]")
        return j + 1

    def profile(self, j: int) -> np.ndarray:
        return self.profiles[self._index(j)]

    def block(self, f: RealField, j: int) -> RealField:
        return f.apply_multiplier(self.profile(j))

    def blocks_spec(self, f: RealField) -> np.ndarray:
        """Stack of block coefficient tables, shape (j_max+2, n, n)."""
        return self.profiles * f.spec[None, :, :]

    def block_values_2x(self, f: RealField) -> np.ndarray:
        """Block point values on the 2x oversampled grid (cached)."""
        cached = self._block_values_2x.get(f)
        if cached is None:
            n = self.grid.n
            stack = np.empty((len(self.levels), 2 * n, 2 * n))
            spec = f.spec
            for idx in range(len(self.levels)):
                big = embed_spectral(self.profiles[idx] * spec)
                stack[idx] = np.fft.ifft2(big * (2 * n) ** 2).real
            self._block_values_2x[f] = stack
            cached = stack
        return cached

    def block_sup_norms(self, f: RealField) -> np.ndarray:
        cached = self._block_sups.get(f)
        if cached is None:
            vals = self.block_values_2x(f)
            cached = np.max(np.abs(vals), axis=(1, 2))
            self._block_sups[f] = cached
        return cached

    # -- localizers -------------------------------------------------------

    def low_profile(self, level: float) -> np.ndarray:
        """Multiplier of D_{<=level} = sum_{j <= level} D_j."""
        mask = np.zeros((self.grid.n, self.grid.n))
        for j in self.levels:
            if j <= level:
                mask += self.profiles[self._index(j)]
        return mask

    def localize_low(self, f: RealField, level: float) -> RealField:
        return f.apply_multiplier(self.low_profile(level))

    def localize_high(self, f: RealField, level: float) -> RealField:
        """D_{>level} f = f - D_{<=level} f (exact complement)."""
        return f.apply_multiplier(1.0 - self.low_profile(level))

    # -- norms --------------------------------------------------------------

    def block_lp_norms(self, f: RealField, p) -> np.ndarray:
        if p == _INF:
            return self.block_sup_norms(f)
        if p not in (1, 2):
            raise ValueError("p must be 1, 2 or inf")
        spec_stack = self.blocks_spec(f)
        n = self.grid.n
        out = np.empty(len(self.levels))
        for idx in range(len(self.levels)):
            vals = np.fft.ifft2(spec_stack[idx] * n**2).real
            out[idx] = np.mean(np.abs(vals) ** p) ** (1.0 / p)
        return out

    def besov_norm(self, f: RealField, alpha: float, p=_INF, q=_INF) -> float:
        if q not in (1, 2, _INF):
            raise ValueError("q must be 1, 2 or inf")
        norms = self.block_lp_norms(f, p)
        weights = 2.0 ** (alpha * np.array(self.levels, dtype=float))
        terms = weights * norms
        if q == _INF:
            return float(np.max(terms))
        return float(np.sum(terms**q) ** (1.0 / q))

    def hoelder_norm(self, f: RealField, alpha: float) -> float:
        return self.besov_norm(f, alpha, _INF, _INF)

    def weighted_norms(self, traj, alpha: float, gamma: float) -> "WeightedNormReport":
        return weighted_norms(self, traj, alpha, gamma)


def hoelder_direct(f: RealField, alpha: float, max_shift: int = None) -> float:
    """Classical Hoelder functional sup |f| + sup |f(x+h)-f(x)| / |h|^alpha.

    Evaluated over grid translations h of the 2x oversampled samples; a
    diagnostic companion to the dyadic norm, not used by it.
    """
    if not 0 < alpha < 1:
        raise ValueError("direct Hoelder functional needs 0 < alpha < 1")
    vals = f.values_2x
    m = vals.shape[0]
    h = 2 * np.pi / m
    best = 0.0
    shifts = []
    s = 1
    limit = max_shift if max_shift is not None else m // 2
    while s <= limit:
        shifts.append(s)
        s *= 2
    for s in shifts:
        for axis in (0, 1):
            diff = np.max(np.abs(np.roll(vals, s, axis=axis) - vals))
            best = max(best, diff / (s * h) ** alpha)
    return float(np.max(np.abs(vals)) + best)


@dataclass
class WeightedNormReport:
    """Weighted space and space-time norms of a trajectory.

    c_norm       sup_t t^gamma ||f(t)||_alpha
    hoelder_time sup_{s<t} s^gamma ||f(t)-f(s)||_inf / (t-s)^{alpha/2}
    s_norm       their sum (the parabolic space-time norm)
    """

    alpha: float
    gamma: float
    c_norm: float
    hoelder_time: float
    s_norm: float = field(init=False)

    def __post_init__(self):
        self.s_norm = self.c_norm + self.hoelder_time


def _time_weight(t: float, gamma: float) -> float:
    if t == 0.0:
        return 1.0 if gamma == 0.0 else 0.0
    return t**gamma


def weighted_norms(partition: DyadicPartition, traj, alpha: float, gamma: float) -> WeightedNormReport:
    """Report the weighted Besov sup and the parabolic time-Hoelder seminorm.

    The sup effectively starts at the first positive mesh time when gamma > 0
    (the t = 0 snapshot carries weight zero).
    """
    times = np.asarray(traj.times, dtype=float)
    snaps = traj.snapshots
    c_norm = 0.0
    for t, f in zip(times, snaps):
        w = _time_weight(float(t), gamma)
        if w > 0.0:
            c_norm = max(c_norm, w * partition.hoelder_norm(f, alpha))
    hoelder = 0.0
    padded = [f.values_2x for f in snaps]
    for a in range(len(times)):
        w = _time_weight(float(times[a]), gamma)
        if w == 0.0:
            continue
        for b in range(a + 1, len(times)):
            dt = float(times[b] - times[a])
            diff = float(np.max(np.abs(padded[b] - padded[a])))
            hoelder = max(hoelder, w * diff / dt ** (alpha / 2.0))
    return WeightedNormReport(alpha=alpha, gamma=gamma, c_norm=c_norm, hoelder_time=hoelder)


def norm_report_rows(report: WeightedNormReport, grid_n: int, seed=None):
    """Rows for the norm-report CSV schema (quantity, alpha, gamma, value, grid_n, seed)."""
    s = "" if seed is None else seed
    return [
        ("c_norm", report.alpha, report.gamma, report.c_norm, grid_n, s),
        ("hoelder_time", report.alpha, report.gamma, report.hoelder_time, grid_n, s),
        ("s_norm", report.alpha, report.gamma, report.s_norm, grid_n, s),
    ]
