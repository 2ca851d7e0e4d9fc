"""White-noise sampling, mollification levels and the renormalization constant.

Normalization convention (the one every reported constant depends on):

    E |eta_hat_k|^2 = (2 pi)^{-2}   for every represented mode k != 0,

so that E[eta(x) eta(y)] approximates the Dirac kernel under the transform
convention used in :mod:`paratorus.grid`.  The zero mode is dropped (no
non-decaying constant in the heat integral) and Nyquist lines are never
populated.  Sampling uses the counter-based Philox generator keyed by the
seed with a single fixed-order draw, which pins the field bit-for-bit
across runs and platforms.

The renormalization constant is the exact expectation of the resonant
product of the heat integral against the noise,

    c_n(t) = (2 pi)^{-2} sum_{k != 0} w(k) lowpass_n(k)^2 (1-e^{-t|k|^2})/|k|^2,

with resonance weight w(k) = sum_{|i-j|<=1} rho_i(k) rho_j(k) (identically 1
for the sharp partition), summed over the represented modes.  It is computed
by direct lattice summation, never by Monte Carlo.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from .dyadic import DyadicPartition
from .grid import Grid, RealField, _reflect, load_field, save_field
from .heat import duhamel_static
from .paraproducts import resonant

NOISE_VARIANCE = (2.0 * np.pi) ** -2
NORMALIZATION = "E|eta_hat_k|^2 = (2*pi)^-2, zero mode dropped"

Level = Union[int, str]


def _check_level(partition: DyadicPartition, level: Level, headroom: int = 0) -> Level:
    if level == "full":
        return level
    if not isinstance(level, (int, np.integer)):
        raise ValueError(f"level must be an integer or 'full', got {level!r}")
    level = int(level)
    top = partition.grid.j_max - headroom
    if not -1 <= level <= top:
        raise ValueError(
            f"level {level} outside [-1, {top}] on grid n={partition.grid.n}"
            + (" (resonance headroom)" if headroom else "")
        )
    return level


@dataclass(frozen=True)
class NoiseSample:
    """A realization of spatial white noise, possibly low-passed."""

    grid: Grid
    seed: int
    eta: RealField
    level: Level = "full"


def sample_white_noise(grid: Grid, seed: int) -> NoiseSample:
    """Draw one white-noise field, deterministic in (grid, seed)."""
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    draw = rng.standard_normal((2, grid.n, grid.n))
    c = (draw[0] + 1j * draw[1]) * (NOISE_VARIANCE / 2.0) ** 0.5
    spec = (c + np.conj(_reflect(c))) / np.sqrt(2.0)
    spec[0, 0] = 0.0
    spec[grid.nyquist_mask] = 0.0
    return NoiseSample(grid=grid, seed=int(seed), eta=RealField(grid, spec=spec), level="full")


def lowpass_sample(partition: DyadicPartition, sample: NoiseSample, level: Level) -> NoiseSample:
    """eta_n = (blocks <= n) eta; 'full' is the identity."""
    level = _check_level(partition, level)
    if level == "full":
        return sample
    return NoiseSample(
        grid=sample.grid,
        seed=sample.seed,
        eta=partition.localize_low(sample.eta, level),
        level=level,
    )


class ZeroCn:
    """Stand-in constant evaluator for deterministic (non-random) inputs."""

    def value(self, t: float) -> float:
        if t < 0:
            raise ValueError("renormalization constant needs t >= 0")
        return 0.0

    __call__ = value


class CnEvaluator:
    """Direct lattice evaluation of c_n(t) with a precomputed weight table."""

    def __init__(self, partition: DyadicPartition, level: Level):
        self.partition = partition
        self.level = _check_level(partition, level)
        grid = partition.grid
        profiles = partition.profiles
        bracket = np.zeros((grid.n, grid.n))
        for i in range(profiles.shape[0]):
            lo, hi = max(i - 1, 0), min(i + 1, profiles.shape[0] - 1)
            bracket += profiles[i] * profiles[lo : hi + 1].sum(axis=0)
        if self.level == "full":
            lowpass = np.ones((grid.n, grid.n))
        else:
            lowpass = partition.low_profile(self.level)
        represented = (grid.k_sq > 0) & ~grid.nyquist_mask
        weight = NOISE_VARIANCE * bracket * lowpass**2
        self._w = (weight[represented] / grid.k_sq[represented]).ravel()
        self._ksq = grid.k_sq[represented].ravel()

    def value(self, t: float) -> float:
        if t < 0:
            raise ValueError("renormalization constant needs t >= 0")
        return float(np.sum(self._w * (-np.expm1(-self._ksq * t))))

    __call__ = value


def renorm_constant(partition: DyadicPartition, level: Level, t: float) -> float:
    """c_n(t); strictly positive times only."""
    if t <= 0:
        raise ValueError("renorm_constant needs t > 0")
    return CnEvaluator(partition, level).value(t)


@dataclass
class EnhancedNoise:
    """Noise plus its renormalized resonant companion XI(t) = I(eta_n) o eta_n - c_n(t).

    ``resonant_renorm`` holds the companion fields at the reference times;
    :meth:`resonant_renormalized` evaluates at any t >= 0 on demand.  All
    fields are reproducible from (seed, level, t).
    """

    eta: NoiseSample
    level: Level
    kappa: float
    times: np.ndarray
    resonant_renorm: List[RealField]
    c_table: List[float]
    partition: DyadicPartition
    _cn: object  # CnEvaluator or ZeroCn

    def c(self, t: float) -> float:
        return self._cn.value(t)

    def resonant_renormalized(self, t: float) -> RealField:
        grid = self.eta.grid
        if t == 0.0:
            return RealField.zeros(grid)
        x = resonant(self.partition, duhamel_static(self.eta.eta, t), self.eta.eta)
        return x - RealField.constant(grid, self._cn.value(t))

    def resonant_raw(self, t: float) -> RealField:
        return resonant(self.partition, duhamel_static(self.eta.eta, t), self.eta.eta)


def enhance(
    partition: DyadicPartition,
    sample: NoiseSample,
    level: Level,
    times: Sequence[float],
    kappa: float = 0.1,
    counterterm: bool = True,
) -> EnhancedNoise:
    """Low-pass to the level, integrate, form the renormalized resonant product.

    Integer levels need resonance headroom: level <= j_max - 2.  The Wick
    constant models the variance of a *white* sample; pass
    ``counterterm=False`` when the field is deterministic (smooth test data,
    the zero field) so nothing gets subtracted.
    """
    level = _check_level(partition, level, headroom=2)
    low = lowpass_sample(partition, sample, level)
    cn = CnEvaluator(partition, level) if counterterm else ZeroCn()
    times = np.asarray(list(times), dtype=float)
    if np.any(times < 0):
        raise ValueError("reference times must be nonnegative")
    enh = EnhancedNoise(
        eta=low,
        level=level,
        kappa=float(kappa),
        times=times,
        resonant_renorm=[],
        c_table=[],
        partition=partition,
        _cn=cn,
    )
    for t in times:
        enh.resonant_renorm.append(enh.resonant_renormalized(float(t)))
        enh.c_table.append(cn.value(float(t)) if t > 0 else 0.0)
    return enh


# -- bundle serialization --------------------------------------------------


def save_bundle(enh: EnhancedNoise, directory) -> None:
    os.makedirs(directory, exist_ok=True)
    save_field(enh.eta.eta, os.path.join(directory, "eta.pcf"))
    names = []
    for idx, f in enumerate(enh.resonant_renorm):
        name = f"resonant_renorm_{idx:05d}.pcf"
        save_field(f, os.path.join(directory, name))
        names.append(name)
    manifest = {
        "seed": enh.eta.seed,
        "grid_n": enh.eta.grid.n,
        "level": enh.level,
        "kappa": enh.kappa,
        "partition_mode": enh.partition.mode,
        "times": [float(t) for t in enh.times],
        "c_table": [float(c) for c in enh.c_table],
        "normalization": NORMALIZATION,
        "counterterm": isinstance(enh._cn, CnEvaluator),
        "resonant_fields": names,
    }
    with open(os.path.join(directory, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_bundle(directory) -> EnhancedNoise:
    with open(os.path.join(directory, "manifest.json")) as fh:
        manifest = json.load(fh)
    eta = load_field(os.path.join(directory, "eta.pcf"))
    grid = eta.grid
    if grid.n != manifest["grid_n"]:
        raise ValueError("bundle manifest grid does not match stored field")
    partition = DyadicPartition(grid, mode=manifest["partition_mode"])
    level = manifest["level"]
    if level != "full":
        level = int(level)
    sample = NoiseSample(grid=grid, seed=int(manifest["seed"]), eta=eta, level=level)
    fields = [
        load_field(os.path.join(directory, name))
        for name in manifest["resonant_fields"]
    ]
    return EnhancedNoise(
        eta=sample,
        level=level,
        kappa=float(manifest["kappa"]),
        times=np.asarray(manifest["times"], dtype=float),
        resonant_renorm=fields,
        c_table=[float(c) for c in manifest["c_table"]],
        partition=partition,
        _cn=CnEvaluator(partition, level)
        if manifest.get("counterterm", True)
        else ZeroCn(),
    )
