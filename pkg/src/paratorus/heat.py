"""Heat semigroup, Duhamel integration and the transport-heat stepper.

The heat semigroup P_t is the exact Fourier multiplier exp(-|k|^2 t).  The
Duhamel map

    (I f)(t) = int_0^t P_{t-s} f(s) ds

is integrated per mode exactly against forcing held piecewise constant in
time at the left mesh point, i.e. the first-order exponential update

    Ihat(t_{m+1}) = e^{-|k|^2 h} Ihat(t_m) + fhat(t_m) h phi1(h |k|^2),

with phi1(z) = (1 - e^{-z})/z.  For forcing constant in time this is exact;
in general it is a first-order scheme, and it is the same update all the
solvers use.  ``duhamel_static`` is the closed form for time-independent
forcing.

``solve_transport_heat`` steps w(t+h) = P_h w(t) + h P_h (b . grad w + f),
the smoothed first-order update whose L^infinity ledger the maximum
principle monitor checks.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .dyadic import DyadicPartition
from .grid import Grid, RealField, load_field, multiply, save_field
from .paraproducts import para_lt


class NumericalBlowUpError(RuntimeError):
    """Sup norm passed the guard threshold during time stepping."""

    def __init__(self, time: float, norm: float):
        super().__init__(f"solution norm {norm:.3e} exceeded guard at t={time:.6g}")
        self.time = time
        self.norm = norm


BLOWUP_GUARD = 1e6


@dataclass
class Trajectory:
    """Time-indexed snapshots of a field on a shared grid.

    times are strictly increasing and nonnegative; a mesh may start after 0
    (singular-weight forcings mark the origin as excluded simply by not
    sampling it).
    """

    times: np.ndarray
    snapshots: List[RealField]

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.times) != len(self.snapshots):
            raise ValueError("times and snapshots length mismatch")
        if len(self.times) == 0:
            raise ValueError("empty trajectory")
        if not np.all(np.isfinite(self.times)):
            raise ValueError("non-finite mesh times")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("mesh times must be strictly increasing")
        if self.times[0] < 0:
            raise ValueError("mesh times must be nonnegative")
        g = self.snapshots[0].grid
        for f in self.snapshots:
            if f.grid != g:
                raise ValueError("snapshots live on different grids")

    @property
    def grid(self) -> Grid:
        return self.snapshots[0].grid

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i) -> RealField:
        return self.snapshots[i]

    def sup_over_time(self) -> float:
        return max(f.grid_max() for f in self.snapshots)


def heat_multiplier(grid: Grid, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError("heat flow needs t >= 0")
    return np.exp(-grid.k_sq * t)


def heat(f: RealField, t: float) -> RealField:
    """P_t f via the exact multiplier."""
    return f.apply_multiplier(heat_multiplier(f.grid, t))


def _phi1(z: np.ndarray) -> np.ndarray:
    """(1 - exp(-z))/z, with the removable singularity filled at z = 0."""
    z = np.asarray(z, dtype=float)
    out = np.ones_like(z)
    nz = z > 0
    out[nz] = -np.expm1(-z[nz]) / z[nz]
    return out


def duhamel_step(grid: Grid, acc_spec: np.ndarray, f_spec: np.ndarray, h: float) -> np.ndarray:
    """One exponential-quadrature update of the Duhamel accumulator."""
    decay = np.exp(-grid.k_sq * h)
    return decay * acc_spec + f_spec * (h * _phi1(grid.k_sq * h))


def duhamel(forcing: Trajectory) -> Trajectory:
    """I f on the forcing mesh, I f(times[0]) = 0."""
    grid = forcing.grid
    acc = np.zeros((grid.n, grid.n), dtype=np.complex128)
    out = [RealField.zeros(grid)]
    for m in range(len(forcing) - 1):
        h = float(forcing.times[m + 1] - forcing.times[m])
        acc = duhamel_step(grid, acc, forcing.snapshots[m].spec, h)
        out.append(RealField(grid, spec=acc.copy()))
    return Trajectory(times=forcing.times.copy(), snapshots=out)


def duhamel_static(f: RealField, t: float) -> RealField:
    """Closed form of I f at time t for time-independent forcing f.

    Multiplier (1 - e^{-|k|^2 t})/|k|^2, with t at the zero mode.
    """
    if t < 0:
        raise ValueError("duhamel_static needs t >= 0")
    grid = f.grid
    mult = t * _phi1(grid.k_sq * t)
    return f.apply_multiplier(mult)


def duhamel_commutator(
    partition: DyadicPartition, f_traj: Trajectory, g_traj: Trajectory
) -> Trajectory:
    """[I, f <<] g = I(f << g) - f << I(g) on the shared mesh."""
    if len(f_traj) != len(g_traj) or not np.allclose(f_traj.times, g_traj.times):
        raise ValueError("commutator needs matching meshes")
    prods = Trajectory(
        times=f_traj.times.copy(),
        snapshots=[
            para_lt(partition, f_traj[m], g_traj[m]) for m in range(len(f_traj))
        ],
    )
    left = duhamel(prods)
    ig = duhamel(g_traj)
    snaps = [
        left[m] - para_lt(partition, f_traj[m], ig[m]) for m in range(len(f_traj))
    ]
    return Trajectory(times=f_traj.times.copy(), snapshots=snaps)


def grad(f: RealField) -> Tuple[RealField, RealField]:
    g = f.grid
    return (
        RealField(g, spec=1j * g.kx * f.spec),
        RealField(g, spec=1j * g.ky * f.spec),
    )


def solve_transport_heat(
    b: Optional[Sequence[Tuple[RealField, RealField]]],
    f: Optional[Trajectory],
    w0: RealField,
    times: Optional[np.ndarray] = None,
) -> Trajectory:
    """Step dw/dt = Lap w + b . grad w + f from w0 along the mesh.

    The mesh is taken from the forcing trajectory unless given explicitly;
    b, when present, is a sequence of (b1, b2) field pairs aligned with the
    mesh.  A CFL-style guard dt <= dx / max|b| rejects under-resolved drifts,
    and the blow-up guard aborts unstable runs with a diagnostic.
    """
    if times is None:
        if f is None:
            raise ValueError("need a forcing trajectory or an explicit mesh")
        times = f.times
    times = np.asarray(times, dtype=float)
    grid = w0.grid
    if f is not None and len(f) != len(times):
        raise ValueError("forcing mesh mismatch")
    if b is not None:
        if len(b) != len(times):
            raise ValueError("drift mesh mismatch")
        bmax = max(max(b1.grid_max(), b2.grid_max()) for b1, b2 in b)
        hmax = float(np.max(np.diff(times)))
        if bmax > 0 and hmax > grid.spacing / bmax:
            raise ValueError(
                f"transport step violates dt <= dx/max|b| ({hmax:.3g} > "
                f"{grid.spacing / bmax:.3g})"
            )
    w = w0
    out = [w0]
    for m in range(len(times) - 1):
        h = float(times[m + 1] - times[m])
        rhs = RealField.zeros(grid)
        if b is not None:
            wx, wy = grad(w)
            rhs = rhs + multiply(b[m][0], wx) + multiply(b[m][1], wy)
        if f is not None:
            rhs = rhs + f[m]
        w = heat(w + h * rhs, h)
        nrm = w.grid_max()
        if not np.isfinite(nrm) or nrm > BLOWUP_GUARD:
            raise NumericalBlowUpError(float(times[m + 1]), nrm)
        out.append(w)
    return Trajectory(times=times.copy(), snapshots=out)


# -- serialization --------------------------------------------------------


def save_trajectory(traj: Trajectory, directory, dt: float = None, gamma: float = None, extra: dict = None) -> None:
    os.makedirs(directory, exist_ok=True)
    names = []
    for idx, snap in enumerate(traj.snapshots):
        name = f"t{idx:05d}.pcf"
        save_field(snap, os.path.join(directory, name))
        names.append(name)
    manifest = {
        "times": [float(t) for t in traj.times],
        "grid_n": traj.grid.n,
        "dt": dt,
        "gamma": gamma,
        "fields": names,
    }
    if extra:
        manifest.update(extra)
    with open(os.path.join(directory, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_trajectory(directory) -> Trajectory:
    with open(os.path.join(directory, "manifest.json")) as fh:
        manifest = json.load(fh)
    snaps = [load_field(os.path.join(directory, name)) for name in manifest["fields"]]
    return Trajectory(times=np.array(manifest["times"]), snapshots=snaps)
