"""Solvers for (d/dt - Lap) u = F(u) eta and the paracontrolled bookkeeping.

Three integrators share one first-order exponential step (heat part exact,
forcing frozen at the left mesh point):

* ``solve_naive``          ℒu = F(u) eta_n, no counterterm;
* ``solve_renormalized``   ℒu = F(u) eta_n − c_n(t) F(u) F′(u);
* ``solve_paracontrolled`` the same renormalized dynamics, but the rough
  product F(u) eta is reconstructed each step from its paraproduct
  decomposition

      F(u) ≺ eta + F(u) ≻ eta
      + (F(u) − F′(u)≺u) ∘ eta + (F′(u) ≺ u♯) ∘ eta
      + com(F′(u), F(u)≺ℐ(eta), eta) + F′(u) com(F(u), ℐ(eta), eta)
      + F(u) F′(u) (ℐ(eta) ∘ eta − c_n)

  with the stored renormalized resonant data, while the remainder
  u♯ = u − F(u) ≺ ℐ(Δ_{>R} eta) is accumulated by an independent recursion
  so that the ansatz identity is a genuine consistency check rather than a
  definition.  In diagnostic mode the remainder is further split into a
  rough lane u1♯ (commutator, F(u) ≻ high noise, high part of the resonant
  data) and a bounded lane u2♯ (everything else, including the
  renormalization counterterm, whose forcing stays in L^inf), and the
  maximum-principle inequality for the bounded lane is monitored.

The exponent budget follows the contraction bookkeeping: all derived
exponents are explicit rational functions of (kappa, alpha, epsilon, delta)
and the final condition is Theta (1+delta)(1+epsilon) / (1-delta+epsilon(1+delta)) < 1.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional, Union

import numpy as np

from .dyadic import DyadicPartition
from .grid import Grid, RealField, multiply
from .heat import (
    BLOWUP_GUARD,
    NumericalBlowUpError,
    Trajectory,
    _phi1,
    duhamel_static,
)
from .noise import EnhancedNoise, NoiseSample
from .nonlinearity import NonlinearitySpec
from .paraproducts import apply_pointwise, para_gt, para_lt, resonant


# -- exponent budget -------------------------------------------------------


def kappa_threshold() -> float:
    """Smaller root of 4 k^2 - 7 k + 1 = 0, the admissible-kappa supremum."""
    return (7.0 - np.sqrt(33.0)) / 8.0


@dataclass
class ParameterBudget:
    """Regularity/cutoff parameters and their derived contraction exponents.

    gamma defaults to (2 alpha + kappa - 1)/2.  R and R1 are dyadic cutoff
    levels; None means "grid top minus three", resolved at solve time.
    """

    kappa: float
    alpha: float
    epsilon: float = 1e-3
    delta: float = 0.101
    R: Optional[int] = None
    R1: Optional[int] = None
    gamma: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.kappa < 1.0:
            raise ValueError("kappa must lie in (0, 1)")
        if not 2.0 / 3.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (2/3, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0.0 <= self.delta < 1.0:
            raise ValueError("delta must lie in [0, 1)")
        if self.gamma is None:
            self.gamma = (2.0 * self.alpha + self.kappa - 1.0) / 2.0

    # Each exponent is returned as +inf when its denominator closes, which
    # the audit reports as infeasible instead of raising.

    @property
    def theta0(self) -> float:
        return (self.kappa + self.epsilon) / (2.0 * self.alpha - 1.0 + self.kappa)

    @property
    def theta1(self) -> float:
        den = self.alpha - 2.0 * self.kappa - self.epsilon
        return np.inf if den <= 0 else (2.0 * self.kappa + self.epsilon) / den

    @property
    def theta(self) -> float:
        k, a, e = self.kappa, self.alpha, self.epsilon
        den = 2.0 - a - 2.0 * k + a * k + (e / 2.0) * (3.0 * a - 1.0 + k)
        return np.inf if den <= 0 else a * (1.0 + k + e) / den

    @property
    def Theta(self) -> float:
        branches = [self.theta]
        if self.theta0 < 1.0:
            branches.append(self.delta / (1.0 - self.theta0))
        else:
            branches.append(np.inf)
        t1 = self.theta1
        if np.isfinite(t1):
            den = (2.0 - self.epsilon / 2.0) * (1.0 - t1) + self.alpha * t1
            branches.append(np.inf if den <= 0 else self.alpha * t1 / den)
        else:
            branches.append(np.inf)
        return max(branches)


@dataclass(frozen=True)
class BudgetReport:
    feasible: bool
    margin: float
    kappa_admissible: bool
    exponents: dict


def audit_budget(p: ParameterBudget) -> BudgetReport:
    """Evaluate the contraction condition Theta (1+d)(1+e)/(1-d+e(1+d)) < 1."""
    den = 1.0 - p.delta + p.epsilon * (1.0 + p.delta)
    if den <= 0 or not np.isfinite(p.Theta):
        factor = np.inf
    else:
        factor = p.Theta * (1.0 + p.delta) * (1.0 + p.epsilon) / den
    margin = 1.0 - factor
    return BudgetReport(
        feasible=bool(margin > 0),
        margin=float(margin),
        kappa_admissible=bool(p.kappa < kappa_threshold()),
        exponents={
            "theta0": float(p.theta0),
            "theta1": float(p.theta1),
            "theta": float(p.theta),
            "Theta": float(p.Theta),
            "gamma": float(p.gamma),
        },
    )


def limit_margin(kappa: float) -> float:
    """Contraction margin in the limit epsilon -> 0, alpha -> 2/3, delta -> kappa.

    The three Theta branches collapse to (1+k)/(2(1-k)), k(1+3k) and
    k/(1-5k); the margin crosses zero exactly at the threshold root of
    4 k^2 - 7 k + 1.  Returns -inf once the last branch closes (k >= 1/5).
    """
    k = float(kappa)
    if k <= 0 or k >= 1:
        raise ValueError("kappa must lie in (0, 1)")
    if k >= 0.2:
        return -np.inf
    theta_lim = (1.0 + k) / (2.0 * (1.0 - k))
    big_theta = max(theta_lim, k * (1.0 + 3.0 * k), k / (1.0 - 5.0 * k))
    return 1.0 - big_theta * (1.0 + k) / (1.0 - k)


def threshold_from_margin(lo: float = 0.01, hi: float = 0.199, tol: float = 1e-14) -> float:
    """Recover the kappa threshold by bisecting the limiting margin."""
    if not (limit_margin(lo) > 0 > limit_margin(hi)):
        raise ValueError("bracket does not straddle the threshold")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if limit_margin(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- shared stepping pieces -------------------------------------------------


class _Stepper:
    """P = one exact heat step, Q = integral of P over the step (per mode)."""

    def __init__(self, grid: Grid, dt: float):
        self.dt = dt
        self._decay = np.exp(-grid.k_sq * dt)
        self._qmult = dt * _phi1(grid.k_sq * dt)

    def P(self, f: RealField) -> RealField:
        return f.apply_multiplier(self._decay)

    def Q(self, f: RealField) -> RealField:
        return f.apply_multiplier(self._qmult)


def _mesh(dt: float, T: float) -> np.ndarray:
    if dt <= 0 or T <= 0:
        raise ValueError("dt and T must be positive")
    steps = int(round(T / dt))
    if steps < 1 or abs(steps * dt - T) > 1e-9 * max(1.0, T):
        raise ValueError("T must be a whole number of dt steps")
    return np.arange(steps + 1) * dt


def _keep_indices(steps: int, max_snapshots: int = 129) -> set:
    stride = max(1, steps // max(1, max_snapshots - 1))
    kept = set(range(0, steps + 1, stride))
    kept.add(steps)
    return kept


def _guard(f: RealField, t: float) -> float:
    m = f.grid_max()
    if not np.isfinite(m) or m > BLOWUP_GUARD:
        raise NumericalBlowUpError(t, m)
    return m


def _noise_field(eta) -> RealField:
    return eta.eta if isinstance(eta, NoiseSample) else eta


# -- naive and renormalized solvers ----------------------------------------


def solve_naive(
    eta_n,
    F: NonlinearitySpec,
    u0: RealField,
    dt: float,
    T: float,
    max_snapshots: int = 129,
) -> Trajectory:
    """First-order exponential stepping of ℒu = F(u) eta, no counterterm."""
    return solve_renormalized(eta_n, None, F, u0, dt, T, max_snapshots=max_snapshots)


def solve_renormalized(
    eta_n,
    c_n,
    F: NonlinearitySpec,
    u0: RealField,
    dt: float,
    T: float,
    max_snapshots: int = 129,
) -> Trajectory:
    """ℒu = F(u) eta − c_n(t) F(u) F′(u), counterterm frozen per step.

    ``c_n`` may be a callable t -> c, a constant, or None (no counterterm,
    which is the naive solver).  The counterterm is realized as
    c · multiply(F(u), F′(u)) on the projected factors — the same reading
    the paracontrolled product uses, so the two solvers are comparable to
    integrator tolerance.
    """
    eta = _noise_field(eta_n)
    grid = u0.grid
    if eta.grid != grid:
        raise ValueError("noise and initial data on different grids")
    times = _mesh(dt, T)
    steps = len(times) - 1
    kept = _keep_indices(steps, max_snapshots)
    stepper = _Stepper(grid, dt)
    if c_n is None:
        c_fn = None
    elif callable(c_n):
        c_fn = c_n
    else:
        c_fn = lambda t, _c=float(c_n): _c

    u = u0
    out_t, out_f = [0.0], [u0]
    for m in range(steps):
        q = apply_pointwise(F.f, u)
        forcing = multiply(q, eta)
        if c_fn is not None:
            c = float(c_fn(times[m]))
            if c != 0.0:
                p = apply_pointwise(F.df, u)
                forcing = forcing - c * multiply(q, p)
        u = stepper.P(u) + stepper.Q(forcing)
        _guard(u, times[m + 1])
        if m + 1 in kept:
            out_t.append(times[m + 1])
            out_f.append(u)
    return Trajectory(times=np.asarray(out_t), snapshots=out_f)


# -- paracontrolled product and solver --------------------------------------


def paracontrolled_product(
    partition: DyadicPartition,
    q: RealField,
    p: RealField,
    eta: RealField,
    xi_raw: RealField,
    c: float,
) -> RealField:
    """q·eta read through the five-term resonant decomposition.

    With u = q ≺ ℐ(eta) + u♯ the five resonant terms telescope: the two
    com(...) expansions cancel their shared p·((q≺ℐeta)∘eta) piece and the
    paralinearization pieces resum, leaving

        q ≺ eta + q ≻ eta + q ∘ eta
        − p·(q·(ℐeta ∘ eta)) + (q p)·(ℐeta ∘ eta − c).

    ``xi_raw`` is the computed resonant ℐ(eta)∘eta at the current time and
    ``c`` the renormalization constant; for c = 0 the X-dependent terms
    cancel and the result reproduces multiply(q, eta) up to the Bony
    identity defect.
    """
    xi_ren = xi_raw - RealField.constant(xi_raw.grid, c) if c != 0.0 else xi_raw
    res = (
        resonant(partition, q, eta)
        - multiply(p, multiply(q, xi_raw))
        + multiply(multiply(q, p), xi_ren)
    )
    return para_lt(partition, q, eta) + para_gt(partition, q, eta) + res


@dataclass
class SolverState:
    """Snapshot of the paracontrolled decomposition at one mesh time."""

    t: float
    u: RealField
    u1: RealField
    u_sharp: RealField
    u1_sharp: Optional[RealField] = None
    u2_sharp: Optional[RealField] = None


@dataclass
class SolverStream:
    """Retained states plus the full-resolution scalar ledger.

    Ledger rows are dicts {"time", "name", "value"}; states are kept on a
    stride (field snapshots at every step would dwarf memory on long runs).
    """

    budget: ParameterBudget
    audit: BudgetReport
    states: List[SolverState]
    ledger: List[dict] = dc_field(default_factory=list)

    def add(self, t: float, name: str, value: float) -> None:
        self.ledger.append({"time": float(t), "name": name, "value": float(value)})

    def series(self, name: str):
        rows = [(r["time"], r["value"]) for r in self.ledger if r["name"] == name]
        ts = np.array([r[0] for r in rows])
        vs = np.array([r[1] for r in rows])
        return ts, vs


def solve_paracontrolled(
    enh: EnhancedNoise,
    F: NonlinearitySpec,
    u0: RealField,
    dt: float,
    T: float,
    p: ParameterBudget,
    diagnostic: bool = False,
    max_snapshots: int = 129,
    norm_stride: Optional[int] = None,
):
    """Paracontrolled stepping with independently accumulated remainder.

    Returns (Trajectory, SolverStream).  The u♯ recursion applies the same
    exponential quadrature to the product minus its rough paraproduct and
    adds the discrete heat/paraproduct commutator increment, so u = u1 + u♯
    holds only up to accumulated rounding — that defect is recorded per
    step as ``ansatz_defect`` (relative).  Diagnostic mode advances the
    u1♯/u2♯ split (rough lane / bounded lane with the counterterm) and
    records the inputs of the maximum-principle monitor, plus an adaptive
    cutoff suggestion 2^{R1 (alpha-2 kappa-eps)} ≈ weighted-norm(u) on the
    besov stride.
    """
    partition = enh.partition
    grid = u0.grid
    if partition.grid != grid:
        raise ValueError("enhanced noise and initial data on different grids")
    audit = audit_budget(p)
    if diagnostic and not audit.feasible:
        warnings.warn(
            "parameter budget infeasible: diagnostic ledger recorded but its "
            "contraction-based readings carry no weight",
            stacklevel=2,
        )
    R = p.R if p.R is not None else grid.j_max - 3
    R1 = p.R1 if p.R1 is not None else grid.j_max - 3
    if not (-1 <= R <= grid.j_max and -1 <= R1 <= grid.j_max):
        raise ValueError(f"cutoff levels must lie in [-1, {grid.j_max}]")

    eta = enh.eta.eta
    eta_hi = partition.localize_high(eta, R)
    eta_lo = partition.localize_low(eta, R)
    times = _mesh(dt, T)
    steps = len(times) - 1
    kept = _keep_indices(steps, max_snapshots)
    if norm_stride is None:
        norm_stride = max(1, steps // 32)
    stepper = _Stepper(grid, dt)

    u = u0
    u1 = RealField.zeros(grid)
    usharp = u0
    u1s = u0 if diagnostic else None
    u2s = RealField.zeros(grid) if diagnostic else None

    stream = SolverStream(budget=p, audit=audit, states=[], ledger=[])
    out_t, out_f = [0.0], [u0]
    weighted_sup = 0.0

    def record_state(t, u, u1, usharp, u1s, u2s):
        stream.states.append(
            SolverState(t=t, u=u, u1=u1, u_sharp=usharp, u1_sharp=u1s, u2_sharp=u2s)
        )

    record_state(0.0, u, u1, usharp, u1s, u2s)
    if diagnostic:
        stream.add(0.0, "u2_sharp_sup", 0.0)

    for m in range(steps):
        t, tn = times[m], times[m + 1]
        q = apply_pointwise(F.f, u)
        pf = apply_pointwise(F.df, u)
        if t > 0:
            xi_raw = enh.resonant_raw(t)
            c_t = enh.c(t)
        else:
            xi_raw = RealField.zeros(grid)
            c_t = 0.0
        phi = paracontrolled_product(partition, q, pf, eta, xi_raw, c_t)
        q_lt_hi = para_lt(partition, q, eta_hi)

        u_next = stepper.P(u) + stepper.Q(phi)
        unorm = _guard(u_next, tn)
        u1_next = para_lt(partition, q, duhamel_static(eta_hi, tn))
        comm = stepper.Q(q_lt_hi) - (u1_next - stepper.P(u1))
        usharp_next = stepper.P(usharp) + stepper.Q(phi - q_lt_hi) + comm

        defect = (u_next - u1_next - usharp_next).grid_max() / (1.0 + unorm)
        stream.add(tn, "u_grid_max", unorm)
        stream.add(tn, "ansatz_defect", defect)

        if diagnostic:
            qp = multiply(q, pf)
            xi_hi = partition.localize_high(xi_raw, R1)
            qp_xi_hi = multiply(qp, xi_hi)
            plt_u = para_lt(partition, pf, u)
            ru = q - plt_u
            f1 = para_gt(partition, q, eta_hi) + qp_xi_hi
            f2 = (
                resonant(partition, ru, eta_hi)
                + resonant(partition, plt_u, eta_hi)
                + multiply(q, eta_lo)
                - qp_xi_hi
            )
            if c_t != 0.0:
                f2 = f2 - c_t * qp
            u1s_next = stepper.P(u1s) + stepper.Q(f1) + comm
            u2s_next = stepper.P(u2s) + stepper.Q(f2)
            split = (usharp_next - u1s_next - u2s_next).grid_max() / (1.0 + unorm)
            stream.add(tn, "split_defect", split)
            stream.add(t, "u2_forcing_sup", f2.sup_norm())
            stream.add(tn, "u2_sharp_sup", u2s_next.sup_norm())
            stream.add(tn, "u1_sharp_grid_max", u1s_next.grid_max())
            u1s, u2s = u1s_next, u2s_next

        if (m + 1) % norm_stride == 0 or m + 1 == steps:
            alpha_norm = partition.besov_norm(u_next, p.alpha)
            stream.add(tn, "u_alpha_besov", alpha_norm)
            weighted_sup = max(weighted_sup, tn**p.gamma * alpha_norm)
            expo = p.alpha - 2.0 * p.kappa - p.epsilon
            if diagnostic and expo > 0:
                stream.add(
                    tn,
                    "suggested_R1",
                    np.log2(max(weighted_sup, 1.0)) / expo,
                )
            if diagnostic:
                stream.add(
                    tn, "u1_sharp_2alpha_besov", partition.besov_norm(u1s, 2 * p.alpha)
                )

        u, u1, usharp = u_next, u1_next, usharp_next
        if m + 1 in kept:
            out_t.append(tn)
            out_f.append(u)
            record_state(tn, u, u1, usharp, u1s, u2s)

    traj = Trajectory(times=np.asarray(out_t), snapshots=out_f)
    return traj, stream


# -- maximum principle monitor ----------------------------------------------


def max_principle_monitor(stream: SolverStream, p: Optional[ParameterBudget] = None):
    """Margins of ||u2♯||_sup(0..T) <= ||u2♯(0)|| + C(g) T^{1-g} sup_t t^g ||f(t)||_sup.

    C(gamma) = 1/(1-gamma).  The t=0 forcing sample is weighted at the first
    positive mesh time (a zero weight would silently drop it).  Requires a
    diagnostic-mode stream; returns {"times", "margins", "lhs", "rhs"} with
    one entry per positive mesh time.
    """
    if p is None:
        p = stream.budget
    gamma = p.gamma
    if not 0.0 <= gamma < 1.0:
        raise ValueError("monitor needs 0 <= gamma < 1")
    ft, fv = stream.series("u2_forcing_sup")
    wt, wv = stream.series("u2_sharp_sup")
    if len(ft) == 0:
        raise ValueError("stream has no diagnostic rows; run with diagnostic=True")
    w0 = wv[0] if wt[0] == 0.0 else 0.0
    cg = 1.0 / (1.0 - gamma)
    tpos = ft[1] if len(ft) > 1 else wt[-1]
    weights = np.where(ft > 0, ft, tpos) ** gamma * fv
    times, margins, lhss, rhss = [], [], [], []
    run_lhs = w0
    for i in range(1, len(wt)):
        run_lhs = max(run_lhs, wv[i])
        s = np.max(weights[:i])
        rhs = w0 + cg * wt[i] ** (1.0 - gamma) * s
        times.append(wt[i])
        lhss.append(run_lhs)
        rhss.append(rhs)
        margins.append(rhs - run_lhs)
    return {
        "times": np.asarray(times),
        "margins": np.asarray(margins),
        "lhs": np.asarray(lhss),
        "rhs": np.asarray(rhss),
    }
