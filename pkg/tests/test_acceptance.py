"""Acceptance gate: ten scripted checks, one verdict line apiece.

Each test prints a single ``[criterion NN] PASS/FAIL`` line summarizing the
measured quantities at the stated tolerance, then asserts.  Two clauses are
documented blockers (see README, "Known gaps"): the stability clause of
criterion 04 and the naive-violation clause of criterion 07 describe
asymptotic regimes that a 128-point dyadic ladder cannot reach; they are
asserted faithfully rather than weakened, so their tests fail with the
measured evidence attached.
"""
import numpy as np
from scipy.linalg import expm

from paratorus.cli import cli
from paratorus.dyadic import DyadicPartition
from paratorus.grid import Grid, RealField, from_spectral, multiply
from paratorus.heat import duhamel_static, heat
from paratorus.inequalities import interpolation_ratio
from paratorus.noise import enhance, lowpass_sample, sample_white_noise
from paratorus.nonlinearity import nonlinearity
from paratorus.paraproducts import bony
from paratorus.solver import (
    ParameterBudget,
    audit_budget,
    kappa_threshold,
    solve_paracontrolled,
    solve_renormalized,
)
from paratorus.studies import (
    convergence_study,
    divergence_study,
    inequality_study,
    max_principle_study,
    trajectory_sup_diff,
)

from test_cli import tree_bytes
from test_grid import random_band_limited


def _verdict(tag: str, ok: bool, detail: str) -> str:
    line = f"[criterion {tag}] {'PASS' if ok else 'FAIL'} — {detail}"
    print(line)
    return line


# -- 01: exactness ------------------------------------------------------------


def test_01_exactness_suite():
    """Product decomposition, partition algebra, semigroup law, ansatz defect."""
    tol = 1e-10
    worst = {"bony": 0.0, "complete": 0.0, "orth": 0.0, "semigroup": 0.0}
    rng = np.random.default_rng(1)
    grids = {n: Grid(n) for n in (32, 64, 128)}
    parts = {n: DyadicPartition(g) for n, g in grids.items()}

    for seed in range(100):
        for n in (32, 64, 128):
            grid, part = grids[n], parts[n]
            f = random_band_limited(grid, (seed, n, 0), scale=0.3)
            g = random_band_limited(grid, (seed, n, 1), scale=0.3)

            prod = multiply(f, g)
            tri = bony(part, f, g)
            worst["bony"] = max(
                worst["bony"],
                (tri.total() - prod).sup_norm() / (1.0 + prod.sup_norm()),
            )

            total = part.block(f, -1)
            for j in range(0, grid.j_max + 1):
                total = total + part.block(f, j)
            worst["complete"] = max(
                worst["complete"], (total - f).sup_norm() / (1.0 + f.sup_norm())
            )

            blocks = [part.block(f, j) for j in range(-1, grid.j_max + 1)]
            n2 = grid.n * grid.n
            for i in range(len(blocks)):
                for j in range(i + 1, len(blocks)):
                    inner = abs(np.vdot(blocks[i].values, blocks[j].values)) / n2
                    ni = np.linalg.norm(blocks[i].values) / grid.n
                    nj = np.linalg.norm(blocks[j].values) / grid.n
                    worst["orth"] = max(worst["orth"], inner / (1.0 + ni * nj))

            s, t = rng.uniform(0.01, 0.5, size=2)
            worst["semigroup"] = max(
                worst["semigroup"],
                (heat(heat(f, s), t) - heat(f, s + t)).sup_norm()
                / (1.0 + f.sup_norm()),
            )

    # paracontrolled bookkeeping: u = u1 + u_sharp maintained to rounding
    F = nonlinearity("sin")
    worst["ansatz"] = 0.0
    for seed in range(100):
        n = (32, 64, 128)[seed % 3]
        grid, part = grids[n], parts[n]
        u0 = RealField.from_values(
            grid, 0.3 * np.cos(grid.x1) * np.ones_like(grid.x2)
        )
        enh = enhance(
            part, sample_white_noise(grid, seed), grid.j_max - 2, times=(), kappa=0.1
        )
        _, stream = solve_paracontrolled(
            enh, F, u0, 1e-3, 4e-3, ParameterBudget(kappa=0.1, alpha=0.67)
        )
        _, defects = stream.series("ansatz_defect")
        worst["ansatz"] = max(worst["ansatz"], float(defects.max()))

    peak = max(worst.values())
    ok = peak <= tol
    line = _verdict(
        "01 exactness",
        ok,
        "max normalized defect {:.2e} (tol 1e-10): ".format(peak)
        + ", ".join(f"{k}={v:.1e}" for k, v in worst.items()),
    )
    assert ok, line


# -- 02: norm interpolation ----------------------------------------------------


def test_02_interpolation_sharpness():
    """||f||_a <= ||f||_a1^th ||f||_a2^(1-th) with ratio <= 1 + 1e-12."""
    grid = Grid(32)
    part = DyadicPartition(grid)
    rng = np.random.default_rng(2)
    worst = 0.0
    for i in range(10_000):
        f = random_band_limited(grid, i, scale=1.0)
        a1 = rng.uniform(-1.5, 1.4)
        a2 = a1 + rng.uniform(0.1, 1.5)
        theta = rng.uniform(0.05, 0.95)
        worst = max(worst, interpolation_ratio(part, f, a1, a2, theta))
    ok = worst <= 1.0 + 1e-12
    line = _verdict(
        "02 interpolation", ok, f"max ratio over 10^4 fields = {worst:.15f}"
    )
    assert ok, line


# -- 03: estimate suite ----------------------------------------------------------


def test_03_estimate_suite_trends():
    """Every registered estimate sweep stays resolution-flat at 50 seeds."""
    study = inequality_study(resolutions=(32, 64, 128), seeds=50)
    reports = study["reports"]
    slopes = {rep.name: rep.slope for rep in reports}
    worst_name = max(slopes, key=lambda k: slopes[k])
    ok = len(reports) >= 14 and study["summary"]["all_passed"]
    line = _verdict(
        "03 estimate-suite",
        ok,
        f"{len(reports)} sweeps, all slopes <= 0.1: "
        f"{study['summary']['all_passed']} "
        f"(worst {worst_name} at {slopes[worst_name]:+.3f})",
    )
    assert ok, line


# -- 04: divergence vs renormalized stability -------------------------------------


def test_04_renormalization_divergence():
    """Raw resonant medians explode with the cutoff; the counterterm's reach
    is structurally limited in this norm at this depth (documented blocker)."""
    study = divergence_study(
        grid_n=128, levels=(1, 2, 3), seeds=64, kappa=0.1, t_ref=0.01
    )
    raw = [row[1] for row in study["level_rows"]]
    ren = [row[2] for row in study["level_rows"]]
    pairs = [row[1] for row in study["pair_rows"]]

    raw_monotone = all(a < b for a, b in zip(raw, raw[1:]))
    raw_ratio = raw[-1] / raw[0]
    grow_ok = raw_monotone and raw_ratio >= 5.0

    ren_var = (max(ren) - min(ren)) / min(ren)
    diffs_decreasing = all(a > b for a, b in zip(pairs, pairs[1:]))
    stable_ok = ren_var < 0.5 and diffs_decreasing

    ok = grow_ok and stable_ok
    line = _verdict(
        "04 divergence",
        ok,
        f"raw medians {[f'{v:.3f}' for v in raw]} (x{raw_ratio:.1f}, "
        f"monotone={raw_monotone}); renormalized medians "
        f"{[f'{v:.3f}' for v in ren]} (variation {ren_var:.2f}, need <0.5), "
        f"pair diffs {[f'{v:.3f}' for v in pairs]} "
        f"(decreasing={diffs_decreasing})",
    )
    assert ok, line


# -- 05: dense oracles ------------------------------------------------------------


def test_05_dense_oracles():
    """Constant and linear forcing match closed-form / matrix-exponential
    references on the 16-point grid; error is first order in dt."""
    grid = Grid(16)
    part = DyadicPartition(grid)
    eta_sample = lowpass_sample(part, sample_white_noise(grid, 5), 1)
    eta = eta_sample.eta
    u0 = RealField.from_values(
        grid,
        0.05 * np.cos(grid.x1) * np.ones_like(grid.x2)
        + 0.025 * np.sin(2 * grid.x2) * np.ones_like(grid.x1),
    )
    T = 0.5

    # F == c: the exponential quadrature reproduces the Duhamel formula exactly
    c = 0.3
    traj = solve_renormalized(eta_sample, None, nonlinearity("const", param=c),
                              u0, 1e-4, T)
    closed = heat(u0, T) + c * duhamel_static(eta, T)
    err_const = (traj[len(traj) - 1] - closed).sup_norm()

    # F = a u: dense generator assembled from the solver's own product operator
    a = 0.5
    n2 = grid.n * grid.n
    gen = np.zeros((n2, n2))
    for i in range(n2):
        e = np.zeros(n2)
        e[i] = 1.0
        basis = RealField.from_values(grid, e.reshape(grid.n, grid.n))
        lap_col = from_spectral(grid, basis.spec * (-grid.k_sq)).values
        gen[:, i] = lap_col.ravel() + a * multiply(basis, eta).values.ravel()
    ref = expm(gen * T) @ u0.values.ravel()

    errs = {}
    for dt in (2e-4, 1e-4):
        traj = solve_renormalized(eta_sample, None,
                                  nonlinearity("linear", param=a), u0, dt, T)
        errs[dt] = float(np.max(np.abs(traj[len(traj) - 1].values.ravel() - ref)))
    order = float(np.log2(errs[2e-4] / errs[1e-4]))

    ok = err_const <= 1e-6 and errs[1e-4] <= 1e-6 and 0.8 <= order <= 1.2
    line = _verdict(
        "05 oracles",
        ok,
        f"const err {err_const:.1e}, linear err {errs[1e-4]:.2e} at dt=1e-4 "
        f"(tol 1e-6), order {order:.3f} (need 1.0 +- 0.2)",
    )
    assert ok, line


# -- 06: paracontrolled == classical on smooth data --------------------------------


def test_06_paracontrolled_matches_classical():
    """Sub-cutoff trigonometric noise: the five-term product resums, so the
    paracontrolled and direct marches agree to 1e-8 over [0, 1]."""
    grid = Grid(64)
    part = DyadicPartition(grid)
    F = nonlinearity("sin")
    u0 = RealField.from_values(grid, 0.3 * np.cos(grid.x1) * np.ones_like(grid.x2))
    p = ParameterBudget(kappa=0.1, alpha=0.67, R=3, R1=3)
    worst = 0.0
    for seed in (0, 1):
        white = sample_white_noise(grid, seed)
        enh = enhance(part, white, 2, times=(), kappa=0.1, counterterm=False)
        traj, _ = solve_paracontrolled(enh, F, u0, 2e-3, 1.0, p)
        ref = solve_renormalized(
            lowpass_sample(part, white, 2), None, F, u0, 2e-3, 1.0
        )
        worst = max(worst, trajectory_sup_diff(traj, ref))
    ok = worst <= 1e-8
    line = _verdict(
        "06 resummation", ok, f"max trajectory distance {worst:.2e} (tol 1e-8)"
    )
    assert ok, line


# -- 07: cutoff convergence of the solved equation ----------------------------------


def test_07_cutoff_convergence():
    """Renormalized runs converge as the noise cutoff deepens; the naive
    counterpart's per-seed monotonicity violations cannot materialize at this
    depth (documented blocker)."""
    kwargs = dict(
        grid_n=128, f_name="sin", levels=(2, 3, 4, 5), seeds=16,
        dt=4e-3, T=1.0, u0_const=1.0,
    )
    renorm = convergence_study(method="renorm", **kwargs)
    naive = convergence_study(method="naive", **kwargs)

    ren_med = [row[1] for row in renorm["rows"]]
    ren_monotone = all(a > b for a, b in zip(ren_med, ren_med[1:]))

    per_seed = naive["diffs"]  # (pairs, seeds)
    violations = int(
        sum(np.any(np.diff(per_seed[:, s]) > 0) for s in range(per_seed.shape[1]))
    )
    naive_med = [row[1] for row in naive["rows"]]
    naive_ok = violations >= 8

    ok = ren_monotone and naive_ok
    line = _verdict(
        "07 convergence",
        ok,
        f"renormalized medians {[f'{v:.4f}' for v in ren_med]} "
        f"(monotone={ren_monotone}); naive medians "
        f"{[f'{v:.4f}' for v in naive_med]}, per-seed violations "
        f"{violations}/16 (need >= 8)",
    )
    assert ok, line


# -- 08: maximum-principle margins --------------------------------------------------


def test_08_maximum_principle_margins():
    """The sup-bound margin stays nonnegative on every diagnostic run of the
    criterion-07 configuration."""
    budget = ParameterBudget(kappa=0.1, alpha=0.67, epsilon=1e-3, delta=0.101)
    F = nonlinearity("sin")
    u0 = RealField.constant(Grid(128), 1.0)
    margins = []
    for seed in range(16):
        study = max_principle_study(
            grid_n=128, seed=seed, level=3, budget=budget, F=F,
            dt=4e-3, T=1.0, u0=u0,
        )
        margins.append(study["min_margin"])
    worst = min(margins)
    ok = worst >= -1e-9
    line = _verdict(
        "08 max-principle",
        ok,
        f"min margin over 16 seeds = {worst:+.4f} (need >= -1e-9), "
        f"gamma = {budget.gamma:.2f}",
    )
    assert ok, line


# -- 09: exponent bookkeeping ---------------------------------------------------------


def test_09_threshold_arithmetic():
    """Admissibility root, infeasibility beyond it, margin -> 0 on the limit path."""
    kbar = kappa_threshold()
    root_err = abs(kbar - (7.0 - np.sqrt(33.0)) / 8.0)

    beyond = audit_budget(
        ParameterBudget(kappa=0.2, alpha=0.67, epsilon=1e-3, delta=0.201)
    )

    margins = []
    for t in (1e-2, 1e-3, 1e-4, 1e-5):
        k = kbar - t
        rep = audit_budget(
            ParameterBudget(kappa=k, alpha=2.0 / 3.0 + t, epsilon=t, delta=k + t)
        )
        margins.append(rep.margin)
    path_ok = (
        all(m > 0 for m in margins)
        and all(a > b for a, b in zip(margins, margins[1:]))
        and margins[-1] < 1e-3
    )

    ok = root_err <= 1e-12 and not beyond.feasible and path_ok
    line = _verdict(
        "09 threshold",
        ok,
        f"root err {root_err:.1e} (tol 1e-12); kappa=0.2 feasible="
        f"{beyond.feasible}; limit-path margins "
        f"{[f'{m:.2e}' for m in margins]} decreasing to <1e-3",
    )
    assert ok, line


# -- 10: determinism --------------------------------------------------------------------


def test_10_byte_identical_reruns(tmp_path):
    """Re-running a command with an identical config rewrites identical bytes."""
    configs = [
        (
            "solve", "--method", "renorm", "--grid", "64", "--level", "2",
            "--u0-const", "1.0", "--dt", "0.01", "--T", "0.05",
            "--out", str(tmp_path / "solve"),
        ),
        (
            "convergence-study", "--grid", "32", "--levels", "1..2",
            "--seeds", "2", "--dt", "0.02", "--T", "0.1",
            "--u0-const", "1.0", "--out", str(tmp_path / "conv"),
        ),
    ]
    identical = True
    compared = 0
    for argv in configs:
        assert cli(list(argv)) == 0
        first = tree_bytes(argv[-1])
        assert cli(list(argv)) == 0
        second = tree_bytes(argv[-1])
        identical = identical and first == second
        compared += len(first)
    ok = identical
    line = _verdict(
        "10 determinism", ok, f"{compared} files byte-identical across reruns"
    )
    assert ok, line
