"""Level sweeps, margin audits, and deterministic data emission.

Each study returns plain arrays plus ready-to-emit ``rows``; the CLI and the
acceptance tests share these entry points so the scripted reproductions and
the interactive commands cannot drift apart.  All reductions run in a fixed
order (seed-major, level-minor) so repeated runs are bit-identical; the
optional worker pool only parallelizes independent per-seed work and the
results are collected back in submission order.
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

import numpy as np

from .dyadic import DyadicPartition
from .grid import Grid, RealField
from .heat import Trajectory, duhamel_static
from .inequalities import estimate_constant, registered_suite
from .noise import CnEvaluator, enhance, lowpass_sample, sample_white_noise
from .nonlinearity import NonlinearitySpec, nonlinearity
from .paraproducts import resonant
from .solver import (
    ParameterBudget,
    max_principle_monitor,
    solve_paracontrolled,
    solve_renormalized,
)


def _seed_list(seeds) -> List[int]:
    if isinstance(seeds, (int, np.integer)):
        return list(range(int(seeds)))
    return [int(s) for s in seeds]


def _pmap(fn, items, workers: int = 1) -> list:
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def trajectory_sup_diff(a: Trajectory, b: Trajectory) -> float:
    """sup over shared snapshot times of the pointwise sup distance."""
    if len(a) != len(b) or not np.array_equal(a.times, b.times):
        raise ValueError("trajectories sampled on different meshes")
    return max(float((fa - fb).sup_norm()) for fa, fb in zip(a.snapshots, b.snapshots))


# -- cutoff-level convergence --------------------------------------------------


CONVERGENCE_COLUMNS = ("level_pair", "median_diff", "q25", "q75", "seeds")


def convergence_study(
    grid_n: int = 128,
    f_name: str = "sin",
    levels: Sequence[int] = (3, 4, 5),
    seeds=16,
    dt: float = 2e-3,
    T: float = 1.0,
    method: str = "renorm",
    u0_const: float = 0.0,
    f_param: float = 1.0,
    workers: int = 1,
) -> Dict:
    """Couple solutions across noise cutoff levels, one white sample per seed.

    For every seed the same white realization is low-passed at each level and
    solved; ``diffs[i, s]`` is the sup-in-time L^inf distance between the
    solutions at levels[i] and levels[i+1] for seed s.  ``method`` picks the
    counterterm: "renorm" subtracts c_n(t) F(u)F'(u), "naive" subtracts
    nothing.
    """
    if method not in ("naive", "renorm"):
        raise ValueError(f"method must be 'naive' or 'renorm', got {method!r}")
    grid = Grid(grid_n)
    part = DyadicPartition(grid)
    levels = [int(n) for n in levels]
    if len(levels) < 2:
        raise ValueError("need at least two levels to form a pair")
    F = nonlinearity(f_name, param=f_param)
    u0 = RealField.constant(grid, u0_const)
    cns = {
        n: (CnEvaluator(part, n) if method == "renorm" else None) for n in levels
    }

    def per_seed(seed: int) -> List[float]:
        white = sample_white_noise(grid, seed)
        trajs = [
            solve_renormalized(lowpass_sample(part, white, n), cns[n], F, u0, dt, T)
            for n in levels
        ]
        return [trajectory_sup_diff(a, b) for a, b in zip(trajs, trajs[1:])]

    seed_ids = _seed_list(seeds)
    diffs = np.asarray(_pmap(per_seed, seed_ids, workers), dtype=float).T

    rows = []
    for (na, nb), d in zip(zip(levels, levels[1:]), diffs):
        rows.append(
            (
                f"{na}-{nb}",
                float(np.median(d)),
                float(np.quantile(d, 0.25)),
                float(np.quantile(d, 0.75)),
                int(d.size),
            )
        )
    return {
        "levels": levels,
        "seeds": seed_ids,
        "diffs": diffs,
        "columns": CONVERGENCE_COLUMNS,
        "rows": rows,
    }


# -- raw divergence vs renormalized stability ------------------------------------


DIVERGENCE_LEVEL_COLUMNS = ("level", "median_raw", "median_renorm", "seeds")
DIVERGENCE_PAIR_COLUMNS = ("level_pair", "median_diff", "q25", "q75", "seeds")


def divergence_study(
    grid_n: int = 128,
    levels: Sequence[int] = (1, 2, 3),
    seeds=64,
    kappa: float = 0.1,
    t_ref: float = 0.01,
    workers: int = 1,
) -> Dict:
    """Resonant pairing I(eta_n) o eta_n at one probe time, raw vs renormalized.

    Per seed and cutoff level n the study records the C^{-2 kappa} norm of the
    raw product, of the product minus c_n(t_ref), and of the difference of the
    renormalized fields between consecutive levels (same white realization).
    """
    grid = Grid(grid_n)
    part = DyadicPartition(grid)
    levels = [int(n) for n in levels]
    alpha = -2.0 * float(kappa)
    if t_ref <= 0:
        raise ValueError("t_ref must be positive")
    cvals = {n: CnEvaluator(part, n).value(t_ref) for n in levels}

    def per_seed(seed: int):
        white = sample_white_noise(grid, seed)
        raws, rens, fields = [], [], []
        for n in levels:
            eta_n = lowpass_sample(part, white, n).eta
            prod = resonant(part, duhamel_static(eta_n, t_ref), eta_n)
            ren = prod - RealField.constant(grid, cvals[n])
            raws.append(part.hoelder_norm(prod, alpha))
            rens.append(part.hoelder_norm(ren, alpha))
            fields.append(ren)
        succ = [
            part.hoelder_norm(a - b, alpha) for a, b in zip(fields, fields[1:])
        ]
        return raws, rens, succ

    seed_ids = _seed_list(seeds)
    results = _pmap(per_seed, seed_ids, workers)
    raw = np.asarray([r[0] for r in results], dtype=float).T
    ren = np.asarray([r[1] for r in results], dtype=float).T
    succ = np.asarray([r[2] for r in results], dtype=float).T

    level_rows = [
        (n, float(np.median(raw[i])), float(np.median(ren[i])), len(seed_ids))
        for i, n in enumerate(levels)
    ]
    pair_rows = [
        (
            f"{na}-{nb}",
            float(np.median(succ[i])),
            float(np.quantile(succ[i], 0.25)),
            float(np.quantile(succ[i], 0.75)),
            len(seed_ids),
        )
        for i, (na, nb) in enumerate(zip(levels, levels[1:]))
    ]
    return {
        "levels": levels,
        "seeds": seed_ids,
        "t_ref": float(t_ref),
        "kappa": float(kappa),
        "raw": raw,
        "renorm": ren,
        "succ_diffs": succ,
        "level_columns": DIVERGENCE_LEVEL_COLUMNS,
        "level_rows": level_rows,
        "pair_columns": DIVERGENCE_PAIR_COLUMNS,
        "pair_rows": pair_rows,
    }


# -- estimate suite -------------------------------------------------------------


INEQUALITY_COLUMNS = ("spec", "resolution", "max_ratio", "median_ratio", "slope", "passed")


def inequality_study(resolutions=(32, 64, 128), seeds=50) -> Dict:
    """Run every registered estimate sweep; one row per (spec, resolution)."""
    partitions: Dict[tuple, DyadicPartition] = {}
    reports = [
        estimate_constant(spec, resolutions, seeds, partitions=partitions)
        for spec in registered_suite()
    ]
    rows = [row for rep in reports for row in rep.rows()]
    summary = {
        rep.name: {"slope": rep.slope, "passed": rep.passed} for rep in reports
    }
    summary["all_passed"] = all(rep.passed for rep in reports)
    return {
        "reports": reports,
        "columns": INEQUALITY_COLUMNS,
        "rows": rows,
        "summary": summary,
    }


# -- maximum-principle margins ---------------------------------------------------


MARGIN_COLUMNS = ("t", "lhs", "rhs", "margin")


def max_principle_study(
    grid_n: int,
    seed: int,
    level,
    budget: ParameterBudget,
    F: NonlinearitySpec,
    dt: float,
    T: float,
    u0: Optional[RealField] = None,
) -> Dict:
    """One diagnostic paracontrolled run plus its sup-bound margin series."""
    grid = Grid(grid_n)
    part = DyadicPartition(grid)
    white = sample_white_noise(grid, seed)
    enh = enhance(part, white, level, times=(), kappa=budget.kappa)
    if u0 is None:
        u0 = RealField.zeros(grid)
    traj, stream = solve_paracontrolled(enh, F, u0, dt, T, budget, diagnostic=True)
    mon = max_principle_monitor(stream)
    rows = [
        (float(t), float(l), float(r), float(m))
        for t, l, r, m in zip(mon["times"], mon["lhs"], mon["rhs"], mon["margins"])
    ]
    return {
        "trajectory": traj,
        "stream": stream,
        "monitor": mon,
        "min_margin": float(np.min(mon["margins"])),
        "columns": MARGIN_COLUMNS,
        "rows": rows,
    }


# -- deterministic emission -------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def emit_plotdata(
    columns: Sequence[str],
    rows: Sequence[Sequence],
    csv_path,
    summary: Optional[dict] = None,
    json_path=None,
) -> Dict:
    """Write study rows as a deterministic CSV, optionally with a JSON summary.

    The header is always written, so an empty study yields a header-only
    file.  Floats are rendered with ``repr`` (exact round trip), rows keep
    the given order, and rows with missing entries are kept with ``NA``
    cells and counted in the returned record — partial results stay visible.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(columns))
    partial = 0
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(
                f"row has {len(row)} cells, header has {len(columns)}"
            )
        partial += any(v is None for v in row)
        writer.writerow([_cell(v) for v in row])
    os.makedirs(os.path.dirname(os.path.abspath(csv_path)), exist_ok=True)
    with open(csv_path, "w", newline="") as fh:
        fh.write(buf.getvalue())
    written = {"csv": str(csv_path), "json": None, "partial_rows": int(partial)}
    if json_path is not None:
        with open(json_path, "w") as fh:
            json.dump(summary if summary is not None else {}, fh, sort_keys=True, indent=2)
            fh.write("\n")
        written["json"] = str(json_path)
    return written
