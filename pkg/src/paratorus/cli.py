"""Command-line front end: seeded noise draws, solver runs, and the studies.

Configuration precedence is flags > config file (JSON) > defaults; the
effective configuration is persisted as ``config.json`` next to any files a
command writes, so every artifact directory is self-describing and a rerun
from it is byte-identical.  Exit codes: 0 success, 2 invalid flags or
configuration, 3 numerical abort (blow-up guard or non-finite field).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from .dyadic import DyadicPartition
from .grid import Grid, RealField, NonFiniteFieldError, save_field
from .heat import NumericalBlowUpError, save_trajectory
from .noise import (
    CnEvaluator,
    enhance,
    lowpass_sample,
    renorm_constant,
    sample_white_noise,
    save_bundle,
)
from .nonlinearity import nonlinearity
from .solver import (
    ParameterBudget,
    audit_budget,
    solve_paracontrolled,
    solve_renormalized,
)
from .studies import (
    convergence_study,
    divergence_study,
    emit_plotdata,
    inequality_study,
    max_principle_study,
)

OUTPUT_ROOT_ENV = "PARATORUS_OUT"


@dataclass
class RunConfig:
    """Everything a subcommand needs, reproducible from its JSON form."""

    command: str
    grid: int = 64
    dt: float = 1e-3
    T: float = 0.1
    seed: int = 0
    seeds: int = 8
    level: str = "3"
    levels: str = "1..3"
    n: int = 3
    t: float = 1.0
    times: str = "1.0"
    kappa: float = 0.1
    alpha: float = 0.67
    eps: float = 1e-3
    delta: float = 0.101
    gamma: Optional[float] = None
    R: Optional[int] = None
    R1: Optional[int] = None
    F: str = "sin"
    F_param: float = 1.0
    method: str = "renorm"
    resolutions: str = "32,64,128"
    u0_const: float = 0.0
    workers: int = 1
    out: Optional[str] = None

    def budget(self) -> ParameterBudget:
        return ParameterBudget(
            kappa=self.kappa,
            alpha=self.alpha,
            epsilon=self.eps,
            delta=self.delta,
            gamma=self.gamma,
            R=self.R,
            R1=self.R1,
        )

    def outdir(self) -> str:
        if self.out:
            return self.out
        return os.path.join(os.environ.get(OUTPUT_ROOT_ENV, "runs"), self.command)


def _parse_level(text):
    text = str(text)
    return text if text == "full" else int(text)


def _parse_levels(text) -> list:
    text = str(text)
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",") if p != ""]


def _parse_int_list(text) -> list:
    return [int(p) for p in str(text).split(",") if p != ""]


def _parse_float_list(text) -> list:
    return [float(p) for p in str(text).split(",") if p != ""]


def _persist_config(cfg: RunConfig, outdir: str) -> None:
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "config.json"), "w") as fh:
        json.dump(asdict(cfg), fh, sort_keys=True, indent=2)
        fh.write("\n")


# -- subcommands ---------------------------------------------------------------


def _cmd_sample_noise(cfg: RunConfig) -> int:
    grid = Grid(cfg.grid)
    part = DyadicPartition(grid)
    sample = lowpass_sample(
        part, sample_white_noise(grid, cfg.seed), _parse_level(cfg.level)
    )
    outdir = cfg.outdir()
    _persist_config(cfg, outdir)
    save_field(sample.eta, os.path.join(outdir, "eta.pcf"))
    print(
        f"sample-noise grid={grid.n} seed={cfg.seed} level={sample.level} "
        f"sup={sample.eta.sup_norm()!r} -> {outdir}"
    )
    return 0


def _cmd_enhance(cfg: RunConfig) -> int:
    grid = Grid(cfg.grid)
    part = DyadicPartition(grid)
    sample = sample_white_noise(grid, cfg.seed)
    enh = enhance(
        part,
        sample,
        _parse_level(cfg.level),
        times=_parse_float_list(cfg.times),
        kappa=cfg.kappa,
    )
    outdir = cfg.outdir()
    _persist_config(cfg, outdir)
    save_bundle(enh, os.path.join(outdir, "bundle"))
    for t, c in zip(enh.times, enh.c_table):
        print(f"c_{enh.level}({float(t)!r}) = {float(c)!r}")
    print(f"enhance grid={grid.n} seed={cfg.seed} level={enh.level} -> {outdir}")
    return 0


def _cmd_renorm_constant(cfg: RunConfig) -> int:
    part = DyadicPartition(Grid(cfg.grid))
    value = renorm_constant(part, _parse_level(cfg.n), cfg.t)
    print(f"c_{cfg.n}({cfg.t!r}) = {value!r}")
    if cfg.out:
        outdir = cfg.outdir()
        _persist_config(cfg, outdir)
        with open(os.path.join(outdir, "constant.json"), "w") as fh:
            json.dump(
                {"n": cfg.n, "t": cfg.t, "grid": cfg.grid, "value": value},
                fh,
                sort_keys=True,
                indent=2,
            )
            fh.write("\n")
    return 0


def _cmd_audit_budget(cfg: RunConfig) -> int:
    report = audit_budget(cfg.budget())
    print(
        f"feasible={'true' if report.feasible else 'false'} "
        f"margin={report.margin!r} "
        f"kappa_admissible={'true' if report.kappa_admissible else 'false'}"
    )
    for name, value in sorted(report.exponents.items()):
        print(f"  {name} = {value!r}")
    if cfg.out:
        outdir = cfg.outdir()
        _persist_config(cfg, outdir)
        with open(os.path.join(outdir, "audit.json"), "w") as fh:
            json.dump(
                {
                    "feasible": report.feasible,
                    "margin": report.margin,
                    "kappa_admissible": report.kappa_admissible,
                    "exponents": report.exponents,
                },
                fh,
                sort_keys=True,
                indent=2,
            )
            fh.write("\n")
    return 0


def _cmd_solve(cfg: RunConfig) -> int:
    if cfg.method not in ("naive", "renorm", "para"):
        raise ValueError(f"unknown solve method {cfg.method!r}")
    budget = cfg.budget()  # validates kappa/alpha/gamma ranges up front
    grid = Grid(cfg.grid)
    part = DyadicPartition(grid)
    level = _parse_level(cfg.level)
    F = nonlinearity(cfg.F, param=cfg.F_param)
    u0 = RealField.constant(grid, cfg.u0_const)
    white = sample_white_noise(grid, cfg.seed)

    extra = {"method": cfg.method, "seed": cfg.seed, "level": str(level)}
    if cfg.method == "para":
        enh = enhance(part, white, level, times=(), kappa=cfg.kappa)
        traj, stream = solve_paracontrolled(
            enh, F, u0, cfg.dt, cfg.T, budget, diagnostic=True
        )
    else:
        eta_n = lowpass_sample(part, white, level)
        c_n = CnEvaluator(part, level) if cfg.method == "renorm" else None
        traj = solve_renormalized(eta_n, c_n, F, u0, cfg.dt, cfg.T)
        stream = None

    outdir = cfg.outdir()
    _persist_config(cfg, outdir)
    save_trajectory(
        traj, os.path.join(outdir, "trajectory"), dt=cfg.dt, extra=extra
    )
    if stream is not None:
        emit_plotdata(
            ("t", "name", "value"),
            [(r["time"], r["name"], r["value"]) for r in stream.ledger],
            os.path.join(outdir, "ledger.csv"),
        )
    final = traj[len(traj) - 1]
    print(
        f"solve method={cfg.method} grid={grid.n} level={level} "
        f"T={cfg.T!r} final_sup={final.sup_norm()!r} -> {outdir}"
    )
    return 0


def _cmd_convergence_study(cfg: RunConfig) -> int:
    cfg.budget()  # parameter sanity shared with the solver commands
    study = convergence_study(
        grid_n=cfg.grid,
        f_name=cfg.F,
        levels=_parse_levels(cfg.levels),
        seeds=cfg.seeds,
        dt=cfg.dt,
        T=cfg.T,
        method=cfg.method,
        u0_const=cfg.u0_const,
        f_param=cfg.F_param,
        workers=cfg.workers,
    )
    outdir = cfg.outdir()
    _persist_config(cfg, outdir)
    medians = [row[1] for row in study["rows"]]
    summary = {
        "levels": study["levels"],
        "median_diffs": medians,
        "monotone_decreasing": all(a > b for a, b in zip(medians, medians[1:])),
        "method": cfg.method,
        "seeds": len(study["seeds"]),
    }
    emit_plotdata(
        study["columns"],
        study["rows"],
        os.path.join(outdir, "convergence.csv"),
        summary=summary,
        json_path=os.path.join(outdir, "convergence.json"),
    )
    for row in study["rows"]:
        print(
            f"levels {row[0]}: median={row[1]!r} q25={row[2]!r} q75={row[3]!r}"
        )
    print(f"convergence-study method={cfg.method} -> {outdir}")
    return 0


def _cmd_divergence_study(cfg: RunConfig) -> int:
    study = divergence_study(
        grid_n=cfg.grid,
        levels=_parse_levels(cfg.levels),
        seeds=cfg.seeds,
        kappa=cfg.kappa,
        t_ref=cfg.t,
        workers=cfg.workers,
    )
    outdir = cfg.outdir()
    _persist_config(cfg, outdir)
    emit_plotdata(
        study["level_columns"],
        study["level_rows"],
        os.path.join(outdir, "levels.csv"),
    )
    emit_plotdata(
        study["pair_columns"],
        study["pair_rows"],
        os.path.join(outdir, "pairs.csv"),
        summary={
            "kappa": study["kappa"],
            "t_ref": study["t_ref"],
            "levels": study["levels"],
            "median_raw": [r[1] for r in study["level_rows"]],
            "median_renorm": [r[2] for r in study["level_rows"]],
        },
        json_path=os.path.join(outdir, "divergence.json"),
    )
    for row in study["level_rows"]:
        print(f"level {row[0]}: raw={row[1]!r} renorm={row[2]!r}")
    print(f"divergence-study -> {outdir}")
    return 0


def _cmd_inequality_suite(cfg: RunConfig) -> int:
    study = inequality_study(
        resolutions=tuple(_parse_int_list(cfg.resolutions)), seeds=cfg.seeds
    )
    outdir = cfg.outdir()
    _persist_config(cfg, outdir)
    emit_plotdata(
        study["columns"],
        study["rows"],
        os.path.join(outdir, "estimates.csv"),
        summary=study["summary"],
        json_path=os.path.join(outdir, "estimates.json"),
    )
    for rep in study["reports"]:
        print(
            f"{'PASS' if rep.passed else 'FAIL'} {rep.name} slope={rep.slope!r}"
        )
    print(f"inequality-suite all_passed={study['summary']['all_passed']} -> {outdir}")
    return 0


def _cmd_max_principle(cfg: RunConfig) -> int:
    budget = cfg.budget()
    study = max_principle_study(
        grid_n=cfg.grid,
        seed=cfg.seed,
        level=_parse_level(cfg.level),
        budget=budget,
        F=nonlinearity(cfg.F, param=cfg.F_param),
        dt=cfg.dt,
        T=cfg.T,
        u0=RealField.constant(Grid(cfg.grid), cfg.u0_const),
    )
    outdir = cfg.outdir()
    _persist_config(cfg, outdir)
    emit_plotdata(
        study["columns"],
        study["rows"],
        os.path.join(outdir, "margins.csv"),
        summary={"min_margin": study["min_margin"], "gamma": budget.gamma},
        json_path=os.path.join(outdir, "margins.json"),
    )
    print(f"max-principle min_margin={study['min_margin']!r} -> {outdir}")
    return 0


DISPATCH = {
    "sample-noise": _cmd_sample_noise,
    "enhance": _cmd_enhance,
    "renorm-constant": _cmd_renorm_constant,
    "audit-budget": _cmd_audit_budget,
    "solve": _cmd_solve,
    "convergence-study": _cmd_convergence_study,
    "divergence-study": _cmd_divergence_study,
    "inequality-suite": _cmd_inequality_suite,
    "max-principle": _cmd_max_principle,
}


# -- argument plumbing -----------------------------------------------------------


def _add(parser: argparse.ArgumentParser, *names, **kw) -> None:
    kw.setdefault("default", None)
    parser.add_argument(*names, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paratorus",
        description="Seeded noise, renormalized solvers, and estimate sweeps "
        "on the 2-torus.",
    )
    sub = parser.add_subparsers(dest="command")

    def new(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _add(p, "--config", help="JSON config file; flags override its values")
        _add(p, "--out", help="output directory (default $PARATORUS_OUT/<command>)")
        _add(p, "--grid", type=int, help="grid resolution n")
        _add(p, "--workers", type=int, help="worker threads for per-seed work")
        return p

    p = new("sample-noise", "draw a seeded white-noise field, optionally low-passed")
    _add(p, "--seed", type=int)
    _add(p, "--level", help="dyadic cutoff level or 'full'")

    p = new("enhance", "build the renormalized resonant companion of a noise draw")
    _add(p, "--seed", type=int)
    _add(p, "--level", help="dyadic cutoff level")
    _add(p, "--kappa", type=float)
    _add(p, "--times", help="comma-separated reference times")

    p = new("renorm-constant", "evaluate c_n(t) on a grid")
    _add(p, "--n", type=int, help="cutoff level")
    _add(p, "--t", type=float, help="time argument")

    p = new("audit-budget", "check the exponent bookkeeping for feasibility")
    _add(p, "--kappa", type=float)
    _add(p, "--alpha", type=float)
    _add(p, "--eps", type=float)
    _add(p, "--delta", type=float)
    _add(p, "--gamma", type=float)

    p = new("solve", "run one solver trajectory")
    _add(p, "--method", choices=("naive", "renorm", "para"))
    _add(p, "--seed", type=int)
    _add(p, "--level", help="noise cutoff level or 'full'")
    _add(p, "--F", help="nonlinearity name")
    _add(p, "--F-param", dest="F_param", type=float)
    _add(p, "--u0-const", dest="u0_const", type=float)
    _add(p, "--dt", type=float)
    _add(p, "--T", type=float)
    for flag in ("--kappa", "--alpha", "--eps", "--delta", "--gamma"):
        _add(p, flag, type=float)
    _add(p, "--R", type=int)
    _add(p, "--R1", type=int)

    p = new("convergence-study", "couple solutions across noise cutoff levels")
    _add(p, "--F", help="nonlinearity name")
    _add(p, "--F-param", dest="F_param", type=float)
    _add(p, "--levels", help="e.g. 3..7 or 3,4,5")
    _add(p, "--seeds", type=int)
    _add(p, "--method", choices=("naive", "renorm"))
    _add(p, "--u0-const", dest="u0_const", type=float)
    _add(p, "--dt", type=float)
    _add(p, "--T", type=float)
    _add(p, "--kappa", type=float)
    _add(p, "--alpha", type=float)

    p = new("divergence-study", "raw vs renormalized resonant pairing by level")
    _add(p, "--levels", help="e.g. 1..3")
    _add(p, "--seeds", type=int)
    _add(p, "--kappa", type=float)
    _add(p, "--t", type=float, help="probe time")

    p = new("inequality-suite", "sweep every registered estimate")
    _add(p, "--resolutions", help="comma-separated grid sizes")
    _add(p, "--seeds", type=int)

    p = new("max-principle", "diagnostic run plus sup-bound margin series")
    _add(p, "--seed", type=int)
    _add(p, "--level", help="noise cutoff level")
    _add(p, "--F", help="nonlinearity name")
    _add(p, "--F-param", dest="F_param", type=float)
    _add(p, "--u0-const", dest="u0_const", type=float)
    _add(p, "--dt", type=float)
    _add(p, "--T", type=float)
    for flag in ("--kappa", "--alpha", "--eps", "--delta", "--gamma"):
        _add(p, flag, type=float)
    _add(p, "--R", type=int)
    _add(p, "--R1", type=int)

    return parser


_CONFIG_KEYS = {f.name for f in fields(RunConfig)} - {"command"}


def make_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data.update(loaded)
    overrides = {
        k: v
        for k, v in vars(args).items()
        if k in _CONFIG_KEYS and v is not None
    }
    data.update(overrides)
    return RunConfig(command=args.command, **data)


def cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    if not args.command:
        parser.print_help()
        return 2
    try:
        cfg = make_config(args)
        return DISPATCH[cfg.command](cfg)
    except (NumericalBlowUpError, NonFiniteFieldError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError, KeyError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
