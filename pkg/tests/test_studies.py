"""Study entry points shared by the CLI and the acceptance runs."""
import json
import os

import numpy as np
import pytest

from paratorus.dyadic import DyadicPartition
from paratorus.grid import Grid, RealField
from paratorus.heat import Trajectory
from paratorus.nonlinearity import nonlinearity
from paratorus.solver import ParameterBudget
from paratorus.studies import (
    CONVERGENCE_COLUMNS,
    DIVERGENCE_LEVEL_COLUMNS,
    DIVERGENCE_PAIR_COLUMNS,
    INEQUALITY_COLUMNS,
    MARGIN_COLUMNS,
    convergence_study,
    divergence_study,
    emit_plotdata,
    inequality_study,
    max_principle_study,
    trajectory_sup_diff,
)


def _traj(grid, times, amplitudes):
    return Trajectory(
        times=np.asarray(times, dtype=float),
        snapshots=[RealField.constant(grid, a) for a in amplitudes],
    )


class TestTrajectorySupDiff:
    def test_constant_fields(self):
        g = Grid(16)
        a = _traj(g, [0.0, 0.5, 1.0], [0.0, 1.0, 2.0])
        b = _traj(g, [0.0, 0.5, 1.0], [0.5, 1.2, 1.0])
        # per-snapshot sups are 0.5, 0.2, 1.0
        assert trajectory_sup_diff(a, b) == pytest.approx(1.0)

    def test_identical(self):
        g = Grid(16)
        a = _traj(g, [0.0, 1.0], [1.0, 2.0])
        assert trajectory_sup_diff(a, a) == 0.0

    def test_mesh_mismatch_lengths(self):
        g = Grid(16)
        a = _traj(g, [0.0, 1.0], [1.0, 2.0])
        b = _traj(g, [0.0, 0.5, 1.0], [1.0, 1.5, 2.0])
        with pytest.raises(ValueError, match="different meshes"):
            trajectory_sup_diff(a, b)

    def test_mesh_mismatch_times(self):
        g = Grid(16)
        a = _traj(g, [0.0, 1.0], [1.0, 2.0])
        b = _traj(g, [0.0, 2.0], [1.0, 2.0])
        with pytest.raises(ValueError, match="different meshes"):
            trajectory_sup_diff(a, b)


@pytest.fixture(scope="module")
def tiny_convergence():
    return convergence_study(
        grid_n=32, levels=(1, 2), seeds=2, dt=0.02, T=0.1, u0_const=1.0
    )


@pytest.fixture(scope="module")
def tiny_divergence():
    return divergence_study(grid_n=32, levels=(0, 1, 2), seeds=3, t_ref=0.01)


@pytest.fixture(scope="module")
def tiny_margins():
    return max_principle_study(
        grid_n=32,
        seed=0,
        level=1,
        budget=ParameterBudget(kappa=0.1, alpha=0.67, epsilon=1e-3, delta=0.101),
        F=nonlinearity("sin"),
        dt=0.02,
        T=0.06,
        u0=RealField.constant(Grid(32), 1.0),
    )


class TestConvergenceStudy:
    def test_structure(self, tiny_convergence):
        assert tiny_convergence["levels"] == [1, 2]
        assert tiny_convergence["seeds"] == [0, 1]
        assert tiny_convergence["diffs"].shape == (1, 2)
        assert tiny_convergence["columns"] == CONVERGENCE_COLUMNS
        assert len(tiny_convergence["rows"]) == 1

    def test_row_layout(self, tiny_convergence):
        pair, med, q25, q75, count = tiny_convergence["rows"][0]
        d = tiny_convergence["diffs"][0]
        assert pair == "1-2"
        assert med == pytest.approx(np.median(d))
        assert q25 <= med <= q75
        assert count == 2

    def test_diffs_positive(self, tiny_convergence):
        # different cutoff levels genuinely change the forcing
        assert np.all(tiny_convergence["diffs"] > 0)

    def test_reproducible(self, tiny_convergence):
        again = convergence_study(
            grid_n=32, levels=(1, 2), seeds=2, dt=0.02, T=0.1, u0_const=1.0
        )
        assert np.array_equal(again["diffs"], tiny_convergence["diffs"])

    def test_workers_do_not_change_values(self, tiny_convergence):
        pooled = convergence_study(
            grid_n=32, levels=(1, 2), seeds=2, dt=0.02, T=0.1, u0_const=1.0,
            workers=2,
        )
        assert np.array_equal(pooled["diffs"], tiny_convergence["diffs"])

    def test_naive_differs_from_renorm(self, tiny_convergence):
        naive = convergence_study(
            grid_n=32, levels=(1, 2), seeds=2, dt=0.02, T=0.1, u0_const=1.0,
            method="naive",
        )
        assert not np.array_equal(naive["diffs"], tiny_convergence["diffs"])

    def test_explicit_seed_list(self, tiny_convergence):
        picked = convergence_study(
            grid_n=32, levels=(1, 2), seeds=[1], dt=0.02, T=0.1, u0_const=1.0
        )
        assert picked["seeds"] == [1]
        assert picked["diffs"][0, 0] == tiny_convergence["diffs"][0, 1]

    def test_bad_method(self):
        with pytest.raises(ValueError, match="method"):
            convergence_study(grid_n=32, levels=(1, 2), seeds=1, method="euler")

    def test_needs_two_levels(self):
        with pytest.raises(ValueError, match="two levels"):
            convergence_study(grid_n=32, levels=(2,), seeds=1)


class TestDivergenceStudy:
    def test_structure(self, tiny_divergence):
        assert tiny_divergence["levels"] == [0, 1, 2]
        assert tiny_divergence["raw"].shape == (3, 3)
        assert tiny_divergence["renorm"].shape == (3, 3)
        assert tiny_divergence["succ_diffs"].shape == (2, 3)
        assert tiny_divergence["level_columns"] == DIVERGENCE_LEVEL_COLUMNS
        assert tiny_divergence["pair_columns"] == DIVERGENCE_PAIR_COLUMNS
        assert len(tiny_divergence["level_rows"]) == 3
        assert len(tiny_divergence["pair_rows"]) == 2

    def test_level_rows(self, tiny_divergence):
        for i, (level, raw_med, ren_med, count) in enumerate(tiny_divergence["level_rows"]):
            assert level == tiny_divergence["levels"][i]
            assert raw_med == pytest.approx(np.median(tiny_divergence["raw"][i]))
            assert ren_med == pytest.approx(np.median(tiny_divergence["renorm"][i]))
            assert count == 3

    def test_raw_medians_grow(self, tiny_divergence):
        meds = [row[1] for row in tiny_divergence["level_rows"]]
        assert meds[0] < meds[1] < meds[2]

    def test_pair_rows_label(self, tiny_divergence):
        assert [row[0] for row in tiny_divergence["pair_rows"]] == ["0-1", "1-2"]

    def test_reproducible(self, tiny_divergence):
        again = divergence_study(grid_n=32, levels=(0, 1, 2), seeds=3, t_ref=0.01)
        assert np.array_equal(again["raw"], tiny_divergence["raw"])
        assert np.array_equal(again["succ_diffs"], tiny_divergence["succ_diffs"])

    def test_bad_t_ref(self):
        with pytest.raises(ValueError, match="t_ref"):
            divergence_study(grid_n=32, levels=(0, 1), seeds=1, t_ref=0.0)


class TestInequalityStudy:
    def test_tiny_run(self, monkeypatch):
        import paratorus.studies as studies
        from paratorus.inequalities import registered_suite

        picked = [s for s in registered_suite() if s.name in
                  ("interpolation-exact", "localizer-high")]
        assert len(picked) == 2
        monkeypatch.setattr(studies, "registered_suite", lambda: picked)
        study = inequality_study(resolutions=(16, 32), seeds=2)
        assert study["columns"] == INEQUALITY_COLUMNS
        assert len(study["reports"]) == 2
        assert len(study["rows"]) == 4  # one per (spec, resolution)
        names = {rep.name for rep in study["reports"]}
        assert set(study["summary"]) == names | {"all_passed"}
        for name in names:
            assert set(study["summary"][name]) == {"slope", "passed"}
        assert isinstance(study["summary"]["all_passed"], bool)


class TestMaxPrincipleStudy:
    def test_structure(self, tiny_margins):
        assert tiny_margins["columns"] == MARGIN_COLUMNS
        assert len(tiny_margins["rows"]) == len(tiny_margins["monitor"]["times"])
        assert len(tiny_margins["trajectory"]) >= 2

    def test_min_margin_matches_rows(self, tiny_margins):
        margins = [row[3] for row in tiny_margins["rows"]]
        assert tiny_margins["min_margin"] == pytest.approx(min(margins))

    def test_rows_are_margin_triples(self, tiny_margins):
        for t, lhs, rhs, margin in tiny_margins["rows"]:
            assert margin == pytest.approx(rhs - lhs)
            assert t >= 0.0

    def test_default_initial_state_is_zero(self):
        # sin(0) = 0 makes the zero state invariant, margins reduce to rhs
        study = max_principle_study(
            grid_n=32,
            seed=0,
            level=1,
            budget=ParameterBudget(kappa=0.1, alpha=0.67, epsilon=1e-3, delta=0.101),
            F=nonlinearity("sin"),
            dt=0.02,
            T=0.04,
        )
        assert study["trajectory"][len(study["trajectory"]) - 1].sup_norm() == 0.0


class TestEmitPlotdata:
    def test_empty_rows_header_only(self, tmp_path):
        out = emit_plotdata(("a", "b"), [], tmp_path / "x.csv")
        assert (tmp_path / "x.csv").read_text() == "a,b\n"
        assert out == {"csv": str(tmp_path / "x.csv"), "json": None, "partial_rows": 0}

    def test_cell_formatting(self, tmp_path):
        emit_plotdata(
            ("s", "f", "i", "flag"),
            [("3-4", 0.1, 7, True), ("4-5", float(np.float64(0.25)), 0, False)],
            tmp_path / "x.csv",
        )
        text = (tmp_path / "x.csv").read_text()
        assert text == "s,f,i,flag\n3-4,0.1,7,true\n4-5,0.25,0,false\n"

    def test_float_repr_roundtrip(self, tmp_path):
        value = 0.1 + 0.2  # repr keeps all the digits
        emit_plotdata(("v",), [(value,)], tmp_path / "x.csv")
        cell = (tmp_path / "x.csv").read_text().splitlines()[1]
        assert float(cell) == value

    def test_none_becomes_na_and_counts(self, tmp_path):
        out = emit_plotdata(
            ("a", "b"), [(1, None), (2, 3), (None, None)], tmp_path / "x.csv"
        )
        lines = (tmp_path / "x.csv").read_text().splitlines()
        assert lines[1] == "1,NA"
        assert lines[3] == "NA,NA"
        assert out["partial_rows"] == 2

    def test_width_mismatch_raises(self, tmp_path):
        with pytest.raises(ValueError, match="cells"):
            emit_plotdata(("a", "b"), [(1, 2, 3)], tmp_path / "x.csv")

    def test_json_summary(self, tmp_path):
        out = emit_plotdata(
            ("a",),
            [(1,)],
            tmp_path / "x.csv",
            summary={"zeta": 1, "alpha": [2.0]},
            json_path=tmp_path / "s.json",
        )
        text = (tmp_path / "s.json").read_text()
        assert text.endswith("\n")
        assert text.index('"alpha"') < text.index('"zeta"')  # sorted keys
        assert json.loads(text) == {"zeta": 1, "alpha": [2.0]}
        assert out["json"] == str(tmp_path / "s.json")

    def test_creates_parent_directory(self, tmp_path):
        target = tmp_path / "deep" / "nest" / "x.csv"
        emit_plotdata(("a",), [(1,)], target)
        assert target.exists()

    def test_rerun_is_byte_identical(self, tmp_path):
        rows = [("0-1", 0.123456789012345, 0.1, 0.2, 8)]
        emit_plotdata(CONVERGENCE_COLUMNS, rows, tmp_path / "a.csv")
        emit_plotdata(CONVERGENCE_COLUMNS, rows, tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
