"""Dyadic partition, localizers and Besov/weighted norms."""
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from paratorus.dyadic import DyadicPartition, hoelder_direct, weighted_norms
from paratorus.grid import Grid, RealField, multiply

from test_grid import random_band_limited


@pytest.fixture(scope="module")
def grid():
    return Grid(64)


@pytest.fixture(scope="module")
def part(grid):
    return DyadicPartition(grid)


class TestPartition:
    def test_levels(self, part):
        assert part.levels[0] == -1
        assert part.levels[-1] == part.grid.j_max == 4  # n=64 -> j_max = 4

    def test_completeness_sharp_exact(self, part):
        total = part.profiles.sum(axis=0)
        assert np.array_equal(total, np.ones_like(total))

    def test_completeness_smooth(self, grid):
        smooth = DyadicPartition(grid, mode="smooth")
        total = smooth.profiles.sum(axis=0)
        assert np.max(np.abs(total - 1.0)) < 1e-12

    def test_block_orthogonality_sharp(self, part):
        for i in range(len(part.levels)):
            for j in range(i + 1, len(part.levels)):
                assert np.max(part.profiles[i] * part.profiles[j]) == 0.0

    def test_smooth_blocks_annular(self, grid):
        smooth = DyadicPartition(grid, mode="smooth")
        r = grid.k_abs
        for j in range(0, smooth.j_max):
            prof = smooth.profile(j)
            support = r[np.abs(prof) > 0]
            if support.size:
                assert support.min() >= 0.75 * 2**j - 1e-12
                assert support.max() <= 8.0 / 3.0 * 2**j + 1e-12
        # separation: blocks two apart never overlap
        for i in range(-1, smooth.j_max + 1):
            for j in range(i + 2, smooth.j_max + 1):
                assert np.max(smooth.profile(i) * smooth.profile(j)) < 1e-15

    def test_constant_lives_in_block_minus_one(self, grid, part):
        one = RealField.constant(grid, 1.0)
        for j in part.levels:
            blk = part.block(one, j)
            if j == -1:
                assert abs(blk.values - 1.0).max() < 1e-14
            else:
                assert blk.grid_max() < 1e-14

    def test_single_annulus_mode(self, grid, part):
        # |k| = 4 lies in (2, 4], the j = 1 annulus.
        f = RealField.from_values(grid, np.cos(4 * grid.x1) * np.ones_like(grid.x2))
        sups = part.block_sup_norms(f)
        for j, s in zip(part.levels, sups):
            if j == 1:
                assert abs(s - 1.0) < 1e-12
            else:
                assert s < 1e-13

    def test_blocks_reconstruct(self, grid, part):
        f = random_band_limited(grid, 5)
        total = RealField.zeros(grid)
        for j in part.levels:
            total = total + part.block(f, j)
        assert (total - f).grid_max() < 1e-12 * max(f.grid_max(), 1.0)


class TestLocalizers:
    def test_complement_exact_sharp(self, grid, part):
        f = random_band_limited(grid, 9)
        for level in (-1, 0, 2, part.j_max, 1.5):
            lo = part.localize_low(f, level)
            hi = part.localize_high(f, level)
            assert np.array_equal(lo.spec + hi.spec, f.spec)

    def test_low_matches_block_sum(self, grid, part):
        f = random_band_limited(grid, 10)
        level = 2
        acc = RealField.zeros(grid)
        for j in part.levels:
            if j <= level:
                acc = acc + part.block(f, j)
        assert (acc - part.localize_low(f, level)).grid_max() < 1e-13

    def test_extremes(self, grid, part):
        f = random_band_limited(grid, 11)
        assert part.localize_high(f, part.j_max).grid_max() < 1e-14
        assert part.localize_low(f, -1.5).grid_max() < 1e-14
        assert (part.localize_low(f, part.j_max) - f).grid_max() < 1e-12 * f.grid_max()

    def test_high_decay_sweep(self, grid, part):
        # ||D_{>R} f||_alpha <= 2^{-R(beta-alpha)} ||f||_beta for alpha <= beta:
        # the ratio should stay bounded as R runs through the levels.
        alpha, beta = -1.2, -1.05
        f = random_band_limited(grid, 12)
        nb = part.besov_norm(f, beta)
        for level in range(1, part.j_max + 1):
            hi = part.localize_high(f, level)
            ratio = part.besov_norm(hi, alpha) / (2.0 ** (-level * (beta - alpha)) * nb)
            assert ratio < 4.0


class TestBesov:
    def test_constant_norm(self, grid, part):
        one = RealField.constant(grid, 1.0)
        for alpha in (-1.0, -0.3, 0.5, 1.7):
            assert abs(part.hoelder_norm(one, alpha) - 2.0 ** (-alpha)) < 1e-12

    def test_single_mode_norm(self, grid, part):
        f = RealField.from_values(grid, np.cos(4 * grid.x1) * np.ones_like(grid.x2))
        for alpha in (-0.9, 0.4, 1.1):
            assert abs(part.hoelder_norm(f, alpha) - 2.0**alpha) < 1e-12

    def test_l2_block_norm_parseval(self, grid, part):
        f = random_band_limited(grid, 13)
        norms = part.block_lp_norms(f, 2)
        for idx, j in enumerate(part.levels):
            blk = part.block(f, j)
            direct = np.sqrt(np.sum(np.abs(blk.spec) ** 2))
            assert abs(norms[idx] - direct) < 1e-12 * max(direct, 1.0)

    def test_homogeneity_and_triangle(self, grid, part):
        f = random_band_limited(grid, 14)
        g = random_band_limited(grid, 15)
        for p in (1, 2, np.inf):
            for q in (1, 2, np.inf):
                nf = part.besov_norm(f, 0.4, p, q)
                assert abs(part.besov_norm(-2.5 * f, 0.4, p, q) - 2.5 * nf) < 1e-10 * nf
                s = part.besov_norm(f + g, 0.4, p, q)
                assert s <= nf + part.besov_norm(g, 0.4, p, q) + 1e-10

    def test_invalid_pq(self, grid, part):
        f = random_band_limited(grid, 16)
        with pytest.raises(ValueError):
            part.besov_norm(f, 0.0, p=3)
        with pytest.raises(ValueError):
            part.besov_norm(f, 0.0, q=4)

    def test_direct_hoelder_comparable(self, grid, part):
        f = random_band_limited(grid, 17, kmax=8)
        alpha = 0.6
        dyadic = part.hoelder_norm(f, alpha) + f.sup_norm()
        direct = hoelder_direct(f, alpha)
        ratio = direct / dyadic
        assert 0.05 < ratio < 20.0


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    a1=st.floats(-1.5, 1.9),
    a2=st.floats(-1.5, 1.9),
    theta=st.floats(0.01, 0.99),
)
def test_interpolation_inequality(seed, a1, a2, theta):
    # ||f||_alpha <= ||f||_a1^theta ||f||_a2^(1-theta) with
    # alpha = theta a1 + (1-theta) a2: exact for sup-type norms over the
    # same blocks, so the ratio may exceed 1 only by rounding.
    grid = Grid(32)
    part = DyadicPartition(grid)
    f = random_band_limited(grid, seed)
    alpha = theta * a1 + (1 - theta) * a2
    lhs = part.hoelder_norm(f, alpha)
    rhs = part.hoelder_norm(f, a1) ** theta * part.hoelder_norm(f, a2) ** (1 - theta)
    assert lhs <= rhs * (1 + 1e-12)


class TestWeightedNorms:
    def test_constant_trajectory(self, grid, part):
        g = random_band_limited(grid, 18)
        times = np.array([0.0, 0.25, 0.5, 1.0])
        traj = SimpleNamespace(times=times, snapshots=[g] * 4)
        rep = weighted_norms(part, traj, alpha=0.5, gamma=0.0)
        assert abs(rep.c_norm - part.hoelder_norm(g, 0.5)) < 1e-12
        assert rep.hoelder_time == 0.0
        assert rep.s_norm == rep.c_norm

    def test_linear_ramp(self, grid, part):
        # f(t) = t * 1: with alpha = 1, gamma = 0 the time quotient is
        # (t-s)^{1/2}, maximized at 1 over [0, 1].
        times = np.linspace(0.0, 1.0, 5)
        snaps = [RealField.constant(grid, t) for t in times]
        traj = SimpleNamespace(times=times, snapshots=snaps)
        rep = weighted_norms(part, traj, alpha=1.0, gamma=0.0)
        assert abs(rep.hoelder_time - 1.0) < 1e-12
        assert abs(rep.c_norm - 2.0 ** (-1.0)) < 1e-12
        assert abs(rep.s_norm - rep.c_norm - rep.hoelder_time) < 1e-15

    def test_gamma_weight_kills_origin(self, grid, part):
        g = random_band_limited(grid, 19)
        times = np.array([0.0, 0.5])
        traj = SimpleNamespace(times=times, snapshots=[g, g])
        rep = weighted_norms(part, traj, alpha=0.5, gamma=0.5)
        assert abs(rep.c_norm - 0.5**0.5 * part.hoelder_norm(g, 0.5)) < 1e-12
        assert rep.hoelder_time == 0.0
