"""Bony paraproduct decomposition, resonant commutators, paralinearization.

For fields f, g with dyadic blocks D_j the product splits as

    fg = (f << g) + (f o g) + (f >> g),

    f << g = sum_j S_{j-1} f  D_j g,     S_{j-1} = sum_{i < j-1} D_i,
    f o g  = sum_{|i-j| <= 1} D_i f D_j g,
    f >> g = g << f.

All three pieces are assembled from the block point values on the common 2x
oversampled grid and projected back once each, so the three-way identity
against the dealiased product holds to rounding.

The resonant-commutator and paralinearization operators of the calculus:

    com(f, g, h) = (f << g) o h - f (g o h),
    remainder(F, u) = F(u) - F'(u) << u,

with F(u) understood as the band-limited projection of the pointwise
composition evaluated on the oversampled points (the discrete meaning of
composition everywhere in this package).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import DyadicPartition
from .grid import RealField, field_from_padded_values, multiply


@dataclass
class BonyTriple:
    """The three Bony pieces of a product; their sum is the product."""

    para_lt: RealField   # low frequencies of f modulating high of g
    resonant: RealField  # diagonal interactions
    para_gt: RealField   # g << f

    def total(self) -> RealField:
        return self.para_lt + self.resonant + self.para_gt


def _prefix_blocks(stack: np.ndarray) -> np.ndarray:
    """S_{j-1} point values for each level index: sum of blocks i <= j-2."""
    out = np.zeros_like(stack)
    out[2:] = np.cumsum(stack, axis=0)[:-2]
    return out


def _diag_blocks(stack: np.ndarray) -> np.ndarray:
    """sum_{|i-j|<=1} block_i, indexed by j."""
    out = stack.copy()
    out[1:] += stack[:-1]
    out[:-1] += stack[1:]
    return out


def bony(partition: DyadicPartition, f: RealField, g: RealField) -> BonyTriple:
    f._check(g)
    fp = partition.block_values_2x(f)
    gp = partition.block_values_2x(g)
    grid = f.grid
    lt = np.einsum("jxy,jxy->xy", _prefix_blocks(fp), gp)
    res = np.einsum("jxy,jxy->xy", _diag_blocks(fp), gp)
    gt = np.einsum("jxy,jxy->xy", _prefix_blocks(gp), fp)
    return BonyTriple(
        para_lt=field_from_padded_values(grid, lt),
        resonant=field_from_padded_values(grid, res),
        para_gt=field_from_padded_values(grid, gt),
    )


def para_lt(partition: DyadicPartition, f: RealField, g: RealField) -> RealField:
    """f << g alone (one projection)."""
    f._check(g)
    fp = partition.block_values_2x(f)
    gp = partition.block_values_2x(g)
    return field_from_padded_values(
        f.grid, np.einsum("jxy,jxy->xy", _prefix_blocks(fp), gp)
    )


def para_gt(partition: DyadicPartition, f: RealField, g: RealField) -> RealField:
    return para_lt(partition, g, f)


def resonant(partition: DyadicPartition, f: RealField, g: RealField) -> RealField:
    f._check(g)
    fp = partition.block_values_2x(f)
    gp = partition.block_values_2x(g)
    return field_from_padded_values(
        f.grid, np.einsum("jxy,jxy->xy", _diag_blocks(fp), gp)
    )


def commutator_com(
    partition: DyadicPartition, f: RealField, g: RealField, h: RealField
) -> RealField:
    """com(f, g, h) = (f << g) o h - f (g o h)."""
    return resonant(partition, para_lt(partition, f, g), h) - multiply(
        f, resonant(partition, g, h)
    )


def apply_pointwise(fn, u: RealField) -> RealField:
    """Band-limited projection of x -> fn(u(x)), via the oversampled points."""
    w = np.asarray(fn(u.values_2x), dtype=np.float64)
    if w.shape != u.values_2x.shape:
        raise ValueError("pointwise map must preserve the sample shape")
    if not np.all(np.isfinite(w)):
        raise ValueError("pointwise composition produced non-finite values")
    return field_from_padded_values(u.grid, w)


def paralin_remainder(partition: DyadicPartition, F, u: RealField) -> RealField:
    """Paralinearization remainder F(u) - F'(u) << u.

    F is any object with callable attributes ``f`` and ``df`` (for instance a
    NonlinearitySpec).
    """
    fu = apply_pointwise(F.f, u)
    dfu = apply_pointwise(F.df, u)
    return fu - para_lt(partition, dfu, u)
