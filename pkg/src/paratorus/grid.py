"""Periodic grid, real scalar fields and exact dealiased products.

Fields live on the square torus [0, 2*pi)^2, sampled on an n-by-n lattice
with n a power of two.  The spectral convention is

    f(x) = sum_k fhat_k exp(i k.x),    k integer, |k_i| <= n/2 - 1,

so Fourier multipliers (heat flow, dyadic projections, derivatives) act
directly on integer frequencies.  The Nyquist row and column (k_i = -n/2)
are annihilated whenever a field is constructed: this makes the
trigonometric representative of every stored field unique, real and
symmetric, and it is what keeps the zero-padded product below exact.

Products are evaluated by zero-padding both factors to a 2n grid,
multiplying pointwise and truncating back.  A product of two fields with
frequencies below n/2 has frequencies below n, which the 2n grid represents
exactly, so the truncation is the exact spectral projection of the true
product - there is no aliasing error, only rounding.
"""
from __future__ import annotations

import csv
import os
import struct

import numpy as np

TWO_PI = 2.0 * np.pi

_FIELD_MAGIC = b"PCF1"
_HEADER_SIZE = 16


class GridMismatchError(ValueError):
    """Operands live on different grids."""


class NonFiniteFieldError(ValueError):
    """Field data contains NaN or infinity."""


class Grid:
    """Uniform n-by-n sampling of [0, 2*pi)^2 with integer frequencies.

    n must be a power of two, n >= 8.  The highest dyadic block index is
    j_max = log2(n/2) - 1; annuli above 2**j_max are absorbed into the top
    block by the dyadic partition.
    """

    def __init__(self, n: int):
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"grid size must be a power of two >= 8, got {n}")
        self.n = int(n)
        self.j_max = int(np.log2(n // 2)) - 1
        k1 = np.fft.fftfreq(n, d=1.0 / n)  # 0, 1, ..., n/2-1, -n/2, ..., -1
        self.kx = k1[:, None]
        self.ky = k1[None, :]
        self.k_sq = self.kx ** 2 + self.ky ** 2
        self.k_abs = np.sqrt(self.k_sq)
        half = n // 2
        self.nyquist_mask = (np.abs(self.kx) == half) | (np.abs(self.ky) == half)
        self.x1 = TWO_PI * np.arange(n)[:, None] / n
        self.x2 = TWO_PI * np.arange(n)[None, :] / n

    @property
    def spacing(self) -> float:
        return TWO_PI / self.n

    def __eq__(self, other):
        return isinstance(other, Grid) and other.n == self.n

    def __hash__(self):
        return hash(("Grid", self.n))

    def __repr__(self):
        return f"Grid(n={self.n})"


def _canonical_spec(grid: Grid, spec: np.ndarray) -> np.ndarray:
    out = np.array(spec, dtype=np.complex128, copy=True)
    out[grid.nyquist_mask] = 0.0
    return out


class RealField:
    """Immutable real scalar field on a :class:`Grid`.

    Values and spectral coefficients are derived lazily from one another;
    both are cached, along with the zero-padded point values on the 2n grid
    that the product and the oversampled sup norm share.  Use
    :func:`multiply` for products; the ``*`` operator only accepts scalars
    to keep aliased pointwise products out of the call sites.
    """

    def __init__(self, grid: Grid, *, values=None, spec=None):
        self.grid = grid
        self._values = None
        self._spec = None
        self._padded = None
        self._extras: dict = {}  # per-partition caches, managed elsewhere
        if spec is not None:
            self._spec = spec  # trusted canonical layout
        elif values is not None:
            self._values = values
        else:
            raise ValueError("need values or spectral coefficients")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_values(cls, grid: Grid, values) -> "RealField":
        arr = np.asarray(values, dtype=np.float64)
        if arr.shape != (grid.n, grid.n):
            raise ValueError(f"expected shape {(grid.n, grid.n)}, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteFieldError("field values contain NaN or Inf")
        spec = _canonical_spec(grid, np.fft.fft2(arr) / grid.n ** 2)
        return cls(grid, spec=spec)

    @classmethod
    def from_spectral(cls, grid: Grid, coeffs) -> "RealField":
        arr = np.asarray(coeffs, dtype=np.complex128)
        if arr.shape != (grid.n, grid.n):
            raise ValueError(f"expected shape {(grid.n, grid.n)}, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteFieldError("spectral coefficients contain NaN or Inf")
        spec = _canonical_spec(grid, arr)
        # Hermitian symmetry fhat(-k) = conj(fhat(k)) is what makes the field real.
        mirrored = _reflect(spec)
        scale = np.max(np.abs(spec)) or 1.0
        if np.max(np.abs(spec - np.conj(mirrored))) > 1e-9 * scale:
            raise ValueError("spectral coefficients are not Hermitian-symmetric")
        return cls(grid, spec=spec)

    @classmethod
    def zeros(cls, grid: Grid) -> "RealField":
        return cls(grid, spec=np.zeros((grid.n, grid.n), dtype=np.complex128))

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "RealField":
        spec = np.zeros((grid.n, grid.n), dtype=np.complex128)
        spec[0, 0] = c
        return cls(grid, spec=spec)

    # -- lazy representations -----------------------------------------

    @property
    def spec(self) -> np.ndarray:
        if self._spec is None:
            self._spec = _canonical_spec(
                self.grid, np.fft.fft2(self._values) / self.grid.n ** 2
            )
        return self._spec

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            vals = np.fft.ifft2(self.spec * self.grid.n ** 2).real
            vals.setflags(write=False)
            self._values = vals
        return self._values

    @property
    def values_2x(self) -> np.ndarray:
        """Point values on the 2x oversampled (2n) grid."""
        if self._padded is None:
            big = embed_spectral(self.spec)
            vals = np.fft.ifft2(big * (2 * self.grid.n) ** 2).real
            vals.setflags(write=False)
            self._padded = vals
        return self._padded

    # -- basic functionals --------------------------------------------

    def mean(self) -> float:
        return float(self.spec[0, 0].real)

    def sup_norm(self) -> float:
        """Max of |f| over the 2x oversampled point set."""
        return float(np.max(np.abs(self.values_2x)))

    def grid_max(self) -> float:
        return float(np.max(np.abs(self.values)))

    def lp_norm(self, p) -> float:
        """L^p norm in the normalized (probability) measure on the torus."""
        if p == np.inf:
            return self.sup_norm()
        if p not in (1, 2):
            raise ValueError("p must be 1, 2 or inf")
        return float(np.mean(np.abs(self.values) ** p) ** (1.0 / p))

    # -- linear arithmetic ---------------------------------------------

    def _check(self, other: "RealField"):
        if self.grid != other.grid:
            raise GridMismatchError("fields live on different grids")

    def __add__(self, other):
        if not isinstance(other, RealField):
            return NotImplemented
        self._check(other)
        return RealField(self.grid, spec=self.spec + other.spec)

    def __sub__(self, other):
        if not isinstance(other, RealField):
            return NotImplemented
        self._check(other)
        return RealField(self.grid, spec=self.spec - other.spec)

    def __neg__(self):
        return RealField(self.grid, spec=-self.spec)

    def __mul__(self, a):
        if isinstance(a, RealField):
            raise TypeError("use multiply(f, g) for field products (dealiased)")
        return RealField(self.grid, spec=self.spec * float(a))

    __rmul__ = __mul__

    def apply_multiplier(self, m) -> "RealField":
        """New field with coefficients m(k) * fhat(k)."""
        return RealField(self.grid, spec=self.spec * m)

    def __repr__(self):
        return f"RealField(n={self.grid.n}, sup~{self.grid_max():.3g})"


# -- transforms ---------------------------------------------------------


def to_spectral(f: RealField) -> np.ndarray:
    """Coefficient table of f (numpy fft layout, copy)."""
    return f.spec.copy()


def from_spectral(grid: Grid, coeffs) -> RealField:
    return RealField.from_spectral(grid, coeffs)


def embed_spectral(spec: np.ndarray) -> np.ndarray:
    """Embed an n-layout coefficient table into the 2n layout (zero padding)."""
    n = spec.shape[0]
    big = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    half = n // 2
    pos = np.arange(0, half)           # k = 0 .. n/2-1
    neg = np.arange(n - half + 1, n)   # k = -(n/2-1) .. -1
    bneg = neg + n                     # same k in the 2n layout
    big[np.ix_(pos, pos)] = spec[np.ix_(pos, pos)]
    big[np.ix_(pos, bneg)] = spec[np.ix_(pos, neg)]
    big[np.ix_(bneg, pos)] = spec[np.ix_(neg, pos)]
    big[np.ix_(bneg, bneg)] = spec[np.ix_(neg, neg)]
    return big


def truncate_spectral(big: np.ndarray) -> np.ndarray:
    """Project a 2n-layout coefficient table onto the n-layout window."""
    m = big.shape[0]
    n = m // 2
    half = n // 2
    spec = np.zeros((n, n), dtype=np.complex128)
    pos = np.arange(0, half)
    neg = np.arange(n - half + 1, n)
    bneg = neg + n
    spec[np.ix_(pos, pos)] = big[np.ix_(pos, pos)]
    spec[np.ix_(pos, neg)] = big[np.ix_(pos, bneg)]
    spec[np.ix_(neg, pos)] = big[np.ix_(bneg, pos)]
    spec[np.ix_(neg, neg)] = big[np.ix_(bneg, bneg)]
    return spec


def field_from_padded_values(grid: Grid, vals2x: np.ndarray) -> RealField:
    """Field whose spectrum is the window projection of 2n-grid point data."""
    big = np.fft.fft2(vals2x) / (2 * grid.n) ** 2
    return RealField(grid, spec=truncate_spectral(big))


def multiply(f: RealField, g: RealField) -> RealField:
    """Exact dealiased product: pad to 2n, multiply pointwise, project back."""
    if not isinstance(f, RealField) or not isinstance(g, RealField):
        raise TypeError("multiply expects two RealField operands")
    f._check(g)
    return field_from_padded_values(f.grid, f.values_2x * g.values_2x)


# -- serialization -------------------------------------------------------


def save_field(f: RealField, path) -> None:
    """Binary field file: 16-byte header (magic, n as u32 LE), row-major f64 LE."""
    header = _FIELD_MAGIC + struct.pack("<I", f.grid.n) + b"\x00" * 8
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def load_field(path) -> RealField:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER_SIZE)
        if len(header) != _HEADER_SIZE or header[:4] != _FIELD_MAGIC:
            raise ValueError(f"{path}: not a field file (bad magic)")
        n = struct.unpack("<I", header[4:8])[0]
        data = np.frombuffer(fh.read(8 * n * n), dtype="<f8").reshape(n, n)
    if not np.all(np.isfinite(data)):
        raise NonFiniteFieldError(f"{path}: field values contain NaN or Inf")
    # Values written by save_field are already canonical; keep them bitwise
    # so that save/load round trips are byte identical.
    vals = np.array(data, dtype=np.float64)
    vals.setflags(write=False)
    return RealField(Grid(n), values=vals)


def export_field_csv(f: RealField, path) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x_index", "y_index", "value"])
        vals = f.values
        for i in range(f.grid.n):
            for j in range(f.grid.n):
                writer.writerow([i, j, repr(float(vals[i, j]))])


def _reflect(spec: np.ndarray) -> np.ndarray:
    """A[k] -> A[-k] on the fft layout."""
    return np.roll(spec[::-1, ::-1], shift=(1, 1), axis=(0, 1))
