"""Scalar nonlinearities with validated derivatives.

A NonlinearitySpec packages F, F' and F'' for the reaction term F(u).  The
supplied derivatives are cross-checked against central finite differences on
[-10, 10] at construction time, so a mistyped derivative fails fast rather
than corrupting a solve.  ``bounded`` records whether F is C^2_b (the linear
nonlinearity is not, and is flagged accordingly).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


@dataclass
class NonlinearitySpec:
    name: str
    f: Callable
    df: Callable
    d2f: Callable
    cb2_bound: Optional[float] = None
    bounded: bool = True
    _validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self._validate:
            xs = np.linspace(-10.0, 10.0, 401)
            h = 1e-5
            fd1 = (self.f(xs + h) - self.f(xs - h)) / (2 * h)
            if np.max(np.abs(self.df(xs) - fd1)) > 1e-6 * (1 + np.max(np.abs(fd1))):
                raise ValueError(f"{self.name}: first derivative fails finite-difference check")
            fd2 = (self.df(xs + h) - self.df(xs - h)) / (2 * h)
            if np.max(np.abs(self.d2f(xs) - fd2)) > 1e-6 * (1 + np.max(np.abs(fd2))):
                raise ValueError(f"{self.name}: second derivative fails finite-difference check")


def nonlinearity(name: str, param: float = 1.0) -> NonlinearitySpec:
    """Built-in nonlinearities: 'sin', 'tanh' (scaled), 'const', 'linear'."""
    if name == "sin":
        return NonlinearitySpec("sin", np.sin, np.cos, lambda x: -np.sin(x), cb2_bound=1.0)
    if name == "tanh":
        c = float(param)

        def sech2(x):
            return 1.0 / np.cosh(x) ** 2

        return NonlinearitySpec(
            f"tanh({c:g})",
            lambda x: c * np.tanh(x),
            lambda x: c * sech2(x),
            lambda x: -2.0 * c * sech2(x) * np.tanh(x),
            cb2_bound=2.0 * abs(c),
        )
    if name == "const":
        c = float(param)
        return NonlinearitySpec(
            f"const({c:g})",
            lambda x: np.full_like(np.asarray(x, dtype=float), c),
            lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            cb2_bound=abs(c),
        )
    if name == "linear":
        a = float(param)
        return NonlinearitySpec(
            f"linear({a:g})",
            lambda x: a * np.asarray(x, dtype=float),
            lambda x: np.full_like(np.asarray(x, dtype=float), a),
            lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            cb2_bound=None,
            bounded=False,
        )
    raise ValueError(f"unknown nonlinearity {name!r}")
