"""Fractional-difference coefficient sequences.

Two families are provided:

* Grünwald-Letnikov coefficients ``w_j = (-1)^j C(alpha, j)``, which fill the
  one-sided triangular strip matrices;
* centred coefficients of the symmetric Riesz derivative,
  ``w_k = (-1)^k G(b+1) cos(b pi/2) / (G(b/2-k+1) G(b/2+k+1))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """Coefficients ``w_0 .. w_N`` belonging to one fractional order."""

    order: float
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("coefficient values must be one-dimensional")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, j):
        return self.values[j]

    def __iter__(self):
        return iter(self.values)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __repr__(self) -> str:
        return f"CoeffVector(order={self.order!r}, values={self.values.tolist()!r})"


def gl_coeffs(alpha: float, n: int) -> CoeffVector:
    """Grünwald-Letnikov coefficients ``w_0 .. w_n`` of order `alpha`.

    Uses the recurrence ``w_0 = 1``, ``w_j = w_{j-1} (1 - (alpha+1)/j)``,
    which is O(n) and never forms a gamma function. For integer ``alpha = p``
    the factor at ``j = p+1`` is exactly zero, so the tail is exactly zero.

    >>> gl_coeffs(1, 3).values.tolist()
    [1.0, -1.0, 0.0, 0.0]
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    j = np.arange(1, n + 1, dtype=float)
    factors = 1.0 - (alpha + 1.0) / j
    values = np.concatenate(([1.0], np.cumprod(factors)))
    return CoeffVector(float(alpha), values + 0.0)  # + 0.0 turns -0.0 into 0.0


def riesz_centered_coeffs(beta: float, n: int) -> CoeffVector:
    """Centred fractional-difference coefficients ``w_0 .. w_n`` for order `beta`.

    ``w_0`` is evaluated from gamma functions; the rest follow from the ratio
    ``w_{k+1} / w_k = (k - beta/2) / (beta/2 + k + 1)``. The ratio vanishes
    exactly where ``1/G(beta/2 - k + 1)`` has its zeros, so the pole case
    (``beta = 2``, ``k >= 2``) yields exact zeros, and nothing overflows for
    large `n`.
    """
    if not 1.0 < beta <= 2.0:
        raise ValueError(f"beta must lie in (1, 2], got {beta}")
    n = int(n)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    half = beta / 2.0
    w0 = special.gamma(beta + 1.0) * np.cos(beta * np.pi / 2.0) * special.rgamma(half + 1.0) ** 2
    k = np.arange(n, dtype=float)
    ratios = (k - half) / (half + k + 1.0)
    values = w0 * np.concatenate(([1.0], np.cumprod(ratios)))
    return CoeffVector(float(beta), values)
