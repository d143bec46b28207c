"""Triangular strip matrices and their generating-series algebra.

A strip matrix of size ``N+1`` is a triangular Toeplitz matrix fixed by its
first column (lower) or first row (upper). Sums and products of strip
matrices of the same orientation are again strip matrices, and are computed
on the coefficient vectors directly: the product is the Cauchy product of the
generating polynomials truncated at degree ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .coeffs import CoeffVector

Orientation = Literal["lower", "upper"]


@dataclass(frozen=True, eq=False)
class StripMatrix:
    """Lower or upper triangular strip matrix ``scale * T(coeffs)``.

    Entry ``(r, c)`` is ``scale * coeffs[r - c]`` (lower) or
    ``scale * coeffs[c - r]`` (upper), zero when the index is negative.
    """

    orientation: Orientation
    coeffs: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        if self.orientation not in ("lower", "upper"):
            raise ValueError(f"orientation must be 'lower' or 'upper', got {self.orientation!r}")
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("strip matrix needs a nonempty 1-D coefficient vector")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "scale", float(self.scale))

    @property
    def size(self) -> int:
        return self.coeffs.size

    @property
    def shape(self) -> tuple[int, int]:
        return (self.size, self.size)

    def first_column(self) -> np.ndarray:
        if self.orientation == "lower":
            return self.scale * self.coeffs
        out = np.zeros(self.size)
        out[0] = self.scale * self.coeffs[0]
        return out

    def first_row(self) -> np.ndarray:
        if self.orientation == "upper":
            return self.scale * self.coeffs
        out = np.zeros(self.size)
        out[0] = self.scale * self.coeffs[0]
        return out

    def toarray(self) -> np.ndarray:
        return scipy.linalg.toeplitz(self.first_column(), self.first_row())

    def tosparse(self) -> sp.csr_array:
        """Sparse form; exact zero coefficients are not stored."""
        sign = -1 if self.orientation == "lower" else 1
        nz = np.flatnonzero(self.coeffs)
        if nz.size == 0:
            return sp.csr_array(self.shape)
        diagonals = [np.full(self.size - j, self.scale * self.coeffs[j]) for j in nz]
        return sp.diags_array(diagonals, offsets=(sign * nz).tolist(), shape=self.shape, format="csr")

    def __matmul__(self, other):
        if isinstance(other, StripMatrix):
            return strip_mul(self, other)
        return strip_apply(self, other)

    def __add__(self, other: StripMatrix) -> StripMatrix:
        return strip_add(self, other)


def make_strip(orientation: Orientation, coeffs, scale: float = 1.0) -> StripMatrix:
    """Build the ``len(coeffs)``-square strip matrix with the given first column/row."""
    if isinstance(coeffs, CoeffVector):
        coeffs = coeffs.values
    return StripMatrix(orientation, coeffs, scale)


def _check_compatible(a: StripMatrix, b: StripMatrix) -> None:
    if a.orientation != b.orientation:
        raise ValueError(f"orientation mismatch: {a.orientation} vs {b.orientation}")
    if a.size != b.size:
        raise ValueError(f"size mismatch: {a.size} vs {b.size}")


def strip_add(a: StripMatrix, b: StripMatrix) -> StripMatrix:
    _check_compatible(a, b)
    return StripMatrix(a.orientation, a.scale * a.coeffs + b.scale * b.coeffs, 1.0)


def strip_mul(a: StripMatrix, b: StripMatrix) -> StripMatrix:
    """Product of two strip matrices: truncated convolution of the coefficients."""
    _check_compatible(a, b)
    coeffs = np.convolve(a.coeffs, b.coeffs)[: a.size]
    return StripMatrix(a.orientation, coeffs, a.scale * b.scale)


def strip_apply(a: StripMatrix, v) -> np.ndarray:
    """Matrix-vector product ``a @ v`` without densifying `a`."""
    v = np.asarray(v, dtype=float)
    if v.shape != (a.size,):
        raise ValueError(f"vector of length {a.size} expected, got shape {v.shape}")
    if a.orientation == "lower":
        return a.scale * np.convolve(a.coeffs, v)[: a.size]
    # upper: y[r] = sum_j w_j v[r+j], i.e. the lower product on the reversed vector
    return a.scale * np.convolve(a.coeffs, v[::-1])[: a.size][::-1]
