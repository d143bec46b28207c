"""Eliminators, shifters, shifted strip matrices and Kronecker products.

Sparse matrices are plain ``scipy.sparse.csr_array`` objects; `finalize`
brings any sparse input into canonical form (duplicates summed, explicit
zeros dropped). Row and column numbers in `Eliminator` are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .coeffs import CoeffVector

SparseOperator = sp.csr_array


def finalize(a) -> sp.csr_array:
    """Canonical CSR copy of `a`: duplicates summed, exact zeros removed."""
    out = sp.csr_array(a, dtype=float, copy=True)
    out.sum_duplicates()
    out.eliminate_zeros()
    return out


def identity(n: int) -> sp.csr_array:
    return sp.eye_array(n, format="csr")


@dataclass(frozen=True)
class Eliminator:
    """Identity of order `base_size` with the rows in `omitted` deleted."""

    base_size: int
    omitted: tuple[int, ...] = ()

    def __post_init__(self):
        omitted = tuple(sorted(int(r) for r in self.omitted))
        if len(set(omitted)) != len(omitted):
            raise ValueError("omitted rows must not repeat")
        if omitted and (omitted[0] < 1 or omitted[-1] > self.base_size):
            raise ValueError(f"omitted rows must lie in 1..{self.base_size}")
        object.__setattr__(self, "omitted", omitted)

    @property
    def kept(self) -> np.ndarray:
        """0-based indices of the rows that survive."""
        mask = np.ones(self.base_size, dtype=bool)
        mask[np.asarray(self.omitted, dtype=int) - 1] = False
        return np.flatnonzero(mask)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.base_size - len(self.omitted), self.base_size)

    def matrix(self) -> sp.csr_array:
        kept = self.kept
        data = np.ones(kept.size)
        return sp.csr_array((data, (np.arange(kept.size), kept)), shape=self.shape)


def eliminate_rows(s: Eliminator, a) -> sp.csr_array:
    """``S @ A``: drop the omitted rows of `a`."""
    a = sp.csr_array(a)
    if a.shape[0] != s.base_size:
        raise ValueError(f"matrix has {a.shape[0]} rows, eliminator expects {s.base_size}")
    return finalize(a[s.kept, :])


def eliminate_cols(s: Eliminator, a) -> sp.csr_array:
    """``A @ S.T``: drop the omitted columns of `a`."""
    a = sp.csc_array(a)
    if a.shape[1] != s.base_size:
        raise ValueError(f"matrix has {a.shape[1]} columns, eliminator expects {s.base_size}")
    return finalize(a[:, s.kept])


@dataclass(frozen=True)
class Shifter:
    """Square 0/1 matrix with ones on the `offset`-th diagonal above or below the main one."""

    size: int
    offset: int
    direction: Literal["above", "below"]

    def __post_init__(self):
        if self.direction not in ("above", "below"):
            raise ValueError(f"direction must be 'above' or 'below', got {self.direction!r}")
        if not 0 <= self.offset < self.size:
            raise ValueError(f"offset must lie in 0..{self.size - 1}")

    def matrix(self) -> sp.csr_array:
        k = self.offset if self.direction == "above" else -self.offset
        return sp.eye_array(self.size, k=k, format="csr")


def kron(a, b) -> sp.csr_array:
    """Kronecker product ``a (x) b`` as a finalized sparse matrix."""
    return finalize(sp.kron(sp.csr_array(a), sp.csr_array(b), format="csr"))


def _coefficient_values(coeffs, needed: int) -> np.ndarray:
    values = coeffs.values if isinstance(coeffs, CoeffVector) else np.asarray(coeffs, dtype=float)
    if values.size < needed:
        raise ValueError(f"need at least {needed} coefficients, got {values.size}")
    return values


def _place(values: np.ndarray, offsets: np.ndarray, n: int, scale: float) -> sp.csr_array:
    """(n+1)-square matrix with ``scale * values[j]`` on diagonal ``offsets[j]``."""
    size = n + 1
    inside = (np.abs(offsets) < size) & (values != 0.0)
    diagonals = [np.full(size - abs(d), scale * w) for w, d in zip(values[inside], offsets[inside])]
    if not diagonals:
        return sp.csr_array((size, size))
    return sp.diags_array(diagonals, offsets=offsets[inside].tolist(), shape=(size, size), format="csr")


def shift_sw(coeffs, n: int, scale: float = 1.0) -> sp.csr_array:
    """Upper strip pattern moved one step south-west.

    Equals ``S_1 E- U_{n+1} E- S^T`` where the eliminators strike the zero
    row and column the two shifts create: ``w_0`` lands on the first
    subdiagonal, ``w_1`` on the main diagonal, ``w_j`` on superdiagonal ``j-1``.
    """
    values = _coefficient_values(coeffs, n + 2)
    offsets = np.arange(values.size) - 1
    return _place(values, offsets, n, scale)


def shift_ne(coeffs, n: int, scale: float = 1.0, orientation: Literal["lower", "upper"] = "upper",
             steps: int = 1) -> sp.csr_array:
    """Strip pattern moved `steps` steps north-east.

    For an upper pattern ``w_j`` lands on diagonal ``j + steps``; for a lower
    pattern on diagonal ``steps - j``. With ``steps = 1`` and a lower pattern
    this is the right-sided counterpart of `shift_sw`. The construction
    starts from a strip matrix of order ``n + steps``, so ``n + steps + 1``
    coefficients are required.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    values = _coefficient_values(coeffs, n + steps + 1)
    j = np.arange(values.size)
    if orientation == "upper":
        offsets = j + steps
    elif orientation == "lower":
        offsets = steps - j
    else:
        raise ValueError(f"orientation must be 'lower' or 'upper', got {orientation!r}")
    return _place(values, offsets, n, scale)


def bandwidth(a) -> tuple[int, int]:
    """(lower, upper) bandwidth of a sparse matrix."""
    coo = sp.coo_array(a)
    if coo.nnz == 0:
        return (0, 0)
    d = coo.col.astype(np.int64) - coo.row.astype(np.int64)
    return (int(max(0, -d.min())), int(max(0, d.max())))
