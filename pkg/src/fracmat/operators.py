"""Discrete fractional-derivative matrices in time and space.

Nodes are numbered in descending order (latest time, rightmost point first),
so the left-sided time derivative is an *upper* triangular strip matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .coeffs import gl_coeffs, riesz_centered_coeffs
from .stripmat import make_strip
from .structured import finalize, shift_ne, shift_sw

RieszVariant = Literal["centered", "halfsum"]
RIESZ_VARIANTS = ("centered", "halfsum")


@dataclass(frozen=True, eq=False)
class TimeOperator:
    order: float
    steps: int
    tau: float
    delay_steps: int
    matrix: sp.csr_array


@dataclass(frozen=True, eq=False)
class SpaceOperator:
    order: float
    intervals: int
    h: float
    variant: RieszVariant
    matrix: sp.csr_array


def _check_time_args(n: int, tau: float) -> None:
    if n < 1:
        raise ValueError(f"number of time steps must be >= 1, got {n}")
    if not tau > 0:
        raise ValueError(f"time step must be positive, got {tau}")


def _check_space_args(beta: float, m: int, h: float) -> None:
    if not 1.0 < beta <= 2.0:
        raise ValueError(f"beta must lie in (1, 2], got {beta}")
    if m < 2:
        raise ValueError(f"number of spatial intervals must be >= 2, got {m}")
    if not h > 0:
        raise ValueError(f"spatial step must be positive, got {h}")


def ban(alpha: float, n: int, tau: float) -> TimeOperator:
    """Backward-difference matrix of the left-sided derivative of order `alpha`."""
    _check_time_args(n, tau)
    strip = make_strip("upper", gl_coeffs(alpha, n), tau ** (-alpha))
    return TimeOperator(float(alpha), n, float(tau), 0, strip.tosparse())


def fan(alpha: float, n: int, tau: float) -> TimeOperator:
    """Forward-difference matrix of the right-sided derivative; the transpose of `ban`."""
    _check_time_args(n, tau)
    strip = make_strip("lower", gl_coeffs(alpha, n), tau ** (-alpha))
    return TimeOperator(float(alpha), n, float(tau), 0, strip.tosparse())


def delayed_ban(gamma: float, n: int, k: int, tau: float) -> TimeOperator:
    """`ban` evaluated at ``t - k*tau``: coefficient ``w_j`` sits on diagonal ``j + k``.

    The last `k` rows (time layers before the delay has elapsed) are zero,
    which corresponds to a zero history for ``t < 0``.
    """
    _check_time_args(n, tau)
    if not 0 <= k <= n:
        raise ValueError(f"delay steps must lie in 0..{n}, got {k}")
    matrix = shift_ne(gl_coeffs(gamma, n + k), n, tau ** (-gamma), "upper", steps=k)
    return TimeOperator(float(gamma), n, float(tau), int(k), matrix)


def ransym(beta: float, m: int, h: float) -> SpaceOperator:
    """Symmetric Riesz matrix as the half-sum of shifted one-sided GL patterns.

    The left-sided (upper) pattern is moved one step south-west and the
    right-sided (lower) pattern one step north-east; for ``beta = 2`` the sum
    collapses to the classical ``[1, -2, 1] / h^2`` stencil.
    """
    _check_space_args(beta, m, h)
    w = gl_coeffs(beta, m + 1)
    scale = 0.5 * h ** (-beta)
    matrix = shift_sw(w, m, scale) + shift_ne(w, m, scale, "lower")
    return SpaceOperator(float(beta), m, float(h), "halfsum", finalize(matrix))


def ranort(beta: float, m: int, h: float) -> SpaceOperator:
    """Symmetric Toeplitz Riesz matrix from the centred fractional differences."""
    _check_space_args(beta, m, h)
    row = h ** (-beta) * riesz_centered_coeffs(beta, m).values
    return SpaceOperator(float(beta), m, float(h), "centered", finalize(scipy.linalg.toeplitz(row)))


def riesz(beta: float, m: int, h: float, variant: RieszVariant = "centered") -> SpaceOperator:
    if variant == "centered":
        return ranort(beta, m, h)
    if variant == "halfsum":
        return ransym(beta, m, h)
    raise ValueError(f"unknown Riesz variant {variant!r}; expected one of {RIESZ_VARIANTS}")


def is_symmetric(a, tol: float = 1e-12) -> bool:
    a = sp.csr_array(a)
    diff = a - a.T
    return diff.nnz == 0 or float(np.max(np.abs(diff.data))) <= tol
