"""Analytic reference values used to check the discrete operators and solutions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .assembly import StackedField, unstack


@dataclass(frozen=True)
class OracleEval:
    x: float
    t: float | None
    value: float
    series_terms: int | None = None
    tail_bound: float | None = None


def riesz_closed_form(x, beta: float):
    """Symmetric Riesz derivative of ``x(1-x)`` on ``[0, 1]``, ``1 < beta < 2``.

    Half-sum of the left- and right-sided Riemann-Liouville derivatives
    ``x^(1-b)/G(2-b) - 2 x^(2-b)/G(3-b)`` and its mirror image in ``1-x``.
    """
    if not 1.0 < beta < 2.0:
        raise ValueError(f"beta must lie strictly in (1, 2), got {beta}")
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0.0) | (x >= 1.0)):
        raise ValueError("x must lie strictly inside (0, 1)")
    y = 1.0 - x
    value = ((x ** (1 - beta) + y ** (1 - beta)) / (2 * special.gamma(2 - beta))
             - (x ** (2 - beta) + y ** (2 - beta)) / special.gamma(3 - beta))
    return float(value) if value.ndim == 0 else value


def _heat_terms(terms: int) -> np.ndarray:
    return 2 * np.arange(terms) + 1


def heat_series(x, t: float, terms: int = 200):
    """Separation-of-variables solution of ``u_t = u_xx`` on ``[0, 1]``, ``u(x, 0) = 4x(1-x)``.

    ``u = sum over odd k of 32/(k pi)^3 sin(k pi x) exp(-(k pi)^2 t)``, using
    the first `terms` odd wavenumbers.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    k = _heat_terms(terms)
    kpi = k * np.pi
    x = np.asarray(x, dtype=float)
    weights = 32.0 / kpi ** 3 * np.exp(-kpi ** 2 * t)
    value = np.sin(np.multiply.outer(x, kpi)) @ weights
    return float(value) if value.ndim == 0 else value


def heat_series_eval(x: float, t: float, terms: int = 200) -> OracleEval:
    """`heat_series` with a bound on the neglected tail."""
    k_next = 2 * terms + 1
    tail = 32.0 / np.pi ** 3 * np.exp(-(k_next * np.pi) ** 2 * t) / (2.0 * (k_next - 1) ** 2)
    return OracleEval(float(x), float(t), heat_series(x, t, terms), terms, float(tail))


def steady_state_check(field: StackedField) -> float:
    """Largest deviation of the final layer from ``4x(1-x)`` over the interior nodes."""
    g = field.grid
    final = unstack(field)[-1, 1:-1]
    x = g.x[1:-1]
    return float(np.max(np.abs(final - 4 * x * (1 - x))))
