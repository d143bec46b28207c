"""Space-time grid, stacked node ordering, homogenization and system assembly.

All node values of the grid are stacked into one column: time layer ``n``
first, then ``n-1`` down to ``0``; inside a layer the spatial index runs from
``m`` down to ``0``. With this ordering the time derivative of every node is
``kron(B, I)`` and the spatial Riesz derivative is ``kron(I, R)``, and the
whole equation ``D_t^alpha u - chi d^beta u/d|x|^beta = f`` becomes

    {kron(B, I_{m+1}) - chi * kron(I_{n+1}, R)} u = f.

Known (zero) initial and boundary values are struck out with an eliminator.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Union

import numpy as np
import scipy.sparse as sp

from . import linsolve
from .operators import RIESZ_VARIANTS, ban, delayed_ban, riesz
from .structured import Eliminator, eliminate_cols, eliminate_rows, finalize, identity, kron

logger = logging.getLogger(__name__)

Data = Union[float, Callable, None]


@dataclass(frozen=True)
class Grid:
    """Uniform net on ``[a, b] x [0, T]`` with `m` spatial intervals and `n` time steps."""

    m: int
    n: int
    T: float
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"grid needs m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if not self.b > self.a:
            raise ValueError("spatial bounds must satisfy a < b")
        if not self.T > 0:
            raise ValueError("final time must be positive")

    @classmethod
    def from_steps(cls, h: float, tau: float, n: int, a: float = 0.0, b: float = 1.0) -> Grid:
        m = round((b - a) / h)
        if m < 1 or not math.isclose(m * h, b - a, rel_tol=1e-9):
            raise ValueError(f"h={h} does not divide [{a}, {b}] into whole intervals")
        return cls(m=m, n=n, T=n * tau, a=a, b=b)

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.m

    @property
    def tau(self) -> float:
        return self.T / self.n

    @property
    def x(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.m + 1)

    @property
    def t(self) -> np.ndarray:
        return self.tau * np.arange(self.n + 1)

    @property
    def size(self) -> int:
        return (self.n + 1) * (self.m + 1)

    def stack_index(self, i, j):
        """Position of spatial node `i`, time layer `j` in the stacked vector."""
        return (self.n - j) * (self.m + 1) + (self.m - i)

    def node_of(self, k: int) -> tuple[int, int]:
        r, c = divmod(k, self.m + 1)
        return self.m - c, self.n - r


@dataclass(frozen=True, eq=False)
class StackedField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.size,):
            raise ValueError(f"stacked field needs {self.grid.size} values, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    def at(self, i: int, j: int) -> float:
        return float(self.values[self.grid.stack_index(i, j)])

    @classmethod
    def from_nodes(cls, grid: Grid, nodes) -> StackedField:
        """Build from an ``(n+1, m+1)`` array indexed ``[j, i]`` in ascending order."""
        nodes = np.asarray(nodes, dtype=float)
        return cls(grid, nodes[::-1, ::-1].ravel())


def _evaluate(data: Data, x, t=None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if data is None:
        return np.zeros_like(x)
    if callable(data):
        out = data(x) if t is None else data(x, np.asarray(t, dtype=float))
        return np.broadcast_to(np.asarray(out, dtype=float), x.shape).copy()
    return np.full(x.shape, float(data))


def stack(grid: Grid, f: Data) -> StackedField:
    """Sample ``f(x, t)`` (callable or constant) at every node, in stacked order."""
    xx, tt = np.meshgrid(grid.x, grid.t)
    return StackedField.from_nodes(grid, _evaluate(f, xx, tt))


def unstack(field: StackedField) -> np.ndarray:
    """Node values as an ``(n+1, m+1)`` array indexed ``[j, i]``, both ascending."""
    g = field.grid
    return field.values.reshape(g.n + 1, g.m + 1)[::-1, ::-1].copy()


@dataclass(frozen=True)
class Delay:
    """Second time-derivative term of order `gamma`, delayed by `k` time steps."""

    gamma: float
    k: int
    weights: tuple[float, float] = (0.5, 0.5)


@dataclass(frozen=True)
class ProblemSpec:
    """``D_t^alpha u - chi d^beta u/d|x|^beta = rhs`` with initial and boundary data.

    `rhs`, `initial` and the boundary data may be constants or callables
    (``rhs(x, t)``, ``initial(x)``, ``boundary_*(t)``); ``None`` means zero.
    With a `delay` the time part becomes
    ``w0 D_t^alpha u + w1 D_{t-delta}^gamma u``.
    """

    alpha: float = 1.0
    beta: float = 2.0
    chi: float = 1.0
    riesz_variant: str = "centered"
    rhs: Data = 0.0
    initial: Data = None
    boundary_left: Data = None
    boundary_right: Data = None
    delay: Delay | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 1.0 < self.beta <= 2.0:
            raise ValueError(f"beta must lie in (1, 2], got {self.beta}")
        if not self.chi > 0.0:
            raise ValueError(f"chi must be positive, got {self.chi}")
        if self.riesz_variant not in RIESZ_VARIANTS:
            raise ValueError(f"riesz_variant must be one of {RIESZ_VARIANTS}, got {self.riesz_variant!r}")
        if self.delay is not None:
            if self.delay.k < 0:
                raise ValueError(f"delay steps must be >= 0, got {self.delay.k}")
            if not 0.0 < self.delay.gamma <= 1.0:
                raise ValueError(f"gamma must lie in (0, 1], got {self.delay.gamma}")

    @property
    def is_homogeneous(self) -> bool:
        return all(_is_zero(d) for d in (self.initial, self.boundary_left, self.boundary_right))


def _is_zero(data: Data) -> bool:
    return data is None or (not callable(data) and float(data) == 0.0)


_FD_STEP = 5e-3


def _second_derivative(f: Data, x):
    """Five-point central difference; exact for polynomials up to degree five."""
    if not callable(f):
        return np.zeros_like(np.asarray(x, dtype=float))
    s = _FD_STEP
    return (-f(x + 2 * s) + 16 * f(x + s) - 30 * f(x) + 16 * f(x - s) - f(x - 2 * s)) / (12 * s * s)


def _first_derivative(f: Data, t):
    if not callable(f):
        return np.zeros_like(np.asarray(t, dtype=float))
    s = _FD_STEP
    return (-f(t + 2 * s) + 8 * f(t + s) - 8 * f(t - s) + f(t - 2 * s)) / (12 * s)


Reconstruction = Callable[[StackedField], StackedField]


def homogenize(p: ProblemSpec, domain: tuple[float, float] = (0.0, 1.0)) -> tuple[ProblemSpec, Reconstruction]:
    """Move nonzero initial/boundary data into the right-hand side.

    Returns the problem for the deviation ``y = L - u`` from the lift
    ``L(x, t) = u(x, 0)`` (plus, for nonzero boundary data, the linear
    interpolant of ``g(t) - g(0)`` between the ends), which has zero initial
    and boundary values. The Caputo derivative of the time-independent part of
    ``L`` vanishes, so for ``beta = 2`` the new source is ``-f - chi u0''``;
    ``u0 = 4x(1-x)`` with ``f = 0`` gives the constant ``8``. The second
    callable maps a field of `y` back to ``u = L - y``.

    Nonzero initial data requires ``beta = 2``; nonzero boundary data requires
    ``alpha = 1``, ``beta = 2`` and no delay. Other combinations would need
    fractional derivatives of the lift and raise `ValueError`.
    """
    if p.is_homogeneous:
        return p, lambda field: field
    a, b = domain
    u0, gl, gr = p.initial, p.boundary_left, p.boundary_right
    tol = 1e-12 * max(1.0, abs(a), abs(b))
    for end, g in ((a, gl), (b, gr)):
        corner_u0 = float(_evaluate(u0, end))
        corner_g = float(_evaluate(g, 0.0))
        if abs(corner_u0 - corner_g) > 1e-9 * max(1.0, abs(corner_u0)) + tol:
            raise ValueError(f"initial value {corner_u0} at x={end} does not match boundary value {corner_g} at t=0")
    if not _is_zero(u0) and p.beta != 2.0:
        raise ValueError("nonzero initial data is only supported for beta = 2")
    moving_boundary = not (_is_zero(gl) and _is_zero(gr))
    if moving_boundary and (p.beta != 2.0 or p.alpha != 1.0 or p.delay is not None):
        raise ValueError("nonzero boundary data is only supported for alpha = 1, beta = 2 without delay")

    width = b - a
    g_l0 = float(_evaluate(gl, 0.0))
    g_r0 = float(_evaluate(gr, 0.0))

    def lift(x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        out = _evaluate(u0, x) + np.zeros(np.broadcast(x, t).shape)
        if moving_boundary:
            out = out + (_evaluate(gl, t) - g_l0) * (b - x) / width + (_evaluate(gr, t) - g_r0) * (x - a) / width
        return out

    chi = p.chi
    f = p.rhs

    def rhs(x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        out = -_evaluate(f, x, t) - chi * _second_derivative(u0, x)
        if moving_boundary:
            out = out + (_first_derivative(gl, t) * (b - x) + _first_derivative(gr, t) * (x - a)) / width
        return out

    def reconstruct(field: StackedField) -> StackedField:
        g = field.grid
        xx, tt = np.meshgrid(g.x, g.t)
        return StackedField(g, StackedField.from_nodes(g, lift(xx, tt)).values - field.values)

    homogeneous = replace(p, rhs=rhs, initial=None, boundary_left=None, boundary_right=None)
    return homogeneous, reconstruct


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """The full space-time system and its reduction to the interior unknowns.

    Matrices are built lazily: large time-fractional problems can be marched
    through `time_reduced` and `space_reduced` without ever forming the full
    Kronecker product.
    """

    grid: Grid
    chi: float
    time_matrix: sp.csr_array
    space_matrix: sp.csr_array
    rhs: StackedField = field(repr=False)

    @cached_property
    def full_matrix(self) -> sp.csr_array:
        g = self.grid
        return finalize(kron(self.time_matrix, identity(g.m + 1))
                        - self.chi * kron(identity(g.n + 1), self.space_matrix))

    @cached_property
    def eliminator(self) -> Eliminator:
        g = self.grid
        i = np.arange(g.m + 1)
        known = set((g.stack_index(i, 0) + 1).tolist())
        for j in range(1, g.n + 1):
            known.update((int(g.stack_index(0, j)) + 1, int(g.stack_index(g.m, j)) + 1))
        return Eliminator(g.size, tuple(sorted(known)))

    @cached_property
    def kept_indices(self) -> np.ndarray:
        return self.eliminator.kept

    @cached_property
    def kept_nodes(self) -> list[tuple[int, int]]:
        return [self.grid.node_of(int(k)) for k in self.kept_indices]

    @cached_property
    def reduced_matrix(self) -> sp.csr_array:
        return eliminate_cols(self.eliminator, eliminate_rows(self.eliminator, self.full_matrix))

    @cached_property
    def reduced_rhs(self) -> np.ndarray:
        return self.rhs.values[self.kept_indices]

    @cached_property
    def time_reduced(self) -> sp.csr_array:
        """Time operator restricted to layers ``n .. 1``."""
        n = self.grid.n
        return finalize(self.time_matrix[:n, :n])

    @cached_property
    def space_reduced(self) -> sp.csr_array:
        """Space operator restricted to interior nodes ``m-1 .. 1``."""
        m = self.grid.m
        return finalize(self.space_matrix[1:m, 1:m])

    @property
    def unknowns(self) -> int:
        return self.grid.n * (self.grid.m - 1)

    def matvec(self, v) -> np.ndarray:
        """Reduced matrix times `v` using the Kronecker structure."""
        n, p = self.grid.n, self.grid.m - 1
        x = np.asarray(v, dtype=float).reshape(n, p)
        out = self.time_reduced @ x - self.chi * (self.space_reduced @ x.T).T
        return out.ravel()

    def expand(self, reduced) -> StackedField:
        """Full stacked field with `reduced` at the unknowns and zeros elsewhere."""
        values = np.zeros(self.grid.size)
        values[self.kept_indices] = reduced
        return StackedField(self.grid, values)


def time_operator(p: ProblemSpec, grid: Grid) -> sp.csr_array:
    base = ban(p.alpha, grid.n, grid.tau).matrix
    if p.delay is None:
        return base
    w0, w1 = p.delay.weights
    delayed = delayed_ban(p.delay.gamma, grid.n, p.delay.k, grid.tau).matrix
    return finalize(w0 * base + w1 * delayed)


def assemble(p: ProblemSpec, grid: Grid) -> AssembledSystem:
    if not p.is_homogeneous:
        raise ValueError("assemble needs zero initial and boundary data; call homogenize first")
    if grid.m < 2:
        raise ValueError(f"grid needs at least one interior node (m >= 2), got m={grid.m}")
    if p.delay is not None and p.delay.k >= grid.n:
        raise ValueError(f"delay of {p.delay.k} steps does not fit into {grid.n} time steps")
    space = riesz(p.beta, grid.m, grid.h, p.riesz_variant).matrix
    return AssembledSystem(grid, p.chi, time_operator(p, grid), space, stack(grid, p.rhs))


@dataclass(frozen=True, eq=False)
class Solution:
    problem: ProblemSpec
    grid: Grid
    y: StackedField
    u: StackedField
    reconstructed: bool
    report: linsolve.SolveReport


def solve_problem(p: ProblemSpec, grid: Grid, solver: str = "global") -> Solution:
    """Homogenize, assemble, solve and reconstruct ``u`` on the whole grid."""
    homogeneous, reconstruct = homogenize(p, (grid.a, grid.b))
    system = assemble(homogeneous, grid)
    if solver == "global":
        report = linsolve.solve(system.reduced_matrix, system.reduced_rhs, permc_spec="NATURAL")
    elif solver == "marching":
        report = linsolve.solve_time_marching(system)
    else:
        raise ValueError(f"unknown solver {solver!r}; expected 'global' or 'marching'")
    logger.info("%s solve: %d unknowns, residual %.3e, %.1f ms", solver, system.unknowns,
                report.residual_inf_norm, 1e3 * report.elapsed)
    y = system.expand(report.solution)
    u = reconstruct(y)
    return Solution(p, grid, y, u, not p.is_homogeneous, report)
