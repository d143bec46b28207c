"""Matrix approach to discrete fractional calculus.

Fractional derivatives on a uniform grid become triangular strip matrices;
Kronecker products lift them to the whole space-time net, and eliminators
strike out the known initial and boundary values. The resulting linear
system gives the solution at every node at once.

>>> from fracmat import Grid, ProblemSpec, solve_problem
>>> grid = Grid.from_steps(h=0.1, tau=0.1**2 / 6, n=37)
>>> sol = solve_problem(ProblemSpec(alpha=1.0, beta=2.0, initial=lambda x: 4 * x * (1 - x)), grid)
>>> round(sol.u.at(5, 37), 3)
0.567
"""

from .assembly import (AssembledSystem, Delay, Grid, ProblemSpec, Solution, StackedField, assemble,
                       homogenize, solve_problem, stack, unstack)
from .coeffs import CoeffVector, gl_coeffs, riesz_centered_coeffs
from .linsolve import SingularMatrixError, SolveReport, solve, solve_time_marching
from .operators import SpaceOperator, TimeOperator, ban, delayed_ban, fan, ranort, ransym, riesz
from .oracles import heat_series, riesz_closed_form, steady_state_check
from .stripmat import StripMatrix, make_strip, strip_add, strip_apply, strip_mul
from .structured import (Eliminator, Shifter, eliminate_cols, eliminate_rows, finalize, kron, shift_ne,
                         shift_sw)

__all__ = [
    "AssembledSystem", "CoeffVector", "Delay", "Eliminator", "Grid", "ProblemSpec", "Shifter",
    "SingularMatrixError", "Solution", "SolveReport", "SpaceOperator", "StackedField", "StripMatrix",
    "TimeOperator", "assemble", "ban", "delayed_ban", "eliminate_cols", "eliminate_rows", "fan", "finalize",
    "gl_coeffs", "heat_series", "homogenize", "kron", "make_strip", "ranort", "ransym", "riesz",
    "riesz_centered_coeffs", "riesz_closed_form", "shift_ne", "shift_sw", "solve", "solve_problem",
    "solve_time_marching", "stack", "steady_state_check", "strip_add", "strip_apply", "strip_mul", "unstack",
]
__version__ = "0.1.0"
