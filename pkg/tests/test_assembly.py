import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fracmat.assembly import (Delay, Grid, ProblemSpec, StackedField, assemble, homogenize, solve_problem, stack,
                              unstack)
from fracmat.oracles import heat_series
from fracmat.presets import example_config, parabola


def max_diff(a, b):
    d = (a - b).tocsr()
    return float(np.max(np.abs(d.data))) if d.nnz else 0.0


def reduced(config):
    problem, _ = homogenize(config.problem())
    return assemble(problem, config.grid())


def test_stack_ordering():
    g = Grid(m=1, n=1, T=1.0)
    f = stack(g, lambda x, t: x + 10 * t)
    np.testing.assert_array_equal(f.values, [11.0, 10.0, 1.0, 0.0])
    np.testing.assert_array_equal(stack(g, 3.5).values, np.full(4, 3.5))
    np.testing.assert_array_equal(stack(Grid(3, 2, 1.0), None).values, np.zeros(12))


@pytest.mark.parametrize("m, n", [(1, 1), (2, 3), (4, 2), (5, 5)])
def test_stack_index_is_bijection(m, n):
    g = Grid(m=m, n=n, T=1.0)
    seen = sorted(g.stack_index(i, j) for i, j in itertools.product(range(m + 1), range(n + 1)))
    assert seen == list(range(g.size))
    for k in range(g.size):
        assert g.stack_index(*g.node_of(k)) == k


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_stack_round_trip(m, n, data):
    g = Grid(m=m, n=n, T=1.0)
    nodes = data.draw(arrays(float, (n + 1, m + 1), elements=st.floats(-10, 10)))
    field = StackedField.from_nodes(g, nodes)
    np.testing.assert_array_equal(unstack(field), nodes)
    assert field.at(m, 0) == nodes[0, m]


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(m=0, n=1, T=1.0)
    with pytest.raises(ValueError):
        Grid.from_steps(h=0.3, tau=0.1, n=3)
    g = Grid.from_steps(h=0.1, tau=0.01, n=5)
    assert (g.m, g.n) == (10, 5)
    assert g.tau == pytest.approx(0.01)


def test_problem_validation():
    for kwargs in [dict(alpha=0.0), dict(alpha=1.2), dict(beta=1.0), dict(beta=2.1), dict(chi=0.0),
                   dict(riesz_variant="x"), dict(delay=Delay(0.5, -1)), dict(delay=Delay(1.5, 2))]:
        with pytest.raises(ValueError):
            ProblemSpec(**kwargs)


def test_homogenize_example_one():
    y_problem, reconstruct = homogenize(ProblemSpec(initial=parabola))
    assert y_problem.is_homogeneous
    g = Grid(m=10, n=4, T=0.1)
    np.testing.assert_allclose(stack(g, y_problem.rhs).values, 8.0, atol=1e-8)
    zero = StackedField(g, np.zeros(g.size))
    np.testing.assert_allclose(unstack(reconstruct(zero)), np.broadcast_to(parabola(g.x), (5, 11)), atol=1e-15)


def test_homogenize_scaled_parabola():
    y_problem, _ = homogenize(ProblemSpec(alpha=0.5, initial=lambda x: x * (1 - x)))
    g = Grid(m=8, n=2, T=1.0)
    np.testing.assert_allclose(stack(g, y_problem.rhs).values, 2.0, atol=1e-8)


def test_homogenize_identity_and_rejections():
    p = ProblemSpec(rhs=3.0)
    q, reconstruct = homogenize(p)
    assert q is p
    field = stack(Grid(2, 2, 1.0), 1.0)
    assert reconstruct(field) is field
    with pytest.raises(ValueError):
        homogenize(ProblemSpec(beta=1.5, initial=parabola))
    with pytest.raises(ValueError):
        homogenize(ProblemSpec(alpha=0.5, boundary_left=1.0, initial=1.0))
    with pytest.raises(ValueError):
        homogenize(ProblemSpec(initial=1.0))  # corner mismatch with zero boundary
    with pytest.raises(ValueError):
        assemble(ProblemSpec(initial=parabola), Grid(4, 4, 1.0))


def test_homogenize_boundary_lift_for_heat_equation():
    # u = x + t solves u_t - u_xx = 1 with u(0,t) = t, u(1,t) = 1 + t
    p = ProblemSpec(rhs=1.0, initial=lambda x: x, boundary_left=lambda t: t, boundary_right=lambda t: 1 + t)
    g = Grid(m=6, n=5, T=0.5)
    sol = solve_problem(p, g)
    xx, tt = np.meshgrid(g.x, g.t)
    np.testing.assert_allclose(unstack(sol.u), xx + tt, atol=1e-8)


def test_single_unknown_system():
    g = Grid.from_steps(h=0.5, tau=0.1, n=1)
    system = assemble(ProblemSpec(rhs=8.0), g)
    assert system.reduced_matrix.shape == (1, 1)
    expected = 8.0 / (1 / g.tau + 2 / g.h ** 2)
    assert solve_problem(ProblemSpec(rhs=8.0), g).y.at(1, 1) == pytest.approx(expected, rel=1e-14)


def test_full_matrix_is_kronecker_form():
    g = Grid(m=4, n=3, T=0.3)
    system = assemble(ProblemSpec(alpha=0.6, beta=1.7, chi=0.8), g)
    t, r = system.time_matrix.toarray(), system.space_matrix.toarray()
    expected = np.kron(t, np.eye(5)) - 0.8 * np.kron(np.eye(4), r)
    np.testing.assert_allclose(system.full_matrix.toarray(), expected, atol=1e-13)
    assert system.reduced_matrix.shape == (system.unknowns, system.unknowns) == (3 * 3, 3 * 3)
    v = np.arange(system.unknowns, dtype=float)
    np.testing.assert_allclose(system.matvec(v), system.reduced_matrix @ v, atol=1e-10)


@pytest.mark.parametrize("number", [1, 2, 3, 4])
def test_reduced_size(number):
    config = example_config(number, m=8, n=12)
    assert reduced(config).reduced_matrix.shape == ((8 - 1) * 12,) * 2


def test_specialization_chain():
    grid = dict(m=10, n=30)
    ex1 = reduced(example_config(1, **grid)).reduced_matrix
    assert max_diff(reduced(example_config(2, alpha=1.0, **grid)).reduced_matrix, ex1) <= 1e-12
    assert max_diff(reduced(example_config(3, beta=2.0, **grid)).reduced_matrix, ex1) <= 1e-12
    assert max_diff(reduced(example_config(4, alpha=1.0, beta=2.0, **grid)).reduced_matrix, ex1) <= 1e-12
    ex5 = reduced(example_config(5, alpha=0.7, beta=2.0, gamma=0.7, k=0, **grid)).reduced_matrix
    ex2 = reduced(example_config(2, **grid)).reduced_matrix
    assert max_diff(ex5, ex2) <= 1e-12


@pytest.mark.parametrize("alpha", [0.5, 1.0])
@pytest.mark.parametrize("delay", [None, Delay(0.8, 3)])
def test_time_causality(alpha, delay):
    g = Grid(m=5, n=10, T=1.0)
    system = assemble(ProblemSpec(alpha=alpha, beta=1.6, rhs=1.0, delay=delay), g)
    a = system.reduced_matrix.tocoo()
    layers = [system.kept_nodes[k][1] for k in range(system.unknowns)]
    for r, c in zip(a.row, a.col):
        assert layers[c] <= layers[r]


def test_delay_must_fit():
    with pytest.raises(ValueError):
        assemble(ProblemSpec(delay=Delay(0.5, 4)), Grid(4, 4, 1.0))
    with pytest.raises(ValueError):
        assemble(ProblemSpec(), Grid(1, 4, 1.0))


def test_zero_problem_has_zero_solution():
    sol = solve_problem(ProblemSpec(), Grid(6, 5, 0.5))
    assert not sol.y.values.any()
    assert not sol.reconstructed


@pytest.mark.parametrize("solver", ["global", "marching"])
def test_example_one_close_to_heat_series(solver):
    config = example_config(1)
    sol = solve_problem(config.problem(), config.grid(), solver)
    final = unstack(sol.u)[-1]
    np.testing.assert_allclose(final, heat_series(sol.grid.x, sol.grid.T), atol=1e-2)
    assert sol.reconstructed


def test_unknown_solver():
    with pytest.raises(ValueError):
        solve_problem(ProblemSpec(rhs=1.0), Grid(3, 3, 1.0), "iterative")
