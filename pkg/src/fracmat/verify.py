"""Acceptance checks, grouped into the suites run by ``fracmat verify``.

Every check returns a `Check` carrying the measured quantities, so a failing
criterion reports how far off it is rather than just a boolean.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy import special

from . import linsolve
from .assembly import assemble, homogenize, solve_problem, unstack
from .coeffs import gl_coeffs, riesz_centered_coeffs
from .operators import ranort, ransym
from .oracles import heat_series, riesz_closed_form, steady_state_check
from .presets import example_config
from .stripmat import make_strip, strip_apply, strip_mul
from .structured import Eliminator, eliminate_cols, eliminate_rows, identity, kron


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _max_diff(a, b) -> float:
    d = sp.csr_array(a) - sp.csr_array(b)
    return float(np.max(np.abs(d.data))) if d.nnz else 0.0


def gamma_binomial(alpha: float, n: int) -> np.ndarray:
    """``(-1)^j G(alpha+1) / (G(j+1) G(alpha-j+1))`` evaluated directly."""
    j = np.arange(n + 1)
    return (-1.0) ** j * special.gamma(alpha + 1) * special.rgamma(j + 1.0) * special.rgamma(alpha - j + 1.0)


def example1_vs_series() -> Check:
    start = time.perf_counter()
    sol = solve_problem(example_config(1).problem(), example_config(1).grid())
    elapsed = time.perf_counter() - start
    g = sol.grid
    final = unstack(sol.u)[-1]
    exact = heat_series(g.x[1:-1], g.T, 200)
    err = float(np.max(np.abs(final[1:-1] - exact)))
    centre = abs(final[g.m // 2] - 0.561)

    fine = example_config(1, h=0.05, n=4 * g.n)
    fine_sol = solve_problem(fine.problem(), fine.grid())
    fg = fine_sol.grid
    fine_err = float(np.max(np.abs(unstack(fine_sol.u)[-1, 1:-1] - heat_series(fg.x[1:-1], fg.T, 200))))
    ratio = err / fine_err
    passed = err <= 1e-2 and centre <= 1e-2 and elapsed < 1.0 and ratio >= 2.0
    return Check("1 Example 1 vs heat series", passed,
                 f"max err {err:.3e} (<=1e-2), |u(0.5)-0.561| {centre:.3e} (<=1e-2), "
                 f"time {elapsed:.3f}s (<1s), err ratio h/2 {ratio:.2f} (>=2)")


def _reduced(config) -> sp.csr_array:
    problem, _ = homogenize(config.problem())
    return assemble(problem, config.grid()).reduced_matrix


def specialization_identities() -> Check:
    grid_args = dict(h=0.05, tau_rule="h2over6", n=400)
    pairs = [
        ("Ex2(alpha=1)=Ex1", example_config(2, alpha=1.0, **grid_args), example_config(1, **grid_args)),
        ("Ex3(beta=2)=Ex1", example_config(3, beta=2.0, **grid_args), example_config(1, **grid_args)),
        ("Ex4(alpha=1,beta=2)=Ex1", example_config(4, alpha=1.0, beta=2.0, **grid_args),
         example_config(1, **grid_args)),
        ("Ex5(k=0,gamma=alpha)=Ex2", example_config(5, alpha=0.7, beta=2.0, gamma=0.7, k=0, **grid_args),
         example_config(2, alpha=0.7, **grid_args)),
    ]
    parts, passed = [], True
    for name, left, right in pairs:
        start = time.perf_counter()
        diff = _max_diff(_reduced(left), _reduced(right))
        elapsed = time.perf_counter() - start
        ok = diff <= 1e-12 and elapsed < 1.0
        passed &= ok
        parts.append(f"{name} |d|={diff:.1e} {elapsed:.2f}s")
    return Check("2 specialization identities", passed, "; ".join(parts))


def riesz_oracle(betas=(1.3, 1.5, 1.7), ms=(40, 80, 160, 320)) -> Check:
    start = time.perf_counter()
    rows, passed = [], True
    for beta in betas:
        errors = []
        for m in ms:
            x = np.arange(m + 1) / m
            inner = (x >= 1 / 3) & (x <= 2 / 3)
            approx = ranort(beta, m, 1.0 / m).matrix @ (x * (1 - x))
            exact = riesz_closed_form(x[inner], beta)
            errors.append(float(np.max(np.abs(approx[inner] - exact) / np.abs(exact))))
        monotone = all(b < a for a, b in zip(errors, errors[1:]))
        passed &= monotone and errors[-1] <= 0.05
        rows.append(f"beta={beta}: " + " ".join(f"m={m}:{e:.2e}" for m, e in zip(ms, errors)))
    elapsed = time.perf_counter() - start
    passed &= elapsed < 2.0
    return Check("3 Riesz matrix vs closed form", passed, "; ".join(rows) + f"; time {elapsed:.2f}s (<2s)")


def variant_agreement(betas=(1.1, 1.4, 1.7)) -> Check:
    parts, passed = [], True
    for beta in betas:
        fields = {}
        for variant in ("centered", "halfsum"):
            config = example_config(3, beta=beta, riesz_variant=variant)
            fields[variant] = solve_problem(config.problem(), config.grid(), "marching").y.values
        rel = float(np.max(np.abs(fields["centered"] - fields["halfsum"])) / np.max(np.abs(fields["centered"])))
        passed &= rel <= 1e-2
        parts.append(f"beta={beta}: {rel:.3e}")
    return Check("4 centered vs halfsum on Example 3", passed, ", ".join(parts) + " (<=1e-2)")


def steady_state_limit() -> Check:
    h = 0.05
    tau = h * h / 6
    config = example_config(2, alpha=0.05, h=h, n=round(1.0 / tau))
    sol = solve_problem(config.problem(), config.grid(), "marching")
    dev = steady_state_check(sol.y)
    return Check("5 Example 2 steady-state limit", dev <= 0.05,
                 f"alpha=0.05, T={sol.grid.T:.3f}, n={sol.grid.n}: deviation {dev:.4f} (<=0.05)")


def beta2_stencil(max_m: int = 64) -> Check:
    worst = 0.0
    for m in range(2, max_m + 1):
        h = 1.0 / m
        classical = sp.diags_array([np.ones(m), -2 * np.ones(m + 1), np.ones(m)], offsets=[-1, 0, 1]) / h ** 2
        for op in (ranort, ransym):
            diff = (op(2.0, m, h).matrix - classical).toarray()
            worst = max(worst, float(np.max(np.abs(diff))))
    return Check("6 beta=2 reduces to [1,-2,1]/h^2", worst <= 1e-12, f"max |d| {worst:.1e} over m<={max_m} (<=1e-12)")


def coefficient_identities() -> Check:
    worst = 0.0
    for alpha in np.linspace(0.1, 2.0, 39):
        worst = max(worst, float(np.max(np.abs(gl_coeffs(alpha, 100).values - gamma_binomial(alpha, 100)))))
    expected = np.zeros(51)
    expected[:2] = [-2.0, 1.0]
    riesz_err = float(np.max(np.abs(riesz_centered_coeffs(2.0, 50).values - expected)))
    return Check("7 coefficient identities", worst <= 1e-12 and riesz_err <= 1e-12,
                 f"GL vs gamma {worst:.1e}, centered(2) vs [-2,1,0..] {riesz_err:.1e} (<=1e-12)")


def strip_algebra(cases: int = 1000, seed: int = 20090214) -> Check:
    rng = np.random.default_rng(seed)
    worst_comm = worst_dense = worst_apply = 0.0
    for _ in range(cases):
        size = int(rng.integers(1, 33))
        orientation = "lower" if rng.random() < 0.5 else "upper"
        a = make_strip(orientation, rng.uniform(-1, 1, size), rng.uniform(-1, 1))
        b = make_strip(orientation, rng.uniform(-1, 1, size), rng.uniform(-1, 1))
        ab, ba = strip_mul(a, b), strip_mul(b, a)
        worst_comm = max(worst_comm, float(np.max(np.abs(ab.toarray() - ba.toarray()))))
        worst_dense = max(worst_dense, float(np.max(np.abs(ab.toarray() - a.toarray() @ b.toarray()))))
        v = rng.uniform(-1, 1, size)
        worst_apply = max(worst_apply, float(np.max(np.abs(strip_apply(a, v) - a.toarray() @ v))))
    worst = max(worst_comm, worst_dense, worst_apply)
    return Check("8 strip-matrix algebra", worst <= 1e-12,
                 f"{cases} cases: commute {worst_comm:.1e}, dense mul {worst_dense:.1e}, "
                 f"apply {worst_apply:.1e} (<=1e-12)")


def solver_crosscheck() -> Check:
    parts, passed = [], True
    for number in range(1, 6):
        config = example_config(number)
        problem, grid = config.problem(), config.grid()
        x_global = solve_problem(problem, grid, "global").y.values
        x_march = solve_problem(problem, grid, "marching").y.values
        rel = float(np.max(np.abs(x_global - x_march)) / np.max(np.abs(x_global)))
        passed &= rel <= 1e-8
        parts.append(f"Ex{number} {rel:.1e}")
    config = example_config(2, alpha=0.5, m=20, n=400)
    start = time.perf_counter()
    system = assemble(homogenize(config.problem())[0], config.grid())
    g = linsolve.solve(system.reduced_matrix, system.reduced_rhs, permc_spec="NATURAL").solution
    mid = time.perf_counter()
    march = linsolve.solve_time_marching(system).solution
    end = time.perf_counter()
    rel = float(np.max(np.abs(g - march)) / np.max(np.abs(g)))
    passed &= rel <= 1e-8 and end - start < 10.0
    parts.append(f"Ex2(alpha=0.5,m=20,n=400; {system.unknowns} unknowns) {rel:.1e}, "
                 f"global {mid - start:.2f}s + marching {end - mid:.2f}s (<10s)")
    return Check("9 global vs time-marching solve", passed, "; ".join(parts) + " (<=1e-8)")


def worked_examples() -> Check:
    a = np.array([[1.0, 2.0], [0.0, -3.0]])
    b = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    printed = np.array([[1, 2, 3, 2, 4, 6], [4, 5, 6, 8, 10, 12],
                        [0, 0, 0, -3, -6, -9], [0, 0, 0, -12, -15, -18]], dtype=float)
    kron_err = float(np.max(np.abs(kron(a, b).toarray() - printed)))
    # a_ij = 10 i + j keeps every entry distinguishable
    m3 = np.array([[11.0, 12.0, 13.0], [21.0, 22.0, 23.0], [31.0, 32.0, 33.0]])
    s1 = Eliminator(3, (1,))
    rows_ok = np.array_equal(eliminate_rows(s1, m3).toarray(), m3[1:, :])
    cols_ok = np.array_equal(eliminate_cols(s1, m3).toarray(), m3[:, 1:])
    both_ok = np.array_equal(eliminate_cols(s1, eliminate_rows(s1, m3)).toarray(), m3[1:, 1:])
    mat_ok = np.array_equal(s1.matrix().toarray(), [[0, 1, 0], [0, 0, 1]])
    a23 = np.arange(1.0, 7.0).reshape(2, 3)
    diag_ok = np.array_equal(kron(identity(2), a23).toarray(), np.block([[a23, np.zeros((2, 3))],
                                                                         [np.zeros((2, 3)), a23]]))
    passed = kron_err == 0.0 and rows_ok and cols_ok and both_ok and mat_ok and diag_ok
    return Check("10 worked Kronecker/eliminator examples", passed,
                 f"kron 4x6 |d|={kron_err:.0e}, S1*A {rows_ok}, A*S1' {cols_ok}, S1*A*S1' {both_ok}, "
                 f"S1 {mat_ok}, E2(x)A {diag_ok}")


CRITERIA = (
    example1_vs_series, specialization_identities, riesz_oracle, variant_agreement, steady_state_limit,
    beta2_stencil, coefficient_identities, strip_algebra, solver_crosscheck, worked_examples,
)

SUITES = {
    "coeffs": (coefficient_identities,),
    "operators": (beta2_stencil, strip_algebra, worked_examples),
    "oracle": (riesz_oracle, example1_vs_series),
    "examples": (specialization_identities, variant_agreement, steady_state_limit, solver_crosscheck),
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [check() for check in CRITERIA]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)} or 'all'")
    return [check() for check in SUITES[name]]
