"""Run configurations and the parameter sets of the five diffusion examples.

Examples 1 and 2 are posed for ``u`` with ``u(x, 0) = 4x(1-x)`` and are
homogenized before solving; Examples 3 to 5 are posed directly for the
homogeneous unknown ``y`` with source ``f = 8``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .assembly import Delay, Grid, ProblemSpec

TAU_RULES = ("h2over6",)
DEFAULT_STEPS = 400


def parabola(x):
    return 4.0 * x * (1.0 - x)


@dataclass(frozen=True)
class RunConfig:
    example: int | None = None
    alpha: float = 1.0
    beta: float = 2.0
    gamma: float | None = None
    k: int | None = None
    h: float | None = None
    m: int | None = None
    tau: float | None = None
    tau_rule: str | None = None
    n: int = DEFAULT_STEPS
    riesz_variant: str = "centered"
    solver: str = "global"
    output: str | None = None
    format: str = "csv"
    chi: float = 1.0
    rhs: float = 8.0
    parabolic_initial: bool = False

    def __post_init__(self):
        if (self.h is None) == (self.m is None):
            raise ValueError("exactly one of h and m must be given")
        if (self.tau is None) == (self.tau_rule is None):
            raise ValueError("exactly one of tau and tau_rule must be given")
        if self.tau_rule is not None and self.tau_rule not in TAU_RULES:
            raise ValueError(f"unknown tau rule {self.tau_rule!r}; expected one of {TAU_RULES}")
        if self.m is not None and self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if self.h is not None and not 0 < self.h <= 0.5:
            raise ValueError(f"h must lie in (0, 0.5], got {self.h}")
        if self.tau is not None and not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if (self.gamma is None) != (self.k is None):
            raise ValueError("a delay needs both gamma and k")
        if self.solver not in ("global", "marching"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")

    def grid(self) -> Grid:
        m = self.m if self.m is not None else round(1.0 / self.h)
        h = 1.0 / m
        if self.h is not None and abs(m * self.h - 1.0) > 1e-9:
            raise ValueError(f"h={self.h} does not divide [0, 1] into whole intervals")
        tau = self.tau if self.tau is not None else h * h / 6.0
        return Grid(m=m, n=self.n, T=self.n * tau)

    def problem(self) -> ProblemSpec:
        delay = Delay(self.gamma, self.k) if self.k is not None else None
        if self.parabolic_initial:
            return ProblemSpec(alpha=self.alpha, beta=self.beta, chi=self.chi, riesz_variant=self.riesz_variant,
                               rhs=0.0, initial=parabola, delay=delay)
        return ProblemSpec(alpha=self.alpha, beta=self.beta, chi=self.chi, riesz_variant=self.riesz_variant,
                           rhs=self.rhs, delay=delay)

    def to_dict(self) -> dict:
        return asdict(self)


_PRESETS = {
    1: dict(alpha=1.0, beta=2.0, h=0.1, tau_rule="h2over6", n=37, parabolic_initial=True),
    2: dict(alpha=0.7, beta=2.0, h=0.05, tau_rule="h2over6", parabolic_initial=True),
    3: dict(alpha=1.0, beta=1.7, h=0.05, tau_rule="h2over6"),
    4: dict(alpha=0.7, beta=1.4, h=0.05, tau_rule="h2over6"),
    5: dict(alpha=0.9, beta=1.9, gamma=0.8, k=6, h=0.05, tau_rule="h2over6"),
}

# figure panels of the examples, as (example, overrides)
FIGURE_CONFIGS = (
    [(1, {})]
    + [(2, {"alpha": a}) for a in (1.0, 0.7, 0.5)]
    + [(3, {"beta": b}) for b in (2.0, 1.7, 1.4, 1.1)]
    + [(4, {"alpha": 0.7, "beta": b}) for b in (1.4, 1.8, 2.0)]
    + [(5, {"k": k}) for k in (6, 12, 24, 36)]
)


def example_config(number: int, **overrides) -> RunConfig:
    """Preset for Example `number`; keyword overrides replace preset fields.

    Passing ``m`` drops the preset ``h`` and passing ``tau`` drops the preset
    tau rule, so a single override is enough to change the grid.
    """
    if number not in _PRESETS:
        raise ValueError(f"unknown example {number}; expected 1..5")
    fields = dict(_PRESETS[number], example=number)
    overrides = {key: value for key, value in overrides.items() if value is not None}
    if "m" in overrides:
        fields.pop("h", None)
    if "tau" in overrides:
        fields.pop("tau_rule", None)
    if number != 5 and ("gamma" in overrides or "k" in overrides):
        fields.setdefault("gamma", overrides.get("gamma", fields["alpha"]))
        fields.setdefault("k", 0)
    fields.update(overrides)
    return RunConfig(**fields)
