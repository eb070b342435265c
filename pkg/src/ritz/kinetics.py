"""nth-order kinetics ``dx/dt = k (a - x)**n``: exact extent, the one-exponential
variational surrogate, partial reaction times and order inference.

The surrogate is ``x(t) = a (1 - exp(-eta t))``, the stationary point of

    J(eta) = 1/2 * int_0^inf [x'(t)**2 + k**2 (a - x)**(2n)] dt
           = a**2 eta / 4 + k**2 a**(2n) / (4 n eta),

giving ``eta = k a**(n-1) / sqrt(n)``.  Because it is a first-order profile,
every partial-time ratio it predicts is that of a first-order reaction.

All times returned here are positive.  The only negative numbers are the
reconstructed erroneous half-times in :func:`he_erroneous_analysis`, which
are flagged as unphysical.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numerics
from .errors import RatioOutOfRange, StepUnderflow
from .ritz_engine import ActionFunctional, SemiInfinite, TrialFamily, stationary_point

__all__ = [
    "ReactionSpec",
    "Source",
    "KineticsProfile",
    "exact_extent",
    "variational_extent",
    "variational_eta",
    "variational_action",
    "ritz_eta",
    "profile",
    "partial_time",
    "half_time",
    "partial_time_ratio",
    "locate_partial_time",
    "ode_partial_time",
    "infer_order",
    "ErrataReport",
    "he_erroneous_analysis",
]


class Source(enum.Enum):
    EXACT = "exact"
    VARIATIONAL = "variational"
    HE_ERRONEOUS = "he_erroneous"


@dataclass(frozen=True)
class ReactionSpec:
    """Order ``n`` (real, >= 1), rate constant ``k`` and initial amount ``a``."""

    n: float
    k: float = 1.0
    a: float = 1.0

    def __post_init__(self):
        if not self.n >= 1:
            raise ValueError(f"reaction order must be >= 1, got {self.n}")
        if not self.k > 0:
            raise ValueError(f"rate constant must be positive, got {self.k}")
        if not self.a > 0:
            raise ValueError(f"initial amount must be positive, got {self.a}")

    @property
    def first_order(self) -> bool:
        return self.n == 1

    def rate(self, x: float) -> float:
        return self.k * (self.a - x) ** self.n


@dataclass
class KineticsProfile:
    source: Source
    extent_fn: Callable[[float], float]
    eta: float | None = None

    def __call__(self, t):
        return self.extent_fn(t)


def exact_extent(spec: ReactionSpec, t: float) -> float:
    """Closed-form extent of reaction; the n = 1 case is its own branch."""
    if t < 0:
        raise ValueError("t must be non-negative")
    n, k, a = spec.n, spec.k, spec.a
    if spec.first_order:
        return -a * math.expm1(-k * t)
    # a * (1 - (1 + k (n-1) a**(n-1) t)**(-1/(n-1)))
    return -a * math.expm1(-math.log1p(k * (n - 1) * a ** (n - 1) * t) / (n - 1))


def variational_eta(spec: ReactionSpec) -> float:
    return spec.k * spec.a ** (spec.n - 1) / math.sqrt(spec.n)


def variational_extent(spec: ReactionSpec, t: float, eta: float | None = None) -> float:
    eta = variational_eta(spec) if eta is None else eta
    return -spec.a * math.expm1(-eta * t)


def variational_action(spec: ReactionSpec, eta: float) -> float:
    """Closed-form J(eta) for the exponential trial."""
    n, k, a = spec.n, spec.k, spec.a
    return a * a * eta / 4 + k * k * a ** (2 * n) / (4 * n * eta)


def trial_family(spec: ReactionSpec) -> TrialFamily:
    a = spec.a
    return TrialFamily(
        lambda t, p: -a * math.expm1(-p[0] * t),
        lambda t, p: a * p[0] * math.exp(-p[0] * t),
        ["eta"],
        probe_interval=(0.0, 5.0),
        name="exponential",
    )


def action_functional(spec: ReactionSpec) -> ActionFunctional:
    n, k, a = spec.n, spec.k, spec.a

    def density(t, x, xp):
        return 0.5 * (xp * xp + k * k * max(a - x, 0.0) ** (2 * n))

    # both terms decay at least as fast as exp(-2 eta t)
    return ActionFunctional(density, SemiInfinite(lambda p: abs(p[0])), {"n": n, "k": k, "a": a})


def ritz_eta(spec: ReactionSpec, init: float | None = None) -> float:
    """Optimal ``eta`` located numerically with the generic Ritz engine."""
    init = spec.k * spec.a ** (spec.n - 1) if init is None else init
    sp = stationary_point(action_functional(spec), trial_family(spec), [init])
    return float(sp.params[0])


def profile(spec: ReactionSpec, source: Source | str) -> KineticsProfile:
    source = Source(source)
    if source is Source.EXACT:
        return KineticsProfile(source, lambda t: exact_extent(spec, t))
    if source is Source.VARIATIONAL:
        eta = variational_eta(spec)
        return KineticsProfile(source, lambda t: variational_extent(spec, t, eta), eta)
    if spec.n != 2:
        raise ValueError("the erroneous closed form exists only for n = 2")
    k, a = spec.k, spec.a
    return KineticsProfile(source, lambda t: a * (1 - 1 / (1 - k * a * t)))


def partial_time(spec: ReactionSpec, remaining: float, source: Source | str = Source.EXACT) -> float:
    """Time for the amount of reactant to fall to ``remaining * a``.

    ``remaining = 1/2`` is the half-time, ``1/4`` the quarter time.
    """
    if not 0 < remaining < 1:
        raise ValueError("remaining fraction must lie in (0, 1)")
    source = Source(source)
    n, k, a = spec.n, spec.k, spec.a
    if source is Source.VARIATIONAL:
        return -math.log(remaining) / variational_eta(spec)
    if source is not Source.EXACT:
        raise ValueError(f"no partial time for source {source}")
    if spec.first_order:
        return -math.log(remaining) / k
    return math.expm1((1 - n) * math.log(remaining)) / (k * (n - 1) * a ** (n - 1))


def half_time(spec: ReactionSpec, source: Source | str = Source.EXACT) -> float:
    return partial_time(spec, 0.5, source)


def partial_time_ratio(spec: ReactionSpec, source: Source | str = Source.EXACT) -> float:
    """``t_1/4 / t_1/2``: ``2**(n-1) + 1`` exactly, and 2 for the variational profile."""
    source = Source(source)
    if source is Source.VARIATIONAL:
        return 2.0
    if source is Source.EXACT:
        return 2.0 ** (spec.n - 1) + 1
    raise ValueError(f"no partial-time ratio for source {source}")


def locate_partial_time(extent_fn, spec: ReactionSpec, remaining: float, t_max: float | None = None,
                        tol: float = 1e-14) -> float:
    """Time at which ``extent_fn`` reaches ``(1 - remaining) a``, by bracketed root finding."""
    target = (1 - remaining) * spec.a
    hi = t_max or 1.0 / (spec.k * spec.a ** (spec.n - 1))
    while extent_fn(hi) < target:
        hi *= 2
        if hi > 1e12:
            raise ValueError("extent never reaches the target")
    return numerics.find_root(lambda t: extent_fn(t) - target, (0.0, hi), tol)


def ode_trajectory(spec: ReactionSpec, t_end: float, tol: float = 1e-12) -> numerics.OdeTrajectory:
    return numerics.ode_solve(lambda t, y: [spec.rate(y[0])], 0.0, t_end, [0.0], tol)


def ode_partial_time(spec: ReactionSpec, remaining: float, tol: float = 1e-12) -> float:
    """Partial time located on the dense output of a direct integration of the rate law."""
    t_end = 2.0 * partial_time(spec, remaining) + 1.0
    traj = ode_trajectory(spec, t_end, tol)
    return locate_partial_time(lambda t: float(traj(t)[0]), spec, remaining, t_max=t_end)


def infer_order(t_half: float, t_quarter: float) -> float:
    """Reaction order from measured half and quarter times: ``1 + log2(r - 1)``."""
    if not t_half > 0:
        raise RatioOutOfRange("half-time must be positive")
    r = t_quarter / t_half
    if r <= 1:
        raise RatioOutOfRange(f"t_quarter / t_half = {r:.6g} admits no real order")
    return 1.0 + math.log2(r - 1.0)


@dataclass
class ErrataReport:
    """Reconstruction of the mistaken n = 2 formulas and their corrections."""

    k: float
    a: float
    pole_time: float
    half_time: float
    erroneous_variational_half_time: float
    variational_half_time: float
    exact_half_time: float
    unphysical: bool = True
    oracle_bounded: bool | None = None
    oracle_max_extent: float | None = None
    notes: list = field(default_factory=list)


def he_erroneous_analysis(k: float, a: float, check_oracle: bool = True) -> ErrataReport:
    """Report on the wrong n = 2 extent ``a (1 - 1/(1 - k a t))``.

    It has a pole at ``t = 1/(k a)`` and yields the negative half-time
    ``-1/(k a)``.  The erroneous variational half-time keeps a spurious minus
    sign, ``-sqrt(2) ln 2 / (k a)``; the correct value is positive.  With
    ``check_oracle`` the rate law is integrated past the pole time to show
    the true extent stays bounded by ``a``.
    """
    spec = ReactionSpec(2, k, a)
    pole = 1.0 / (k * a)
    t_half_var = half_time(spec, Source.VARIATIONAL)
    rep = ErrataReport(
        k=k, a=a,
        pole_time=pole,
        half_time=-1.0 / (k * a),
        erroneous_variational_half_time=-t_half_var,
        variational_half_time=t_half_var,
        exact_half_time=half_time(spec, Source.EXACT),
    )
    rep.notes.append(f"erroneous extent has a pole at t = {pole:.10g}")
    rep.notes.append(
        f"erroneous half-times {rep.half_time:.10g} and "
        f"{rep.erroneous_variational_half_time:.10g} are negative (unphysical)"
    )
    if check_oracle:
        try:
            traj = ode_trajectory(spec, 3 * pole, 1e-10)
        except StepUnderflow:
            rep.oracle_bounded = False
        else:
            x = traj.states[:, 0]
            rep.oracle_bounded = bool(np.all(np.diff(x) >= 0) and np.all(x <= a))
            rep.oracle_max_extent = float(x.max())
            rep.notes.append(
                f"integrated rate law stays below a on [0, {3 * pole:.4g}] "
                f"(max extent {rep.oracle_max_extent:.6g})"
            )
    return rep
