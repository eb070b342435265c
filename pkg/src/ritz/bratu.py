r"""One-dimensional Bratu problem ``u'' + lambda exp(u) = 0``, ``u(0) = u(1) = 0``.

Exact solution
--------------
``u(x) = -2 log(cosh(theta (x - 1/2)) / cosh(theta / 2))`` with
``lambda = 2 theta**2 / cosh(theta/2)**2``.  Differentiating at the origin
gives the slope used as the ordinate of the bifurcation diagram::

    u'(0) = 2 theta tanh(theta / 2)

and ``d lambda / d theta = 2 theta sech(theta/2)**2 (2 - theta tanh(theta/2))``,
so the fold sits at ``theta tanh(theta/2) = 2`` where the slope is exactly 4.

Ritz trials
-----------
``poly``: ``u = A x (1 - x)``, slope ``A``, action
``A**2/6 - lambda E(A)`` with ``E(A) = int_0^1 exp(A x (1-x)) dx``.
``sine``: ``u = A sin(pi x)``, slope ``pi A``, action
``pi**2 A**2 / 4 - lambda (I0(A) + L0(A))``.

Setting ``dJ/dA = 0`` and solving for ``lambda`` gives ``lambda(A)`` for each
trial; each curve has a single maximum (the trial's fold).  Both branches at a
given ``lambda`` are found by bracketing on either side of that maximum.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from . import numerics, specfun
from .errors import NoSignChange, NoSolution
from .numerics import PowerSeries
from .ritz_engine import ActionFunctional, Finite, TrialFamily, trial_parameter_sweep

__all__ = [
    "Source",
    "Branch",
    "TRIAL_KINDS",
    "BratuExact",
    "exact_solution",
    "exact_slope",
    "lambda_of_theta",
    "dlambda_dtheta",
    "lambda_of_A",
    "dlambda_dA",
    "closed_form_action",
    "slope_of_param",
    "lambda_of_param",
    "CriticalPoint",
    "critical_point",
    "BranchSolution",
    "Branches",
    "branches_at",
    "lambda_series",
    "slope_series",
    "perturbation_series",
    "BifurcationSample",
    "BifurcationCurve",
    "bifurcation_dataset",
    "csv_rows",
    "trial_family",
    "action_functional",
    "ritz_lambda_curve",
]

PARAM_MAX = 30.0
SMALL_A = 1e-3
FOLD_TOL = 1e-8


class Source(enum.Enum):
    EXACT = "exact"
    POLY = "poly"
    SINE = "sine"
    SHOOTING = "shooting"


class Branch(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


TRIAL_KINDS = (Source.POLY, Source.SINE)
_ORDER = {s: i for i, s in enumerate(Source)}


@dataclass(frozen=True)
class BratuExact:
    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError("theta must be positive")

    @property
    def lam(self) -> float:
        return lambda_of_theta(self.theta)

    @property
    def slope(self) -> float:
        return exact_slope(self.theta)

    def __call__(self, x):
        return exact_solution(self.theta, x)


# -- exact solution ---------------------------------------------------------

def exact_solution(theta: float, x: float) -> float:
    return -2.0 * (specfun.log_cosh(theta * (x - 0.5)) - specfun.log_cosh(0.5 * theta))


def exact_slope(theta: float) -> float:
    return 2.0 * theta * math.tanh(0.5 * theta)


def lambda_of_theta(theta: float) -> float:
    if theta < 0:
        raise ValueError("theta must be non-negative")
    return 2.0 * theta * theta * specfun.sech(0.5 * theta) ** 2


def dlambda_dtheta(theta: float) -> float:
    return 2.0 * theta * specfun.sech(0.5 * theta) ** 2 * (2.0 - theta * math.tanh(0.5 * theta))


# -- trial closed forms -----------------------------------------------------

def _check_kind(kind):
    kind = Source(kind)
    if kind not in TRIAL_KINDS:
        raise ValueError(f"{kind.value} is not a Ritz trial")
    return kind


def closed_form_action(kind, A: float, lam: float) -> float:
    kind = _check_kind(kind)
    if kind is Source.POLY:
        return A * A / 6.0 - lam * specfun.exp_parabola_integral(A)
    return A * A * math.pi ** 2 / 4.0 - lam * specfun.sinh_poisson_integral(A)


def lambda_of_A(kind, A: float) -> float:
    """Stationarity condition ``dJ/dA = 0`` solved for ``lambda``.

    Below ``A = 1e-3`` the order-8 Taylor series is used instead of the
    closed form, whose numerator and denominator both vanish at 0.
    """
    kind = _check_kind(kind)
    if A < 0:
        raise ValueError("A must be non-negative")
    if A < SMALL_A:
        return float(_lambda_series_float(kind)(A))
    if kind is Source.POLY:
        rA = math.sqrt(A)
        den = math.sqrt(math.pi) * (A - 2) * math.exp(A / 4) * specfun.erf(rA / 2) + 2 * rA
        return 4 * A ** 2.5 / (3 * den)
    s1 = specfun.bessel_i(1, A) + specfun.struve_l(1, A)
    return A * math.pi ** 3 / (2 * (2 + math.pi * s1))


def dlambda_dA(kind, A: float) -> float:
    kind = _check_kind(kind)
    if A < SMALL_A:
        s = _lambda_series_float(kind)
        return sum(j * s[j] * A ** (j - 1) for j in range(1, s.order + 1))
    if kind is Source.POLY:
        E = specfun.exp_parabola_integral(A)
        dE = E * (0.25 - 0.5 / A) + 0.5 / A
        W = (A - 2) * E + 2
        dW = E + (A - 2) * dE
        return 4 * (2 * A * W - A * A * dW) / (3 * W * W)
    s0 = specfun.sinh_poisson_integral(A)
    s1 = specfun.bessel_i(1, A) + specfun.struve_l(1, A)
    V = 2 + math.pi * s1
    dV = math.pi * (s0 - s1 / A)
    return math.pi ** 3 * (V - A * dV) / (2 * V * V)


def lambda_of_param(source, p: float) -> float:
    source = Source(source)
    if source is Source.EXACT:
        return lambda_of_theta(p)
    return lambda_of_A(source, p)


def _dlambda(source, p):
    return dlambda_dtheta(p) if Source(source) is Source.EXACT else dlambda_dA(source, p)


def slope_of_param(source, p: float) -> float:
    """Slope at the origin: ``2 theta tanh(theta/2)``, ``A`` or ``pi A``."""
    source = Source(source)
    if source is Source.EXACT:
        return exact_slope(p)
    if source is Source.POLY:
        return p
    if source is Source.SINE:
        return math.pi * p
    raise ValueError(f"no shape parameter for {source.value}")


# -- critical points --------------------------------------------------------

class CriticalPoint(NamedTuple):
    param: float
    lam: float
    slope: float


_SEARCH = {Source.EXACT: (0.5, 6.0), Source.POLY: (1.0, 10.0), Source.SINE: (0.2, 4.0)}


@functools.lru_cache(maxsize=None)
def _critical(source: Source) -> CriticalPoint:
    p0, _ = numerics.find_maximum(lambda p: lambda_of_param(source, p), _SEARCH[source], 1e-10)
    # the argmax from values alone is good to ~1e-8; polish on d lambda = 0
    d = 1e-4 * (1 + p0)
    while True:
        try:
            p = numerics.find_root(lambda q: _dlambda(source, q), (p0 - d, p0 + d), 1e-15)
            break
        except NoSignChange:
            d *= 4
    return CriticalPoint(p, lambda_of_param(source, p), slope_of_param(source, p))


def critical_point(source) -> CriticalPoint:
    """``(param_c, lambda_c, slope_c)`` at the fold of the source's lambda curve."""
    source = Source(source)
    if source is Source.SHOOTING:
        raise ValueError("use oracle.shooting_fold for the shooting source")
    return _critical(source)


def theta_critical_equation(theta: float) -> float:
    """``exp(theta) (theta - 2) - theta - 2``; its positive root is the exact fold."""
    return math.exp(theta) * (theta - 2) - theta - 2


# -- branches ---------------------------------------------------------------

@dataclass
class BranchSolution:
    branch: Branch
    param: float
    slope: float
    error: float | None = None


@dataclass
class Branches:
    lam: float
    source: Source
    lower: BranchSolution | None = None
    upper: BranchSolution | None = None
    at_fold: bool = False

    @property
    def count(self) -> int:
        return (self.lower is not None) + (self.upper is not None)

    def solutions(self) -> list[BranchSolution]:
        return [s for s in (self.lower, self.upper) if s is not None]


def branches_at(lam: float, source=Source.EXACT, *, param_max: float = PARAM_MAX,
                fold_tol: float = FOLD_TOL) -> Branches:
    """All solutions at ``lam``: two below the fold, one at it, none above.

    The upper branch is searched on ``(param_c, param_max)``; if it lies
    beyond ``param_max`` it is left as ``None``.

    Raises
    ------
    NoSolution
        When ``lam`` exceeds the source's critical value by more than
        ``fold_tol``.
    """
    source = Source(source)
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if source is Source.SHOOTING:
        from . import oracle

        return oracle.shooting_branches(lam)
    crit = critical_point(source)
    if lam > crit.lam + fold_tol:
        raise NoSolution(
            f"no solution: lambda exceeds critical value {crit.lam:.10g} ({source.value})"
        )
    out = Branches(lam, source)
    if abs(lam - crit.lam) <= fold_tol:
        out.lower = BranchSolution(Branch.LOWER, crit.param, crit.slope)
        out.at_fold = True
        return out

    def f(p):
        return lambda_of_param(source, p) - lam

    p = numerics.find_root(f, (0.0, crit.param), 1e-14)
    out.lower = BranchSolution(Branch.LOWER, p, slope_of_param(source, p))
    if f(param_max) < 0:
        p = numerics.find_root(f, (crit.param, param_max), 1e-14)
        out.upper = BranchSolution(Branch.UPPER, p, slope_of_param(source, p))
    return out


# -- perturbation series ----------------------------------------------------

def _exact_cosh_sinhc(order):
    # in s = theta**2: cosh(theta/2) and sinh(theta/2)/(theta/2)
    ch = [Fraction(1, 4 ** k * math.factorial(2 * k)) for k in range(order + 1)]
    shc = [Fraction(1, 4 ** k * math.factorial(2 * k + 1)) for k in range(order + 1)]
    return PowerSeries(ch), PowerSeries(shc)


def lambda_series(source, order: int = numerics.DEFAULT_SERIES_ORDER) -> PowerSeries:
    """Taylor series of lambda in the source's small parameter.

    The parameter is ``theta**2`` for the exact solution (lambda is even in
    theta) and ``A`` for the trials.  Exact and poly coefficients are
    rational; sine coefficients are floats.
    """
    source = Source(source)
    if source is Source.EXACT:
        ch, _ = _exact_cosh_sinhc(order)
        x = PowerSeries([0, 2], order)
        return x / (ch * ch)
    if source is Source.POLY:
        # E(A) = sum m!/(2m+1)! A**m ; lambda = 4A / (3 Q), Q_j = e_j - 2 e_{j+1}
        e = [Fraction(math.factorial(m), math.factorial(2 * m + 1)) for m in range(order + 2)]
        Q = PowerSeries([e[j] - 2 * e[j + 1] for j in range(order + 1)])
        return PowerSeries([0, Fraction(4, 3)], order) / Q
    if source is Source.SINE:
        # M_m = int_0^1 sin(pi x)**m dx ; I1 + L1 = sum_{m>=1} A**(m-1)/(m-1)! M_m - 2/pi
        M = [1.0, 2.0 / math.pi]
        for m in range(2, order + 2):
            M.append((m - 1) / m * M[m - 2])
        s1 = [M[j + 1] / math.factorial(j) for j in range(order + 1)]
        s1[0] -= 2.0 / math.pi
        V = PowerSeries([2.0 + math.pi * c if j == 0 else math.pi * c for j, c in enumerate(s1)])
        return PowerSeries([0.0, math.pi ** 3 / 2], order) / V
    raise ValueError(f"no series for {source.value}")


@functools.lru_cache(maxsize=None)
def _lambda_series_float(kind):
    return PowerSeries(lambda_series(kind).as_floats())


def slope_series(source, order: int = numerics.DEFAULT_SERIES_ORDER) -> PowerSeries:
    source = Source(source)
    if source is Source.EXACT:
        ch, shc = _exact_cosh_sinhc(order)
        return PowerSeries([0, 1], order) * shc / ch
    if source is Source.POLY:
        return PowerSeries([0, 1], order)
    if source is Source.SINE:
        return PowerSeries([0.0, math.pi], order)
    raise ValueError(f"no series for {source.value}")


def perturbation_series(source, order: int = 4) -> PowerSeries:
    """``u'(0)`` as a power series in ``lambda`` truncated at ``order``.

    Reverts the source's lambda series and composes the result into its
    slope series.
    """
    if order < 1 or order > numerics.DEFAULT_SERIES_ORDER:
        raise ValueError(f"order must be in [1, {numerics.DEFAULT_SERIES_ORDER}]")
    param_of_lambda = lambda_series(source, order).revert()
    return slope_series(source, order).compose(param_of_lambda)


# -- Ritz engine hooks ------------------------------------------------------

def trial_family(kind) -> TrialFamily:
    kind = _check_kind(kind)
    if kind is Source.POLY:
        return TrialFamily(lambda x, p: p[0] * x * (1 - x), lambda x, p: p[0] * (1 - 2 * x),
                           ["A"], name="poly")
    pi = math.pi
    return TrialFamily(lambda x, p: p[0] * math.sin(pi * x), lambda x, p: pi * p[0] * math.cos(pi * x),
                       ["A"], name="sine")


def action_functional(lam: float) -> ActionFunctional:
    return ActionFunctional(lambda x, u, up: 0.5 * up * up - lam * math.exp(u), Finite(0.0, 1.0),
                            {"lambda": lam})


def ritz_lambda_curve(kind, A_grid, kappa_bracket=(0.0, 20.0)):
    """lambda(A) recovered numerically by the engine (no closed forms)."""
    return trial_parameter_sweep(action_functional, trial_family(kind), A_grid, kappa_bracket)


# -- bifurcation dataset ----------------------------------------------------

@dataclass
class BifurcationSample:
    lam: float
    slope: float
    branch: Branch
    source: Source
    error: float | None = None


@dataclass
class BifurcationCurve:
    source: Source
    samples: list = field(default_factory=list)
    gaps: list = field(default_factory=list)

    def branch(self, b: Branch) -> list[BifurcationSample]:
        return sorted((s for s in self.samples if s.branch is Branch(b)), key=lambda s: s.lam)


def bifurcation_dataset(sources: Iterable = (Source.EXACT, Source.POLY, Source.SINE, Source.SHOOTING),
                        lambda_grid: Iterable[float] = ()) -> list[BifurcationCurve]:
    """Slope at the origin against lambda on both branches for each source.

    Trial and shooting samples carry ``error = |slope - exact slope|`` when
    the exact branch exists at that lambda.  Points past a source's fold are
    recorded in ``gaps``.
    """
    grid = sorted(float(x) for x in lambda_grid)
    sources = sorted({Source(s) for s in sources}, key=_ORDER.get)
    exact = {}
    for lam in grid:
        try:
            br = branches_at(lam, Source.EXACT)
        except NoSolution:
            continue
        exact[lam] = {s.branch: s.slope for s in br.solutions()}

    curves = []
    for src in sources:
        if src is Source.SHOOTING:
            from . import oracle

            curve = oracle.bratu_sweep(grid, Branch.LOWER)
            upper = oracle.bratu_sweep(grid, Branch.UPPER)
            curve.samples += upper.samples
            curve.gaps += upper.gaps
        else:
            curve = BifurcationCurve(src)
            for lam in grid:
                try:
                    br = branches_at(lam, src)
                except NoSolution:
                    curve.gaps.append((lam, None))
                    continue
                for s in br.solutions():
                    curve.samples.append(BifurcationSample(lam, s.slope, s.branch, src))
                if br.upper is None and not br.at_fold:
                    curve.gaps.append((lam, Branch.UPPER))
        for s in curve.samples:
            ref = exact.get(s.lam, {}).get(s.branch)
            if src is not Source.EXACT and ref is not None:
                s.error = abs(s.slope - ref)
        curves.append(curve)
    return curves


def csv_rows(curves: Iterable[BifurcationCurve]) -> list[tuple[float, float, str, str]]:
    """Rows ``(lambda, slope, branch, source)`` sorted by source, branch, lambda."""
    rows = [s for c in curves for s in c.samples]
    rows.sort(key=lambda s: (_ORDER[s.source], s.branch is Branch.UPPER, s.lam))
    return [(s.lam, s.slope, s.branch.value, s.source.value) for s in rows]
