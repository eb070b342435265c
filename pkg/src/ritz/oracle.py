"""Independent checks by direct integration.

The Bratu problem is solved by shooting on the slope ``s = u'(0)``: integrate
``u'' = -lambda exp(u)`` from ``(0, s)`` and root-find ``u(1; s) = 0``.  For
``lambda`` below the fold ``u(1; s)`` is negative at ``s = 0`` and as
``s -> inf`` and positive between the two roots; the exact slope at the fold
is 4 and the two branch slopes straddle it, so ``s = 4`` splits the brackets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bratu, classic_problems as cp, kinetics, numerics
from .bratu import BifurcationCurve, BifurcationSample, Branch, Branches, BranchSolution, Source
from .errors import NoSignChange, NoSolution, StepUnderflow

__all__ = [
    "ShootingProblem",
    "ShootingResult",
    "bratu_endpoint",
    "bratu_shoot",
    "shooting_branches",
    "bratu_sweep",
    "shooting_fold",
    "duffing_trajectory",
    "lambert_trajectory",
    "Discrepancy",
    "CASES",
    "verify_closed_form",
    "verify_all",
]

FOLD_SLOPE = 4.0
ODE_TOL = 1e-12


@dataclass(frozen=True)
class ShootingProblem:
    lam: float
    slope_bracket: numerics.Bracket
    grid_tol: float = 1e-12

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        object.__setattr__(self, "slope_bracket", numerics.Bracket.of(self.slope_bracket))


@dataclass
class ShootingResult:
    slope_at_origin: float
    boundary_defect: float
    trajectory: numerics.OdeTrajectory


def _bratu_rhs(lam):
    def rhs(x, y):
        return [y[1], -lam * math.exp(y[0])]
    return rhs


def bratu_trajectory(lam: float, s: float, tol: float = ODE_TOL) -> numerics.OdeTrajectory:
    return numerics.ode_solve(_bratu_rhs(lam), 0.0, 1.0, [0.0, s], tol)


def bratu_endpoint(lam: float, s: float, tol: float = ODE_TOL) -> float:
    """``u(1)`` for the initial slope ``s``."""
    return float(bratu_trajectory(lam, s, tol).final[0])


def bratu_shoot(problem: ShootingProblem) -> ShootingResult:
    """Slope ``s`` in ``problem.slope_bracket`` with ``u(1; s) = 0``.

    Raises
    ------
    NoSignChange
        The bracket holds no solution (e.g. lambda above the fold).
    StepUnderflow
        Integration blew up inside the bracket.
    """
    lam = problem.lam
    s = numerics.find_root(lambda s: bratu_endpoint(lam, s), problem.slope_bracket, problem.grid_tol)
    traj = bratu_trajectory(lam, s)
    return ShootingResult(s, abs(float(traj.final[0])), traj)


def _upper_bracket(lam, lo=FOLD_SLOPE, hi=8.0, s_max=1e4):
    # double the top end until u(1) turns negative
    while bratu_endpoint(lam, hi) > 0:
        lo, hi = hi, 2 * hi
        if hi > s_max:
            raise NoSignChange(f"no upper-branch sign change below slope {s_max:g}")
    return lo, hi


def shooting_branches(lam: float) -> Branches:
    """Both shooting solutions at ``lam``, or :class:`NoSolution` above the fold."""
    out = Branches(lam, Source.SHOOTING)
    f4 = bratu_endpoint(lam, FOLD_SLOPE)
    if f4 < 0:
        raise NoSolution(f"no solution: lambda = {lam:g} exceeds the shooting fold")
    if f4 == 0:
        out.lower = BranchSolution(Branch.LOWER, FOLD_SLOPE, FOLD_SLOPE)
        out.at_fold = True
        return out
    lo = bratu_shoot(ShootingProblem(lam, (0.0, FOLD_SLOPE))).slope_at_origin
    out.lower = BranchSolution(Branch.LOWER, lo, lo)
    try:
        hi = bratu_shoot(ShootingProblem(lam, _upper_bracket(lam))).slope_at_origin
    except (NoSignChange, StepUnderflow):
        return out
    out.upper = BranchSolution(Branch.UPPER, hi, hi)
    return out


def bratu_sweep(lambda_grid, branch: Branch | str) -> BifurcationCurve:
    """Warm-started shooting along ``lambda_grid`` on one branch.

    The previous root seeds a narrow bracket; the full bracket is the
    fallback.  Points without a solution are recorded in ``gaps``.
    """
    branch = Branch(branch)
    curve = BifurcationCurve(Source.SHOOTING)
    prev = None
    for lam in sorted(lambda_grid):
        try:
            if bratu_endpoint(lam, FOLD_SLOPE) <= 0:
                raise NoSignChange("lambda above the fold")
            full = (0.0, FOLD_SLOPE) if branch is Branch.LOWER else None
            s = None
            if prev is not None:
                lo, hi = (0.5 * prev, min(1.5 * prev, FOLD_SLOPE)) if branch is Branch.LOWER \
                    else (max(0.5 * prev, FOLD_SLOPE), 1.5 * prev)
                if lo < hi:
                    try:
                        s = bratu_shoot(ShootingProblem(lam, (lo, hi))).slope_at_origin
                    except NoSignChange:
                        s = None
            if s is None:
                full = full or _upper_bracket(lam)
                s = bratu_shoot(ShootingProblem(lam, full)).slope_at_origin
        except (NoSignChange, StepUnderflow):
            curve.gaps.append((lam, branch))
            continue
        prev = s
        curve.samples.append(BifurcationSample(lam, s, branch, Source.SHOOTING))
    return curve


def shooting_fold(lam_lo: float = 3.50, lam_hi: float = 3.52, step: float = 1e-4) -> float:
    """Largest grid ``lambda`` at which both shooting branches are found."""
    grid = lam_lo + step * np.arange(int(round((lam_hi - lam_lo) / step)) + 1)
    inside = [lam for lam in grid if bratu_endpoint(lam, FOLD_SLOPE) > 0]
    for lam in reversed(inside):
        br = shooting_branches(float(lam))
        if br.count == 2:
            return float(lam)
    raise NoSolution("no grid point with two shooting solutions")


# -- Duffing / Lambert ------------------------------------------------------

def duffing_trajectory(spec: cp.DuffingSpec, t_end: float = 50.0, tol: float = 1e-13):
    eps = spec.epsilon
    return numerics.ode_solve(lambda t, y: [y[1], cp.duffing_force(eps, y[0])],
                              0.0, t_end, [spec.amplitude, 0.0], tol)


def duffing_energy_drift(spec: cp.DuffingSpec, t_end: float = 50.0, offset: float = 0.0) -> float:
    """Max deviation of ``u'**2/2 + V(u)`` along the trajectory from ``V(A) + offset``."""
    traj = duffing_trajectory(spec, t_end)
    u, v = traj.states[:, 0], traj.states[:, 1]
    E = 0.5 * v * v + np.array([cp.duffing_potential(spec.epsilon, x) for x in u])
    return float(np.max(np.abs(E - cp.duffing_potential(spec.epsilon, spec.amplitude) - offset)))


def duffing_crosses_zero(spec: cp.DuffingSpec, t_end: float = 50.0) -> bool:
    traj = duffing_trajectory(spec, t_end)
    t = np.linspace(0.0, t_end, 20001)
    return bool(np.any(traj(t)[:, 0] < 0))


def lambert_trajectory(spec: cp.LambertSpec, x_end: float, tol: float = 1e-12):
    n, k2 = spec.n, spec.k ** 2

    def rhs(x, y):
        return [y[1], (1 - n) * y[1] ** 2 / y[0] - k2 / n * y[0]]

    return numerics.ode_solve(rhs, 0.0, x_end, [spec.y0, spec.yp0], tol)


# -- verification registry --------------------------------------------------

@dataclass
class Discrepancy:
    case: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)


def _kinetics_case(n):
    def run(eps):
        spec = kinetics.ReactionSpec(n)
        traj = kinetics.ode_trajectory(spec, 10.0, 1e-13)
        t = np.linspace(0.0, 10.0, 401)
        ode = traj(t)[:, 0]
        exact = np.array([kinetics.exact_extent(spec, x) for x in t]) + eps
        return float(np.max(np.abs(ode - exact)))
    return run, 1e-8


def _halftime_case(eps):
    spec = kinetics.ReactionSpec(3)
    return abs(kinetics.ode_partial_time(spec, 0.5) - (kinetics.half_time(spec) + eps))


def fd_derivatives(f, x, h):
    """``(f, f', f'')`` at ``x`` from the five-point fourth-order stencil."""
    y = [f(x + d * h) for d in (-2, -1, 0, 1, 2)]
    d1 = (y[0] - 8 * y[1] + 8 * y[3] - y[4]) / (12 * h)
    d2 = (-y[0] + 16 * y[1] - 30 * y[2] + 16 * y[3] - y[4]) / (12 * h * h)
    return y[2], d1, d2


def bratu_fd_residual(theta: float, h: float = 1e-3, offset: float = 0.0) -> float:
    """Max ``|u'' + lambda exp(u)|`` over interior nodes of a grid of spacing ``h``.

    Uses the fourth-order stencil: the three-point one leaves
    ``h**2 * theta**4 / 3`` at the midpoint, above 1e-6 once ``theta >= 2``.
    """
    lam = bratu.lambda_of_theta(theta)

    def u(x):
        return bratu.exact_solution(theta, x) + offset

    worst = 0.0
    for x in np.arange(2 * h, 1.0 - 1.5 * h, h):
        y, _, ypp = fd_derivatives(u, x, h)
        worst = max(worst, abs(ypp + lam * math.exp(y)))
    return worst


def _bratu_residual_case(eps):
    return max(bratu_fd_residual(theta, offset=eps) for theta in (0.5, 1.0, 2.0, 3.0))


def _bratu_shooting_case(eps):
    worst = 0.0
    for lam in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5):
        ex = bratu.branches_at(lam, Source.EXACT)
        sh = shooting_branches(lam)
        for b in (Branch.LOWER, Branch.UPPER):
            e, s = getattr(ex, b.value), getattr(sh, b.value)
            worst = max(worst, abs(e.slope + eps - s.slope))
    return worst


LAMBERT_CASES = [(n, k) for n in (1, 2, 3) for k in (1.0, 2.0)]


def lambert_positive_grid(spec: cp.LambertSpec, num: int = 200, z_min: float = 0.1) -> np.ndarray:
    """Points of the positive branch where ``z = y**n > z_min``."""
    lo, hi = cp.lambert_branch_interval(spec)
    xs = np.linspace(lo, hi, num + 2)[1:-1]
    return np.array([x for x in xs if cp.lambert_solve(spec, x) ** spec.n > z_min])


def lambert_fd_residual(spec: cp.LambertSpec, h: float = 3e-4, offset: float = 0.0) -> float:
    worst = 0.0
    for x in lambert_positive_grid(spec):
        y, yp, ypp = fd_derivatives(lambda t: cp.lambert_solve(spec, t) + offset, x, h)
        worst = max(worst, abs(cp.lambert_residual(spec, y, yp, ypp)))
    return worst


def lambert_ode_discrepancy(spec: cp.LambertSpec, offset: float = 0.0) -> float:
    """Max gap between the transform solution and direct integration, both sides of 0."""
    xs = lambert_positive_grid(spec)
    worst = 0.0
    for side in (xs[xs >= 0], xs[xs < 0][::-1]):
        if side.size == 0:
            continue
        traj = lambert_trajectory(spec, float(side[-1]))
        for x in side:
            worst = max(worst, abs(float(traj(x)[0]) - cp.lambert_solve(spec, x) - offset))
    return worst


def _lambert_residual_case(eps):
    return max(lambert_fd_residual(cp.LambertSpec(n, k, 1.0, 0.3), offset=eps) for n, k in LAMBERT_CASES)


def _lambert_ode_case(eps):
    return max(lambert_ode_discrepancy(cp.LambertSpec(n, k, 1.0, 0.3), offset=eps) for n, k in LAMBERT_CASES)


def _kdv_case(eps):
    worst = 0.0
    for c in (1.0, 4.0):
        sol = cp.kdv_soliton_solve(c)
        worst = max(worst, cp.kdv_max_residual(cp.KdvSoliton(c, sol.p + eps, sol.q)))
    return worst


def _duffing_case(eps):
    return max(duffing_energy_drift(cp.DuffingSpec(e, A), offset=eps) for e, A in ((1, 1), (1, 2), (1, 1.5)))


CASES: dict[str, tuple[Callable[[float], float], float]] = {
    "kinetics-n1": _kinetics_case(1),
    "kinetics-n1.5": _kinetics_case(1.5),
    "kinetics-n2": _kinetics_case(2),
    "kinetics-n3": _kinetics_case(3),
    "kinetics-n5": _kinetics_case(5),
    "kinetics-halftime": (_halftime_case, 1e-10),
    "bratu-exact-residual": (_bratu_residual_case, 1e-6),
    "bratu-shooting": (_bratu_shooting_case, 1e-6),
    "lambert-residual": (_lambert_residual_case, 1e-7),
    "lambert-ode": (_lambert_ode_case, 1e-6),
    "kdv-residual": (_kdv_case, 1e-9),
    "duffing-energy": (_duffing_case, 1e-8),
}


def verify_closed_form(case_id: str, perturbation: float = 0.0) -> Discrepancy:
    """Max-abs discrepancy between a closed form and its oracle.

    ``perturbation`` is added to the closed-form side (negative control).
    """
    try:
        run, tol = CASES[case_id]
    except KeyError:
        raise KeyError(f"unknown case {case_id!r}; known: {', '.join(CASES)}") from None
    return Discrepancy(case_id, run(perturbation), tol)


def verify_all(perturbation: float = 0.0) -> list[Discrepancy]:
    return [verify_closed_form(c, perturbation) for c in CASES]
