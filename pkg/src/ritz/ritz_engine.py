"""Generic Ritz machinery: action functionals over parametric trial families.

An :class:`ActionFunctional` holds a Lagrangian density ``L(x, u, u')`` and
an integration domain.  A :class:`TrialFamily` supplies ``u(x; params)`` and
its derivative.  :func:`action_value` integrates the density along the trial,
:func:`stationary_point` solves ``grad J = 0`` by damped Newton on
central-difference derivatives, and :func:`parameter_curve` continues
stationary points along an external knob (``lambda``, reaction order, ...).

Stationary points are classified from the Hessian, never assumed to be
minima: the Bratu action is unbounded below.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from . import numerics
from .errors import (
    NoConvergence,
    NoSignChange,
    RitzError,
    SingularHessian,
    ToleranceNotMet,
)

__all__ = [
    "Finite",
    "SemiInfinite",
    "TrialFamily",
    "ActionFunctional",
    "StationaryPoint",
    "CurvePoint",
    "action_value",
    "action_gradient",
    "action_hessian",
    "stationary_point",
    "parameter_curve",
    "trial_parameter_sweep",
]

GRAD_STEP = 1e-6
HESS_STEP = 1e-4


@dataclass(frozen=True)
class Finite:
    a: float
    b: float


@dataclass(frozen=True)
class SemiInfinite:
    """Domain [0, inf).

    ``decay_hint`` is the exponential decay rate of the density, either a
    number or a function of the trial parameters.
    """

    decay_hint: Union[float, Callable[[np.ndarray], float]]

    def rate(self, params) -> float:
        h = self.decay_hint
        return float(h(params)) if callable(h) else float(h)


class TrialFamily:
    """Parametric trial function with analytic first derivative.

    Parameters
    ----------
    eval, deriv : callable
        ``eval(x, params)`` and ``deriv(x, params)`` returning ``u`` and
        ``du/dx``.
    param_names : sequence of str
    probe_interval : (float, float)
        Where ``x`` is sampled for the construction-time derivative check.
    probe_params : sequence of (lo, hi)
        Box for parameter samples in the check; defaults to (0.1, 2) for each.

    Raises
    ------
    ValueError
        If ``deriv`` disagrees with a central difference of ``eval``.
    """

    def __init__(self, eval, deriv, param_names, *, probe_interval=(0.0, 1.0),
                 probe_params=None, name=None, check=True):
        self.eval = eval
        self.deriv = deriv
        self.param_names = tuple(param_names)
        self.name = name or "trial"
        if not 1 <= len(self.param_names) <= 4:
            raise ValueError("trial families carry between 1 and 4 parameters")
        if check:
            box = probe_params or [(0.1, 2.0)] * self.param_count
            self._check_derivative(probe_interval, box)

    @property
    def param_count(self) -> int:
        return len(self.param_names)

    def __call__(self, x, params):
        return self.eval(x, params)

    def _check_derivative(self, interval, box, n_probes=16):
        rng = np.random.default_rng(12345)
        lo, hi = zip(*box)
        for _ in range(n_probes):
            x = rng.uniform(*interval)
            p = rng.uniform(lo, hi)
            h = 1e-5 * (1 + abs(x))
            fd = (self.eval(x + h, p) - self.eval(x - h, p)) / (2 * h)
            d = self.deriv(x, p)
            if abs(fd - d) > 1e-6 * (1 + abs(d)):
                raise ValueError(
                    f"{self.name}: derivative mismatch at x={x:.4g}, params={p}: "
                    f"analytic {d:.10g} vs finite difference {fd:.10g}"
                )

    def __repr__(self):
        return f"TrialFamily({self.name!r}, params={self.param_names})"


@dataclass
class ActionFunctional:
    """``J[u] = integral of density(x, u, u') over domain``."""

    density: Callable[[float, float, float], float]
    domain: Union[Finite, SemiInfinite]
    fixed_scalars: dict = field(default_factory=dict)
    quad_tol: float = 1e-14


@dataclass
class StationaryPoint:
    params: np.ndarray
    J_value: float
    gradient_norm: float
    hessian_eigen_signs: tuple
    iterations: int = 0

    @property
    def kind(self) -> str:
        s = set(self.hessian_eigen_signs)
        if 0 in s:
            return "degenerate"
        if s == {1}:
            return "minimum"
        if s == {-1}:
            return "maximum"
        return "saddle"


@dataclass
class CurvePoint:
    """One sample of a continuation; ``point`` is None for a recorded gap."""

    kappa: float | None
    params: np.ndarray
    point: StationaryPoint | None = None


def action_value(F: ActionFunctional, T: TrialFamily, params) -> float:
    p = np.asarray(params, dtype=float)
    if p.shape != (T.param_count,):
        raise ValueError(f"{T.name} takes {T.param_count} parameters, got shape {p.shape}")

    def integrand(x):
        return F.density(x, T.eval(x, p), T.deriv(x, p))

    if isinstance(F.domain, Finite):
        return numerics.integrate(integrand, F.domain.a, F.domain.b, F.quad_tol)
    return numerics.integrate_semi_infinite(integrand, F.domain.rate(p), F.quad_tol)


def _steps(p, rel):
    return rel * (1.0 + np.abs(p))


def action_gradient(F, T, params) -> np.ndarray:
    p = np.asarray(params, dtype=float)
    h = _steps(p, GRAD_STEP)
    g = np.empty_like(p)
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = h[i]
        g[i] = (action_value(F, T, p + e) - action_value(F, T, p - e)) / (2 * h[i])
    return g


def action_hessian(F, T, params) -> np.ndarray:
    p = np.asarray(params, dtype=float)
    n = p.size
    h = _steps(p, HESS_STEP)
    J0 = action_value(F, T, p)
    H = np.empty((n, n))
    E = np.diag(h)
    for i in range(n):
        H[i, i] = (action_value(F, T, p + E[i]) - 2 * J0 + action_value(F, T, p - E[i])) / h[i] ** 2
        for j in range(i):
            H[i, j] = H[j, i] = (
                action_value(F, T, p + E[i] + E[j])
                - action_value(F, T, p + E[i] - E[j])
                - action_value(F, T, p - E[i] + E[j])
                + action_value(F, T, p - E[i] - E[j])
            ) / (4 * h[i] * h[j])
    return H


def _eigen_signs(H, rel=1e-8):
    w = np.linalg.eigvalsh(H)
    scale = max(1.0, float(np.max(np.abs(w))))
    return tuple(int(np.sign(x)) if abs(x) > rel * scale else 0 for x in w)


def stationary_point(F: ActionFunctional, T: TrialFamily, init, *,
                     max_iter: int = 60, xtol: float = 1e-10,
                     gtol: float = 1e-6) -> StationaryPoint:
    """Solve ``grad J(params) = 0`` starting from ``init``.

    Damped Newton: the full step is halved until the gradient norm drops.
    Convergence is declared when the step falls below ``xtol*(1+|params|)``
    and the gradient satisfies ``|grad| <= gtol*(1+|J|)``.

    Raises
    ------
    SingularHessian
        Near folds, where the Hessian has a (numerically) zero eigenvalue.
    NoConvergence
        On iteration cap, or when the action cannot be evaluated along the
        Newton path.
    """
    p = np.asarray(init, dtype=float).copy()
    try:
        g = action_gradient(F, T, p)
        for it in range(1, max_iter + 1):
            H = action_hessian(F, T, p)
            if 0 in _eigen_signs(H):
                raise SingularHessian(f"singular Hessian at params={p}")
            step = np.linalg.solve(H, g)
            gnorm = np.linalg.norm(g)
            for halvings in range(11):
                t = 0.5 ** halvings
                trial = p - t * step
                try:
                    g_new = action_gradient(F, T, trial)
                except (RitzError, ValueError, OverflowError, ZeroDivisionError):
                    continue
                if np.linalg.norm(g_new) < gnorm:
                    break
            else:
                # no descent left: sitting on the finite-difference noise floor
                break
            p, g = trial, g_new
            if np.linalg.norm(t * step) <= xtol * (1 + np.linalg.norm(p)):
                break
        else:
            raise NoConvergence(f"Newton did not converge in {max_iter} iterations")
        J = action_value(F, T, p)
        gnorm = float(np.linalg.norm(g))
        if gnorm > gtol * (1 + abs(J)):
            raise NoConvergence(f"gradient norm {gnorm:.3g} too large at params={p}")
        signs = _eigen_signs(action_hessian(F, T, p))
    except (ToleranceNotMet, OverflowError, FloatingPointError, np.linalg.LinAlgError) as exc:
        raise NoConvergence(f"action evaluation failed near params={p}: {exc}") from exc
    return StationaryPoint(p, J, gnorm, signs, it)


def parameter_curve(make_functional: Callable[[float], ActionFunctional], T: TrialFamily,
                    grid: Sequence[float], init, *, param_grid=None,
                    kappa_bracket=None) -> list[CurvePoint]:
    """Natural-parameter continuation of stationary points over ``grid``.

    Each solve is warm-started from the previous one.  A failed point is
    recorded as a gap.  If any point fails and both ``param_grid`` and
    ``kappa_bracket`` are given, the sweep is redone with the roles swapped:
    see :func:`trial_parameter_sweep`.
    """
    grid = list(grid)
    pairs = list(zip(grid, grid[1:]))
    if not (all(b > a for a, b in pairs) or all(b < a for a, b in pairs)):
        raise ValueError("grid must be strictly monotone")
    out = []
    p = np.asarray(init, dtype=float)
    failed = False
    for kappa in grid:
        try:
            sp = stationary_point(make_functional(kappa), T, p)
        except RitzError:
            failed = True
            out.append(CurvePoint(kappa, p.copy(), None))
            continue
        p = sp.params
        out.append(CurvePoint(kappa, sp.params, sp))
    if failed and param_grid is not None and kappa_bracket is not None:
        return trial_parameter_sweep(make_functional, T, param_grid, kappa_bracket)
    return out


def trial_parameter_sweep(make_functional, T: TrialFamily, param_grid, kappa_bracket,
                          tol: float = 1e-12) -> list[CurvePoint]:
    """Sweep a one-parameter trial and solve ``dJ/dA = 0`` for the knob instead.

    Folds in ``kappa`` are regular points in this parametrization.  Points
    where no ``kappa`` in ``kappa_bracket`` makes the trial stationary are
    recorded as gaps.
    """
    if T.param_count != 1:
        raise ValueError("trial-parameter sweeps need a one-parameter family")
    out = []
    for A in param_grid:
        p = np.array([float(A)])

        def dJ(kappa):
            return action_gradient(make_functional(kappa), T, p)[0]

        try:
            kappa = numerics.find_root(dJ, kappa_bracket, tol)
        except NoSignChange:
            out.append(CurvePoint(None, p, None))
            continue
        F = make_functional(kappa)
        J = action_value(F, T, p)
        g = float(abs(action_gradient(F, T, p)[0]))
        sp = StationaryPoint(p, J, g, _eigen_signs(action_hessian(F, T, p)))
        out.append(CurvePoint(kappa, p, sp))
    return out
