"""Shared numerical kernels.

Root bracketing, scalar maximization, adaptive quadrature and ODE
integration are thin contracts over :mod:`scipy`; the truncated power-series
algebra (including reversion) lives in :class:`PowerSeries` and works with
any numeric field, so ``fractions.Fraction`` coefficients stay exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _spi
from scipy import optimize as _spo

from .errors import NoSignChange, NotInvertible, StepUnderflow, ToleranceNotMet

__all__ = [
    "Bracket",
    "find_root",
    "find_maximum",
    "integrate",
    "integrate_semi_infinite",
    "OdeTrajectory",
    "ode_solve",
    "PowerSeries",
    "series_mul",
    "series_compose",
    "series_revert",
    "DEFAULT_SERIES_ORDER",
]

DEFAULT_SERIES_ORDER = 8
QUAD_ROUNDOFF_FLOOR = 1e-13


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def of(cls, b) -> "Bracket":
        return b if isinstance(b, Bracket) else cls(*b)


def find_root(f: Callable[[float], float], bracket, tol: float = 1e-14) -> float:
    """Root of ``f`` inside ``bracket`` by Brent's method.

    Parameters
    ----------
    f : callable
        Continuous on the bracket.
    bracket : Bracket or (lo, hi)
        Must enclose a sign change; an endpoint that is an exact zero is
        returned as is.
    tol : float
        Absolute width of the final bracket.

    Raises
    ------
    NoSignChange
        If ``f(lo)`` and ``f(hi)`` have the same strict sign.
    """
    b = Bracket.of(bracket)
    flo, fhi = f(b.lo), f(b.hi)
    if flo == 0:
        return b.lo
    if fhi == 0:
        return b.hi
    if not (flo < 0) ^ (fhi < 0):
        raise NoSignChange(
            f"f has the same sign at both ends of [{b.lo}, {b.hi}] ({flo:.3g}, {fhi:.3g})"
        )
    return _spo.brentq(f, b.lo, b.hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)


def find_maximum(f: Callable[[float], float], bracket, tol: float = 1e-10):
    """Maximum of a unimodal ``f`` on ``bracket``.

    Bounded golden-section/parabolic search.  A non-unimodal ``f`` gives a
    local maximum without warning.  Returns ``(x, f(x))``.

    The location is only as sharp as the flatness of ``f`` allows (about
    ``sqrt(eps)`` relative); polish with :func:`find_root` on a derivative
    when the argmax itself is needed to more digits.
    """
    b = Bracket.of(bracket)
    res = _spo.minimize_scalar(
        lambda x: -f(x), bounds=(b.lo, b.hi), method="bounded",
        options={"xatol": tol, "maxiter": 2000},
    )
    return float(res.x), float(f(res.x))


def _at_roundoff(f, a, b, err):
    # quadpack cannot resolve below a few ulps of the integral of |f|
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        scale = _spi.quad(lambda x: abs(f(x)), a, b, limit=400)[0]
    return err <= QUAD_ROUNDOFF_FLOOR * (1 + scale)


def integrate(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> float:
    """Adaptive Gauss-Kronrod quadrature with error <= ``tol*(1+|result|)``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = _spi.quad(f, a, b, epsabs=tol, epsrel=tol, limit=400, full_output=1)
    value, err, info = out[0], out[1], out[2]
    if len(out) > 3 and err > tol * (1 + abs(value)) and not _at_roundoff(f, a, b, err):
        raise ToleranceNotMet(
            f"quadrature on [{a}, {b}] stopped at error {err:.2e} after "
            f"{info['last']} subintervals"
        )
    return value


def integrate_semi_infinite(f: Callable[[float], float], rate_hint: float, tol: float = 1e-12) -> float:
    """Integral of ``f`` over [0, inf) for integrands decaying like ``exp(-rate_hint*t)``.

    Maps ``t = -log(1-s)/rate_hint`` onto ``s`` in [0, 1).
    """
    if not rate_hint > 0:
        raise ValueError(f"rate_hint must be positive, got {rate_hint}")

    def g(s):
        if s >= 1.0:
            return 0.0
        t = -math.log1p(-s) / rate_hint
        return f(t) / (rate_hint * (1.0 - s))

    return integrate(g, 0.0, 1.0, tol)


class OdeTrajectory:
    """Accepted steps of an ODE solve plus dense output between them.

    Attributes
    ----------
    t : ndarray, shape (m,)
        Strictly increasing accepted times.
    states : ndarray, shape (m, dim)
    tolerance : float
        Local tolerance requested from the integrator.
    """

    def __init__(self, t, states, tolerance, dense):
        self.t = np.asarray(t)
        self.states = np.asarray(states)
        self.tolerance = tolerance
        self._dense = dense

    def __call__(self, t):
        """State at ``t`` (scalar or array) from the dense interpolant."""
        if self._dense is None:
            return np.broadcast_to(self.states[0], np.shape(t) + self.states.shape[1:]).copy()
        y = self._dense(t)
        return y.T if np.ndim(t) else y

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def ode_solve(rhs, t0: float, t1: float, state0: Sequence[float], tol: float = 1e-10) -> OdeTrajectory:
    """Integrate ``state' = rhs(t, state)`` from ``t0`` to ``t1``.

    Adaptive embedded Runge-Kutta (Dormand-Prince 8(5,3)) with ``rtol = atol
    = tol`` and continuous extension between accepted steps.

    Raises
    ------
    StepUnderflow
        When the step size collapses; ``exc.t`` carries the location.
    """
    y0 = np.atleast_1d(np.asarray(state0, dtype=float))
    if t1 == t0:
        return OdeTrajectory([t0], y0[None, :], tol, None)
    with np.errstate(over="ignore", invalid="ignore"):
        sol = _spi.solve_ivp(
            rhs, (t0, t1), y0, method="DOP853", rtol=tol, atol=tol, dense_output=True
        )
    if sol.status == -1 or not np.all(np.isfinite(sol.y)):
        t_fail = float(sol.t[-1])
        raise StepUnderflow(f"integration failed near t={t_fail:.6g}: {sol.message}", t_fail)
    return OdeTrajectory(sol.t, sol.y.T, tol, sol.sol)


class PowerSeries:
    """Truncated power series ``c[0] + c[1] x + ... + c[order] x**order``.

    Coefficients may be floats or :class:`fractions.Fraction`.  Binary
    operations truncate to the smaller order of the operands.

    >>> s = PowerSeries([0, 2])
    >>> s.revert().coeffs
    [0, Fraction(1, 2)]
    """

    def __init__(self, coeffs, order: int | None = None):
        c = list(coeffs)
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        c = c[: order + 1] + [0] * (order + 1 - len(c))
        self.coeffs = c
        self.order = order

    def __repr__(self):
        return f"PowerSeries({self.coeffs!r})"

    def __len__(self):
        return self.order + 1

    def __getitem__(self, j):
        return self.coeffs[j]

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries([other], self.order)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return PowerSeries(self.coeffs[: order + 1], order)

    def __add__(self, other):
        o = self._coerce(other)
        n = min(self.order, o.order)
        return PowerSeries([self.coeffs[j] + o.coeffs[j] for j in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries([c * other for c in self.coeffs], self.order)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        return PowerSeries(
            [sum(a[i] * b[j - i] for i in range(j + 1)) for j in range(n + 1)], n
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "PowerSeries":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        inv0 = Fraction(1) / a[0] if isinstance(a[0], (int, Fraction)) else 1.0 / a[0]
        b = [inv0]
        for j in range(1, self.order + 1):
            b.append(-inv0 * sum(a[i] * b[j - i] for i in range(1, j + 1)))
        return PowerSeries(b, self.order)

    def __truediv__(self, other):
        if not isinstance(other, PowerSeries):
            return self * (Fraction(1) / other if isinstance(other, (int, Fraction)) else 1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __call__(self, x):
        """Evaluate the truncated polynomial at a number, or compose with a series."""
        if isinstance(x, PowerSeries):
            return self.compose(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """``self(inner(x))``; ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        out = PowerSeries([self.coeffs[n]], n)
        for c in reversed(self.coeffs[:n]):
            out = out * inner + c
        return out

    def revert(self) -> "PowerSeries":
        """Compositional inverse ``r`` with ``self(r(y)) = y`` to truncation order.

        Raises
        ------
        NotInvertible
            Unless the constant term is 0 and the linear term is nonzero.
        """
        if self.order < 1 or self.coeffs[0] != 0 or self.coeffs[1] == 0:
            raise NotInvertible("reversion needs c0 == 0 and c1 != 0")
        c1 = self.coeffs[1]
        inv1 = Fraction(1) / c1 if isinstance(c1, (int, Fraction)) else 1.0 / c1
        r = PowerSeries([0, inv1], self.order)
        # fix one coefficient per pass: the error of s(r) at y**k is c1 * r_k
        for k in range(2, self.order + 1):
            resid = self.compose(r).coeffs[k]
            r.coeffs[k] = r.coeffs[k] - resid * inv1
        return r

    def as_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    return a * b


def series_compose(outer: PowerSeries, inner: PowerSeries) -> PowerSeries:
    return outer.compose(inner)


def series_revert(s: PowerSeries) -> PowerSeries:
    return s.revert()
