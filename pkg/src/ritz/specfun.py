r"""Scalar special functions used by the Bratu closed forms.

Modified Bessel :math:`I_\nu` and modified Struve :math:`L_\nu` are evaluated
from their ascending series for integer orders 0 and 1 and non-negative
arguments.  All terms of both series are positive, so plain summation is
stable; ``math.fsum`` removes the remaining rounding drift.  The arguments
that occur here stay below about 30, where the series need fewer than 80
terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonConvergence

__all__ = [
    "AccuracySpec",
    "DEFAULT_ACCURACY",
    "erf",
    "bessel_i",
    "struve_l",
    "sinh_poisson_integral",
    "sinh_poisson_derivative",
    "exp_parabola_integral",
    "log_cosh",
    "sech",
]


@dataclass(frozen=True)
class AccuracySpec:
    """Stopping rule for the ascending series."""

    rel_tol: float = 1e-14
    max_terms: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_ACCURACY = AccuracySpec()


def erf(x: float) -> float:
    """Error function (thin wrapper over :func:`math.erf`)."""
    return math.erf(x)


def _check_order_arg(order, x):
    if order not in (0, 1):
        raise ValueError(f"only orders 0 and 1 are supported, got {order}")
    if not x >= 0:
        raise ValueError(f"argument must be non-negative, got {x}")


def _sum_series(first, ratio, x, acc, name):
    # ratio(k) gives term[k+1] / term[k]; terms are all positive, and once the
    # ratio is below 1/2 the neglected tail is bounded by the last term
    terms = [first]
    term, running = first, first
    for k in range(acc.max_terms - 1):
        term *= ratio(k)
        terms.append(term)
        running += term
        if ratio(k + 1) < 0.5 and term <= acc.rel_tol * running:
            return math.fsum(terms)
    raise NonConvergence(f"{name}({x}) did not converge in {acc.max_terms} terms")


def bessel_i(order: int, x: float, acc: AccuracySpec = DEFAULT_ACCURACY) -> float:
    r"""Modified Bessel function of the first kind, :math:`I_0` or :math:`I_1`.

    Uses :math:`I_\nu(x) = \sum_k (x/2)^{2k+\nu} / (k!\,(k+\nu)!)`.
    """
    _check_order_arg(order, x)
    if x == 0:
        return 1.0 if order == 0 else 0.0
    h2 = 0.25 * x * x
    first = 1.0 if order == 0 else 0.5 * x
    return _sum_series(first, lambda k: h2 / ((k + 1) * (k + 1 + order)), x, acc, f"I{order}")


def struve_l(order: int, x: float, acc: AccuracySpec = DEFAULT_ACCURACY) -> float:
    r"""Modified Struve function :math:`L_0` or :math:`L_1`.

    Uses :math:`L_\nu(x) = \sum_k (x/2)^{2k+\nu+1} / (\Gamma(k+3/2)\,\Gamma(k+\nu+3/2))`.
    """
    _check_order_arg(order, x)
    if x == 0:
        return 0.0
    h = 0.5 * x
    first = h ** (order + 1) / (math.gamma(1.5) * math.gamma(order + 1.5))
    return _sum_series(
        first, lambda k: h * h / ((k + 1.5) * (k + order + 1.5)), x, acc, f"L{order}"
    )


def sinh_poisson_integral(A: float, acc: AccuracySpec = DEFAULT_ACCURACY) -> float:
    r""":math:`\int_0^1 e^{A\sin\pi x}\,dx = I_0(A) + L_0(A)`."""
    return bessel_i(0, A, acc) + struve_l(0, A, acc)


def sinh_poisson_derivative(A: float, acc: AccuracySpec = DEFAULT_ACCURACY) -> float:
    r"""Derivative of :func:`sinh_poisson_integral`, i.e. :math:`I_1 + L_1 + 2/\pi`."""
    return bessel_i(1, A, acc) + struve_l(1, A, acc) + 2.0 / math.pi


def exp_parabola_integral(A: float) -> float:
    r""":math:`\int_0^1 e^{A x(1-x)}\,dx = \sqrt{\pi/A}\,e^{A/4}\,\mathrm{erf}(\sqrt{A}/2)`.

    Falls back to the series :math:`\sum_m A^m\, m!/(2m+1)!` for small ``A``
    where the closed form is 0/0-like.
    """
    if A < 1e-3:
        total, term = 0.0, 1.0
        for m in range(8):
            total += term
            term *= A * (m + 1) / ((2 * m + 2) * (2 * m + 3))
        return total
    return math.sqrt(math.pi / A) * math.exp(A / 4) * erf(math.sqrt(A) / 2)


def log_cosh(x: float) -> float:
    """``log(cosh(x))`` without overflow for large ``|x|``."""
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def sech(x: float) -> float:
    ax = abs(x)
    if ax > 700:
        return 0.0
    e = math.exp(-ax)
    return 2.0 * e / (1.0 + e * e)
