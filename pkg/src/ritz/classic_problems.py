"""Duffing potential analysis, the Lambert equation via ``z = y**n``, and the
KdV travelling-wave soliton.

KdV sign convention
-------------------
With ``u = p sech(q xi)**2`` and ``s = sech(q xi)``, the reduced equation
``u'' - c u - 3 u**2 = 0`` leaves the residual

    p (4 q**2 - c) s**2 - 3 p (2 q**2 + p) s**4,

which vanishes identically only for ``q = sqrt(c)/2`` and ``p = -2 q**2 = -c/2``.
The stationary point of ``int_0^inf [u'**2/2 + c u**2/2 + u**3] dxi`` over
the same trial lands on the same pair.  The positive amplitude ``+c/2``
solves the equation with the opposite sign of the quadratic term; it is
reported alongside, with its (nonzero) residual.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchCrossing
from .ritz_engine import ActionFunctional, SemiInfinite, TrialFamily, stationary_point
from .specfun import sech

__all__ = [
    "EquilibriumKind",
    "OscillationCenter",
    "DuffingSpec",
    "EquilibriumReport",
    "duffing_potential",
    "duffing_force",
    "duffing_classify",
    "LambertSpec",
    "lambert_solve",
    "lambert_derivatives",
    "lambert_residual",
    "KdvSoliton",
    "kdv_soliton_solve",
    "kdv_residual",
    "kdv_max_residual",
    "kdv_action",
    "kdv_variational",
    "kdv_report",
]


# -- Duffing ----------------------------------------------------------------

class EquilibriumKind(enum.Enum):
    MINIMUM = "minimum"
    MAXIMUM = "maximum"
    UNSTABLE = "unstable"


class OscillationCenter(enum.Enum):
    ORIGIN = "origin"
    LEFT_WELL = "left_well"
    RIGHT_WELL = "right_well"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class DuffingSpec:
    """``u'' - u + epsilon u**3 = 0`` released from rest at ``u = amplitude``."""

    epsilon: float
    amplitude: float

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError("amplitude must be positive")


@dataclass
class EquilibriumReport:
    points: list
    oscillation_center: OscillationCenter
    separatrix: bool = False
    energy: float = 0.0


def duffing_potential(epsilon: float, u: float) -> float:
    return -0.5 * u * u + 0.25 * epsilon * u ** 4


def duffing_force(epsilon: float, u: float) -> float:
    """``-V'(u) = u - epsilon u**3``."""
    return u - epsilon * u ** 3


def duffing_classify(spec: DuffingSpec, sep_tol: float = 1e-12) -> EquilibriumReport:
    """Equilibria of V and the well the motion from ``(A, 0)`` oscillates in.

    For ``epsilon > 0`` the motion encircles the origin iff ``V(A) > 0``,
    i.e. ``epsilon A**2 > 2``; ``V(A) = 0`` is the separatrix.
    """
    eps, A = spec.epsilon, spec.amplitude
    E = duffing_potential(eps, A)
    if eps <= 0:
        return EquilibriumReport([(0.0, EquilibriumKind.UNSTABLE)], OscillationCenter.UNBOUNDED, energy=E)
    w = 1.0 / math.sqrt(eps)
    points = [(-w, EquilibriumKind.MINIMUM), (0.0, EquilibriumKind.MAXIMUM), (w, EquilibriumKind.MINIMUM)]
    margin = 0.5 * eps * A * A - 1.0
    if abs(margin) <= sep_tol:
        return EquilibriumReport(points, OscillationCenter.RIGHT_WELL, separatrix=True, energy=E)
    center = OscillationCenter.ORIGIN if margin > 0 else OscillationCenter.RIGHT_WELL
    return EquilibriumReport(points, center, energy=E)


# -- Lambert ----------------------------------------------------------------

@dataclass(frozen=True)
class LambertSpec:
    """``y'' + (k**2/n) y = (1 - n) y'**2 / y`` with ``y(0) = y0``, ``y'(0) = yp0``."""

    n: float
    k: float
    y0: float
    yp0: float = 0.0

    def __post_init__(self):
        if not self.n > 0:
            raise ValueError("n must be positive")
        if not self.k > 0:
            raise ValueError("k must be positive")
        if not self.y0 > 0:
            raise ValueError("y0 must be positive")


def _z_amplitude_phase(spec: LambertSpec):
    z0 = spec.y0 ** spec.n
    zp0 = spec.n * spec.y0 ** (spec.n - 1) * spec.yp0
    # z = z0 cos(kx) + (zp0/k) sin(kx) = R cos(kx - phi), |phi| < pi/2 since z0 > 0
    return math.hypot(z0, zp0 / spec.k), math.atan2(zp0 / spec.k, z0)


def lambert_solve(spec: LambertSpec, x: float) -> float:
    """``y(x) = z(x)**(1/n)`` where ``z'' + k**2 z = 0``.

    Raises
    ------
    BranchCrossing
        If ``z`` vanishes between 0 and ``x``.
    """
    R, phi = _z_amplitude_phase(spec)
    arg = spec.k * x - phi
    if abs(arg) >= 0.5 * math.pi:
        raise BranchCrossing(
            f"z = y**n reaches zero before x = {x:g}; y leaves the positive branch"
        )
    return (R * math.cos(arg)) ** (1.0 / spec.n)


def lambert_branch_interval(spec: LambertSpec) -> tuple[float, float]:
    """Open interval around 0 on which ``z > 0``."""
    _, phi = _z_amplitude_phase(spec)
    return ((phi - 0.5 * math.pi) / spec.k, (phi + 0.5 * math.pi) / spec.k)


def lambert_derivatives(spec: LambertSpec, x: float) -> tuple[float, float, float]:
    """``(y, y', y'')`` from the transformed solution."""
    R, phi = _z_amplitude_phase(spec)
    n, k = spec.n, spec.k
    y = lambert_solve(spec, x)
    z = y ** n
    zp = -R * k * math.sin(k * x - phi)
    zpp = -k * k * z
    yp = y * zp / (n * z)
    ypp = y * (zpp / (n * z) + (1.0 / n - 1.0) * zp * zp / (n * z * z))
    return y, yp, ypp


def lambert_residual(spec: LambertSpec, y: float, yp: float, ypp: float) -> float:
    return ypp + spec.k ** 2 / spec.n * y - (1 - spec.n) * yp * yp / y


# -- KdV --------------------------------------------------------------------

@dataclass(frozen=True)
class KdvSoliton:
    c: float
    p: float
    q: float

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError("q must be positive")

    def __call__(self, xi):
        return self.p * sech(self.q * xi) ** 2


def kdv_soliton_solve(c: float) -> KdvSoliton:
    """Amplitude and inverse width making the trial exact: ``q = sqrt(c)/2``, ``p = -c/2``.

    The residual is a polynomial in ``s = sech**2``; the ``s`` coefficient
    fixes ``q`` and the ``s**2`` coefficient fixes ``p = -2 q**2``.
    """
    if not c > 0:
        raise ValueError("wave speed must be positive")
    q = 0.5 * math.sqrt(c)
    return KdvSoliton(c, -2.0 * q * q, q)


def kdv_residual(sol: KdvSoliton, xi: float) -> float:
    """``u'' - c u - 3 u**2`` at ``xi``, evaluated analytically."""
    s2 = sech(sol.q * xi) ** 2
    p, q, c = sol.p, sol.q, sol.c
    return p * (4 * q * q - c) * s2 - 3 * p * (2 * q * q + p) * s2 * s2


def kdv_max_residual(sol: KdvSoliton, span: float = 10.0, n: int = 2001) -> float:
    return max(abs(kdv_residual(sol, xi)) for xi in np.linspace(-span, span, n))


def kdv_action(c: float) -> tuple[ActionFunctional, TrialFamily]:
    def density(xi, u, up):
        return 0.5 * up * up + 0.5 * c * u * u + u ** 3

    def u(xi, prm):
        return prm[0] * sech(prm[1] * xi) ** 2

    def du(xi, prm):
        p, q = prm
        return -2.0 * p * q * sech(q * xi) ** 2 * math.tanh(q * xi)

    trial = TrialFamily(u, du, ["p", "q"], probe_interval=(0.0, 5.0), name="sech2")
    # u**2 decays like exp(-4 q xi)
    return ActionFunctional(density, SemiInfinite(lambda prm: 2 * abs(prm[1])), {"c": c}), trial


def kdv_variational(c: float, init=None) -> KdvSoliton:
    """Stationary ``(p, q)`` of the half-line action, found by the Ritz engine."""
    F, T = kdv_action(c)
    init = [-0.4 * c, 0.4 * math.sqrt(c)] if init is None else init
    sp = stationary_point(F, T, init)
    p, q = sp.params
    return KdvSoliton(c, float(p), float(abs(q)))


@dataclass
class KdvReport:
    c: float
    algebraic: KdvSoliton
    variational: KdvSoliton
    residual_algebraic: float
    residual_variational: float
    residual_positive_p: float
    notes: list = field(default_factory=list)


def kdv_report(c: float) -> KdvReport:
    """Both routes to ``(p, q)`` plus the residual of the ``p = +c/2`` convention."""
    alg = kdv_soliton_solve(c)
    var = kdv_variational(c)
    pos = KdvSoliton(c, -alg.p, alg.q)
    rep = KdvReport(c, alg, var, kdv_max_residual(alg), kdv_max_residual(var), kdv_max_residual(pos))
    rep.notes.append(
        f"p = {alg.p:.10g} (= -c/2) solves u'' - c u - 3 u^2 = 0; "
        f"p = +c/2 leaves max residual {rep.residual_positive_p:.3g}"
    )
    return rep
