"""Saturating sigmoid families and the window functions built from them.

A kernel here is a nondecreasing function ``sigma`` that is exactly 0 for
``x <= -m`` and exactly 1 for ``x >= m``, together with the window

    xi(x) = sigma(x + m) - sigma(x - m)

which is even, supported on ``[-2m, 2m]``, rises on the negative axis,
falls on the positive axis, and satisfies the two-translate identity
``xi(x) + xi(x - 2m) = 1`` on ``[0, 2m]``.  Windows of this shape are the
building blocks of the quasi-interpolation operators in
:mod:`fif.operators`.

Three families are shipped:

    ============  ==========  =======================================
    family        smoothness  profile on the transition band
    ============  ==========  =======================================
    ramp          C^0         linear
    smoothstep k  C^k         odd-degree polynomial, k flat derivatives
                              at both ends (k = 1 gives 3t^2 - 2t^3)
    bump          C^inf       exp(-1/t) glue, all derivatives flat
    ============  ==========  =======================================

Tabulated or merely continuous profiles are rejected: every family must
supply exact saturation and closed-form derivatives up to its smoothness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

# Sentinel smoothness order for the C^inf family.
UNBOUNDED_ORDER = 10**6

# Inside (0, 1) but closer to the ends than this, exp(-1/t) terms are below
# the subnormal floor; the exact saturation value is returned instead.
_BUMP_TAIL = 1.5e-3

_FAMILIES = ("ramp", "smoothstep", "bump")


@dataclass(frozen=True)
class SigmoidalKernel:
    """A saturating sigmoid with exact flat tails beyond ``[-m, m]``.

    ``order`` is the polynomial smoothness index for the smoothstep family
    and must be 0 for the other families.
    """

    family: str
    order: int = 0
    m: float = 0.5

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown kernel family: {self.family!r}")
        if self.family != "smoothstep" and self.order != 0:
            raise ValueError("order applies to the smoothstep family only")
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        if not (math.isfinite(self.m) and self.m > 0):
            raise ValueError("half-width m must be positive and finite")

    @property
    def smoothness(self) -> int:
        """Largest derivative order available in closed form."""
        if self.family == "bump":
            return UNBOUNDED_ORDER
        if self.family == "smoothstep":
            return self.order
        return 0

    def sigma(self, x):
        return sigma_eval(self, x)

    def xi(self, x):
        return xi_eval(self, x)

    def xi_deriv(self, order, x):
        return xi_derivative(self, order, x)

    def describe(self) -> str:
        if self.family == "smoothstep":
            return f"smoothstep:{self.order}"
        return self.family


def ramp(m: float = 0.5) -> SigmoidalKernel:
    """Piecewise-linear sigmoid; continuous but not differentiable."""
    return SigmoidalKernel("ramp", 0, m)


def smoothstep(order: int, m: float = 0.5) -> SigmoidalKernel:
    """Polynomial sigmoid with ``order`` vanishing derivatives at both ends."""
    return SigmoidalKernel("smoothstep", order, m)


def smooth_bump(m: float = 0.5) -> SigmoidalKernel:
    """Infinitely differentiable sigmoid built from exp(-1/t) glue."""
    return SigmoidalKernel("bump", 0, m)


def kernel_from_name(name: str, m: float = 0.5) -> SigmoidalKernel:
    """Parse ``ramp``, ``smoothstep:<k>`` or ``bump`` into a kernel."""
    base, _, arg = name.partition(":")
    base = base.strip().lower()
    if base == "ramp":
        return ramp(m)
    if base == "smoothstep":
        if not arg:
            raise ValueError("smoothstep needs an order, e.g. smoothstep:1")
        return smoothstep(int(arg), m)
    if base in ("bump", "smoothbump"):
        return smooth_bump(m)
    raise ValueError(f"unknown kernel family: {name!r}")


@lru_cache(maxsize=None)
def _transition_poly(order: int) -> np.polynomial.Polynomial:
    # Unique degree 2k+1 polynomial with p(0)=0, p(1)=1 and k flat
    # derivatives at both ends: the normalized integral of t^k (1-t)^k.
    # Coefficients are assembled exactly in rational arithmetic.
    k = order
    beta = Fraction(math.factorial(k) ** 2, math.factorial(2 * k + 1))
    coeffs = [Fraction(0)] * (2 * k + 2)
    for i in range(k + 1):
        c = Fraction(math.comb(k, i) * (-1) ** i, k + i + 1) / beta
        coeffs[k + i + 1] = c
    return np.polynomial.Polynomial([float(c) for c in coeffs])


@lru_cache(maxsize=None)
def _transition_poly_deriv(order: int, d: int) -> np.polynomial.Polynomial:
    return _transition_poly(order).deriv(d)


@lru_cache(maxsize=None)
def _bump_profile_deriv(d: int):
    # d-th derivative of exp(-1/t) / (exp(-1/t) + exp(-1/(1-t))) on (0, 1),
    # kept in the negative-exponent form so it never overflows on the band
    # where it is evaluated.
    t = sympy.Symbol("t")
    g = sympy.exp(-1 / t)
    h = sympy.exp(-1 / (1 - t))
    expr = sympy.diff(g / (g + h), t, d)
    return sympy.lambdify(t, expr, modules="numpy")


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite input")
    return arr


def _shaped(out, like):
    if np.isscalar(like) or np.ndim(like) == 0:
        return float(out)
    return out


def _sigma_derivative(kernel: SigmoidalKernel, d: int, x):
    """d-th derivative of sigma, exact zeros outside the transition band."""
    arr = _as_array(x)
    m = kernel.m
    t = (arr + m) / (2.0 * m)
    out = np.zeros_like(t)
    if kernel.family == "bump":
        inner = (t > _BUMP_TAIL) & (t < 1.0 - _BUMP_TAIL)
        if np.any(inner):
            vals = _bump_profile_deriv(d)(t[inner])
            out[inner] = np.asarray(vals, dtype=float) / (2.0 * m) ** d
    else:
        poly = _transition_poly_deriv(kernel.order, d)
        inner = (t > 0.0) & (t < 1.0)
        if np.any(inner):
            out[inner] = poly(t[inner]) / (2.0 * m) ** d
    return out


def sigma_eval(kernel: SigmoidalKernel, x):
    """Evaluate the sigmoid.  Saturation is exact: 0 below -m, 1 above m."""
    arr = _as_array(x)
    m = kernel.m
    t = (arr + m) / (2.0 * m)
    out = np.where(t >= 1.0, 1.0, 0.0)
    if kernel.family == "bump":
        inner = (t > _BUMP_TAIL) & (t < 1.0 - _BUMP_TAIL)
        if np.any(inner):
            out[inner] = np.asarray(_bump_profile_deriv(0)(t[inner]), dtype=float)
        # between the tail cut and the saturation point the true value
        # rounds to 0.0 or 1.0 in double precision already
        out[(t > 0.0) & (t <= _BUMP_TAIL)] = 0.0
        out[(t >= 1.0 - _BUMP_TAIL) & (t < 1.0)] = 1.0
    else:
        inner = (t > 0.0) & (t < 1.0)
        if np.any(inner):
            out[inner] = _transition_poly(kernel.order)(t[inner])
    return _shaped(out, x)


def xi_eval(kernel: SigmoidalKernel, x):
    """Window value sigma(x + m) - sigma(x - m); support is [-2m, 2m]."""
    arr = _as_array(x)
    m = kernel.m
    out = sigma_eval(kernel, arr + m) - sigma_eval(kernel, arr - m)
    return _shaped(out, x)


def xi_derivative(kernel: SigmoidalKernel, order: int, x):
    """Closed-form derivative of the window.

    Parameters
    ----------
    kernel : SigmoidalKernel
    order : int
        Derivative order; 0 returns the window itself.  Orders beyond the
        family's smoothness are refused rather than approximated.
    x : scalar or array
    """
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    if order == 0:
        return xi_eval(kernel, x)
    if order > kernel.smoothness:
        raise ValueError("insufficient kernel smoothness")
    arr = _as_array(x)
    m = kernel.m
    out = _sigma_derivative(kernel, order, arr + m) - _sigma_derivative(
        kernel, order, arr - m
    )
    return _shaped(out, x)
