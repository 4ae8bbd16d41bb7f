"""Named target functions for the command line and the demos."""

from __future__ import annotations

import numpy as np

from .errors import InvalidConfig
from .operators import FunctionInput

_SIN_CYCLE = (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin)
_COS_CYCLE = (lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin, np.cos)


def _poly_input(coeffs, max_derivative):
    p = np.polynomial.Polynomial(coeffs)
    derivs = []
    q = p
    for _ in range(max_derivative):
        q = q.deriv()
        derivs.append(q)
    return FunctionInput.analytic(p, derivs)


def _weier_like(x):
    # finite rough sum: geometric amplitudes against tripling frequencies
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for j in range(16):
        out += 0.55**j * np.cos(3**j * np.pi * x)
    return out


def make_function(name: str, max_derivative: int = 8) -> FunctionInput:
    """Build a FunctionInput from a registry spec string.

    Known forms: ``sin``, ``cos``, ``exp``, ``poly:c0,c1,...`` (ascending
    coefficients), ``abspow:c,mu`` for |x - c|^mu, ``weier`` for a rough
    demonstration sum.  Table files are handled by the CLI, not here.
    """
    base, _, arg = name.strip().partition(":")
    base = base.lower()
    if base == "sin":
        return FunctionInput.analytic(
            np.sin, tuple(_SIN_CYCLE[j % 4] for j in range(max_derivative))
        )
    if base == "cos":
        return FunctionInput.analytic(
            np.cos, tuple(_COS_CYCLE[j % 4] for j in range(max_derivative))
        )
    if base == "exp":
        return FunctionInput.analytic(np.exp, (np.exp,) * max_derivative)
    if base == "poly":
        try:
            coeffs = [float(c) for c in arg.split(",") if c.strip()]
        except ValueError as exc:
            raise InvalidConfig(f"bad poly coefficients: {arg!r}") from exc
        if not coeffs:
            raise InvalidConfig("poly needs coefficients, e.g. poly:0,1,-2")
        return _poly_input(coeffs, max_derivative)
    if base == "abspow":
        parts = arg.split(",")
        if len(parts) != 2:
            raise InvalidConfig("abspow needs two arguments: abspow:c,mu")
        try:
            c, mu = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise InvalidConfig(f"bad abspow arguments: {arg!r}") from exc
        if not 0 < mu <= 1:
            raise InvalidConfig("abspow exponent must lie in (0, 1]")
        return FunctionInput.analytic(lambda x: np.abs(np.asarray(x) - c) ** mu)
    if base == "weier":
        return FunctionInput.analytic(_weier_like)
    raise InvalidConfig(f"unknown function: {name!r}")


def list_functions():
    return ("sin", "cos", "exp", "poly:<c0,c1,...>", "abspow:<c,mu>", "weier")
