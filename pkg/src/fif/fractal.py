"""Self-referential interpolants driven by quasi-interpolation heights.

A problem couples an interval partition, one vertical scaling per
subinterval, and a quasi-interpolation operator.  The solution is the
unique bounded function fixing

    phi(x) = alpha_i(p) * phi(p) + height(x) - alpha_i(p) * base(p),

where ``p`` is the pre-image of ``x`` under the affine contraction onto
subinterval ``i``.  Three variants differ only in what plays the roles of
``height`` and ``base``:

    alpha     height = f itself,            base = zeroth-order operator
    discrete  height = operator on knots,   base = operator on its nodes
              (f is touched only at node locations)
    smooth    height = f itself,            base = four-layer operator;
              derivative levels get their own fixed-point equations

Solving is plain Picard iteration on a dense uniform grid, stopping when
one sweep moves the iterate by at most ``tol * (1 - contraction)``, which
leaves the iterate within ``tol`` of the fixed point in sup norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CrossCheckError,
    InvalidConfig,
    MatchingConditionError,
    NonConvergence,
)
from .maps import Partition, ScalingVector
from .operators import (
    FunctionInput,
    OperatorConfig,
    input_derivative,
    nn_eval,
    nn_eval_derivative,
    nn_eval_four_layer,
    operator_fd_fallback,
)
from .sampled import SampledFunction

VARIANTS = ("alpha", "discrete", "smooth")

DEFAULT_TOL = 1e-9
DEFAULT_MAX_SWEEPS = 1000
MATCHING_TOL = 1e-8


class FifProblem:
    """Partition + scalings + operator + target function, with a variant tag."""

    __slots__ = ("partition", "scaling", "operator", "f", "variant")

    def __init__(self, partition, scaling, operator, f, variant="alpha"):
        if variant not in VARIANTS:
            raise InvalidConfig(f"unknown variant: {variant!r}")
        if scaling.size != partition.size:
            raise InvalidConfig("scaling count must match subinterval count")
        span = partition.b - partition.a
        if (
            abs(operator.a - partition.a) > 1e-12 * span
            or abs(operator.b - partition.b) > 1e-12 * span
        ):
            raise InvalidConfig("operator interval must match the partition")
        if variant == "alpha":
            if f.mode != "analytic":
                raise InvalidConfig("this variant needs an analytic function input")
        elif variant == "discrete":
            if not partition.is_uniform:
                raise InvalidConfig("uniform partition required")
            if f.mode == "tabulated":
                if f.values.size != partition.size + 1:
                    raise InvalidConfig("knot table must have N + 1 values")
                if partition.size % operator.n != 0:
                    raise InvalidConfig(
                        "operator nodes must sit on knots (n must divide N)"
                    )
        else:  # smooth
            if not partition.is_uniform:
                raise InvalidConfig("uniform partition required")
            if f.mode != "analytic":
                raise InvalidConfig("this variant needs an analytic function input")
            consts = np.abs(scaling.constants())
            if not np.all(consts < partition.slopes**operator.r):
                raise InvalidConfig(
                    "need |alpha_i| < slope_i^r for an order-r construction"
                )
        self.partition = partition
        self.scaling = scaling
        self.operator = operator
        self.f = f
        self.variant = variant

    @classmethod
    def alpha_fractal(cls, partition, scaling, operator, f):
        return cls(partition, scaling, operator, f, "alpha")

    @classmethod
    def discrete(cls, partition, scaling, operator, f):
        return cls(partition, scaling, operator, f, "discrete")

    @classmethod
    def smooth(cls, partition, scaling, operator, f):
        return cls(partition, scaling, operator, f, "smooth")


@dataclass
class FifResult:
    """Converged render plus the evidence that it converged."""

    grid: np.ndarray
    values: np.ndarray
    residual: float
    iterations: int
    grid_slack: float
    y_min: float
    y_max: float
    base: np.ndarray
    height: np.ndarray
    derivatives: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    problem: FifProblem | None = None

    def sampled(self) -> SampledFunction:
        return SampledFunction(float(self.grid[0]), float(self.grid[-1]), self.values)


class _NodeGuard:
    """Callable wrapper asserting evaluation happens only on allowed points."""

    def __init__(self, func, allowed, span):
        self.func = func
        self.allowed = np.sort(np.unique(np.asarray(allowed, dtype=float)))
        self.tol = 1e-9 * span

    def __call__(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        pos = np.searchsorted(self.allowed, arr)
        pos = np.clip(pos, 1, self.allowed.size - 1)
        near = np.minimum(
            np.abs(arr - self.allowed[pos - 1]), np.abs(arr - self.allowed[pos])
        )
        assert np.all(near <= self.tol), "function evaluated away from its node grid"
        return self.func(x)


class _Pieces:
    """Variant-resolved height/base evaluators and endpoint data."""

    __slots__ = ("base_eval", "height_eval", "beta1", "beta2", "fd_used")

    def __init__(self, base_eval, height_eval, beta1, beta2, fd_used):
        self.base_eval = base_eval
        self.height_eval = height_eval
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.fd_used = fd_used


def _assemble(problem: FifProblem) -> _Pieces:
    part = problem.partition
    cfg = problem.operator
    f = problem.f
    if problem.variant == "alpha":
        return _Pieces(
            lambda xs: nn_eval(cfg, f, xs),
            lambda xs: f(xs),
            f(part.a),
            f(part.b),
            False,
        )
    if problem.variant == "smooth":
        return _Pieces(
            lambda xs: nn_eval_four_layer(cfg, f, xs),
            lambda xs: f(xs),
            f(part.a),
            f(part.b),
            operator_fd_fallback(cfg, f),
        )
    # discrete: both height and base are operator evaluations of node data
    height_cfg = OperatorConfig(cfg.kernel, cfg.a, cfg.b, part.size)
    if f.mode == "tabulated":
        knot_vals = f.values
        stride = part.size // cfg.n
        base_vals = knot_vals[::stride]
    else:
        guarded = _NodeGuard(
            f.func, np.concatenate([part.knots, cfg.nodes]), part.b - part.a
        )
        knot_vals = np.asarray(guarded(part.knots), dtype=float)
        base_vals = np.asarray(guarded(cfg.nodes), dtype=float)
    f_height = FunctionInput.tabulated(knot_vals)
    f_base = FunctionInput.tabulated(base_vals)
    return _Pieces(
        lambda xs: nn_eval(cfg, f_base, xs),
        lambda xs: nn_eval(height_cfg, f_height, xs),
        knot_vals[0],
        knot_vals[-1],
        False,
    )


class _SweepPlan:
    """One precomputed pass of the self-referential update on a fixed grid."""

    __slots__ = (
        "x",
        "coeff",
        "offset",
        "j",
        "w",
        "w_snap_err",
        "beta1",
        "beta2",
        "contraction",
        "i_idx",
        "pre",
    )

    def __init__(self, problem, cells, pieces, coeff, offset, beta1, beta2, contraction):
        part = problem.partition
        x = np.linspace(part.a, part.b, cells + 1)
        i_idx = part.locate(x)
        pre = np.clip(part.inverse(i_idx, x), part.a, part.b)
        step = (part.b - part.a) / cells
        jf = (pre - part.a) / step
        near = np.round(jf)
        snapped = np.abs(jf - near) <= 1e-9
        self.w_snap_err = np.where(snapped, np.abs(jf - near), 0.0)
        jf = np.where(snapped, near, jf)
        j = np.floor(jf).astype(np.int64)
        j = np.minimum(j, cells - 1)
        self.x = x
        self.i_idx = i_idx
        self.pre = pre
        self.j = j
        self.w = jf - j
        self.coeff = coeff
        self.offset = offset
        self.beta1 = beta1
        self.beta2 = beta2
        self.contraction = contraction

    def interpolate(self, values):
        return values[self.j] * (1.0 - self.w) + values[self.j + 1] * self.w

    def apply(self, values):
        out = self.coeff * self.interpolate(values) + self.offset
        out[0] = self.beta1
        out[-1] = self.beta2
        return out

    def slack_estimate(self, values):
        d2 = np.zeros_like(values)
        d2[1:-1] = np.abs(values[2:] - 2.0 * values[1:-1] + values[:-2])
        local = np.maximum(d2[self.j], d2[np.minimum(self.j + 1, values.size - 1)])
        curve = 0.5 * self.w * (1.0 - self.w) * local
        snap = self.w_snap_err * np.abs(values[self.j + 1] - values[self.j])
        return float(np.max(np.abs(self.coeff) * (curve + snap)))


def _validate_cells(problem, cells):
    n_sub = problem.partition.size
    if cells is None:
        return n_sub * 1024
    cells = int(cells)
    q, rem = divmod(cells, n_sub)
    if rem != 0 or q < 16 or q & (q - 1):
        raise InvalidConfig(
            "grid cells must be a power-of-two multiple of the subinterval "
            "count, at least 16 per subinterval"
        )
    return cells


def _build_plan(problem, cells, pieces):
    part = problem.partition
    x = np.linspace(part.a, part.b, cells + 1)
    i_idx = part.locate(x)
    pre = np.clip(part.inverse(i_idx, x), part.a, part.b)
    coeff = problem.scaling.values_at(i_idx, pre)
    offset = pieces.height_eval(x) - coeff * pieces.base_eval(pre)
    return _SweepPlan(
        problem,
        cells,
        pieces,
        coeff,
        offset,
        pieces.beta1,
        pieces.beta2,
        problem.scaling.sup_norm,
    )


def _picard(plan, start, tol, max_sweeps):
    threshold = tol * (1.0 - plan.contraction)
    phi = start
    for sweep in range(1, max_sweeps + 1):
        nxt = plan.apply(phi)
        change = float(np.max(np.abs(nxt - phi)))
        phi = nxt
        if change <= threshold:
            return phi, sweep
    residual = float(np.max(np.abs(plan.apply(phi) - phi)))
    raise NonConvergence(
        f"no convergence in {max_sweeps} sweeps (last residual {residual:.3e})",
        values=phi,
        residual=residual,
        iterations=max_sweeps,
    )


def _knot_checks(problem, plan, pieces, values, tol_knot=1e-9):
    """Continuity across subinterval junctions and knot reproduction."""
    part = problem.partition
    span = part.b - part.a
    step = span / (values.size - 1)
    scale = max(1.0, float(np.max(np.abs(values))))
    base_at_a = float(pieces.base_eval(np.asarray([part.a]))[0])
    cont_max = 0.0
    knot_max = 0.0
    knot_data = [pieces.beta1] + [
        float(pieces.height_eval(np.asarray([k]))[0]) for k in part.knots[1:-1]
    ] + [pieces.beta2]
    for i in range(1, part.size):
        knot = float(part.knots[i])
        g = round((knot - part.a) / step)
        if abs(plan.x[g] - knot) > 1e-9 * span:
            continue
        alpha_r = float(
            problem.scaling.values_at(np.asarray([i + 1]), np.asarray([part.a]))[0]
        )
        right = alpha_r * values[0] + float(
            pieces.height_eval(np.asarray([knot]))[0]
        ) - alpha_r * base_at_a
        cont_max = max(cont_max, abs(float(values[g]) - right))
        knot_max = max(knot_max, abs(float(values[g]) - knot_data[i]))
    if cont_max > tol_knot * scale:
        raise CrossCheckError(
            f"junction continuity check failed: mismatch {cont_max:.3e}"
        )
    return cont_max, knot_max


def _solve_core(problem, cells, tol, max_sweeps):
    cells = _validate_cells(problem, cells)
    if not tol > 0:
        raise InvalidConfig("tolerance must be positive")
    pieces = _assemble(problem)
    plan = _build_plan(problem, cells, pieces)
    height = pieces.height_eval(plan.x)
    start = height.copy()
    start[0] = pieces.beta1
    start[-1] = pieces.beta2
    values, sweeps = _picard(plan, start, tol, max_sweeps)
    residual = float(np.max(np.abs(plan.apply(values) - values)))
    cont_max, knot_max = _knot_checks(problem, plan, pieces, values)
    contraction = plan.contraction
    predicted = (
        math.ceil(math.log(tol) / math.log(contraction)) if contraction > 0 else 1
    )
    diagnostics = {
        "variant": problem.variant,
        "cells": cells,
        "tol": tol,
        "contraction": contraction,
        "predicted_sweeps": predicted,
        "junction_mismatch": cont_max,
        "knot_deviation": knot_max,
        "fd_fallback": pieces.fd_used,
    }
    result = FifResult(
        grid=plan.x,
        values=values,
        residual=residual,
        iterations=sweeps,
        grid_slack=plan.slack_estimate(values),
        y_min=float(np.min(values)),
        y_max=float(np.max(values)),
        base=pieces.base_eval(plan.x),
        height=height,
        diagnostics=diagnostics,
        problem=problem,
    )
    return result, plan, pieces


def solve_fif(problem: FifProblem, cells=None, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Render the fixed point of the basic construction on a dense grid."""
    if problem.variant != "alpha":
        raise InvalidConfig("solve_fif handles the alpha variant; see the others")
    result, _, _ = _solve_core(problem, cells, tol, max_sweeps)
    return result


def solve_fif_discrete(problem: FifProblem, cells=None, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Render the node-data-only construction (f is never read off-node)."""
    if problem.variant != "discrete":
        raise InvalidConfig("solve_fif_discrete needs a discrete-variant problem")
    result, _, _ = _solve_core(problem, cells, tol, max_sweeps)
    result.diagnostics["height_nodes"] = problem.partition.size
    return result


def solve_fif_smooth(problem: FifProblem, cells=None, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS, matching_tol=MATCHING_TOL):
    """Render an order-r construction along with its derivative levels.

    For each derivative order the junction data of consecutive maps must
    agree (the Barnsley-Harrington compatibility conditions); violations
    abort the solve since they signal a kernel-smoothness or
    derivative-data defect.
    """
    if problem.variant != "smooth":
        raise InvalidConfig("solve_fif_smooth needs a smooth-variant problem")
    part = problem.partition
    cfg = problem.operator
    alphas = problem.scaling.constants()
    slopes = part.slopes
    fd_step = cfg.h * 1e-3

    # Junction data per derivative order, checked before any solving.
    endpoint_values = {}
    endpoint_identity = {}
    matching_residuals = {}
    for k in range(1, cfg.r + 1):
        fk_knots, _ = input_derivative(problem.f, k, part.knots, fd_step)
        s_a = nn_eval_derivative(cfg, problem.f, k, part.a)
        s_b = nn_eval_derivative(cfg, problem.f, k, part.b)
        q_at_a = slopes**k * fk_knots[:-1] - alphas * s_a
        q_at_b = slopes**k * fk_knots[1:] - alphas * s_b
        y0 = q_at_a[0] / (slopes[0] ** k - alphas[0])
        y1 = q_at_b[-1] / (slopes[-1] ** k - alphas[-1])
        worst = 0.0
        for i in range(1, part.size):
            lhs = (alphas[i - 1] * y1 + q_at_b[i - 1]) / slopes[i - 1] ** k
            rhs = (alphas[i] * y0 + q_at_a[i]) / slopes[i] ** k
            worst = max(worst, abs(lhs - rhs))
            if abs(lhs - rhs) > matching_tol:
                raise MatchingConditionError(
                    f"junction data mismatch {abs(lhs - rhs):.3e} at "
                    f"subinterval {i + 1}, derivative order {k}"
                )
        matching_residuals[k] = float(worst)
        endpoint_values[k] = (float(y0), float(y1))
        endpoint_identity[k] = (
            float(abs(y0 - fk_knots[0])),
            float(abs(y1 - fk_knots[-1])),
        )

    result, plan, pieces = _solve_core(problem, cells, tol, max_sweeps)
    x = plan.x
    i0 = plan.i_idx - 1
    per_order = {}
    fd_any = result.diagnostics["fd_fallback"]
    for k in range(1, cfg.r + 1):
        coeff_k = alphas[i0] / slopes[i0] ** k
        contraction_k = float(np.max(np.abs(alphas) / slopes**k))
        fk_x, fd = input_derivative(problem.f, k, x, fd_step)
        fd_any = fd_any or fd
        s_k_pre = nn_eval_derivative(cfg, problem.f, k, plan.pre)
        deriv_plan = _SweepPlan.__new__(_SweepPlan)
        for name in ("x", "i_idx", "pre", "j", "w", "w_snap_err"):
            setattr(deriv_plan, name, getattr(plan, name))
        deriv_plan.coeff = coeff_k
        deriv_plan.offset = fk_x - coeff_k * s_k_pre
        deriv_plan.beta1, deriv_plan.beta2 = endpoint_values[k]
        deriv_plan.contraction = contraction_k
        start = fk_x.copy()
        start[0], start[-1] = endpoint_values[k]
        dvals, dsweeps = _picard(deriv_plan, start, tol, max_sweeps)
        dres = float(np.max(np.abs(deriv_plan.apply(dvals) - dvals)))
        result.derivatives[k] = dvals
        per_order[k] = {
            "iterations": dsweeps,
            "residual": dres,
            "contraction": contraction_k,
            "matching_residual": matching_residuals[k],
            "endpoint_values": endpoint_values[k],
            "endpoint_identity_gap": endpoint_identity[k],
        }
    result.diagnostics["derivative_levels"] = per_order
    result.diagnostics["fd_fallback"] = fd_any
    return result


def rb_apply(problem: FifProblem, phi: SampledFunction) -> SampledFunction:
    """One sweep of the self-referential update applied to ``phi``.

    ``phi`` must share the problem interval and match the endpoint data;
    anything else is outside the function class the update acts on.
    """
    part = problem.partition
    span = part.b - part.a
    if abs(phi.a - part.a) > 1e-12 * span or abs(phi.b - part.b) > 1e-12 * span:
        raise InvalidConfig("sampled function must live on the problem interval")
    pieces = _assemble(problem)
    scale = max(1.0, abs(pieces.beta1), abs(pieces.beta2))
    if (
        abs(float(phi.values[0]) - pieces.beta1) > 1e-9 * scale
        or abs(float(phi.values[-1]) - pieces.beta2) > 1e-9 * scale
    ):
        raise InvalidConfig(
            "phi is not in the endpoint-matching class X_{beta1}^{beta2}"
        )
    plan = _build_plan(problem, phi.cells, pieces)
    return SampledFunction(part.a, part.b, plan.apply(phi.values.copy()))


def chaos_game_render(problem: FifProblem, point_count: int, seed: int, burn_in: int = 100):
    """Random-orbit render: returns ``(x, y)`` arrays of ``point_count`` points.

    The orbit starts at the left interpolation point, picks maps uniformly
    from a seeded generator, and discards ``burn_in`` initial steps.
    """
    if point_count < 1000:
        raise InvalidConfig("need at least 1000 points")
    part = problem.partition
    pieces = _assemble(problem)
    total = burn_in + int(point_count)
    rng = np.random.default_rng(seed)
    idx = rng.integers(1, part.size + 1, size=total)
    slopes = [float(s) for s in part.slopes]
    intercepts = [float(c) for c in part.intercepts]
    xs = np.empty(total + 1)
    xs[0] = part.a
    cur = part.a
    for t in range(total):
        k = idx[t] - 1
        cur = slopes[k] * cur + intercepts[k]
        xs[t + 1] = cur
    np.clip(xs, part.a, part.b, out=xs)
    alpha_t = problem.scaling.values_at(idx, xs[:-1])
    shift = pieces.height_eval(xs[1:]) - alpha_t * pieces.base_eval(xs[:-1])
    ys = np.empty(total + 1)
    ys[0] = pieces.beta1
    y = pieces.beta1
    for t in range(total):
        y = alpha_t[t] * y + shift[t]
        ys[t + 1] = y
    return xs[burn_in + 1 :], ys[burn_in + 1 :]
