import math
import warnings

import numpy as np
import pytest

from fif.errors import InvalidConfig
from fif.kernels import ramp, smooth_bump, smoothstep, xi_eval
from fif.operators import (
    FunctionInput,
    OperatorConfig,
    nn_eval,
    nn_eval_derivative,
    nn_eval_four_layer,
    operator_fd_fallback,
)

FAMILIES = [ramp(), smoothstep(1), smooth_bump()]


def brute_sum(cfg, values, x):
    """Reference evaluation: loop over every node, no support shortcuts."""
    total = 0.0
    for k in range(cfg.n + 1):
        a_k = cfg.a + k * cfg.h
        total += values[k] * xi_eval(cfg.kernel, (2 * cfg.kernel.m / cfg.h) * (x - a_k))
    return total


@pytest.mark.parametrize("kernel", FAMILIES, ids=lambda k: k.describe())
@pytest.mark.parametrize("n", [8, 64])
def test_reproduces_node_values(kernel, n):
    cfg = OperatorConfig(kernel, 0.0, 1.0, n)
    for fn in (np.sin, np.exp, lambda x: np.abs(x - 0.3) ** 0.5):
        f = FunctionInput.analytic(fn)
        got = nn_eval(cfg, f, cfg.nodes)
        assert np.max(np.abs(got - fn(cfg.nodes))) <= 1e-12


def test_constant_against_brute_force():
    cfg = OperatorConfig(smoothstep(1), -1.0, 2.0, 24)
    f = FunctionInput.analytic(lambda x: np.full_like(np.asarray(x, dtype=float), 7.0))
    rng = np.random.default_rng(7)
    xs = rng.uniform(-1.0, 2.0, 10**3)
    vals = np.full(cfg.n + 1, 7.0)
    got = nn_eval(cfg, f, xs)
    for x, g in zip(xs, got):
        assert abs(brute_sum(cfg, vals, x) - 7.0) <= 1e-12
        assert abs(g - 7.0) <= 1e-12


def test_matches_brute_force_on_arbitrary_data():
    cfg = OperatorConfig(ramp(), 0.0, 1.0, 16)
    rng = np.random.default_rng(3)
    vals = rng.standard_normal(cfg.n + 1)
    f = FunctionInput.tabulated(vals)
    xs = rng.uniform(0.0, 1.0, 200)
    got = nn_eval(cfg, f, xs)
    want = np.array([brute_sum(cfg, vals, x) for x in xs])
    assert np.max(np.abs(got - want)) <= 1e-12


def test_zero_layer_four_layer_is_bitwise_plain():
    cfg = OperatorConfig(smoothstep(2), 0.0, np.pi, 32, r=0)
    f = FunctionInput.analytic(np.sin, (np.cos,))
    x = np.linspace(0.0, np.pi, 1117)
    assert np.array_equal(nn_eval_four_layer(cfg, f, x), nn_eval(cfg, f, x))


def test_four_layer_quadratic_against_double_sum():
    # f(x) = x^2 with its exact derivative ladder, summed longhand
    cfg = OperatorConfig(smoothstep(2), 0.0, 1.0, 16, r=2)
    f = FunctionInput.analytic(
        lambda x: np.asarray(x) ** 2,
        (lambda x: 2.0 * np.asarray(x), lambda x: np.full_like(np.asarray(x, dtype=float), 2.0)),
    )
    derivs = [lambda t: t**2, lambda t: 2 * t, lambda t: 2.0]
    x = 0.3
    two_m = 2 * cfg.kernel.m
    u = (x - cfg.a) / cfg.h
    total = 0.0
    for j in range(cfg.r + 1):
        for k in range(cfg.n + 1):
            a_k = cfg.a + k * cfg.h
            weight = cfg.h**j / (two_m**j * math.factorial(j))
            uu = two_m * (u - k)
            total += weight * derivs[j](a_k) * uu**j * xi_eval(cfg.kernel, uu)
    assert abs(nn_eval_four_layer(cfg, f, x) - total) <= 1e-12


def test_four_layer_reproduces_derivative_data_at_nodes():
    cfg = OperatorConfig(smoothstep(2), 0.0, 1.0, 16, r=2)
    f = FunctionInput.analytic(np.sin, (np.cos, lambda x: -np.sin(x)))
    d1 = nn_eval_derivative(cfg, f, 1, cfg.nodes)
    d2 = nn_eval_derivative(cfg, f, 2, cfg.nodes)
    assert np.max(np.abs(d1 - np.cos(cfg.nodes))) <= 1e-10
    assert np.max(np.abs(d2 + np.sin(cfg.nodes))) <= 1e-10


def test_derivative_against_difference_quotient():
    cfg = OperatorConfig(smoothstep(3), 0.0, 1.0, 16, r=2)
    f = FunctionInput.analytic(np.sin, (np.cos, lambda x: -np.sin(x)))
    rng = np.random.default_rng(11)
    xs = rng.uniform(cfg.h / 10, 1.0 - cfg.h / 10, 100)
    s = 1e-6 * cfg.h
    for order in (1, 2):
        below = nn_eval_four_layer if order == 1 else lambda c, g, x: nn_eval_derivative(c, g, 1, x)
        fd = (below(cfg, f, xs + s) - below(cfg, f, xs - s)) / (2 * s)
        exact = nn_eval_derivative(cfg, f, order, xs)
        scale = np.max(np.abs(exact))
        assert np.max(np.abs(fd - exact)) <= 1e-4 * scale


def test_locality_of_node_perturbation():
    cfg = OperatorConfig(smoothstep(1), 0.0, 1.0, 32)
    rng = np.random.default_rng(5)
    vals = rng.standard_normal(cfg.n + 1)
    bumped = vals.copy()
    k = 17
    bumped[k] += 1.0
    xs = np.linspace(0.0, 1.0, 2001)
    diff = nn_eval(cfg, FunctionInput.tabulated(bumped), xs) - nn_eval(
        cfg, FunctionInput.tabulated(vals), xs
    )
    a_k = cfg.nodes[k]
    outside = (xs <= a_k - cfg.h) | (xs >= a_k + cfg.h)
    assert np.max(np.abs(diff[outside])) == 0.0
    assert np.max(np.abs(diff[~outside])) > 0.1


def test_error_decreases_with_node_count():
    probe = np.linspace(0.0, np.pi, 10**3)
    truth = np.sin(probe)
    errs = []
    for n in (4, 8, 16, 32, 64):
        cfg = OperatorConfig(ramp(), 0.0, np.pi, n)
        errs.append(np.max(np.abs(nn_eval(cfg, FunctionInput.analytic(np.sin), probe) - truth)))
    assert all(e1 < e0 for e0, e1 in zip(errs, errs[1:]))


def test_domain_and_input_validation():
    cfg = OperatorConfig(ramp(), 0.0, 1.0, 8)
    f = FunctionInput.analytic(np.sin)
    with pytest.raises(ValueError, match="outside domain"):
        nn_eval(cfg, f, 1.5)
    with pytest.raises(ValueError, match="non-finite"):
        nn_eval(cfg, f, np.nan)
    with pytest.raises(InvalidConfig):
        OperatorConfig(ramp(), 1.0, 0.0, 8)
    with pytest.raises(InvalidConfig):
        OperatorConfig(ramp(), 0.0, 1.0, 0)
    with pytest.raises(InvalidConfig, match="insufficient kernel smoothness"):
        OperatorConfig(ramp(), 0.0, 1.0, 8, r=2)


def test_derivative_order_bounds():
    cfg = OperatorConfig(smoothstep(2), 0.0, 1.0, 8, r=1)
    f = FunctionInput.analytic(np.sin, (np.cos,))
    with pytest.raises(InvalidConfig, match="exceeds the layer order"):
        nn_eval_derivative(cfg, f, 2, 0.5)
    with pytest.raises(InvalidConfig):
        nn_eval_derivative(cfg, f, 0, 0.5)


def test_tabulated_input_cannot_feed_derivative_layers():
    cfg = OperatorConfig(smoothstep(1), 0.0, 1.0, 8, r=1)
    f = FunctionInput.tabulated(np.linspace(0.0, 1.0, 9))
    with pytest.raises(InvalidConfig, match="derivatives unavailable"):
        nn_eval_four_layer(cfg, f, 0.5)


def test_partial_derivative_ladder_rejected():
    cfg = OperatorConfig(smoothstep(2), 0.0, 1.0, 8, r=2)
    f = FunctionInput.analytic(np.sin, (np.cos,))  # one callable, two needed
    with pytest.raises(InvalidConfig, match="derivatives unavailable"):
        nn_eval_four_layer(cfg, f, 0.5)


def test_difference_fallback_warns_and_is_flagged():
    cfg = OperatorConfig(smoothstep(1), 0.0, 1.0, 8, r=1)
    f = FunctionInput.analytic(np.sin)  # no derivative callables at all
    with pytest.warns(UserWarning, match="central differences"):
        got = nn_eval_four_layer(cfg, f, 0.4)
    assert operator_fd_fallback(cfg, f)
    exact = nn_eval_four_layer(
        cfg, FunctionInput.analytic(np.sin, (np.cos,)), 0.4
    )
    assert abs(got - exact) <= 1e-6


def test_tabulated_length_checked():
    cfg = OperatorConfig(ramp(), 0.0, 1.0, 8)
    with pytest.raises(InvalidConfig, match="operator needs"):
        nn_eval(cfg, FunctionInput.tabulated(np.zeros(5)), 0.5)


def test_scalar_input_gives_float():
    cfg = OperatorConfig(ramp(), 0.0, 1.0, 8)
    out = nn_eval(cfg, FunctionInput.analytic(np.sin), 0.37)
    assert isinstance(out, float)
