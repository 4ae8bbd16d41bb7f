"""Command line front end.

Commands: build, converge, dimension, smooth, holder, bounds.  All file
output is deterministic for a fixed config and seed: CSV cells carry 17
significant digits, JSON is sorted, and nothing timestamps itself.
Exit codes: 0 success, 2 invalid configuration, 3 solver non-convergence,
4 failed cross-check.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import (
    box_counting_dimension,
    error_bound_alpha,
    error_bound_discrete,
    holder_seminorm,
    HolderParams,
    knot_data_collinear,
    modulus_of_continuity,
    theoretical_box_dimension,
)
from .errors import (
    CrossCheckError,
    InvalidConfig,
    MatchingConditionError,
    NonConvergence,
)
from .fractal import FifProblem, chaos_game_render, solve_fif, solve_fif_discrete, solve_fif_smooth
from .kernels import kernel_from_name
from .maps import Partition, ScalingVector
from .operators import FunctionInput, OperatorConfig, nn_eval
from .registry import make_function
from .sampled import SampledFunction


@dataclass
class RunConfig:
    function: str = "sin"
    interval: tuple = (0.0, 1.0)
    subintervals: int = 4
    nodes: int = 32
    order: int = 1
    alpha: str = "0.3"
    kernel: str = "ramp"
    m: float = 0.5
    grid_exp: int = 10
    tol: float = 1e-9
    max_iters: int = 1000
    seed: int = 0
    mu: float = 0.5
    n_ladder: str = "8,16,32,64,128"
    discrete: bool = False
    chaos: bool = False
    points: int = 100000
    scales: str = "4..12"

    def cells(self) -> int:
        return self.subintervals * 2**self.grid_exp


def _config_from_args(args) -> RunConfig:
    base = {}
    if args.config:
        with open(args.config) as fh:
            loaded = json.load(fh)
        if isinstance(loaded, dict) and isinstance(loaded.get("config"), dict):
            loaded = loaded["config"]
        known = {f.name for f in dataclasses.fields(RunConfig)}
        unknown = set(loaded) - known
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        base.update(loaded)
    for f in dataclasses.fields(RunConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            base[f.name] = val
    cfg = RunConfig(**base)
    cfg.interval = (float(cfg.interval[0]), float(cfg.interval[1]))
    if not cfg.interval[1] > cfg.interval[0]:
        raise InvalidConfig("interval must satisfy a < b")
    if cfg.grid_exp < 4:
        raise InvalidConfig("grid exponent must be at least 4")
    if cfg.subintervals < 2:
        raise InvalidConfig("need at least 2 subintervals")
    return cfg


def _parse_alpha(cfg: RunConfig):
    spec = cfg.alpha.strip()
    a, b = cfg.interval
    count = cfg.subintervals
    if spec.startswith("linear:"):
        lo, hi = (float(v) for v in spec[len("linear:"):].split(","))
        fn = lambda x: lo + (hi - lo) * (np.asarray(x) - a) / (b - a)
        return ScalingVector([fn] * count, domain=(a, b))
    if spec.startswith("sine:"):
        amp = float(spec[len("sine:"):])
        fn = lambda x: amp * (
            0.55 + 0.45 * np.sin(2 * np.pi * (np.asarray(x) - a) / (b - a))
        )
        return ScalingVector([fn] * count, domain=(a, b))
    try:
        vals = [float(v) for v in spec.split(",")]
    except ValueError as exc:
        raise InvalidConfig(f"cannot parse alpha spec {spec!r}") from exc
    if len(vals) == 1:
        vals = vals * count
    if len(vals) != count:
        raise InvalidConfig("alpha list length must equal the subinterval count")
    return ScalingVector.constant(vals)


def _parse_scales(spec: str):
    lo, _, hi = spec.partition("..")
    try:
        j0, j1 = int(lo), int(hi)
    except ValueError as exc:
        raise InvalidConfig(f"bad scales spec {spec!r}, want e.g. 4..12") from exc
    if j1 < j0:
        raise InvalidConfig("scales range is empty")
    return tuple(2.0**-j for j in range(j0, j1 + 1))


def _load_table(path: str, partition: Partition) -> FunctionInput:
    # a leading header row (as our own CSV outputs carry) is tolerated
    try:
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except OSError as exc:
        raise InvalidConfig(f"cannot read table file: {exc}") from exc
    except ValueError:
        try:
            data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2,
                              skiprows=1)
        except (OSError, ValueError) as exc:
            raise InvalidConfig(
                f"table file must be numeric two-column CSV: {exc}"
            ) from exc
    if data.ndim != 2 or data.shape[1] != 2:
        raise InvalidConfig("table file must have two columns: x, f(x)")
    xs, vals = data[:, 0], data[:, 1]
    knots = partition.knots
    span = partition.b - partition.a
    if xs.size != knots.size:
        raise InvalidConfig(
            f"table has {xs.size} rows, the knot grid has {knots.size}"
        )
    if float(np.max(np.abs(xs - knots))) > 1e-9 * span:
        raise InvalidConfig("table x values must match the uniform knot grid")
    return FunctionInput.tabulated(vals)


def _build_problem(cfg: RunConfig, smooth=False):
    a, b = cfg.interval
    try:
        kernel = kernel_from_name(cfg.kernel, cfg.m)
    except ValueError as exc:
        raise InvalidConfig(str(exc)) from exc
    partition = Partition.uniform(a, b, cfg.subintervals)
    scaling = _parse_alpha(cfg)
    order = cfg.order if smooth else 0
    operator = OperatorConfig(kernel, a, b, cfg.nodes, order)
    if cfg.function.startswith("table:"):
        f = _load_table(cfg.function[len("table:"):], partition)
        variant = "discrete"
    else:
        f = make_function(cfg.function, max_derivative=max(order, 4))
        variant = "discrete" if cfg.discrete else ("smooth" if smooth else "alpha")
    if smooth and variant != "smooth":
        raise InvalidConfig("smooth runs need an analytic (non-table) function")
    return FifProblem(partition, scaling, operator, f, variant)


def _solve_by_variant(problem, cfg: RunConfig):
    kwargs = dict(cells=cfg.cells(), tol=cfg.tol, max_sweeps=cfg.max_iters)
    if problem.variant == "alpha":
        return solve_fif(problem, **kwargs)
    if problem.variant == "discrete":
        return solve_fif_discrete(problem, **kwargs)
    return solve_fif_smooth(problem, **kwargs)


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _write_csv(path: Path, header, columns):
    rows = len(columns[0])
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(",".join(_fmt(col[i]) for col in columns) + "\n")


def _write_json(path: Path, obj):
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _meta(cfg: RunConfig, results: dict, diagnostics: dict | None = None) -> dict:
    cfg_dict = dataclasses.asdict(cfg)
    cfg_dict["interval"] = list(cfg.interval)
    return {
        "config": cfg_dict,
        "results": results,
        "diagnostics": diagnostics if diagnostics is not None else {},
    }


def cmd_build(cfg: RunConfig, out: Path) -> int:
    problem = _build_problem(cfg)
    res = _solve_by_variant(problem, cfg)
    _write_csv(
        out / "fif.csv",
        ["x", "f", "base", "fif"],
        [res.grid, res.height, res.base, res.values],
    )
    base_gap = float(np.max(np.abs(res.height - res.base)))
    sup = problem.scaling.sup_norm
    results = {
        "residual": res.residual,
        "iterations": res.iterations,
        "grid_slack": res.grid_slack,
        "y_min": res.y_min,
        "y_max": res.y_max,
        "base_gap": base_gap,
        "bound_alpha": error_bound_alpha(sup, base_gap),
        "scaling_sup": sup,
    }
    if problem.variant == "discrete":
        height_fn = SampledFunction(res.grid[0], res.grid[-1], res.height)
        a, b = cfg.interval
        results["bound_discrete"] = error_bound_discrete(
            sup,
            modulus_of_continuity(height_fn, (b - a) / cfg.nodes),
            modulus_of_continuity(height_fn, (b - a) / cfg.subintervals),
        )
    _write_json(out / "meta.json", _meta(cfg, results, _jsonable(res.diagnostics)))
    print(
        f"build: {res.iterations} sweeps, residual {res.residual:.3e}, "
        f"wrote {out / 'fif.csv'} and {out / 'meta.json'}"
    )
    return 0


def cmd_converge(cfg: RunConfig, out: Path) -> int:
    if cfg.function.startswith("table:"):
        raise InvalidConfig("converge needs an analytic function to compare against")
    ladder = _parse_ladder(cfg.n_ladder)
    a, b = cfg.interval
    probe = _build_problem(dataclasses.replace(cfg, nodes=ladder[0]))
    dense = SampledFunction.from_callable(make_function(cfg.function), a, b, 2**17)
    sup_alpha = probe.scaling.sup_norm
    rows_n, rows_sub, errs, bounds = [], [], [], []
    for n in ladder:
        step_cfg = dataclasses.replace(cfg, nodes=n)
        if cfg.discrete:
            step_cfg = dataclasses.replace(step_cfg, subintervals=max(n, 2))
        problem = _build_problem(step_cfg)
        res = _solve_by_variant(problem, step_cfg)
        truth = make_function(cfg.function)(res.grid)
        err = float(np.max(np.abs(res.values - truth)))
        if cfg.discrete:
            bound = error_bound_discrete(
                sup_alpha,
                modulus_of_continuity(dense, (b - a) / n),
                modulus_of_continuity(dense, (b - a) / step_cfg.subintervals),
            )
        else:
            bound = error_bound_alpha(
                sup_alpha, modulus_of_continuity(dense, (b - a) / n)
            )
        rows_n.append(n)
        rows_sub.append(step_cfg.subintervals)
        errs.append(err)
        bounds.append(bound)
        print(f"n={n:5d}  sup_error={err:.6e}  bound={bound:.6e}")
    ratios = [e / b if b > 0 else 0.0 for e, b in zip(errs, bounds)]
    header = ["n", "sup_error", "bound", "ratio"]
    columns = [rows_n, errs, bounds, ratios]
    if cfg.discrete:
        header.insert(1, "N")
        columns.insert(1, rows_sub)
    _write_csv(out / "converge.csv", header, columns)
    _write_json(
        out / "meta.json",
        _meta(cfg, {"n": rows_n, "N": rows_sub, "sup_error": errs, "bound": bounds}),
    )
    decreasing = all(e1 < e0 for e0, e1 in zip(errs, errs[1:]))
    bounded = all(e <= b * (1 + 1e-9) + 1e-12 for e, b in zip(errs, bounds))
    if not (decreasing and bounded):
        print("converge: monotone decrease or bound check failed", file=sys.stderr)
        return 4
    return 0


def cmd_dimension(cfg: RunConfig, out: Path) -> int:
    problem = _build_problem(cfg)
    if cfg.chaos:
        xs, ys = chaos_game_render(problem, cfg.points, cfg.seed)
    else:
        res = _solve_by_variant(problem, cfg)
        xs, ys = res.grid, res.values
    report = box_counting_dimension(xs, ys, _parse_scales(cfg.scales))
    knot_y = _knot_data(problem)
    report.collinear_data = knot_data_collinear(problem.partition.knots, knot_y)
    if report.collinear_data:
        report.notes.append("knot data collinear: closed-form dimension not applicable")
    elif problem.scaling.is_constant and problem.partition.is_uniform:
        report.theoretical_dimension = theoretical_box_dimension(
            problem.scaling, problem.partition.size
        )
        report.kappa = problem.scaling.kappa
    else:
        report.notes.append(
            "closed-form dimension needs constant scalings on uniform knots"
        )
    payload = _meta(cfg, _jsonable(dataclasses.asdict(report)), {"chaos": cfg.chaos})
    _write_json(out / "dimension.json", payload)
    print(
        f"dimension: estimate {report.estimated_dimension:.4f}, "
        f"r^2 {report.r_squared:.5f}, theory "
        f"{report.theoretical_dimension if report.theoretical_dimension is not None else 'n/a'}"
    )
    if report.theoretical_dimension is not None:
        if abs(report.estimated_dimension - report.theoretical_dimension) > 0.15:
            print("dimension: estimate disagrees with closed form", file=sys.stderr)
            return 4
    return 0


def cmd_smooth(cfg: RunConfig, out: Path) -> int:
    if cfg.order < 1:
        raise InvalidConfig("smooth runs need order >= 1")
    problem = _build_problem(cfg, smooth=True)
    res = _solve_by_variant(problem, cfg)
    step = float(res.grid[1] - res.grid[0])
    header = ["x", "fif"]
    columns = [res.grid, res.values]
    prev = res.values
    for k in range(1, cfg.order + 1):
        header.append(f"fif_d{k}")
        columns.append(res.derivatives[k])
        header.append(f"fd_check_d{k}")
        columns.append(_central_diff(prev, step))
        prev = res.derivatives[k]
    _write_csv(out / "smooth.csv", header, columns)
    levels = res.diagnostics.get("derivative_levels", {})
    results = {
        "residual": res.residual,
        "iterations": res.iterations,
        "matching_residuals": {k: v["matching_residual"] for k, v in levels.items()},
    }
    _write_json(
        out / "meta.json", _meta(cfg, results, _jsonable(res.diagnostics))
    )
    print(
        f"smooth: order {cfg.order}, {res.iterations} sweeps, "
        f"residual {res.residual:.3e}"
    )
    return 0


def cmd_holder(cfg: RunConfig, out: Path) -> int:
    ladder = _parse_ladder(cfg.n_ladder)
    probe = _build_problem(dataclasses.replace(cfg, nodes=ladder[0]))
    gate_terms = probe.scaling.sup_norms / probe.partition.slopes**cfg.mu
    worst = int(np.argmax(gate_terms))
    if gate_terms[worst] >= 1.0:
        raise InvalidConfig(
            f"variable-scaling contraction gate failed at subinterval "
            f"{worst + 1}: {gate_terms[worst]:.6f} >= 1"
        )
    params = HolderParams(cfg.mu)
    truth = make_function(cfg.function)
    rows, sups, semis, norms = [], [], [], []
    for n in ladder:
        problem = _build_problem(dataclasses.replace(cfg, nodes=n))
        res = _solve_by_variant(problem, dataclasses.replace(cfg, nodes=n))
        diff = SampledFunction(
            res.grid[0], res.grid[-1], res.values - truth(res.grid)
        ).thin(params.max_points)
        semi = holder_seminorm(diff, params)
        sup = float(np.max(np.abs(diff.values)))
        rows.append(n)
        sups.append(sup)
        semis.append(semi)
        norms.append(max(sup, semi))
        print(f"n={n:5d}  sup={sup:.6e}  seminorm={semi:.6e}")
    _write_csv(
        out / "holder.csv",
        ["n", "sup_error", "holder_seminorm_error", "combined_0mu_error"],
        [rows, sups, semis, norms],
    )
    _write_json(
        out / "meta.json",
        _meta(
            cfg,
            {"n": rows, "sup": sups, "seminorm": semis, "combined": norms},
            {"gate_worst_term": float(gate_terms[worst])},
        ),
    )
    return 0


def cmd_bounds(cfg: RunConfig, out: Path) -> int:
    if cfg.function.startswith("table:"):
        raise InvalidConfig("bounds needs an analytic function")
    ladder = _parse_ladder(cfg.n_ladder)
    a, b = cfg.interval
    scaling = _parse_alpha(cfg)
    sup = scaling.sup_norm
    try:
        kernel = kernel_from_name(cfg.kernel, cfg.m)
    except ValueError as exc:
        raise InvalidConfig(str(exc)) from exc
    f = make_function(cfg.function)
    dense = SampledFunction.from_callable(f, a, b, 2**17)
    probe = np.linspace(a, b, 10**4 + 1)
    truth = f(probe)
    print("n  base_gap  modulus  bound_gap  bound_modulus" + ("  bound_discrete" if cfg.discrete else ""))
    for n in ladder:
        op = OperatorConfig(kernel, a, b, n)
        gap = float(np.max(np.abs(truth - nn_eval(op, f, probe))))
        om = modulus_of_continuity(dense, (b - a) / n)
        line = (
            f"{n}  {_fmt(gap)}  {_fmt(om)}  "
            f"{_fmt(error_bound_alpha(sup, gap))}  {_fmt(error_bound_alpha(sup, om))}"
        )
        if cfg.discrete:
            om_k = modulus_of_continuity(dense, (b - a) / max(n, 2))
            line += f"  {_fmt(error_bound_discrete(sup, om, om_k))}"
        print(line)
    return 0


def _central_diff(values: np.ndarray, step: float) -> np.ndarray:
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * step)
    out[0] = (values[1] - values[0]) / step
    out[-1] = (values[-1] - values[-2]) / step
    return out


def _knot_data(problem) -> np.ndarray:
    pieces_f = problem.f
    if pieces_f.mode == "tabulated":
        return pieces_f.values
    return np.asarray(pieces_f(problem.partition.knots), dtype=float)


def _parse_ladder(spec: str):
    try:
        ladder = [int(v) for v in spec.split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidConfig(f"bad ladder spec {spec!r}") from exc
    if not ladder or any(n < 1 for n in ladder):
        raise InvalidConfig("ladder must list positive node counts")
    return ladder


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


_COMMANDS = {
    "build": cmd_build,
    "converge": cmd_converge,
    "dimension": cmd_dimension,
    "smooth": cmd_smooth,
    "holder": cmd_holder,
    "bounds": cmd_bounds,
}


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fif",
        description="Build and analyze fractal interpolants with "
        "sigmoidal quasi-interpolation heights.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("build", "render one interpolant to fif.csv + meta.json"),
        ("converge", "node-count ladder with error bounds to converge.csv"),
        ("dimension", "box-counting dimension to dimension.json"),
        ("smooth", "differentiable construction with derivative levels"),
        ("holder", "variable-scaling ladder with roughness norms"),
        ("bounds", "print error-bound tables without solving"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file (flags override it)")
        p.add_argument("--function", help="registry name or table:<csv path>")
        p.add_argument(
            "--interval", nargs=2, type=float, metavar=("A", "B"),
            help="domain endpoints",
        )
        p.add_argument(
            "--N", dest="subintervals", type=int, help="subinterval count"
        )
        p.add_argument("--n", dest="nodes", type=int, help="operator node count")
        p.add_argument("--r", dest="order", type=int, help="derivative layers")
        p.add_argument(
            "--alpha",
            help="constant, comma list, or linear:lo,hi / sine:amp families",
        )
        p.add_argument("--kernel", help="ramp | smoothstep:<k> | bump")
        p.add_argument("--m", type=float, help="kernel half-width")
        p.add_argument(
            "--grid-exp", dest="grid_exp", type=int,
            help="render cells = N * 2^this",
        )
        p.add_argument("--tol", type=float, help="fixed-point tolerance")
        p.add_argument("--max-iters", dest="max_iters", type=int)
        p.add_argument("--seed", type=int, help="random-orbit seed")
        p.add_argument("--mu", type=float, help="roughness exponent")
        p.add_argument("--n-ladder", dest="n_ladder", help="e.g. 8,16,32,64")
        p.add_argument(
            "--discrete", action="store_const", const=True, default=None,
            help="use the node-data-only construction",
        )
        p.add_argument(
            "--chaos", action="store_const", const=True, default=None,
            help="dimension: sample via the random orbit",
        )
        p.add_argument("--points", type=int, help="random-orbit point count")
        p.add_argument("--scales", help="dyadic box sizes, e.g. 4..12")
        p.add_argument("--out", default=".", help="output directory")
    return parser


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, out)
    except InvalidConfig as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (CrossCheckError, MatchingConditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
