"""Error moduli, roughness measures, and dimension estimation."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from .errors import InvalidConfig
from .sampled import SampledFunction

# Default dyadic box sizes for dimension estimation.
DEFAULT_SCALES = tuple(2.0**-j for j in range(4, 13))

SEMINORM_MAX_POINTS = 4001


def _thread_count() -> int:
    raw = os.environ.get("FIF_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def modulus_of_continuity(phi: SampledFunction, delta: float) -> float:
    """Largest |phi(x) - phi(y)| over grid pairs with |x - y| <= delta.

    The grid must resolve ``delta`` (step <= delta / 16), otherwise the
    sampled value is too loose an underestimate to be useful.
    """
    if not 0 < delta <= (phi.b - phi.a) * (1 + 1e-12):
        raise InvalidConfig("delta must lie in (0, b - a]")
    step = phi.step
    if step > delta / 16 * (1 + 1e-12):
        raise InvalidConfig("refine grid: need step <= delta / 16")
    k = int(math.floor(delta / step + 1e-9))
    window = k + 1
    hi = maximum_filter1d(phi.values, size=window, mode="nearest")
    lo = minimum_filter1d(phi.values, size=window, mode="nearest")
    return float(np.max(hi - lo))


def sup_norm_diff(phi: SampledFunction, psi: SampledFunction) -> float:
    """Sup distance of two functions sampled on the same grid."""
    if not phi.same_grid(psi):
        raise InvalidConfig("sampled functions must share a grid")
    return float(np.max(np.abs(phi.values - psi.values)))


@dataclass(frozen=True)
class HolderParams:
    """Exponent and grid cap for discrete seminorm evaluation."""

    mu: float
    max_points: int = SEMINORM_MAX_POINTS

    def __post_init__(self):
        if not 0 < self.mu <= 1:
            raise InvalidConfig("exponent mu must lie in (0, 1]")
        if self.max_points < 2:
            raise InvalidConfig("max_points must be at least 2")


def holder_seminorm(phi: SampledFunction, params: HolderParams) -> float:
    """Exhaustive pair-scan sup of |phi(x)-phi(y)| / |x-y|^mu on the grid.

    A certified lower bound of the continuum seminorm.  Quadratic in the
    sample count, hence the hard cap; thin the input first if needed.
    """
    npts = phi.values.size
    if npts > params.max_points:
        raise InvalidConfig("too many samples for a pair scan: use subsample")
    v = phi.values
    step = phi.step
    best = 0.0
    for d in range(1, npts):
        gap = float(np.max(np.abs(v[d:] - v[:-d])))
        best = max(best, gap / (d * step) ** params.mu)
    return best


def holder_norm(phi: SampledFunction, params: HolderParams) -> float:
    """max of the sup norm and the discrete seminorm."""
    return max(float(np.max(np.abs(phi.values))), holder_seminorm(phi, params))


def error_bound_alpha(scaling_sup: float, base_gap: float) -> float:
    """Sup-error bound scaling_sup / (1 - scaling_sup) * base_gap."""
    if not 0 <= scaling_sup < 1:
        raise InvalidConfig("scaling sup norm must lie in [0, 1)")
    if base_gap < 0:
        raise InvalidConfig("base gap must be nonnegative")
    return scaling_sup / (1.0 - scaling_sup) * base_gap


def error_bound_discrete(scaling_sup: float, omega_n: float, omega_knots: float) -> float:
    """Node-data bound: scaled modulus at the operator step plus the knot step."""
    if not 0 <= scaling_sup < 1:
        raise InvalidConfig("scaling sup norm must lie in [0, 1)")
    if omega_n < 0 or omega_knots < 0:
        raise InvalidConfig("moduli must be nonnegative")
    return (scaling_sup * omega_n + omega_knots) / (1.0 - scaling_sup)


@dataclass
class DimensionReport:
    """Box-counting fit plus, when available, the closed-form prediction."""

    estimated_dimension: float
    scales: tuple
    counts: tuple
    r_squared: float
    theoretical_dimension: float | None = None
    kappa: float | None = None
    collinear_data: bool | None = None
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.theoretical_dimension is not None and not (
            1.0 <= self.theoretical_dimension <= 2.0
        ):
            raise InvalidConfig("theoretical dimension must lie in [1, 2]")
        if self.kappa is not None and self.kappa < 0:
            raise InvalidConfig("kappa must be nonnegative")


def theoretical_box_dimension(scaling, subintervals: int) -> float:
    """Closed-form graph dimension for constant scalings on uniform knots.

    1 + log_N(kappa) when the absolute scalings sum to kappa > 1, else 1.
    """
    consts = scaling.constants() if hasattr(scaling, "constants") else np.asarray(
        scaling, dtype=float
    )
    if subintervals != len(consts):
        raise InvalidConfig("scaling count must match subinterval count")
    if subintervals < 2:
        raise InvalidConfig("need at least 2 subintervals")
    kappa = float(np.sum(np.abs(consts)))
    if kappa <= 1.0:
        return 1.0
    d = 1.0 + math.log(kappa) / math.log(subintervals)
    if d > 2.0:
        raise InvalidConfig("scalings give an impossible dimension > 2")
    return d


def knot_data_collinear(x, y) -> bool:
    """Whether the data points sit on one straight line (degenerate graph)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        return True
    rng = float(np.max(y) - np.min(y))
    design = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = np.abs(y - design @ coef)
    return bool(np.max(resid) <= 1e-9 * max(rng, 1.0))


def _count_boxes(xn, yn, inv: int) -> int:
    # curve-aware count: the points sample a continuous graph, so within
    # one column every box between the column's extremes is occupied
    ix = np.minimum((xn * inv).astype(np.int64), inv - 1)
    lo = np.full(inv, np.inf)
    hi = np.full(inv, -np.inf)
    np.minimum.at(lo, ix, yn)
    np.maximum.at(hi, ix, yn)
    seen = hi >= lo
    ilo = np.clip(np.floor(lo[seen] * inv).astype(np.int64), 0, inv - 1)
    ihi = np.clip(np.floor(hi[seen] * inv).astype(np.int64), 0, inv - 1)
    return int(np.sum(ihi - ilo + 1))


def box_counting_dimension(x, y, scales=None) -> DimensionReport:
    """Least-squares box-counting dimension of a normalized point set.

    Parameters
    ----------
    x, y : arrays of equal length (>= 1e5 points)
        The point cloud; it is normalized to the unit square first.
    scales : sequence of box sizes, optional
        Each must subdivide the unit square integrally.  Defaults to
        2^-4 ... 2^-12.  At least 5 scales spanning a factor >= 100.

    Returns
    -------
    DimensionReport with the fitted slope of log(count) against
    log(1/scale) and the r-squared of the fit.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise InvalidConfig("x and y must have equal length")
    if x.size < 10**5:
        raise InvalidConfig("need at least 1e5 points for a stable estimate")
    if scales is None:
        scales = DEFAULT_SCALES
    scales = tuple(float(s) for s in scales)
    if len(scales) < 5:
        raise InvalidConfig("need at least 5 scales")
    if max(scales) / min(scales) < 100:
        raise InvalidConfig("scales must span at least two decades")
    invs = []
    for s in scales:
        inv = round(1.0 / s)
        if abs(inv * s - 1.0) > 1e-9:
            raise InvalidConfig("each scale must subdivide the unit square")
        invs.append(inv)
    x_span = float(np.max(x) - np.min(x))
    y_span = float(np.max(y) - np.min(y))
    if x_span <= 0 or y_span <= 0:
        raise InvalidConfig("degenerate point set")
    xn = (x - np.min(x)) / x_span
    yn = (y - np.min(y)) / y_span
    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda i: _count_boxes(xn, yn, i), invs))
    else:
        counts = [_count_boxes(xn, yn, i) for i in invs]
    if len(set(counts)) < 2:
        raise InvalidConfig("degenerate point set: box counts do not vary")
    logx = np.log(1.0 / np.asarray(scales))
    logy = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(logx, logy, 1)
    fitted = slope * logx + intercept
    ss_res = float(np.sum((logy - fitted) ** 2))
    ss_tot = float(np.sum((logy - np.mean(logy)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return DimensionReport(
        estimated_dimension=float(slope),
        scales=scales,
        counts=tuple(counts),
        r_squared=r2,
    )
