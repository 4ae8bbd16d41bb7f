"""Interval partitions, the contractive maps they induce, vertical scalings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig

# Sample count used to estimate sup norms of scaling functions.
SUP_SAMPLES = 10**4


@dataclass(frozen=True)
class AffineMap:
    """x -> slope * x + intercept, with exact inverse."""

    slope: float
    intercept: float

    def __call__(self, x):
        return self.slope * np.asarray(x, dtype=float) + self.intercept

    def inverse(self, y):
        return (np.asarray(y, dtype=float) - self.intercept) / self.slope


class Partition:
    """Strictly increasing knots x_0 < ... < x_N with N >= 2 subintervals.

    Subinterval ``i`` (1-based) is ``[x_{i-1}, x_i]`` and carries the affine
    contraction of ``[x_0, x_N]`` onto it that fixes the orientation:
    slope ``(x_i - x_{i-1}) / (x_N - x_0)`` and the intercept making
    ``x_0 -> x_{i-1}``, ``x_N -> x_i``.
    """

    __slots__ = ("knots", "slopes", "intercepts")

    def __init__(self, knots):
        knots = np.asarray(knots, dtype=float)
        if knots.ndim != 1 or knots.size < 3:
            raise InvalidConfig("need at least 3 knots (2 subintervals)")
        if not np.all(np.isfinite(knots)):
            raise InvalidConfig("non-finite knots")
        if not np.all(np.diff(knots) > 0):
            raise InvalidConfig("knots must be strictly increasing")
        self.knots = knots
        span = knots[-1] - knots[0]
        self.slopes = np.diff(knots) / span
        self.intercepts = (knots[-1] * knots[:-1] - knots[0] * knots[1:]) / span

    @classmethod
    def uniform(cls, a, b, count):
        if not (isinstance(count, int) and count >= 2):
            raise InvalidConfig("need an integer subinterval count >= 2")
        return cls(np.linspace(a, b, count + 1))

    @property
    def a(self) -> float:
        return float(self.knots[0])

    @property
    def b(self) -> float:
        return float(self.knots[-1])

    @property
    def size(self) -> int:
        return self.knots.size - 1

    @property
    def is_uniform(self) -> bool:
        w = np.diff(self.knots)
        return bool(np.all(np.abs(w - w[0]) <= 1e-12 * (self.b - self.a)))

    def affine_maps(self):
        """The per-subinterval contractions as AffineMap objects (1-based i)."""
        return [
            AffineMap(float(s), float(c))
            for s, c in zip(self.slopes, self.intercepts)
        ]

    def locate(self, x):
        """Subinterval index in 1..N for each x; internal knots go left."""
        idx = np.searchsorted(self.knots, np.asarray(x, dtype=float), side="left")
        return np.clip(idx, 1, self.size)

    def forward(self, i, x):
        """Apply map i (scalar or per-point index array) to x."""
        i = np.asarray(i) - 1
        return self.slopes[i] * np.asarray(x, dtype=float) + self.intercepts[i]

    def inverse(self, i, x):
        i = np.asarray(i) - 1
        return (np.asarray(x, dtype=float) - self.intercepts[i]) / self.slopes[i]


class ScalingVector:
    """One vertical scaling per subinterval: a constant or a function of x.

    Function entries are sampled on a dense grid over the domain to bound
    their sup norms; the overall sup norm must stay below 1.
    """

    __slots__ = ("entries", "domain", "sup_norms")

    def __init__(self, entries, domain=None):
        entries = tuple(entries)
        if not entries:
            raise InvalidConfig("scaling vector is empty")
        sups = []
        for e in entries:
            if callable(e):
                if domain is None:
                    raise InvalidConfig("function scalings need a domain")
                xs = np.linspace(domain[0], domain[1], SUP_SAMPLES)
                vals = np.asarray(e(xs), dtype=float)
                if vals.shape != xs.shape:
                    vals = np.broadcast_to(vals, xs.shape)
                if not np.all(np.isfinite(vals)):
                    raise InvalidConfig("scaling function returned non-finite values")
                sups.append(float(np.max(np.abs(vals))))
            else:
                v = float(e)
                if not np.isfinite(v):
                    raise InvalidConfig("non-finite scaling constant")
                sups.append(abs(v))
        self.entries = entries
        self.domain = None if domain is None else (float(domain[0]), float(domain[1]))
        self.sup_norms = np.asarray(sups)
        if self.sup_norm >= 1.0:
            raise InvalidConfig("scaling sup norm must be < 1")

    @classmethod
    def constant(cls, values):
        return cls([float(v) for v in np.atleast_1d(values)])

    @classmethod
    def broadcast(cls, value, count, domain=None):
        return cls([value] * count, domain=domain)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def sup_norm(self) -> float:
        return float(np.max(self.sup_norms))

    @property
    def is_constant(self) -> bool:
        return not any(callable(e) for e in self.entries)

    @property
    def kappa(self) -> float:
        """Sum of the per-subinterval sup norms."""
        return float(np.sum(self.sup_norms))

    def constants(self) -> np.ndarray:
        if not self.is_constant:
            raise InvalidConfig("constant scalings required")
        return np.asarray([float(e) for e in self.entries])

    def values_at(self, i, x):
        """alpha_i(x) with a per-point 1-based index array."""
        i = np.asarray(i)
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        for k, e in enumerate(self.entries):
            mask = i == k + 1
            if not np.any(mask):
                continue
            if callable(e):
                vals = np.asarray(e(x[mask]), dtype=float)
                out[mask] = np.broadcast_to(vals, x[mask].shape)
            else:
                out[mask] = float(e)
        return out

    def holder_contraction(self, partition: Partition, mu: float) -> float:
        """max_i sup|alpha_i| / slope_i^mu, the variable-scaling gate value."""
        if not 0 < mu <= 1:
            raise InvalidConfig("exponent mu must lie in (0, 1]")
        if self.size != partition.size:
            raise InvalidConfig("scaling count must match subinterval count")
        return float(np.max(self.sup_norms / partition.slopes**mu))
