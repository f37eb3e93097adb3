"""Per-arm mean functions over a shared parameter space.

Three representations are supported:

* :class:`PiecewiseLinear` -- breakpoint list over a real interval, linearly
  interpolated, with optional jump discontinuities (distinct left/right
  values at a breakpoint),
* :class:`Tabulated` -- a finite map from labelled parameter points to values,
* :class:`Coordinate` -- projection of a product-box point onto one axis
  (the classic unstructured bandit embedding).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Breakpoint:
    """One node of a piecewise-linear function.

    ``value`` is the outgoing (right-limit) value; ``left`` the incoming
    (left-limit) value when the function jumps at ``x``, else None.  ``side``
    picks which of the two limits evaluation at exactly ``x`` returns.
    """

    x: float
    value: float
    left: float | None = None
    side: str = "right"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")

    @property
    def incoming(self) -> float:
        return self.value if self.left is None else self.left

    @property
    def at(self) -> float:
        """Value returned when evaluating at exactly ``x``."""
        return self.incoming if self.side == "left" else self.value


@dataclass(frozen=True)
class PiecewiseLinear:
    breakpoints: tuple[Breakpoint, ...]

    def __post_init__(self):
        bps = tuple(
            bp if isinstance(bp, Breakpoint) else Breakpoint(*bp)
            for bp in self.breakpoints
        )
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) < 2:
            raise ValueError("need at least two breakpoints")
        xs = [bp.x for bp in bps]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing in theta")
        if bps[0].left is not None:
            raise ValueError("first breakpoint cannot carry a left value")

    @classmethod
    def from_points(cls, points) -> "PiecewiseLinear":
        """Continuous piecewise-linear function through (x, y) pairs."""
        return cls(tuple(Breakpoint(float(x), float(y)) for x, y in points))

    @classmethod
    def constant(cls, lo: float, hi: float, value: float) -> "PiecewiseLinear":
        return cls.from_points([(lo, value), (hi, value)])

    @property
    def domain(self) -> tuple[float, float]:
        return (self.breakpoints[0].x, self.breakpoints[-1].x)

    def segments(self) -> list[tuple[float, float, float, float]]:
        """Open-interior pieces as (x0, x1, y at x0+, y at x1-) tuples."""
        bps = self.breakpoints
        return [
            (a.x, b.x, a.value, b.incoming) for a, b in zip(bps, bps[1:])
        ]

    def __call__(self, theta: float) -> float:
        bps = self.breakpoints
        lo, hi = self.domain
        if not lo <= theta <= hi:
            raise ValueError(f"theta {theta} outside domain [{lo}, {hi}]")
        for bp in bps:
            if theta == bp.x:
                return bp.at
        for a, b in zip(bps, bps[1:]):
            if a.x < theta < b.x:
                frac = (theta - a.x) / (b.x - a.x)
                return a.value + frac * (b.incoming - a.value)
        raise AssertionError("unreachable")

    def value_range(self) -> tuple[float, float]:
        vals = []
        for bp in self.breakpoints:
            vals.append(bp.value)
            vals.append(bp.incoming)
        return (min(vals), max(vals))

    def values_on_grid(self, thetas) -> np.ndarray:
        """Vectorized evaluation; exact breakpoint hits honour their side."""
        thetas = np.asarray(thetas, dtype=np.float64)
        bps = self.breakpoints
        xs = np.array([bp.x for bp in bps])
        x0 = xs[:-1]
        x1 = xs[1:]
        y0 = np.array([bp.value for bp in bps[:-1]])
        y1 = np.array([bp.incoming for bp in bps[1:]])
        idx = np.clip(np.searchsorted(xs, thetas, side="right") - 1, 0, len(x0) - 1)
        frac = (thetas - x0[idx]) / (x1[idx] - x0[idx])
        out = y0[idx] + frac * (y1[idx] - y0[idx])
        for bp in bps:
            out = np.where(thetas == bp.x, bp.at, out)
        return out


@dataclass(frozen=True)
class Tabulated:
    """Mean values attached to the labels of a finite parameter space."""

    values: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))

    def __call__(self, label) -> float:
        try:
            return float(self.values[label])
        except KeyError:
            raise ValueError(f"no mean tabulated for parameter {label!r}") from None

    def value_range(self) -> tuple[float, float]:
        vs = list(self.values.values())
        return (min(vs), max(vs))


@dataclass(frozen=True)
class Coordinate:
    """theta -> theta[axis] on a product-box space (0-based axis)."""

    axis: int

    def __call__(self, theta) -> float:
        return float(theta[self.axis])
