"""Parameter spaces: finite labelled sets, real intervals, and product boxes.

Interval spaces carry a grid resolution used whenever an operation needs to
enumerate candidate parameters (confidence-set construction in grid mode,
classification scans).  A space may mark a subset as *ambiguous*; the
risk-averse selection rule commits to an arm when the plausible set meets
that region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class IntervalSpace:
    """Theta = [lower, upper], enumerated as `resolution` equispaced points."""

    lower: float
    upper: float
    resolution: int = 2001
    ambiguous: tuple[tuple[float, float], ...] = ()

    kind = "interval"

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("interval requires lower < upper")
        if self.resolution < 2:
            raise ValueError("grid resolution must be at least 2")
        marks = tuple((float(a), float(b)) for a, b in self.ambiguous)
        for a, b in marks:
            if a > b:
                raise ValueError(f"ambiguous mark [{a}, {b}] is reversed")
            if a < self.lower or b > self.upper:
                raise ValueError(f"ambiguous mark [{a}, {b}] outside the space")
        object.__setattr__(self, "ambiguous", marks)

    def contains(self, theta) -> bool:
        try:
            t = float(theta)
        except (TypeError, ValueError):
            return False
        return self.lower <= t <= self.upper

    def grid(self, resolution: int | None = None) -> np.ndarray:
        """Equally spaced points including both endpoints."""
        return np.linspace(self.lower, self.upper, resolution or self.resolution)

    def is_ambiguous(self, theta: float) -> bool:
        return any(a <= theta <= b for a, b in self.ambiguous)

    def with_resolution(self, resolution: int) -> "IntervalSpace":
        return IntervalSpace(self.lower, self.upper, resolution, self.ambiguous)


@dataclass(frozen=True)
class FiniteSpace:
    """An ordered finite set of labelled parameter points."""

    labels: tuple
    ambiguous: frozenset = frozenset()

    kind = "finite"

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise ValueError("finite space needs at least one point")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate labels in finite space")
        amb = frozenset(self.ambiguous)
        if not amb <= set(labels):
            raise ValueError("ambiguous marks must be points of the space")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "ambiguous", amb)

    def contains(self, theta) -> bool:
        return theta in self.labels

    def grid(self, resolution: int | None = None):
        return self.labels

    def is_ambiguous(self, theta) -> bool:
        return theta in self.ambiguous


@dataclass(frozen=True)
class BoxSpace:
    """Axis-aligned product box; points are coordinate tuples.

    Used with :class:`~structbandit.means.Coordinate` means to embed the
    classic unstructured bandit.  Not enumerable: the confidence-set
    machinery treats it exactly, one axis per arm.
    """

    bounds: tuple[tuple[float, float], ...]

    kind = "box"

    def __post_init__(self):
        bounds = tuple((float(a), float(b)) for a, b in self.bounds)
        for a, b in bounds:
            if not a < b:
                raise ValueError("each box axis requires lower < upper")
        object.__setattr__(self, "bounds", bounds)

    @property
    def dims(self) -> int:
        return len(self.bounds)

    def contains(self, theta) -> bool:
        try:
            vals = tuple(float(v) for v in theta)
        except (TypeError, ValueError):
            return False
        if len(vals) != self.dims:
            return False
        return all(a <= v <= b for v, (a, b) in zip(vals, self.bounds))

    def is_ambiguous(self, theta) -> bool:
        return False
