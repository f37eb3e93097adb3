"""Builtin catalog of two- and three-armed structured bandit problems.

Entries with printed formulas:

* ``example-a``   mu1 = theta, mu2 = -theta on [-1, 1]
* ``example-b``   mu1 = 0, mu2 = theta on [-1, 1]
* ``example-c``   mu1 = theta*1{theta>0}, mu2 = -theta*1{theta<0} on [-1, 1]
* ``ambiguous-a`` mu1 = -theta*1{theta>0}, mu2 = -1{theta<=0} on [-1, 1],
  with [-1, 0] marked ambiguous
* ``tradeoff-a``  mu1 = 0, mu2 = -1/2 for theta<=0 and +1/2 for theta>0
  (the two-parameter trade-off construction; Delta = 1/2)

The remaining entries (``example-d``, ``example-e``, ``example-f``,
``ambiguous-b``, ``ambiguous-c``, ``ambiguous-d``) are reconstructed from
drawings only; their metadata carries ``reconstructed: True`` and the exact
endpoint conventions are a documented choice, not ground truth.  All entries
use unit reward variance.
"""

from __future__ import annotations

from .means import Breakpoint as B
from .means import PiecewiseLinear as PWL
from .problems import StructuredBandit
from .spaces import IntervalSpace


def _entry(k, means, *, amb=(), lo=-1.0, hi=1.0, reconstructed=False, note=""):
    def build(resolution):
        space = IntervalSpace(lo, hi, resolution, ambiguous=amb)
        meta = {"reconstructed": reconstructed}
        if note:
            meta["note"] = note
        return StructuredBandit(k=k, space=space, means=means, sigma2=1.0, metadata=meta)

    return build


def _line(p0, p1):
    return PWL.from_points([p0, p1])


_CATALOG = {
    "example-a": _entry(2, (_line((-1, -1), (1, 1)), _line((-1, 1), (1, -1)))),
    "example-b": _entry(2, (PWL.constant(-1, 1, 0.0), _line((-1, -1), (1, 1)))),
    "example-c": _entry(
        2,
        (
            PWL.from_points([(-1, 0), (0, 0), (1, 1)]),
            PWL.from_points([(-1, 1), (0, 0), (1, 0)]),
        ),
    ),
    "ambiguous-a": _entry(
        2,
        (
            PWL.from_points([(-1, 0), (0, 0), (1, -1)]),
            PWL((B(-1, -1.0), B(0, 0.0, left=-1.0, side="left"), B(1, 0.0))),
        ),
        amb=((-1.0, 0.0),),
    ),
    "tradeoff-a": _entry(
        2,
        (
            PWL.constant(-1, 1, 0.0),
            PWL((B(-1, -0.5), B(0, 0.5, left=-0.5, side="left"), B(1, 0.5))),
        ),
        reconstructed=True,
        note="two-point trade-off construction; theta1=-1, theta2=1, gap 0.5",
    ),
    "example-d": _entry(
        2,
        (
            PWL((B(-1, 0.5), B(-0.5, -0.5, left=0.5), B(0.5, 0.5, left=-0.5), B(1, 1.0))),
            PWL((B(-1, 0.5), B(-0.5, 0.0), B(0.5, 1.0, left=0.0), B(1, 1.0))),
        ),
        reconstructed=True,
    ),
    "example-e": _entry(
        2,
        (
            PWL((B(-1, 0.5), B(-0.5, -0.5, left=0.5), B(1, 1.0))),
            PWL((B(-1, 1.0), B(-0.5, 0.0, left=1.0), B(1, 0.0))),
        ),
        reconstructed=True,
    ),
    "example-f": _entry(
        3,
        (
            # three-arm permutation problem: each unit region permutes (1,2,3)
            PWL((B(0, 1.0), B(1, 2.0, left=1.0), B(2, 3.0, left=2.0),
                 B(4, 2.0, left=3.0), B(5, 1.0, left=2.0), B(6, 1.0))),
            PWL((B(0, 2.0), B(1, 1.0, left=2.0), B(3, 2.0, left=1.0),
                 B(4, 3.0, left=2.0), B(6, 3.0))),
            PWL((B(0, 3.0), B(2, 2.0, left=3.0), B(3, 1.0, left=2.0),
                 B(5, 2.0, left=1.0), B(6, 2.0))),
        ),
        lo=0.0,
        hi=6.0,
        reconstructed=True,
        note="permutation bandit; region [r-1, r) realises the r-th permutation",
    ),
    "ambiguous-b": _entry(
        2,
        (
            PWL.from_points([(-1, 0), (0, 0), (1, -1)]),
            PWL.from_points([(-1, -1), (0, 0), (1, 0)]),
        ),
        amb=((-1.0, 1.0),),
        reconstructed=True,
    ),
    "ambiguous-c": _entry(
        2,
        (
            PWL.from_points([(-1, 0), (0, 0), (1, 0.5)]),
            PWL((B(-1, -1.0), B(0, 0.95, left=-1.0, side="left"), B(1, 0.95))),
        ),
        amb=((-1.0, 0.0),),
        reconstructed=True,
        note="risk does not decay near the boundary; commitment bonus insufficient",
    ),
    "ambiguous-d": _entry(
        2,
        (
            PWL.from_points([(-1, 0), (0, 0), (1, 0.5)]),
            PWL((B(-1, -1.0), B(0, 0.0, left=-1.0, side="left"), B(1, 0.95))),
        ),
        amb=((-1.0, 0.0),),
        reconstructed=True,
    ),
}


def builtin_names() -> tuple[str, ...]:
    return tuple(_CATALOG)


def make_builtin(name: str, resolution: int = 2001) -> StructuredBandit:
    """Build a catalog problem; ``resolution`` sets the enumeration grid."""
    try:
        build = _CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(_CATALOG))
        raise ValueError(f"unknown problem {name!r} (known: {known})") from None
    bandit = build(resolution)
    bandit.metadata["name"] = name
    return bandit
