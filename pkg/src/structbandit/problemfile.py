"""Plain-text problem definition files.

Format (one directive per line, ``#`` starts a comment):

    k 2
    sigma2 1.0
    space interval -1 1 2001      # lower upper [resolution]
    amb -1 0                      # optional, repeatable ambiguous interval
    arm 1 pwl -1 0   0 0   1 -1   # (theta, value) pairs
    arm 2 pwl -1 -1  0 -1/0/L  1 0

A breakpoint value token has up to three ``/``-separated parts:

    v            continuous value
    in/out       jump: left limit ``in``, right limit ``out`` (evaluates right)
    in/out/L     as above but evaluating at the breakpoint returns the left limit

The resolution defaults to the toolkit-wide enumeration default when
omitted.  Only interval spaces with piecewise-linear arms are expressible in
files; finite and product-box spaces are built through the API.
"""

from __future__ import annotations

from .means import Breakpoint, PiecewiseLinear
from .problems import StructuredBandit
from .spaces import IntervalSpace


class ProblemFileError(ValueError):
    pass


def _parse_value_token(token: str, line_no: int) -> tuple[float, float | None, str]:
    parts = token.split("/")
    try:
        if len(parts) == 1:
            return float(parts[0]), None, "right"
        if len(parts) == 2:
            left, out = float(parts[0]), float(parts[1])
            return out, left, "right"
        if len(parts) == 3:
            left, out = float(parts[0]), float(parts[1])
            side = {"L": "left", "R": "right"}.get(parts[2].upper())
            if side is None:
                raise ValueError
            return out, left, side
    except ValueError:
        pass
    raise ProblemFileError(f"line {line_no}: bad breakpoint value {token!r}")


def _parse_breakpoints(tokens: list[str], line_no: int) -> PiecewiseLinear:
    if len(tokens) < 4 or len(tokens) % 2:
        raise ProblemFileError(f"line {line_no}: need (theta, value) pairs")
    bps = []
    for xi, vi in zip(tokens[::2], tokens[1::2]):
        try:
            x = float(xi)
        except ValueError:
            raise ProblemFileError(f"line {line_no}: bad theta {xi!r}") from None
        value, left, side = _parse_value_token(vi, line_no)
        if not bps and left is not None:
            raise ProblemFileError(f"line {line_no}: first breakpoint cannot jump")
        bps.append(Breakpoint(x, value, left, side))
    try:
        return PiecewiseLinear(tuple(bps))
    except ValueError as exc:
        raise ProblemFileError(f"line {line_no}: {exc}") from None


def load_problem(path, default_resolution: int = 2001) -> StructuredBandit:
    """Parse a problem definition file into a :class:`StructuredBandit`."""
    k = None
    sigma2 = None
    space_args = None
    amb: list[tuple[float, float]] = []
    arms: dict[int, PiecewiseLinear] = {}

    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            key = tokens[0].lower()
            args = tokens[1:]
            try:
                if key == "k":
                    k = int(args[0])
                elif key == "sigma2":
                    sigma2 = float(args[0])
                elif key == "space":
                    if args[0].lower() != "interval":
                        raise ProblemFileError(
                            f"line {line_no}: only interval spaces are supported in files"
                        )
                    if len(args) not in (3, 4):
                        raise IndexError
                    space_args = (
                        float(args[1]),
                        float(args[2]),
                        int(args[3]) if len(args) == 4 else default_resolution,
                    )
                elif key == "amb":
                    amb.append((float(args[0]), float(args[1])))
                elif key == "arm":
                    idx = int(args[0])
                    if args[1].lower() != "pwl":
                        raise ProblemFileError(
                            f"line {line_no}: arm form must be 'pwl'"
                        )
                    if idx in arms:
                        raise ProblemFileError(f"line {line_no}: arm {idx} redefined")
                    arms[idx] = _parse_breakpoints(args[2:], line_no)
                else:
                    raise ProblemFileError(f"line {line_no}: unknown directive {key!r}")
            except (IndexError, ValueError) as exc:
                if isinstance(exc, ProblemFileError):
                    raise
                raise ProblemFileError(f"line {line_no}: malformed {key!r} directive") from None

    if k is None or sigma2 is None or space_args is None:
        raise ProblemFileError("file must define k, sigma2 and space")
    if sorted(arms) != list(range(1, k + 1)):
        raise ProblemFileError(f"need arms 1..{k}, found {sorted(arms)}")
    lo, hi, resolution = space_args
    space = IntervalSpace(lo, hi, resolution, ambiguous=tuple(amb))
    means = tuple(arms[i] for i in range(1, k + 1))
    return StructuredBandit(
        k=k, space=space, means=means, sigma2=sigma2, metadata={"source": str(path)}
    )
