"""Portable, counter-based random streams for reproducible simulations.

Every reward in this package is a fixed function of ``(seed, stream, arm,
pull_index)``, independent of platform, worker count, or the order in which
other arms were sampled:

* the bit source is Philox4x64 with ``key = [seed, stream * 2**16 + arm]``
  and the counter starting at zero,
* each 64-bit word ``w`` becomes a uniform ``u = ((w >> 12) + 0.5) * 2**-52``,
  exactly representable and strictly inside (0, 1),
* ``u`` is mapped through the inverse standard-normal CDF (Wichura's AS 241
  rational approximation, implemented here so no library change can silently
  alter the stream).

The s-th reward of arm ``a`` is then ``mu_a + sigma * z_s`` where ``z_s`` is
the s-th normal deviate of that arm's stream.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_ARM_STRIDE = 1 << 16  # streams per replication; caps arm count at 65536

# AS 241 (PPND16) rational-approximation coefficients, central region.
_A = (
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
)
_B = (
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
)
# Intermediate region (0.425 < |p - 1/2|, r = sqrt(-log(min(p, 1-p))) <= 5).
_C = (
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
)
_D = (
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
# Tail region (r > 5).
_E = (
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
)
_F = (
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _poly(coeffs, r):
    acc = np.full_like(r, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * r + c
    return acc


def normal_icdf(p):
    """Inverse standard-normal CDF (AS 241, double precision).

    Accepts scalars or arrays; accurate to ~1e-15 relative error over (0, 1).
    """
    p = np.asarray(p, dtype=np.float64)
    q = p - 0.5
    out = np.empty_like(p)

    central = np.abs(q) <= 0.425
    r = 0.180625 - q * q
    with np.errstate(invalid="ignore"):
        out = np.where(central, q * _poly(_A, r) / _poly(_B, r), out)

    qt = np.where(central, 0.25, p)  # placeholder value inside central region
    rt = np.where(q < 0.0, qt, 1.0 - qt)
    with np.errstate(divide="ignore", invalid="ignore"):
        rt = np.sqrt(-np.log(rt))
    mid = rt <= 5.0
    r1 = rt - 1.6
    r2 = rt - 5.0
    tail_val = np.where(
        mid, _poly(_C, r1) / _poly(_D, r1), _poly(_E, r2) / _poly(_F, r2)
    )
    tail_val = np.where(q < 0.0, -tail_val, tail_val)
    out = np.where(central, out, tail_val)
    if out.ndim == 0:
        return float(out)
    return out


def uniforms_from_raw(raw):
    """Map raw 64-bit words to doubles strictly inside (0, 1)."""
    return ((raw >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0**-52


class GaussianStream:
    """A consumable stream of standard-normal deviates.

    Identified by ``(seed, stream, arm)``; the n-th deviate is the same no
    matter how draws are chunked.
    """

    _BLOCK = 4096

    def __init__(self, seed: int, stream: int = 0, arm: int = 0):
        if not 0 <= arm < _ARM_STRIDE:
            raise ValueError(f"arm index {arm} outside supported range")
        key = np.array(
            [seed & _MASK64, (stream * _ARM_STRIDE + arm) & _MASK64],
            dtype=np.uint64,
        )
        self._bitgen = np.random.Philox(key=key)
        self._buf = np.empty(0, dtype=np.float64)
        self._pos = 0

    def _refill(self, need: int) -> None:
        pending = len(self._buf) - self._pos
        count = max(need - pending, self._BLOCK)
        fresh = normal_icdf(uniforms_from_raw(self._bitgen.random_raw(count)))
        self._buf = np.concatenate([self._buf[self._pos :], fresh])
        self._pos = 0

    def draw(self, count: int) -> np.ndarray:
        """Consume and return the next ``count`` deviates."""
        if len(self._buf) - self._pos < count:
            self._refill(count)
        out = self._buf[self._pos : self._pos + count]
        self._pos += count
        return out

    def draw_one(self) -> float:
        if self._pos >= len(self._buf):
            self._refill(1)
        v = self._buf[self._pos]
        self._pos += 1
        return float(v)


def normal_block(seed: int, stream: int, arm: int, count: int) -> np.ndarray:
    """The first ``count`` deviates of the ``(seed, stream, arm)`` stream."""
    return GaussianStream(seed, stream, arm).draw(count).copy()
