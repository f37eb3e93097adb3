"""Compiled episode loops.

These kernels replay exactly the arithmetic of the pure-Python policies in
:mod:`structbandit.policies` (same expressions, same association, same tie
rules), so an episode run here is bit-identical to the reference loop; the
test suite enforces that step for step.  They exist purely for speed: a
structured-optimism step costs tens of nanoseconds instead of tens of
microseconds.

All kernels consume a pre-generated reward matrix ``rewards[arm-1, s]``
(the s-th pull of an arm always sees the same value) and report pull counts
per checkpoint plus, for the confidence-set policies, whether some sampled
arm's true mean sat outside its confidence interval just before the
checkpointed step.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .problems import StructuredBandit
from .spaces import IntervalSpace

_INTERVAL_CAP = 64


def pack_pwl(bandit: StructuredBandit):
    """Flatten piecewise-linear means into the arrays the kernels read."""
    if not bandit.is_piecewise_linear:
        raise ValueError("kernel packing needs piecewise-linear means")
    k = bandit.k
    seg_lists = [mu.segments() for mu in bandit.means]
    smax = max(len(s) for s in seg_lists)
    seg = np.zeros((k, smax, 4), dtype=np.float64)
    nseg = np.zeros(k, dtype=np.int64)
    for i, segs in enumerate(seg_lists):
        nseg[i] = len(segs)
        for j, piece in enumerate(segs):
            seg[i, j] = piece
    bmax = max(len(mu.breakpoints) for mu in bandit.means)
    bp_x = np.zeros((k, bmax), dtype=np.float64)
    bp_at = np.zeros((k, bmax), dtype=np.float64)
    nbp = np.zeros(k, dtype=np.int64)
    for i, mu in enumerate(bandit.means):
        nbp[i] = len(mu.breakpoints)
        for j, bp in enumerate(mu.breakpoints):
            bp_x[i, j] = bp.x
            bp_at[i, j] = bp.at
    space = bandit.space
    amb = np.array(
        [list(m) for m in getattr(space, "ambiguous", ())], dtype=np.float64
    ).reshape(-1, 2)
    return {
        "seg": seg,
        "nseg": nseg,
        "bp_x": bp_x,
        "bp_at": bp_at,
        "nbp": nbp,
        "lo": float(space.lower),
        "hi": float(space.upper),
        "amb": amb,
    }


def kernel_capacity_ok(bandit: StructuredBandit) -> bool:
    if not bandit.is_piecewise_linear or not isinstance(bandit.space, IntervalSpace):
        return False
    smax = max(len(mu.segments()) for mu in bandit.means)
    return 1 + bandit.k * smax * 2 <= _INTERVAL_CAP


@njit(cache=True)
def _violation(counts, sums, mu_true, tas, logt):
    for i in range(counts.shape[0]):
        if counts[i] >= 1:
            m = sums[i] / counts[i]
            if np.abs(m - mu_true[i]) >= np.sqrt(tas * logt / counts[i]):
                return np.uint8(1)
    return np.uint8(0)


@njit(cache=True)
def ucb_episode(
    rewards, alpha, sigma2, horizon, checkpoints, mu_true, counts_out, viol_out,
    arms_out, record_arms,
):
    k = rewards.shape[0]
    counts = np.zeros(k, np.int64)
    sums = np.zeros(k, np.float64)
    tas = 2.0 * alpha * sigma2
    ci = 0
    for t in range(1, horizon + 1):
        logt = np.log(t)
        at_cp = ci < checkpoints.shape[0] and t == checkpoints[ci]
        if at_cp:
            viol_out[ci] = _violation(counts, sums, mu_true, tas, logt)
        arm = -1
        for i in range(k):
            if counts[i] == 0:
                arm = i
                break
        if arm < 0:
            best_val = -np.inf
            arm = 0
            for i in range(k):
                v = sums[i] / counts[i] + np.sqrt(tas * logt / counts[i])
                if v > best_val:
                    best_val = v
                    arm = i
        x = rewards[arm, counts[arm]]
        counts[arm] += 1
        sums[arm] += x
        if record_arms:
            arms_out[t - 1] = arm + 1
        if at_cp:
            for i in range(k):
                counts_out[ci, i] = counts[i]
            ci += 1


@njit(cache=True)
def _plausible_intervals(seg, nseg, lo, hi, counts, sums, tas, logt, cur, nxt):
    """Intersect per-arm band preimages; returns the interval count (0 = empty)."""
    ncur = 1
    cur[0, 0] = lo
    cur[0, 1] = hi
    k = nseg.shape[0]
    for i in range(k):
        if counts[i] == 0:
            continue
        center = sums[i] / counts[i]
        r = np.sqrt(tas * logt / counts[i])
        blo = center - r
        bhi = center + r
        nn = 0
        for c in range(ncur):
            for s in range(nseg[i]):
                x0 = seg[i, s, 0]
                x1 = seg[i, s, 1]
                y0 = seg[i, s, 2]
                y1 = seg[i, s, 3]
                if y0 == y1:
                    if not (blo < y0 and y0 < bhi):
                        continue
                    a = x0
                    b = x1
                else:
                    slope = (y1 - y0) / (x1 - x0)
                    ta = x0 + (blo - y0) / slope
                    tb = x0 + (bhi - y0) / slope
                    if ta > tb:
                        ta, tb = tb, ta
                    a = max(x0, ta)
                    b = min(x1, tb)
                    if a > b:
                        continue
                aa = max(a, cur[c, 0])
                bb = min(b, cur[c, 1])
                if aa <= bb:
                    nxt[nn, 0] = aa
                    nxt[nn, 1] = bb
                    nn += 1
        if nn == 0:
            return 0
        for c in range(nn):
            cur[c, 0] = nxt[c, 0]
            cur[c, 1] = nxt[c, 1]
        ncur = nn
    return ncur


@njit(cache=True)
def _sup_mean(seg, nseg, i, cur, ncur):
    best = -np.inf
    for c in range(ncur):
        a = cur[c, 0]
        b = cur[c, 1]
        for s in range(nseg[i]):
            x0 = seg[i, s, 0]
            x1 = seg[i, s, 1]
            y0 = seg[i, s, 2]
            y1 = seg[i, s, 3]
            cc = max(a, x0)
            dd = min(b, x1)
            if cc <= dd:
                va = y0 + (cc - x0) * (y1 - y0) / (x1 - x0)
                vb = y0 + (dd - x0) * (y1 - y0) / (x1 - x0)
                if va > best:
                    best = va
                if vb > best:
                    best = vb
    return best


@njit(cache=True)
def _least_pulled(counts):
    arm = 0
    best = counts[0]
    for i in range(1, counts.shape[0]):
        if counts[i] < best:
            best = counts[i]
            arm = i
    return arm


@njit(cache=True)
def ucbs_episode(
    seg, nseg, lo, hi, rewards, alpha, sigma2, horizon, checkpoints, mu_true,
    counts_out, viol_out, arms_out, record_arms,
):
    k = rewards.shape[0]
    counts = np.zeros(k, np.int64)
    sums = np.zeros(k, np.float64)
    cur = np.empty((_INTERVAL_CAP, 2), np.float64)
    nxt = np.empty((_INTERVAL_CAP, 2), np.float64)
    tas = 2.0 * alpha * sigma2
    ci = 0
    for t in range(1, horizon + 1):
        logt = np.log(t)
        at_cp = ci < checkpoints.shape[0] and t == checkpoints[ci]
        if at_cp:
            viol_out[ci] = _violation(counts, sums, mu_true, tas, logt)
        ncur = _plausible_intervals(
            seg, nseg, lo, hi, counts, sums, tas, logt, cur, nxt
        )
        if ncur == 0:
            arm = _least_pulled(counts)
        else:
            arm = 0
            best_val = -np.inf
            for i in range(k):
                v = _sup_mean(seg, nseg, i, cur, ncur)
                if v > best_val:
                    best_val = v
                    arm = i
        x = rewards[arm, counts[arm]]
        counts[arm] += 1
        sums[arm] += x
        if record_arms:
            arms_out[t - 1] = arm + 1
        if at_cp:
            for i in range(k):
                counts_out[ci, i] = counts[i]
            ci += 1


@njit(cache=True)
def _eval_pwl(seg, nseg, bp_x, bp_at, nbp, i, theta):
    for j in range(nbp[i]):
        if theta == bp_x[i, j]:
            return bp_at[i, j]
    for s in range(nseg[i]):
        x0 = seg[i, s, 0]
        x1 = seg[i, s, 1]
        if x0 < theta and theta < x1:
            y0 = seg[i, s, 2]
            y1 = seg[i, s, 3]
            frac = (theta - x0) / (x1 - x0)
            return y0 + frac * (y1 - y0)
    return np.nan


@njit(cache=True)
def ucbs_ra_episode(
    seg, nseg, bp_x, bp_at, nbp, lo, hi, amb, rewards, alpha, sigma2, horizon,
    checkpoints, mu_true, counts_out, viol_out, arms_out, record_arms,
):
    k = rewards.shape[0]
    counts = np.zeros(k, np.int64)
    sums = np.zeros(k, np.float64)
    cur = np.empty((_INTERVAL_CAP, 2), np.float64)
    nxt = np.empty((_INTERVAL_CAP, 2), np.float64)
    tas = 2.0 * alpha * sigma2
    kappa = 0  # 1-based committed arm, 0 = none
    ci = 0
    for t in range(1, horizon + 1):
        logt = np.log(t)
        at_cp = ci < checkpoints.shape[0] and t == checkpoints[ci]
        if at_cp:
            viol_out[ci] = _violation(counts, sums, mu_true, tas, logt)
        ncur = _plausible_intervals(
            seg, nseg, lo, hi, counts, sums, tas, logt, cur, nxt
        )
        if kappa == 0 and ncur > 0:
            # lowest plausible ambiguous parameter, if any
            pick = np.inf
            for c in range(ncur):
                best = np.inf
                for m in range(amb.shape[0]):
                    a = max(cur[c, 0], amb[m, 0])
                    b = min(cur[c, 1], amb[m, 1])
                    if a <= b and a < best:
                        best = a
                if best < np.inf:
                    pick = best
                    break
            if pick < np.inf:
                best_mu = -np.inf
                for i in range(k):
                    v = _eval_pwl(seg, nseg, bp_x, bp_at, nbp, i, pick)
                    if v > best_mu:
                        best_mu = v
                        kappa = i + 1
        if ncur == 0:
            arm = _least_pulled(counts)
        else:
            beta = max(0.0, np.log(np.log(max(t, 3))))
            arm = 0
            best_val = -np.inf
            for i in range(k):
                v = _sup_mean(seg, nseg, i, cur, ncur)
                if i + 1 == kappa:
                    if counts[i] == 0:
                        v = np.inf
                    else:
                        v += np.sqrt(beta * logt / counts[i])
                if v > best_val:
                    best_val = v
                    arm = i
        if arm + 1 != kappa:
            kappa = 0
        x = rewards[arm, counts[arm]]
        counts[arm] += 1
        sums[arm] += x
        if record_arms:
            arms_out[t - 1] = arm + 1
        if at_cp:
            for i in range(k):
                counts_out[ci, i] = counts[i]
            ci += 1


@njit(cache=True)
def phased_episode(rewards, horizon, checkpoints, counts_out, arms_out, record_arms):
    counts = np.zeros(2, np.int64)
    ell = 2
    mode = 0  # 0 force1, 1 force2, 2 run1, 3 run2
    c1 = 0
    c2 = 0
    s1 = 0.0
    s2 = 0.0
    ci = 0
    for t in range(1, horizon + 1):
        arm = -1
        while arm < 0:
            if mode == 0:
                if c1 < 2**ell:
                    arm = 0
                else:
                    mode = 1
            elif mode == 1:
                if c2 < ell * ell:
                    arm = 1
                else:
                    m1 = s1 / c1
                    m2 = s2 / c2
                    thr = -np.sqrt(5.0 * np.log(np.log(c1)) / c1)
                    if m1 >= thr and m2 < -0.5:
                        mode = 2
                    else:
                        mode = 3
            elif mode == 2:
                thr = -np.sqrt(5.0 * np.log(np.log(c1)) / c1)
                if s1 / c1 >= thr:
                    arm = 0
                else:
                    ell += 1
                    mode = 0
                    c1 = 0
                    c2 = 0
                    s1 = 0.0
                    s2 = 0.0
            else:
                if s2 / c2 >= -0.5:
                    arm = 1
                else:
                    ell += 1
                    mode = 0
                    c1 = 0
                    c2 = 0
                    s1 = 0.0
                    s2 = 0.0
        x = rewards[arm, counts[arm]]
        counts[arm] += 1
        if arm == 0:
            c1 += 1
            s1 += x
        else:
            c2 += 1
            s2 += x
        if record_arms:
            arms_out[t - 1] = arm + 1
        if ci < checkpoints.shape[0] and t == checkpoints[ci]:
            counts_out[ci, 0] = counts[0]
            counts_out[ci, 1] = counts[1]
            ci += 1
