"""Compiled inner loops for the dynamic dispatching rules and the swap sweep.

Every kernel takes the parameter columns as int64 arrays indexed by
``job id - 1`` and returns 0-based job indices.  Ties go to the lowest index
because a candidate replaces the incumbent only when strictly better.
"""

import numpy as np
from numba import njit

WSPT = 0
ATC = 1
CA = 2
WMDD = 3


@njit(cache=True)
def dispatch(a, b, d, h, w, rule, kappa):
    n = a.shape[0]
    done = np.zeros(n, dtype=np.bool_)
    seq = np.empty(n, dtype=np.int64)
    t = 0
    for k in range(n):
        kr = 1.0
        if rule == ATC or rule == CA:
            total = 0
            for j in range(n):
                if not done[j]:
                    total += a[j] if t <= h[j] else a[j] + b[j]
            kr = kappa * (total / (n - k))
        best = -1
        best_val = 0.0
        for j in range(n):
            if done[j]:
                continue
            p = a[j] if t <= h[j] else a[j] + b[j]
            if rule == WMDD:
                slack_due = d[j] - t
                val = -(max(p, slack_due) / w[j])
            else:
                val = w[j] / p
                if rule != WSPT:
                    slack = d[j] - p - t
                    if slack < 0:
                        slack = 0
                    if rule == ATC:
                        val = val * np.exp(-slack / kr)
                    else:
                        val = val * (kr / (kr + slack))
            if best < 0 or val > best_val:
                best = j
                best_val = val
        done[best] = True
        seq[k] = best
        t += a[best] if t <= h[best] else a[best] + b[best]
    return seq


@njit(cache=True)
def mswsp_sequences(a, b, d, h, w, gammas):
    """One sequence per row of ``gammas`` (columns g1, g2, g3)."""
    n = a.shape[0]
    g = gammas.shape[0]
    out = np.empty((g, n), dtype=np.int64)
    first = 0
    for j in range(1, n):
        if d[j] < d[first]:
            first = j
    for r in range(g):
        g1 = gammas[r, 0]
        g2 = gammas[r, 1]
        g3 = gammas[r, 2]
        done = np.zeros(n, dtype=np.bool_)
        done[first] = True
        out[r, 0] = first
        t = a[first]
        for k in range(1, n):
            best = -1
            best_val = 0.0
            for j in range(n):
                if done[j]:
                    continue
                p = a[j] if t <= h[j] else a[j] + b[j]
                val = (g1 * d[j] + g2 * p + g3 * h[j]) / w[j]
                if best < 0 or val < best_val:
                    best = j
                    best_val = val
            done[best] = True
            out[r, k] = best
            t += a[best] if t <= h[best] else a[best] + b[best]
    return out


@njit(cache=True)
def _prefix(seq, a, b, d, h, w, start, cz, frm):
    # start[k]: start of position k (start[n] = makespan); cz[k]: Z of positions < k
    n = seq.shape[0]
    t = start[frm]
    z = cz[frm]
    for k in range(frm, n):
        j = seq[k]
        t += a[j] if t <= h[j] else a[j] + b[j]
        if t > d[j]:
            z += w[j] * (t - d[j])
        start[k + 1] = t
        cz[k + 1] = z


@njit(cache=True)
def _swapped_objective(seq, i, j, a, b, d, h, w, start, cz):
    n = seq.shape[0]
    incumbent = cz[n]
    t = start[i]
    z = cz[i]
    for k in range(i, n):
        if k > j and t == start[k]:
            # timing re-synchronised: the tail is unchanged
            return z + incumbent - cz[k]
        if k == i:
            job = seq[j]
        elif k == j:
            job = seq[i]
        else:
            job = seq[k]
        t += a[job] if t <= h[job] else a[job] + b[job]
        if t > d[job]:
            z += w[job] * (t - d[job])
            if z >= incumbent:
                return z
    return z


@njit(cache=True)
def swap_sweep(seq, a, b, d, h, w, to_fixpoint):
    """First-improvement pairwise swap; returns (sequence, swaps evaluated)."""
    n = seq.shape[0]
    seq = seq.copy()
    start = np.zeros(n + 1, dtype=np.int64)
    cz = np.zeros(n + 1, dtype=np.int64)
    _prefix(seq, a, b, d, h, w, start, cz, 0)
    evaluated = 0
    while True:
        improved = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                evaluated += 1
                if _swapped_objective(seq, i, j, a, b, d, h, w, start, cz) < cz[n]:
                    tmp = seq[i]
                    seq[i] = seq[j]
                    seq[j] = tmp
                    _prefix(seq, a, b, d, h, w, start, cz, i)
                    improved = True
        if not to_fixpoint or not improved:
            break
    return seq, evaluated
