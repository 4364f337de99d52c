"""numba-compiled kernels; same contracts as :mod:`extremal.kernels._numpy` on int64 data.

Callers must have checked that every intermediate fits in int64.
"""

import math

import numpy as np
from numba import njit

from . import _numpy


def _pack(axes, max_exp):
    m = len(axes)
    lens = np.array([len(a) for a in axes], dtype=np.int64)
    width = int(lens.max()) if m else 0
    deg = int(max(max_exp)) if m else 0
    pw = np.zeros((m, max(width, 1), deg + 1), dtype=np.int64)
    for j, vals in enumerate(axes):
        v = np.asarray(vals, dtype=np.int64)
        pw[j, : len(v), 0] = 1
        for e in range(1, deg + 1):
            pw[j, : len(v), e] = pw[j, : len(v), e - 1] * v
    return pw, lens


@njit(cache=True, nogil=True)
def _walk(coefs, exps, pw, lens, lo, hi, denom, target, t_interval, t_lo, t_hi, solved):
    k = exps.shape[1]
    nt = coefs.shape[0]
    last = k - 1
    if lo >= hi:
        return 0
    for j in range(1, k):
        if lens[j] == 0:
            return 0
    deg = 0
    for t in range(nt):
        deg = max(deg, exps[t, last])
    lv = pw[last, : lens[last], 1].copy() if deg > 0 else np.zeros(lens[last], dtype=np.int64)
    idx = np.zeros(k, dtype=np.int64)
    idx[0] = lo
    cf = np.empty(deg + 1, dtype=np.int64)
    total = 0
    # k >= 2 is guaranteed by the wrappers
    while True:
        # collapse to a univariate polynomial in the last variable; Horner's
        # partial sums stay under the same magnitude bound as the full value
        cf[:] = 0
        for t in range(nt):
            s = coefs[t]
            for j in range(last):
                s *= pw[j, idx[j], exps[t, j]]
            cf[exps[t, last]] += s
        if not solved:
            for i in range(lens[last]):
                x = lv[i]
                v = cf[deg]
                for e in range(deg - 1, -1, -1):
                    v = v * x + cf[e]
                if v == 0:
                    total += 1
        else:
            for i in range(lens[last]):
                x = lv[i]
                v = cf[deg]
                for e in range(deg - 1, -1, -1):
                    v = v * x + cf[e]
                if v % denom != 0:
                    continue
                w = v // denom
                if t_interval:
                    if t_lo <= w and w <= t_hi:
                        total += 1
                else:
                    p = np.searchsorted(target, w)
                    if p < target.shape[0] and target[p] == w:
                        total += 1
        # advance the mixed-radix counter over axes 0..last-1
        j = last - 1
        while j >= 0:
            idx[j] += 1
            bound = hi if j == 0 else lens[j]
            if idx[j] < bound:
                break
            if j == 0:
                return total
            idx[j] = 0
            j -= 1
    return total


def count_zeros(coefs, exps, axes, lo, hi, dtype=np.int64):
    if len(coefs) == 0 or len(axes) == 0:
        return _numpy.count_zeros(coefs, exps, axes, lo, hi, dtype)
    exps, axes = _numpy._pad(coefs, exps, axes)
    pw, lens = _pack(axes, exps.max(axis=0))
    dummy = np.zeros(1, dtype=np.int64)
    return int(_walk(np.asarray(coefs, dtype=np.int64), exps, pw, lens, lo, hi,
                     1, dummy, True, 0, 0, False))


def count_solved(coefs, exps, axes, lo, hi, denom, target, t_interval, t_lo, t_hi, dtype=np.int64):
    if len(coefs) == 0 or len(axes) == 0:
        return _numpy.count_solved(coefs, exps, axes, lo, hi, denom, target, t_interval, t_lo, t_hi, dtype)
    exps, axes = _numpy._pad(coefs, exps, axes)
    pw, lens = _pack(axes, exps.max(axis=0))
    target = np.asarray(target, dtype=np.int64)
    if target.shape[0] == 0:
        target = np.zeros(1, dtype=np.int64)
        t_interval, t_lo, t_hi = True, 1, 0
    return int(_walk(np.asarray(coefs, dtype=np.int64), exps, pw, lens, lo, hi,
                     int(denom), target, bool(t_interval), int(t_lo), int(t_hi), True))


@njit(cache=True, nogil=True)
def _eval_rows(coefs, exps, rows):
    n = rows.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for r in range(n):
        v = 0
        for t in range(coefs.shape[0]):
            s = coefs[t]
            for j in range(exps.shape[1]):
                for _ in range(exps[t, j]):
                    s *= rows[r, j]
            v += s
        out[r] = v
    return out


def eval_rows(coefs, exps, rows, dtype=np.int64):
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    if len(coefs) == 0:
        return np.zeros(rows.shape[0], dtype=np.int64)
    exps = np.asarray(exps, dtype=np.int64).reshape(len(coefs), -1)
    return _eval_rows(np.asarray(coefs, dtype=np.int64), exps, rows)


@njit(cache=True, nogil=True)
def _isqrt(v):
    r = np.int64(math.sqrt(v))
    while r * r > v:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r


@njit(cache=True, nogil=True)
def main_f_count(n, lo, hi):
    total = 0
    for x in range(lo, hi):
        r = _isqrt(n - x)
        a = max(-r, x - n)
        b = min(r, x - 1)
        if b >= a:
            total += b - a + 1
    return total


@njit(cache=True, nogil=True)
def valtr_count(n, lo, hi):
    total = 0
    for d in range(lo, hi):
        s = n - d * d
        if s > 0:
            total += (n - abs(d)) * s
    return total


valtr_count_exact = _numpy.valtr_count_exact
