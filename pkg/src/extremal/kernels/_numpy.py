"""Pure-numpy kernels.

Every function takes a ``dtype`` argument: ``np.int64`` for the fast path or
``object`` for exact Python-integer arithmetic when the caller's magnitude
bound does not fit in 64 bits.
"""

import itertools
from math import isqrt

import numpy as np

BLOCK = 1 << 20  # elements per evaluated 2-D block


def _power_tables(axes, max_exp, dtype):
    tables = []
    for vals, d in zip(axes, max_exp):
        v = np.asarray(vals, dtype=dtype)
        t = np.empty((len(v), d + 1), dtype=dtype)
        t[:, 0] = 1
        for e in range(1, d + 1):
            t[:, e] = t[:, e - 1] * v
        tables.append(t)
    return tables


def _blocks(lens, lo, hi):
    """Yield ``(prefix, row_start, row_stop)`` covering axis-0 indices [lo, hi)."""
    k = len(lens)
    rows_len = lens[k - 2]
    cols = max(lens[k - 1], 1)
    step = max(1, BLOCK // cols)
    if k == 2:
        for r in range(lo, hi, step):
            yield (), r, min(r + step, hi)
        return
    ranges = [range(lo, hi)] + [range(n) for n in lens[1:k - 2]]
    for prefix in itertools.product(*ranges):
        for r in range(0, rows_len, step):
            yield prefix, r, min(r + step, rows_len)


def _eval_block(coefs, exps, tables, prefix, r0, r1, dtype):
    k = exps.shape[1]
    rows_t = tables[k - 2]
    cols_t = tables[k - 1]
    out = np.zeros((r1 - r0, cols_t.shape[0]), dtype=dtype)
    for c, e in zip(coefs, exps):
        s = c
        for j, idx in enumerate(prefix):
            s = s * tables[j][idx, e[j]]
        out += (s * rows_t[r0:r1, e[k - 2]])[:, None] * cols_t[:, e[k - 1]][None, :]
    return out


def _pad(coefs, exps, axes):
    # guarantee at least two enumerated axes by appending a dummy axis {0}
    axes = list(axes)
    exps = np.asarray(exps, dtype=np.int64).reshape(len(coefs), len(axes))
    while len(axes) < 2:
        axes.append(np.zeros(1, dtype=np.int64))
        exps = np.hstack([exps, np.zeros((len(coefs), 1), dtype=np.int64)])
    return exps, axes


def count_zeros(coefs, exps, axes, lo, hi, dtype=np.int64):
    """Number of grid points with axis-0 index in [lo, hi) where the polynomial vanishes."""
    if len(coefs) == 0:
        return int(np.prod([hi - lo] + [len(a) for a in axes[1:]], dtype=object))
    exps, axes = _pad(coefs, exps, axes)
    tables = _power_tables(axes, exps.max(axis=0), dtype)
    coefs = [dtype(c) if dtype is not object else int(c) for c in coefs]
    lens = [len(a) for a in axes]
    total = 0
    for prefix, r0, r1 in _blocks(lens, lo, hi):
        vals = _eval_block(coefs, exps, tables, prefix, r0, r1, dtype)
        total += int(np.count_nonzero(vals == 0))
    return total


def count_solved(coefs, exps, axes, lo, hi, denom, target, t_interval, t_lo, t_hi, dtype=np.int64):
    """Count points whose forced value ``P(point) / denom`` lies in the target axis.

    ``target`` is a sorted int64 array; when ``t_interval`` is true membership
    is the range test ``t_lo <= v <= t_hi`` instead.
    """
    exps, axes = _pad(coefs, exps, axes)
    lens = [len(a) for a in axes]
    if len(coefs) == 0:
        member = (t_lo <= 0 <= t_hi) if t_interval else bool(np.isin(0, target))
        return int(np.prod([hi - lo] + lens[1:], dtype=object)) if member else 0
    tables = _power_tables(axes, exps.max(axis=0), dtype)
    coefs = [dtype(c) if dtype is not object else int(c) for c in coefs]
    target = np.asarray(target, dtype=dtype)
    total = 0
    for prefix, r0, r1 in _blocks(lens, lo, hi):
        p = _eval_block(coefs, exps, tables, prefix, r0, r1, dtype).ravel()
        if denom != 1:
            ok = (p % denom) == 0
            p = p[ok] // denom
        if t_interval:
            total += int(np.count_nonzero((p >= t_lo) & (p <= t_hi)))
        else:
            pos = np.searchsorted(target, p)
            pos = np.minimum(pos, len(target) - 1)
            total += int(np.count_nonzero(target[pos] == p))
    return total


def eval_rows(coefs, exps, rows, dtype=np.int64):
    """Evaluate at each row of an ``(N, m)`` integer array."""
    rows = np.asarray(rows)
    if dtype is object:
        rows = rows.astype(object)
    out = np.zeros(rows.shape[0], dtype=dtype)
    for c, e in zip(coefs, exps):
        t = np.full(rows.shape[0], c, dtype=dtype)
        for j, ej in enumerate(e):
            if ej:
                t = t * rows[:, j] ** int(ej)
        out += t
    return out


def _isqrt_vec(v):
    r = np.sqrt(v.astype(np.float64)).astype(np.int64)
    r = np.where(r * r > v, r - 1, r)
    r = np.where((r + 1) * (r + 1) <= v, r + 1, r)
    return r


def main_f_count(n, lo, hi):
    """Sum over x in [lo, hi) of #{y in [1, n] : 1 <= (x - y)^2 + x <= n}."""
    x = np.arange(lo, hi, dtype=np.int64)
    r = _isqrt_vec(n - x)
    a = np.maximum(-r, x - n)
    b = np.minimum(r, x - 1)
    return int(np.maximum(b - a + 1, 0).sum())


def valtr_count(n, lo, hi):
    """Sum over d in [lo, hi) of (n - |d|) * max(0, n - d^2)."""
    d = np.arange(lo, hi, dtype=np.int64)
    return int(((n - np.abs(d)) * np.maximum(n - d * d, 0)).sum())


def valtr_count_exact(n, lo, hi):
    r = isqrt(n)
    return sum((n - abs(d)) * (n - d * d) for d in range(max(lo, -r), min(hi, r + 1)))
