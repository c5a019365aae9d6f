"""Compiled scan over every (arrangement, t, flag) configuration of one pass.

The kernel walks configurations in exactly the order the reference
procedures do and reports the first accepting one together with the
operation counters the reference path would have accumulated up to it.
All divisions of the contribution table are cleared: with
``P = delta1 * delta2`` and
``N = delta1*a1 + delta2*a2 - f*(delta1 + delta2)`` the column test
``0 <= D3 < 1`` is ``|N| < |P|``, and ``sum(D1) == 1`` is
``sum(a2 - f) == delta1`` (likewise for ``D2``). Only used when every
intermediate provably fits in int64; see :func:`fits_int64`.
"""

from __future__ import annotations

from functools import lru_cache

import numba
import numpy as np

# (first, second) flag order used by both CONSTRAIN (v_r, v_s) and BALANCE (t1, t2)
FLAG_ORDER = ((1, 1), (0, 0), (1, 0), (0, 1))
_FLAGS = np.array(FLAG_ORDER, dtype=np.int64)

_LIMIT = 1 << 30

NO_HIT = -2
SHORT_CIRCUIT = -1


def fits_int64(values, c) -> bool:
    m = len(values)
    big = max((abs(v) for v in values), default=0)
    bound = (m + 6) * big + abs(c)
    return bound < _LIMIT


def swap_into_window(m: int, window) -> list:
    """Positions after swapping the window's members into slots 0..3 one at a time."""
    pos = list(range(m))
    where = list(range(m))  # where[p] = slot currently holding original position p
    for slot, p in enumerate(window):
        j = where[p]
        q = pos[slot]
        pos[slot], pos[j] = p, q
        where[p], where[q] = slot, j
    return pos


@lru_cache(maxsize=64)
def window_table(m: int):
    """All windows of an m-element array as if every pair were admissible.

    Returns ``(quads, perms)``: ``quads[w]`` holds the four positions of
    window ``w`` (pair order preserved) and ``perms[2w]``/``perms[2w+1]``
    are the as-is and second/third-swapped arrangements. Filtering pairs
    by value keeps the relative order, so callers mask rows instead of
    re-enumerating.
    """
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    quads = []
    for x in range(len(pairs)):
        p = pairs[x]
        for y in range(x + 1, len(pairs)):
            q = pairs[y]
            if p[0] in q or p[1] in q:
                continue
            quads.append((p[0], p[1], q[0], q[1]))
    perms = np.empty((2 * len(quads), m), dtype=np.int64)
    for w, quad in enumerate(quads):
        pos = swap_into_window(m, quad)
        perms[2 * w] = pos
        pos[1], pos[2] = pos[2], pos[1]
        perms[2 * w + 1] = pos
    return np.array(quads, dtype=np.int64).reshape(-1, 4), perms


@numba.njit(cache=True)
def _scan(values, perms, rows, c, inclusive, counters):
    """Return (row, t, combo, column) of the first accepting TEST.

    ``column`` is SHORT_CIRCUIT when the window flags alone sum to c and
    NO_HIT when nothing accepts (then the other fields are -1).
    ``counters`` = [constrain, test, columns, degenerate, max_columns].
    """
    m = values.shape[0]
    nfree = m - 4
    arr = np.empty(m, dtype=np.int64)
    for ri in range(rows.shape[0]):
        row = rows[ri]
        for k in range(m):
            arr[k] = values[perms[row, k]]
        a1 = arr[0]
        a2 = arr[1]
        ar = arr[2]
        as_ = arr[3]
        beta = a1 - a2
        for t in range(3, m):
            counters[0] += 1
            for q in range(16):
                v_r = _FLAGS[q // 4, 0]
                v_s = _FLAGS[q // 4, 1]
                t1 = _FLAGS[q % 4, 0]
                t2 = _FLAGS[q % 4, 1]
                counters[1] += 1
                if t1 + t2 + v_r + v_s > 0:
                    if t1 * a1 + t2 * a2 + v_r * ar + v_s * as_ == c:
                        return row, t, q, SHORT_CIRCUIT
                d1 = t1 * beta + v_s * (as_ - a2) + v_r * (ar - a2) + a2 * t - c
                d2 = t2 * beta - v_s * (as_ - a1) - v_r * (ar - a1) - a1 * t + c
                if beta == 0 or d1 == 0 or d2 == 0:
                    counters[3] += 1
                    continue
                prod = abs(d1 * d2)
                base = d1 * a1 + d2 * a2
                dsum = d1 + d2
                top = 0
                bot = 0
                for x in range(nfree):
                    f = arr[4 + x]
                    num = base - f * dsum
                    counters[2] += 1
                    if abs(num) < prod and (inclusive or num != 0):
                        top += a2 - f
                        bot += f - a1
                        if top == d1 and bot == d2:
                            if x + 1 > counters[4]:
                                counters[4] = x + 1
                            return row, t, q, x
                if nfree > counters[4]:
                    counters[4] = nfree
    return -1, -1, -1, NO_HIT


def scan(values, perms, rows, c, inclusive):
    counters = np.zeros(5, dtype=np.int64)
    hit = _scan(
        np.asarray(values, dtype=np.int64),
        perms,
        np.asarray(rows, dtype=np.int64),
        np.int64(c),
        bool(inclusive),
        counters,
    )
    return tuple(int(h) for h in hit), [int(x) for x in counters]
