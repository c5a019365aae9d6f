"""Ground-truth deciders. Both exclude the empty subset and handle negatives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityExceeded
from .solver.core import Instance, Solution

MAX_EXHAUSTIVE_N = 30
DP_RANGE_LIMIT = 10**7

# subset sums of the low bits are tabulated in blocks of this many elements
_BLOCK = 16


@dataclass(frozen=True)
class OracleVerdict:
    satisfiable: bool
    witness: Optional[Solution] = None

    def __bool__(self):
        return self.satisfiable


def _subset_sums(values) -> np.ndarray:
    """``sums[mask]`` for every mask over *values* (bit i <-> values[i])."""
    sums = np.zeros(1, dtype=np.int64)
    for v in values:
        sums = np.concatenate([sums, sums + v])
    return sums


def exhaustive_decide(inst: Instance, max_n: int = MAX_EXHAUSTIVE_N) -> OracleVerdict:
    """Scan all nonempty subsets; the witness is the smallest mask.

    Mask bit ``i`` stands for ``elements[i]``, so masks are visited in
    increasing integer order.
    """
    n, c = inst.n, inst.target
    if n > max_n:
        raise CapacityExceeded(f"exhaustive search limited to n <= {max_n}, got {n}")
    if n == 0:
        return OracleVerdict(False)
    total = sum(abs(a) for a in inst.elements) + abs(c)
    if total >= 1 << 62:
        return _exhaustive_python(inst)

    low_n = min(n, _BLOCK)
    low = _subset_sums(inst.elements[:low_n])
    high_values = inst.elements[low_n:]
    for high in range(1 << len(high_values)):
        offset = sum(v for k, v in enumerate(high_values) if high >> k & 1)
        hits = np.flatnonzero(low == c - offset)
        if high == 0:
            hits = hits[hits != 0]
        if hits.size:
            mask = (high << low_n) | int(hits[0])
            return OracleVerdict(True, _from_mask(inst, mask))
    return OracleVerdict(False)


def _exhaustive_python(inst: Instance) -> OracleVerdict:
    n, c = inst.n, inst.target
    for mask in range(1, 1 << n):
        if sum(inst.elements[i] for i in range(n) if mask >> i & 1) == c:
            return OracleVerdict(True, _from_mask(inst, mask))
    return OracleVerdict(False)


def _from_mask(inst: Instance, mask: int) -> Solution:
    return Solution.from_indices(inst, [i for i in range(inst.n) if mask >> i & 1])


def dp_decide(inst: Instance, range_limit: int = DP_RANGE_LIMIT) -> OracleVerdict:
    """Reachability over offset sums, one bitset row per prefix of the set.

    Bit ``s + span`` of ``rows[k]`` is set when some nonempty subset of the
    first ``k`` elements sums to ``s``.
    """
    span = sum(abs(a) for a in inst.elements)
    if span > range_limit:
        raise CapacityExceeded(f"sum of magnitudes {span} exceeds DP guard {range_limit}")
    c = inst.target
    if abs(c) > span or inst.n == 0:
        return OracleVerdict(False)
    rows = [0]
    for a in inst.elements:
        prev = rows[-1]
        moved = prev << a if a >= 0 else prev >> -a
        rows.append(prev | moved | (1 << (a + span)))
    if not rows[-1] >> (c + span) & 1:
        return OracleVerdict(False)

    chosen = []
    s = c
    for k in range(inst.n, 0, -1):
        if rows[k - 1] >> (s + span) & 1:
            continue
        a = inst.elements[k - 1]
        chosen.append(k - 1)
        if s == a:
            break
        s -= a
    return OracleVerdict(True, Solution.from_indices(inst, chosen))
