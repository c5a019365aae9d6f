"""The matrix-method procedure stack.

SUBSETSUM sorts the (sentinel-augmented) set and runs PARTIALSUBSETSUM
once per left rotation. PARTIALSUBSETSUM catches trivial subsets, then
for every window configuration calls CONSTRAIN for each target size ``t``;
CONSTRAIN tries four pivot-flag settings through BALANCE, which tries four
balance targets through TEST. TEST reads a contribution table and accepts
when the accumulated columns bring both balance values onto their targets.

``test_op``/``balance_op``/``constrain_op`` are the reference (pure-Python,
exact rational) route. Whole passes normally go through the compiled scan
in :mod:`.kernel`, which visits configurations in the same order; its
accepting configuration is re-run through ``test_op`` to build the subset.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..errors import DegenerateTargets, DegenerateWindow
from ..linsys import Arrangement, Assignment, contribution_table
from ..numerics import rat_in_unit_interval
from . import kernel
from .core import (
    SENTINEL,
    Instance,
    Solution,
    SolverConfig,
    SolveResult,
    SolveStats,
    verify_solution,
)

FLAG_ORDER = kernel.FLAG_ORDER


class SoundnessError(AssertionError):
    """The solver produced a subset that fails verification (a defect)."""


def fabricate_sentinel(inst: Instance) -> int:
    """A value no subset summing to the target can contain.

    ``M = sum|a_i| + |c| + 1``: any subset holding ``M`` has a sum of
    magnitude at least ``M - sum|a_i| = |c| + 1``.
    """
    return sum(abs(a) for a in inst.elements) + abs(inst.target) + 1


def _trivial_positions(values: Sequence[int], c: int) -> Optional[list]:
    n = len(values)
    running = 0
    for x in range(n):
        if values[x] == c:
            return [x]
        running += values[x]
        if running == c:
            return list(range(x + 1))
    for x in range(n):
        if running - values[x] == c:
            return [y for y in range(n) if y != x]
    for i in range(n):
        for j in range(i + 1, n):
            if values[i] + values[j] == c:
                return [i, j]
    return None


def trivial_scans(inst: Instance) -> Optional[Solution]:
    """Single element, current-order prefix, all-but-one, then any pair."""
    pos = _trivial_positions(inst.elements, inst.target)
    return None if pos is None else Solution.from_indices(inst, pos)


def enumerate_pairs(values: Sequence[int]) -> list:
    """Index pairs ``(i, j)``, ``i < j``, whose values differ (0-based)."""
    n = len(values)
    return [(i, j) for i in range(n) for j in range(i + 1, n) if values[i] != values[j]]


def enumerate_windows(pairs: Sequence[tuple]) -> list:
    windows = []
    for x in range(len(pairs)):
        p = pairs[x]
        for y in range(x + 1, len(pairs)):
            q = pairs[y]
            if p[0] in q or p[1] in q:
                continue
            windows.append((p[0], p[1], q[0], q[1]))
    return windows


def arrange(values, origins, window, swapped: bool = False) -> Arrangement:
    pos = kernel.swap_into_window(len(values), window)
    if swapped:
        pos[1], pos[2] = pos[2], pos[1]
    return Arrangement(tuple(values[p] for p in pos), tuple(origins[p] for p in pos))


def _subset(arr: Arrangement, positions) -> Solution:
    idx = tuple(arr.origin[p] for p in positions)
    values = tuple(arr.elements[p] for p in positions)
    order = sorted(range(len(idx)), key=idx.__getitem__)
    return Solution(tuple(idx[k] for k in order), tuple(values[k] for k in order), sum(values))


def test_op(
    arr: Arrangement,
    c: int,
    asg: Assignment,
    cfg: Optional[SolverConfig] = None,
    stats: Optional[SolveStats] = None,
) -> Optional[Solution]:
    cfg = cfg or SolverConfig()
    stats = stats if stats is not None else SolveStats()
    stats.test_calls += 1
    flags = asg.window_flags
    chosen = [p for p in range(4) if flags[p]]
    if chosen and sum(arr.elements[p] for p in chosen) == c:
        return _subset(arr, chosen)
    try:
        table = contribution_table(arr, asg, c)
    except (DegenerateWindow, DegenerateTargets):
        stats.degenerate_skips += 1
        return None
    top = bottom = 0
    taken = []
    scanned = 0
    for x in range(arr.n - 4):
        scanned += 1
        if rat_in_unit_interval(table.d3[x], cfg.d3_lower_inclusive):
            taken.append(x + 4)
            top += table.d1[x]
            bottom += table.d2[x]
            if top == 1 and bottom == 1:
                _record_scan(stats, scanned)
                return _subset(arr, chosen + taken)
    _record_scan(stats, scanned)
    return None


def _record_scan(stats: SolveStats, scanned: int) -> None:
    stats.column_evals += scanned
    stats.max_test_columns = max(stats.max_test_columns, scanned)


# keep pytest from collecting the procedure as a test
test_op.__test__ = False


def balance_op(arr, c, t, v_r, v_s, cfg=None, stats=None) -> Optional[Solution]:
    for t1, t2 in FLAG_ORDER:
        sol = test_op(arr, c, Assignment(t, t1, t2, v_r, v_s), cfg, stats)
        if sol is not None:
            return sol
    return None


def constrain_op(arr, c, t, cfg=None, stats=None) -> Optional[Solution]:
    if stats is not None:
        stats.constrain_calls += 1
    for v_r, v_s in FLAG_ORDER:
        sol = balance_op(arr, c, t, v_r, v_s, cfg, stats)
        if sol is not None:
            return sol
    return None


def _use_kernel(values, c, cfg: SolverConfig) -> bool:
    if cfg.engine == "reference":
        return False
    fits = kernel.fits_int64(values, c)
    if cfg.engine == "kernel" and not fits:
        raise OverflowError("instance magnitudes exceed the compiled scan's int64 range")
    return fits


def _window_pass(values, origins, c, cfg, stats, rotation_only) -> Optional[Solution]:
    m = len(values)
    if _use_kernel(values, c, cfg):
        if rotation_only:
            quads, perms = [(0, 1, 2, 3)], _rotation_perms(m)
            admissible = [0] if values[0] != values[1] and values[2] != values[3] else []
        else:
            quads, perms = kernel.window_table(m)
            admissible = [
                w for w, (p1, p2, q1, q2) in enumerate(quads.tolist())
                if values[p1] != values[p2] and values[q1] != values[q2]
            ]
        stats.windows += len(admissible)
        rows = [r for w in admissible for r in (2 * w, 2 * w + 1)]
        (row, t, q, col), counters = kernel.scan(values, perms, rows, c, cfg.d3_lower_inclusive)
        stats.constrain_calls += counters[0]
        stats.test_calls += counters[1]
        stats.column_evals += counters[2]
        stats.degenerate_skips += counters[3]
        stats.max_test_columns = max(stats.max_test_columns, counters[4])
        if col == kernel.NO_HIT:
            return None
        window = tuple(int(p) for p in quads[row // 2])
        arr = arrange(values, origins, window, swapped=bool(row % 2))
        (v_r, v_s), (t1, t2) = FLAG_ORDER[q // 4], FLAG_ORDER[q % 4]
        sol = test_op(arr, c, Assignment(t, t1, t2, v_r, v_s), cfg)
        if sol is None:
            raise SoundnessError("compiled scan accepted a configuration the reference rejects")
        return sol

    if rotation_only:
        ok = values[0] != values[1] and values[2] != values[3]
        windows = [(0, 1, 2, 3)] if ok else []
    else:
        windows = enumerate_windows(enumerate_pairs(values))
    stats.windows += len(windows)
    for window in windows:
        for swapped in (False, True):
            arr = arrange(values, origins, window, swapped)
            for t in range(3, m):
                sol = constrain_op(arr, c, t, cfg, stats)
                if sol is not None:
                    return sol
    return None


def _rotation_perms(m: int):
    ident = list(range(m))
    swapped = ident.copy()
    swapped[1], swapped[2] = swapped[2], swapped[1]
    return np.array([ident, swapped], dtype=np.int64)


def _partial(values, origins, c, cfg, stats, rotation_only=False) -> Optional[Solution]:
    stats.partial_calls += 1
    pos = _trivial_positions(values, c)
    if pos is not None:
        return Solution(
            tuple(origins[p] for p in pos), tuple(values[p] for p in pos), sum(values[p] for p in pos)
        )
    if len(values) < 5:
        return None
    return _window_pass(values, origins, c, cfg, stats, rotation_only)


def _canonical(sol: Solution) -> Solution:
    order = sorted(range(len(sol.indices)), key=sol.indices.__getitem__)
    return Solution(
        tuple(sol.indices[k] for k in order), tuple(sol.values[k] for k in order), sol.sum
    )


def partial_subset_sum(inst: Instance, cfg: Optional[SolverConfig] = None) -> Optional[Solution]:
    """One PARTIALSUBSETSUM pass over the instance in its given order (no sentinel)."""
    cfg = cfg or SolverConfig()
    sol = _partial(list(inst.elements), list(range(inst.n)), inst.target, cfg, SolveStats())
    return None if sol is None else _checked(inst, _canonical(sol))


def _checked(inst: Instance, sol: Solution) -> Solution:
    if not verify_solution(inst, sol):
        raise SoundnessError(f"unverifiable subset {sol} for {inst}")
    return sol


def solve(inst: Instance, cfg: Optional[SolverConfig] = None, approx: bool = False) -> SolveResult:
    """Run SUBSETSUM (or the rotation-only approximation) and keep the counters."""
    cfg = cfg or SolverConfig()
    stats = SolveStats()
    values = list(inst.elements)
    origins = list(range(inst.n))
    if cfg.enable_fabrication:
        values.append(fabricate_sentinel(inst))
        origins.append(SENTINEL)
    order = sorted(range(len(values)), key=lambda i: -abs(values[i]))
    values = [values[i] for i in order]
    origins = [origins[i] for i in order]
    for _ in range(len(values)):
        stats.rotations += 1
        sol = _partial(values, origins, inst.target, cfg, stats, rotation_only=approx)
        if sol is not None:
            return SolveResult(_checked(inst, _canonical(sol)), stats)
        values = values[1:] + values[:1]
        origins = origins[1:] + origins[:1]
    return SolveResult(None, stats)


def subset_sum(inst: Instance, cfg: Optional[SolverConfig] = None) -> Optional[Solution]:
    return solve(inst, cfg).solution


def subset_sum_approx(inst: Instance, cfg: Optional[SolverConfig] = None) -> Optional[Solution]:
    return solve(inst, cfg, approx=True).solution
