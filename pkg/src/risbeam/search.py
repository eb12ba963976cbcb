"""Globally optimal discrete phase selection by sweeping decision boundaries.

For a candidate direction ``mu`` of the aligned sum, each element picks the
coefficient with the largest projection on ``mu``. Between two adjacent
coefficients that choice flips at a fixed angle (the decision boundary), so
as ``mu`` travels once around the circle every element changes its selection
at most K times. Visiting every arc of the resulting partition and keeping
the best ``|g|`` gives the global optimum in at most ``N*K`` steps, provided
the coefficient set is locally convex.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    TWO_PI,
    BeamformingSolution,
    ChannelInstance,
    CoefficientSet,
    make_solution,
    wrap_angle,
    wrap_positive,
)

MERGE_TOL = 1e-12
DEFAULT_BUDGET = 10**7


class BudgetExceeded(ValueError):
    """Raised when exhaustive search would exceed its evaluation budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"exhaustive search needs {required} evaluations, budget is {budget}"
        )


def boundary_offsets(ws: CoefficientSet) -> tuple[np.ndarray, np.ndarray]:
    """Offsets ``delta_k`` and boundary angles ``s_k = phi_k - delta_k``.

    ``s_k`` is the direction at which coefficients ``k-1`` and ``k`` have
    equal projections; moving counter-clockwise across it makes ``k`` the
    better choice. The two-argument arctangent keeps this correct for gaps
    larger than pi.
    """
    zero = np.flatnonzero(ws.gains == 0)
    if zero.size:
        raise ValueError(
            f"decision boundary undefined: gain of phase index {int(zero[0])} is zero"
        )
    prev_gain = np.roll(ws.gains, 1)
    prev_gap = np.roll(ws.gaps, 1)
    y = ws.gains - prev_gain * np.cos(prev_gap)
    x = prev_gain * np.sin(prev_gap)
    deltas = np.arctan2(y, x)
    # arctan2 yields [-pi, pi]; fold -pi onto pi
    deltas = np.where(deltas <= -np.pi, deltas + TWO_PI, deltas)
    return deltas, wrap_angle(ws.phases - deltas)


@dataclass(frozen=True)
class BoundarySet:
    """Sorted boundary angles of all elements with their update lists.

    ``updates[l]`` holds the ``(element, target index)`` pairs switched when
    the cursor crosses ``angles[l]`` counter-clockwise.
    """

    deltas: np.ndarray
    s_angles: np.ndarray
    element_boundaries: np.ndarray
    angles: np.ndarray
    updates: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def L(self) -> int:
        return len(self.angles)


def build_boundary_schedule(channel: ChannelInstance, ws: CoefficientSet) -> BoundarySet:
    deltas, s_angles = boundary_offsets(ws)
    N, K = channel.N, ws.K
    nb = wrap_positive(channel.alphas[:, None] + s_angles[None, :]).reshape(N, K)
    # angles a hair below 2*pi coincide with 0 on the circle
    nb = np.where(nb >= TWO_PI - MERGE_TOL, 0.0, nb)

    flat = nb.ravel()
    order = np.argsort(flat, kind="stable")
    angles: list[float] = []
    updates: list[list[tuple[int, int]]] = []
    anchor = -np.inf
    for idx in order:
        a = flat[idx]
        n, k = divmod(int(idx), K)
        if a - anchor > MERGE_TOL:
            anchor = a
            angles.append(float(a))
            updates.append([])
        updates[-1].append((n, k))
    return BoundarySet(
        deltas=deltas,
        s_angles=s_angles,
        element_boundaries=nb,
        angles=np.asarray(angles),
        updates=tuple(tuple(u) for u in updates),
    )


def lemma1_assign(mu_angle: float, channel: ChannelInstance, ws: CoefficientSet) -> np.ndarray:
    """Per element, the coefficient with the largest projection on ``mu_angle``.

    Ties go to the smaller index.
    """
    rel = ws.phases[None, :] + channel.alphas[:, None] - mu_angle
    contrib = ws.gains[None, :] * np.cos(rel)
    return np.argmax(contrib, axis=1).reshape(channel.N)


def initial_cursor(schedule: BoundarySet) -> float:
    """A cursor angle strictly inside the arc that contains direction 0."""
    if schedule.L == 0:
        return 0.0
    first, last = schedule.angles[0], schedule.angles[-1]
    if first > 0:
        return 0.0
    # 0 is itself a boundary: step back into the wrap arc
    return 0.5 * (last - TWO_PI + first)


@dataclass
class SweepTrace:
    """Per-crossing record of a sweep, for diagnostics and tests."""

    g: list
    selections: list
    additions: int = 0


def _sweep(channel, ws, schedule, *, full_revolution=False, trace=None):
    h = channel.h
    w = ws.coefficients
    sel = lemma1_assign(initial_cursor(schedule), channel, ws).copy()
    g = channel.h0 + complex(np.sum(h * w[sel]))
    additions = channel.N

    best_abs, best_sel, best_arc = abs(g), sel.copy(), -1
    if trace is not None:
        trace.g.append(g)
        trace.selections.append(sel.copy())

    n_steps = schedule.L if full_revolution else max(schedule.L - 1, 0)
    for l in range(n_steps):
        for n, k in schedule.updates[l]:
            old = sel[n]
            if old == k:
                continue
            g += h[n] * w[k]
            g -= h[n] * w[old]
            additions += 2
            sel[n] = k
        if trace is not None:
            trace.g.append(g)
            trace.selections.append(sel.copy())
        if abs(g) > best_abs:
            best_abs, best_sel, best_arc = abs(g), sel.copy(), l
    if trace is not None:
        trace.additions = additions
    return best_sel, best_arc, n_steps, additions


def sweep_trace(channel: ChannelInstance, ws: CoefficientSet, full_revolution: bool = True) -> SweepTrace:
    """Run the sweep and record ``g`` and the selections after every crossing.

    Entry 0 is the initial assignment; with ``full_revolution`` the final
    crossing back into the initial arc is included.
    """
    schedule = build_boundary_schedule(channel, ws)
    trace = SweepTrace([], [])
    _sweep(channel, ws, schedule, full_revolution=full_revolution, trace=trace)
    return trace


def arc_of(schedule: BoundarySet, arc: int) -> tuple[float, float]:
    """Start and end angle of the arc entered after crossing ``angles[arc]``.

    ``arc = -1`` is the initial arc, the one containing direction 0.
    """
    a = schedule.angles
    if schedule.L == 0:
        return 0.0, TWO_PI
    if arc < 0 or arc == schedule.L - 1:
        return a[-1] - TWO_PI, a[0]
    return a[arc], a[arc + 1]


def algorithm1_optimize(channel: ChannelInstance, ws: CoefficientSet) -> BeamformingSolution:
    """Optimal selections by a single counter-clockwise sweep of the cursor.

    The result is certified optimal when ``ws.locally_convex`` holds; for
    other sets the sweep still runs and the solution is flagged.
    """
    if not ws.locally_convex:
        warnings.warn(
            "coefficient set is not locally convex; sweep result is not certified optimal",
            RuntimeWarning,
            stacklevel=2,
        )
    schedule = build_boundary_schedule(channel, ws)
    best_sel, best_arc, steps, additions = _sweep(channel, ws, schedule)
    lo, hi = arc_of(schedule, best_arc)
    return make_solution(
        channel,
        ws,
        best_sel,
        "alg1",
        steps=steps,
        n_boundaries=schedule.L,
        certified=ws.locally_convex,
        diagnostics={"additions": additions, "arc": (float(lo), float(hi))},
    )


def _partial_sums(vectors: np.ndarray) -> np.ndarray:
    """All sums picking one entry per row, in lexicographic order of picks."""
    out = np.zeros(1, dtype=complex)
    for row in vectors:
        out = (out[:, None] + row[None, :]).ravel()
    return out


def exhaustive_search(
    channel: ChannelInstance, ws: CoefficientSet, budget: int = DEFAULT_BUDGET
) -> BeamformingSolution:
    """Brute-force maximiser over all ``K**N`` selections.

    Ties resolve to the lexicographically smallest selection vector.
    """
    N, K = channel.N, ws.K
    required = K**N
    if required > budget:
        raise BudgetExceeded(required, budget)
    if N == 0:
        return make_solution(channel, ws, np.zeros(0, dtype=int), "exhaustive", steps=1)

    terms = channel.h[:, None] * ws.coefficients[None, :]
    head = N // 2
    front = _partial_sums(terms[:head]) + channel.h0
    back = _partial_sums(terms[head:])

    # process the front half in blocks to bound memory at ~2**21 sums
    block = max(1, (1 << 21) // back.size)
    best_val, best_idx = -np.inf, 0
    for start in range(0, front.size, block):
        p = np.abs(front[start : start + block, None] + back[None, :]) ** 2
        i = int(np.argmax(p))
        if p.flat[i] > best_val:
            best_val, best_idx = p.flat[i], start * back.size + i

    sel = np.empty(N, dtype=int)
    rem = best_idx
    for n in range(N - 1, -1, -1):
        rem, sel[n] = divmod(rem, K)
    return make_solution(channel, ws, sel, "exhaustive", steps=required)


def complexity_bound(N: int, K: int) -> int:
    """Vector additions allowed for a full sweep."""
    return N * (2 * K + 1)


def max_steps(N: int, K: int) -> int:
    return max(N * K - 1, 0)


__all__ = [
    "BoundarySet",
    "BudgetExceeded",
    "SweepTrace",
    "sweep_trace",
    "algorithm1_optimize",
    "arc_of",
    "boundary_offsets",
    "build_boundary_schedule",
    "complexity_bound",
    "exhaustive_search",
    "initial_cursor",
    "lemma1_assign",
    "max_steps",
]
