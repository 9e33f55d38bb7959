"""Regret accounting over a recorded trace.

Segments are inclusive 1-based trial ranges ``(q, s)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from reset_oco.domain import ActionSet, ClampedQuadratic, ContractError, Linear, LossFunction, Simplex

SOLVER_TOL = 1e-6


@dataclass(frozen=True)
class Trace:
    actions: np.ndarray  # (T, dim)
    losses: tuple
    loss_values: np.ndarray  # (T,)

    @classmethod
    def from_run(cls, actions: Sequence, losses: Sequence[LossFunction]) -> "Trace":
        actions = np.asarray(actions, dtype=np.float64)
        if len(actions) != len(losses):
            raise ContractError("actions and losses differ in length")
        values = np.array([f.eval(x) for x, f in zip(actions, losses)])
        return cls(actions, tuple(losses), values)

    @property
    def T(self) -> int:
        return len(self.losses)

    def linear_matrix(self) -> np.ndarray | None:
        """(T, N) coefficient matrix if every loss is linear, else None."""
        if not all(isinstance(f, Linear) for f in self.losses):
            return None
        return np.vstack([f.g for f in self.losses])


@dataclass(frozen=True)
class Segmentation:
    boundaries: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.boundaries)
        if len(b) < 2 or b[0] != 1 or any(x >= y for x, y in zip(b, b[1:])):
            raise ContractError(f"malformed segmentation boundaries {b}")
        object.__setattr__(self, "boundaries", b)

    @classmethod
    def from_lengths(cls, lengths: Sequence[int]) -> "Segmentation":
        if not lengths or any(n < 1 for n in lengths):
            raise ContractError("segment lengths must be positive")
        return cls(tuple(np.concatenate([[1], 1 + np.cumsum(lengths)]).tolist()))

    @classmethod
    def single(cls, T: int) -> "Segmentation":
        return cls((1, T + 1))

    @property
    def T(self) -> int:
        return self.boundaries[-1] - 1

    @property
    def lengths(self) -> list[int]:
        b = self.boundaries
        return [b[k + 1] - b[k] for k in range(len(b) - 1)]

    def segments(self) -> list[tuple[int, int]]:
        b = self.boundaries
        return [(b[k], b[k + 1] - 1) for k in range(len(b) - 1)]

    def __len__(self):
        return len(self.boundaries) - 1


def _check_segment(trace: Trace, segment: tuple[int, int]) -> tuple[int, int]:
    q, s = segment
    if not 1 <= q <= s <= trace.T:
        raise ContractError(f"segment {segment} not inside [1, {trace.T}]")
    return q, s


def _weighted_mean(losses: Sequence[ClampedQuadratic]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    scales = np.array([f.scale for f in losses])
    centers = np.vstack([f.a for f in losses])
    return scales @ centers / scales.sum(), scales, centers


def minimise_quadratics_numeric(losses: Sequence[ClampedQuadratic], action_set: ActionSet, start=None) -> np.ndarray:
    """Projected subgradient descent on the summed losses, 10 * len(losses) steps of size 1 / (L sqrt(k)).

    Returns the best iterate seen.
    """
    mean, scales, centers = _weighted_mean(losses)
    x = action_set.project(mean if start is None else start)

    def objective(y):
        return float(np.minimum(1.0, scales * np.sum((centers - y) ** 2, axis=1)).sum())

    lipschitz = 2.0 * scales.sum()
    best, best_val = x, objective(x)
    for k in range(1, 10 * len(losses) + 1):
        d = x - centers
        active = scales * np.sum(d**2, axis=1) < 1.0
        g = 2.0 * (scales[active, None] * d[active]).sum(axis=0)
        x = action_set.project(x - g / (lipschitz * np.sqrt(k)))
        val = objective(x)
        if val < best_val:
            best, best_val = x, val
    return best


def farthest_distance(action_set: ActionSet, centers: np.ndarray) -> np.ndarray:
    """Largest distance from each row of ``centers`` to a point of the set."""
    if isinstance(action_set, Simplex):
        # a convex function peaks at a vertex
        eye = np.eye(action_set.n)
        return np.linalg.norm(centers[:, None, :] - eye[None], axis=2).max(axis=1)
    return np.linalg.norm(centers - action_set.center(), axis=1) + action_set.radius


def minimise_quadratics(losses: Sequence[ClampedQuadratic], action_set: ActionSet) -> np.ndarray:
    mean, scales, centers = _weighted_mean(losses)
    x = action_set.project(mean)
    # with every clamp inactive on the set the objective is sum(s) * ||x - mean||^2 + const,
    # so projecting the weighted mean is exact
    if np.all(scales * farthest_distance(action_set, centers) ** 2 <= 1.0):
        return x
    return minimise_quadratics_numeric(losses, action_set, start=x)


def best_in_hindsight(trace: Trace, segment: tuple[int, int], action_set: ActionSet) -> tuple[np.ndarray, float]:
    """Minimiser of the segment's cumulative loss over the action set and its value."""
    q, s = _check_segment(trace, segment)
    losses = trace.losses[q - 1 : s]
    if isinstance(action_set, Simplex) and all(isinstance(f, Linear) for f in losses):
        totals = np.sum([f.g for f in losses], axis=0)
        j = int(np.argmin(totals))
        x = np.zeros(action_set.n)
        x[j] = 1.0
        return x, float(totals[j])
    quads = [f for f in losses if isinstance(f, ClampedQuadratic)]
    if len(quads) + sum(1 for f in losses if isinstance(f, Linear) and not np.any(f.g)) != len(losses):
        raise ContractError("no comparator solver for this mix of losses and action set")
    if not quads:
        x = action_set.center()
    else:
        x = minimise_quadratics(quads, action_set)
    return x, float(sum(f.eval(x) for f in losses))


def static_regret(trace: Trace, segment: tuple[int, int], action_set: ActionSet) -> float:
    q, s = _check_segment(trace, segment)
    _, best = best_in_hindsight(trace, (q, s), action_set)
    return float(trace.loss_values[q - 1 : s].sum() - best)


def switching_regret(trace: Trace, segmentation: Segmentation, action_set: ActionSet) -> float:
    if segmentation.T != trace.T:
        raise ContractError(f"segmentation covers {segmentation.T} trials, trace has {trace.T}")
    return float(sum(static_regret(trace, seg, action_set) for seg in segmentation.segments()))


def hindsight_comparator(trace: Trace, segmentation: Segmentation, action_set: ActionSet) -> np.ndarray:
    """Piecewise-constant comparator (T + 1 entries) using the best action per segment."""
    if segmentation.T != trace.T:
        raise ContractError("segmentation does not match the trace")
    rows = []
    for q, s in segmentation.segments():
        x, _ = best_in_hindsight(trace, (q, s), action_set)
        rows.extend([x] * (s - q + 1))
    rows.append(rows[-1])
    return np.vstack(rows)


def dynamic_regret(trace: Trace, comparators) -> float:
    E = np.asarray(comparators, dtype=np.float64)
    if len(E) != trace.T + 1:
        raise ContractError(f"comparator sequence needs {trace.T + 1} entries, got {len(E)}")
    theirs = sum(f.eval(e) for f, e in zip(trace.losses, E[:-1]))
    return float(trace.loss_values.sum() - theirs)


def path_length(comparators, segment: tuple[int, int]) -> float:
    """Sum of ||e[t+1] - e[t]|| for t in the segment (1-based, e has T + 1 rows)."""
    E = np.asarray(comparators, dtype=np.float64)
    q, s = segment
    if not 1 <= q <= s <= len(E) - 1:
        raise ContractError(f"segment {segment} outside the comparator sequence")
    steps = np.diff(E[q - 1 : s + 1], axis=0)
    return float(np.linalg.norm(steps, axis=1).sum())


def cumulative_regret_curve(trace: Trace, comparators) -> np.ndarray:
    """Running sum of loss_t - l_t(e_t)."""
    E = np.asarray(comparators, dtype=np.float64)
    theirs = np.array([f.eval(e) for f, e in zip(trace.losses, E)])
    return np.cumsum(trace.loss_values - theirs)


def experts_switching_regret(G: np.ndarray, played_losses: np.ndarray, segmentation: Segmentation) -> float:
    """Vectorised switching regret for linear losses on a simplex.

    ``G`` is the (T, N) loss matrix, ``played_losses`` the per-trial losses of the learner.
    """
    cum = np.vstack([np.zeros(G.shape[1]), np.cumsum(G, axis=0)])
    played = np.concatenate([[0.0], np.cumsum(played_losses)])
    b = np.asarray(segmentation.boundaries) - 1
    best = (cum[b[1:]] - cum[b[:-1]]).min(axis=1)
    return float((played[b[1:]] - played[b[:-1]] - best).sum())
