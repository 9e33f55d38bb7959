"""Synthetic non-stationary loss streams.

Randomness comes from numpy's PCG64 bit generator seeded with the run seed.
Draw order is fixed so streams are reproducible across platforms:

* experts: one ``integers`` draw per segment for the designated best expert
  (all segments first), then per trial one ``random(N)`` vector;
* quadratic: the starting minimiser, uniform in the ball of half the
  radius (``standard_normal(dim)`` then ``random()``), then one
  ``standard_normal(dim)`` draw per trial, normalised to a unit direction,
  for trials 1..T-1 (trial T's minimiser does not move).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from reset_oco.domain import Ball, ClampedQuadratic, ContractError, Linear, Simplex
from reset_oco.regret import Segmentation


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class PiecewiseExperts:
    n: int
    segmentation: Segmentation
    gap: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ContractError("need at least one expert")
        if not 0.0 < self.gap <= 0.5:
            raise ContractError(f"gap must lie in (0, 0.5], got {self.gap}")

    @property
    def T(self) -> int:
        return self.segmentation.T

    def action_set(self) -> Simplex:
        return Simplex(self.n)


@dataclass(frozen=True)
class DriftingQuadratic:
    dim: int
    segmentation: Segmentation
    drifts: tuple[float, ...]
    radius: float = 1.0
    scale: float | None = None  # None: 1 / diameter^2, the largest clamp-free scale
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ContractError("dimension must be >= 1")
        if len(self.drifts) != len(self.segmentation):
            raise ContractError("need one drift rate per segment")
        if any(not np.isfinite(d) or d < 0 for d in self.drifts):
            raise ContractError("drift rates must be finite and nonnegative")

    @property
    def T(self) -> int:
        return self.segmentation.T

    def action_set(self) -> Ball:
        return Ball(np.zeros(self.dim), self.radius)

    @property
    def loss_scale(self) -> float:
        return self.scale if self.scale is not None else 1.0 / (2.0 * self.radius) ** 2


def gen_piecewise_experts(env: PiecewiseExperts) -> tuple[list[Linear], list[int]]:
    """Bernoulli expert losses; returns the losses and the best expert per segment.

    Consecutive segments get distinct best experts whenever n > 1.
    """
    rng = make_rng(env.seed)
    best = []
    for _ in range(len(env.segmentation)):
        if env.n == 1:
            best.append(0)
            continue
        b = int(rng.integers(env.n - 1 if best else env.n))
        if best and b >= best[-1]:
            b += 1
        best.append(b)
    losses = []
    for k, (q, s) in enumerate(env.segmentation.segments()):
        p = np.full(env.n, 0.5)
        p[best[k]] = 0.5 - env.gap
        for _ in range(q, s + 1):
            losses.append(Linear((rng.random(env.n) < p).astype(np.float64)))
    return losses, best


def gen_drifting_quadratic(env: DriftingQuadratic) -> tuple[list[ClampedQuadratic], np.ndarray]:
    """Clamped quadratics whose minimiser random-walks at a per-segment speed.

    Returns the losses and the comparator sequence of minimisers (T + 1 rows,
    the last one repeating trial T's minimiser).
    """
    rng = make_rng(env.seed)
    ball = env.action_set()
    rate = np.empty(env.T)
    for k, (q, s) in enumerate(env.segmentation.segments()):
        rate[q - 1 : s] = env.drifts[k]
    a = np.empty((env.T + 1, env.dim))
    u = rng.standard_normal(env.dim)
    u *= 0.5 * env.radius * rng.random() ** (1.0 / env.dim) / np.linalg.norm(u)
    a[0] = ball.center() + u
    for t in range(1, env.T):
        u = rng.standard_normal(env.dim)
        u /= np.linalg.norm(u)
        a[t] = ball.project(a[t - 1] + rate[t - 1] * u)
    a[env.T] = a[env.T - 1]
    losses = [ClampedQuadratic(a[t], env.loss_scale) for t in range(env.T)]
    return losses, a
