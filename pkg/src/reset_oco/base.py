"""Base learners with a known horizon.

A base learner is created for a horizon ``horizon`` (the INITIALISE step),
then driven by alternating :meth:`query` / :meth:`update` calls, at most
``horizon`` rounds. Each learner class exposes ``gamma``, the constant in
its worst-case regret bound ``gamma * sqrt(horizon)``.
"""

from __future__ import annotations

import math
from functools import partial

import numpy as np

from reset_oco.domain import ActionSet, ContractError, Linear, LossFunction, Simplex


class LifecycleError(RuntimeError):
    """A query/update call arrived out of order or past the horizon."""


class BaseLearner:
    horizon: int

    def __init__(self, horizon: int):
        if int(horizon) != horizon or horizon < 1:
            raise ContractError(f"horizon must be a positive integer, got {horizon!r}")
        self.horizon = int(horizon)
        self.rounds = 0
        self._queried = False

    @property
    def gamma(self) -> float:
        raise NotImplementedError

    def _action(self) -> np.ndarray:
        raise NotImplementedError

    def _step(self, loss: LossFunction) -> None:
        raise NotImplementedError

    def query(self) -> np.ndarray:
        if self.rounds >= self.horizon:
            raise LifecycleError(f"horizon of {self.horizon} rounds exhausted")
        self._queried = True
        return self._action()

    def update(self, loss: LossFunction) -> None:
        if not self._queried:
            raise LifecycleError("update called without a preceding query")
        self._step(loss)
        self._queried = False
        self.rounds += 1


class OGD(BaseLearner):
    """Projected online gradient descent with the fixed step D / (G sqrt(horizon))."""

    def __init__(self, action_set: ActionSet, horizon: int, grad_bound: float):
        super().__init__(horizon)
        if grad_bound < 0:
            raise ContractError("gradient bound must be nonnegative")
        self.action_set = action_set
        self.grad_bound = float(grad_bound)
        self.current = action_set.center()
        diameter = action_set.diameter
        self.eta = diameter / ((self.grad_bound or 1.0) * math.sqrt(self.horizon))

    @property
    def gamma(self) -> float:
        return self.action_set.diameter * self.grad_bound

    def _action(self) -> np.ndarray:
        return self.current.copy()

    def _step(self, loss: LossFunction) -> None:
        g = loss.subgradient(self.current)
        if not np.any(g):
            return
        self.current = self.action_set.project(self.current - self.eta * g)


class Hedge(BaseLearner):
    """Exponential weights over ``n`` experts with rate sqrt(8 ln(n) / horizon).

    Weights are recomputed from cumulative losses on every query.
    """

    def __init__(self, n: int, horizon: int):
        super().__init__(horizon)
        if n < 1:
            raise ContractError("hedge needs at least one expert")
        self.n = int(n)
        self.cumulative_losses = np.zeros(self.n)
        self.eta = math.sqrt(8.0 * math.log(self.n) / self.horizon)

    @property
    def gamma(self) -> float:
        return math.sqrt(math.log(self.n) / 2.0)

    def weights(self) -> np.ndarray:
        z = -self.eta * self.cumulative_losses
        w = np.exp(z - z.max())
        return w / w.sum()

    def _action(self) -> np.ndarray:
        return self.weights()

    def _step(self, loss: LossFunction) -> None:
        if not isinstance(loss, Linear):
            raise ContractError("hedge only accepts linear losses")
        if loss.dim != self.n:
            raise ContractError(f"loss dimension {loss.dim} != {self.n} experts")
        self.cumulative_losses = self.cumulative_losses + loss.g


def initialise(kind: str, action_set: ActionSet, horizon: int, grad_bound: float | None = None) -> BaseLearner:
    if kind == "ogd":
        if grad_bound is None:
            raise ContractError("ogd needs a gradient bound")
        return OGD(action_set, horizon, grad_bound)
    if kind == "hedge":
        if not isinstance(action_set, Simplex):
            raise ContractError("hedge runs on a simplex only")
        return Hedge(action_set.n, horizon)
    raise ContractError(f"unknown base learner {kind!r}")


def factory(kind: str, action_set: ActionSet, grad_bound: float | None = None):
    """Return ``horizon -> BaseLearner``; fails fast on invalid arguments."""
    initialise(kind, action_set, 1, grad_bound)
    return partial(initialise, kind, action_set, grad_bound=grad_bound)
