"""The RESET meta-algorithm.

Level ``i`` (0 <= i <= tau, T = 2**tau) runs a base learner with horizon
``2**i`` that is restarted every ``2**i`` trials, together with a mixing
weight ``mu[i]`` updated by two-expert exponential weights. The played
action is built bottom-up::

    z[0] = w[0]
    z[i] = mu[i] * w[i] + (1 - mu[i]) * z[i-1]
    x    = z[tau]
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from reset_oco.base import BaseLearner, LifecycleError
from reset_oco.domain import ContractError, LossFunction

LN2 = math.log(2.0)


def psi(rho: float, a: float, b: float, horizon: int) -> float:
    """Two-expert exponential-weights update of the first expert's weight.

    Rate is sqrt(2 ln 2 / horizon); ``a`` and ``b`` are the two experts' losses.
    """
    if not 0.0 <= rho <= 1.0:
        raise ContractError(f"rho must lie in [0, 1], got {rho!r}")
    if horizon < 1:
        raise ContractError("horizon must be >= 1")
    eta = math.sqrt(2.0 * LN2 / horizon)
    m = min(a, b)
    num = rho * math.exp(-(a - m) * eta)
    return num / (num + (1.0 - rho) * math.exp(-(b - m) * eta))


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


@dataclass
class CallCounter:
    """Base-learner calls made during the current trial."""

    queries: int = 0
    updates: int = 0
    initialises: int = 0

    def clear(self):
        self.queries = self.updates = self.initialises = 0


class Reset:
    """RESET over ``horizon`` trials.

    ``base_factory`` maps a horizon to a fresh :class:`BaseLearner`.
    With ``record=True`` every per-level action taken at the end of a trial is
    appended to ``events`` as ``(t, level, kind, mu_before)``, ``kind`` being
    ``"reset"`` or ``"step"``.
    """

    def __init__(self, horizon: int, base_factory, record: bool = False):
        if not is_power_of_two(horizon):
            raise ContractError(f"horizon must be a power of two, got {horizon!r}")
        self.horizon = int(horizon)
        self.tau = self.horizon.bit_length() - 1
        self.base_factory = base_factory
        self.counter = CallCounter()
        # mu[0] is never read; kept at 1/2 so indices line up with levels
        self.mu = [0.5] * (self.tau + 1)
        self.learners: list[BaseLearner] = [self._fresh(i) for i in range(self.tau + 1)]
        self.t = 1
        self._w: list[np.ndarray] | None = None
        self._z: list[np.ndarray] | None = None
        self._mu_used: list[float] | None = None
        self.events: list[tuple[int, int, str, float]] | None = [] if record else None

    def _fresh(self, level: int) -> BaseLearner:
        self.counter.initialises += 1
        return self.base_factory(2**level)

    @property
    def levels(self) -> int:
        return self.tau + 1

    def query(self) -> np.ndarray:
        if self.t > self.horizon:
            raise LifecycleError("horizon exhausted")
        if self._w is not None:
            raise LifecycleError("query called twice in one trial")
        self.counter.clear()
        w = []
        for learner in self.learners:
            w.append(learner.query())
            self.counter.queries += 1
        z = [w[0]]
        for i in range(1, self.tau + 1):
            z.append(self.mu[i] * w[i] + (1.0 - self.mu[i]) * z[i - 1])
        self._w, self._z, self._mu_used = w, z, list(self.mu)
        return z[-1].copy()

    def update(self, loss: LossFunction) -> None:
        if self.t > self.horizon:
            raise LifecycleError("horizon exhausted")
        if self._w is None:
            raise LifecycleError("update called without a preceding query")
        t, w, z = self.t, self._w, self._z
        for i in range(self.tau + 1):
            if t % (1 << i) == 0:
                self._log(t, i, "reset")
                self.mu[i] = 0.5
                self.learners[i] = self._fresh(i)
            else:
                self._log(t, i, "step")
                self.mu[i] = psi(self.mu[i], loss.eval(w[i]), loss.eval(z[i - 1]), 1 << i)
                self.learners[i].update(loss)
                self.counter.updates += 1
        self._w = self._z = None
        self.t += 1

    def _log(self, t, level, kind):
        if self.events is not None:
            self.events.append((t, level, kind, self.mu[level]))

    @property
    def base_actions(self) -> list[np.ndarray]:
        if self._w is None:
            raise LifecycleError("no query cached for the current trial")
        return [w.copy() for w in self._w]

    @property
    def propagating_actions(self) -> list[np.ndarray]:
        if self._z is None:
            raise LifecycleError("no query cached for the current trial")
        return [z.copy() for z in self._z]

    def mixing_coefficients(self) -> np.ndarray:
        """Weight of each level's base action in the played action."""
        if self._mu_used is None:
            raise LifecycleError("no query cached for the current trial")
        return mixing_coefficients(self._mu_used)


def mixing_coefficients(mu) -> np.ndarray:
    """c[i] = mu[i] * prod_{j>i}(1 - mu[j]) for i >= 1, c[0] = prod_{j>=1}(1 - mu[j])."""
    tau = len(mu) - 1
    c = np.empty(tau + 1)
    tail = 1.0
    for i in range(tau, 0, -1):
        c[i] = mu[i] * tail
        tail *= 1.0 - mu[i]
    c[0] = tail
    return c
