"""Actions, action sets and loss functions.

Actions are plain 1-d float64 numpy arrays. Action sets and losses are
frozen dataclasses; their array fields are copied and made read-only on
construction so that instances can be shared freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ContractError(ValueError):
    """Raised when a caller violates a precondition of the library."""


def as_vector(p, dim: int | None = None) -> np.ndarray:
    v = np.asarray(p, dtype=np.float64)
    if v.ndim != 1:
        raise ContractError(f"expected a 1-d vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ContractError(f"dimension mismatch: expected {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ContractError("vector has non-finite entries")
    return v


def _frozen(p) -> np.ndarray:
    v = np.array(p, dtype=np.float64)
    v.setflags(write=False)
    return v


def project_simplex(p: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort and threshold)."""
    n = p.shape[0]
    u = np.sort(p)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, n + 1)
    rho = np.nonzero(u - css / ks > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(p - theta, 0.0)


# ---------------------------------------------------------------------------
# Action sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Simplex:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ContractError("simplex needs n >= 1")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def diameter(self) -> float:
        return math.sqrt(2.0) if self.n >= 2 else 0.0

    def center(self) -> np.ndarray:
        return np.full(self.n, 1.0 / self.n)

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,) or not np.all(np.isfinite(x)):
            return False
        return bool(np.all(x >= -tol) and np.all(x <= 1.0 + tol) and abs(x.sum() - 1.0) <= tol)

    def project(self, p) -> np.ndarray:
        p = as_vector(p, self.n)
        if self.contains(p, tol=0.0):
            return p.copy()
        return project_simplex(p)


@dataclass(frozen=True)
class Ball:
    center_point: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center_point", _frozen(as_vector(self.center_point)))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ContractError("ball radius must be positive and finite")

    @property
    def dim(self) -> int:
        return self.center_point.shape[0]

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def center(self) -> np.ndarray:
        return self.center_point.copy()

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,) or not np.all(np.isfinite(x)):
            return False
        return bool(np.linalg.norm(x - self.center_point) <= self.radius + tol)

    def project(self, p) -> np.ndarray:
        p = as_vector(p, self.dim)
        d = p - self.center_point
        r = np.linalg.norm(d)
        if r <= self.radius:
            return p.copy()
        return self.center_point + d * (self.radius / r)


ActionSet = Simplex | Ball


def project(action_set: ActionSet, p) -> np.ndarray:
    return action_set.project(p)


# ---------------------------------------------------------------------------
# Losses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Linear:
    """Linear loss x -> <g, x> with g in [0, 1]^N.

    Only meaningful on a simplex, where the values stay in [0, 1]. The
    all-zero vector is the one exception and is accepted on any set (used
    for horizon padding).
    """

    g: np.ndarray

    def __post_init__(self):
        g = as_vector(self.g)
        if np.any(g < 0.0) or np.any(g > 1.0):
            raise ContractError("linear loss coefficients must lie in [0, 1]")
        object.__setattr__(self, "g", _frozen(g))

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def eval(self, x) -> float:
        return float(self.g @ x)

    def subgradient(self, x) -> np.ndarray:
        return self.g.copy()

    def grad_bound(self) -> float:
        return float(np.linalg.norm(self.g))


@dataclass(frozen=True)
class ClampedQuadratic:
    """x -> min(1, scale * ||x - a||^2).

    Convex on a set only while the clamp stays inactive there, i.e. when
    scale * (max distance from `a` over the set)^2 <= 1.
    """

    a: np.ndarray
    scale: float

    def __post_init__(self):
        object.__setattr__(self, "a", _frozen(as_vector(self.a)))
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ContractError("quadratic scale must be positive and finite")

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def eval(self, x) -> float:
        d = x - self.a
        return min(1.0, self.scale * float(d @ d))

    def subgradient(self, x) -> np.ndarray:
        d = x - self.a
        if self.scale * float(d @ d) >= 1.0:
            return np.zeros_like(d)
        return 2.0 * self.scale * d

    def grad_bound(self) -> float:
        # ||2 s d|| with s ||d||^2 < 1  =>  < 2 sqrt(s)
        return 2.0 * math.sqrt(self.scale)


LossFunction = Linear | ClampedQuadratic


def is_zero_loss(loss: LossFunction) -> bool:
    return isinstance(loss, Linear) and not np.any(loss.g)


def check_compatible(loss: LossFunction, action_set: ActionSet) -> None:
    """Raise unless `loss` is guaranteed to map `action_set` into [0, 1]."""
    if loss.dim != action_set.dim:
        raise ContractError(f"loss dimension {loss.dim} != action set dimension {action_set.dim}")
    if isinstance(loss, Linear) and not isinstance(action_set, Simplex) and not is_zero_loss(loss):
        raise ContractError("linear losses need a simplex domain")


def quadratic_gradient_bound(action_set: ActionSet, scale: float) -> float:
    """Subgradient norm bound of a clamped quadratic centred inside `action_set`."""
    return min(2.0 * math.sqrt(scale), 2.0 * scale * action_set.diameter)


def eval_loss(loss: LossFunction, x) -> float:
    return loss.eval(as_vector(x, loss.dim))


def subgradient(loss: LossFunction, x) -> np.ndarray:
    return loss.subgradient(as_vector(x, loss.dim))
