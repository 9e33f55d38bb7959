"""Arithmetic segment tree over trials 1..T and the constants of the regret bound.

No tree is materialised: a vertex is identified by its height and leftmost
leaf, and covers the aligned dyadic block ``[left, left + 2**height - 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from reset_oco.domain import ContractError

SQRT2 = math.sqrt(2.0)
LN2 = math.log(2.0)


class Constants(NamedTuple):
    c: float
    d: float
    alpha: float
    xi: float


CONSTANTS = Constants(
    c=SQRT2 / (SQRT2 - 1.0),
    d=math.sqrt(8.0 * LN2) / (3.0 - 2.0 * SQRT2),
    alpha=2.0 * math.sqrt(LN2) / (SQRT2 - 1.0),
    xi=1.0 / (SQRT2 - 1.0),
)


@dataclass(frozen=True, order=True)
class Vertex:
    left: int
    height: int

    def __post_init__(self):
        if self.height < 0 or self.left < 1:
            raise ContractError(f"invalid vertex {self!r}")
        if (self.left - 1) % (1 << self.height):
            raise ContractError(f"vertex at {self.left} is not aligned to height {self.height}")

    @property
    def right(self) -> int:
        return self.left + (1 << self.height) - 1

    @property
    def size(self) -> int:
        return 1 << self.height

    def parent(self) -> "Vertex":
        h = self.height + 1
        return Vertex(((self.left - 1) >> h << h) + 1, h)

    def children(self) -> tuple["Vertex", "Vertex"]:
        if self.height == 0:
            raise ContractError("leaves have no children")
        h = self.height - 1
        return Vertex(self.left, h), Vertex(self.left + (1 << h), h)

    def within(self, q: int, s: int) -> bool:
        return q <= self.left and self.right <= s


def all_vertices(T: int) -> list[Vertex]:
    tau = T.bit_length() - 1
    return [Vertex(left, h) for h in range(tau + 1) for left in range(1, T + 1, 1 << h)]


def fundamental_decomposition(q: int, s: int, T: int) -> list[Vertex]:
    """Maximal aligned dyadic blocks partitioning [q, s], left to right."""
    if T < 1 or T & (T - 1):
        raise ContractError(f"T must be a power of two, got {T}")
    if not 1 <= q <= s <= T:
        raise ContractError(f"need 1 <= q <= s <= T, got q={q}, s={s}, T={T}")
    out = []
    p = q
    tau = T.bit_length() - 1
    while p <= s:
        # alignment limit from the trailing zeros of p - 1 (p = 1 aligns to the root)
        h = tau if p == 1 else min(tau, ((p - 1) & -(p - 1)).bit_length() - 1)
        while p + (1 << h) - 1 > s:
            h -= 1
        out.append(Vertex(p, h))
        p += 1 << h
    return out


def segmentation_decomposition(boundaries: Iterable[int], T: int) -> list[list[Vertex]]:
    """Per-segment fundamental vertices for boundaries 1 = b_1 < ... < b_{k+1} = T + 1."""
    b = list(boundaries)
    return [fundamental_decomposition(b[k], b[k + 1] - 1, T) for k in range(len(b) - 1)]


def sqrt_size_sum(decomposition: Iterable[Vertex]) -> float:
    """Sum of sqrt(block size) over a decomposition."""
    return sum(math.sqrt(v.size) for v in decomposition)


def power_sqrt_sums(Z: Iterable[int]) -> tuple[float, float]:
    """(sum sqrt(2^k), xi * sqrt(sum 2^k)) over distinct nonnegative integers Z."""
    Z = list(Z)
    if not Z:
        raise ContractError("Z must be nonempty")
    if len(set(Z)) != len(Z) or min(Z) < 0:
        raise ContractError("Z must hold distinct nonnegative integers")
    lhs = sum(math.sqrt(2.0**k) for k in Z)
    rhs = CONSTANTS.xi * math.sqrt(sum(2.0**k for k in Z))
    return lhs, rhs


def switching_bound(segment_lengths: Iterable[int], gamma: float) -> float:
    """(c * gamma + d) * sum_k sqrt(length_k)."""
    lengths = list(segment_lengths)
    if any(n < 1 for n in lengths):
        raise ContractError("segment lengths must be positive")
    return (CONSTANTS.c * gamma + CONSTANTS.d) * sum(math.sqrt(n) for n in lengths)
