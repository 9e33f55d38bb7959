"""RESET: switching-regret-optimal meta-algorithm for online convex optimisation."""

from reset_oco.base import OGD, BaseLearner, Hedge, LifecycleError, initialise
from reset_oco.domain import Ball, ClampedQuadratic, ContractError, Linear, Simplex, project
from reset_oco.regret import Segmentation, Trace
from reset_oco.reset import Reset, mixing_coefficients, psi
from reset_oco.segtree import CONSTANTS, Vertex, fundamental_decomposition, switching_bound

__all__ = [
    "Ball", "BaseLearner", "CONSTANTS", "ClampedQuadratic", "ContractError", "Hedge",
    "LifecycleError", "Linear", "OGD", "Reset", "Segmentation", "Simplex", "Trace", "Vertex",
    "fundamental_decomposition", "initialise", "mixing_coefficients", "project", "psi",
    "switching_bound",
]
