"""
Protocols (interfaces) for hamslab components.

This module defines abstract contracts that implementations must follow.
"""

from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from hamslab.errors import Unsupported
from hamslab.models import PhaseState, StepResult

__all__ = [
    'TargetModel',
    'Kernel',
]


class TargetModel(ABC):
    """Potential/gradient contract for pi(x) proportional to exp(-U(x)).

    Inputs have shape ``(..., dim)``; potentials come back with shape
    ``(...)`` and gradients with the input's shape.
    """

    @property
    @abstractmethod
    def dim(self) -> int:
        """Number of coordinates k."""
        pass

    @abstractmethod
    def potential(self, x: np.ndarray) -> np.ndarray:
        """
        Evaluate U(x).

        Args:
            x: Positions, shape (..., dim)

        Returns:
            Potential energies, shape (...)
        """
        pass

    @abstractmethod
    def gradient(self, x: np.ndarray) -> np.ndarray:
        """
        Evaluate the gradient of U.

        Args:
            x: Positions, shape (..., dim)

        Returns:
            Gradients, shape (..., dim)
        """
        pass

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Evaluate U(x) and its gradient together.

        Models override this when both share intermediate work.
        """
        return self.potential(x), self.gradient(x)

    def hessian_diag(self, x: np.ndarray) -> np.ndarray:
        """
        Diagonal of the Hessian of U.

        Raises:
            Unsupported: the model has no curvature summary
        """
        raise Unsupported(f"{type(self).__name__} does not provide hessian_diag")


class Kernel(ABC):
    """One Markov transition on (x, u) against a fixed target."""

    @property
    @abstractmethod
    def target(self) -> TargetModel:
        pass

    @abstractmethod
    def step(self, state: PhaseState, rng: np.random.Generator) -> StepResult:
        """
        Advance the state by one iteration.

        Args:
            state: Current phase state (batched chains allowed)
            rng: Generator owned by the calling chain

        Returns:
            StepResult with the next state, acceptance flags and Delta G
        """
        pass

    def prepare(self, state: PhaseState) -> PhaseState:
        """Fill the potential/gradient cache the kernel relies on."""
        if state.has_cache():
            return state
        potential, grad = self.target.evaluate(state.x)
        return PhaseState(state.x, state.u, potential, grad)
