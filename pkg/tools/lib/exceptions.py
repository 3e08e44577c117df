#!/usr/bin/env python3
"""
Custom exceptions for DRE-MARL training runs.

This module provides a hierarchy of exception classes for precise error handling
across the autodiff substrate, the particle environments, the reward
estimators and the experiment driver. All exceptions inherit from the base
DreMarlError class, enabling unified error handling while allowing specific
error type discrimination.

Exception Hierarchy:
    DreMarlError (base)
    ├── NumericalError (NaN/Inf in a forward pass, backward pass or update)
    ├── ShapeMismatchError (tensor or parameter widths disagree)
    ├── ScenarioError (unsupported scenario / agent-count combination)
    ├── EpisodeFinishedError (stepping an episode that already ended)
    ├── ActionIndexError (action index outside [0, K))
    ├── RewardSettingError (unknown reward-uncertainty tag)
    ├── AggregationError (invalid aggregation scheme or weights)
    └── RunFailedError (one member of a sweep failed)

Usage Example:
    try:
        result = train(config)
    except NumericalError as e:
        print(f"Training diverged: {e}")
    except DreMarlError as e:
        print(f"Run failed: {e}")
"""

from typing import Optional


class DreMarlError(Exception):
    """
    Base exception for all DRE-MARL errors.

    Catch this exception to handle any library error.
    """

    pass


class NumericalError(DreMarlError, ArithmeticError):
    """
    Raised when a non-finite value appears in a computation.

    Attributes:
        where (str): Name of the operation or quantity that went non-finite
    """

    def __init__(self, where: str, detail: str = ""):
        self.where = where
        msg = f"Non-finite values in {where}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ShapeMismatchError(DreMarlError, ValueError):
    """
    Raised when tensor shapes or network widths disagree.

    Attributes:
        expected: Expected shape or width
        actual: Shape or width that was received
    """

    def __init__(self, message: str, expected: object = None, actual: object = None):
        self.expected = expected
        self.actual = actual
        if expected is not None or actual is not None:
            message = f"{message} (expected {expected}, got {actual})"
        super().__init__(message)


class ScenarioError(DreMarlError, ValueError):
    """
    Raised for an unsupported scenario name or agent count.

    Attributes:
        scenario (str): Scenario tag that was requested
        agents (int, optional): Agent count that was requested
    """

    def __init__(self, scenario: str, agents: Optional[int] = None, message: str = ""):
        self.scenario = scenario
        self.agents = agents
        if not message:
            message = f"Unsupported scenario '{scenario}'"
            if agents is not None:
                message += f" with {agents} agents"
        super().__init__(message)


class EpisodeFinishedError(DreMarlError):
    """
    Raised when step() is called on an episode that already reached its limit.
    """

    pass


class ActionIndexError(DreMarlError, IndexError):
    """
    Raised when an action index falls outside [0, K).

    Attributes:
        index (int): Offending action index
        num_actions (int): Size of the action space
    """

    def __init__(self, index: int, num_actions: int):
        self.index = index
        self.num_actions = num_actions
        super().__init__(f"Action index {index} out of range [0, {num_actions})")


class RewardSettingError(DreMarlError, ValueError):
    """
    Raised for an unknown reward-uncertainty setting tag.
    """

    pass


class AggregationError(DreMarlError, ValueError):
    """
    Raised for an invalid aggregation scheme, weight vector or vector length.
    """

    pass


class RunFailedError(DreMarlError):
    """
    Raised when a single run inside a sweep fails.

    Attributes:
        label (str): Configuration label of the failed run
        seed (int): Seed of the failed run
    """

    def __init__(self, label: str, seed: int, cause: str):
        self.label = label
        self.seed = seed
        self.cause = cause
        super().__init__(f"Run {label} (seed {seed}) failed: {cause}")


__all__ = [
    "DreMarlError",
    "NumericalError",
    "ShapeMismatchError",
    "ScenarioError",
    "EpisodeFinishedError",
    "ActionIndexError",
    "RewardSettingError",
    "AggregationError",
    "RunFailedError",
]
