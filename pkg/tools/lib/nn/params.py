"""
Named parameter storage with Adam moment slots.
"""

from typing import Dict, Iterator, List, Mapping, Tuple

import numpy as np

from tools.lib.exceptions import ShapeMismatchError
from tools.lib.nn.tensor import Tensor


class ParamStore:
    """
    Ordered collection of named parameter tensors.

    Each parameter owns a first and a second moment array of identical shape
    for the Adam optimizer. The step counter starts at zero and only ever
    moves forward.
    """

    def __init__(self) -> None:
        self._params: Dict[str, Tensor] = {}
        self._first: Dict[str, np.ndarray] = {}
        self._second: Dict[str, np.ndarray] = {}
        self._step = 0

    @property
    def step(self) -> int:
        """Number of optimizer steps taken on this store."""
        return self._step

    def add(self, name: str, values: np.ndarray) -> Tensor:
        """
        Register a new parameter.

        Args:
            name: Unique parameter name (e.g. "dense0.weight")
            values: Initial values

        Returns:
            The parameter tensor (requires_grad=True)
        """
        if name in self._params:
            raise ValueError(f"Parameter '{name}' already registered")
        tensor = Tensor(values, requires_grad=True, name=name)
        self._params[name] = tensor
        self._first[name] = np.zeros_like(tensor.data)
        self._second[name] = np.zeros_like(tensor.data)
        return tensor

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def __contains__(self, name: object) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[str]:
        return iter(self._params)

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> List[str]:
        return list(self._params)

    def items(self) -> List[Tuple[str, Tensor]]:
        return list(self._params.items())

    def size(self) -> int:
        """Total number of scalar parameters."""
        return int(sum(p.data.size for p in self._params.values()))

    def moments(self, name: str) -> Tuple[np.ndarray, np.ndarray]:
        return self._first[name], self._second[name]

    def zero_grad(self) -> None:
        for tensor in self._params.values():
            tensor.zero_grad()

    def gradients(self) -> Dict[str, np.ndarray]:
        """Current gradients, zeros for parameters the loss did not reach."""
        return {
            name: (p.grad if p.grad is not None else np.zeros_like(p.data))
            for name, p in self._params.items()
        }

    def advance(self) -> int:
        self._step += 1
        return self._step

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self._params.items()}

    def load_state_dict(self, state: Mapping[str, np.ndarray]) -> None:
        missing = set(self._params) - set(state)
        if missing:
            raise KeyError(f"Missing parameters: {', '.join(sorted(missing))}")
        for name, tensor in self._params.items():
            values = np.asarray(state[name], dtype=np.float64)
            if values.shape != tensor.data.shape:
                raise ShapeMismatchError(
                    f"Parameter '{name}' shape", tensor.data.shape, values.shape
                )
            tensor.data[...] = values

    def clone(self) -> "ParamStore":
        """Copy of the parameter values with fresh optimizer state."""
        copy = ParamStore()
        for name, tensor in self._params.items():
            copy.add(name, tensor.data)
        return copy


def backward(loss: Tensor, params: ParamStore) -> Dict[str, np.ndarray]:
    """
    Back-propagate a scalar loss and collect gradients for every parameter.

    Args:
        loss: Scalar root of a recorded forward graph
        params: Parameters whose gradients are wanted

    Returns:
        Mapping of parameter name to gradient array

    Raises:
        ShapeMismatchError: If the loss is not a scalar
        NumericalError: If a gradient is non-finite
    """
    if loss.data.size != 1:
        raise ShapeMismatchError("loss must be a scalar", 1, loss.data.size)
    params.zero_grad()
    loss.backward()
    return params.gradients()


__all__ = ["ParamStore", "backward"]
