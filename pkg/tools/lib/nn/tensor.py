"""
Reverse-mode automatic differentiation over numpy float64 arrays.

Every operation records its parents and a closure that pushes the upstream
gradient back to them. ``Tensor.backward()`` walks the recorded graph in
reverse topological order. Any non-finite value produced by a forward or a
backward step raises NumericalError.
"""

from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from tools.lib.exceptions import NumericalError, ShapeMismatchError


ArrayLike = Union["Tensor", np.ndarray, float, int, Sequence[float]]
Axis = Optional[Union[int, Tuple[int, ...]]]


def _check_finite(values: np.ndarray, where: str) -> None:
    if not np.all(np.isfinite(values)):
        raise NumericalError(where)


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    """
    A float64 array that remembers how it was computed.

    Attributes:
        data: Underlying numpy array (row-major)
        grad: Accumulated gradient after backward(), same shape as data
        requires_grad: Whether gradients flow into this tensor
        name: Optional label, used for parameters
    """

    __slots__ = ("data", "grad", "requires_grad", "name", "_parents", "_backward")

    # numpy defers to Tensor's reflected operators
    __array_ufunc__ = None

    def __init__(
        self,
        data: ArrayLike,
        requires_grad: bool = False,
        name: Optional[str] = None,
        _parents: Tuple["Tensor", ...] = (),
        _backward: Optional[Callable[[np.ndarray], None]] = None,
    ):
        if isinstance(data, Tensor):
            data = data.data
        self.data = np.array(data, dtype=np.float64, copy=True)
        _check_finite(self.data, name or "tensor")
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self.name = name
        self._parents = _parents
        self._backward = _backward

    # ------------------------------------------------------------------
    # Introspection
    # ------------------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.data.shape)

    @property
    def ndim(self) -> int:
        return int(self.data.ndim)

    @property
    def values(self) -> List[float]:
        """Flat row-major list of values."""
        return [float(v) for v in self.data.ravel()]

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeMismatchError("item() needs a single-element tensor", 1, self.data.size)
        return float(self.data.reshape(()))

    def __repr__(self) -> str:
        label = f", name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label})"

    # ------------------------------------------------------------------
    # Graph plumbing
    # ------------------------------------------------------------------
    @staticmethod
    def _make(
        data: np.ndarray,
        parents: Tuple["Tensor", ...],
        backward: Callable[[np.ndarray], None],
        op: str,
    ) -> "Tensor":
        _check_finite(data, op)
        needs_grad = any(p.requires_grad for p in parents)
        out = Tensor.__new__(Tensor)
        out.data = data
        out.grad = None
        out.requires_grad = needs_grad
        out.name = None
        out._parents = parents if needs_grad else ()
        out._backward = backward if needs_grad else None
        return out

    def _accumulate(self, grad: np.ndarray) -> None:
        if not self.requires_grad:
            return
        if grad.shape != self.data.shape:
            grad = _unbroadcast(grad, self.data.shape)
        if self.grad is None:
            self.grad = np.array(grad, dtype=np.float64, copy=True)
        else:
            self.grad = self.grad + grad

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self, grad: Optional[np.ndarray] = None) -> None:
        """
        Back-propagate from this tensor through the recorded graph.

        Args:
            grad: Upstream gradient; defaults to 1.0 for a scalar root

        Raises:
            ShapeMismatchError: If no gradient is given for a non-scalar root
            NumericalError: If any propagated gradient is non-finite
        """
        if grad is None:
            if self.data.size != 1:
                raise ShapeMismatchError("backward() needs a scalar root", 1, self.data.size)
            grad = np.ones_like(self.data)

        order: List[Tensor] = []
        seen = set()
        stack: List[Tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if parent.requires_grad and id(parent) not in seen:
                    stack.append((parent, False))

        for node in order:
            if node is not self and node._parents:
                node.grad = None
        self.grad = np.array(grad, dtype=np.float64, copy=True)

        for node in reversed(order):
            if node.grad is None or node._backward is None:
                continue
            _check_finite(node.grad, "backward pass")
            node._backward(node.grad)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------
    def __add__(self, other: ArrayLike) -> "Tensor":
        other = as_tensor(other)

        def backward(g: np.ndarray) -> None:
            self._accumulate(g)
            other._accumulate(g)

        return Tensor._make(self.data + other.data, (self, other), backward, "add")

    __radd__ = __add__

    def __neg__(self) -> "Tensor":
        def backward(g: np.ndarray) -> None:
            self._accumulate(-g)

        return Tensor._make(-self.data, (self,), backward, "neg")

    def __sub__(self, other: ArrayLike) -> "Tensor":
        return self + (-as_tensor(other))

    def __rsub__(self, other: ArrayLike) -> "Tensor":
        return as_tensor(other) + (-self)

    def __mul__(self, other: ArrayLike) -> "Tensor":
        other = as_tensor(other)

        def backward(g: np.ndarray) -> None:
            self._accumulate(g * other.data)
            other._accumulate(g * self.data)

        return Tensor._make(self.data * other.data, (self, other), backward, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other: ArrayLike) -> "Tensor":
        other = as_tensor(other)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.data / other.data

        def backward(g: np.ndarray) -> None:
            self._accumulate(g / other.data)
            other._accumulate(-g * self.data / (other.data**2))

        return Tensor._make(out, (self, other), backward, "div")

    def __rtruediv__(self, other: ArrayLike) -> "Tensor":
        return as_tensor(other) / self

    def __pow__(self, exponent: float) -> "Tensor":
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.data**exponent

        def backward(g: np.ndarray) -> None:
            self._accumulate(g * exponent * self.data ** (exponent - 1))

        return Tensor._make(out, (self,), backward, "pow")

    def __matmul__(self, other: ArrayLike) -> "Tensor":
        other = as_tensor(other)
        if self.ndim < 2 or other.ndim < 2:
            raise ShapeMismatchError("matmul needs operands with ndim >= 2")
        if self.shape[-1] != other.shape[-2]:
            raise ShapeMismatchError(
                "matmul inner dimensions differ", self.shape[-1], other.shape[-2]
            )

        def backward(g: np.ndarray) -> None:
            self._accumulate(g @ np.swapaxes(other.data, -1, -2))
            other._accumulate(np.swapaxes(self.data, -1, -2) @ g)

        return Tensor._make(self.data @ other.data, (self, other), backward, "matmul")

    # ------------------------------------------------------------------
    # Reductions and reshaping
    # ------------------------------------------------------------------
    def sum(self, axis: Axis = None, keepdims: bool = False) -> "Tensor":
        out = self.data.sum(axis=axis, keepdims=keepdims)
        in_shape = self.data.shape

        def backward(g: np.ndarray) -> None:
            if axis is not None and not keepdims:
                axes = (axis,) if isinstance(axis, int) else axis
                g = np.expand_dims(g, tuple(a % len(in_shape) for a in axes))
            self._accumulate(np.broadcast_to(g, in_shape))

        return Tensor._make(np.asarray(out, dtype=np.float64), (self,), backward, "sum")

    def mean(self, axis: Axis = None, keepdims: bool = False) -> "Tensor":
        if axis is None:
            count = self.data.size
        else:
            axes = (axis,) if isinstance(axis, int) else axis
            count = int(np.prod([self.data.shape[a] for a in axes]))
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    def reshape(self, *shape: int) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        in_shape = self.data.shape

        def backward(g: np.ndarray) -> None:
            self._accumulate(g.reshape(in_shape))

        return Tensor._make(self.data.reshape(shape), (self,), backward, "reshape")

    def transpose(self, *axes: int) -> "Tensor":
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        if not axes:
            axes = tuple(reversed(range(self.ndim)))
        inverse = tuple(np.argsort(axes))

        def backward(g: np.ndarray) -> None:
            self._accumulate(np.transpose(g, inverse))

        return Tensor._make(np.transpose(self.data, axes), (self,), backward, "transpose")

    def __getitem__(self, index: object) -> "Tensor":
        in_shape = self.data.shape

        def backward(g: np.ndarray) -> None:
            full = np.zeros(in_shape, dtype=np.float64)
            np.add.at(full, index, g)
            self._accumulate(full)

        return Tensor._make(np.array(self.data[index]), (self,), backward, "getitem")

    # ------------------------------------------------------------------
    # Elementwise nonlinearities
    # ------------------------------------------------------------------
    def exp(self) -> "Tensor":
        with np.errstate(over="ignore"):
            out = np.exp(self.data)

        def backward(g: np.ndarray) -> None:
            self._accumulate(g * out)

        return Tensor._make(out, (self,), backward, "exp")

    def log(self) -> "Tensor":
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.log(self.data)

        def backward(g: np.ndarray) -> None:
            self._accumulate(g / self.data)

        return Tensor._make(out, (self,), backward, "log")

    def leaky_relu(self, slope: float = 0.01) -> "Tensor":
        positive = self.data >= 0
        out = np.where(positive, self.data, slope * self.data)

        def backward(g: np.ndarray) -> None:
            self._accumulate(np.where(positive, g, slope * g))

        return Tensor._make(out, (self,), backward, "leaky_relu")

    def softplus(self) -> "Tensor":
        out = np.logaddexp(0.0, self.data)

        def backward(g: np.ndarray) -> None:
            self._accumulate(g / (1.0 + np.exp(-self.data)))

        return Tensor._make(out, (self,), backward, "softplus")

    def softmax(self, axis: int = -1) -> "Tensor":
        shifted = self.data - self.data.max(axis=axis, keepdims=True)
        e = np.exp(shifted)
        out = e / e.sum(axis=axis, keepdims=True)

        def backward(g: np.ndarray) -> None:
            inner = (g * out).sum(axis=axis, keepdims=True)
            self._accumulate(out * (g - inner))

        return Tensor._make(out, (self,), backward, "softmax")

    def log_softmax(self, axis: int = -1) -> "Tensor":
        shifted = self.data - self.data.max(axis=axis, keepdims=True)
        log_norm = np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
        out = shifted - log_norm
        probs = np.exp(out)

        def backward(g: np.ndarray) -> None:
            self._accumulate(g - probs * g.sum(axis=axis, keepdims=True))

        return Tensor._make(out, (self,), backward, "log_softmax")

    def clip(self, low: Optional[float] = None, high: Optional[float] = None) -> "Tensor":
        out = np.clip(self.data, low, high)
        inside = np.ones_like(self.data, dtype=bool)
        if low is not None:
            inside &= self.data >= low
        if high is not None:
            inside &= self.data <= high

        def backward(g: np.ndarray) -> None:
            self._accumulate(np.where(inside, g, 0.0))

        return Tensor._make(out, (self,), backward, "clip")


def as_tensor(value: ArrayLike) -> Tensor:
    """Wrap constants as non-differentiable tensors; pass tensors through."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def minimum(a: ArrayLike, b: ArrayLike) -> Tensor:
    """Elementwise minimum; ties route the gradient to ``a``."""
    a, b = as_tensor(a), as_tensor(b)
    take_a = a.data <= b.data

    def backward(g: np.ndarray) -> None:
        a._accumulate(np.where(take_a, g, 0.0))
        b._accumulate(np.where(take_a, 0.0, g))

    return Tensor._make(np.minimum(a.data, b.data), (a, b), backward, "minimum")


def concat(tensors: Iterable[ArrayLike], axis: int = -1) -> Tensor:
    parts = [as_tensor(t) for t in tensors]
    sizes = [p.shape[axis] for p in parts]
    splits = np.cumsum(sizes)[:-1]

    def backward(g: np.ndarray) -> None:
        for part, piece in zip(parts, np.split(g, splits, axis=axis)):
            part._accumulate(piece)

    data = np.concatenate([p.data for p in parts], axis=axis)
    return Tensor._make(data, tuple(parts), backward, "concat")


__all__ = ["Tensor", "as_tensor", "minimum", "concat"]
