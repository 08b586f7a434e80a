"""Backpropagation through time for the Elman network, plus a finite-difference oracle."""

from typing import Callable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from .network import PARAMETER_NAMES, ElmanNetwork, ForwardTrace, forward, forward_trace

BIAS_NAMES = ("b_h", "b_o")


class Gradient(BaseModel):
    """dE/dparameter for every network parameter, shaped like the network."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    w: np.ndarray
    v: np.ndarray
    u: np.ndarray
    b_h: np.ndarray
    b_o: np.ndarray

    def parameters(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAMETER_NAMES}

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.parameters().values())

    @classmethod
    def zeros_like(cls, net: ElmanNetwork) -> "Gradient":
        return cls.model_construct(**{name: np.zeros_like(a) for name, a in net.parameters().items()})


def target_for(label: bool, target_pos: float = 1.0, target_neg: float = 0.0) -> float:
    return target_pos if label else target_neg


def sample_loss(
    net: ElmanNetwork,
    window: Sequence[float] | np.ndarray,
    label: bool,
    target_pos: float = 1.0,
    target_neg: float = 0.0,
    positive_weight: float = 1.0,
) -> float:
    """Squared error at the final unfolded step: 0.5 * c * (out - target)^2.

    `c` is `positive_weight` for positive samples and 1 otherwise.
    """
    error = forward(net, window) - target_for(label, target_pos, target_neg)
    weight = positive_weight if label else 1.0
    return 0.5 * weight * error * error


def bptt_gradients(
    net: ElmanNetwork,
    window: Sequence[float] | np.ndarray,
    label: bool,
    target_pos: float = 1.0,
    target_neg: float = 0.0,
    positive_weight: float = 1.0,
) -> Gradient:
    """Exact gradient of `sample_loss`, accumulated over every unfolded step (no truncation).

    With biases disabled the bias gradients are zero, so the biases stay fixed.
    """
    return backward(
        net, forward_trace(net, window), label,
        target_pos=target_pos, target_neg=target_neg, positive_weight=positive_weight,
    )


def backward(
    net: ElmanNetwork,
    trace: ForwardTrace,
    label: bool,
    target_pos: float = 1.0,
    target_neg: float = 0.0,
    positive_weight: float = 1.0,
) -> Gradient:
    """Backward pass over a recorded forward trace."""
    out = trace.output
    weight = positive_weight if label else 1.0
    delta_out = weight * (out - target_for(label, target_pos, target_neg)) * out * (1.0 - out)

    grad = Gradient.zeros_like(net)
    final = trace.states[-1]
    grad.u += np.outer(final, delta_out)
    grad.b_o += delta_out
    dy = net.u @ delta_out
    for tau in range(len(trace.inputs), 0, -1):
        y, y_prev = trace.states[tau], trace.states[tau - 1]
        delta = dy * y * (1.0 - y)
        grad.b_h += delta
        grad.w += np.outer(trace.inputs[tau - 1], delta)
        grad.v += np.outer(delta, y_prev)
        dy = net.v.T @ delta

    if not net.use_biases:
        grad.b_h[:] = 0.0
        grad.b_o[:] = 0.0
    return grad


def central_difference(fn: Callable[[], float], array: np.ndarray, eps: float = 1e-5) -> np.ndarray:
    """Central differences of `fn()` with respect to each entry of `array`.

    `fn` must read `array`; each entry is perturbed in place by +/- eps and restored.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    flat = array.reshape(-1)
    grad = np.zeros(flat.size, dtype=np.float64)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + eps
        plus = fn()
        flat[i] = original - eps
        minus = fn()
        flat[i] = original
        grad[i] = (plus - minus) / (2.0 * eps)
    return grad.reshape(array.shape)


def finite_difference_gradient(
    net: ElmanNetwork,
    window: Sequence[float] | np.ndarray,
    label: bool,
    eps: float = 1e-5,
    target_pos: float = 1.0,
    target_neg: float = 0.0,
    positive_weight: float = 1.0,
) -> Gradient:
    """Central differences (E(theta + eps) - E(theta - eps)) / (2 eps), one parameter at a time."""
    shifted = net.copy()
    grad = Gradient.zeros_like(net)

    def loss() -> float:
        return sample_loss(
            shifted, window, label, target_pos=target_pos, target_neg=target_neg, positive_weight=positive_weight
        )

    for name, array in shifted.parameters().items():
        if name in BIAS_NAMES and not net.use_biases:
            continue
        setattr(grad, name, central_difference(loss, array, eps))
    return grad


def descend(net: ElmanNetwork, grad: Gradient, learning_rate: float) -> ElmanNetwork:
    """In-place update theta <- theta - learning_rate * grad."""
    for name, array in net.parameters().items():
        g = getattr(grad, name)
        if g.shape != array.shape:
            raise ValueError(f"gradient {name} has shape {g.shape}, network has {array.shape}")
        array -= learning_rate * g
    return net


def sgd_update(net: ElmanNetwork, grad: Gradient, learning_rate: float) -> ElmanNetwork:
    """A new network one gradient step away from `net`; `net` itself is left untouched."""
    return descend(net.copy(), grad, learning_rate)
