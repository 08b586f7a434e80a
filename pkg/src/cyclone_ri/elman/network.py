"""Elman recurrent network: topology, initialisation and forward dynamics.

Hidden update, for hidden unit i at unfold step tau:

    y_i(tau) = sigmoid(b_h[i] + sum_k v[i, k] * y_k(tau - 1) + sum_j w[j, i] * x_j(tau))

The output unit reads the hidden state after the last step:

    out = sigmoid(b_o + sum_i u[i] * y_i(T))

Input tau is fed at unfold step tau; the context starts at `initial_context` for every
window.
"""

from pathlib import Path
from typing import NamedTuple, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator
from scipy.special import expit

INIT_LOW, INIT_HIGH = -0.5, 0.5
PARAMETER_NAMES = ("w", "v", "u", "b_h", "b_o")

HiddenState = np.ndarray


class TopologyT(BaseModel):
    model_config = ConfigDict(frozen=True)

    inputs: PositiveInt = 1
    hidden: PositiveInt = 5
    outputs: PositiveInt = 1
    unfold_steps: PositiveInt = 5

    @property
    def context(self) -> int:
        return self.hidden


class NetworkOptionsT(BaseModel):
    use_biases: bool = True
    initial_context: float = Field(default=0.5, ge=0.0, le=1.0)


def _float_array(value) -> np.ndarray:
    return np.array(value, dtype=np.float64)


class ElmanNetwork(BaseModel):
    """Weights of a J-K-O Elman network with K context units.

    Shapes: w (J, K), v (K, K), u (K, O), b_h (K,), b_o (O,).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    topology: TopologyT
    w: np.ndarray
    v: np.ndarray
    u: np.ndarray
    b_h: np.ndarray
    b_o: np.ndarray
    use_biases: bool = True
    initial_context: float = 0.5
    seed: Optional[int] = None

    @field_validator("w", "v", "u", "b_h", "b_o", mode="before")
    @classmethod
    def _coerce(cls, value) -> np.ndarray:
        return _float_array(value)

    @model_validator(mode="after")
    def _check_shapes(self) -> "ElmanNetwork":
        for name, shape in self.expected_shapes(self.topology).items():
            array = getattr(self, name)
            if array.shape != shape:
                raise ValueError(f"{name} has shape {array.shape}, expected {shape}")
            if not np.all(np.isfinite(array)):
                raise ValueError(f"{name} contains non-finite values")
        return self

    @staticmethod
    def expected_shapes(topology: TopologyT) -> dict[str, tuple[int, ...]]:
        j, k, o = topology.inputs, topology.hidden, topology.outputs
        return {"w": (j, k), "v": (k, k), "u": (k, o), "b_h": (k,), "b_o": (o,)}

    def parameters(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAMETER_NAMES}

    @property
    def parameter_count(self) -> int:
        return sum(a.size for a in self.parameters().values())

    def copy(self) -> "ElmanNetwork":
        return self.model_copy(update={name: a.copy() for name, a in self.parameters().items()})

    def to_document(self) -> "NetworkDocumentT":
        return NetworkDocumentT(
            topology=self.topology,
            seed=self.seed,
            use_biases=self.use_biases,
            initial_context=self.initial_context,
            **{name: a.tolist() for name, a in self.parameters().items()},
        )


class NetworkDocumentT(BaseModel):
    """JSON form of an ElmanNetwork; matrices are nested row-major lists."""

    format: str = "cyclone-ri/elman-network"
    version: int = 1
    topology: TopologyT
    seed: Optional[int] = None
    use_biases: bool = True
    initial_context: float = 0.5
    w: list[list[float]]
    v: list[list[float]]
    u: list[list[float]]
    b_h: list[float]
    b_o: list[float]

    def to_network(self) -> ElmanNetwork:
        return ElmanNetwork(
            topology=self.topology,
            w=self.w,
            v=self.v,
            u=self.u,
            b_h=self.b_h,
            b_o=self.b_o,
            use_biases=self.use_biases,
            initial_context=self.initial_context,
            seed=self.seed,
        )


class ForwardTrace(NamedTuple):
    """Everything BPTT needs: inputs (T, J), states[0..T] with states[0] the initial
    context, and the output activations."""

    inputs: np.ndarray
    states: list[np.ndarray]
    output: np.ndarray


def sigmoid(x):
    """Logistic function, overflow-safe for large |x|."""
    return expit(x)


def init_weights(
    topology: TopologyT, seed: int, options: Optional[NetworkOptionsT] = None
) -> ElmanNetwork:
    """Draw every weight and bias uniformly from [-0.5, 0.5] with a seeded generator."""
    options = options or NetworkOptionsT()
    rng = np.random.default_rng(seed)
    arrays = {
        name: rng.uniform(INIT_LOW, INIT_HIGH, size=shape)
        for name, shape in ElmanNetwork.expected_shapes(topology).items()
    }
    if not options.use_biases:
        arrays["b_h"][:] = 0.0
        arrays["b_o"][:] = 0.0
    return ElmanNetwork(
        topology=topology,
        use_biases=options.use_biases,
        initial_context=options.initial_context,
        seed=seed,
        **arrays,
    )


def initial_state(net: ElmanNetwork) -> HiddenState:
    return np.full(net.topology.hidden, net.initial_context, dtype=np.float64)


def step(net: ElmanNetwork, state: HiddenState, x) -> HiddenState:
    """One hidden-state update given the previous context and the current input."""
    state = np.asarray(state, dtype=np.float64)
    if state.shape != (net.topology.hidden,):
        raise ValueError(f"state has shape {state.shape}, expected ({net.topology.hidden},)")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return sigmoid(net.b_h + net.v @ state + x @ net.w)


def as_inputs(net: ElmanNetwork, window: Sequence[float] | np.ndarray) -> np.ndarray:
    """Window as a (T, J) array, checking T against the unfold depth."""
    inputs = np.asarray(window, dtype=np.float64)
    if inputs.ndim == 1:
        inputs = inputs.reshape(-1, 1)
    expected = net.topology.unfold_steps
    if inputs.shape[0] != expected:
        raise ValueError(f"window length {inputs.shape[0]} does not match unfold_steps {expected}")
    if inputs.shape[1] != net.topology.inputs:
        raise ValueError(f"window has {inputs.shape[1]} features, network expects {net.topology.inputs}")
    return inputs


def forward_trace(net: ElmanNetwork, window: Sequence[float] | np.ndarray) -> ForwardTrace:
    inputs = as_inputs(net, window)
    states = [initial_state(net)]
    for x in inputs:
        states.append(sigmoid(net.b_h + net.v @ states[-1] + x @ net.w))
    output = sigmoid(net.b_o + states[-1] @ net.u)
    return ForwardTrace(inputs=inputs, states=states, output=output)


def forward(net: ElmanNetwork, window: Sequence[float] | np.ndarray) -> float:
    """Output of the single output unit after unfolding over the whole window."""
    return float(forward_trace(net, window).output[0])


def predict_scores(net: ElmanNetwork, windows: Sequence) -> np.ndarray:
    """Outputs for a sequence of windows (objects with `.inputs`, or raw sequences)."""
    return np.array(
        [forward(net, getattr(w, "inputs", w)) for w in windows], dtype=np.float64
    )


def save_network(path: str | Path, net: ElmanNetwork) -> None:
    Path(path).write_text(net.to_document().model_dump_json(indent=2))


def load_network(path: str | Path) -> ElmanNetwork:
    return NetworkDocumentT.model_validate_json(Path(path).read_text()).to_network()
