"""The reasoning engine: transfer functions, the quasi-nonlinear update rule,
trace classification, and initial-stimulus recovery.

The update blends a nonlinear feedback term with a linear anchor to the
initial stimulus:

    next = phi * f(current @ W) + (1 - phi) * initial

With the rescaled transfer (division by the Euclidean norm, zero vector
mapped to zero) every iterate stays in [0, 1]^M for weights in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .correlation import WeightMatrix
from .errors import DimensionMismatch, PhiIsOne

TRANSFER_RESCALED = "rescaled"
TRANSFER_SIGMOID = "sigmoid"
TRANSFER_TANH = "tanh"
_TRANSFERS = (TRANSFER_RESCALED, TRANSFER_SIGMOID, TRANSFER_TANH)


def rescaled_transfer(raw: np.ndarray) -> np.ndarray:
    """Divide by the Euclidean norm; the zero vector maps to itself.

    Scaling by the largest magnitude first keeps the map exact for inputs
    all the way down to 1e-300 (plain sum-of-squares would underflow), and
    makes f(c*X) = f(X) hold to rounding for any c > 0.
    """
    raw = np.asarray(raw, dtype=np.float64)
    peak = np.max(np.abs(raw)) if raw.size else 0.0
    if peak == 0.0:
        return np.zeros_like(raw)
    scaled = raw / peak
    return scaled / np.linalg.norm(scaled)


def sigmoid_transfer(raw: np.ndarray, slope: float = 1.0) -> np.ndarray:
    """Component-wise logistic function; slope controls the steepness."""
    raw = np.asarray(raw, dtype=np.float64)
    return 1.0 / (1.0 + np.exp(-slope * raw))


def tanh_transfer(raw: np.ndarray) -> np.ndarray:
    return np.tanh(np.asarray(raw, dtype=np.float64))


@dataclass(frozen=True)
class ReasoningConfig:
    """Parameters of one simulation.

    phi: weight of the nonlinear component, in [0, 1]; phi=1 is a closed
    system, phi=0 freezes the initial stimulus. slope is the sigmoid
    steepness (unused by the other transfers).
    """

    phi: float
    max_iterations: int = 20
    transfer: str = TRANSFER_RESCALED
    slope: float = 1.0
    epsilon: float = 1e-8
    cycle_period_max: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError(f"phi must be in [0, 1], got {self.phi}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.transfer not in _TRANSFERS:
            raise ValueError(f"unknown transfer {self.transfer!r}")
        if self.slope <= 0.0:
            raise ValueError("slope must be positive")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.cycle_period_max is not None and self.cycle_period_max < 2:
            raise ValueError("cycle_period_max must be >= 2")

    @property
    def effective_cycle_period_max(self) -> int:
        if self.cycle_period_max is not None:
            return self.cycle_period_max
        return max(2, self.max_iterations // 2)

    def with_phi(self, phi: float) -> "ReasoningConfig":
        return replace(self, phi=phi)

    def apply_transfer(self, raw: np.ndarray) -> np.ndarray:
        if self.transfer == TRANSFER_RESCALED:
            return rescaled_transfer(raw)
        if self.transfer == TRANSFER_SIGMOID:
            return sigmoid_transfer(raw, self.slope)
        return tanh_transfer(raw)


@dataclass(frozen=True)
class FixedPoint:
    """States repeat from at_iteration on: |A(t+1) - A(t)| < epsilon there."""
    at_iteration: int
    kind: str = field(default="fixed_point", init=False)


@dataclass(frozen=True)
class LimitCycle:
    period: int
    from_iteration: int
    kind: str = field(default="limit_cycle", init=False)


@dataclass(frozen=True)
class Inconclusive:
    """Neither test fired within the iteration budget; no chaos claim."""
    kind: str = field(default="inconclusive", init=False)


@dataclass(frozen=True)
class SimulationTrace:
    states: np.ndarray  # (k, M), row 0 = initial stimulus
    terminal: FixedPoint | LimitCycle | Inconclusive

    def __post_init__(self):
        self.states.flags.writeable = False

    @property
    def terminal_state(self) -> np.ndarray:
        return self.states[-1]


def _matrix_of(w) -> np.ndarray:
    return w.weights if isinstance(w, WeightMatrix) else np.asarray(w, dtype=np.float64)


def _check_dims(vec: np.ndarray, mat: np.ndarray, label: str):
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f"weight matrix must be square, got {mat.shape}")
    if vec.ndim != 1 or vec.size != mat.shape[0]:
        raise DimensionMismatch(
            f"{label} has length {vec.size}, weight matrix is {mat.shape[0]}x{mat.shape[0]}")


def step(current: np.ndarray, initial: np.ndarray, w, config: ReasoningConfig) -> np.ndarray:
    """One application of the quasi-nonlinear rule.

    The raw flow is current @ W (component j sums current[i] * w[i][j]).
    With the rescaled transfer a zero raw flow leaves exactly
    (1 - phi) * initial.
    """
    mat = _matrix_of(w)
    current = np.asarray(current, dtype=np.float64)
    initial = np.asarray(initial, dtype=np.float64)
    _check_dims(current, mat, "state vector")
    _check_dims(initial, mat, "initial vector")
    raw = current @ mat
    return config.phi * config.apply_transfer(raw) + (1.0 - config.phi) * initial


def run(a0: np.ndarray, w, config: ReasoningConfig) -> SimulationTrace:
    """Iterate until the state settles, then classify the trace.

    Fixed point: first t with |A(t+1) - A(t)|_inf < epsilon, reported as
    FixedPoint(at_iteration=t). Otherwise the tail is scanned for the
    minimal period P in [2, cycle_period_max] with |A(t+P) - A(t)| < epsilon.
    """
    mat = _matrix_of(w)
    a0 = np.asarray(a0, dtype=np.float64)
    _check_dims(a0, mat, "initial vector")
    states = [a0]
    terminal: FixedPoint | LimitCycle | Inconclusive | None = None
    for t in range(config.max_iterations):
        nxt = step(states[-1], a0, mat, config)
        states.append(nxt)
        if np.max(np.abs(nxt - states[-2])) < config.epsilon:
            terminal = FixedPoint(at_iteration=t)
            break
    stacked = np.array(states)
    if terminal is None:
        terminal = _scan_cycle(stacked, config)
    return SimulationTrace(states=stacked, terminal=terminal)


def _scan_cycle(states: np.ndarray, config: ReasoningConfig):
    last = states.shape[0] - 1
    for period in range(2, config.effective_cycle_period_max + 1):
        if period > last:
            break
        if np.max(np.abs(states[last] - states[last - period])) >= config.epsilon:
            continue
        start = last - period
        while start > 0:
            if np.max(np.abs(states[start - 1 + period] - states[start - 1])) >= config.epsilon:
                break
            start -= 1
        return LimitCycle(period=period, from_iteration=start)
    return Inconclusive()


def recover_initial(fixed_point: np.ndarray, w, config: ReasoningConfig) -> np.ndarray:
    """Invert the rule at a fixed point V: A0 = (V - phi*f(V @ W)) / (1 - phi).

    Undefined at phi = 1; the caller guarantees V is a fixed point.
    """
    if config.phi >= 1.0:
        raise PhiIsOne("initial stimulus is not recoverable at phi = 1")
    mat = _matrix_of(w)
    v = np.asarray(fixed_point, dtype=np.float64)
    _check_dims(v, mat, "fixed point")
    return (v - config.phi * config.apply_transfer(v @ mat)) / (1.0 - config.phi)
