"""States, operators and inner products on discrete and quadrature-discretized spaces.

Everything here is immutable: arrays held by :class:`State`, :class:`Operator`
and :class:`SpaceMetric` are copied on construction and flagged read-only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DegenerateStateError,
    DimensionError,
    DomainError,
    NotHermitianError,
    NumericalConsistencyError,
    UnnormalizedStateError,
)

EPS_NORM = 1e-12
HERMITIAN_TOL = 1e-10
NORMALIZED_TOL = 1e-9
K_MAX = 16
DEFAULT_QUAD_POINTS = 2001


def _frozen(arr, dtype) -> np.ndarray:
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def simpson_weights(a: float, b: float, n: int) -> np.ndarray:
    """Composite Simpson weights for ``n`` (odd) equally spaced points on [a, b]."""
    if n < 3 or n % 2 == 0:
        raise DomainError(f"Simpson's rule needs an odd point count >= 3, got {n}")
    h = (b - a) / (n - 1)
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * h / 3.0


@dataclass(frozen=True, eq=False)
class SpaceMetric:
    """Inner-product weights of a finite space.

    ``kind`` is ``"discrete"`` (unit weights, a coefficient space) or ``"grid"``
    (quadrature weights attached to abscissae ``points``).
    """

    kind: str
    weights: np.ndarray
    points: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in ("discrete", "grid"):
            raise ValueError(f"unknown metric kind {self.kind!r}")
        w = _frozen(self.weights, float)
        if w.ndim != 1 or w.size == 0:
            raise DimensionError("weights must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("quadrature weights must be finite and positive")
        object.__setattr__(self, "weights", w)
        if self.kind == "grid":
            if self.points is None:
                raise ValueError("grid metric requires abscissae")
            p = _frozen(self.points, float)
            if p.shape != w.shape:
                raise DimensionError("points and weights differ in length")
            if np.any(np.diff(p) <= 0):
                raise ValueError("grid points must be strictly increasing")
            object.__setattr__(self, "points", p)
        elif self.points is not None:
            object.__setattr__(self, "points", _frozen(self.points, float))

    @classmethod
    def discrete(cls, dimension: int) -> "SpaceMetric":
        if dimension < 1:
            raise DimensionError("dimension must be positive")
        return cls("discrete", np.ones(dimension))

    @classmethod
    def simpson(cls, a: float, b: float, n: int = DEFAULT_QUAD_POINTS) -> "SpaceMetric":
        """Uniform grid on [a, b] carrying composite Simpson weights."""
        return cls("grid", simpson_weights(a, b, n), np.linspace(a, b, n))

    @property
    def dimension(self) -> int:
        return int(self.weights.size)

    def same_as(self, other: "SpaceMetric") -> bool:
        if self is other:
            return True
        if self.kind != other.kind or self.dimension != other.dimension:
            return False
        if not np.array_equal(self.weights, other.weights):
            return False
        if self.points is None or other.points is None:
            return self.points is other.points
        return np.array_equal(self.points, other.points)


@dataclass(frozen=True, eq=False)
class State:
    amplitudes: np.ndarray
    metric: SpaceMetric

    def __post_init__(self):
        amp = _frozen(self.amplitudes, complex)
        if amp.ndim != 1 or amp.size != self.metric.dimension:
            raise DimensionError(
                f"state of length {amp.size} does not fit a space of dimension "
                f"{self.metric.dimension}"
            )
        if not np.all(np.isfinite(amp)):
            raise ValueError("state amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def of(cls, values: Sequence[complex], metric: Optional[SpaceMetric] = None) -> "State":
        """Build a state; with no metric, a discrete space of matching size is used."""
        values = np.asarray(values, dtype=complex)
        if metric is None:
            metric = SpaceMetric.discrete(values.size)
        return cls(values, metric)

    @property
    def dimension(self) -> int:
        return self.metric.dimension

    def _coerce(self, other: "State") -> "State":
        if not isinstance(other, State):
            return NotImplemented
        if not self.metric.same_as(other.metric):
            raise DimensionError("states live on different spaces")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return State(self.amplitudes + other.amplitudes, self.metric)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return State(self.amplitudes - other.amplitudes, self.metric)

    def __neg__(self):
        return State(-self.amplitudes, self.metric)

    def __mul__(self, scalar):
        if isinstance(scalar, (State, Operator)):
            return NotImplemented
        return State(complex(scalar) * self.amplitudes, self.metric)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return State(self.amplitudes / complex(scalar), self.metric)

    def __repr__(self):
        return f"State({np.array2string(self.amplitudes, precision=6)}, kind={self.metric.kind})"


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense linear operator on a :class:`SpaceMetric`.

    For grid metrics hermiticity is with respect to the weighted inner product,
    i.e. ``W @ matrix`` must be hermitian.
    """

    matrix: np.ndarray
    metric: SpaceMetric
    hermitian: bool = True

    def __post_init__(self):
        m = _frozen(self.matrix, complex)
        n = self.metric.dimension
        if m.shape != (n, n):
            raise DimensionError(f"operator shape {m.shape} does not match dimension {n}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "matrix", m)
        if self.hermitian and not _is_hermitian(m, self.metric):
            raise NotHermitianError("matrix flagged hermitian is not self-adjoint within 1e-10")

    @classmethod
    def of(cls, matrix, metric: Optional[SpaceMetric] = None, hermitian: Optional[bool] = None) -> "Operator":
        """Build an operator; ``hermitian=None`` detects the flag from the entries."""
        matrix = np.asarray(matrix, dtype=complex)
        if metric is None:
            metric = SpaceMetric.discrete(matrix.shape[0])
        if hermitian is None:
            hermitian = matrix.shape == (metric.dimension,) * 2 and _is_hermitian(matrix, metric)
        return cls(matrix, metric, hermitian)

    @classmethod
    def identity(cls, metric: SpaceMetric) -> "Operator":
        return cls(np.eye(metric.dimension), metric, True)

    @classmethod
    def diagonal(cls, values: Sequence[float], metric: Optional[SpaceMetric] = None) -> "Operator":
        values = np.asarray(values)
        return cls.of(np.diag(values), metric, hermitian=bool(np.all(np.isreal(values))))

    @property
    def dimension(self) -> int:
        return self.metric.dimension

    def apply(self, s: State) -> State:
        _check_space(self.metric, s.metric)
        return State(self.matrix @ s.amplitudes, s.metric)

    def __matmul__(self, other):
        if isinstance(other, State):
            return self.apply(other)
        if isinstance(other, Operator):
            _check_space(self.metric, other.metric)
            return Operator.of(self.matrix @ other.matrix, self.metric)
        return NotImplemented

    def _combine(self, other, sign):
        if not isinstance(other, Operator):
            return NotImplemented
        _check_space(self.metric, other.metric)
        return Operator(
            self.matrix + sign * other.matrix, self.metric, self.hermitian and other.hermitian
        )

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return Operator(-self.matrix, self.metric, self.hermitian)

    def __mul__(self, scalar):
        if isinstance(scalar, (State, Operator)):
            return NotImplemented
        c = complex(scalar)
        return Operator(c * self.matrix, self.metric, self.hermitian and c.imag == 0)

    __rmul__ = __mul__


def _is_hermitian(matrix: np.ndarray, metric: SpaceMetric) -> bool:
    wm = metric.weights[:, None] * matrix
    return bool(np.max(np.abs(wm - wm.conj().T), initial=0.0) <= HERMITIAN_TOL)


def _check_space(m1: SpaceMetric, m2: SpaceMetric) -> None:
    if not m1.same_as(m2):
        raise DimensionError("operands live on different spaces")


def _require_normalized(s: State) -> None:
    if abs(norm(s) - 1.0) > NORMALIZED_TOL:
        raise UnnormalizedStateError(f"state must be normalized (norm = {norm(s):.12g})")


def _require_hermitian(op: Operator) -> None:
    if not op.hermitian:
        raise NotHermitianError("operation requires a hermitian operator")


def inner(a: State, b: State) -> complex:
    """Weighted inner product, antilinear in the first argument."""
    _check_space(a.metric, b.metric)
    return complex(np.sum(a.metric.weights * np.conj(a.amplitudes) * b.amplitudes))


def norm(a: State) -> float:
    return float(np.sqrt(np.sum(a.metric.weights * np.abs(a.amplitudes) ** 2)))


def normalize(a: State) -> State:
    n = norm(a)
    if n <= EPS_NORM:
        raise DegenerateStateError(f"cannot normalize a state of norm {n:.3g}")
    return State(a.amplitudes / n, a.metric)


def overlap(a: State, b: State) -> float:
    """Overlap ``S = |<a_N|b_N>|`` of the normalized states, clipped to [0, 1]."""
    s = abs(inner(normalize(a), normalize(b)))
    if s > 1.0 + 1e-12:
        raise NumericalConsistencyError(f"overlap {s!r} exceeds unity")
    return min(s, 1.0)


def expectation(op: Operator, s: State) -> complex:
    _check_space(op.metric, s.metric)
    _require_normalized(s)
    value = inner(s, op.apply(s))
    if op.hermitian and abs(value.imag) > 1e-10 * max(1.0, abs(value)):
        raise NumericalConsistencyError(f"hermitian expectation has imaginary part {value.imag:.3g}")
    return value


def centered(op: Operator, s: State) -> State:
    """``(op - <op> I) s``; orthogonal to ``s`` by construction."""
    _require_hermitian(op)
    mean = expectation(op, s).real
    return State(op.matrix @ s.amplitudes - mean * s.amplitudes, s.metric)


def std_dev(op: Operator, s: State) -> float:
    _require_hermitian(op)
    mean = expectation(op, s).real
    variance = moment(op, s, 2) - mean * mean
    if variance < -1e-12 * max(1.0, mean * mean):
        raise NumericalConsistencyError(f"negative variance {variance:.3g}")
    # The norm of the centred vector is the cancellation-free route to the spread.
    return norm(centered(op, s))


def moment(op: Operator, s: State, k: int) -> float:
    """``<s|op^k|s>`` by repeated matrix-vector products (no eigendecomposition)."""
    _require_hermitian(op)
    _check_space(op.metric, s.metric)
    _require_normalized(s)
    if k < 0 or int(k) != k:
        raise DomainError("moment order must be a nonnegative integer")
    if k > K_MAX:
        raise DomainError(f"moment order {k} exceeds k_max = {K_MAX}")
    half = k // 2
    left = s.amplitudes
    for _ in range(half):
        left = op.matrix @ left
    right = left
    for _ in range(k - 2 * half):
        right = op.matrix @ right
    value = complex(np.sum(s.metric.weights * np.conj(left) * right))
    if abs(value.imag) > 1e-10 * max(1.0, abs(value)):
        raise NumericalConsistencyError(f"moment {k} has imaginary part {value.imag:.3g}")
    return value.real


def project_out(target: State, direction: State) -> State:
    """Remove from ``target`` its component along ``direction``: ``(I - |d><d|) target``."""
    d = normalize(direction)
    _check_space(target.metric, d.metric)
    return State(target.amplitudes - inner(d, target) * d.amplitudes, target.metric)


def grid_state(samples: Sequence[complex], metric: SpaceMetric) -> State:
    if metric.kind != "grid":
        raise DimensionError("grid_state needs a grid metric")
    samples = np.asarray(samples, dtype=complex)
    if samples.shape != (metric.dimension,):
        raise DimensionError(f"{samples.size} samples for {metric.dimension} grid points")
    return State(samples, metric)
