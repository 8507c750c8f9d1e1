"""Survival and decay probabilities under conservative evolution, and their bounds.

Discrete models are stored in the energy eigenbasis, so evolution is a phase
per level. All times and frequencies are in natural units; ``hbar`` is explicit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import DegenerateUncertaintyError, DomainError
from .linspace import EPS_NORM, Operator, State, moment, std_dev

SERIES_WINDOW = 0.5
SMALL_TIME_WINDOW = 0.1


@dataclass(frozen=True, eq=False)
class NLevelModel:
    omegas: np.ndarray
    coefficients: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        w = np.array(self.omegas, dtype=float)
        c = np.array(self.coefficients, dtype=complex)
        if w.ndim != 1 or w.shape != c.shape:
            raise ValueError("omegas and coefficients must be 1-d and of equal length")
        if w.size < 2:
            raise ValueError("need at least two levels")
        if abs(np.sum(np.abs(c) ** 2) - 1.0) > 1e-10:
            raise ValueError("initial coefficients must be normalized")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        w.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "omegas", w)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def normalized(cls, omegas, coefficients, hbar: float = 1.0) -> "NLevelModel":
        c = np.asarray(coefficients, dtype=complex)
        return cls(omegas, c / np.linalg.norm(c), hbar)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    @property
    def energies(self) -> np.ndarray:
        return self.hbar * self.omegas

    def hamiltonian(self) -> Operator:
        return Operator.diagonal(self.energies)

    def initial_state(self) -> State:
        return State.of(self.coefficients)

    def mean_energy(self) -> float:
        return float(np.dot(self.populations, self.energies))

    def energy_spread(self) -> float:
        return std_dev(self.hamiltonian(), self.initial_state())


@dataclass(frozen=True)
class TwoLevelModel:
    """Two levels with populations ``cos^2 theta`` and ``sin^2 theta``."""

    omega1: float
    omega2: float
    theta: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.omega2 == self.omega1:
            raise DomainError("two-level model needs distinct frequencies")
        if not 0.0 < self.theta < 0.5 * math.pi:
            raise DomainError("mixing angle must lie in (0, pi/2)")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")

    @property
    def omega21(self) -> float:
        return self.omega2 - self.omega1

    def to_nlevel(self) -> NLevelModel:
        return NLevelModel(
            [self.omega1, self.omega2], [math.cos(self.theta), math.sin(self.theta)], self.hbar
        )


@dataclass(frozen=True)
class GaussianPacketModel:
    """Free Gaussian packet at zero mean momentum, characterized by its energy spread."""

    delta_e: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.delta_e <= 0 or self.hbar <= 0:
            raise ValueError("delta_e and hbar must be positive")

    def reduced_time(self, t: float) -> float:
        return self.delta_e * t / self.hbar


@dataclass(frozen=True)
class DecayTrace:
    """Time series of exact and bounding values of sqrt(Q); ``None`` marks undefined points."""

    times: List[float]
    sqrt_q_exact: List[float]
    bound41: List[float]
    sine_upper: List[Optional[float]]
    series43: List[Optional[float]]


@dataclass(frozen=True)
class RecurrenceSummary:
    phi: float
    sqrt_q_max: float
    tau_g: float
    tau_e: float
    delta_e_g: float
    delta_e_e: float
    tau_rel: float
    delta_e_rel: float
    product: float


class SurvivalProbability(NamedTuple):
    P: float
    Q: float


class TwoLevelValues(NamedTuple):
    sqrt_q: float
    delta_e: float
    h_mean: float


class SpeedLimits(NamedTuple):
    fleming: float
    margolus_levitin: Optional[float]


def evolve(m: NLevelModel, t: float) -> State:
    return State.of(m.coefficients * np.exp(-1j * m.omegas * t))


def _scalar_or_array(values: np.ndarray, t):
    return float(values) if np.ndim(t) == 0 else values


def _phases(m: NLevelModel, t) -> np.ndarray:
    """``exp(-i w_j t)`` with levels on the last axis; ``t`` may be an array."""
    return np.exp(-1j * np.multiply.outer(np.asarray(t, dtype=float), m.omegas))


def decay_probability(m: NLevelModel, t):
    """``Q(t)`` in the cancellation-free form ``sum_jk p_j p_k 2 sin^2((w_j - w_k) t / 2)``.

    ``t`` may be a scalar or an array of times.
    """
    p = m.populations
    half = 0.5 * np.multiply.outer(np.asarray(t, dtype=float), m.omegas[:, None] - m.omegas[None, :])
    q = np.sum(np.outer(p, p) * 2.0 * np.sin(half) ** 2, axis=(-2, -1))
    return _scalar_or_array(np.clip(q, 0.0, 1.0), t)


def survival(m: NLevelModel, t) -> SurvivalProbability:
    amplitude = _phases(m, t) @ m.populations
    P = np.minimum(np.abs(amplitude) ** 2, 1.0)
    return SurvivalProbability(_scalar_or_array(P, t), decay_probability(m, t))


def _spread_or_raise(m: NLevelModel) -> float:
    de = m.energy_spread()
    if de <= EPS_NORM:
        raise DegenerateUncertaintyError("initial state is an energy eigenstate (zero spread)")
    return de


def decay_lower_bound(m: NLevelModel, t):
    """Lower bound on sqrt(Q(t)): ``|<psi(0)|(H - <H>) psi(t)>| / dE``.

    ``t`` may be a scalar or an array of times.
    """
    de = _spread_or_raise(m)
    weights = m.populations * (m.energies - m.mean_energy())
    return _scalar_or_array(np.abs(_phases(m, t) @ weights) / de, t)


def short_time_series(m: NLevelModel, t: float, variant: str = "full") -> float:
    """Short-time expansion of the decay lower bound through third order in ``t``.

    ``variant="paper"`` keeps only the ``mu^2`` correction,
    ``(dE t/hbar) [1 + t^2 mu^2 / (8 hbar^2 dE^4)]``;
    ``variant="full"`` also carries the ``nu`` term,
    ``(dE t/hbar) [1 + t^2 (mu^2/4 - dE^2 nu/3) / (2 hbar^2 dE^4)]``,
    with ``mu = <H^3> - <H^2><H>`` and ``nu = <H^4> - <H><H^3>``.
    """
    de = _spread_or_raise(m)
    if abs(t) * de / m.hbar >= SERIES_WINDOW:
        raise DomainError(f"|t| dE / hbar must stay below {SERIES_WINDOW}")
    H, psi = m.hamiltonian(), m.initial_state()
    h1, h2, h3, h4 = (moment(H, psi, k) for k in (1, 2, 3, 4))
    mu = h3 - h2 * h1
    lead = de * t / m.hbar
    scale = 2.0 * m.hbar ** 2 * de ** 4
    if variant == "paper":
        return lead * (1.0 + t * t * mu * mu / (4.0 * scale))
    if variant == "full":
        nu = h4 - h1 * h3
        return lead * (1.0 + t * t * (mu * mu / 4.0 - de * de * nu / 3.0) / scale)
    raise ValueError(f"variant must be 'paper' or 'full', got {variant!r}")


def sine_upper_bound(delta_e: float, t: float, hbar: float = 1.0) -> float:
    """``sin(dE t / hbar)``, an upper bound on sqrt(Q) for ``0 <= t <= pi hbar / (2 dE)``."""
    limit = 0.5 * math.pi * hbar / delta_e
    if t < 0 or t > limit * (1.0 + 1e-12):
        raise DomainError(f"t = {t} outside [0, {limit}]")
    return min(math.sin(delta_e * t / hbar), 1.0)


def gaussian_lower_bound(g: GaussianPacketModel, t: float) -> float:
    if t < 0:
        raise DomainError("time must be nonnegative")
    s = g.reduced_time(t)
    return s / (1.0 + 2.0 * s * s) ** 0.75


def gaussian_exact(g: GaussianPacketModel, t: float) -> float:
    """Exact sqrt(Q) for the packet, from ``P = (1 + 2 s^2)^(-1/2)``."""
    if t < 0:
        raise DomainError("time must be nonnegative")
    s = g.reduced_time(t)
    # 1 - (1+x)^(-1/2) written without cancellation
    x = 2.0 * s * s
    root = math.sqrt(1.0 + x)
    return math.sqrt(x / (root * (root + 1.0)))


def two_level_closed_form(m: TwoLevelModel, t: float) -> TwoLevelValues:
    s2 = math.sin(2.0 * m.theta)
    sqrt_q = s2 * abs(math.sin(0.5 * m.omega21 * t))
    delta_e = 0.5 * m.hbar * abs(m.omega21) * s2
    c, s = math.cos(m.theta), math.sin(m.theta)
    h_mean = m.hbar * (c * c * m.omega1 + s * s * m.omega2)
    return TwoLevelValues(sqrt_q, delta_e, h_mean)


def speed_limit_times(m: TwoLevelModel) -> SpeedLimits:
    """Time ``pi/|w21|`` of maximal decay, and ``h/(4<H>)`` when the lower level sits at zero."""
    fleming = math.pi / abs(m.omega21)
    ml = None
    if m.omega1 == 0.0:
        h_mean = two_level_closed_form(m, 0.0).h_mean
        if h_mean > 0:
            ml = 2.0 * math.pi * m.hbar / (4.0 * h_mean)
    return SpeedLimits(fleming, ml)


def recurrence_summary(phi: float, omega21: float = 1.0, hbar: float = 1.0) -> RecurrenceSummary:
    """Generic versus fastest-route decay for a fixed mixing angle ``phi`` in (0, pi/4].

    ``phi = pi/4`` is the equiprobable limit, where both routes coincide.
    """
    if not 0.0 < phi <= 0.25 * math.pi:
        raise DomainError(f"phi must lie in (0, pi/4], got {phi}")
    if omega21 <= 0 or hbar <= 0:
        raise DomainError("omega21 and hbar must be positive")
    s2 = math.sin(2.0 * phi)
    tau_g = math.pi / omega21
    tau_e = 4.0 * phi / omega21
    de_g = 0.5 * hbar * omega21 * s2
    de_e = 0.5 * hbar * omega21
    tau_rel = tau_g / tau_e
    de_rel = de_g / de_e
    return RecurrenceSummary(phi, s2, tau_g, tau_e, de_g, de_e, tau_rel, de_rel, tau_rel * de_rel)


def trace(m: NLevelModel, times: Sequence[float]) -> DecayTrace:
    times = [float(t) for t in times]
    if not times:
        raise ValueError("times must be nonempty")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("times must be strictly increasing")
    de = _spread_or_raise(m)
    sine_limit = 0.5 * math.pi * m.hbar / de
    arr = np.array(times)
    exact = np.sqrt(survival(m, arr).Q).tolist()
    bound = decay_lower_bound(m, arr).tolist()
    sine, series = [], []
    for t in times:
        sine.append(sine_upper_bound(de, t, m.hbar) if 0 <= t <= sine_limit else None)
        series.append(
            short_time_series(m, t, "full") if abs(t) * de / m.hbar < SERIES_WINDOW else None
        )
    return DecayTrace(times, exact, bound, sine, series)


def small_time_limit_check(m: NLevelModel, t_sequence: Sequence[float]) -> List[float]:
    """Ratios ``hbar sqrt(Q(t)) / (dE t)``, which tend to 1 as ``t -> 0``."""
    de = _spread_or_raise(m)
    limit = SMALL_TIME_WINDOW * m.hbar / de
    ratios = []
    for t in t_sequence:
        if not 0.0 < t < limit:
            raise DomainError(f"t = {t} outside (0, {limit})")
        ratios.append(m.hbar * math.sqrt(survival(m, t).Q) / (de * t))
    return ratios
