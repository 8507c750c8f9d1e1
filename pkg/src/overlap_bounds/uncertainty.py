"""Uncertainty product and sum relations, plus Eckart-type overlap bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .bounds import TOL_ORTH, AuxPair, BoundReport, _require_unit, make_report
from .errors import (
    DegenerateUncertaintyError,
    DomainError,
    NumericalConsistencyError,
    OrthogonalityRequiredError,
)
from .linspace import (
    EPS_NORM,
    Operator,
    State,
    centered,
    expectation,
    inner,
    norm,
    std_dev,
)

RESIDUAL_TOL = 1e-8
GOLDEN_GRID = 64


def _spreads(A: Operator, B: Operator, phi: State):
    phi_a, phi_b = centered(A, phi), centered(B, phi)
    da, db = norm(phi_a), norm(phi_b)
    if da <= EPS_NORM or db <= EPS_NORM:
        raise DegenerateUncertaintyError(
            f"zero standard deviation (dA = {da:.3g}, dB = {db:.3g}); phi is an eigenstate"
        )
    return phi_a, phi_b, da, db


def _require_uncorrelated(phi_a: State, phi_b: State, da: float, db: float) -> None:
    c = abs(inner(phi_a, phi_b))
    if c >= TOL_ORTH * da * db:
        raise OrthogonalityRequiredError(
            f"centred states must be orthogonal; |<phi_A|phi_B>| = {c:.3g}"
        )


def upi(A: Operator, B: Operator, phi: State) -> BoundReport:
    """Uncertainty product ``dA dB >= |<phi_A|phi_B>|`` with centred states ``phi_X``."""
    phi_a, phi_b, da, db = _spreads(A, B, phi)
    return make_report(da * db, abs(inner(phi_a, phi_b)), "upi")


def modified_upi(A: Operator, B: Operator, phi: State, aux: AuxPair) -> BoundReport:
    phi_a, phi_b, da, db = _spreads(A, B, phi)
    rhs = abs(inner(phi_a, aux.theta1)) * abs(inner(phi_b, aux.theta2))
    return make_report(da * db, rhs, "modified_upi")


def modified_upi_single(A: Operator, B: Operator, phi: State, theta: State) -> BoundReport:
    """Single-auxiliary product bound; needs ``<phi_A|phi_B> = 0``."""
    phi_a, phi_b, da, db = _spreads(A, B, phi)
    _require_uncorrelated(phi_a, phi_b, da, db)
    _require_unit(theta)
    rhs = 2.0 * abs(inner(phi_a, theta)) * abs(inner(phi_b, theta))
    return make_report(da * db, rhs, "modified_upi_single")


def uncertainty_sum(A: Operator, B: Operator, phi: State) -> BoundReport:
    """``dA + dB >= max(d(A - B), d(A + B))``; both variants are in ``extras``."""
    da, db = std_dev(A, phi), std_dev(B, phi)
    minus = std_dev(A - B, phi)
    plus = std_dev(A + B, phi)
    return make_report(da + db, max(minus, plus), "uncertainty_sum", minus=minus, plus=plus)


def orthogonal_floor(A: Operator, B: Operator, phi: State) -> float:
    """``sqrt(dA^2 + dB^2)``, what the sum relations collapse to for uncorrelated spreads."""
    phi_a, phi_b, da, db = _spreads(A, B, phi)
    _require_uncorrelated(phi_a, phi_b, da, db)
    return math.hypot(da, db)


def iusi(A: Operator, B: Operator, phi: State, aux: AuxPair) -> BoundReport:
    """Improved sum relation ``dA + dB >= |<phi_A|theta1>| + |<phi_B|theta2>|``."""
    phi_a, phi_b, da, db = _spreads(A, B, phi)
    rhs = abs(inner(phi_a, aux.theta1)) + abs(inner(phi_b, aux.theta2))
    return make_report(da + db, rhs, "iusi")


def golden_maximize(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> Tuple[float, float]:
    """Golden-section search for the maximum of a unimodal ``f`` on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def best_shared_aux(A: Operator, B: Operator, phi: State) -> Tuple[State, float]:
    """Best single auxiliary state in span{phi_A, phi_B} for the improved sum relation.

    With uncorrelated spreads the span is parametrized by one mixing angle
    ``beta``: ``theta = cos(beta) phi_A/dA + sin(beta) phi_B/dB``. A 64-point
    scan over [0, pi/2] locates the peak, golden-section refines it.
    Returns ``(theta, rhs)``.
    """
    phi_a, phi_b, da, db = _spreads(A, B, phi)
    _require_uncorrelated(phi_a, phi_b, da, db)
    ua, ub = phi_a / da, phi_b / db

    def theta_at(beta):
        return math.cos(beta) * ua + math.sin(beta) * ub

    # the objective is linear in the basis overlaps, so evaluate it on scalars
    aa, ab = inner(phi_a, ua), inner(phi_a, ub)
    ba, bb = inner(phi_b, ua), inner(phi_b, ub)

    def rhs(beta):
        c, s = math.cos(beta), math.sin(beta)
        return abs(c * aa + s * ab) + abs(c * ba + s * bb)

    grid = np.linspace(0.0, 0.5 * math.pi, GOLDEN_GRID)
    values = [rhs(b) for b in grid]
    i = int(np.argmax(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, GOLDEN_GRID - 1)]
    beta, _ = golden_maximize(rhs, lo, hi)
    if values[i] > rhs(beta):
        beta = grid[i]
    theta = theta_at(beta)
    return theta, iusi(A, B, phi, AuxPair(theta, theta)).rhs


@dataclass(frozen=True)
class EckartInput:
    epsilon1: float
    epsilon2: float
    epsilon_bar: float

    def __post_init__(self):
        if self.epsilon2 == self.epsilon1:
            raise DomainError("degenerate spectrum: epsilon2 == epsilon1")
        if not self.epsilon1 < self.epsilon2:
            raise DomainError("need epsilon1 < epsilon2")
        if self.epsilon_bar < self.epsilon1 - 1e-12 * max(1.0, abs(self.epsilon1)):
            raise DomainError("trial energy lies below the exact ground energy")


@dataclass(frozen=True)
class OverlapDiagnostics:
    s_n: float
    delta_eps: float
    eps_bar: float
    eps_n: float

    def __post_init__(self):
        if not 0.0 <= self.s_n <= 1.0:
            raise DomainError(f"overlap must lie in [0, 1], got {self.s_n}")
        if self.delta_eps < 0:
            raise DomainError("energy spread must be nonnegative")


def eckart_lower(inp: EckartInput) -> float:
    """Eckart lower bound on the squared ground-state overlap, clipped to [0, 1]."""
    value = (inp.epsilon2 - inp.epsilon_bar) / (inp.epsilon2 - inp.epsilon1)
    return min(max(value, 0.0), 1.0)


def eckart_complementary(diag: OverlapDiagnostics) -> BoundReport:
    """Upper-bound relation ``S/sqrt(1 - S^2) <= d_eps / |eps_bar - eps_n|``.

    The report has ``sense="upper"``; ``extras["s_max"]`` is the overlap cap
    ``R / sqrt(1 + R^2)`` implied by the right side ``R``.
    """
    denom = abs(diag.eps_bar - diag.eps_n)
    if denom == 0.0:
        raise DomainError("trial energy equals the exact level; right side undefined")
    rhs = diag.delta_eps / denom
    s_max = rhs / math.sqrt(1.0 + rhs * rhs) if np.isfinite(rhs) else 1.0
    if diag.s_n >= 1.0:
        return make_report(math.inf, rhs, "eckart_complementary[upper]", sense="upper",
                           s_max=s_max, infinite_lhs=1.0)
    lhs = diag.s_n / math.sqrt(1.0 - diag.s_n ** 2)
    return make_report(lhs, rhs, "eckart_complementary[upper]", sense="upper", s_max=s_max)


def eckart_verify(H: Operator, trial: State, exact_pair: Tuple[float, State]) -> OverlapDiagnostics:
    """Collect the overlap diagnostics of ``trial`` against a known eigenpair of ``H``.

    Also checks ``<psi1|psi2> = S^2 (eps_n - eps_bar)`` where ``psi1`` is the
    centred projector state and ``psi2`` the centred energy state.
    """
    eps_n, phi_n = exact_pair
    residual = norm(H.apply(phi_n) - eps_n * phi_n)
    if residual > RESIDUAL_TOL:
        raise DomainError(f"eigenpair residual {residual:.3g} exceeds {RESIDUAL_TOL}")
    amp = inner(phi_n, trial)
    s_n = min(abs(amp), 1.0)
    eps_bar = expectation(H, trial).real
    delta_eps = std_dev(H, trial)

    # centred projector state (A - <A>) trial with A = |phi_n><phi_n|
    psi1 = amp * phi_n - (s_n ** 2) * trial
    psi2 = centered(H, trial)
    lhs = inner(psi1, psi2)
    expected = s_n ** 2 * (eps_n - eps_bar)
    scale = max(1.0, abs(eps_n), abs(eps_bar))
    if abs(lhs - expected) > 1e-10 * scale:
        raise NumericalConsistencyError(
            f"projector identity violated: {lhs!r} vs {expected!r}"
        )
    return OverlapDiagnostics(s_n, delta_eps, eps_bar, float(eps_n))
