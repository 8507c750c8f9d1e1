"""Cauchy-Schwarz family inequalities evaluated as auditable reports.

Every evaluator returns a :class:`BoundReport`. Most relations here are lower
bounds (``lhs >= rhs``); the projector-tightened form bounds an inner product
from above, and its report carries ``sense="upper"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateStateError,
    DimensionError,
    OrthogonalityRequiredError,
    UnnormalizedStateError,
)
from .linspace import (
    EPS_NORM,
    NORMALIZED_TOL,
    Operator,
    State,
    inner,
    moment,
    norm,
    normalize,
    overlap,
    project_out,
)

TOL_BOUND = 1e-10
TOL_ORTH = 1e-8


@dataclass(frozen=True)
class BoundReport:
    """Both sides of one inequality evaluation.

    ``sense="lower"`` means the relation is ``lhs >= rhs``; ``"upper"`` means
    ``lhs <= rhs``. ``gap`` is signed so that ``gap >= -TOL_BOUND`` always reads
    as "satisfied", and ``tightness`` is the ratio of the smaller side to the
    larger one (absent when the larger side vanishes).
    """

    lhs: float
    rhs: float
    satisfied: bool
    gap: float
    tightness: Optional[float]
    method: str
    sense: str = "lower"
    extras: Mapping[str, float] = field(default_factory=dict)


def make_report(lhs: float, rhs: float, method: str, sense: str = "lower", **extras) -> BoundReport:
    lhs, rhs = float(lhs), float(rhs)
    if sense == "lower":
        gap, big, small = lhs - rhs, lhs, rhs
    elif sense == "upper":
        gap, big, small = rhs - lhs, rhs, lhs
    else:
        raise ValueError(f"unknown sense {sense!r}")
    tightness = small / big if big > EPS_NORM and np.isfinite(big) else None
    return BoundReport(lhs, rhs, bool(gap >= -TOL_BOUND), gap, tightness, method, sense, dict(extras))


@dataclass(frozen=True)
class AuxPair:
    theta1: State
    theta2: State

    def __post_init__(self):
        for name in ("theta1", "theta2"):
            _require_unit(getattr(self, name), name)


def _require_unit(s: State, name: str = "auxiliary state") -> None:
    if abs(norm(s) - 1.0) > NORMALIZED_TOL:
        raise UnnormalizedStateError(f"{name} must be normalized (norm = {norm(s):.12g})")


def csi(psi1: State, psi2: State) -> BoundReport:
    """Plain Cauchy-Schwarz: ``||psi1|| ||psi2|| >= |<psi1|psi2>|``."""
    return make_report(norm(psi1) * norm(psi2), abs(inner(psi1, psi2)), "csi")


def cauchy_coefficients(a: Sequence[complex], b: Sequence[complex]) -> BoundReport:
    """Cauchy's inequality on expansion coefficients.

    For real sequences, dividing both sides by ``len(a)`` gives the averaged
    form ``sqrt(mean(a^2) mean(b^2)) >= |mean(ab)|``; it is the same check.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError("coefficient sequences must be nonempty")
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.size} vs {b.size}")
    lhs = np.sqrt(np.sum(np.abs(a) ** 2)) * np.sqrt(np.sum(np.abs(b) ** 2))
    return make_report(lhs, abs(np.vdot(a, b)), "cauchy_coefficients")


def moment_bound(A: Operator, phi: State, m: int, n: int) -> BoundReport:
    """Moment inequality ``sqrt(<A^2m><A^2n>) >= |<A^(m+n)>|``."""
    lhs = np.sqrt(max(moment(A, phi, 2 * m), 0.0) * max(moment(A, phi, 2 * n), 0.0))
    return make_report(lhs, abs(moment(A, phi, m + n)), "moment_bound", m=m, n=n)


def icsi(psi1: State, psi2: State, aux: AuxPair) -> BoundReport:
    """Improved CSI with two auxiliary states."""
    rhs = abs(inner(psi1, aux.theta1)) * abs(inner(psi2, aux.theta2))
    return make_report(norm(psi1) * norm(psi2), rhs, "icsi")


def icsi_single_aux(psi1: State, psi2: State, theta: State) -> BoundReport:
    """Single-auxiliary ICSI, ``||psi1|| ||psi2|| >= 2 |<psi1|theta>| |<psi2|theta>|``.

    Holds only for exactly orthogonal parents, so it refuses to run otherwise.
    """
    s = overlap(psi1, psi2)
    if s >= TOL_ORTH:
        raise OrthogonalityRequiredError(
            f"single-auxiliary bound needs orthogonal states; overlap is {s:.3g}"
        )
    _require_unit(theta)
    rhs = 2.0 * abs(inner(psi1, theta)) * abs(inner(psi2, theta))
    return make_report(norm(psi1) * norm(psi2), rhs, "icsi_single_aux")


def optimal_alpha(psi1: State, psi3: State) -> complex:
    """Minimizer of ``||psi1 + alpha psi3||`` over complex ``alpha``."""
    n3 = inner(psi3, psi3).real
    if np.sqrt(n3) <= EPS_NORM:
        raise DegenerateStateError("psi3 has zero norm")
    return -inner(psi3, psi1) / n3


def projector_tightened_csi(psi1: State, psi2: State, psi3: State) -> BoundReport:
    """``|<psi1|psi2>| <= ||(I - P3) psi1|| ||psi2||`` for ``psi3`` orthogonal to ``psi2``."""
    n2, n3 = norm(psi2), norm(psi3)
    if n3 <= EPS_NORM:
        raise DegenerateStateError("psi3 has zero norm")
    if abs(inner(psi2, psi3)) >= TOL_ORTH * n2 * n3:
        raise OrthogonalityRequiredError("psi3 must be orthogonal to psi2")
    rhs = norm(project_out(psi1, psi3)) * n2
    return make_report(abs(inner(psi1, psi2)), rhs, "projector_tightened_csi", sense="upper")


def triangle_usi(psi1: State, psi2: State, sign: str = "minus") -> BoundReport:
    """Triangle relation ``||psi1|| + ||psi2|| >= ||psi1 -/+ psi2||``."""
    if sign == "minus":
        combo = psi1 - psi2
    elif sign == "plus":
        combo = psi1 + psi2
    else:
        raise ValueError(f"sign must be 'minus' or 'plus', got {sign!r}")
    return make_report(norm(psi1) + norm(psi2), norm(combo), f"triangle_usi[{sign}]")


def improved_triangle(psi1: State, psi2: State, aux: AuxPair) -> BoundReport:
    rhs = abs(inner(psi1, aux.theta1)) + abs(inner(psi2, aux.theta2))
    return make_report(norm(psi1) + norm(psi2), rhs, "improved_triangle")


def parent_aux_pair(
    psi1: State, psi2: State, c: Tuple[float, float], d: Tuple[float, float]
) -> AuxPair:
    """Auxiliary states built only from the normalized parents.

    ``theta1 ~ c1 psi1_N + c2 psi2_N`` and ``theta2 ~ d1 psi2_N + d2 psi1_N``.
    """
    for pair, label in ((c, "c"), (d, "d")):
        if len(pair) != 2 or min(pair) < 0:
            raise ValueError(f"{label} must be a pair of nonnegative reals")
    n1, n2 = normalize(psi1), normalize(psi2)
    try:
        theta1 = normalize(c[0] * n1 + c[1] * n2)
        theta2 = normalize(d[0] * n2 + d[1] * n1)
    except DegenerateStateError as exc:
        raise DegenerateStateError("auxiliary combination vanishes") from exc
    return AuxPair(theta1, theta2)


def parent_aux_bound(
    psi1: State, psi2: State, c: Tuple[float, float], d: Tuple[float, float]
) -> BoundReport:
    """Two-auxiliary ICSI using parent-state combinations (real, orthogonal parents)."""
    for s in (psi1, psi2):
        if np.any(np.abs(s.amplitudes.imag) > 0):
            raise ValueError("parent states must be real")
    s = overlap(psi1, psi2)
    if s >= TOL_ORTH:
        raise OrthogonalityRequiredError(f"parent states must be orthogonal; overlap is {s:.3g}")
    report = icsi(psi1, psi2, parent_aux_pair(psi1, psi2, c, d))
    return replace(report, method="parent_aux_bound")
