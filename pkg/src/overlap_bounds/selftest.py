"""Seeded property suites behind the ``selftest`` command.

Each suite draws its own generator from ``(seed, suite index)`` so suites are
independent and the whole run is reproducible byte for byte. A suite stops at
its first counterexample and reports the offending inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from . import bounds, dynamics, uncertainty
from .bounds import TOL_BOUND, AuxPair
from .linspace import (
    Operator,
    State,
    centered,
    inner,
    norm,
    normalize,
    project_out,
    std_dev,
)

SAMPLES = 1000


class Counterexample(Exception):
    pass


def _arr(a) -> str:
    return np.array2string(np.asarray(a), precision=6, separator=", ", max_line_width=10_000)


def check(condition: bool, message: str, **inputs) -> None:
    if not condition:
        details = "; ".join(
            f"{k}={_arr(v.amplitudes) if isinstance(v, State) else _arr(v.matrix) if isinstance(v, Operator) else v}"
            for k, v in inputs.items()
        )
        raise Counterexample(f"{message} [{details}]")


# random fixtures ---------------------------------------------------------------

def rand_vec(rng, dim) -> np.ndarray:
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


def rand_state(rng, dim) -> State:
    return State.of(rand_vec(rng, dim))


def rand_unit(rng, dim) -> State:
    return normalize(rand_state(rng, dim))


def rand_hermitian(rng, dim) -> Operator:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Operator.of(0.5 * (x + x.conj().T), hermitian=True)


def rand_unitary(rng, dim) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def uncorrelated_triple(rng, dim):
    """Commuting hermitian ``A, B`` and unit ``phi`` with ``<phi_A|phi_B> = 0``.

    Needs ``dim >= 3``: in two dimensions both centred states are parallel.
    """
    u = rand_unitary(rng, dim)
    a = rng.normal(size=dim)
    b = rng.normal(size=dim)
    A = Operator.of(u @ np.diag(a) @ u.conj().T, hermitian=True)
    B0 = Operator.of(u @ np.diag(b) @ u.conj().T, hermitian=True)
    phi = rand_unit(rng, dim)
    pa, pb = centered(A, phi), centered(B0, phi)
    # commuting operators give a real covariance, removed by a real shift along A
    beta = inner(pa, pb).real / inner(pa, pa).real
    B = Operator.of(B0.matrix - beta * A.matrix, hermitian=True)
    return A, B, phi


def orthogonal_pair(rng, dim):
    psi1 = rand_state(rng, dim)
    psi2 = project_out(rand_state(rng, dim), psi1)
    return psi1, psi2


def rand_model(rng, levels=None) -> dynamics.NLevelModel:
    n = levels or int(rng.integers(2, 9))
    return dynamics.NLevelModel.normalized(rng.uniform(-3, 3, size=n), rand_vec(rng, n))


def _dim(rng, lo=2, hi=16):
    return int(rng.integers(lo, hi + 1))


# suites ------------------------------------------------------------------------

def suite_inner_symmetry(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        a, b = rand_state(rng, d), rand_state(rng, d)
        ab, ba = inner(a, b), inner(b, a)
        check(abs(ab - ba.conjugate()) <= 1e-12 * max(1.0, abs(ab)), "conjugate symmetry", a=a, b=b)
        aa = inner(a, a)
        check(aa.real > 0 and abs(aa.imag) <= 1e-12 * aa.real, "metric positivity", a=a)
    return SAMPLES


def suite_centered_orthogonality(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng, 2, 8)
        A, phi = rand_hermitian(rng, d), rand_unit(rng, d)
        check(abs(inner(centered(A, phi), phi)) <= 1e-10, "centred state not orthogonal", A=A, phi=phi)
    return SAMPLES


def suite_projector_idempotence(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        t, dirn = rand_state(rng, d), rand_state(rng, d)
        once = project_out(t, dirn)
        twice = project_out(once, dirn)
        check(np.max(np.abs(once.amplitudes - twice.amplitudes)) <= 1e-12, "not idempotent", t=t, d=dirn)
        check(abs(inner(once, dirn)) <= 1e-10 * max(1.0, norm(dirn)), "residual not orthogonal", t=t, d=dirn)
    return SAMPLES


def suite_csi(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        a, b = rand_state(rng, d), rand_state(rng, d)
        r = bounds.csi(a, b)
        check(r.gap >= -tol, f"csi gap {r.gap:.3e}", psi1=a, psi2=b)
    return SAMPLES


def suite_cauchy_coefficients(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        a, b = rand_vec(rng, d), rand_vec(rng, d)
        r = bounds.cauchy_coefficients(a, b)
        check(r.gap >= -tol, f"coefficient gap {r.gap:.3e}", a=a, b=b)
        ra, rb = a.real, b.real
        avg = math.sqrt(np.mean(ra * ra) * np.mean(rb * rb)) - abs(np.mean(ra * rb))
        check(avg >= -tol, "averaged real form violated", a=ra, b=rb)
    return SAMPLES


def suite_moment_bound(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng, 2, 8)
        A, phi = rand_hermitian(rng, d), rand_unit(rng, d)
        m, n = (int(k) for k in rng.integers(0, 5, size=2))
        r = bounds.moment_bound(A, phi, m, n)
        check(r.gap >= -tol * max(1.0, r.lhs), f"moment gap {r.gap:.3e} (m={m}, n={n})", A=A, phi=phi)
    return SAMPLES


def suite_icsi(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        a, b = rand_state(rng, d), rand_state(rng, d)
        aux = AuxPair(rand_unit(rng, d), rand_unit(rng, d))
        r = bounds.icsi(a, b, aux)
        check(r.gap >= -tol, f"icsi gap {r.gap:.3e}", psi1=a, psi2=b, theta1=aux.theta1, theta2=aux.theta2)
        # parents as auxiliaries: rhs becomes |<a|b>|^2 / (|a||b|), the same inequality as csi
        special = bounds.icsi(a, b, AuxPair(normalize(b), normalize(a)))
        plain = bounds.csi(a, b)
        check(abs(special.rhs * plain.lhs - plain.rhs ** 2) <= 1e-12 * plain.lhs ** 2,
              "icsi with parent auxiliaries is not equivalent to csi", psi1=a, psi2=b)
    return SAMPLES


def suite_single_aux(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        a, b = orthogonal_pair(rng, d)
        theta = rand_unit(rng, d)
        r = bounds.icsi_single_aux(a, b, theta)
        check(r.gap >= -tol, f"single-aux gap {r.gap:.3e}", psi1=a, psi2=b, theta=theta)
    return SAMPLES


def suite_optimal_alpha(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        p1, p3 = rand_state(rng, d), rand_state(rng, d)
        alpha = bounds.optimal_alpha(p1, p3)
        best = norm(p1 + alpha * p3)
        closed = inner(p1, p1).real - abs(inner(p1, p3)) ** 2 / inner(p3, p3).real
        check(abs(best ** 2 - closed) <= 1e-12 * max(1.0, inner(p1, p1).real), "minimized norm mismatch", psi1=p1, psi3=p3)
        for ang in rng.uniform(0, 2 * math.pi, size=20):
            delta = 1e-3 * complex(math.cos(ang), math.sin(ang))
            check(norm(p1 + (alpha + delta) * p3) >= best - 1e-12, "perturbation lowers the norm", psi1=p1, psi3=p3)
    return SAMPLES


def suite_projector_tightening(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        p1, p2 = rand_state(rng, d), rand_state(rng, d)
        p3 = project_out(rand_state(rng, d), p2)
        r = bounds.projector_tightened_csi(p1, p2, p3)
        check(r.gap >= -tol, f"tightened bound violated, gap {r.gap:.3e}", psi1=p1, psi2=p2, psi3=p3)
        check(r.rhs <= norm(p1) * norm(p2) + 1e-12 * max(1.0, r.rhs), "tightening loosened the bound", psi1=p1, psi2=p2, psi3=p3)
    return SAMPLES


def suite_triangle(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        a, b = rand_state(rng, d), rand_state(rng, d)
        for sign in ("minus", "plus"):
            r = bounds.triangle_usi(a, b, sign)
            check(r.gap >= -tol, f"triangle[{sign}] gap {r.gap:.3e}", psi1=a, psi2=b)
    return SAMPLES


def suite_improved_triangle(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng)
        a, b = rand_state(rng, d), rand_state(rng, d)
        aux = AuxPair(rand_unit(rng, d), rand_unit(rng, d))
        r = bounds.improved_triangle(a, b, aux)
        check(r.gap >= -tol, f"improved triangle gap {r.gap:.3e}", psi1=a, psi2=b, theta1=aux.theta1, theta2=aux.theta2)
    return SAMPLES


def suite_upi(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng, 2, 8)
        A, B, phi = rand_hermitian(rng, d), rand_hermitian(rng, d), rand_unit(rng, d)
        r = uncertainty.upi(A, B, phi)
        check(r.gap >= -tol, f"upi gap {r.gap:.3e}", A=A, B=B, phi=phi)
        aux = AuxPair(rand_unit(rng, d), rand_unit(rng, d))
        r = uncertainty.modified_upi(A, B, phi, aux)
        check(r.gap >= -tol, f"modified upi gap {r.gap:.3e}", A=A, B=B, phi=phi, theta1=aux.theta1, theta2=aux.theta2)
    return SAMPLES


def suite_upi_single(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng, 3, 8)
        A, B, phi = uncorrelated_triple(rng, d)
        theta = rand_unit(rng, d)
        r = uncertainty.modified_upi_single(A, B, phi, theta)
        check(r.gap >= -tol, f"single-aux product gap {r.gap:.3e}", A=A, B=B, phi=phi, theta=theta)
    return SAMPLES


def suite_uncertainty_sum(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng, 2, 8)
        A, B, phi = rand_hermitian(rng, d), rand_hermitian(rng, d), rand_unit(rng, d)
        r = uncertainty.uncertainty_sum(A, B, phi)
        for key in ("minus", "plus"):
            check(r.extras[key] <= r.lhs + tol, f"sum relation [{key}] violated", A=A, B=B, phi=phi)
        A, B, phi = uncorrelated_triple(rng, max(d, 3))
        r = uncertainty.uncertainty_sum(A, B, phi)
        floor = uncertainty.orthogonal_floor(A, B, phi)
        for key in ("minus", "plus"):
            check(abs(r.extras[key] - floor) <= 1e-10 * max(1.0, floor), f"[{key}] differs from sqrt(dA^2+dB^2)", A=A, B=B, phi=phi)
        check(r.lhs >= floor - tol, "floor exceeds dA + dB", A=A, B=B, phi=phi)
    return SAMPLES


def suite_iusi(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng, 2, 8)
        A, B, phi = rand_hermitian(rng, d), rand_hermitian(rng, d), rand_unit(rng, d)
        aux = AuxPair(rand_unit(rng, d), rand_unit(rng, d))
        r = uncertainty.iusi(A, B, phi, aux)
        check(r.gap >= -tol, f"iusi gap {r.gap:.3e}", A=A, B=B, phi=phi, theta1=aux.theta1, theta2=aux.theta2)
        sat = AuxPair(normalize(centered(A, phi)), normalize(centered(B, phi)))
        r = uncertainty.iusi(A, B, phi, sat)
        check(abs(r.gap) <= 1e-10 * max(1.0, r.lhs), "saturating aux does not saturate", A=A, B=B, phi=phi)
    return SAMPLES


def suite_iusi_supremum(rng, tol):
    for _ in range(SAMPLES):
        d = _dim(rng, 3, 8)
        A, B, phi = uncorrelated_triple(rng, d)
        _, best = uncertainty.best_shared_aux(A, B, phi)
        target = math.hypot(std_dev(A, phi), std_dev(B, phi))
        check(abs(best - target) <= 1e-8 * max(1.0, target), f"shared-aux supremum {best!r} vs {target!r}", A=A, B=B, phi=phi)
    return SAMPLES


def _spectral_fixture(rng, dim=4):
    eps = np.sort(rng.uniform(-2, 2, size=dim))
    u = rand_unitary(rng, dim)
    H = Operator.of(u @ np.diag(eps) @ u.conj().T, hermitian=True)
    return H, eps, [State.of(u[:, k]) for k in range(dim)]


def suite_eckart(rng, tol):
    for _ in range(SAMPLES):
        H, eps, vecs = _spectral_fixture(rng)
        k = int(rng.integers(0, 4))
        trial = normalize(vecs[k] + float(rng.uniform(0.01, 0.8)) * rand_unit(rng, 4))
        diag = uncertainty.eckart_verify(H, trial, (eps[k], vecs[k]))
        r = uncertainty.eckart_complementary(diag)
        check(r.satisfied, f"complementary bound violated, gap {r.gap:.3e}", H=H, trial=trial)
        ground = normalize(vecs[0] + float(rng.uniform(0.01, 0.8)) * rand_unit(rng, 4))
        g = uncertainty.eckart_verify(H, ground, (eps[0], vecs[0]))
        low = uncertainty.eckart_lower(uncertainty.EckartInput(eps[0], eps[1], g.eps_bar))
        check(low <= g.s_n ** 2 + tol, f"Eckart lower bound {low!r} above S^2 {g.s_n ** 2!r}", H=H, trial=ground)
    return SAMPLES


def suite_eckart_sandwich(rng, tol):
    H = Operator.diagonal([0.0, 1.0])
    ground = (0.0, State.of([1.0, 0.0]))
    deltas = np.linspace(0.0, 0.5 * math.pi, 52)[1:-1]
    for delta in deltas:
        trial = State.of([math.cos(delta), math.sin(delta)])
        diag = uncertainty.eckart_verify(H, trial, ground)
        low = uncertainty.eckart_lower(uncertainty.EckartInput(0.0, 1.0, diag.eps_bar))
        s_max = uncertainty.eckart_complementary(diag).extras["s_max"]
        s2 = diag.s_n ** 2
        check(abs(low - s2) <= 1e-10 and abs(s_max ** 2 - s2) <= 1e-10, f"sandwich not saturated at delta={delta!r}")
    return len(deltas)


def suite_decay(rng, tol):
    for _ in range(SAMPLES):
        m = rand_model(rng)
        t = float(rng.uniform(0, 100))
        P, Q = dynamics.survival(m, t)
        check(-1e-15 <= P <= 1.0 and 0.0 <= Q <= 1.0, "probability outside [0, 1]", omegas=m.omegas, c=m.coefficients, t=t)
        check(abs(norm(dynamics.evolve(m, t)) - 1.0) <= 1e-12, "evolution not norm preserving", omegas=m.omegas, c=m.coefficients, t=t)
        b = dynamics.decay_lower_bound(m, t)
        check(b <= math.sqrt(Q) + tol, f"decay bound {b!r} exceeds sqrt(Q) {math.sqrt(Q)!r}", omegas=m.omegas, c=m.coefficients, t=t)
        check(b <= 1.0 + 1e-10, "decay bound above unity", omegas=m.omegas, c=m.coefficients, t=t)
    return SAMPLES


def suite_two_level_exactness(rng, tol):
    models = 20
    for _ in range(models):
        w1, w2 = rng.uniform(0, 3, size=2)
        th = float(rng.uniform(0.05, 0.5 * math.pi - 0.05))
        m = dynamics.TwoLevelModel(float(w1), float(w2), th).to_nlevel()
        period = 2 * math.pi / abs(w2 - w1)
        for t in np.linspace(0.0, period, 1000):
            diff = abs(dynamics.decay_lower_bound(m, t) - math.sqrt(dynamics.survival(m, t).Q))
            check(diff <= 1e-12, f"two-level bound differs by {diff:.3e}", omegas=m.omegas, c=m.coefficients, t=t)
    return models


def suite_gaussian_ordering(rng, tol):
    g = dynamics.GaussianPacketModel(1.0)
    grid = np.linspace(0.0, 0.5 * math.pi, 1001)
    for s in grid:
        lo, ex, up = dynamics.gaussian_lower_bound(g, s), dynamics.gaussian_exact(g, s), dynamics.sine_upper_bound(1.0, s)
        check(lo <= ex + 1e-12 and ex <= up + 1e-12, f"ordering broken at s={s!r}")
    return len(grid)


SERIES_FIXTURES = (
    ((0.0, 1.0), (1.0, 1.0)),
    ((0.0, 1.0, 3.0), (0.6, 0.48 + 0.36j, 0.52)),
    ((-1.0, 0.5, 2.0, 2.5), (0.3, 0.5j, 0.6, 0.4 - 0.2j)),
)


def series_residual_ratio(m: dynamics.NLevelModel, reduced_t: float = 0.2) -> float:
    """Ratio of series residuals at ``t`` and ``t/2``; 32 for a t^5 remainder."""
    de = m.energy_spread()
    t = reduced_t * m.hbar / de

    def residual(tt):
        return abs(dynamics.short_time_series(m, tt, "full") - dynamics.decay_lower_bound(m, tt))

    return residual(t) / residual(0.5 * t)


def suite_series(rng, tol):
    for omegas, coeffs in SERIES_FIXTURES:
        m = dynamics.NLevelModel.normalized(omegas, coeffs)
        ratio = series_residual_ratio(m)
        check(24.0 <= ratio <= 40.0, f"residual ratio {ratio:.3f} not ~32", omegas=m.omegas, c=m.coefficients)
    return len(SERIES_FIXTURES)


def suite_recurrence(rng, tol):
    phis = (0.2, 0.1, 0.05, 0.025)
    scaled = []
    for phi in phis:
        err = abs(dynamics.recurrence_summary(phi).product - 0.5 * math.pi)
        check(err <= 1.05 * (math.pi / 3) * phi ** 2, f"product error {err!r} at phi={phi}")
        scaled.append(err / phi ** 2)
    check(all(b >= a for a, b in zip(scaled, scaled[1:])), "scaled error not approaching its limit monotonically")
    check(abs(scaled[-1] - math.pi / 3) <= 0.01 * math.pi / 3, f"scaled error {scaled[-1]!r} not near pi/3")
    return len(phis)


def suite_exchange_symmetry(rng, tol):
    for _ in range(SAMPLES):
        w1, w2 = rng.uniform(-3, 3, size=2)
        th = float(rng.uniform(0.01, 0.5 * math.pi - 0.01))
        t = float(rng.uniform(0, 20))
        a = dynamics.two_level_closed_form(dynamics.TwoLevelModel(float(w1), float(w2), th), t)
        b = dynamics.two_level_closed_form(dynamics.TwoLevelModel(float(w1), float(w2), 0.5 * math.pi - th), t)
        check(abs(a.sqrt_q - b.sqrt_q) <= 1e-14 and abs(a.delta_e - b.delta_e) <= 1e-14,
              "exchange symmetry broken", omegas=(w1, w2), theta=th, t=t)
    return SAMPLES


SUITES: List[tuple] = [
    ("inner_product_axioms", suite_inner_symmetry),
    ("centered_orthogonality", suite_centered_orthogonality),
    ("projector_idempotence", suite_projector_idempotence),
    ("csi_soundness", suite_csi),
    ("cauchy_coefficients_soundness", suite_cauchy_coefficients),
    ("moment_bound_soundness", suite_moment_bound),
    ("icsi_soundness", suite_icsi),
    ("single_aux_soundness", suite_single_aux),
    ("optimal_alpha_optimality", suite_optimal_alpha),
    ("projector_tightening", suite_projector_tightening),
    ("triangle_soundness", suite_triangle),
    ("improved_triangle_soundness", suite_improved_triangle),
    ("uncertainty_product_soundness", suite_upi),
    ("single_aux_product_soundness", suite_upi_single),
    ("uncertainty_sum_consistency", suite_uncertainty_sum),
    ("improved_sum_soundness", suite_iusi),
    ("shared_aux_supremum", suite_iusi_supremum),
    ("eckart_bounds", suite_eckart),
    ("eckart_sandwich", suite_eckart_sandwich),
    ("decay_bound_and_unitarity", suite_decay),
    ("two_level_exactness", suite_two_level_exactness),
    ("gaussian_ordering", suite_gaussian_ordering),
    ("series_consistency", suite_series),
    ("recurrence_product_law", suite_recurrence),
    ("exchange_symmetry", suite_exchange_symmetry),
]

FORCED_FAILURE_SUITE = "csi_soundness"


@dataclass
class SuiteResult:
    name: str
    samples: int
    counterexample: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


@dataclass
class Outcome:
    seed: int
    results: List[SuiteResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def summary(self) -> str:
        lines = [f"selftest seed={self.seed}"]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.name} samples={r.samples}")
        failed = [r for r in self.results if not r.passed]
        lines.append(f"passed {len(self.results) - len(failed)}/{len(self.results)}, failed {len(failed)}")
        if failed:
            lines.append(f"first counterexample ({failed[0].name}): {failed[0].counterexample}")
        return "\n".join(lines) + "\n"


def run_suite(index: int, name: str, fn: Callable, seed: int, force_fail: bool = False) -> SuiteResult:
    rng = np.random.default_rng([seed, index])
    # the forced-failure hook demands an infinite margin from one suite
    tol = -math.inf if (force_fail and name == FORCED_FAILURE_SUITE) else TOL_BOUND
    try:
        count = fn(rng, tol)
    except Counterexample as exc:
        return SuiteResult(name, 0, str(exc))
    except Exception as exc:  # an error inside a suite is a failure, not a crash
        return SuiteResult(name, 0, f"unexpected {type(exc).__name__}: {exc}")
    return SuiteResult(name, count)


def run_all(seed: int = 42, force_fail: bool = False, only: Optional[List[str]] = None) -> Outcome:
    outcome = Outcome(seed)
    for index, (name, fn) in enumerate(SUITES):
        if only is not None and name not in only:
            continue
        outcome.results.append(run_suite(index, name, fn, seed, force_fail))
    return outcome
