import math

import numpy as np
import pytest

from overlap_bounds import uncertainty as unc
from overlap_bounds.bounds import AuxPair
from overlap_bounds.errors import (
    DegenerateUncertaintyError,
    DomainError,
    NumericalConsistencyError,
    OrthogonalityRequiredError,
)
from overlap_bounds.linspace import Operator, State, centered, inner, normalize, std_dev

SX = Operator.of([[0, 1], [1, 0]])
SY = Operator.of([[0, -1j], [1j, 0]])
UP = State.of([1, 0])

# commuting diagonal pair with zero covariance in the uniform state: dA = 3, dB = 4
A34 = Operator.diagonal([3, 3, -3, -3])
B34 = Operator.diagonal([4, -4, 4, -4])
UNIFORM4 = State.of([0.5, 0.5, 0.5, 0.5])


def test_fixture_has_zero_covariance():
    pa, pb = centered(A34, UNIFORM4), centered(B34, UNIFORM4)
    assert inner(pa, pb) == 0
    assert (std_dev(A34, UNIFORM4), std_dev(B34, UNIFORM4)) == (3.0, 4.0)


class TestUPI:
    def test_pauli_saturation(self):
        r = unc.upi(SX, SY, UP)
        assert r.lhs == pytest.approx(1.0) and r.rhs == pytest.approx(1.0)

    def test_same_operator(self, rng):
        phi = normalize(State.of(rng.normal(size=3) + 1j * rng.normal(size=3)))
        A = Operator.diagonal([0.0, 1.0, 3.0])
        r = unc.upi(A, A, phi)
        assert r.rhs == pytest.approx(std_dev(A, phi) ** 2) and r.gap == pytest.approx(0, abs=1e-14)

    def test_uncorrelated_spreads_kill_the_bound(self):
        r = unc.upi(A34, B34, UNIFORM4)
        assert r.rhs == 0 and r.lhs == 12

    def test_eigenstate_rejected(self):
        with pytest.raises(DegenerateUncertaintyError):
            unc.upi(Operator.diagonal([1, -1]), SX, UP)


class TestModifiedUPI:
    def test_parent_aux_is_equivalent_to_upi(self, rng):
        A, B = SX, Operator.of([[1, 0.3 - 0.2j], [0.3 + 0.2j, -0.5]])
        phi = normalize(State.of([1.0, 0.4 + 0.3j]))
        pa, pb = centered(A, phi), centered(B, phi)
        r = unc.modified_upi(A, B, phi, AuxPair(normalize(pb), normalize(pa)))
        plain = unc.upi(A, B, phi)
        assert r.rhs == pytest.approx(plain.rhs ** 2 / plain.lhs, rel=1e-12)

    def test_saturating_aux(self):
        pa, pb = centered(A34, UNIFORM4), centered(B34, UNIFORM4)
        r = unc.modified_upi(A34, B34, UNIFORM4, AuxPair(normalize(pa), normalize(pb)))
        assert r.rhs == pytest.approx(12.0) and r.gap == pytest.approx(0, abs=1e-12)

    def test_generic_aux_avoids_zero(self):
        theta = normalize(State.of([1, 2, 3, 4]))
        r = unc.modified_upi(A34, B34, UNIFORM4, AuxPair(theta, theta))
        assert r.rhs > 0 and r.satisfied

    def test_single_aux_orthogonal_theta(self):
        theta = normalize(centered(B34, UNIFORM4))
        assert unc.modified_upi_single(A34, B34, UNIFORM4, theta).rhs == pytest.approx(0, abs=1e-15)

    def test_single_aux_saturation(self):
        pa, pb = centered(A34, UNIFORM4), centered(B34, UNIFORM4)
        theta = (pa / 3 + pb / 4) / math.sqrt(2)
        r = unc.modified_upi_single(A34, B34, UNIFORM4, theta)
        assert r.rhs == pytest.approx(12.0) and r.gap == pytest.approx(0, abs=1e-12)

    def test_single_aux_in_span(self, rng):
        pa, pb = normalize(centered(A34, UNIFORM4)), normalize(centered(B34, UNIFORM4))
        for _ in range(50):
            u, v = rng.normal(size=2) + 1j * rng.normal(size=2)
            theta = normalize(u * pa + v * pb)
            assert unc.modified_upi_single(A34, B34, UNIFORM4, theta).satisfied

    def test_single_aux_requires_uncorrelated(self):
        with pytest.raises(OrthogonalityRequiredError):
            unc.modified_upi_single(SX, SY, UP, normalize(State.of([1, 1])))


class TestSumRelations:
    def test_same_operator_plus_branch(self):
        phi = normalize(State.of([1, 2, 2]))
        A = Operator.diagonal([0.0, 1.0, 3.0])
        r = unc.uncertainty_sum(A, A, phi)
        assert r.extras["plus"] == pytest.approx(2 * std_dev(A, phi))
        assert r.gap == pytest.approx(0, abs=1e-14)

    def test_negated_operator_minus_branch(self):
        phi = normalize(State.of([1, 2, 2]))
        A = Operator.diagonal([0.0, 1.0, 3.0])
        r = unc.uncertainty_sum(A, -A, phi)
        assert r.extras["minus"] == pytest.approx(r.lhs) and r.gap == pytest.approx(0, abs=1e-14)

    def test_pauli(self):
        r = unc.uncertainty_sum(SX, SY, UP)
        assert r.lhs == pytest.approx(2.0)
        assert r.rhs == pytest.approx(math.sqrt(2))
        assert r.extras["minus"] == pytest.approx(math.sqrt(2))

    def test_orthogonal_floor(self):
        assert unc.orthogonal_floor(A34, B34, UNIFORM4) == pytest.approx(5.0)
        A11 = Operator.diagonal([1, 1, -1, -1])
        B11 = Operator.diagonal([1, -1, 1, -1])
        assert unc.orthogonal_floor(A11, B11, UNIFORM4) == pytest.approx(math.sqrt(2))

    def test_floor_matches_sum_variants(self):
        r = unc.uncertainty_sum(A34, B34, UNIFORM4)
        assert r.extras["minus"] == pytest.approx(5.0, abs=1e-10)
        assert r.extras["plus"] == pytest.approx(5.0, abs=1e-10)

    def test_floor_precondition(self):
        with pytest.raises(OrthogonalityRequiredError):
            unc.orthogonal_floor(SX, SY, UP)


class TestIUSI:
    def test_saturating_aux(self):
        pa, pb = centered(A34, UNIFORM4), centered(B34, UNIFORM4)
        r = unc.iusi(A34, B34, UNIFORM4, AuxPair(normalize(pa), normalize(pb)))
        assert r.lhs == 7 and r.gap == pytest.approx(0, abs=1e-12)

    def test_best_shared_aux_recovers_floor(self):
        theta, best = unc.best_shared_aux(A34, B34, UNIFORM4)
        assert best == pytest.approx(5.0, abs=1e-8)
        # the optimum sits at tan(beta) = dB/dA
        pa, pb = normalize(centered(A34, UNIFORM4)), normalize(centered(B34, UNIFORM4))
        assert abs(inner(pa, theta)) == pytest.approx(0.6, abs=1e-6)
        assert abs(inner(pb, theta)) == pytest.approx(0.8, abs=1e-6)

    def test_golden_section_against_dense_scan(self):
        f = lambda b: 3 * abs(math.cos(b)) + 4 * abs(math.sin(b))
        x, fx = unc.golden_maximize(f, 0.0, 1.5)
        assert x == pytest.approx(math.atan2(4, 3), abs=1e-6)
        dense = max(f(b) for b in np.linspace(0, 1.5, 200001))
        assert fx >= dense - 1e-12

    def test_random_aux_satisfied(self, rng):
        for _ in range(50):
            t1 = normalize(State.of(rng.normal(size=4) + 1j * rng.normal(size=4)))
            t2 = normalize(State.of(rng.normal(size=4) + 1j * rng.normal(size=4)))
            assert unc.iusi(A34, B34, UNIFORM4, AuxPair(t1, t2)).satisfied


def rotation_trial(delta):
    return State.of([math.cos(delta), math.sin(delta)])


H01 = Operator.diagonal([0.0, 1.0])
GROUND = (0.0, State.of([1.0, 0.0]))


class TestEckart:
    def test_exact_trial(self):
        assert unc.eckart_lower(unc.EckartInput(0.0, 1.0, 0.0)) == 1.0

    def test_trial_at_second_level(self):
        assert unc.eckart_lower(unc.EckartInput(0.0, 1.0, 1.0)) == 0.0

    def test_two_level_saturation(self):
        delta = 0.3
        eps_bar = math.sin(delta) ** 2
        low = unc.eckart_lower(unc.EckartInput(0.0, 1.0, eps_bar))
        assert low == pytest.approx(math.cos(delta) ** 2, abs=1e-15)
        assert low == pytest.approx(0.9126678074548392, abs=1e-15)

    def test_input_validation(self):
        with pytest.raises(DomainError):
            unc.EckartInput(1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            unc.EckartInput(0.0, 1.0, -0.5)

    def test_complementary_saturation(self):
        delta = 0.3
        diag = unc.eckart_verify(H01, rotation_trial(delta), GROUND)
        r = unc.eckart_complementary(diag)
        cot = 1 / math.tan(delta)
        assert r.lhs == pytest.approx(cot) and r.rhs == pytest.approx(cot)
        assert r.sense == "upper" and r.satisfied
        assert r.extras["s_max"] == pytest.approx(math.cos(delta))

    def test_large_spread_relaxes_cap(self):
        r = unc.eckart_complementary(unc.OverlapDiagnostics(0.5, 1e8, 1.0, 0.0))
        assert r.extras["s_max"] == pytest.approx(1.0, abs=1e-15)

    def test_zero_denominator(self):
        with pytest.raises(DomainError):
            unc.eckart_complementary(unc.OverlapDiagnostics(0.5, 0.1, 1.0, 1.0))

    def test_unit_overlap_flagged(self):
        r = unc.eckart_complementary(unc.OverlapDiagnostics(1.0, 0.1, 1.0, 0.0))
        assert math.isinf(r.lhs) and not r.satisfied and r.extras["infinite_lhs"]

    def test_verify_exact_eigenstate(self):
        diag = unc.eckart_verify(H01, GROUND[1], GROUND)
        assert diag.s_n == 1.0 and diag.delta_eps == 0.0

    def test_verify_rotation_closed_forms(self):
        d = 0.7
        diag = unc.eckart_verify(H01, rotation_trial(d), GROUND)
        assert diag.s_n == pytest.approx(math.cos(d))
        assert diag.eps_bar == pytest.approx(math.sin(d) ** 2)
        assert diag.delta_eps == pytest.approx(math.sin(d) * math.cos(d))

    def test_verify_three_level(self):
        H = Operator.diagonal([0.0, 1.0, 3.0])
        v = np.array([0.98, 0.15, 0.1])
        v = v / np.linalg.norm(v)
        diag = unc.eckart_verify(H, State.of(v), (0.0, State.of([1, 0, 0])))
        e = np.array([0.0, 1.0, 3.0])
        mean = float(np.sum(v ** 2 * e))
        assert diag.s_n == pytest.approx(v[0])
        assert diag.eps_bar == pytest.approx(mean)
        assert diag.delta_eps == pytest.approx(math.sqrt(np.sum(v ** 2 * e ** 2) - mean ** 2))
        assert unc.eckart_complementary(diag).satisfied

    def test_verify_rejects_non_eigenpair(self):
        with pytest.raises(DomainError):
            unc.eckart_verify(H01, rotation_trial(0.2), (0.0, State.of([0.6, 0.8])))

    def test_random_four_level(self, rng):
        for _ in range(100):
            eps = np.sort(rng.uniform(-2, 2, size=4))
            q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
            H = Operator.of(q @ np.diag(eps) @ q.conj().T)
            k = int(rng.integers(0, 4))
            phi_k = State.of(q[:, k])
            trial = normalize(phi_k + 0.3 * normalize(State.of(rng.normal(size=4) + 0j)))
            assert unc.eckart_complementary(unc.eckart_verify(H, trial, (eps[k], phi_k))).satisfied

    @pytest.mark.parametrize("delta", np.linspace(0, math.pi / 2, 52)[1:-1])
    def test_sandwich(self, delta):
        diag = unc.eckart_verify(H01, rotation_trial(delta), GROUND)
        low = unc.eckart_lower(unc.EckartInput(0.0, 1.0, diag.eps_bar))
        cap = unc.eckart_complementary(diag).extras["s_max"]
        assert low == pytest.approx(diag.s_n ** 2, abs=1e-10)
        assert cap ** 2 == pytest.approx(diag.s_n ** 2, abs=1e-10)
