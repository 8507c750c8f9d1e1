"""The eight acceptance criteria, each recorded as one PASS/FAIL line in the run summary."""
import math
import time

import numpy as np
import pytest

from overlap_bounds import dynamics, selftest
from overlap_bounds.csvout import parse_blocks
from overlap_bounds.harness import RunConfig, fig1_row, run


def timed(fn, *args):
    start = time.perf_counter()
    value = fn(*args)
    return value, time.perf_counter() - start


@pytest.mark.parametrize("points", [1001, 2001])
def test_1_box_example(acceptance, points):
    target = 630 / math.pi ** 6
    (text, status), elapsed = timed(run, RunConfig("box", quadrature_points=points))
    rhs = float(dict(parse_blocks(text)[0][1])["eq16_rhs"])
    with acceptance(f"1 box example ({points} points)", f"rhs={rhs:.9f} target={target:.9f} t={elapsed:.3f}s"):
        assert status == 0
        assert abs(rhs - target) <= 5e-4
        assert abs(rhs - 0.6553) <= 5e-4
        assert elapsed < 1.0


def test_2_gaussian_triple(acceptance):
    def compute():
        g = dynamics.GaussianPacketModel(1.0)
        triple = (dynamics.gaussian_lower_bound(g, 0.25), dynamics.sine_upper_bound(1.0, 0.25),
                  dynamics.gaussian_exact(g, 0.25))
        ordered = all(
            dynamics.gaussian_lower_bound(g, s) <= dynamics.gaussian_exact(g, s) <= dynamics.sine_upper_bound(1.0, s)
            for s in np.linspace(0, math.pi / 2, 2001)
        )
        return triple, ordered

    ((lower, upper, exact), ordered), elapsed = timed(compute)
    with acceptance("2 gaussian decay triple", f"{lower:.6f} <= {exact:.6f} <= {upper:.6f} t={elapsed:.3f}s"):
        assert lower == pytest.approx(0.2289, abs=1e-4)
        assert upper == pytest.approx(0.2474, abs=1e-4)
        assert exact == pytest.approx(0.2392, abs=1e-4)
        assert ordered
        assert elapsed < 1.0


def test_3_two_level_exactness(acceptance):
    rng = np.random.default_rng(3)

    def compute():
        worst = 0.0
        for _ in range(20):
            w1, w2 = rng.uniform(-5, 5, size=2)
            theta = rng.uniform(0.01, math.pi / 2 - 0.01)
            m = dynamics.TwoLevelModel(float(w1), float(w2), float(theta))
            nl = m.to_nlevel()
            times = np.linspace(0, 4 * math.pi / abs(m.omega21), 1000)
            deviation = dynamics.decay_lower_bound(nl, times) - np.sqrt(dynamics.survival(nl, times).Q)
            worst = max(worst, float(np.max(np.abs(deviation))))
        return worst

    worst, elapsed = timed(compute)
    with acceptance("3 two-level exactness", f"max deviation {worst:.2e} t={elapsed:.3f}s"):
        assert worst <= 1e-12
        assert elapsed < 1.0


def test_4_speed_limits(acceptance):
    m = dynamics.TwoLevelModel(0.0, 1.0, math.pi / 4)
    limits = dynamics.speed_limit_times(m)
    cf = dynamics.two_level_closed_form(m, 0.0)
    with acceptance("4 speed limits", f"tau*dE={limits.fleming * cf.delta_e!r} tau*<H>={limits.fleming * cf.h_mean!r}"):
        assert abs(limits.fleming * cf.delta_e - math.pi / 2) <= 1e-12
        assert abs(limits.fleming * cf.h_mean - math.pi / 2) <= 1e-12
        assert abs(limits.margolus_levitin - limits.fleming) <= 1e-12
        # the orthogonal state is actually reached at tau
        assert dynamics.survival(m.to_nlevel(), limits.fleming).P <= 1e-12


def test_5_product_law(acceptance):
    errs = {phi: abs(dynamics.recurrence_summary(phi).product - math.pi / 2) for phi in (0.2, 0.1, 0.05, 0.025)}
    product = dynamics.recurrence_summary(0.1).product
    with acceptance("5 recurrence product law", f"product(0.1)={product:.6f}"):
        for phi, err in errs.items():
            assert err <= 1.05 * (math.pi / 3) * phi ** 2
        assert product == pytest.approx(1.5603, abs=1e-4)


def test_6_figure1_anchors(acceptance):
    zero, plus, minus = fig1_row(0.0), fig1_row(1.0), fig1_row(-1.0)
    text, _ = run(RunConfig("fig1"))
    rows = {r[0]: r for r in parse_blocks(text)[0][1]}
    with acceptance("6 figure 1 anchors", f"curve2(0)={zero[2]:.9f} eq16(0)={zero[6]!r}"):
        assert zero[1] == 0.0
        assert zero[2] == pytest.approx(1 / math.sqrt(2), abs=1e-5)
        assert zero[6] == pytest.approx(1.0, abs=1e-10)
        assert plus[1] == pytest.approx(1 / math.sqrt(2), abs=1e-5)
        assert minus[1] == pytest.approx(1 / math.sqrt(2), abs=1e-5)
        # the shipped CSV carries the same anchors
        assert rows["0.00000000"][2] == "0.707106781" and rows["0.00000000"][6] == "1.00000000"


EQUATION_SUITES = [
    "csi_soundness", "cauchy_coefficients_soundness", "moment_bound_soundness", "icsi_soundness",
    "single_aux_soundness", "projector_tightening", "triangle_soundness", "improved_triangle_soundness",
    "uncertainty_product_soundness", "single_aux_product_soundness", "uncertainty_sum_consistency",
    "improved_sum_soundness", "eckart_bounds", "decay_bound_and_unitarity",
    "optimal_alpha_optimality", "shared_aux_supremum",
]


def test_7_property_sweeps(acceptance, selftest_default):
    outcome, elapsed = selftest_default
    by_name = {r.name: r for r in outcome.results}
    with acceptance("7 property-based sweeps (seed 42)", f"{sum(r.passed for r in outcome.results)}/{len(outcome.results)} suites, t={elapsed:.1f}s"):
        assert outcome.seed == 42
        for name in EQUATION_SUITES:
            assert by_name[name].passed, by_name[name].counterexample
        assert all(by_name[n].samples >= selftest.SAMPLES for n in EQUATION_SUITES)
        assert outcome.ok
        assert elapsed < 30.0


def test_8_series_consistency(acceptance):
    ratios = [selftest.series_residual_ratio(dynamics.NLevelModel.normalized(w, c)) for w, c in selftest.SERIES_FIXTURES]
    leading = []
    for w, c in selftest.SERIES_FIXTURES:
        m = dynamics.NLevelModel.normalized(w, c)
        t = 1e-5 / m.energy_spread()
        exact = dynamics.decay_lower_bound(m, t)
        leading.append(abs(dynamics.short_time_series(m, t, "paper") - exact) / exact)
    with acceptance("8 series consistency", "ratios " + ", ".join(f"{r:.2f}" for r in ratios)):
        assert len(ratios) == 3
        assert all(24.0 <= r <= 40.0 for r in ratios)
        assert max(leading) < 1e-8
