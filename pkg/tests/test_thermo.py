import math

import numpy as np
import pytest
from scipy.optimize import brentq

from conftest import random_params
from qar.dynamics import build_liouvillian, steady_state
from qar.errors import NegativeVirtualTemperatureWarning, NotStationary, TemperatureOrderViolation, ZeroWorkCurrent
from qar.model import RefrigeratorParams
from qar.thermo import (
    carnot_cop,
    cooling_window_max,
    current_curve,
    heat_currents,
    stationary_report,
    virtual_temperature,
    virtual_temperature_of,
    window_edge,
)

# mpmath, 40 digits, reference temperatures
CARNOT_REF = 0.03730207344086223041644785608171923275954
WMAX_REF = 2.121368916581835043783389575367372767035

ENSEMBLE = random_params(100, seed=99)


@pytest.mark.parametrize("mode", ["delocalized", "localized"])
def test_first_and_second_law(mode):
    for p in ENSEMBLE:
        _, r = stationary_report(p, mode)
        q = np.array([r.qdot_w, r.qdot_h, r.qdot_c])
        assert abs(q.sum()) <= 1e-10 * np.abs(q).max()
        assert r.entropy_production >= -1e-12


def test_localized_cop_is_frequency_ratio():
    for p in ENSEMBLE:
        _, r = stationary_report(p, "localized")
        assert r.cooling
        assert r.cop == pytest.approx(p.omega_c / p.omega_w, rel=1e-8)


def test_localized_window_edge_sign_change():
    for p in ENSEMBLE[:20]:
        wmax = cooling_window_max(p)
        delta = 1e-3 * wmax
        below = stationary_report(p.replace(omega_c=wmax - delta), "localized")[1]
        above = stationary_report(p.replace(omega_c=wmax + delta), "localized")[1]
        assert below.qdot_c > 0 > above.qdot_c


@pytest.mark.parametrize("mode", ["delocalized", "localized"])
def test_currents_scale_with_gamma(mode):
    # localized currents are linear in gamma only while gamma << g
    p = ENSEMBLE[0].replace(gamma=1e-8)
    _, a = stationary_report(p, mode)
    _, b = stationary_report(p.replace(gamma=7 * p.gamma), mode)
    np.testing.assert_allclose([b.qdot_w, b.qdot_h, b.qdot_c], 7 * np.array([a.qdot_w, a.qdot_h, a.qdot_c]),
                               rtol=1e-8)
    assert b.cop == pytest.approx(a.cop, rel=1e-8)


def test_zero_coupling_localized_currents_vanish():
    p = ENSEMBLE[3].replace(g=0.0)
    _, r = stationary_report(p, "localized")
    assert max(abs(r.qdot_w), abs(r.qdot_h), abs(r.qdot_c)) <= 1e-12 * p.gamma * p.omega_h
    assert not r.cooling and math.isnan(r.cop)


def test_curve_matches_pointwise(ref):
    wc = np.array([0.05, 0.4, 1.1, 2.0])
    curve = current_curve(ref, wc)
    # g / 2 is a degenerate point
    assert np.isnan(curve["c"][0])
    for k, w in enumerate(wc[1:], start=1):
        _, r = stationary_report(ref.replace(omega_c=w))
        np.testing.assert_allclose([curve["w"][k], curve["h"][k], curve["c"][k]], [r.qdot_w, r.qdot_h, r.qdot_c],
                                   rtol=1e-8, atol=1e-22)


class TestCarnot:
    def test_reference_value(self):
        assert carnot_cop(127.33, 66.25, 4.78) == pytest.approx(CARNOT_REF, rel=1e-14)

    def test_scale_invariance(self):
        assert carnot_cop(3 * 127.33, 3 * 66.25, 3 * 4.78) == pytest.approx(CARNOT_REF, rel=1e-13)

    def test_pole(self):
        assert carnot_cop(3.0, 1.0 + 1e-14, 1.0) == math.inf

    def test_order(self):
        with pytest.raises(TemperatureOrderViolation):
            carnot_cop(1.0, 2.0, 0.5)


class TestWindow:
    def test_reference_edge(self, ref):
        assert cooling_window_max(ref) == pytest.approx(WMAX_REF, rel=1e-14)

    def test_edge_is_where_virtual_matches_cold(self, ref):
        def gap(w):
            return virtual_temperature_of(ref.omega_w, w, ref.T_w, ref.T_h) - ref.T_c

        root = brentq(gap, 0.1, 10.0, xtol=1e-14, rtol=1e-15)
        assert root == pytest.approx(WMAX_REF, rel=1e-12)
        assert virtual_temperature(ref.replace(omega_c=WMAX_REF)) == pytest.approx(ref.T_c, rel=1e-12)

    def test_virtual_below_cold_inside_window(self, ref):
        assert virtual_temperature(ref.replace(omega_c=0.5 * WMAX_REF)) < ref.T_c

    def test_equal_work_and_hot_temperature_limit(self):
        assert virtual_temperature_of(5.0, 1.0, 2.0, 2.0) == pytest.approx(2.0, rel=1e-14)

    def test_inverted_population_warns(self):
        with pytest.warns(NegativeVirtualTemperatureWarning):
            t = virtual_temperature_of(10.0, 0.1, 1.0, 5.0)
        assert t < 0

    def test_edge_function_matches_params(self):
        p = ENSEMBLE[5]
        assert window_edge(p.omega_w, p.T_w, p.T_h, p.T_c) == cooling_window_max(p)


class TestErrors:
    def test_not_stationary(self, ref):
        liou = build_liouvillian(ref)
        with pytest.raises(NotStationary):
            heat_currents(liou, np.eye(8) / 8)

    def test_zero_work_current_strict(self):
        # equal work and hot temperatures: nothing drives the machine
        p = RefrigeratorParams(1.0, 0.5, 0.0, 1e-3, 2.0 + 1e-15, 2.0, 1.0)
        liou = build_liouvillian(p, "localized")
        rho = steady_state(liou)
        assert math.isnan(heat_currents(liou, rho).cop)
        with pytest.raises(ZeroWorkCurrent):
            heat_currents(liou, rho, strict=True)
