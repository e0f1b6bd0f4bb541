import math

import numpy as np
import pytest

from qar.correlations import (
    VC_INDICES,
    TwoQubitState,
    classical_correlation,
    correlations_report,
    measured_information,
    partial_trace,
    ppt_min_eigenvalue,
    virtual_cold_state,
    von_neumann_entropy,
)
from qar.dynamics import build_liouvillian, steady_state
from qar.errors import EmptySubspace
from qar.model import RefrigeratorParams, basis_index
from qar.thermo import cooling_window_max

LN2 = math.log(2.0)
# mpmath: entropy of diag(0.9, 0.1) in nats
S_09 = 0.3250829733914482268723627519920993386479
# 256 x 512 (theta, phi) grid maximum, T = (180, 95, 80), omega_w = 10, mid-window
DISCORD_WARM_MID = 1.1785279419029848e-07


def warm_params(omega_w=10.0, omega_c=None):
    p = RefrigeratorParams(omega_w, 1.0, 0.1, 1e-6, 180.0, 95.0, 80.0)
    return p.replace(omega_c=omega_c if omega_c is not None else 0.5 * cooling_window_max(p))


def stationary_vc(params):
    rho = steady_state(build_liouvillian(params))
    return rho, virtual_cold_state(rho)


class TestSanity:
    def test_product_state(self):
        a = np.diag([0.7, 0.3])
        b = np.array([[0.6, 0.2], [0.2, 0.4]])
        r = correlations_report(np.kron(a, b))
        np.testing.assert_allclose([r.mutual_information, r.classical, r.discord], 0.0, atol=1e-10)
        assert r.ppt_min_eigenvalue > 0

    def test_bell_state(self, bell):
        r = correlations_report(bell)
        np.testing.assert_allclose(r.mutual_information, 2 * LN2, atol=1e-10)
        np.testing.assert_allclose(r.classical, LN2, atol=1e-10)
        np.testing.assert_allclose(r.discord, LN2, atol=1e-10)
        np.testing.assert_allclose(r.ppt_min_eigenvalue, -0.5, atol=1e-10)

    def test_entropy_reference(self):
        np.testing.assert_allclose(von_neumann_entropy(np.diag([0.9, 0.1])), S_09, rtol=1e-14)
        assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0

    def test_classical_state_has_no_discord(self):
        m = np.diag([0.4, 0.1, 0.2, 0.3]).astype(complex)
        assert correlations_report(m).discord <= 1e-12

    def test_measured_information_broadcasts(self, bell):
        out = measured_information(bell, np.linspace(0, math.pi, 5)[:, None], np.zeros((1, 3)))
        assert out.shape == (5, 3)
        # Bell correlations are the same along every axis in the xz plane
        np.testing.assert_allclose(out, LN2, atol=1e-12)


class TestPartialTrace:
    def test_product(self):
        rng = np.random.default_rng(3)
        states = []
        for _ in range(3):
            a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            m = a @ a.conj().T
            states.append(m / np.trace(m))
        full = np.kron(np.kron(*states[:2]), states[2])
        np.testing.assert_allclose(partial_trace(full, ["c"]), states[2], atol=1e-14)
        np.testing.assert_allclose(partial_trace(full, ["w", "c"]), np.kron(states[0], states[2]), atol=1e-14)
        np.testing.assert_allclose(partial_trace(full, ["h"]), states[1], atol=1e-14)

    def test_order_of_keep_is_ignored(self):
        rho = np.eye(8) / 8
        np.testing.assert_array_equal(partial_trace(rho, ["c", "w"]), partial_trace(rho, ["w", "c"]))


class TestVirtualCold:
    def test_matches_projector(self):
        rho, state = stationary_vc(warm_params())
        proj = np.zeros((4, 8))
        for k, b in enumerate(("100", "101", "010", "011")):
            proj[k, basis_index(b)] = 1.0
        block = proj @ rho @ proj.T
        np.testing.assert_allclose(state.matrix, block / np.trace(block), atol=1e-15)
        assert tuple(basis_index(b) for b in ("100", "101", "010", "011")) == VC_INDICES

    def test_empty_subspace(self):
        rho = np.zeros((8, 8), complex)
        rho[0, 0] = 1.0
        with pytest.raises(EmptySubspace):
            virtual_cold_state(rho)

    def test_no_entanglement(self):
        _, state = stationary_vc(warm_params())
        assert ppt_min_eigenvalue(state) >= -1e-10


class TestDiscord:
    def test_dense_grid_oracle(self):
        _, state = stationary_vc(warm_params())
        r = correlations_report(state)
        np.testing.assert_allclose(r.discord, DISCORD_WARM_MID, rtol=1e-6)
        np.testing.assert_allclose(r.optimal_theta, math.pi / 2, atol=1e-3)

    def test_decohered_state(self):
        rho, _ = stationary_vc(warm_params())
        rho = rho.copy()
        i, j = basis_index("101"), basis_index("010")
        rho[i, j] = rho[j, i] = 0.0
        assert correlations_report(virtual_cold_state(rho)).discord <= 1e-10

    def test_phi_independence(self):
        # the single real coherence leaves the measured information flat in phi
        _, state = stationary_vc(warm_params())
        vals = measured_information(state, math.pi / 2, np.linspace(0, 2 * math.pi, 17))
        assert np.ptp(vals) <= 1e-7 * vals.max()

    @pytest.mark.parametrize("omega_w", [10.0, 15.0, 30.0])
    def test_grid_refinement_stability(self, omega_w):
        p = warm_params(omega_w)
        wmax = cooling_window_max(p)
        for frac in (0.2, 0.5, 0.8):
            _, state = stationary_vc(p.replace(omega_c=frac * wmax))
            coarse = correlations_report(state).discord
            fine = correlations_report(state, 128, 256).discord
            assert abs(coarse - fine) <= 1e-7

    def test_folded_angles(self, bell):
        _, theta, phi = classical_correlation(TwoQubitState(bell))
        assert 0 <= theta <= math.pi and 0 <= phi < 2 * math.pi
