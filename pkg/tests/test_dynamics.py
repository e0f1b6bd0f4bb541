import numpy as np
import pytest

from conftest import ref_params, random_params
from qar.dynamics import (
    TRACE_ROW,
    batched_generators,
    batched_steady_states,
    build_liouvillian,
    kernel_dimension,
    propagate,
    rk4_step_matrix,
    steady_state,
    trace_distance,
    unvec,
    vec,
)
from qar.errors import DegenerateKernel, StepTooLarge
from qar.model import RefrigeratorParams

MODERATE = RefrigeratorParams(omega_w=1.0, omega_c=0.5, g=0.1, gamma=1e-2, T_w=3.0, T_h=2.0, T_c=1.0)


def gibbs(omega, t):
    p = np.array([1.0, np.exp(-omega / t)])
    return np.diag(p / p.sum())


def random_hermitian(rng, n=8):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


@pytest.mark.parametrize("mode", ["delocalized", "localized"])
class TestGenerator:
    def test_trace_preservation(self, mode, ref):
        liou = build_liouvillian(ref, mode)
        assert np.abs(TRACE_ROW @ liou.total).max() <= 1e-12 * np.abs(liou.total).max()

    def test_maximally_mixed_image(self, mode, ref):
        out = build_liouvillian(ref, mode).apply(np.eye(8) / 8)
        assert abs(np.trace(out)) <= 1e-12 * np.abs(out).max() + 1e-300
        np.testing.assert_allclose(out, out.conj().T, atol=1e-13 * np.abs(out).max())

    def test_hermiticity_preservation(self, mode):
        rng = np.random.default_rng(0)
        for p in random_params(10):
            liou = build_liouvillian(p, mode)
            for _ in range(3):
                out = liou.apply(random_hermitian(rng))
                np.testing.assert_allclose(out, out.conj().T, atol=1e-13 * np.abs(out).max())

    def test_decomposition(self, mode, ref):
        liou = build_liouvillian(ref, mode)
        coherent = -1j * (np.kron(np.eye(8), liou.hamiltonian) - np.kron(liou.hamiltonian.T, np.eye(8)))
        np.testing.assert_allclose(liou.total, coherent + sum(liou.dissipators.values()), atol=1e-13)

    def test_immutable(self, mode, ref):
        liou = build_liouvillian(ref, mode)
        with pytest.raises(ValueError):
            liou.total[0, 0] = 1.0

    def test_batched_matches_single(self, mode, ref):
        wc = np.array([0.3, 1.0, 1.7])
        totals, _ = batched_generators(ref, wc, mode)
        rhos = batched_steady_states(totals)
        for w, total, rho in zip(wc, totals, rhos):
            liou = build_liouvillian(ref.replace(omega_c=w), mode)
            np.testing.assert_allclose(total, liou.total, atol=1e-13)
            np.testing.assert_allclose(rho, steady_state(liou), atol=1e-11)


def test_column_stacking_convention():
    rng = np.random.default_rng(1)
    a, b, r = (rng.normal(size=(8, 8)) for _ in range(3))
    np.testing.assert_allclose(vec(a @ r @ b), np.kron(b.T, a) @ vec(r), atol=1e-12)
    np.testing.assert_array_equal(unvec(vec(r)), r)


def test_dissipator_is_gamma_linear(ref):
    d1 = build_liouvillian(ref).dissipators["c"]
    d10 = build_liouvillian(ref.replace(gamma=10 * ref.gamma)).dissipators["c"]
    np.testing.assert_allclose(d10, 10 * d1, rtol=1e-12, atol=0)


def test_delocalized_generator_converges_as_g_vanishes(ref):
    gs = [1e-2, 1e-3, 1e-4, 1e-5]
    totals = [build_liouvillian(ref.replace(g=g)).total for g in gs]
    steps = [np.linalg.norm(a - b) for a, b in zip(totals, totals[1:])]
    assert all(x > y for x, y in zip(steps, steps[1:]))


class TestSteadyState:
    def test_product_gibbs_at_zero_coupling(self):
        p = MODERATE.replace(g=0.0)
        rho = steady_state(build_liouvillian(p, "localized"))
        expected = np.kron(np.kron(gibbs(p.omega_w, p.T_w), gibbs(p.omega_h, p.T_h)), gibbs(p.omega_c, p.T_c))
        np.testing.assert_allclose(rho, expected, atol=1e-10)

    def test_zero_coupling_localized_kernel_is_unique(self):
        assert kernel_dimension(build_liouvillian(MODERATE.replace(g=0.0), "localized")) == 1

    def test_x_structure(self, ref):
        rho = steady_state(build_liouvillian(ref))
        off = rho.copy()
        np.fill_diagonal(off, 0)
        assert abs(off[2, 5]) > 0
        off[2, 5] = off[5, 2] = 0
        assert np.abs(off).max() <= 1e-10

    def test_random_sets(self):
        for p in random_params(100, seed=7):
            liou = build_liouvillian(p)
            assert kernel_dimension(liou) == 1
            rho = steady_state(liou)
            assert np.linalg.eigvalsh(rho).min() >= -1e-10
            assert abs(np.trace(rho) - 1) <= 1e-12
            np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
            residual = np.linalg.norm(liou.total @ vec(rho))
            assert residual <= 1e-10 * np.linalg.norm(liou.total) * np.linalg.norm(rho)

    def test_weak_damping_is_not_degenerate(self):
        # the dissipative part is ~1e-11 of the coherent one here
        liou = build_liouvillian(MODERATE.replace(gamma=1e-11))
        assert kernel_dimension(liou) == 1
        assert kernel_dimension(liou.total) > 1

    def test_decoupled_sector_detected(self):
        # without any dissipation every eigenprojector is stationary
        p = MODERATE.replace(omega_w=1.0)
        liou = build_liouvillian(p)
        bare = type(liou)(
            total=liou.coherent, dissipators={}, mode=liou.mode, params=p, hamiltonian=liou.hamiltonian
        )
        with pytest.raises(DegenerateKernel):
            steady_state(bare)


class TestPropagate:
    def test_zero_time_is_identity(self, ref):
        rho0 = np.diag(np.arange(1.0, 9.0)) / 36
        out = propagate(build_liouvillian(ref), rho0, 0.0)
        np.testing.assert_array_equal(out, rho0)

    def test_trace_conserved(self):
        liou = build_liouvillian(MODERATE)
        rho0 = np.eye(8) / 8
        for t in [0.5, 5.0, 50.0, 500.0]:
            assert abs(np.trace(propagate(liou, rho0, t)) - 1) <= 1e-9

    def test_long_time_limit(self):
        liou = build_liouvillian(MODERATE)
        rho = propagate(liou, np.eye(8) / 8, 50 / MODERATE.gamma)
        assert trace_distance(rho, steady_state(liou)) <= 1e-6

    def test_step_too_large(self):
        liou = build_liouvillian(MODERATE)
        dt = 0.2 / np.linalg.norm(liou.total, 1)
        with pytest.raises(StepTooLarge):
            propagate(liou, np.eye(8) / 8, 1.0, dt=dt)

    def test_fifth_order_local_error(self):
        total = build_liouvillian(MODERATE).total
        h = 0.05 / np.linalg.norm(total, 1)

        def defect(step):
            half = rk4_step_matrix(total, step / 2)
            return np.linalg.norm(rk4_step_matrix(total, step) - half @ half)

        ratio = defect(h) / defect(h / 2)
        assert ratio == pytest.approx(32, rel=0.05)

    def test_matches_exact_exponential(self):
        from scipy.linalg import expm

        liou = build_liouvillian(MODERATE)
        rho0 = np.eye(8) / 8
        t = 3.0
        exact = unvec(expm(t * liou.total) @ vec(rho0))
        assert trace_distance(propagate(liou, rho0, t), exact) <= 1e-9


def test_delocalized_rejects_degenerate_params():
    from qar.errors import DegenerateSpectrum

    with pytest.raises(DegenerateSpectrum):
        build_liouvillian(ref_params(omega_c=0.1, g=0.1))
