import sys

import numpy as np
import pytest

from qar.model import RefrigeratorParams
from qar.thermo import window_edge

REF = dict(omega_w=56.87, g=0.1, gamma=1e-6, T_w=127.33, T_h=66.25, T_c=4.78)


def ref_params(omega_c=1.0, **changes):
    return RefrigeratorParams(omega_c=omega_c, **{**REF, **changes})


def random_params(n, seed=1234):
    """Moderate-scale valid parameter sets for invariant checks.

    Cold frequencies sit inside the cooling window and g stays well below
    it, so every channel rate is comfortably resolved in double precision.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        T_c = rng.uniform(0.5, 5.0)
        T_h = T_c * rng.uniform(1.3, 5.0)
        T_w = T_h * rng.uniform(1.3, 5.0)
        omega_w = T_h * rng.uniform(0.2, 2.0)
        wmax = window_edge(omega_w, T_w, T_h, T_c)
        omega_c = wmax * rng.uniform(0.1, 0.9)
        g = omega_c * rng.uniform(0.05, 0.3)
        gamma = 10 ** rng.uniform(-4, -2)
        out.append(RefrigeratorParams(omega_w, omega_c, g, gamma, T_w, T_h, T_c))
    return out


@pytest.fixture
def ref():
    return ref_params()


@pytest.fixture
def bell():
    psi = np.array([0, 1, 1, 0]) / np.sqrt(2)
    return np.outer(psi, psi).astype(complex)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(results):
        checks = results[criterion]
        failed = [c for c in checks if not c[1]]
        status = "FAIL" if failed else "PASS"
        shown = failed or checks
        summary = "; ".join(f"{name}: {detail}" for name, _, detail in shown)
        terminalreporter.write_line(f"{criterion} {status} ({len(checks) - len(failed)}/{len(checks)} checks) {summary}")
