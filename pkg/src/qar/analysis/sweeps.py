"""Correlation sweeps across the cooling window."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..correlations import CSV_COLUMNS as CORRELATION_COLUMNS
from ..correlations import correlations_report, virtual_cold_state
from ..dynamics import build_liouvillian, steady_state
from ..model import RefrigeratorParams
from ..thermo import cooling_window_max, heat_currents
from .optimize import maximize_cooling_power

SWEEP_COLUMNS = CORRELATION_COLUMNS + ("qdot_c", "cop")


@dataclass(frozen=True)
class SweepResult:
    columns: tuple[str, ...]
    rows: np.ndarray
    omega_c_star: float

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def correlation_sweep(
    params: RefrigeratorParams,
    n_points: int = 40,
    mode: str = "delocalized",
    n_theta: int = 64,
    n_phi: int = 128,
) -> SweepResult:
    """Stationary currents and virtual-cold correlations on ``n_points`` interior window points.

    ``omega_c`` of ``params`` is ignored; the cold frequency of maximum
    cooling power is returned alongside the rows.
    """
    wmax = cooling_window_max(params)
    rows = []
    for wc in wmax * np.arange(1, n_points + 1) / (n_points + 1):
        liou = build_liouvillian(params.replace(omega_c=float(wc)), mode)
        rho = steady_state(liou)
        report = heat_currents(liou, rho)
        corr = correlations_report(virtual_cold_state(rho), n_theta, n_phi)
        rows.append(corr.as_row(float(wc)) + (report.qdot_c, report.cop))
    star = maximize_cooling_power(params, mode=mode).omega_c_star
    return SweepResult(SWEEP_COLUMNS, np.array(rows, dtype=float), star)
