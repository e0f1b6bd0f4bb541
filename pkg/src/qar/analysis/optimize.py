"""Cooling-power maximization over the cold frequency and performance characteristics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NoCoolingRegion
from ..model import RefrigeratorParams
from ..search import golden_section_max
from ..thermo import carnot_cop, cooling_window_max, current_curve


@dataclass(frozen=True)
class OptimumPoint:
    omega_c_star: float
    qdot_c_max: float
    cop_star: float
    cop_ratio_star: float


def _nan_to_floor(q: np.ndarray) -> np.ndarray:
    return np.where(np.isnan(q), -np.inf, q)


def maximize_cooling_power(
    params: RefrigeratorParams,
    mode: str = "delocalized",
    grid_size: int = 200,
    rtol: float = 1e-6,
    local_spectrum: str = "flat",
) -> OptimumPoint:
    """Cold frequency of maximum cooling power and the COP there.

    The ``omega_c`` field of ``params`` is ignored. ``Q_c`` is evaluated on
    ``grid_size`` uniform points inside the cooling window, and the best
    grid cell is refined by golden-section search to relative tolerance
    ``rtol``.

    Raises
    ------
    NoCoolingRegion
        If no grid point has positive cooling power.
    """
    wmax = cooling_window_max(params)
    grid = wmax * np.arange(1, grid_size + 1) / (grid_size + 1)
    qc = _nan_to_floor(current_curve(params, grid, mode, local_spectrum)["c"])
    k = int(np.argmax(qc))
    if not qc[k] > 0:
        raise NoCoolingRegion("cooling power is not positive anywhere on the window grid")
    lo = grid[k - 1] if k > 0 else 0.5 * grid[0]
    hi = grid[k + 1] if k + 1 < grid_size else 0.5 * (grid[-1] + wmax)

    def power(wc: float) -> float:
        return float(_nan_to_floor(current_curve(params, [wc], mode, local_spectrum)["c"])[0])

    x, fx = golden_section_max(power, lo, hi, xtol=rtol * grid[k])
    if fx < qc[k]:
        x = grid[k]
    cur = current_curve(params, [x], mode, local_spectrum)
    cop = cur["c"][0] / cur["w"][0]
    return OptimumPoint(
        omega_c_star=float(x),
        qdot_c_max=float(cur["c"][0]),
        cop_star=float(cop),
        cop_ratio_star=float(cop / carnot_cop(params.T_w, params.T_h, params.T_c)),
    )


def performance_characteristic(
    params: RefrigeratorParams,
    n_points: int = 150,
    mode: str = "delocalized",
    local_spectrum: str = "flat",
) -> np.ndarray:
    """Normalized cooling power and COP ratio across the cooling window.

    Returns
    -------
    ndarray, shape (n_points, 3)
        Columns ``omega_c``, ``Q_c / max Q_c`` and ``eps / eps_C`` on
        ``omega_c = k * omega_c_max / n_points`` for ``k = 1..n_points``.
        The COP ratio is NaN where the machine does not refrigerate.
    """
    wmax = cooling_window_max(params)
    wc = wmax * np.arange(1, n_points + 1) / n_points
    cur = current_curve(params, wc, mode, local_spectrum)
    qc, qw = cur["c"], cur["w"]
    cooling = (qc > 0) & (qw > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(cooling, qc / qw, np.nan) / carnot_cop(params.T_w, params.T_h, params.T_c)
    return np.column_stack([wc, qc / np.nanmax(qc), ratio])
