"""Closed-form results of the localized model at small frequencies."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import OutOfDomain
from ..model import RefrigeratorParams
from ..search import golden_section_max
from ..thermo import cooling_window_max

CONDITION_LIMIT = 0.1


def lambert_w0(z: float, tol: float = 1e-15, max_iter: int = 64) -> float:
    """Principal branch of the Lambert W function for real ``z >= -1/e``.

    Halley iteration starting from ``ln(1 + z)`` for ``z >= 0`` and from the
    branch-point series for ``z < 0``.

    Raises
    ------
    OutOfDomain
    """
    z = float(z)
    branch = -math.exp(-1.0)
    if z < branch:
        raise OutOfDomain(f"W0 is real only for z >= -1/e, got {z}")
    if z == 0.0:
        return 0.0
    if z == branch:
        return -1.0
    if z > 0:
        w = math.log1p(z)
    else:
        p = math.sqrt(2.0 * (math.e * z + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= tol * (1.0 + abs(w)):
            break
    return w


def tau(T_w: float, T_h: float, T_c: float) -> float:
    return T_w * (T_h - T_c) / (T_w - T_h)


@dataclass(frozen=True)
class LocalizedAsymptotics:
    tau: float
    omega_c_star_analytic: float
    omega_c_star_first_order: float
    cop_ratio_analytic: float
    conditions_met: dict

    @property
    def all_conditions(self) -> bool:
        return all(self.conditions_met.values())


def localized_asymptotics(params: RefrigeratorParams, limit: float = CONDITION_LIMIT) -> LocalizedAsymptotics:
    """Lambert-W optimum of the localized model and the associated COP ratio.

    ``omega_c`` of ``params`` is ignored. Condition ``i`` is
    ``omega_w / T_{w,h} <= limit`` and condition ``ii`` is
    ``omega_w / tau <= limit``.
    """
    ww, tw, th, tc = params.omega_w, params.T_w, params.T_h, params.T_c
    t = tau(tw, th, tc)
    x = ww / tw - ww / th
    return LocalizedAsymptotics(
        tau=t,
        omega_c_star_analytic=tc * (1.0 - lambert_w0(math.exp(1.0 + x))),
        omega_c_star_first_order=0.5 * ww * tc * (1.0 / th - 1.0 / tw),
        cop_ratio_analytic=0.5 * (1.0 - tc / th),
        conditions_met={"i": max(ww / tw, ww / th) <= limit, "ii": ww / t <= limit},
    )


def _fermi_pair(x: float) -> tuple[float, float]:
    """``(1 / (1 + e^-x), e^-x / (1 + e^-x))`` evaluated without overflow."""
    lower = 0.5 * (1.0 + math.tanh(0.5 * x))
    return lower, 1.0 - lower


def omega_table(params: RefrigeratorParams, omega_c: float) -> dict[tuple[str, str], float]:
    """The four-case thermal factor table for every ordered bath pair."""
    freqs = {"w": params.omega_w, "h": params.omega_w + omega_c, "c": omega_c}
    temps = params.temperatures
    out = {}
    for a in freqs:
        fa, ea = _fermi_pair(freqs[a] / temps[a])
        for b in freqs:
            fb, eb = _fermi_pair(freqs[b] / temps[b])
            if a != "h" and b != "h":
                out[a, b] = fa * eb + ea * fb
            elif a == "h" and b != "h":
                out[a, b] = ea * eb + fa * fb
            elif a != "h":
                out[a, b] = fa * fb + ea * fb
            else:
                out[a, b] = ea * fb + fa * fb
    return out


@dataclass(frozen=True)
class DeltaOmega:
    delta: float
    delta_approx: float
    denominator: float
    omega: dict
    omega_approx: float = 0.5


def localized_delta_omega(params: RefrigeratorParams, omega_c: float, printed: bool = False) -> DeltaOmega:
    """Population-imbalance factor and thermal factors of the localized cooling power.

    The work-bath exponential in the numerator defaults to
    ``exp(-omega_w / T_w)``, the sign that reproduces the Lambert-W optimum.
    ``printed=True`` uses ``exp(+omega_w / T_w)`` instead.
    """
    ww, tw, th, tc = params.omega_w, params.T_w, params.T_h, params.T_c
    wh = ww + omega_c
    sign = 1.0 if printed else -1.0
    num = math.exp(-wh / th) - math.exp(sign * ww / tw - omega_c / tc)
    den = (1.0 + math.exp(ww / tw)) * (1.0 + math.exp(wh / th)) * (1.0 + math.exp(omega_c / tc))
    approx = 0.125 * (math.exp(-ww / th) - math.exp(sign * ww / tw - omega_c / tc))
    return DeltaOmega(delta=num / den, delta_approx=approx, denominator=den, omega=omega_table(params, omega_c))


def delta_argmax(params: RefrigeratorParams, approx: bool = True, printed: bool = False, n_grid: int = 2000) -> float:
    """Maximizer of ``omega_c |Delta|`` over the cooling window (grid then golden section)."""
    wmax = cooling_window_max(params)

    def f(wc: float) -> float:
        d = localized_delta_omega(params, wc, printed)
        return wc * abs(d.delta_approx if approx else d.delta)

    grid = wmax * np.arange(1, n_grid + 1) / (n_grid + 1)
    k = int(np.argmax([f(w) for w in grid]))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, n_grid - 1)]
    return golden_section_max(f, lo, hi, xtol=1e-9 * grid[k])[0]
