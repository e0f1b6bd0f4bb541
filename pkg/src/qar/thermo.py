"""Heat currents, coefficients of performance and related thermodynamic quantities."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import (
    Liouvillian,
    batched_generators,
    batched_steady_states,
    build_liouvillian,
    steady_state,
    vec,
)
from .errors import (
    NegativeVirtualTemperatureWarning,
    NotStationary,
    TemperatureOrderViolation,
    ZeroWorkCurrent,
)
from .model import BATHS, RefrigeratorParams, build_href, nondegenerate, number_operator

CSV_COLUMNS = ("omega_c", "qdot_w", "qdot_h", "qdot_c", "cop", "carnot", "cop_ratio", "entropy_production")
CARNOT_POLE = 1e-12
STATIONARY_RTOL = 1e-8
ZERO_WORK_RTOL = 1e-14


@dataclass(frozen=True)
class HeatCurrentReport:
    """Stationary heat currents (positive when flowing out of a bath) and COPs.

    ``cop`` and ``cop_ratio`` are NaN unless the machine refrigerates,
    i.e. both ``qdot_c`` and ``qdot_w`` are positive; ``cooling`` records
    which case applies.
    """

    qdot_w: float
    qdot_h: float
    qdot_c: float
    cop: float
    carnot: float
    cop_ratio: float
    entropy_production: float
    cooling: bool

    def as_row(self, omega_c: float) -> tuple:
        d = asdict(self)
        return (omega_c,) + tuple(d[k] for k in CSV_COLUMNS[1:])


def carnot_cop(T_w: float, T_h: float, T_c: float) -> float:
    """Carnot COP of a refrigerator driven by heat from ``T_w``, rejecting at ``T_h``.

    Returns ``inf`` when ``T_h / T_c - 1`` falls below ``1e-12``.
    """
    if not T_w > T_h > T_c > 0:
        raise TemperatureOrderViolation(f"need T_w > T_h > T_c > 0, got ({T_w}, {T_h}, {T_c})")
    denom = T_h / T_c - 1.0
    if denom < CARNOT_POLE:
        return math.inf
    return (1.0 - T_h / T_w) / denom


def window_edge(omega_w: float, T_w: float, T_h: float, T_c: float) -> float:
    """Largest cold frequency that still cools, ``omega_w T_c (T_w - T_h) / (T_w (T_h - T_c))``."""
    return omega_w * T_c * (T_w - T_h) / (T_w * (T_h - T_c))


def cooling_window_max(params: RefrigeratorParams) -> float:
    """Upper edge of the cooling window for the work frequency and temperatures of ``params``."""
    return window_edge(params.omega_w, params.T_w, params.T_h, params.T_c)


def virtual_temperature_of(omega_w: float, omega_c: float, T_w: float, T_h: float) -> float:
    """Temperature of the virtual qubit spanned by ``|10>`` and ``|01>`` of the work and hot qubits.

    Warns with :class:`NegativeVirtualTemperatureWarning` when the
    population ratio is inverted, in which case the result is negative.
    """
    omega_h = omega_w + omega_c
    denom = omega_h / T_h - omega_w / T_w
    if denom <= 0:
        warnings.warn("virtual qubit population is inverted", NegativeVirtualTemperatureWarning, stacklevel=2)
        return -math.inf if denom == 0 else omega_c / denom
    return omega_c / denom


def virtual_temperature(params: RefrigeratorParams) -> float:
    return virtual_temperature_of(params.omega_w, params.omega_c, params.T_w, params.T_h)


def entropy_production(currents: dict[str, float], temperatures: dict[str, float]) -> float:
    """Spohn entropy production rate ``-sum_a Q_a / T_a``."""
    return -sum(currents[b] / temperatures[b] for b in BATHS)


def heat_currents(
    liouvillian: Liouvillian,
    rho_inf: np.ndarray,
    strict: bool = False,
    stationary_rtol: float = STATIONARY_RTOL,
) -> HeatCurrentReport:
    """Heat currents ``Q_a = Tr(H_ref D_a[rho])`` and the derived COPs.

    Parameters
    ----------
    liouvillian : Liouvillian
    rho_inf : ndarray
        Stationary state of ``liouvillian``.
    strict : bool
        Raise :class:`ZeroWorkCurrent` instead of returning NaN COPs when the
        work current vanishes to rounding.
    stationary_rtol : float
        Allowed ``|L rho| / (|L| |rho|)``.

    Raises
    ------
    NotStationary
    ZeroWorkCurrent
    """
    total = liouvillian.total
    residual = np.linalg.norm(total @ vec(rho_inf))
    if residual > stationary_rtol * np.linalg.norm(total) * np.linalg.norm(rho_inf):
        raise NotStationary(f"|L rho| = {residual:.3e} is not stationary")
    h = liouvillian.hamiltonian
    # Tr(H X) = sum(H.T * X) avoids forming the product
    currents = {b: float(np.sum(h.T * liouvillian.apply_dissipator(b, rho_inf)).real) for b in BATHS}
    params = liouvillian.params
    qw, qh, qc = currents["w"], currents["h"], currents["c"]
    scale = np.abs(np.diag(h)).max() * max(np.linalg.norm(d) for d in liouvillian.dissipators.values())
    if strict and abs(qw) < ZERO_WORK_RTOL * scale:
        raise ZeroWorkCurrent(f"work current {qw:.3e} vanishes, COP undefined")
    carnot = carnot_cop(params.T_w, params.T_h, params.T_c)
    cooling = bool(qc > 0 and qw > 0 and abs(qw) >= ZERO_WORK_RTOL * scale)
    cop = qc / qw if cooling else math.nan
    return HeatCurrentReport(
        qdot_w=qw,
        qdot_h=qh,
        qdot_c=qc,
        cop=cop,
        carnot=carnot,
        cop_ratio=cop / carnot,
        entropy_production=entropy_production(currents, params.temperatures),
        cooling=cooling,
    )


def stationary_report(
    params: RefrigeratorParams,
    mode: str = "delocalized",
    local_spectrum: str = "flat",
    check_kernel: bool = True,
) -> tuple[np.ndarray, HeatCurrentReport]:
    """Build the generator, solve for its stationary state and evaluate the currents."""
    liou = build_liouvillian(params, mode, local_spectrum)
    rho = steady_state(liou, check_kernel=check_kernel)
    return rho, heat_currents(liou, rho)


def current_curve(
    params: RefrigeratorParams,
    omega_c: np.ndarray,
    mode: str = "delocalized",
    local_spectrum: str = "flat",
) -> dict[str, np.ndarray]:
    """Stationary heat currents along a set of cold frequencies.

    Vectorized counterpart of :func:`stationary_report` for campaigns.
    Points where the delocalized spectrum is degenerate are returned as NaN.
    """
    omega_c = np.atleast_1d(np.asarray(omega_c, dtype=float))
    ok = nondegenerate(params, omega_c) if mode == "delocalized" else np.ones(omega_c.shape, dtype=bool)
    out = {b: np.full(omega_c.shape, np.nan) for b in BATHS}
    if not ok.any():
        return out
    totals, dissipators = batched_generators(params, omega_c[ok], mode, local_spectrum)
    rho = batched_steady_states(totals)
    vr = rho.transpose(0, 2, 1).reshape(len(rho), -1)
    wc = omega_c[ok][:, None]
    # H_ref is linear in omega_c through the c and h number operators
    hv = vec(build_href(params))[None, :] + (wc - params.omega_c) * vec(number_operator("c") + number_operator("h"))
    for b in BATHS:
        d_rho = np.einsum("nij,nj->ni", dissipators[b], vr)
        out[b][ok] = np.einsum("ni,ni->n", hv.conj(), d_rho).real
    return out
