"""Lindblad generators, stationary states and a time-propagation oracle.

Superoperators act on column-stacked density matrices,
``vec(rho) = rho.reshape(-1, order="F")``, so that
``vec(A @ rho @ B) = kron(B.T, A) @ vec(rho)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np
import scipy.linalg as la

from .errors import DegenerateKernel, NoConvergence, StepTooLarge
from .model import (
    BATHS,
    DEGENERACY_FLOOR,
    RefrigeratorParams,
    _CHANNEL_ORDER,
    _UNIT_OPERATORS,
    _channel_keys,
    build_href,
    check_spectrum,
    interaction_operator,
    local_thermal_rate,
    number_operator,
    sigma_minus,
    spectral_rate,
)

DIM = 8
MODES = ("delocalized", "localized")
LOCAL_SPECTRA = ("flat", "spectral")

_ID = np.eye(DIM, dtype=complex)
TRACE_ROW = _ID.reshape(-1, order="F")


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(DIM, DIM, order="F")


def commutator_superop(h: np.ndarray) -> np.ndarray:
    """Superoperator of ``rho -> -i[h, rho]``."""
    return -1j * (np.kron(_ID, h) - np.kron(h.T, _ID))


def dissipator_superop(a: np.ndarray) -> np.ndarray:
    """Superoperator of ``rho -> a rho a^+ - {a^+ a, rho}/2``."""
    ada = a.conj().T @ a
    return np.kron(a.conj(), a) - 0.5 * np.kron(_ID, ada) - 0.5 * np.kron(ada.T, _ID)


# Everything below depends only on the fixed eigenvectors, not on parameters,
# so the generator is a linear combination of these precomputed blocks.
_COHERENT = {b: commutator_superop(number_operator(b)) for b in BATHS}
_COHERENT["g"] = commutator_superop(interaction_operator())
_DELOC_BLOCKS = {b: np.stack([dissipator_superop(_UNIT_OPERATORS[b][k]) for k in _CHANNEL_ORDER]) for b in BATHS}
_LOCAL_BLOCKS = {
    b: np.stack([dissipator_superop(sigma_minus(b)), dissipator_superop(sigma_minus(b).conj().T)]) for b in BATHS
}


@dataclass(frozen=True)
class Liouvillian:
    """Lindblad generator of the refrigerator together with its per-bath parts.

    ``total`` equals the coherent part ``-i[H_ref, .]`` plus the sum of
    ``dissipators``.
    """

    total: np.ndarray
    dissipators: Mapping[str, np.ndarray]
    mode: str
    params: RefrigeratorParams
    hamiltonian: np.ndarray = field(repr=False)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.total @ vec(rho))

    def apply_dissipator(self, bath: str, rho: np.ndarray) -> np.ndarray:
        return unvec(self.dissipators[bath] @ vec(rho))

    @property
    def coherent(self) -> np.ndarray:
        return self.total - sum(self.dissipators.values())


def _coherent_part(params: RefrigeratorParams) -> np.ndarray:
    f = params.frequencies
    return f["w"] * _COHERENT["w"] + f["h"] * _COHERENT["h"] + f["c"] * _COHERENT["c"] + params.g * _COHERENT["g"]


def channel_rates(params: RefrigeratorParams, bath: str) -> np.ndarray:
    """Delocalized rates of the six channels of ``bath`` (channel order of the model)."""
    freqs = np.array([f for f, _ in _channel_keys(params, bath)])
    return spectral_rate(freqs, params.temperatures[bath], params.gamma)


def local_rates(params: RefrigeratorParams, bath: str, local_spectrum: str = "flat") -> np.ndarray:
    """Emission and absorption rates ``(down, up)`` of the localized qubit ``bath``."""
    w, t = params.frequencies[bath], params.temperatures[bath]
    omegas = np.array([w, -w])
    if local_spectrum == "flat":
        kappa = params.local_rate if params.local_rate is not None else params.gamma
        return local_thermal_rate(omegas, t, kappa)
    if local_spectrum == "spectral":
        return spectral_rate(omegas, t, params.gamma)
    raise ValueError(f"local_spectrum must be one of {LOCAL_SPECTRA}, got {local_spectrum!r}")


def build_liouvillian(
    params: RefrigeratorParams,
    mode: str = "delocalized",
    local_spectrum: str = "flat",
    floor: float = DEGENERACY_FLOOR,
) -> Liouvillian:
    """Assemble the master-equation generator.

    Parameters
    ----------
    params : RefrigeratorParams
    mode : {"delocalized", "localized"}
        ``delocalized`` uses the 18 eigen-operator channels with rates
        ``spectral_rate``. ``localized`` thermalizes each qubit separately
        through ``sigma_-`` / ``sigma_+`` on that qubit.
    local_spectrum : {"flat", "spectral"}
        Rates of the localized channels. ``flat`` uses detailed-balance rates
        whose sum is ``local_rate`` (or ``gamma``); ``spectral`` reuses the
        delocalized spectral density at the bare qubit frequency.
    floor : float
        Relative degeneracy floor passed to the spectrum check.

    Both modes use the full coherent part ``-i[H_ref, .]``.
    """
    if mode == "delocalized":
        check_spectrum(params, floor)
        # the rates already carry gamma and the blocks use unit operators,
        # so gamma enters once
        dissipators = {b: np.tensordot(channel_rates(params, b), _DELOC_BLOCKS[b], axes=1) for b in BATHS}
    elif mode == "localized":
        dissipators = {b: np.tensordot(local_rates(params, b, local_spectrum), _LOCAL_BLOCKS[b], axes=1) for b in BATHS}
    else:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    for d in dissipators.values():
        d.setflags(write=False)
    total = _coherent_part(params) + sum(dissipators.values())
    total.setflags(write=False)
    return Liouvillian(
        total=total,
        dissipators=MappingProxyType(dissipators),
        mode=mode,
        params=params,
        hamiltonian=build_href(params),
    )


def kernel_dimension(liouvillian: Liouvillian | np.ndarray, rtol: float = 1e-10) -> int:
    """Number of singular values below ``rtol`` times a reference scale.

    For a :class:`Liouvillian` the scale is the spectral norm of the
    dissipative part, so a weak bath coupling is not mistaken for a
    degenerate kernel next to a large coherent part. For a bare matrix it is
    the largest singular value. The threshold never drops below the SVD
    rounding floor ``n eps s_max``.
    """
    if isinstance(liouvillian, Liouvillian):
        total = liouvillian.total
        diss = sum(liouvillian.dissipators.values(), np.zeros_like(total))
        scale = np.linalg.norm(diss, 2)
    else:
        total, scale = liouvillian, 0.0
    s = la.svdvals(total)
    # never go below what the SVD itself resolves
    floor = len(s) * np.finfo(float).eps * s[0]
    return int(np.sum(s <= max(rtol * (scale or s[0]), floor)))


def steady_state(
    liouvillian: Liouvillian,
    check_kernel: bool = True,
    kernel_rtol: float = 1e-10,
    residual_rtol: float = 1e-10,
) -> np.ndarray:
    """Unique stationary state of the generator.

    Solves the bordered system ``[L; tr] vec(rho) = [0; 1]`` with a
    column-pivoted QR factorization and one step of iterative refinement.

    Raises
    ------
    DegenerateKernel
        If ``check_kernel`` and :func:`kernel_dimension` exceeds one.
    NoConvergence
        If the residual ``|L rho|`` exceeds ``residual_rtol * |L| |rho|``.
    """
    total = liouvillian.total
    if check_kernel:
        dim = kernel_dimension(liouvillian, kernel_rtol)
        if dim > 1:
            raise DegenerateKernel(f"generator kernel has dimension {dim}")
    bordered = np.vstack([total, TRACE_ROW[None, :]])
    rhs = np.zeros(DIM * DIM + 1, dtype=complex)
    rhs[-1] = 1.0
    q, r, perm = la.qr(bordered, mode="economic", pivoting=True)

    def solve(b):
        z = la.solve_triangular(r, q.conj().T @ b)
        x = np.empty_like(z)
        x[perm] = z
        return x

    x = solve(rhs)
    x = x + solve(rhs - bordered @ x)
    rho = unvec(x)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    residual = np.linalg.norm(total @ vec(rho))
    if not residual <= residual_rtol * np.linalg.norm(total) * np.linalg.norm(rho):
        raise NoConvergence(f"stationary residual {residual:.3e} above tolerance")
    return rho


def rk4_step_matrix(total: np.ndarray, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step of ``d vec(rho)/dt = L vec(rho)`` as a matrix.

    For a linear autonomous equation the four RK4 stages collapse to the
    degree-4 Taylor polynomial of ``exp(dt L)``.
    """
    a = dt * total
    a2 = a @ a
    return np.eye(len(total)) + a + a2 / 2 + a2 @ a / 6 + a2 @ a2 / 24


def propagate(liouvillian: Liouvillian, rho0: np.ndarray, t: float, dt: float | None = None) -> np.ndarray:
    """Integrate the master equation from ``rho0`` for time ``t`` with fixed-step RK4.

    ``dt`` defaults to ``0.05 / |L|_1`` and is shrunk so that an integer
    number of steps lands exactly on ``t``. The ``n`` identical steps are
    applied by repeated squaring of the one-step matrix.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if t == 0:
        return rho0.copy()
    if t < 0:
        raise ValueError("t must be non-negative")
    norm1 = np.linalg.norm(liouvillian.total, 1)
    if dt is None:
        dt = 0.05 / norm1
    if dt <= 0:
        raise ValueError("dt must be positive")
    if dt * norm1 > 0.1:
        raise StepTooLarge(f"dt * |L|_1 = {dt * norm1:.3g} exceeds 0.1")
    n_steps = math.ceil(t / dt - 1e-12)
    step = rk4_step_matrix(liouvillian.total, t / n_steps)
    return unvec(np.linalg.matrix_power(step, n_steps) @ vec(rho0))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def batched_generators(
    params: RefrigeratorParams,
    omega_c: np.ndarray,
    mode: str = "delocalized",
    local_spectrum: str = "flat",
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Generators for many cold frequencies at once, other parameters fixed.

    Returns the stacked totals ``(n, 64, 64)`` and per-bath dissipators. No
    spectrum check is made; callers screen degenerate points themselves.
    """
    omega_c = np.asarray(omega_c, dtype=float)
    freqs = {"w": np.full_like(omega_c, params.omega_w), "c": omega_c, "h": omega_c + params.omega_w}
    temps = params.temperatures
    dissipators = {}
    for b in BATHS:
        if mode == "delocalized":
            s = np.array([k[0] for k in _CHANNEL_ORDER])
            m = np.array([k[1] for k in _CHANNEL_ORDER])
            w = freqs[b][:, None] * s + m * params.g
            rates = spectral_rate(w, temps[b], params.gamma)
            blocks = _DELOC_BLOCKS[b]
        elif mode == "localized":
            w = freqs[b][:, None] * np.array([1.0, -1.0])
            if local_spectrum == "flat":
                kappa = params.local_rate if params.local_rate is not None else params.gamma
                rates = local_thermal_rate(w, temps[b], kappa)
            elif local_spectrum == "spectral":
                rates = spectral_rate(w, temps[b], params.gamma)
            else:
                raise ValueError(f"local_spectrum must be one of {LOCAL_SPECTRA}, got {local_spectrum!r}")
            blocks = _LOCAL_BLOCKS[b]
        else:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        dissipators[b] = np.tensordot(rates, blocks, axes=1)
    coherent = (
        freqs["w"][:, None, None] * _COHERENT["w"]
        + freqs["h"][:, None, None] * _COHERENT["h"]
        + freqs["c"][:, None, None] * _COHERENT["c"]
        + params.g * _COHERENT["g"]
    )
    return coherent + sum(dissipators.values()), dissipators


def batched_steady_states(totals: np.ndarray) -> np.ndarray:
    """Stationary states of a stack of generators, shape ``(n, 8, 8)``.

    The population equation of ``|000>`` is redundant under trace
    preservation, so it is replaced by the trace condition and each square
    system is solved by LU with one refinement step. This fast path skips
    the kernel and residual checks of :func:`steady_state`.
    """
    a = np.array(totals, dtype=complex)
    a[:, 0, :] = TRACE_ROW
    rhs = np.zeros(a.shape[:2] + (1,), dtype=complex)
    rhs[:, 0] = 1.0
    x = np.linalg.solve(a, rhs)
    x = x + np.linalg.solve(a, rhs - a @ x)
    rho = x[..., 0].reshape(-1, DIM, DIM).transpose(0, 2, 1)
    rho = 0.5 * (rho + rho.conj().transpose(0, 2, 1))
    return rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]
