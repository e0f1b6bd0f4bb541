"""Reduced states, entanglement test and discord of the stationary refrigerator state.

The bipartition of interest is the virtual qubit (``|10>``, ``|01>`` of the
work and hot qubits) against the cold qubit. Discord is computed with
projective measurements on the cold qubit, parametrized by the Bloch angles
``(theta, phi)`` of the projector ``(1 + n.sigma) / 2``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptySubspace, OptimizerStall
from .model import BATHS, basis_index
from .search import golden_section_max

log = logging.getLogger(__name__)

CSV_COLUMNS = ("omega_c", "mutual_information", "classical", "discord", "optimal_theta", "optimal_phi",
               "ppt_min_eigenvalue")
# |100>, |101>, |010>, |011> = (v0 c0, v0 c1, v1 c0, v1 c1)
VC_INDICES = tuple(basis_index(b) for b in ("100", "101", "010", "011"))
EMPTY_FLOOR = 1e-14
STALL_TOL = 1e-6


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Reduced state of the qubits in ``keep`` (labels from ``w``, ``h``, ``c``), in w-h-c order."""
    keep = [b for b in BATHS if b in set(keep)]
    letters = "abc"
    bra = list(letters)
    ket = [letters[i] if b not in keep else letters[i].upper() for i, b in enumerate(BATHS)]
    out = "".join(letters[i] for i, b in enumerate(BATHS) if b in keep)
    out += "".join(letters[i].upper() for i, b in enumerate(BATHS) if b in keep)
    r = np.einsum("".join(bra) + "".join(ket) + "->" + out, np.asarray(rho).reshape((2,) * 6))
    d = 2 ** len(keep)
    return r.reshape(d, d)


@dataclass(frozen=True)
class TwoQubitState:
    """4x4 density matrix on ``A (x) B``; measurements act on ``B``."""

    matrix: np.ndarray
    labels: tuple[str, str] = ("v", "c")


def printed_entanglement_condition(rho_inf: np.ndarray) -> bool:
    """Closed-form coherence inequality ``rho_36 > (rho_44 + rho_55) / (2 (rho_44 - rho_55))`` (1-based)."""
    r = rho_inf.real
    d = r[3, 3] - r[4, 4]
    return bool(d != 0 and abs(r[2, 5]) > 0.5 * (r[3, 3] + r[4, 4]) / d)


def virtual_cold_state(rho_inf: np.ndarray) -> TwoQubitState:
    """Project the stationary state onto the virtual-qubit/cold-qubit subspace and renormalize.

    Raises
    ------
    EmptySubspace
        If the subspace carries population below ``1e-14``.
    """
    idx = np.array(VC_INDICES)
    block = np.asarray(rho_inf)[np.ix_(idx, idx)]
    norm = np.trace(block).real
    if norm <= EMPTY_FLOOR:
        raise EmptySubspace(f"virtual-cold subspace population {norm:.3e}")
    state = TwoQubitState(block / norm)
    if log.isEnabledFor(logging.DEBUG):
        log.debug(
            "entanglement: partial transpose min eig %.3e, printed inequality %s",
            ppt_min_eigenvalue(state),
            printed_entanglement_condition(rho_inf),
        )
    return state


def _matrix(state) -> np.ndarray:
    return state.matrix if isinstance(state, TwoQubitState) else np.asarray(state)


def ppt_min_eigenvalue(state: TwoQubitState | np.ndarray) -> float:
    """Smallest eigenvalue of the partial transpose on the second qubit."""
    pt = _matrix(state).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    return float(np.linalg.eigvalsh(pt)[0])


def _xlogx(p: np.ndarray) -> np.ndarray:
    p = np.clip(p, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in nats, with ``0 ln 0 = 0``."""
    return float(-np.sum(_xlogx(np.linalg.eigvalsh(rho))))


def _qubit_entropy(m: np.ndarray) -> np.ndarray:
    """Entropy of stacked, possibly unnormalized 2x2 Hermitian matrices ``(..., 2, 2)``."""
    a, d = m[..., 0, 0].real, m[..., 1, 1].real
    b = m[..., 0, 1]
    t = a + d
    det = a * d - np.abs(b) ** 2
    lam_max = 0.5 * (t + np.sqrt(np.maximum((a - d) ** 2 + 4 * np.abs(b) ** 2, 0.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        lam_min = np.where(lam_max > 0, det / lam_max, 0.0)
    return -(_xlogx(lam_max) + _xlogx(lam_min))


def _projectors(theta, phi) -> np.ndarray:
    """Stacked projectors ``(..., 2, 2, 2)`` onto the +n and -n Bloch directions."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    nx, ny, nz = np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)
    ns = np.stack([np.stack([nz, nx - 1j * ny], -1), np.stack([nx + 1j * ny, -nz], -1)], -2)
    eye = np.eye(2)
    return np.stack([0.5 * (eye + ns), 0.5 * (eye - ns)], axis=-3)


def measured_information(state: TwoQubitState | np.ndarray, theta, phi) -> np.ndarray:
    """Mutual information after measuring ``B`` along ``(theta, phi)``, in nats.

    Equals ``S(rho_A) - sum_b p_b S(rho_A|b)``. Broadcasts over angles.
    """
    r = _matrix(state).reshape(2, 2, 2, 2)
    proj = _projectors(theta, phi)
    # unnormalized conditional states Tr_B[(1 x P) rho], shape (..., 2 outcomes, 2, 2)
    cond = np.einsum("...kj,ijlk->...il", proj, r)
    probs = np.trace(cond, axis1=-2, axis2=-1).real
    s_a = _qubit_entropy(np.einsum("ijkj->ik", r))
    with np.errstate(divide="ignore", invalid="ignore"):
        # S(M / p) = (S_unnorm(M) + p ln p) / p, and p S(M / p) is what enters
        weighted = _qubit_entropy(cond) + _xlogx(probs)
    return s_a - weighted.sum(axis=-1)


@dataclass(frozen=True)
class CorrelationReport:
    mutual_information: float
    classical: float
    discord: float
    optimal_theta: float
    optimal_phi: float
    ppt_min_eigenvalue: float

    def as_row(self, omega_c: float) -> tuple:
        return (omega_c, self.mutual_information, self.classical, self.discord, self.optimal_theta,
                self.optimal_phi, self.ppt_min_eigenvalue)


def classical_correlation(
    state: TwoQubitState | np.ndarray,
    n_theta: int = 64,
    n_phi: int = 128,
    xtol: float = 1e-10,
) -> tuple[float, float, float]:
    """Maximize measured mutual information over projective measurements on ``B``.

    A coarse ``n_theta x n_phi`` grid is followed by golden-section
    refinement in ``theta`` along the best ``phi`` and then in ``phi``.

    Returns
    -------
    value, theta, phi

    Raises
    ------
    OptimizerStall
        If the refined value falls more than ``1e-6`` nats below the grid best.
    """
    thetas = np.arange(n_theta) * math.pi / n_theta
    phis = np.arange(n_phi) * 2 * math.pi / n_phi
    grid = measured_information(state, thetas[:, None], phis[None, :])
    i, j = np.unravel_index(np.argmax(grid), grid.shape)
    best = float(grid[i, j])
    th, ph = thetas[i], phis[j]
    dth, dph = math.pi / n_theta, 2 * math.pi / n_phi
    th, _ = golden_section_max(lambda t: float(measured_information(state, t, ph)), th - dth, th + dth, xtol=xtol)
    ph, value = golden_section_max(lambda p: float(measured_information(state, th, p)), ph - dph, ph + dph, xtol=xtol)
    if value < best - STALL_TOL:
        raise OptimizerStall(f"refinement {value:.12g} below grid best {best:.12g}")
    if value < best:
        value, th, ph = best, thetas[i], phis[j]
    # fold onto theta in [0, pi], phi in [0, 2 pi); (theta, phi) ~ (-theta, phi + pi)
    if th < 0:
        th, ph = -th, ph + math.pi
    return value, th, ph % (2 * math.pi)


def correlations_report(state: TwoQubitState | np.ndarray, n_theta: int = 64, n_phi: int = 128) -> CorrelationReport:
    """Mutual information, classical correlations, discord and PPT test of a two-qubit state."""
    m = _matrix(state)
    r = m.reshape(2, 2, 2, 2)
    rho_a = np.einsum("ijkj->ik", r)
    rho_b = np.einsum("ijil->jl", r)
    mi = von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(m)
    classical, theta, phi = classical_correlation(m, n_theta, n_phi)
    return CorrelationReport(
        mutual_information=mi,
        classical=classical,
        discord=max(mi - classical, 0.0),
        optimal_theta=theta,
        optimal_phi=phi,
        ppt_min_eigenvalue=ppt_min_eigenvalue(m),
    )
