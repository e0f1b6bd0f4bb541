"""Refrigerator Hamiltonian, its eigensystem, jump operators and bath rates.

Basis convention
----------------
Operators act on the computational product basis of the three qubits in
tensor order (w, h, c), i.e. index ``4*n_w + 2*n_h + n_c``::

    0:|000>  1:|001>  2:|010>  3:|011>  4:|100>  5:|101>  6:|110>  7:|111>

Eigenstates keep their own labels 1..8 (stored 0-based in arrays)::

    |1>=|000>  |2>=|100>  |3>=|111>  |4>=|001>  |5>=|110>  |6>=|011>
    |7>=(|101>-|010>)/sqrt2   |8>=(|101>+|010>)/sqrt2

All quantities are in natural units (hbar = k_B = 1).
"""
from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.special import expit

from .errors import (
    DegenerateSpectrum,
    NonPositiveParameter,
    ParameterError,
    RegimeWarning,
    TemperatureOrderViolation,
    ZeroFrequency,
)

BATHS = ("w", "h", "c")
QUBIT = {"w": 0, "h": 1, "c": 2}
DEGENERACY_FLOOR = 1e-9
PARAM_KEYS = ("omega_w", "omega_c", "g", "gamma", "T_w", "T_h", "T_c")

_I2 = np.eye(2, dtype=complex)
_SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_NUMBER = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class RefrigeratorParams:
    """Physical parameters of the three-qubit absorption refrigerator.

    ``omega_h`` is derived as ``omega_c + omega_w`` and never stored.
    ``local_rate`` is the dissipation rate used by the localized model only;
    ``None`` means "same as gamma".
    """

    omega_w: float
    omega_c: float
    g: float
    gamma: float
    T_w: float
    T_h: float
    T_c: float
    local_rate: float | None = None

    def __post_init__(self):
        for name in PARAM_KEYS:
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
                raise ParameterError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
            # g = 0 is allowed here (localized limit); validate_params rejects it
            if value < 0 or (value == 0 and name != "g"):
                raise NonPositiveParameter(f"{name} must be positive, got {value}")
        if self.local_rate is not None:
            if not math.isfinite(self.local_rate) or self.local_rate <= 0:
                raise NonPositiveParameter(f"local_rate must be positive, got {self.local_rate}")
            object.__setattr__(self, "local_rate", float(self.local_rate))
        if not self.T_w > self.T_h:
            raise TemperatureOrderViolation(f"need T_w > T_h, got T_w={self.T_w}, T_h={self.T_h}")
        if not self.T_h > self.T_c:
            raise TemperatureOrderViolation(f"need T_h > T_c, got T_h={self.T_h}, T_c={self.T_c}")

    @property
    def omega_h(self) -> float:
        return self.omega_c + self.omega_w

    @property
    def frequencies(self) -> dict[str, float]:
        return {"w": self.omega_w, "h": self.omega_h, "c": self.omega_c}

    @property
    def temperatures(self) -> dict[str, float]:
        return {"w": self.T_w, "h": self.T_h, "c": self.T_c}

    def replace(self, **changes) -> "RefrigeratorParams":
        return dataclasses.replace(self, **changes)

    def regime_flags(self) -> list[str]:
        """Soft validity conditions that are violated (empty when all hold)."""
        flags = []
        if self.g < 100 * self.gamma:
            flags.append("rotating-wave: g/gamma < 100")
        if min(self.T_w, self.T_h, self.T_c) < 1000 * self.gamma:
            flags.append("born-markov: min(T)/gamma < 1000")
        return flags

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in PARAM_KEYS}
        if self.local_rate is not None:
            d["local_rate"] = self.local_rate
        return d

    @classmethod
    def from_dict(cls, data: Mapping) -> "RefrigeratorParams":
        missing = [k for k in PARAM_KEYS if k not in data]
        if missing:
            raise ParameterError(f"missing parameter(s): {', '.join(missing)}")
        unknown = set(data) - set(PARAM_KEYS) - {"local_rate", "omega_h"}
        if unknown:
            raise ParameterError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        kwargs = {k: float(data[k]) for k in PARAM_KEYS}
        if data.get("local_rate") is not None:
            kwargs["local_rate"] = float(data["local_rate"])
        return cls(**kwargs)


def basis_index(bits: str) -> int:
    """Computational-basis index (0-based) of a bit string in (w, h, c) order."""
    return int(bits, 2)


def embed(single: np.ndarray, bath: str) -> np.ndarray:
    """Place a 2x2 operator on qubit ``bath`` of the three-qubit space."""
    factors = [_I2, _I2, _I2]
    factors[QUBIT[bath]] = single
    return np.kron(np.kron(factors[0], factors[1]), factors[2])


def sigma_minus(bath: str) -> np.ndarray:
    return embed(_SIGMA_MINUS, bath)


def sigma_x(bath: str) -> np.ndarray:
    return embed(_SIGMA_X, bath)


def number_operator(bath: str) -> np.ndarray:
    return embed(_NUMBER, bath)


def interaction_operator() -> np.ndarray:
    """|101><010| + h.c. (the three-body exchange term with unit strength)."""
    x = np.zeros((8, 8), dtype=complex)
    i, j = basis_index("101"), basis_index("010")
    x[i, j] = x[j, i] = 1.0
    return x


_NUMBER_OPERATORS = {b: number_operator(b) for b in BATHS}
_INTERACTION = interaction_operator()


# g-independent parts of the eigenvalues, and their coefficient of g, per label
def _energy_parts(params: RefrigeratorParams) -> tuple[np.ndarray, np.ndarray]:
    ww, wc, wh = params.omega_w, params.omega_c, params.omega_h
    base = np.array([0.0, ww, 2 * wh, wc, ww + wh, wh + wc, wh, wh])
    slope = np.array([0, 0, 0, 0, 0, 0, -1, 1])
    return base, slope


def analytic_energies(params: RefrigeratorParams) -> np.ndarray:
    base, slope = _energy_parts(params)
    return base + slope * params.g


def _eigenvectors() -> np.ndarray:
    vecs = np.zeros((8, 8), dtype=complex)
    for label, bits in enumerate(("000", "100", "111", "001", "110", "011")):
        vecs[basis_index(bits), label] = 1.0
    s = 1 / math.sqrt(2)
    vecs[basis_index("101"), 6], vecs[basis_index("010"), 6] = s, -s
    vecs[basis_index("101"), 7], vecs[basis_index("010"), 7] = s, s
    return vecs


_EIGENVECTORS = _eigenvectors()
_EIGENVECTORS.setflags(write=False)


def _check_distinct(values: np.ndarray, floor: float, what: str) -> None:
    gaps = np.abs(values[:, None] - values[None, :])
    gaps[np.diag_indices_from(gaps)] = np.inf
    i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
    if gaps[i, j] <= floor:
        raise DegenerateSpectrum(
            f"{what} {i + 1} and {j + 1} coincide ({values[i]:.6g} vs {values[j]:.6g}, floor {floor:.3g})"
        )


def check_spectrum(params: RefrigeratorParams, floor: float = DEGENERACY_FLOOR) -> None:
    """Raise unless eigenvalues and per-bath transition frequencies are distinct."""
    if params.g <= 0:
        raise NonPositiveParameter("g must be positive for the delocalized model")
    scale = floor * params.omega_h
    _check_distinct(analytic_energies(params), scale, "eigenvalues")
    for bath in BATHS:
        freqs = np.array([f for f, _ in _channel_keys(params, bath)])
        _check_distinct(freqs, scale, f"bath-{bath} transition frequencies")
        if np.min(np.abs(freqs)) <= scale:
            raise DegenerateSpectrum(f"bath {bath} has a vanishing transition frequency")


def nondegenerate(params: RefrigeratorParams, omega_c: np.ndarray, floor: float = DEGENERACY_FLOOR) -> np.ndarray:
    """Vectorized :func:`check_spectrum` over cold frequencies; True where the spectrum is usable."""
    wc = np.asarray(omega_c, dtype=float)[:, None]
    ww, g = params.omega_w, params.g
    wh = wc + ww
    zero = np.zeros_like(wc)
    energies = np.hstack([zero, zero + ww, 2 * wh, wc, ww + wh, wh + wc, wh - g, wh + g])
    scale = floor * wh[:, 0]
    sm = np.array(_CHANNEL_ORDER, dtype=float)
    ok = np.full(wc.shape[0], g > 0)
    for values in [energies] + [bare * sm[:, 0] + sm[:, 1] * g for bare in (zero + ww, wh, wc)]:
        gaps = np.abs(values[:, :, None] - values[:, None, :])
        gaps[:, np.arange(values.shape[1]), np.arange(values.shape[1])] = np.inf
        ok &= gaps.min(axis=(1, 2)) > scale
        if values is not energies:
            ok &= np.abs(values).min(axis=1) > scale
    return ok


def validate_params(raw, floor: float = DEGENERACY_FLOOR) -> RefrigeratorParams:
    """Check hard invariants of a parameter set and warn about soft ones.

    Parameters
    ----------
    raw : RefrigeratorParams or mapping
        Parameter set to check.
    floor : float
        Relative degeneracy floor; eigenvalue gaps must exceed ``floor * omega_h``.

    Returns
    -------
    RefrigeratorParams
        The validated parameters.

    Raises
    ------
    NonPositiveParameter, TemperatureOrderViolation, DegenerateSpectrum
    """
    params = raw if isinstance(raw, RefrigeratorParams) else RefrigeratorParams.from_dict(raw)
    check_spectrum(params, floor)
    for flag in params.regime_flags():
        warnings.warn(flag, RegimeWarning, stacklevel=2)
    return params


def build_href(params: RefrigeratorParams) -> np.ndarray:
    """Refrigerator Hamiltonian: sum of free qubit terms plus the exchange term."""
    f = params.frequencies
    n = _NUMBER_OPERATORS
    return f["w"] * n["w"] + f["h"] * n["h"] + f["c"] * n["c"] + params.g * _INTERACTION


@dataclass(frozen=True)
class EnergyEigensystem:
    energies: np.ndarray
    vectors: np.ndarray  # columns are |1>..|8>

    def state(self, label: int) -> np.ndarray:
        """Eigenvector with 1-based label."""
        return self.vectors[:, label - 1]


def eigensystem(params: RefrigeratorParams, floor: float = DEGENERACY_FLOOR) -> EnergyEigensystem:
    energies = analytic_energies(params)
    if params.g <= 0:
        raise DegenerateSpectrum("|7> and |8> are degenerate at g = 0")
    _check_distinct(energies, floor * params.omega_h, "eigenvalues")
    energies.setflags(write=False)
    return EnergyEigensystem(energies=energies, vectors=_EIGENVECTORS)


@dataclass(frozen=True)
class JumpChannel:
    """One decay channel ``(bath, omega)`` with its Lindblad operator and rate."""

    bath: str
    frequency: float
    operator: np.ndarray
    rate: float


# Ordering of the six channels per bath, as (sign of the bare transition, g-shift).
_CHANNEL_ORDER = ((1, 0), (1, 1), (1, -1), (-1, 0), (-1, -1), (-1, 1))


def _channel_keys(params: RefrigeratorParams, bath: str):
    w = params.frequencies[bath]
    return [(s * w + m * params.g, (s, m)) for s, m in _CHANNEL_ORDER]


def _unit_jump_operators(bath: str) -> dict[tuple[int, int], np.ndarray]:
    """Eigen-operator decomposition of sigma_x on ``bath`` (without sqrt(gamma)).

    A transition |k> -> |j> has frequency E_k - E_j = s*omega_bath + m*g; the
    pair (s, m) identifies the channel without any floating-point grouping.
    """
    v = _EIGENVECTORS
    m_eig = v.conj().T @ sigma_x(bath) @ v
    # the bare parts only need a generic, non-degenerate set of frequencies
    probe = RefrigeratorParams(omega_w=1.0, omega_c=math.pi / 7, g=0.0, gamma=1.0, T_w=3, T_h=2, T_c=1)
    base, slope = _energy_parts(probe)
    ops: dict[tuple[int, int], np.ndarray] = {}
    for j in range(8):
        for k in range(8):
            amp = m_eig[j, k]
            if abs(amp) < 1e-12:
                continue
            key = (int(np.sign(base[k] - base[j])), int(slope[k] - slope[j]))
            ops.setdefault(key, np.zeros((8, 8), dtype=complex))
            ops[key] += amp * np.outer(v[:, j], v[:, k].conj())
    assert sorted(ops) == sorted(_CHANNEL_ORDER), ops.keys()
    return ops


_UNIT_OPERATORS = {b: _unit_jump_operators(b) for b in BATHS}


def jump_channels(params: RefrigeratorParams, floor: float = DEGENERACY_FLOOR) -> list[JumpChannel]:
    """The 18 delocalized channels (six per bath) in the computational basis.

    Operators include the ``sqrt(gamma)`` factor, so that for every bath the
    six operators add up to ``sqrt(gamma) * sigma_x``. The rate of each channel
    is :func:`spectral_rate` at the bath temperature.
    """
    check_spectrum(params, floor)
    root = math.sqrt(params.gamma)
    channels = []
    for bath in BATHS:
        t = params.temperatures[bath]
        for freq, key in _channel_keys(params, bath):
            op = root * _UNIT_OPERATORS[bath][key]
            op.setflags(write=False)
            channels.append(JumpChannel(bath, freq, op, float(spectral_rate(freq, t, params.gamma))))
    return channels


def spectral_rate(omega, T, gamma):
    """Thermal rate ``gamma * w^3 * exp(w/2T) / sinh(w/2T)`` for signed ``w``.

    Evaluated as ``2 gamma w^3 / (1 - exp(-w/T))``, which is the same function
    without overflow in the intermediate exponentials.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega == 0):
        raise ZeroFrequency("spectral rate is undefined at omega = 0")
    with np.errstate(over="ignore"):
        rate = 2.0 * gamma * omega**3 / -np.expm1(-omega / T)
    return rate if rate.ndim else float(rate)


def local_thermal_rate(omega, T, kappa):
    """Frequency-independent thermalization rate obeying detailed balance.

    Returns ``kappa / (1 + exp(-w/T))``, so that the emission and absorption
    rates of a qubit add up to ``kappa``.
    """
    rate = kappa * expit(np.asarray(omega, dtype=float) / T)
    return rate if np.ndim(rate) else float(rate)
