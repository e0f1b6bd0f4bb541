"""Randomized scans of the COP at maximum cooling power."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import NoCoolingRegion, ParameterError, RejectionStarvation
from ..model import RefrigeratorParams
from .asymptotics import tau
from .optimize import OptimumPoint, maximize_cooling_power

MIN_ACCEPTANCE = 0.01
STARVATION_WINDOW = 1000
HISTOGRAM_EDGES = np.linspace(0.0, 1.0, 21)


@dataclass(frozen=True)
class ScanRanges:
    """Log-uniform sampling intervals and rejection constraints.

    ``omega_w`` is drawn relative to ``T_h`` and ``g`` relative to
    ``omega_w`` (or to the window edge when ``g_relative_to_window``).
    The ``max_*`` fields are optional rejection limits.
    """

    T_c: tuple[float, float] = (1.0, 100.0)
    Th_over_Tc: tuple[float, float] = (1.05, 50.0)
    Tw_over_Th: tuple[float, float] = (1.05, 50.0)
    omega_w_over_Th: tuple[float, float] = (0.1, 2.0)
    g_rel: tuple[float, float] = (1e-3, 1.0)
    gamma: tuple[float, float] = (1e-8, 1e-5)
    g_relative_to_window: bool = False
    min_T_over_gamma: float = 1000.0
    min_g_over_gamma: float = 100.0
    max_omega_w_over_T: float | None = None
    max_omega_w_over_tau: float | None = None
    max_Tc_over_Th: float | None = None

    @classmethod
    def preset(cls, name: str) -> "ScanRanges":
        if name not in PRESETS:
            raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        return PRESETS[name]

    def to_dict(self) -> dict:
        return asdict(self)


PRESETS = {
    "default": ScanRanges(),
    # small-frequency, large-gradient regime where the bound is approached;
    # g must stay below the (narrow) window or cooling is lost
    "saturation": ScanRanges(
        Th_over_Tc=(20.0, 200.0),
        omega_w_over_Th=(1e-3, 0.1),
        max_omega_w_over_T=0.1,
        max_omega_w_over_tau=0.1,
        max_Tc_over_Th=0.05,
        g_rel=(1e-3, 1e-1),
        g_relative_to_window=True,
    ),
}


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream keyed by ``(seed, index)``, independent of draw order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def _log_uniform(rng: np.random.Generator, bounds: tuple[float, float]) -> float:
    lo, hi = np.log(bounds[0]), np.log(bounds[1])
    return float(np.exp(rng.uniform(lo, hi)))


def draw_candidate(ranges: ScanRanges, seed: int, index: int) -> RefrigeratorParams | None:
    """Draw candidate ``index``; returns None when it is rejected."""
    rng = sample_rng(seed, index)
    T_c = _log_uniform(rng, ranges.T_c)
    T_h = T_c * _log_uniform(rng, ranges.Th_over_Tc)
    T_w = T_h * _log_uniform(rng, ranges.Tw_over_Th)
    omega_w = T_h * _log_uniform(rng, ranges.omega_w_over_Th)
    g_rel = _log_uniform(rng, ranges.g_rel)
    gamma = _log_uniform(rng, ranges.gamma)
    wmax = omega_w * T_c * (T_w - T_h) / (T_w * (T_h - T_c))
    g = g_rel * (wmax if ranges.g_relative_to_window else omega_w)
    if min(T_c, T_h, T_w) / gamma < ranges.min_T_over_gamma or g / gamma < ranges.min_g_over_gamma:
        return None
    if ranges.max_omega_w_over_T is not None and omega_w / min(T_w, T_h) > ranges.max_omega_w_over_T:
        return None
    if ranges.max_omega_w_over_tau is not None and omega_w / tau(T_w, T_h, T_c) > ranges.max_omega_w_over_tau:
        return None
    if ranges.max_Tc_over_Th is not None and T_c / T_h > ranges.max_Tc_over_Th:
        return None
    return RefrigeratorParams(omega_w, 0.5 * wmax, g, gamma, T_w, T_h, T_c)


def draw_samples(ranges: ScanRanges, n_samples: int, seed: int) -> tuple[list[tuple[int, RefrigeratorParams]], int]:
    """Accepted ``(candidate_index, params)`` pairs and the number of candidates drawn.

    Raises
    ------
    RejectionStarvation
        If fewer than 1% of at least 1000 candidates are accepted.
    """
    accepted = []
    index = 0
    while len(accepted) < n_samples:
        params = draw_candidate(ranges, seed, index)
        index += 1
        if params is not None:
            accepted.append((index - 1, params))
        if index >= STARVATION_WINDOW and len(accepted) < MIN_ACCEPTANCE * index:
            raise RejectionStarvation(f"{len(accepted)} of {index} candidates accepted")
    return accepted, index


@dataclass(frozen=True)
class BoundScanSample:
    params: RefrigeratorParams
    optimum: OptimumPoint | None
    seed_index: int


@dataclass
class ScanResult:
    samples: list[BoundScanSample]
    summary: dict = field(default_factory=dict)


def _evaluate(job: tuple[int, RefrigeratorParams, str, int]) -> BoundScanSample:
    index, params, mode, grid_size = job
    try:
        optimum = maximize_cooling_power(params, mode=mode, grid_size=grid_size)
    except (NoCoolingRegion, ParameterError):
        optimum = None
    return BoundScanSample(params=params, optimum=optimum, seed_index=index)


def worker_count(requested: int | None = None) -> int:
    cap = int(os.environ.get("QAR_THREADS", "1") or 1)
    return max(1, min(requested or cap, cap))


def random_bound_scan(
    ranges: ScanRanges | str = "default",
    n_samples: int = 2000,
    seed: int = 0,
    mode: str = "delocalized",
    grid_size: int = 200,
    workers: int | None = None,
    bound: float = 0.75,
) -> ScanResult:
    """Sample parameter sets, maximize the cooling power of each and summarize ``eps*/eps_C``.

    Samples whose window never cools are kept with ``optimum=None`` and
    counted in the summary. Results are ordered by candidate index, so the
    output does not depend on ``workers``.
    """
    if isinstance(ranges, str):
        ranges = ScanRanges.preset(ranges)
    drawn, n_candidates = draw_samples(ranges, n_samples, seed)
    jobs = [(i, p, mode, grid_size) for i, p in drawn]
    n_workers = worker_count(workers)
    if n_workers > 1:
        with ProcessPoolExecutor(n_workers) as pool:
            samples = list(pool.map(_evaluate, jobs, chunksize=16))
    else:
        samples = [_evaluate(j) for j in jobs]
    return ScanResult(samples, summarize(samples, n_candidates, seed, ranges, mode, bound))


def summarize(samples, n_candidates: int, seed: int, ranges: ScanRanges, mode: str, bound: float = 0.75) -> dict:
    ratios = np.array([s.optimum.cop_ratio_star for s in samples if s.optimum is not None])
    ok = [s for s in samples if s.optimum is not None]
    best = max(ok, key=lambda s: s.optimum.cop_ratio_star) if ok else None
    return {
        "mode": mode,
        "seed": seed,
        "n_samples": len(samples),
        "n_candidates": n_candidates,
        "n_no_cooling": len(samples) - len(ok),
        "max_cop_ratio": float(ratios.max()) if len(ratios) else float("nan"),
        "argmax_seed_index": best.seed_index if best else None,
        "argmax_params": best.params.to_dict() if best else None,
        "bound": bound,
        "n_exceeding_bound": int(np.sum(ratios > bound)),
        "histogram_edges": HISTOGRAM_EDGES.tolist(),
        "histogram_counts": np.histogram(ratios, HISTOGRAM_EDGES)[0].tolist(),
        "ranges": ranges.to_dict(),
    }

