"""Optimization and sampling campaigns built on the model, dynamics and thermo layers."""
from .asymptotics import (
    LocalizedAsymptotics,
    delta_argmax,
    lambert_w0,
    localized_asymptotics,
    localized_delta_omega,
    omega_table,
    tau,
)
from .optimize import OptimumPoint, maximize_cooling_power, performance_characteristic
from .scan import BoundScanSample, ScanRanges, draw_samples, random_bound_scan
from .sweeps import SweepResult, correlation_sweep

__all__ = [
    "BoundScanSample",
    "LocalizedAsymptotics",
    "OptimumPoint",
    "ScanRanges",
    "SweepResult",
    "correlation_sweep",
    "delta_argmax",
    "draw_samples",
    "lambert_w0",
    "localized_asymptotics",
    "localized_delta_omega",
    "maximize_cooling_power",
    "omega_table",
    "performance_characteristic",
    "random_bound_scan",
    "tau",
]
