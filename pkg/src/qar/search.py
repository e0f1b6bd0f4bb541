"""Scalar golden-section search."""
from __future__ import annotations

import math
from typing import Callable

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(
    f: Callable[[float], float],
    a: float,
    b: float,
    xtol: float = 1e-10,
    max_iter: int = 500,
) -> tuple[float, float]:
    """Maximize a unimodal scalar function on ``[a, b]``.

    Ties keep the left point, so flat stretches resolve toward smaller ``x``.

    Returns
    -------
    x, f(x)
        The best point evaluated.
    """
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)
