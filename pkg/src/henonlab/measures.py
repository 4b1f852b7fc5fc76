"""Empirical measures on periodic points and their comparison.

The normalized measure nu_n assigns weight d^-n to every selected point
of Fix_n.  Convergence toward the equilibrium measure is witnessed by a
binned total-variation distance (C^2 read as R^4) and by polynomial
moments; no independent limit-measure oracle is computed.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .orbits import PeriodSpectrum

#: default cell side for the binned total-variation distance
DEFAULT_RESOLUTION = 1.0 / 32.0


@dataclass
class EmpiricalMeasure:
    """Weighted point cloud: rows of ``points`` are (x, y) in C^2."""

    points: np.ndarray          # (m, 2) complex
    weights: np.ndarray         # (m,) nonnegative real

    def __post_init__(self) -> None:
        self.points = np.asarray(self.points, dtype=complex).reshape(-1, 2)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.points.shape[0] != self.weights.shape[0]:
            raise ValueError("points/weights length mismatch")
        if (self.weights < 0).any():
            raise ValueError("weights must be nonnegative")

    @property
    def total(self) -> float:
        return float(self.weights.sum())


def empirical_measure(spectrum: PeriodSpectrum, which: str = "fix") -> EmpiricalMeasure:
    """nu_n = d^-n sum of point masses over the selected subset of Fix_n."""
    d = spectrum.map.degree
    w = d ** (-float(spectrum.n))
    pts = []
    for o in spectrum.select(which):
        pts.extend(o.points)
    if not pts:
        return EmpiricalMeasure(np.empty((0, 2), dtype=complex), np.empty(0))
    points = np.array(pts, dtype=complex)
    return EmpiricalMeasure(points, np.full(points.shape[0], w))


def _bin_keys(m: EmpiricalMeasure, resolution: float) -> np.ndarray:
    coords = np.column_stack(
        [m.points[:, 0].real, m.points[:, 0].imag, m.points[:, 1].real, m.points[:, 1].imag]
    )
    return np.floor(coords / resolution).astype(np.int64)


def discrepancy(m1: EmpiricalMeasure, m2: EmpiricalMeasure, resolution: float = DEFAULT_RESOLUTION) -> float:
    """Binned total-variation distance at the given cell side.

    Half the summed absolute cell-mass differences over the 4-d grid of
    side ``resolution``; symmetric, and zero iff the binned masses agree.
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    if m1.points.shape[0] == 0 and m2.points.shape[0] == 0:
        return 0.0
    keys = np.vstack([_bin_keys(m1, resolution), _bin_keys(m2, resolution)])
    signed = np.concatenate([m1.weights, -m2.weights])
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    mass = np.zeros(uniq.shape[0])
    np.add.at(mass, inv, signed)
    return 0.5 * float(np.abs(mass).sum())


def moment_orders(max_order: int) -> list[tuple[int, int]]:
    """Fixed (j, k) ordering: ascending total degree, then ascending j."""
    return [(j, t - j) for t in range(max_order + 1) for j in range(t + 1)]


def moments(m: EmpiricalMeasure, max_order: int) -> dict[tuple[int, int], complex]:
    """Mixed moments sum_i w_i x_i^j y_i^k for all 0 <= j + k <= max_order."""
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    out: dict[tuple[int, int], complex] = {}
    x = m.points[:, 0] if m.points.size else np.empty(0, dtype=complex)
    y = m.points[:, 1] if m.points.size else np.empty(0, dtype=complex)
    for j, k in moment_orders(max_order):
        out[(j, k)] = complex(np.sum(m.weights * x**j * y**k)) if x.size else 0.0 + 0j
    return out


def measure_to_csv(m: EmpiricalMeasure) -> str:
    buf = io.StringIO()
    buf.write("re_x,im_x,re_y,im_y,weight\n")
    for (x, y), w in zip(m.points, m.weights):
        buf.write(f"{x.real!r},{x.imag!r},{y.real!r},{y.imag!r},{w!r}\n")
    return buf.getvalue()
