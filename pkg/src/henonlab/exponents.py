"""Lyapunov exponents from periodic data.

Two routes to the finite-n average are kept side by side as a built-in
cross-check: the multiplier route sums log|lambda_u| per point, the
cocycle route sums log of the expansion of Df along unstable directions
pushed around each orbit (which telescopes to the same quantity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .maps import HenonMap
from .orbits import PeriodSpectrum, PeriodicOrbit, monodromy, _scaled_eigenpair


@dataclass
class UnstableDirection:
    """Unit tangent direction of maximal expansion at one orbit point."""

    base: tuple[complex, complex]
    dir: np.ndarray  # (2,) complex, unit norm

    def __post_init__(self) -> None:
        self.dir = np.asarray(self.dir, dtype=complex).reshape(2)
        nrm = float(np.linalg.norm(self.dir))
        if not math.isfinite(nrm) or nrm == 0.0:
            raise ValueError("direction must be a nonzero finite vector")
        self.dir = _fix_phase(self.dir / nrm)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Make the largest-modulus component real positive (deterministic rep)."""
    i = int(np.argmax(np.abs(v)))
    ph = v[i] / abs(v[i])
    return v / ph


def _dominant_eigenvector(M: np.ndarray, lam: complex) -> np.ndarray:
    """Eigenvector of a 2x2 matrix for eigenvalue lam, stable branch."""
    c1 = np.array([M[0, 1], lam - M[0, 0]], dtype=complex)
    c2 = np.array([lam - M[1, 1], M[1, 0]], dtype=complex)
    v = c1 if np.linalg.norm(c1) >= np.linalg.norm(c2) else c2
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ValueError("defective monodromy matrix: no eigenvector basis")
    return v / nrm


def _direction_at_start(m: HenonMap, orbit: PeriodicOrbit) -> np.ndarray:
    M, log_scale = monodromy(m, orbit.xs, start=0)
    l1, _, _, _ = _scaled_eigenpair(M, log_scale)
    return _dominant_eigenvector(M, l1)


def unstable_direction(m: HenonMap, orbit: PeriodicOrbit, index: int = 0) -> UnstableDirection:
    """Eigenvector of the monodromy for lambda_u at the given orbit point.

    Only defined for saddles; marginal multipliers make the eigenproblem
    ill-conditioned and are rejected.
    """
    if orbit.kind != "saddle":
        raise ValueError(f"unstable direction requires a saddle orbit, got {orbit.kind!r}")
    index %= orbit.n
    v = _direction_at_start(m, orbit)
    pts = orbit.points
    for i in range(index):
        v = m.jacobian(pts[i]) @ v
        v = v / np.linalg.norm(v)
    return UnstableDirection(base=pts[index], dir=v)


def psi(m: HenonMap, u: UnstableDirection) -> float:
    """log of the expansion of Df at u.base along u.dir (Eq. of the cocycle)."""
    w = m.jacobian(u.base) @ u.dir
    return float(math.log(np.linalg.norm(w)))


def orbit_psi_sum(m: HenonMap, orbit: PeriodicOrbit) -> float:
    """Sum of the expansion logs around the orbit; telescopes to log|lambda_u|."""
    v = _direction_at_start(m, orbit)
    total = 0.0
    for pt in orbit.points:
        w = m.jacobian(pt) @ v
        nrm = float(np.linalg.norm(w))
        total += math.log(nrm)
        v = w / nrm
    return total


@dataclass
class LyapunovEstimate:
    n: int
    which: str
    point_count: int
    lambda_n: float | None
    chi_sum_form: float | None
    psi_sum_form: float | None

    @property
    def agreement_gap(self) -> float | None:
        if self.chi_sum_form is None or self.psi_sum_form is None:
            return None
        return abs(self.chi_sum_form - self.psi_sum_form)


def lambda_estimate(spectrum: PeriodSpectrum, which: str = "sper") -> LyapunovEstimate:
    """Finite-n Lyapunov average (1 / (n d^n)) sum over points of log|lambda_u|.

    A point of exact period k contributes (n/k) log|lambda_u| of its
    k-cycle to the composed-map multiplier, so the sum reduces to
    d^-n sum over orbits of k * chi.  The cocycle route recomputes the
    same value through unstable directions; both are reported.
    Normalization always divides by d^n, so deficient spectra yield a
    lower-bound-biased value (flagged through spectrum.complete).
    """
    orbits = spectrum.select(which)
    d = spectrum.map.degree
    n = spectrum.n
    weight = d ** (-float(n))
    count = sum(o.n for o in orbits)
    if count == 0:
        return LyapunovEstimate(n=n, which=which, point_count=0,
                                lambda_n=None, chi_sum_form=None, psi_sum_form=None)
    # deterministic summation order: spectra are already sorted canonically
    chi_sum = weight * math.fsum(o.n * o.chi for o in orbits)
    psi_sum = weight * math.fsum(orbit_psi_sum(spectrum.map, o) for o in orbits)
    return LyapunovEstimate(
        n=n,
        which=which,
        point_count=count,
        lambda_n=chi_sum,
        chi_sum_form=chi_sum,
        psi_sum_form=psi_sum,
    )
