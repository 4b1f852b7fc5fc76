"""Extended-precision spot checks for certified orbits.

Double-precision orbit points carry O(1e-15) error, which backward
iteration amplifies by roughly the reciprocal stable multiplier per
step; on strongly hyperbolic maps the iterates leave the bounded set
after ~15 steps and the escape-rate estimate saturates near 1e-4 no
matter how many iterations are allowed.  Verifying that enumerated
periodic points genuinely lie in the bounded-orbit set therefore needs
more precision than the solver itself: these helpers re-polish a
certified orbit with mpmath Newton steps and evaluate the escape-rate
potentials without rounding back to doubles.
"""

from __future__ import annotations

import mpmath as mp
import numpy as np

from .maps import ESCAPE_THRESHOLD, HenonMap


def _p_mp(m: HenonMap, x):
    r = mp.mpc(1)
    for c in reversed(m.coeffs):
        r = r * x + mp.mpc(c)
    return r


def _dp_mp(m: HenonMap, x):
    d = m.degree
    r = mp.mpc(d)
    for j in range(d - 1, 0, -1):
        r = r * x + j * mp.mpc(m.coeffs[j])
    return r


def refine_orbit_hp(m: HenonMap, xs: np.ndarray, dps: int = 60, steps: int = 6) -> list:
    """Polish a certified cyclic orbit vector to ~dps digits (mpmath Newton)."""
    with mp.workdps(dps):
        n = len(xs)
        z = [mp.mpc(complex(v)) for v in xs]
        for _ in range(steps):
            F = mp.matrix([_p_mp(m, z[k]) - mp.mpc(m.a) * z[k - 1] - z[(k + 1) % n]
                           for k in range(n)])
            J = mp.zeros(n, n)
            for k in range(n):
                J[k, k] += _dp_mp(m, z[k])
                J[k, (k - 1) % n] += -mp.mpc(m.a)
                J[k, (k + 1) % n] += -mp.mpc(1)
            s = mp.lu_solve(J, F)
            z = [z[k] - s[k] for k in range(n)]
        return z


def _green_hp(m: HenonMap, x, y, forward: bool, max_iter: int) -> float:
    d = m.degree
    a = mp.mpc(m.a)
    n = 0
    while n <= max_iter:
        mag = abs(x if forward else y)
        if mag > ESCAPE_THRESHOLD:
            return float(mp.log(mag) / mp.mpf(d) ** n)
        if forward:
            x, y = _p_mp(m, x) - a * y, x
        else:
            x, y = y, (_p_mp(m, y) - x) / a
        n += 1
    return 0.0


def green_plus_hp(m: HenonMap, pt, max_iter: int = 100, dps: int = 60) -> float:
    with mp.workdps(dps):
        return _green_hp(m, mp.mpc(complex(pt[0])) if not isinstance(pt[0], mp.mpc) else pt[0],
                         mp.mpc(complex(pt[1])) if not isinstance(pt[1], mp.mpc) else pt[1],
                         forward=True, max_iter=max_iter)


def green_minus_hp(m: HenonMap, pt, max_iter: int = 100, dps: int = 60) -> float:
    with mp.workdps(dps):
        return _green_hp(m, mp.mpc(complex(pt[0])) if not isinstance(pt[0], mp.mpc) else pt[0],
                         mp.mpc(complex(pt[1])) if not isinstance(pt[1], mp.mpc) else pt[1],
                         forward=False, max_iter=max_iter)


def orbit_greens_hp(m: HenonMap, xs: np.ndarray, max_iter: int = 100, dps: int = 60) -> tuple[float, float]:
    """(max green_plus, max green_minus) over the re-polished orbit points."""
    z = refine_orbit_hp(m, xs, dps=dps)
    n = len(z)
    gp = 0.0
    gm = 0.0
    with mp.workdps(dps):
        for k in range(n):
            x, y = z[k], z[k - 1]
            gp = max(gp, _green_hp(m, x, y, True, max_iter))
            gm = max(gm, _green_hp(m, x, y, False, max_iter))
    return gp, gm
