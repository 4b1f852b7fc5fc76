"""Enumeration, refinement, certification and classification of periodic orbits.

A period-n orbit is stored as the cyclic vector (x_0, ..., x_{n-1}) of
first coordinates; the phase point at index k is (x_k, x_{k-1 mod n}).
The defining system is

    F_k(x) = p(x_k) - a x_{k-1} - x_{k+1} = 0   (indices mod n)

whose Jacobian is cyclic banded: diagonal p'(x_k), subdiagonal -a,
superdiagonal -1 (with wrap-around corners).
"""

from __future__ import annotations

import cmath
import json
import math
from bisect import bisect_left, bisect_right, insort
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .maps import HenonMap

#: documented default so every run is reproducible out of the box
DEFAULT_RNG_SEED = 1729


class NewtonFailure(RuntimeError):
    reason = "failed"


class NewtonDiverged(NewtonFailure):
    reason = "diverged"


class NewtonStalled(NewtonFailure):
    reason = "stalled"


class NewtonSingular(NewtonFailure):
    reason = "singular"


class AmbiguousOrbitError(RuntimeError):
    """Two certified orbits landed between the certificate and dedup scales."""


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances shared across the solver and its consumers."""

    newton: float = 1e-12       # residual sup-norm target for refinement
    dedup: float = 1e-8         # orbit identification scale (sup over rotations)
    eps_hyp: float = 1e-6       # hyperbolicity band around |lambda| = 1
    separation: float = 1e-6    # proper-divisor cycles must differ by this much
    certify_ball: float = 1e-3  # radius on which the Jacobian Lipschitz bound is taken

    def __post_init__(self) -> None:
        for name in ("newton", "dedup", "eps_hyp", "separation", "certify_ball"):
            if getattr(self, name) <= 0:
                raise ValueError(f"tolerance {name} must be positive")

    def key(self) -> tuple:
        return (self.newton, self.dedup, self.eps_hyp, self.separation, self.certify_ball)


DEFAULT_TOLERANCES = Tolerances()


# ---------------------------------------------------------------------------
# cyclic system
# ---------------------------------------------------------------------------

def cyclic_residual(m: HenonMap, xs: np.ndarray) -> np.ndarray:
    """Residual of the cyclic period system; zero iff a genuine orbit."""
    xs = np.asarray(xs, dtype=complex)
    return m.p(xs) - m.a * np.roll(xs, 1) - np.roll(xs, -1)


def cyclic_jacobian(m: HenonMap, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=complex)
    n = xs.shape[0]
    J = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    np.add.at(J, (idx, idx), m.dp(xs))
    np.add.at(J, (idx, (idx - 1) % n), -m.a)
    np.add.at(J, (idx, (idx + 1) % n), -1.0)
    return J


def _residual_batch(m: HenonMap, X: np.ndarray) -> np.ndarray:
    return m.p(X) - m.a * np.roll(X, 1, axis=1) - np.roll(X, -1, axis=1)


def _jacobian_batch(m: HenonMap, X: np.ndarray) -> np.ndarray:
    B, n = X.shape
    J = np.zeros((B, n, n), dtype=complex)
    idx = np.arange(n)
    J[:, idx, idx] += m.dp(X)
    J[:, idx, (idx - 1) % n] += -m.a
    J[:, idx, (idx + 1) % n] += -1.0
    return J


def _residual_floor(m: HenonMap) -> float:
    R = m.filtration_radius
    scale = R**m.degree + abs(m.a) * R + sum(abs(c) * R**j for j, c in enumerate(m.coeffs))
    return 1e-15 * (1.0 + scale)


def _solve_batch(J: np.ndarray, F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched linear solve; rows with singular Jacobians are flagged."""
    bad = np.zeros(J.shape[0], dtype=bool)
    try:
        return np.linalg.solve(J, F[..., None])[..., 0], bad
    except np.linalg.LinAlgError:
        S = np.zeros_like(F)
        for i in range(J.shape[0]):
            try:
                S[i] = np.linalg.solve(J[i], F[i])
            except np.linalg.LinAlgError:
                bad[i] = True
        return S, bad


def _newton_batch(
    m: HenonMap,
    X: np.ndarray,
    tol: float,
    max_steps: int = 60,
    safety: float | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Damped Newton on a batch of cyclic orbit vectors.

    Returns (X, converged, singular, residual_norms).  Rows converge when
    the residual sup-norm drops below ``tol`` and further steps stop
    improving (iteration continues to the round-off floor so certified
    orbits carry residuals near machine precision).
    """
    X = np.array(X, dtype=complex)
    B, n = X.shape
    if safety is None:
        safety = 2.0 * m.filtration_radius
    floor = _residual_floor(m)

    rn = np.abs(_residual_batch(m, X)).max(axis=1)
    done = np.zeros(B, dtype=bool)
    dead = np.zeros(B, dtype=bool)
    singular = np.zeros(B, dtype=bool)

    for _ in range(max_steps):
        act = np.flatnonzero(~done & ~dead)
        if act.size == 0:
            break
        Xa = X[act]
        Fa = _residual_batch(m, Xa)
        Ja = _jacobian_batch(m, Xa)
        S, bad = _solve_batch(Ja, Fa)
        if bad.any():
            idx = act[bad]
            dead[idx] = True
            singular[idx] = True
            keep = ~bad
            act, Xa, S = act[keep], Xa[keep], S[keep]
            if act.size == 0:
                continue
        r0 = rn[act]
        cand = Xa - S
        rc = np.abs(_residual_batch(m, cand)).max(axis=1)
        worse = rc >= r0
        t = 1.0
        for _ in range(3):
            if not worse.any():
                break
            t *= 0.5
            cand[worse] = Xa[worse] - t * S[worse]
            rc[worse] = np.abs(_residual_batch(m, cand[worse])).max(axis=1)
            worse = worse & (rc >= r0)
        stuck = worse  # no damping factor improved: at the attainable floor
        done[act[stuck & (r0 <= max(tol, floor))]] = True
        dead[act[stuck & (r0 > max(tol, floor))]] = True
        moved = ~stuck
        mi = act[moved]
        X[mi] = cand[moved]
        rn[mi] = rc[moved]
        out = np.abs(X[mi]).max(axis=1) > safety
        dead[mi[out]] = True
        done[mi[~out] [rn[mi[~out]] <= floor]] = True
    # rows that ran out of steps but already satisfy tol still count
    done |= (~dead) & (rn <= tol)
    return X, done, singular, rn


def newton_refine(
    m: HenonMap,
    seed: np.ndarray,
    tol: float = DEFAULT_TOLERANCES.newton,
    max_steps: int = 60,
) -> np.ndarray:
    """Refine one cyclic seed; raises NewtonDiverged/Stalled/Singular."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    seed = np.atleast_1d(np.asarray(seed, dtype=complex))
    safety = 2.0 * m.filtration_radius
    if np.abs(seed).max() > safety:
        raise NewtonDiverged("seed outside the safety region")
    X, done, singular, rn = _newton_batch(m, seed[None, :], tol, max_steps, safety)
    if done[0]:
        return X[0]
    if singular[0]:
        raise NewtonSingular("cyclic Jacobian numerically singular (possible multiple root)")
    if np.abs(X[0]).max() > safety or not np.isfinite(rn[0]):
        raise NewtonDiverged("iterates left the safety region")
    raise NewtonStalled(f"no convergence after {max_steps} steps (residual {rn[0]:.3e})")


# ---------------------------------------------------------------------------
# certification (a posteriori Newton-Kantorovich test)
# ---------------------------------------------------------------------------

def certify(m: HenonMap, xs: np.ndarray, tols: Tolerances = DEFAULT_TOLERANCES) -> tuple[bool, float]:
    """Decide whether a unique true orbit lies near ``xs``.

    With eta = |J^-1 F|_inf, beta = |J^-1|_inf and L the Lipschitz bound
    for the Jacobian on the ball of radius ``tols.certify_ball`` (driven
    by max |p''| there), h = beta L eta <= 1/2 guarantees a unique zero
    within rho = (1 - sqrt(1 - 2h)) / (beta L).
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=complex))
    F = cyclic_residual(m, xs)
    if not np.all(np.isfinite(F)):
        return False, 0.0
    J = cyclic_jacobian(m, xs)
    try:
        Jinv = np.linalg.inv(J)
    except np.linalg.LinAlgError:
        return False, 0.0
    eta = float(np.abs(Jinv @ F).max())
    beta = float(np.abs(Jinv).sum(axis=1).max())
    L = m.d2p_bound(float(np.abs(xs).max()) + tols.certify_ball)
    if L <= 0.0 or not math.isfinite(beta):
        return False, 0.0
    h = beta * L * eta
    if h > 0.5:
        return False, 0.0
    rho = (1.0 - math.sqrt(1.0 - 2.0 * h)) / (beta * L)
    if rho > tols.certify_ball:
        return False, 0.0
    # floating representation of xs itself is only good to machine precision
    rho = max(rho, np.finfo(float).eps * (1.0 + float(np.abs(xs).max())))
    return True, rho


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class PeriodicOrbit:
    """A certified period-n orbit with multipliers and classification."""

    n: int
    xs: np.ndarray
    lambda_s: complex
    lambda_u: complex
    chi: float
    kind: str
    residual: float
    certified: bool
    certificate_radius: float

    @property
    def points(self) -> list[tuple[complex, complex]]:
        return [(complex(self.xs[k]), complex(self.xs[k - 1])) for k in range(self.n)]

    @property
    def log_lambda_u(self) -> float:
        return self.n * self.chi


def monodromy(m: HenonMap, xs: np.ndarray, start: int = 0) -> tuple[np.ndarray, float]:
    """Scaled product Df(p_{start+n-1}) ... Df(p_start) along the orbit.

    Returns (M_scaled, log_scale) with the true monodromy M_scaled * e^log_scale;
    the running rescale keeps entries bounded for long orbits.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=complex))
    n = xs.shape[0]
    M = np.eye(2, dtype=complex)
    log_scale = 0.0
    for i in range(n):
        k = (start + i) % n
        A = np.array([[m.dp(xs[k]), -m.a], [1.0, 0.0]], dtype=complex)
        M = A @ M
        s = float(np.abs(M).max())
        if s > 0.0 and (s > 1e8 or s < 1e-8):
            M /= s
            log_scale += math.log(s)
    return M, log_scale


def _scaled_eigenpair(M: np.ndarray, log_scale: float) -> tuple[complex, complex, float, float]:
    """Eigenvalues of e^log_scale * M with stable root pairing.

    Returns (lu_scaled, ls_scaled, log_abs_lu, log_abs_ls) where the true
    multipliers are lu_scaled * e^log_scale etc.
    """
    T = M[0, 0] + M[1, 1]
    D = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = np.lib.scimath.sqrt(T * T - 4.0 * D)
    l1 = (T + disc) / 2.0 if abs(T + disc) >= abs(T - disc) else (T - disc) / 2.0
    l2 = D / l1 if l1 != 0 else 0.0 + 0j
    if abs(l2) > abs(l1):
        l1, l2 = l2, l1
    log_lu = math.log(abs(l1)) + log_scale if l1 != 0 else -math.inf
    log_ls = math.log(abs(l2)) + log_scale if l2 != 0 else -math.inf
    return complex(l1), complex(l2), log_lu, log_ls


def classify(
    m: HenonMap,
    xs: np.ndarray,
    tols: Tolerances = DEFAULT_TOLERANCES,
    certified: bool | None = None,
    certificate_radius: float | None = None,
) -> PeriodicOrbit:
    """Build the PeriodicOrbit record (multipliers, exponent, kind)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=complex))
    n = xs.shape[0]
    residual = float(np.abs(cyclic_residual(m, xs)).max())
    if certified is None:
        certified, certificate_radius = certify(m, xs, tols)
    M, log_scale = monodromy(m, xs)
    l1, l2, log_lu, log_ls = _scaled_eigenpair(M, log_scale)
    scale = math.exp(log_scale) if abs(log_scale) < 690 else math.inf
    lambda_u = l1 * scale if math.isfinite(scale) else complex(math.inf, 0)
    lambda_s = l2 * scale if math.isfinite(scale) else 0.0
    if math.isfinite(log_lu) and l1 != 0:
        # the determinant of Df^n is exactly a^n; the product of a long
        # near-singular 2x2 chain cancels catastrophically, so the stable
        # multiplier is pinned through the determinant in log-polar form
        log_ls = n * math.log(abs(m.a)) - log_lu
        arg_ls = n * cmath.phase(m.a) - cmath.phase(l1)
        lambda_s = cmath.exp(complex(log_ls, arg_ls))
    chi = log_lu / n
    eps = tols.eps_hyp
    lo, hi = math.log1p(-eps), math.log1p(eps)
    if log_ls < lo and log_lu > hi:
        kind = "saddle"
    elif log_ls < lo and log_lu < lo:
        kind = "sink"
    elif log_ls > hi and log_lu > hi:
        kind = "source"
    else:
        kind = "marginal"
    return PeriodicOrbit(
        n=n,
        xs=xs,
        lambda_s=complex(lambda_s),
        lambda_u=complex(lambda_u),
        chi=chi,
        kind=kind,
        residual=residual,
        certified=bool(certified),
        certificate_radius=float(certificate_radius or 0.0),
    )


# ---------------------------------------------------------------------------
# orbit vector utilities
# ---------------------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def rotation_distance(u: np.ndarray, v: np.ndarray, cutoff: float = 0.0) -> float:
    """min over cyclic rotations r of sup_k |u_k - v_{k+r}|.

    A positive ``cutoff`` allows an early exit as soon as some rotation
    is already closer than it (enough for a match/no-match decision).
    """
    u = np.asarray(u)
    v = np.asarray(v)
    best = math.inf
    for r in range(u.shape[0]):
        d = float(np.abs(u - np.roll(v, r)).max())
        if d < best:
            best = d
            if best < cutoff:
                break
    return best


def _canonical_key(xs: np.ndarray) -> tuple:
    return tuple((z.real, z.imag) for z in xs)


def canonical_rotation(xs: np.ndarray) -> np.ndarray:
    """Rotation minimizing the (re, im) lexicographic key; fixes output order."""
    xs = np.asarray(xs, dtype=complex)
    best = xs
    best_key = _canonical_key(xs)
    for r in range(1, xs.shape[0]):
        cand = np.roll(xs, -r)
        key = _canonical_key(cand)
        if key < best_key:
            best, best_key = cand, key
    return best


def vector_period(xs: np.ndarray, tol: float) -> int:
    """Minimal p | n with sup_k |x_{k+p} - x_k| < tol."""
    n = xs.shape[0]
    for p in _divisors(n)[:-1]:
        if float(np.abs(xs - np.roll(xs, -p)).max()) < tol:
            return p
    return n


# ---------------------------------------------------------------------------
# spectrum container
# ---------------------------------------------------------------------------

@dataclass
class PeriodSpectrum:
    """The catalogue of Fix_n for one map: orbits grouped by exact period."""

    map: HenonMap
    n: int
    orbits: list[PeriodicOrbit]
    complete: bool
    budget_used: int = 0
    unresolved: list[np.ndarray] = field(default_factory=list)

    @property
    def counts(self) -> dict:
        per: dict[int, int] = {}
        for o in self.orbits:
            per[o.n] = per.get(o.n, 0) + o.n
        fix = sum(per.values())
        sper = sum(o.n for o in self.orbits if o.n == self.n and o.kind == "saddle")
        return {"fix": fix, "per": per, "sper": sper}

    def select(self, which: str) -> list[PeriodicOrbit]:
        """Orbit subset for the three point classes of the limit theorem.

        fix: every point of f^n; per: exact period n only; sper: the
        saddle subset of Fix_n (coincides with fix on all-saddle spectra).
        """
        if which == "fix":
            return list(self.orbits)
        if which == "per":
            return [o for o in self.orbits if o.n == self.n]
        if which == "sper":
            return [o for o in self.orbits if o.kind == "saddle"]
        raise ValueError(f"unknown selection {which!r} (expected fix/per/sper)")


# ---------------------------------------------------------------------------
# multistart enumeration
# ---------------------------------------------------------------------------

class _Bucket:
    """Kept orbits of one exact period, indexed by Re(sum x_k) for lookup."""

    __slots__ = ("orbits", "s1r", "order")

    def __init__(self) -> None:
        self.orbits: list[dict] = []
        self.s1r: list[float] = []   # sorted Re(s1)
        self.order: list[int] = []   # orbit index parallel to s1r

    def near(self, s1: complex, window: float):
        lo = bisect_left(self.s1r, s1.real - window)
        hi = bisect_right(self.s1r, s1.real + window)
        for t in range(lo, hi):
            yield self.orbits[self.order[t]]

    def add(self, rec: dict) -> None:
        i = len(self.orbits)
        self.orbits.append(rec)
        pos = bisect_left(self.s1r, rec["s1"].real)
        self.s1r.insert(pos, rec["s1"].real)
        self.order.insert(pos, i)


def _seed_batch(m: HenonMap, n: int, count: int, seed_material: tuple) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed_material)))
    R = m.filtration_radius
    r = R * np.sqrt(rng.random((count, n)))
    theta = 2.0 * np.pi * rng.random((count, n))
    return r * np.exp(1j * theta)


def enumerate_fix(
    m: HenonMap,
    n: int,
    budget: int | None = None,
    rng_seed: int | tuple = DEFAULT_RNG_SEED,
    workers: int = 1,
    tols: Tolerances = DEFAULT_TOLERANCES,
) -> PeriodSpectrum:
    """Multistart enumeration of all fixed points of f^n.

    Seeds are uniform in the filtration polydisk; each is refined by
    damped Newton on the cyclic system, reduced to its exact period,
    deduplicated up to rotation and certified.  Stops early once the
    point count reaches d^n.  Output is deterministic for a given
    rng_seed regardless of the worker count: wave composition is fixed
    and results are merged in batch order, then sorted lexicographically.
    """
    if n < 1:
        raise ValueError("period n must be >= 1")
    d = m.degree
    target = d**n
    if budget is None:
        budget = 1000 * target
    if budget < target:
        raise ValueError(f"budget {budget} below d^n = {target}")

    sub_size = int(min(4096, max(128, 4 * target)))
    subs_per_wave = 8
    safety = 2.0 * m.filtration_radius
    buckets: dict[int, _Bucket] = {}
    unresolved: list[np.ndarray] = []
    total = 0
    seeds_used = 0
    wave = 0

    seed_prefix = rng_seed if isinstance(rng_seed, tuple) else (rng_seed,)

    def run_sub(args):
        widx, sidx, count = args
        X = _seed_batch(m, n, count, (*seed_prefix, n, widx, sidx))
        X, done, _, rn = _newton_batch(m, X, tols.newton, 60, safety)
        keep = done & (rn < 10.0 * tols.newton)
        return X[keep]

    pool = ThreadPoolExecutor(max_workers=max(1, workers)) if workers > 1 else None
    try:
        while total < target and seeds_used < budget:
            jobs = []
            for s in range(subs_per_wave):
                count = min(sub_size, budget - seeds_used)
                if count <= 0:
                    break
                jobs.append((wave, s, count))
                seeds_used += count
            if not jobs:
                break
            if pool is not None:
                results = list(pool.map(run_sub, jobs))
            else:
                results = [run_sub(j) for j in jobs]
            for block in results:
                for vec in block:
                    total += _absorb_candidate(m, n, vec, buckets, unresolved, tols)
                    if total >= target:
                        break
                if total >= target:
                    break
            wave += 1
    finally:
        if pool is not None:
            pool.shutdown(wait=False)

    orbits: list[PeriodicOrbit] = []
    for k in sorted(buckets):
        recs = sorted(buckets[k].orbits, key=lambda r: _canonical_key(r["xs"]))
        for rec in recs:
            orbits.append(
                classify(m, rec["xs"], tols, certified=True, certificate_radius=rec["radius"])
            )
    return PeriodSpectrum(
        map=m,
        n=n,
        orbits=orbits,
        complete=(total == target),
        budget_used=seeds_used,
        unresolved=unresolved,
    )


def _absorb_candidate(
    m: HenonMap,
    n: int,
    vec: np.ndarray,
    buckets: dict[int, _Bucket],
    unresolved: list[np.ndarray],
    tols: Tolerances,
) -> int:
    """Dedup/certify one converged vector; returns points added to Fix_n."""
    # exact-period reduction: genuine k-periodic vectors repeat to round-off
    dists = {p: float(np.abs(vec - np.roll(vec, -p)).max()) for p in _divisors(n)[:-1]}
    k = n
    for p in sorted(dists):
        if dists[p] < tols.dedup:
            k = p
            break
    if k == n and any(tols.dedup <= dv < tols.separation for dv in dists.values()):
        unresolved.append(np.array(vec))
        return 0
    if k < n:
        w = vec.reshape(n // k, k).mean(axis=0)
        try:
            w = newton_refine(m, w, tols.newton, 20)
        except NewtonFailure:
            return 0
    else:
        w = vec
    if float(np.abs(cyclic_residual(m, w)).max()) > 1e-10:
        return 0
    w = canonical_rotation(w)
    s1 = complex(w.sum())
    bucket = buckets.setdefault(k, _Bucket())
    window = k * tols.dedup + 1e-12
    dmin, nearest = math.inf, None
    for rec in bucket.near(s1, window):
        dv = rotation_distance(w, rec["xs"], cutoff=tols.dedup)
        if dv < dmin:
            dmin, nearest = dv, rec
    if dmin < tols.dedup:
        # duplicate; sanity-check the merge against the certificate scale
        if nearest is not None and dmin > max(100.0 * nearest["radius"], 1e-10):
            ok, rho = certify(m, w, tols)
            if ok and dmin > rho + nearest["radius"]:
                raise AmbiguousOrbitError(
                    f"certified orbits separated by {dmin:.3e}, inside the dedup scale"
                )
        return 0
    ok, rho = certify(m, w, tols)
    if not ok:
        if all(rotation_distance(w, u, cutoff=tols.dedup) >= tols.dedup
               for u in unresolved if u.shape[0] == k):
            unresolved.append(np.array(w))
        return 0
    bucket.add({"xs": w, "s1": s1, "radius": rho})
    return k


# ---------------------------------------------------------------------------
# period decomposition across divisor spectra
# ---------------------------------------------------------------------------

def decompose_periods(spectra: dict[int, PeriodSpectrum],
                      tols: Tolerances = DEFAULT_TOLERANCES) -> PeriodSpectrum:
    """Cross-check the exact-period decomposition of Fix_n against divisors.

    ``spectra`` must hold a complete spectrum for every divisor of the
    largest key n.  Each Fix_n point is matched against the divisor
    catalogues; matching must reproduce the recorded exact periods, and
    the disjoint-union count identity must hold exactly.
    """
    n = max(spectra)
    spec_n = spectra[n]
    for k in _divisors(n):
        if k not in spectra:
            raise ValueError(f"missing spectrum for divisor {k} of {n}")
        if not spectra[k].complete:
            raise ValueError(f"spectrum for divisor {k} is incomplete")

    # pool the divisor points with owning orbit ids
    pool_pts: list[complex] = []
    pool_owner: list[tuple[int, int]] = []
    for k in _divisors(n)[:-1]:
        for j, o in enumerate(spectra[k].orbits):
            if o.n == k:  # exact-period-k orbits only
                for z in o.xs:
                    pool_pts.append(complex(z))
                    pool_owner.append((k, j))
    pool = np.array(pool_pts, dtype=complex) if pool_pts else np.empty(0, dtype=complex)

    for o in spec_n.orbits:
        for z in o.xs:
            if pool.size:
                dist = np.abs(pool - z)
                hits = {pool_owner[i] for i in np.flatnonzero(dist < tols.dedup)}
            else:
                hits = set()
            if len(hits) > 1:
                raise AmbiguousOrbitError(
                    f"point {z} matches {len(hits)} divisor orbits (tolerance collision)"
                )
            matched_period = next(iter(hits))[0] if hits else n
            if matched_period != o.n:
                raise AmbiguousOrbitError(
                    f"orbit recorded with period {o.n} but matched divisor period {matched_period}"
                )
    counts = spec_n.counts
    if sum(counts["per"].values()) != counts["fix"]:
        raise AmbiguousOrbitError("disjoint-union count identity violated")
    return spec_n


# ---------------------------------------------------------------------------
# shadowing
# ---------------------------------------------------------------------------

def shadow_pseudo_orbit(
    m: HenonMap,
    pt: tuple[complex, complex],
    n: int,
    tols: Tolerances = DEFAULT_TOLERANCES,
) -> PeriodicOrbit:
    """Refine the forward orbit of an approximately returning point.

    The seed is the actual length-n forward orbit of ``pt``; Newton
    refinement plus certification produces the unique nearby true
    periodic orbit.  Point 0 of the result stays near ``pt``.
    """
    z = (complex(pt[0]), complex(pt[1]))
    seed = np.empty(n, dtype=complex)
    cur = z
    for i in range(n):
        seed[i] = cur[0]
        cur = m.evaluate(cur)
    xs = newton_refine(m, seed, tols.newton)
    k = vector_period(xs, tols.dedup)
    if k < n:
        xs = xs.reshape(n // k, k).mean(axis=0)
        xs = newton_refine(m, xs, tols.newton, 20)
    ok, rho = certify(m, xs, tols)
    if not ok:
        raise NewtonSingular("refined orbit failed certification")
    return classify(m, xs, tols, certified=True, certificate_radius=rho)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _c2l(z: complex) -> list[float]:
    return [z.real, z.imag]


def spectrum_to_dict(spec: PeriodSpectrum) -> dict:
    counts = spec.counts
    return {
        "map": spec.map.to_spec(),
        "n": spec.n,
        "complete": spec.complete,
        "counts": {
            "fix": counts["fix"],
            "per": {str(k): v for k, v in sorted(counts["per"].items())},
            "sper": counts["sper"],
        },
        "orbits": [
            {
                "period": o.n,
                "xs": [_c2l(complex(z)) for z in o.xs],
                "lambda_s": _c2l(o.lambda_s),
                "lambda_u": _c2l(o.lambda_u),
                "chi": o.chi,
                "kind": o.kind,
                "residual": o.residual,
                "certified": o.certified,
                "radius": o.certificate_radius,
            }
            for o in spec.orbits
        ],
    }


def spectrum_to_json(spec: PeriodSpectrum) -> str:
    return json.dumps(spectrum_to_dict(spec), indent=1)


def spectrum_from_dict(data: dict) -> PeriodSpectrum:
    m = HenonMap.from_spec(data["map"])
    orbits = []
    for od in data["orbits"]:
        orbits.append(
            PeriodicOrbit(
                n=od["period"],
                xs=np.array([complex(re, im) for re, im in od["xs"]]),
                lambda_s=complex(od["lambda_s"][0], od["lambda_s"][1]),
                lambda_u=complex(od["lambda_u"][0], od["lambda_u"][1]),
                chi=od["chi"],
                kind=od["kind"],
                residual=od["residual"],
                certified=od["certified"],
                certificate_radius=od["radius"],
            )
        )
    return PeriodSpectrum(map=m, n=data["n"], orbits=orbits, complete=data["complete"])


def spectrum_from_file(path) -> PeriodSpectrum:
    with open(path, "r", encoding="utf-8") as fh:
        return spectrum_from_dict(json.load(fh))
