"""Command-line front end: reproducible enumeration, measure, Lyapunov and
scan experiments with content-addressed caching.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import sys

import numpy as np

from .maps import HenonMap
from .measures import DEFAULT_RESOLUTION, discrepancy, empirical_measure, moment_orders, moments
from .exponents import lambda_estimate
from .orbits import (
    DEFAULT_RNG_SEED,
    Tolerances,
    classify,
    enumerate_fix,
    spectrum_from_file,
    spectrum_to_dict,
    spectrum_to_json,
    PeriodSpectrum,
)
from .scan import (
    FamilySpec,
    harmonic_validation_field,
    scan,
    scan_to_csv,
    stencil_defect,
    stencil_noise_floor,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; the contract is 1
        raise UsageError(message)


def _tolerances(args) -> Tolerances:
    return Tolerances(
        newton=args.tol_newton,
        dedup=args.tol_dedup,
        eps_hyp=args.eps_hyp,
    )


def _add_common(p) -> None:
    p.add_argument("--seed", type=int, default=DEFAULT_RNG_SEED)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tol-newton", type=float, default=Tolerances.newton)
    p.add_argument("--tol-dedup", type=float, default=Tolerances.dedup)
    p.add_argument("--eps-hyp", type=float, default=Tolerances.eps_hyp)
    p.add_argument("--out", required=True)
    p.add_argument("--cache-dir", default=None)


def _cache_fetch(cache_dir, key_obj):
    if cache_dir is None:
        return None, None
    os.makedirs(cache_dir, exist_ok=True)
    digest = hashlib.sha256(
        json.dumps(key_obj, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
    path = os.path.join(cache_dir, digest)
    if os.path.exists(path):
        with open(path, "rb") as fh:
            return path, fh.read()
    return path, None


def _write_out(out_path: str, payload: str, cache_path: str | None) -> None:
    data = payload.encode()
    if cache_path is not None and not os.path.exists(cache_path):
        with open(cache_path, "wb") as fh:
            fh.write(data)
    with open(out_path, "wb") as fh:
        fh.write(data)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_enumerate(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be a positive integer")
    m = HenonMap.from_file(args.map)
    tols = _tolerances(args)
    key = {
        "cmd": "enumerate",
        "map": m.to_spec(),
        "n": args.n,
        "budget": args.budget,
        "seed": args.seed,
        "tols": tols.key(),
    }
    cache_path, hit = _cache_fetch(args.cache_dir, key)
    if hit is not None:
        with open(args.out, "wb") as fh:
            fh.write(hit)
        return 0
    spec = enumerate_fix(m, args.n, budget=args.budget, rng_seed=args.seed,
                         workers=args.workers, tols=tols)
    _write_out(args.out, spectrum_to_json(spec) + "\n", cache_path)
    return 0


def cmd_classify(args) -> int:
    spec = spectrum_from_file(args.spectrum)
    tols = _tolerances(args)
    orbits = [classify(spec.map, o.xs, tols) for o in spec.orbits]
    refreshed = PeriodSpectrum(map=spec.map, n=spec.n, orbits=orbits, complete=spec.complete)
    _write_out(args.out, spectrum_to_json(refreshed) + "\n", None)
    return 0


def _load_spectra(paths) -> list:
    specs = [spectrum_from_file(p) for p in paths]
    base = specs[0].map.to_spec()
    for s in specs[1:]:
        if s.map.to_spec() != base:
            raise ValueError("spectrum files refer to different maps")
    return specs


def cmd_measure(args) -> int:
    specs = _load_spectra(args.spectra)
    specs.sort(key=lambda s: s.n)
    ref = specs[-1]
    ref_measure = empirical_measure(ref, args.which)
    ref_moments = moments(ref_measure, args.moment_order) if args.moment_order else None
    buf = io.StringIO()
    header = "n1,n2,resolution,complete,discrepancy"
    if ref_moments is not None:
        header += "," + ",".join(f"moment_gap_{j}_{k}" for j, k in moment_orders(args.moment_order))
    buf.write(header + "\n")
    for s in specs:
        mu = empirical_measure(s, args.which)
        disc = discrepancy(mu, ref_measure, args.resolution)
        row = f"{s.n},{ref.n},{args.resolution!r},{int(s.complete)},{disc!r}"
        if ref_moments is not None:
            mom = moments(mu, args.moment_order)
            gaps = [abs(mom[o] - ref_moments[o]) for o in moment_orders(args.moment_order)]
            row += "," + ",".join(repr(g) for g in gaps)
        buf.write(row + "\n")
    _write_out(args.out, buf.getvalue(), None)
    return 0


def cmd_lyapunov(args) -> int:
    specs = _load_spectra(args.spectra)
    specs.sort(key=lambda s: s.n)
    which_list = [w.strip() for w in args.which.split(",") if w.strip()]
    buf = io.StringIO()
    buf.write("n,which,point_count,lambda_n,chi_sum_form,psi_sum_form,agreement_gap\n")
    for s in specs:
        for which in which_list:
            est = lambda_estimate(s, which)
            if est.point_count == 0:
                buf.write(f"{s.n},{which},0,,,,\n")
            else:
                buf.write(
                    f"{s.n},{which},{est.point_count},{est.lambda_n!r},"
                    f"{est.chi_sum_form!r},{est.psi_sum_form!r},{est.agreement_gap!r}\n"
                )
    _write_out(args.out, buf.getvalue(), None)
    return 0


def cmd_scan(args) -> int:
    with open(args.family, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        family = FamilySpec.from_spec(raw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.validate_stencil:
        v = harmonic_validation_field(family)
        defect = stencil_defect(v, family.step, family.disk_mask())
        worst = float(np.nanmax(defect)) if np.isfinite(defect).any() else 0.0
        floor = stencil_noise_floor(family)
        payload = (
            "check,value\n"
            f"max_defect_on_harmonic_field,{worst!r}\n"
            f"stencil_noise_floor,{floor!r}\n"
        )
        _write_out(args.out, payload, None)
        return 0
    if args.n < 1:
        raise UsageError("--n must be a positive integer")
    tols = _tolerances(args)
    key = {
        "cmd": "scan",
        "family": family.to_spec(),
        "n": args.n,
        "budget_factor": args.budget_factor,
        "seed": args.seed,
        "tols": tols.key(),
    }
    cache_path, hit = _cache_fetch(args.cache_dir, key)
    if hit is not None:
        with open(args.out, "wb") as fh:
            fh.write(hit)
        return 0
    fld = scan(family, args.n, budget_factor=args.budget_factor,
               rng_seed=args.seed, workers=args.workers, tols=tols)
    _write_out(args.out, scan_to_csv(fld), cache_path)
    return 0


def cmd_report(args) -> int:
    lines = ["file,bytes"]
    if args.cache_dir and os.path.isdir(args.cache_dir):
        for name in sorted(os.listdir(args.cache_dir)):
            path = os.path.join(args.cache_dir, name)
            lines.append(f"{name},{os.path.getsize(path)}")
    _write_out(args.out, "\n".join(lines) + "\n", None)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    p = _Parser(prog="henonlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("enumerate", help="enumerate and certify Fix_n")
    pe.add_argument("--map", required=True)
    pe.add_argument("--n", type=int, required=True)
    _add_common(pe)
    pe.set_defaults(func=cmd_enumerate)

    pc = sub.add_parser("classify", help="re-derive classifications from a spectrum")
    pc.add_argument("--spectrum", required=True)
    _add_common(pc)
    pc.set_defaults(func=cmd_classify)

    pm = sub.add_parser("measure", help="empirical-measure convergence table")
    pm.add_argument("--spectra", nargs="+", required=True)
    pm.add_argument("--which", default="fix", choices=["fix", "per", "sper"])
    pm.add_argument("--resolution", type=float, default=DEFAULT_RESOLUTION)
    pm.add_argument("--moment-order", type=int, default=0)
    _add_common(pm)
    pm.set_defaults(func=cmd_measure)

    pl = sub.add_parser("lyapunov", help="finite-n Lyapunov estimates")
    pl.add_argument("--spectra", nargs="+", required=True)
    pl.add_argument("--which", default="fix,sper")
    _add_common(pl)
    pl.set_defaults(func=cmd_lyapunov)

    ps = sub.add_parser("scan", help="parameter-disk Lyapunov/sink scan")
    ps.add_argument("--family", required=True)
    ps.add_argument("--n", type=int, default=6)
    ps.add_argument("--budget-factor", type=int, default=400)
    ps.add_argument("--validate-stencil", action="store_true")
    _add_common(ps)
    ps.set_defaults(func=cmd_scan)

    pr = sub.add_parser("report", help="summarize cached runs")
    pr.add_argument("--cache-dir", default=None)
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=cmd_report)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, json.JSONDecodeError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
