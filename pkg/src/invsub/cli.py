"""Command-line front end: renewal-function curves as CSV.

One subcommand per built-in family plus ``custom`` (spec assembled from a
plain-text kernel file) and ``corr`` (correlation against a fixed s).  Every
run writes ``t,U,dU,method,n_used,est_error,converged`` rows, one per grid
point, at full binary64 precision; non-convergent points are flagged in the
``converged`` column rather than dropped, and the exit status is 0 only if
every row converged.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bromwich import BromwichConfig, invert_bromwich
from .levy import (
    GIG,
    AtomKernel,
    Custom,
    ExpTiltedPowerKernel,
    ParetoCP,
    ParetoKernel,
    PoissonDrift,
    PureDrift,
    Stable,
    StableKernel,
    TwoStableMix,
    UniformStableMix,
    make_spec,
)
from .moments import correlation
from .oracles import T_TO_INFINITY, T_TO_ZERO, asymptotic_U, exact_U
from .postwidder import invert_postwidder
from .records import RenewalEstimate

HEADER = ["t", "U", "dU", "method", "n_used", "est_error", "converged"]


@dataclass(frozen=True)
class RunConfig:
    family: object
    t_grid: tuple[float, ...]
    method: str = "auto"
    eps: float = 1e-6
    corr_s: Optional[float] = None
    overlay_asymptotics: bool = False
    out: Optional[str] = None

    def __post_init__(self):
        if not self.t_grid:
            raise ValueError("t grid must be nonempty")
        if any(t <= 0 for t in self.t_grid):
            raise ValueError("t grid values must be positive")
        if any(b <= a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise ValueError("t grid must be strictly increasing")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.method not in ("auto", "postwidder", "bromwich"):
            raise ValueError("method must be auto, postwidder or bromwich")
        if self.corr_s is not None and self.corr_s <= 0:
            raise ValueError("corr s must be positive")


def _exact_lattice_row(family, t):
    return RenewalEstimate(t=t, U=exact_U(family, t), dU=None, method="exact",
                           est_error=0.0, converged=True, n_used=0)


def _compute_row(spec, t, cfg):
    fam = spec.family
    lattice = isinstance(fam, PoissonDrift) and fam.mu == 0.0
    if cfg.method == "bromwich":
        return invert_bromwich(spec, t, BromwichConfig(eps=cfg.eps))
    if cfg.method == "postwidder":
        est = invert_postwidder(spec, t, eps=cfg.eps)
        if lattice:  # the density estimate is meaningless on a lattice measure
            est = RenewalEstimate(t=est.t, U=est.U, dU=None, method=est.method,
                                  est_error=est.est_error, converged=est.converged,
                                  n_used=est.n_used)
        return est
    # auto
    if lattice:
        return _exact_lattice_row(fam, t)
    if fam.discontinuous_renewal:
        return invert_bromwich(spec, t, BromwichConfig(eps=cfg.eps))
    est = invert_postwidder(spec, t, eps=cfg.eps)
    if not est.converged:
        alt = invert_bromwich(spec, t, BromwichConfig(eps=cfg.eps))
        if alt.converged:
            return alt
    return est


def _format(x):
    if x is None:
        return ""
    return repr(float(x))


def run(cfg: RunConfig):
    """Evaluate the grid and return (exit_status, csv_text)."""
    spec = make_spec(cfg.family)

    def one(t):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            est = _compute_row(spec, t, cfg)
            row = [
                _format(t),
                _format(est.U),
                _format(est.dU),
                est.method,
                str(est.n_used),
                _format(est.est_error),
                "true" if est.converged else "false",
            ]
            if cfg.corr_s is not None:
                row.append(_format(correlation(spec, cfg.corr_s, t, eps=cfg.eps)))
            if cfg.overlay_asymptotics:
                regime = T_TO_INFINITY if t >= 1.0 else T_TO_ZERO
                try:
                    row.append(_format(asymptotic_U(cfg.family, t, regime)))
                except ValueError:
                    row.append("")
            return est.converged, row

    header = list(HEADER)
    if cfg.corr_s is not None:
        header.append("corr")
    if cfg.overlay_asymptotics:
        header.append("U_asym")
    with ThreadPoolExecutor(max_workers=min(8, len(cfg.t_grid))) as pool:
        results = list(pool.map(one, cfg.t_grid))
    lines = [",".join(header)] + [",".join(row) for _, row in results]
    text = "\n".join(lines) + "\n"
    status = 0 if all(ok for ok, _ in results) else 1
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


# ---------------------------------------------------------------------------
# argument parsing


def _parse_t(args, parser):
    if args.t is not None and args.t_range is not None:
        parser.error("give either --t or --t-range, not both")
    if args.t is not None:
        try:
            return tuple(float(x) for x in args.t.split(","))
        except ValueError:
            parser.error(f"invalid --t list: {args.t!r}")
    if args.t_range is not None:
        parts = args.t_range.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            parser.error("--t-range must be start:stop:count[:log]")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1 or start <= 0 or stop <= start:
            parser.error("--t-range needs 0 < start < stop and count >= 1")
        if len(parts) == 4:
            grid = np.geomspace(start, stop, count)
        else:
            grid = np.linspace(start, stop, count)
        return tuple(float(x) for x in grid)
    parser.error("a time grid is required (--t or --t-range)")


def _add_common(sp):
    sp.add_argument("--t", help="comma-separated list of times")
    sp.add_argument("--t-range", dest="t_range", help="start:stop:count[:log]")
    sp.add_argument("--eps", type=float, default=1e-6, help="accuracy threshold (default 1e-6)")
    sp.add_argument("--method", choices=["auto", "postwidder", "bromwich"], default="auto")
    sp.add_argument("--overlay-asym", action="store_true", dest="overlay")
    sp.add_argument("--out", help="output CSV path (default stdout)")


def _add_family_args(sp, name):
    if name == "poisson":
        sp.add_argument("--mu", type=float, required=True)
        sp.add_argument("--r", type=float, required=True)
    elif name == "pareto":
        sp.add_argument("--a", type=float, required=True, help="tail exponent alpha")
    elif name == "stable":
        sp.add_argument("--a", type=float, required=True, help="stability index alpha")
    elif name == "sumas":
        sp.add_argument("--a1", type=float, required=True)
        sp.add_argument("--a2", type=float, required=True)
        sp.add_argument("--c1", type=float, required=True)
        sp.add_argument("--c2", type=float, required=True)
    elif name == "gig":
        sp.add_argument("--delta", type=float, required=True)
        sp.add_argument("--gamma", type=float, required=True)
        sp.add_argument("--kappa", type=float, required=True)
    elif name == "custom":
        sp.add_argument("--config", required=True, help="kernel description file")


def parse_kernel_file(path):
    """Build a Custom family from a plain-text kernel description.

    Directives, one per line ('#' comments allowed):
        drift VALUE
        atom X W
        pareto ALPHA
        stable ALPHA WEIGHT
        exp_tilted_power A B      (density x^A exp(-B x))
    """
    drift = 0.0
    kernels = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            op, *vals = line.split()
            try:
                nums = [float(v) for v in vals]
                if op == "drift" and len(nums) == 1:
                    drift = nums[0]
                elif op == "atom" and len(nums) == 2:
                    kernels.append(AtomKernel(*nums))
                elif op == "pareto" and len(nums) == 1:
                    kernels.append(ParetoKernel(nums[0]))
                elif op == "stable" and len(nums) == 2:
                    kernels.append(StableKernel(*nums))
                elif op == "exp_tilted_power" and len(nums) == 2:
                    kernels.append(ExpTiltedPowerKernel(*nums))
                else:
                    raise ValueError(f"unknown directive {line!r}")
            except ValueError as exc:
                raise ValueError(f"{path}:{ln}: {exc}") from exc
    return Custom(drift_value=drift, kernels=tuple(kernels))


def _family_from_args(name, args):
    if name == "poisson":
        return PoissonDrift(mu=args.mu, r=args.r)
    if name == "pareto":
        return ParetoCP(alpha=args.a)
    if name == "stable":
        return Stable(alpha=args.a)
    if name == "sumas":
        return TwoStableMix(alpha1=args.a1, alpha2=args.a2, c1=args.c1, c2=args.c2)
    if name == "unimix":
        return UniformStableMix()
    if name == "gig":
        return GIG(delta=args.delta, gamma=args.gamma, kappa=args.kappa)
    if name == "drift":
        return PureDrift(mu=args.mu)
    return parse_kernel_file(args.config)


_FAMILIES = ["poisson", "pareto", "sumas", "gig", "stable", "unimix", "custom", "drift"]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="invsub",
        description="Mean first-passage times U(t), densities U'(t) and "
                    "correlations of inverse Levy subordinators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _FAMILIES:
        sp = sub.add_parser(name, help=f"{name} subordinator family")
        if name == "drift":
            sp.add_argument("--mu", type=float, required=True)
        else:
            _add_family_args(sp, name)
        _add_common(sp)
    spc = sub.add_parser("corr", help="correlation corr(E(s), E(t)) with s fixed")
    spc.add_argument("family", choices=_FAMILIES)
    spc.add_argument("--s", type=float, required=True, help="fixed first time")
    spc.add_argument("--mu", type=float)
    spc.add_argument("--r", type=float)
    spc.add_argument("--a", type=float)
    spc.add_argument("--a1", type=float)
    spc.add_argument("--a2", type=float)
    spc.add_argument("--c1", type=float)
    spc.add_argument("--c2", type=float)
    spc.add_argument("--delta", type=float)
    spc.add_argument("--gamma", type=float)
    spc.add_argument("--kappa", type=float)
    spc.add_argument("--config")
    _add_common(spc)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "corr":
            family = _family_from_args(args.family, args)
            corr_s = args.s
        else:
            family = _family_from_args(args.command, args)
            corr_s = None
        cfg = RunConfig(
            family=family,
            t_grid=_parse_t(args, parser),
            method=args.method,
            eps=args.eps,
            corr_s=corr_s,
            overlay_asymptotics=args.overlay,
            out=args.out,
        )
        return run(cfg)
    except (ValueError, TypeError) as exc:
        parser.exit(2, f"invsub: error: {exc}\n")
    except OSError as exc:
        parser.exit(3, f"invsub: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
