"""Command line interface.

Subcommands: generate, realize, validate, reconstruct, perturb, denoise,
angles, plotdata.  Exit codes are a stable contract: 0 success (or verdict
Valid), 1 Invalid/Degenerate verdict or reconstruction failure, 2 usage or
I/O error, 3 internal retry exhaustion.

A JSON config file with default tolerances and optimizer options can be
pointed to by the COMMONLINES_CONFIG environment variable; explicit flags
take precedence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .denoise import NoiseSpec, ProjectionOptions, perturb, project_to_cn
from .errors import CommonLinesError, InitializationFailed, NotGeneric
from .geometry import random_frameset
from .io import DatasetFormatError, load_frames, load_lines, save_frames, save_lines
from .lines import realize_all, triple_angles
from .reconstruct import reconstruct_all
from .validity import Tolerances, is_valid

CONFIG_ENV = "COMMONLINES_CONFIG"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_RETRY = 3


@dataclass(frozen=True)
class RunConfig:
    eq_tol: float = 1e-8
    ineq_margin: float = 1e-10
    max_iters: int = 200
    seed: int = 0
    base_triple: str = "first"

    def __post_init__(self):
        if self.eq_tol <= 0 or self.ineq_margin <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be non-negative")


def load_run_config(path=None):
    """Config from an explicit path or the COMMONLINES_CONFIG env var."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    try:
        with open(path) as fh:
            raw = json.load(fh)
        allowed = {f for f in RunConfig.__dataclass_fields__}
        return RunConfig(**{k: v for k, v in raw.items() if k in allowed})
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        raise DatasetFormatError(f"bad config file {path}: {exc}") from exc


def _add_tol_flags(parser):
    parser.add_argument("--tol-eq", type=float, default=None,
                        help="equality residual tolerance")
    parser.add_argument("--tol-ineq", type=float, default=None,
                        help="strictness margin for triangle inequalities")


def _tolerances(args, config):
    return Tolerances(
        eq_tol=args.tol_eq if args.tol_eq is not None else config.eq_tol,
        ineq_margin=args.tol_ineq if args.tol_ineq is not None else config.ineq_margin,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="commonlines",
        description="Model, certify, reconstruct, and denoise cryo-EM "
        "common-lines data.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", default=None,
                        help=f"config JSON path (default: ${CONFIG_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a generic frame set")
    p.add_argument("n", type=int)
    p.add_argument("out", help="output frames dataset path")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("realize", help="common lines realized by frames")
    p.add_argument("frames", help="input frames dataset")
    p.add_argument("out", help="output common-lines dataset path")

    p = sub.add_parser("validate", help="certify membership in the valid set")
    p.add_argument("lines", help="input common-lines dataset")
    _add_tol_flags(p)

    p = sub.add_parser("reconstruct", help="recover realizing frames")
    p.add_argument("lines", help="input common-lines dataset")
    p.add_argument("out", help="output frames dataset path")
    _add_tol_flags(p)
    p.add_argument("--base-triple", choices=["first", "best"], default=None)

    p = sub.add_parser("perturb", help="add seeded noise to common lines")
    p.add_argument("lines")
    p.add_argument("out")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("denoise", help="project noisy data onto the valid set")
    p.add_argument("lines")
    p.add_argument("out")
    _add_tol_flags(p)
    p.add_argument("--max-iters", type=int, default=None)

    p = sub.add_parser("angles", help="print the angles of one triple")
    p.add_argument("lines")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)

    p = sub.add_parser("plotdata", help="emit certificate table for plotting")
    p.add_argument("lines")
    _add_tol_flags(p)
    return parser


def _metadata(**extra):
    meta = {"tool": "commonlines", "version": __version__}
    meta.update({k: v for k, v in extra.items() if v is not None})
    return meta


def _report_json(report, limit=10):
    return {
        "verdict": report.verdict,
        "n": report.n,
        "counts": {
            "norm_checks": len(report.norm_checks),
            "triangle_certificates": len(report.triangle_certificates),
            "loc_certificates": len(report.loc_certificates),
        },
        "tolerances": {
            "eq_tol": report.tolerances.eq_tol,
            "ineq_margin": report.tolerances.ineq_margin,
        },
        "worst_offenders": [
            {"kind": kind, "indices": indices, "value": value}
            for kind, indices, value in report.worst_offenders[:limit]
        ],
    }


def _cmd_generate(args, config):
    if args.n < 3:
        raise DatasetFormatError("generate requires n >= 3")
    seed = args.seed if args.seed is not None else config.seed
    try:
        frames = random_frameset(args.n, np.random.default_rng(seed))
    except NotGeneric as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RETRY
    save_frames(args.out, frames, _metadata(seed=seed, n=args.n))
    return EXIT_OK


def _cmd_realize(args, config):
    frames = load_frames(args.frames)
    data = realize_all(frames)
    save_lines(args.out, data, _metadata(source=args.frames))
    return EXIT_OK


def _cmd_validate(args, config):
    data = load_lines(args.lines)
    report = is_valid(data, _tolerances(args, config))
    print(json.dumps(_report_json(report), indent=2))
    return EXIT_OK if report.ok else EXIT_INVALID


def _cmd_reconstruct(args, config):
    data = load_lines(args.lines)
    base = args.base_triple or config.base_triple
    try:
        result = reconstruct_all(data, _tolerances(args, config), base_triple=base)
    except CommonLinesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    save_frames(args.out, result.frames, _metadata(source=args.lines))
    print(json.dumps({
        "max_residual": result.max_residual,
        "base_triple": list(result.base_indices),
    }, indent=2))
    return EXIT_OK


def _cmd_perturb(args, config):
    data = load_lines(args.lines)
    seed = args.seed if args.seed is not None else config.seed
    noisy = perturb(data, NoiseSpec(sigma=args.sigma, seed=seed))
    save_lines(args.out, noisy, _metadata(source=args.lines, sigma=args.sigma, seed=seed))
    return EXIT_OK


def _cmd_denoise(args, config):
    data = load_lines(args.lines)
    tol = _tolerances(args, config)
    opts = ProjectionOptions(
        max_iters=args.max_iters if args.max_iters is not None else config.max_iters,
        ineq_margin=tol.ineq_margin,
    )
    try:
        result = project_to_cn(data, opts)
    except InitializationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    save_lines(args.out, result.projected, _metadata(source=args.lines))
    print(json.dumps({
        "objective": result.objective,
        "iterations": result.iterations,
        "converged": result.converged,
    }, indent=2))
    return EXIT_OK


def _cmd_angles(args, config):
    data = load_lines(args.lines)
    angles = triple_angles(data, args.i, args.j, args.k)
    print(json.dumps({
        "triple": list(angles.indices),
        "alpha": angles.alpha,
        "beta": angles.beta,
        "gamma": angles.gamma,
    }, indent=2))
    return EXIT_OK


def _cmd_plotdata(args, config):
    data = load_lines(args.lines)
    report = is_valid(data, _tolerances(args, config))
    print("record,i,j,k,m,value,passes")
    for i, j, residual in report.norm_checks:
        ok = residual <= report.tolerances.eq_tol
        print(f"norm,{i},{j},,,{residual!r},{int(ok)}")
    for cert in report.triangle_certificates:
        i, j, k = cert.indices
        print(f"triangle,{i},{j},{k},,{cert.gram_value!r},{int(cert.passes)}")
    for cert in report.loc_certificates:
        (i, j, k), (_, _, m) = cert.indices
        kind = "loc_degenerate" if cert.degenerate else "loc"
        print(f"{kind},{i},{j},{k},{m},{cert.residual_signed!r},{int(cert.passes)}")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "realize": _cmd_realize,
    "validate": _cmd_validate,
    "reconstruct": _cmd_reconstruct,
    "perturb": _cmd_perturb,
    "denoise": _cmd_denoise,
    "angles": _cmd_angles,
    "plotdata": _cmd_plotdata,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_run_config(args.config)
        return _COMMANDS[args.command](args, config)
    except (DatasetFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CommonLinesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
