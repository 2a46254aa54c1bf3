"""Command-line entry point: validate | cycles | spectrum | verify | render
| simulate, all driven by a single JSON config."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .config import ConfigError, RunConfig
from .dynamics import build_catalog, catalog_to_dict
from .errors import IfsSpectraError
from .lattice import is_expansive
from .measure import FourierEvaluator, quadrature_check
from .render import render_attractor, write_png, write_ppm
from .spectrum import (
    assemble_spectrum,
    lambda_of_cycle,
    lambda_of_line_set,
    product_spectrum,
    spectrum_to_dict,
    write_spectrum_csv,
    write_spectrum_json,
)
from .triple import factor_along
from .verify import run_verification

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_IO = 3


def _emit(payload: dict, out_dir: str, name: str) -> None:
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path}")


def cmd_validate(cfg: RunConfig, out_dir: str) -> int:
    T = cfg.triple()
    exp = is_expansive(T.R)
    val = T.validate()
    quad = quadrature_check(T, samples=1000, seed=cfg.seed)
    report = {
        "effective_config": cfg.effective(),
        "expansive": bool(exp),
        "expansiveness_certificate_k": exp.certificate_k,
        "hadamard": bool(val),
        "unitarity_residual": val.unitarity_residual,
        "witness_pair": [list(p) for p in val.witness_pair] if val.witness_pair else None,
        "quadrature_deviation": quad,
        "passed": bool(exp) and bool(val) and quad < 1e-12,
    }
    _emit(report, out_dir, "validate.json")
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_cycles(cfg: RunConfig, out_dir: str) -> int:
    T = cfg.triple()
    catalog = build_catalog(T)
    payload = catalog_to_dict(catalog)
    payload["effective_config"] = cfg.effective()
    _emit(payload, out_dir, "catalog.json")
    return EXIT_OK if catalog.disjoint else EXIT_FAIL


def cmd_spectrum(cfg: RunConfig, out_dir: str) -> int:
    T = cfg.triple()
    catalog = build_catalog(T)
    spec = assemble_spectrum(T, cfg.horizon, catalog)
    write_spectrum_json(spec, os.path.join(out_dir, "spectrum.json"))
    write_spectrum_csv(spec, os.path.join(out_dir, "spectrum.csv"))
    print(f"wrote {os.path.join(out_dir, 'spectrum.json')} ({len(spec)} elements)")
    summary = {"direct_count": len(spec), "product_count": None, "spectra_differ": None}
    if T.dim == 2 and catalog.line_sets:
        ls = catalog.line_sets[0]
        from .triple import conjugate

        try:
            F = factor_along(conjugate(T, ls.conjugation), 1)
            if F.eta_constant:
                prod = product_spectrum(F, cfg.horizon)
                write_spectrum_json(prod, os.path.join(out_dir, "spectrum_product.json"))
                write_spectrum_csv(prod, os.path.join(out_dir, "spectrum_product.csv"))
                summary["product_count"] = len(prod)
                summary["spectra_differ"] = set(prod.values()) != set(spec.values())
        except IfsSpectraError:
            pass
    _emit(summary, out_dir, "spectrum_summary.json")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out_dir: str) -> int:
    T = cfg.triple()
    catalog = build_catalog(T)
    spectra = {"direct": assemble_spectrum(T, cfg.horizon, catalog)}
    if T.dim == 2 and catalog.line_sets:
        from .triple import conjugate

        try:
            F = factor_along(conjugate(T, catalog.line_sets[0].conjugation), 1)
            if F.eta_constant:
                spectra["product"] = product_spectrum(F, cfg.horizon)
        except IfsSpectraError:
            pass
    E = FourierEvaluator.for_triple(T, eps=cfg.eps)
    report = run_verification(
        T, catalog, spectra, E, seed=cfg.seed, n_paths=min(cfg.paths, 20000)
    )
    report.to_json(os.path.join(out_dir, "verify.json"))
    print(f"wrote {os.path.join(out_dir, 'verify.json')} (passed={report.passed})")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_render(cfg: RunConfig, out_dir: str, which: str, png: bool) -> int:
    T = cfg.triple()
    canvas = render_attractor(
        T, which, cfg.image_points, cfg.image_width, cfg.image_height,
        window=cfg.window, seed=cfg.seed,
    )
    base = os.path.join(out_dir, f"attractor_{which.lower()}")
    write_ppm(canvas, base + ".ppm")
    print(f"wrote {base}.ppm")
    if png:
        try:
            write_png(canvas, base + ".png")
            print(f"wrote {base}.png")
        except ImportError:
            print("PNG support needs Pillow; skipped", file=sys.stderr)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, out_dir: str, start) -> int:
    from .verify import simulate_paths

    T = cfg.triple()
    catalog = build_catalog(T)
    x = np.array(start if start is not None else [0.0] * T.dim, dtype=float)
    if x.shape != (T.dim,):
        raise ConfigError(f"start point must have {T.dim} coordinates")
    table = simulate_paths(T, catalog, x, cfg.paths, cfg.steps, seed=cfg.seed)
    payload = {
        "start": [float(c) for c in x],
        "h": list(table.h),
        "sigma": list(table.sigma),
        "unclassified": table.unclassified,
        "n_paths": table.n_paths,
        "components": [f"cycle_{i}" for i in range(len(catalog.cycles))]
        + [f"line_{i}" for i in range(len(catalog.line_sets))],
    }
    _emit(payload, out_dir, "simulate.json")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifs-spectra",
        description="Spectra of invariant measures of affine iterated function systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("validate", "cycles", "spectrum", "verify", "render", "simulate"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--threads", type=int, default=None, help="worker bound")
        p.add_argument("--out", default=None, help="output directory")
        if name == "render":
            p.add_argument("--which", choices=["XB", "XL"], default="XB")
            p.add_argument("--png", action="store_true", help="also write PNG")
        if name == "simulate":
            p.add_argument("--start", type=float, nargs="+", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_json(args.config)
    except FileNotFoundError:
        print(f"config not found: {args.config}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.seed is not None:
        cfg.seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    out_dir = args.out if args.out is not None else cfg.out
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if args.command == "validate":
            return cmd_validate(cfg, out_dir)
        if args.command == "cycles":
            return cmd_cycles(cfg, out_dir)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, out_dir)
        if args.command == "verify":
            return cmd_verify(cfg, out_dir)
        if args.command == "render":
            return cmd_render(cfg, out_dir, args.which, args.png)
        if args.command == "simulate":
            return cmd_simulate(cfg, out_dir, args.start)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except IfsSpectraError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
