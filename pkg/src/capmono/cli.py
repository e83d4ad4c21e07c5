"""Command-line front end: generate sampled surfaces, run energy reports,
sweep monotonicity profiles, and run the identity suite.

Exit codes: 0 on success, 1 on a numeric tolerance failure, 2 on a usage,
configuration or geometry error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import ball, energy, halfspace, tables
from .errors import CapmonoError, ConfigError
from .fields import position_field
from .surfaces import (
    SampledSurface,
    geodesic_disk_ball,
    perturb_chart,
    sample_chart,
    spherical_cap_ball,
    spherical_cap_halfspace,
)
from .tables import RunConfig
from .wetted import WettedRegion, curve_from_boundary, wetted_region

_G = "%.12g"

GENERATORS = ("cap", "flat-disk-ball", "cap-ball")


def build_chart(cfg: RunConfig):
    if cfg.generator == "cap":
        chart = spherical_cap_halfspace(cfg.theta, cfg.radius, (cfg.center_x, cfg.center_y))
    elif cfg.generator == "flat-disk-ball":
        chart = geodesic_disk_ball(cfg.theta)
    elif cfg.generator == "cap-ball":
        chart = spherical_cap_ball(cfg.theta, cfg.colatitude)
    else:
        raise ConfigError(
            f"unknown generator {cfg.generator!r}; expected one of {', '.join(GENERATORS)}"
        )
    if cfg.amplitude != 0.0:
        chart = perturb_chart(chart, cfg.amplitude, cfg.mode)
    return chart


def build_surface(cfg: RunConfig) -> SampledSurface:
    return sample_chart(build_chart(cfg), cfg.nu, cfg.nv)


def region_for(cfg: RunConfig, surface: SampledSurface) -> WettedRegion:
    return wetted_region(surface, grid_n=cfg.plane_grid, sphere_level=cfg.sphere_level)


def _surface_paths(out: Path):
    return out / "surface.tsv", out / "boundary.tsv", out / "curve.tsv"


def cmd_generate(cfg: RunConfig, out: Path) -> int:
    chart = build_chart(cfg)
    surface = sample_chart(chart, cfg.nu, cfg.nv)
    coarse = sample_chart(chart, max(cfg.nu // 2, 8), max(cfg.nv // 2, 8))
    out.mkdir(parents=True, exist_ok=True)
    spath, bpath, cpath = _surface_paths(out)
    tables.save_surface(surface, spath)
    tables.save_boundary(surface, bpath)
    tables.save_curve(curve_from_boundary(surface), cpath)
    area, carea = surface.area(), coarse.area()
    print(f"generator {cfg.generator}: {len(surface.points)} interior samples")
    print(f"area {_G % area} (halved resolution: {_G % carea}, delta {_G % abs(area - carea)})")
    print(f"boundary length {_G % surface.boundary_length()}")
    print(f"contact residual {_G % surface.metadata['contact_residual']}")
    print(f"wrote {spath}, {bpath}, {cpath}")
    return 0


def _load_surface(cfg: RunConfig, out: Path) -> SampledSurface:
    spath, bpath, _ = _surface_paths(out)
    if not spath.exists() or not bpath.exists():
        raise ConfigError(f"no surface tables under {out}; run 'generate' first")
    return tables.load_surface(spath, bpath)


def cmd_energy(cfg: RunConfig, out: Path) -> int:
    surface = _load_surface(cfg, out)
    region = region_for(cfg, surface)
    boundary_point = surface.boundary_points[0] if len(surface.boundary_points) else None
    report = energy.energy_report(surface, region, boundary_point=boundary_point)
    path = out / "energy.json"
    tables.report_json(report, path)
    for key, value in sorted(report.to_dict().items()):
        if isinstance(value, float):
            print(f"{key}: {_G % value}")
        elif isinstance(value, dict):
            for k2, v2 in sorted(value.items()):
                print(f"margins.{k2}: {_G % v2}")
    print(f"wrote {path}")
    return 0


def _default_probes(cfg: RunConfig, surface: SampledSurface):
    if cfg.probes:
        return [np.asarray(p, dtype=float) for p in cfg.probes]
    rng = np.random.default_rng(cfg.seed)
    box = 1.6 if cfg.ambient == "halfspace" else 0.8
    return [rng.uniform(-box, box, 3) for _ in range(4)]


def cmd_monotonicity(cfg: RunConfig, out: Path) -> int:
    surface = _load_surface(cfg, out)
    region = region_for(cfg, surface)
    probes = _default_probes(cfg, surface)
    grid = np.linspace(cfg.r_min, cfg.r_max, cfg.r_count)
    mono = halfspace if surface.ambient.kind == "halfspace" else ball

    def one(probe):
        return mono.monotonicity_profile(surface, region, probe, grid)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            profiles = list(pool.map(one, probes))
    else:
        profiles = [one(p) for p in probes]

    out.mkdir(parents=True, exist_ok=True)
    worst_violation = 0.0
    for i, prof in enumerate(profiles):
        tables.profile_csv(prof, out / f"profile_{i:03d}.csv")
        worst_violation = min(worst_violation, prof.min_forward_difference())
    # gate on raw two-radius residuals: at equality-case probes every
    # identity term vanishes and term-normalized ratios turn into 0/0 noise
    pairs = cfg.pairs or ((cfg.r_min, cfg.r_max),)
    worst_residual = 0.0
    for sigma, rho in pairs:
        for probe in probes:
            detail = mono.monotonicity_identity_detail(surface, region, probe, sigma, rho)
            worst_residual = max(worst_residual, abs(detail["residual"]))
    print(
        f"{len(profiles)} profiles: worst monotonicity violation {_G % worst_violation}, "
        f"worst identity residual {_G % worst_residual}"
    )
    if worst_residual > cfg.tolerance:
        print(f"FAIL: residual exceeds tolerance {_G % cfg.tolerance}")
        return 1
    print("PASS")
    return 0


def cmd_identity_suite(cfg: RunConfig, out: Path) -> int:
    surface = _load_surface(cfg, out)
    region = region_for(cfg, surface)
    tol = cfg.tolerance
    checks = []
    checks.append(("gauss-bonnet", abs(energy.gauss_bonnet_residual(surface)), tol))
    checks.append(("gauss-equation", abs(energy.gauss_equation_residual(surface)), tol))
    pairs = cfg.pairs or ((0.4, 1.5),)
    probes = _default_probes(cfg, surface)
    mono = halfspace if surface.ambient.kind == "halfspace" else ball
    worst = 0.0
    for sigma, rho in pairs:
        for probe in probes:
            d = mono.monotonicity_identity_detail(surface, region, probe, sigma, rho)
            worst = max(worst, abs(d["residual"]))
    checks.append(("two-radius-identity", worst, tol))
    if surface.ambient.kind == "ball":
        checks.append(
            ("balance-law", abs(ball.first_variation_residual(surface, region, position_field())), tol)
        )
        checks.append(("divergence-identity", energy.divergence_identity_residual(surface), tol))
        rng = np.random.default_rng(cfg.seed)
        worst_pt = 0.0
        for _ in range(200):
            u = rng.standard_normal(3)
            u /= np.linalg.norm(u)
            v = rng.standard_normal(3)
            v /= np.linalg.norm(v)
            if np.linalg.norm(u - v) < 1e-8:
                continue
            worst_pt = max(worst_pt, abs(ball.sphere_point_identity_residual(u, v)))
        checks.append(("sphere-point-identity", worst_pt, 1e-12))
    failed = 0
    for name, value, limit in checks:
        ok = value <= limit
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {_G % value} (tolerance {_G % limit})")
    return 1 if failed else 0


def cmd_report(cfg: RunConfig, out: Path) -> int:
    rc = cmd_generate(cfg, out)
    if rc:
        return rc
    return cmd_energy(cfg, out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="capmono",
        description="numerical checks of capillary-surface energies and monotonicity identities",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("generate", "energy", "monotonicity", "identity-suite", "report"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="run configuration file")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument("--threads", type=int, default=None, help="worker threads")
        p.add_argument("--tolerance", type=float, default=None, help="tolerance override")
        p.add_argument("--seed", type=int, default=None, help="seed for random probes")
    args = parser.parse_args(argv)
    try:
        cfg = tables.load_config(args.config)
        threads = args.threads
        if threads is None and os.environ.get("CAPMONO_THREADS"):
            threads = int(os.environ["CAPMONO_THREADS"])
        cfg = tables.with_overrides(
            cfg,
            out_dir=args.out,
            threads=threads,
            tolerance=args.tolerance,
            seed=args.seed,
        )
        out = Path(cfg.out_dir)
        handler = {
            "generate": cmd_generate,
            "energy": cmd_energy,
            "monotonicity": cmd_monotonicity,
            "identity-suite": cmd_identity_suite,
            "report": cmd_report,
        }[args.command]
        return handler(cfg, out)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return 2
    except CapmonoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
