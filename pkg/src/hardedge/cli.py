"""Command-line front end. Every command emits CSV payloads whose bytes
depend only on the resolved configuration (and seed), plus a JSON sidecar
carrying the config hash, package version and a timestamp.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .approximant import (approximant_distance, approximant_norm,
                          cross_overlap, edge_params, edge_riemann_sum,
                          in_edge_regime, level_radius, wall_hitting_time)
from .config import (RunConfig, build_grid, config_hash, load_config_file,
                     make_family, resolve_config)
from .errors import (ConfigError, DomainError, InsufficientSupport, NoBracket,
                     NonMonotoneError, ToleranceNotMet)
from .orthopoly import cached_kernel_table, weighted_monomial_sq
from .sampler import (chi_square_agreement, empirical_profile, init_chain,
                      kernel_bin_masses, load_checkpoint, save_checkpoint)
from .scaling import (convergence_study, limit_profile, rescaled_approx_profile,
                      rescaled_profile, rescaled_truncated_profile)
from .special import free_boundary_profile, hard_edge_profile
from .verify import run_verification


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_meta(path: Path, cfg: RunConfig, command: str, payloads) -> None:
    digests = {}
    for p in payloads:
        digests[p.name] = hashlib.sha256(p.read_bytes()).hexdigest()
    meta = {
        "version": __version__,
        "command": command,
        "config_hash": config_hash(cfg),
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "payload_sha256": digests,
    }
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _single_n(cfg: RunConfig) -> int:
    if isinstance(cfg.n, (list, tuple)):
        raise ConfigError("this command needs a single n, got a list")
    return int(cfg.n)


def cmd_hfun(cfg: RunConfig, args) -> int:
    grid = build_grid(cfg.grid)
    free = free_boundary_profile(grid)
    hard = hard_edge_profile(grid, cfg.quadrature)
    out = _out_dir(cfg)
    payload = out / "hfun.csv"
    _write_csv(payload, ["x", "free_boundary", "hard_edge"],
               zip(grid, free, hard))
    _write_meta(out / "hfun.meta.json", cfg, "hfun", [payload])
    print(f"wrote {payload} ({len(grid)} rows)")
    return 0


def cmd_profile(cfg: RunConfig, args) -> int:
    n = _single_n(cfg)
    fam = make_family(cfg)
    out = _out_dir(cfg)
    tab = cached_kernel_table(fam, n, cfg.quadrature, out / "cache", cfg.threads)
    grid = build_grid(cfg.grid)
    exact = rescaled_profile(tab, fam, grid)
    trunc = rescaled_truncated_profile(tab, fam, grid)
    approx = rescaled_approx_profile(fam, n, grid)
    limit = limit_profile(grid, cfg.quadrature)
    payload = out / "profile.csv"
    _write_csv(payload, ["x", "exact", "truncated", "approx", "limit"],
               zip(grid, exact.values, trunc.values, approx.values, limit.values))
    payloads = [payload]

    degrees = cfg.options.get("profile", {}).get("degrees")
    if degrees:
        degrees = [int(d) for d in degrees]
        bad = [d for d in degrees if not 0 <= d < n]
        if bad:
            raise ConfigError(f"degrees {bad} outside 0..{n - 1}")
        radii = np.linspace(0.0, fam.unit_radius, 401)
        cols = [weighted_monomial_sq(tab, d, radii) for d in degrees]
        mono = out / "monomials.csv"
        _write_csv(mono, ["r"] + [f"deg{d}" for d in degrees],
                   zip(radii, *cols))
        payloads.append(mono)
    _write_meta(out / "profile.meta.json", cfg, "profile", payloads)
    print(f"wrote {', '.join(str(p) for p in payloads)}")
    return 0


def cmd_quasi(cfg: RunConfig, args) -> int:
    n = _single_n(cfg)
    fam = make_family(cfg)
    out = _out_dir(cfg)
    tab = cached_kernel_table(fam, n, cfg.quadrature, out / "cache", cfg.threads)
    opts = cfg.options.get("quasi", {})
    degrees = opts.get("degrees")
    if degrees is None:
        root = math.sqrt(n)
        degrees = sorted({n - max(1, int(round(s * root))) for s in (0.5, 1.0, 1.5)})
    degrees = [int(d) for d in degrees]
    bad = [d for d in degrees if not in_edge_regime(n, d)]
    if bad:
        raise ConfigError(f"degrees {bad} outside the edge regime for n={n}")
    rows = []
    for j in degrees:
        p = edge_params(fam, j, n)
        rows.append((
            j, p.tau, p.deficit, p.edge_scale, p.inside_mass, p.stop_time,
            level_radius(fam, p.tau, p.stop_time),
            approximant_norm(fam, p, cfg.quadrature),
            approximant_distance(tab, fam, p, cfg.quadrature),
            cross_overlap(tab, fam, p, j),
        ))
    payload = out / "quasi.csv"
    _write_csv(payload,
               ["degree", "tau", "deficit", "edge_scale", "inside_mass",
                "stop_time", "stop_radius", "norm", "distance", "overlap"],
               rows)
    _write_meta(out / "quasi.meta.json", cfg, "quasi", [payload])
    print(f"wrote {payload} ({len(rows)} degrees)")
    return 0


def cmd_verify(cfg: RunConfig, args) -> int:
    report = run_verification(cfg)
    out = _out_dir(cfg)
    path = out / "verify_report.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    for chk in report["checks"]:
        flag = "PASS" if chk["passed"] else "FAIL"
        print(f"{flag} {chk['check']}: value {chk['value']:.3e} vs bound {chk['bound']:.3e}")
    print(f"report written to {path}")
    return 0 if report["all_pass"] else 1


def cmd_converge(cfg: RunConfig, args) -> int:
    fam = make_family(cfg)
    out = _out_dir(cfg)
    opts = cfg.options.get("converge", {})
    if isinstance(cfg.n, (list, tuple)):
        default_ns = [int(v) for v in cfg.n]
    else:
        default_ns = [64, 256]
    n_values = [int(v) for v in opts.get("n_values", default_ns)]
    window = tuple(float(v) for v in opts.get("window", (-3.0, -0.5)))
    grid_step = float(opts.get("grid_step", 0.05))
    report = convergence_study(fam, n_values, window, grid_step,
                               cfg.quadrature, out / "cache", cfg.threads)
    payload = out / "converge.csv"
    _write_csv(payload, ["n", "sup_error"], zip(report.n_values, report.sup_errors))
    doc = report.to_dict()
    doc.update({
        "version": __version__,
        "config_hash": config_hash(cfg),
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "potential": fam.potential.name,
    })
    (out / "converge.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"sup errors {[f'{e:.3e}' for e in report.sup_errors]}, "
          f"fitted rate {report.rate_estimate:.3f}")
    return 0


def cmd_sample(cfg: RunConfig, args) -> int:
    n = _single_n(cfg)
    fam = make_family(cfg)
    out = _out_dir(cfg)
    opts = cfg.options.get("sample", {})
    sweeps = int(opts.get("sweeps", 4000))
    burn_in = int(opts.get("burn_in", 1000))
    thin = int(opts.get("thin", 2))
    bins = int(opts.get("bins", 24))
    quantile = float(opts.get("quantile", 0.99))
    min_expected = float(opts.get("min_expected", 100.0))
    resume = opts.get("resume")

    if resume:
        chain = load_checkpoint(resume)
        if chain.n != n:
            raise ConfigError(f"checkpoint holds n={chain.n}, config says n={n}")
        if np.any(np.abs(chain.positions) > fam.unit_radius):
            raise ConfigError("checkpoint positions lie outside the droplet")
    else:
        chain = init_chain(fam, n, cfg.seed)

    hist = empirical_profile(chain, fam, bins, sweeps, burn_in, thin)
    tab = cached_kernel_table(fam, n, cfg.quadrature, out / "cache", cfg.threads)
    masses = kernel_bin_masses(tab, hist.bin_edges, cfg.quadrature)
    summary = chi_square_agreement(hist, masses, quantile, min_expected)

    payload = out / "histogram.csv"
    _write_csv(payload, ["bin_lo", "bin_hi", "count", "intensity"],
               zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts,
                   hist.intensity))
    ckpt = out / "sample.ckpt"
    save_checkpoint(chain, ckpt)
    doc = {
        "version": __version__,
        "config_hash": config_hash(cfg),
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "n": n,
        "sweeps_done": chain.sweeps_done,
        "retained": hist.sweeps,
        "accept_rate": chain.accept_rate,
        "step_scale": chain.step_scale,
        "chi2": {
            "statistic": summary.statistic,
            "threshold": summary.threshold,
            "dof": summary.dof,
            "quantile": summary.quantile,
            "bins_used": summary.bins_used,
            "passed": summary.passed,
        },
    }
    (out / "sample.meta.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote {payload} and {ckpt}; accept rate {chain.accept_rate:.3f}, "
          f"chi2 {summary.statistic:.1f} vs {summary.threshold:.1f} "
          f"({'ok' if summary.passed else 'FAIL'})")
    return 0 if summary.passed else 3


_COMMANDS = {
    "hfun": cmd_hfun,
    "profile": cmd_profile,
    "quasi": cmd_quasi,
    "verify": cmd_verify,
    "sample": cmd_sample,
    "converge": cmd_converge,
}


def _int_list(text: str):
    return [int(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML configuration file")
    common.add_argument("--out", help="output directory (default runs)")
    common.add_argument("--threads", type=int, help="worker threads for table builds")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--n", type=int, help="ensemble size")
    common.add_argument("--lo", type=float, help="grid lower end")
    common.add_argument("--hi", type=float, help="grid upper end")
    common.add_argument("--step", type=float, help="grid step")

    parser = argparse.ArgumentParser(
        prog="hardedge",
        description="wall-confined ensemble kernels, edge approximants and profiles",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("hfun", parents=[common],
                   help="tabulate the free and wall edge profiles")
    p_profile = sub.add_parser("profile", parents=[common],
                               help="rescaled intensity profiles for one n")
    p_profile.add_argument("--degrees", type=_int_list,
                           help="comma list of degrees for per-degree profiles")
    p_quasi = sub.add_parser("quasi", parents=[common],
                             help="edge approximant diagnostics for one n")
    p_quasi.add_argument("--degrees", type=_int_list,
                         help="comma list of edge degrees")
    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p_sample = sub.add_parser("sample", parents=[common],
                              help="Metropolis sampling against the kernel")
    p_sample.add_argument("--sweeps", type=int)
    p_sample.add_argument("--burn-in", type=int, dest="burn_in")
    p_sample.add_argument("--thin", type=int)
    p_sample.add_argument("--bins", type=int)
    p_sample.add_argument("--resume", help="checkpoint file to continue from")
    p_conv = sub.add_parser("converge", parents=[common],
                            help="sup-error sweep against the limit profile")
    p_conv.add_argument("--n-values", type=_int_list, dest="n_values")
    p_conv.add_argument("--window", type=str,
                        help="comma pair lo,hi in rescaled coordinates")
    p_conv.add_argument("--grid-step", type=float, dest="grid_step")
    return parser


def _overrides_from_args(args) -> dict:
    over: dict = {}
    for key in ("out", "threads", "seed", "n"):
        val = getattr(args, key, None)
        if val is not None:
            over[key] = val
    grid = {k: getattr(args, k) for k in ("lo", "hi", "step")
            if getattr(args, k, None) is not None}
    if grid:
        over["grid"] = grid
    if getattr(args, "degrees", None) is not None:
        section = "profile" if args.command == "profile" else "quasi"
        over[section] = {"degrees": args.degrees}
    sample = {k: getattr(args, k) for k in ("sweeps", "burn_in", "thin", "bins", "resume")
              if getattr(args, k, None) is not None}
    if sample:
        over["sample"] = sample
    conv = {}
    if getattr(args, "n_values", None) is not None:
        conv["n_values"] = args.n_values
    if getattr(args, "window", None) is not None:
        parts = [float(v) for v in args.window.split(",")]
        if len(parts) != 2:
            raise ConfigError("window must be lo,hi")
        conv["window"] = parts
    if getattr(args, "grid_step", None) is not None:
        conv["grid_step"] = args.grid_step
    if conv:
        over["converge"] = conv
    return over


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_values = load_config_file(args.config) if args.config else {}
        cfg = resolve_config(file_values, _overrides_from_args(args))
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ToleranceNotMet as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return 3
    except NonMonotoneError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except (DomainError, NoBracket, InsufficientSupport) as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
