"""Command line front end: norm, operator, apcheck, verify and corpus."""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .grid_core import Ball, BallFamily, Grid, GridFunction, read_csv, write_csv
from .growth import (CHECK_HEADER, GROWTH_KEYS, CheckResult, ComplementaryDiverges, GrowthFunction,
                     OuterFunction, Weight, YoungFunction, growth_from_config, muckenhoupt_constant,
                     parse_kv, reverse_holder_constant)
from .intrinsic import (ConeParams, commutator_g, commutator_gstar, commutator_s, g_alpha, g_star_lambda,
                        s_alpha, s_alpha_beta)
from .norms import LuxembourgBracketError, SpaceSpec, ball_norms, space_norm
from .simplex import LPInfeasible, LPStall, LPUnbounded
from .verify import SUITE_IDS, Corpus, SuiteConfig, emit_checks, emit_report, run_suite

EXIT_OK, EXIT_NUMERICAL, EXIT_CONFIG, EXIT_HYPOTHESIS = 0, 1, 2, 3
NUMERICAL_ERRORS = (ArithmeticError, LPStall, LPInfeasible, LPUnbounded, ComplementaryDiverges,
                    LuxembourgBracketError, np.linalg.LinAlgError)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- run config

@dataclass(frozen=True)
class RunConfig:
    """Flat key = value settings shared by every subcommand."""

    grid_lo: float = -1.0
    grid_hi: float = 1.0
    grid_n: int = 129
    dim: int = 1
    growth: dict = field(default_factory=lambda: {"family": "power", "p": "2"})
    phi_small: float = 0.25
    ball_stride: int = 4
    ball_rmin_cells: float = 2.0
    ball_rmax: float | None = None
    space: str = "musielak_morrey"
    kappa: float = 0.5
    q: float = 2.0
    alpha: float = 1.0
    lam: float = 4.0
    lam_campanato: float = 6.0
    beta: float = 1.0
    mode: str = "dictionary"
    young_p0: float = 2.0
    young_p1: float = 2.0
    outer_weighted: float = -0.5
    campanato_p: float = 1.0
    ap_index: float = 1.0
    corpus: tuple[str, ...] | None = None
    out: str | None = None
    seed: int = 0

    # config-file key -> (field, converter)
    KEYS = {
        "grid_lo": ("grid_lo", float), "grid_hi": ("grid_hi", float), "grid_n": ("grid_n", int),
        "dim": ("dim", int), "phi_small": ("phi_small", float), "ball_stride": ("ball_stride", int),
        "ball_rmin_cells": ("ball_rmin_cells", float), "ball_rmax": ("ball_rmax", float),
        "space": ("space", str), "kappa": ("kappa", float), "campanato_q": ("q", float),
        "alpha": ("alpha", float), "lambda": ("lam", float), "lambda_campanato": ("lam_campanato", float),
        "beta": ("beta", float), "mode": ("mode", str), "young_p0": ("young_p0", float),
        "young_p1": ("young_p1", float), "outer_weighted": ("outer_weighted", float),
        "campanato_p": ("campanato_p", float), "ap_index": ("ap_index", float),
        "corpus": ("corpus", lambda s: tuple(x.strip() for x in s.split(",") if x.strip())),
        "out": ("out", str), "seed": ("seed", int),
    }

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        try:
            kv = parse_kv(text)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        growth = {k: v for k, v in kv.items() if k in GROWTH_KEYS}
        known = set(cls.KEYS) | GROWTH_KEYS
        unknown = sorted(set(kv) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        updates = {}
        for key, raw in kv.items():
            if key in GROWTH_KEYS:
                continue
            name, conv = cls.KEYS[key]
            try:
                updates[name] = conv(raw)
            except ValueError:
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
        cfg = cls(**updates)
        if growth:
            cfg = replace(cfg, growth={"family": "power", **growth})
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        if path is None:
            return cls()
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {path}")
        cfg = cls.from_text(p.read_text())
        return replace(cfg, growth={**cfg.growth, "_base": str(p.parent)})

    def validate(self) -> None:
        checks = [
            (self.grid_hi > self.grid_lo, "grid_hi must exceed grid_lo"),
            (self.grid_n >= 9, "grid_n must be >= 9"),
            (self.dim in (1, 2), "dim must be 1 or 2"),
            (0 < self.alpha <= 1, "alpha must lie in (0, 1]"),
            (self.lam > 0 and self.lam_campanato > 0, "lambda must be positive"),
            (self.beta > 0, "beta must be positive"),
            (self.mode in ("lp", "dict", "dictionary"), "mode must be lp or dict"),
            (self.ball_stride >= 1, "ball_stride must be >= 1"),
            (self.ball_rmin_cells >= 1, "ball_rmin_cells must be >= 1"),
            (0 <= self.kappa < 1, "kappa must lie in [0, 1)"),
            (1 <= self.q < math.inf, "campanato_q must lie in [1, inf)"),
            (1 < self.young_p0 <= self.young_p1, "need 1 < young_p0 <= young_p1"),
            (0 < self.campanato_p, "campanato_p must be positive"),
            (self.ap_index >= 1, "ap_index must be >= 1"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)

    # builders
    def grid(self) -> Grid:
        return Grid.uniform(self.grid_lo, self.grid_hi, self.grid_n, self.dim)

    def growth_function(self) -> GrowthFunction:
        g = dict(self.growth)
        base = g.pop("_base", None)
        try:
            return growth_from_config(g, base)
        except (KeyError, ValueError, OSError) as e:
            raise ConfigError(f"growth config: {e}") from None

    def suite_config(self) -> SuiteConfig:
        return SuiteConfig(n_points=self.grid_n, dim=self.dim, lo=self.grid_lo, hi=self.grid_hi,
                           alpha=self.alpha, lam=self.lam, lam_campanato=self.lam_campanato,
                           p=float(self.growth.get("p", 2.0)), phi_small=self.phi_small,
                           young_p0=self.young_p0, young_p1=self.young_p1,
                           outer_weighted=self.outer_weighted, campanato_p=self.campanato_p,
                           ap_index=self.ap_index, q=self.q,
                           mode="lp" if self.mode == "lp" else "dictionary", seed=self.seed)


def output_dir(flag: str | None, cfg: RunConfig) -> Path:
    """--out flag, then ILP_OUT, then the config `out` key, then ./ilp_out."""
    if flag:
        return Path(flag)
    env = os.environ.get("ILP_OUT")
    if env:
        return Path(env)
    return Path(cfg.out or "ilp_out")


def parse_balls(spec: str | None, grid: Grid, cfg: RunConfig) -> BallFamily:
    """`default` | `default:stride=4,rmin=2,rmax=0.5` | `chain:x0[;y0]:r1,r2,...`."""
    if spec is None or spec == "default":
        return BallFamily.default(grid, cfg.ball_stride, cfg.ball_rmin_cells, cfg.ball_rmax)
    try:
        kind, _, rest = spec.partition(":")
        if kind == "default":
            opts = dict(item.split("=") for item in rest.split(",") if item)
            unknown = set(opts) - {"stride", "rmin", "rmax"}
            if unknown:
                raise ConfigError(f"unknown ball options {sorted(unknown)}")
            return BallFamily.default(grid, int(opts.get("stride", cfg.ball_stride)),
                                      float(opts.get("rmin", cfg.ball_rmin_cells)),
                                      float(opts["rmax"]) if "rmax" in opts else cfg.ball_rmax)
        if kind == "chain":
            center, _, radii = rest.partition(":")
            c = tuple(float(v) for v in center.split(";"))
            r = [float(v) for v in radii.split(",")]
            if len(c) != grid.dim:
                raise ConfigError("ball center dimension does not match the grid")
            return BallFamily.centered_chain(c, r)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"bad --balls spec {spec!r}: {e}") from None
    raise ConfigError(f"bad --balls spec {spec!r}")


def load_input(path: str | None) -> GridFunction:
    if path is None:
        raise ConfigError("--input is required")
    if not Path(path).is_file():
        raise ConfigError(f"input file not found: {path}")
    try:
        return read_csv(path)
    except ValueError as e:
        raise ConfigError(str(e)) from None


# ---------------------------------------------------------------- subcommands

def _space(cfg: RunConfig, kind: str, balls: BallFamily) -> SpaceSpec:
    try:
        if kind in ("musielak_morrey", "l_phi"):
            return SpaceSpec(kind, balls, phi=cfg.growth_function(), outer=OuterFunction.power(cfg.phi_small))
        if kind == "weighted_orlicz_morrey":
            phi = cfg.growth_function()
            young = phi.young or YoungFunction.sum_of_powers(cfg.young_p0, cfg.young_p1)
            return SpaceSpec(kind, balls, young=young, weight=phi.weight,
                             outer=OuterFunction.power(cfg.phi_small))
        if kind == "classical_morrey":
            return SpaceSpec(kind, balls, p=float(cfg.growth.get("p", 2.0)), kappa=cfg.kappa)
        if kind in ("campanato", "campanato_star"):
            return SpaceSpec(kind, balls, phi=cfg.growth_function(), q=cfg.q)
        if kind == "bmo":
            return SpaceSpec(kind, balls)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    raise ConfigError(f"unknown space {kind!r}")


def cmd_norm(args, cfg: RunConfig) -> int:
    f = load_input(args.input)
    balls = parse_balls(args.balls, f.grid, cfg)
    spec = _space(cfg, args.space or cfg.space, balls)
    out = output_dir(args.out, cfg)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "norm.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        cols = ["cx", "cy"][: f.grid.dim]
        w.writerow(cols + ["r", "ball_norm"])
        if spec.kind == "l_phi":
            total = space_norm(f, spec)
        else:
            rows = ball_norms(f, spec)
            for ball, v in rows:
                w.writerow([f"{c:.17g}" for c in ball.center] + [f"{ball.radius:.17g}", f"{v:.17g}"])
            total = max(v for _, v in rows)
        w.writerow(["TOTAL"] + [""] * f.grid.dim + [f"{total:.17g}"])
    print(f"{spec.kind} norm = {total:.17g}  ({path})")
    return EXIT_OK


OPS = ("s_alpha", "g_alpha", "g_star", "sab", "comm_s", "comm_g", "comm_gstar")


def cmd_operator(args, cfg: RunConfig) -> int:
    f = load_input(args.input)
    alpha = cfg.alpha if args.alpha is None else args.alpha
    lam = cfg.lam if args.lam is None else args.lam
    beta = cfg.beta if args.beta is None else args.beta
    mode = args.mode or cfg.mode
    mode = "lp" if mode == "lp" else "dictionary"
    if not (0 < alpha <= 1) or lam <= 0 or beta <= 0:
        raise ConfigError("need alpha in (0,1], lambda > 0 and beta > 0")
    b = None
    if args.op.startswith("comm"):
        b = load_input(args.b)
        if b.grid != f.grid:
            raise ConfigError("--b must live on the same grid as --input")
    op = args.op
    if op == "s_alpha":
        g = s_alpha(f, alpha, mode=mode)
    elif op == "sab":
        g = s_alpha_beta(f, alpha, beta, mode=mode)
    elif op == "g_alpha":
        g = g_alpha(f, alpha, mode=mode)
    elif op == "g_star":
        g = g_star_lambda(f, alpha, lam, mode=mode)
    elif op == "comm_s":
        from .grid_core import HalfSpaceGrid
        g = commutator_s(b, f, alpha, ConeParams(HalfSpaceGrid(f.grid), beta), mode=mode)
    elif op == "comm_g":
        g = commutator_g(b, f, alpha, mode=mode)
    else:
        g = commutator_gstar(b, f, alpha, lam, mode=mode)
    out = output_dir(args.out, cfg)
    out.mkdir(parents=True, exist_ok=True)
    path = Path(args.output) if args.output else out / f"{op}.csv"
    write_csv(g, path)
    print(f"{op}: wrote {path}")
    return EXIT_OK


def cmd_apcheck(args, cfg: RunConfig) -> int:
    phi = cfg.growth_function()
    grid = phi.weight.grid if phi.weight is not None else cfg.grid()
    balls = parse_balls(args.balls, grid, cfg)
    q = args.q if args.q is not None else phi.q if phi.q > 1 else phi.p0
    if q < 1 or (args.r is not None and args.r <= 1):
        raise ConfigError("need q >= 1 and r > 1")
    rows = []
    mc = muckenhoupt_constant(phi, q, balls, grid)
    rows.append(CheckResult("muckenhoupt", f"A_{q:g}", mc, math.isfinite(mc)))
    if args.r is not None:
        w = phi.weight or Weight.constant(grid)
        rh = reverse_holder_constant(w, args.r, balls)
        rows.append(CheckResult("reverse_holder", f"RH_{args.r:g}", rh, math.isfinite(rh)))
    out = output_dir(args.out, cfg)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "apcheck.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CHECK_HEADER)
        for r in rows:
            w.writerow(r.row())
            print(",".join(r.row()))
    if args.strict and not all(r.passed for r in rows):
        return EXIT_HYPOTHESIS
    return EXIT_OK


def _run_one(suite_id: str, scfg: SuiteConfig, names):
    grid = scfg.grid()
    corpus = Corpus.default(grid, names)
    # the space spec holds closures that cannot cross the process boundary;
    # reporting only needs the checks and the ratio table
    return replace(run_suite(suite_id, scfg, corpus), space=None)


def cmd_verify(args, cfg: RunConfig) -> int:
    ids = SUITE_IDS if args.suite == "all" else tuple(s.strip() for s in args.suite.split(","))
    bad = [s for s in ids if s not in SUITE_IDS]
    if bad:
        raise ConfigError(f"unknown suite ids {bad}; choose from {', '.join(SUITE_IDS)}")
    try:
        scfg = cfg.suite_config()
        Corpus.default(scfg.grid(), cfg.corpus)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            futs = {s: ex.submit(_run_one, s, scfg, cfg.corpus) for s in ids}
            results = {s: fut.result() for s, fut in futs.items()}
    else:
        from .verify import OperatorBank
        grid = scfg.grid()
        corpus = Corpus.default(grid, cfg.corpus)
        bank = OperatorBank(grid, scfg.alpha, mode=scfg.mode)
        results = {s: run_suite(s, scfg, corpus, bank=bank) for s in ids}
    suites = [results[s] for s in ids]  # registry order, independent of completion order
    out = output_dir(args.out, cfg)
    report, summary = emit_report(suites, out)
    emit_checks(suites, out)
    failed_hyp = [s.id for s in suites if not s.hypotheses_ok]
    failed = [s.id for s in suites if s.hypotheses_ok and not s.table.passed]
    for s in suites:
        state = "skipped_hypothesis" if not s.hypotheses_ok else ("pass" if s.passed else "FAIL")
        print(f"{s.id:9s} {state:18s} max_ratio={s.max_ratio:.6g}")
    print(f"report: {report}")
    if failed_hyp and args.strict:
        return EXIT_HYPOTHESIS
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_corpus(args, cfg: RunConfig) -> int:
    try:
        corpus = Corpus.default(cfg.grid(), cfg.corpus)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    out = output_dir(args.out, cfg) / "corpus"
    out.mkdir(parents=True, exist_ok=True)
    for name, f in corpus.items():
        write_csv(f, out / f"{name}.csv")
    with open(out / "manifest.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "kind", "seed", "corpus_hash"])
        for m in corpus.members:
            w.writerow([m.name, m.kind, "" if m.seed is None else m.seed, corpus.content_hash()])
    print(f"wrote {len(corpus)} members to {out}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ilp", description="Intrinsic Littlewood-Paley operators on "
                                "Musielak-Orlicz Morrey and Campanato spaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key = value config file")
        sp.add_argument("--out", help="output directory (else $ILP_OUT, config `out`, ./ilp_out)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes")
        sp.add_argument("--strict", action="store_true", help="exit 3 when a hypothesis check fails")

    sp = sub.add_parser("norm", help="space norm of a grid function, one row per ball")
    common(sp)
    sp.add_argument("--space", choices=["musielak_morrey", "weighted_orlicz_morrey", "classical_morrey",
                                        "campanato", "campanato_star", "bmo", "l_phi"])
    sp.add_argument("--input", help="GridFunction CSV")
    sp.add_argument("--balls", help="default | default:stride=4,rmin=2,rmax=R | chain:x0[;y0]:r1,r2,...")
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("operator", help="apply a square function or commutator")
    common(sp)
    sp.add_argument("--op", required=True, choices=OPS)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--mode", choices=["lp", "dict"])
    sp.add_argument("--input", help="GridFunction CSV")
    sp.add_argument("--b", help="BMO symbol CSV (commutators)")
    sp.add_argument("--output", help="output CSV path (default <out>/<op>.csv)")
    sp.set_defaults(func=cmd_operator)

    sp = sub.add_parser("apcheck", help="Muckenhoupt and reverse Hoelder constants")
    common(sp)
    sp.add_argument("--q", type=float, help="Muckenhoupt index (default from config)")
    sp.add_argument("--r", type=float, help="reverse Hoelder exponent")
    sp.add_argument("--balls", help="ball family spec, as for norm")
    sp.set_defaults(func=cmd_apcheck)

    sp = sub.add_parser("verify", help="run theorem suites")
    common(sp)
    sp.add_argument("--suite", default="all", help=f"all or comma list of: {', '.join(SUITE_IDS)}")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("corpus", help="write the test-function corpus as CSV")
    common(sp)
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_CONFIG
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = RunConfig.load(args.config)
        return args.func(args, cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NUMERICAL_ERRORS as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
