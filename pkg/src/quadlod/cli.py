"""Batch command line front end: quadlod <subcommand> [flags].

Every artifact embeds its run configuration (a JSON line) so it can be
reproduced; numeric output is deterministic given config + seed, for any
worker count.  Flags use norm-scale parameters (N, not N^2); headers print
both to avoid off-by-square confusion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import lab
from .arith import convolve, load_csv, save_csv, tabulate
from .characters import Modulus
from .errors import QlodError, UnsupportedRing
from .regions import a0, count_region, density_ratio, enumerate_region
from .rings import AlgInt, make_ring
from .sieve import cache_inspect, cache_load, cache_save, sieve_primes

CONFIG_VERSION = 1


@dataclass
class RunConfig:
    """Everything needed to reproduce a run; round-trips through JSON."""

    command: str
    d: int | None = None
    params: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "csv"
    seed: int = 0
    workers: int = 1
    cache_dir: str | None = None
    version: int = CONFIG_VERSION

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "RunConfig":
        data = json.loads(text)
        data.pop("version", None)
        return RunConfig(**data)


def default_cache_dir(flag_value: str | None) -> str:
    if flag_value:
        return flag_value
    env = os.environ.get("QLOD_CACHE")
    if env:
        return env
    base = os.environ.get("XDG_CACHE_HOME", os.path.expanduser("~/.cache"))
    return os.path.join(base, "quadlod")


def _emit(lines: list[str], cfg: RunConfig) -> None:
    # embed without out/workers: neither affects the numbers, and identical
    # computations should produce byte-identical artifacts
    embed = replace(cfg, out=None, workers=1)
    text = f"# config: {embed.to_json()}\n" + "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(","))


def _build_fn(spec: str, ring, bound: int, table):
    if spec.startswith("csv:"):
        f = load_csv(spec[4:])
        if f.ring.d != ring.d or f.norm_bound < bound:
            raise QlodError(f"csv function does not cover d={ring.d}, norm {bound}")
        return f
    return tabulate(spec, ring, bound, table)


def _add_common(p, need_d=True):
    if need_d:
        p.add_argument("--d", type=int, required=True, help="ring selector (one of the nine)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--workers", type=int, default=None,
        help="parallel sweep workers (default: all cores; output is identical)",
    )
    p.add_argument("--cache-dir", dest="cache_dir")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadlod")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ring-info", help="descriptor of one of the nine rings")
    _add_common(p)

    p = sub.add_parser("enumerate", help="elements of an annulus, sorted")
    _add_common(p)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--yprime", type=float, default=1.0)
    p.add_argument("--Y", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)

    p = sub.add_parser("count", help="element count of A0(N)")
    _add_common(p)
    p.add_argument("--N", type=float, required=True)

    p = sub.add_parser("density", help="count over the 2*pi*N^2/sqrt(|D|) model")
    _add_common(p)
    p.add_argument("--N", type=float, required=True)

    p = sub.add_parser("sieve", help="prime elements up to a norm bound")
    _add_common(p)
    p.add_argument("--max-norm", dest="max_norm", type=int, required=True)

    p = sub.add_parser("factor", help="factor x + y*omega")
    _add_common(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, default=0)

    p = sub.add_parser("chars", help="character group of a modulus")
    _add_common(p)
    p.add_argument("--qx", type=int, required=True)
    p.add_argument("--qy", type=int, default=0)

    p = sub.add_parser("conductors", help="conductor of every character mod q")
    _add_common(p)
    p.add_argument("--qx", type=int, required=True)
    p.add_argument("--qy", type=int, default=0)

    p = sub.add_parser("tabulate", help="tabulate a builtin arithmetic function")
    _add_common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--norm-bound", dest="norm_bound", type=int, required=True)

    p = sub.add_parser("convolve", help="Dirichlet convolution of two builtins")
    _add_common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--norm-bound", dest="norm_bound", type=int, required=True)

    p = sub.add_parser("lod-scan", help="E(N, Q) sweep over a grid of N")
    _add_common(p)
    p.add_argument("--f", default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--B", type=float, default=None)
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--Ngrid", default=None)
    p.add_argument("--config", help="JSON config file with these parameters")

    p = sub.add_parser("sw-check", help="character cancellation scan")
    _add_common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--bound-power", dest="bound_power", type=float, default=None)

    p = sub.add_parser("conv-experiment", help="normalized errors of f, g, f*g")
    _add_common(p)
    p.add_argument("--f", default=None)
    p.add_argument("--g", default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--B", type=float, default=None)
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--Ngrid", default=None)
    p.add_argument("--config", help="JSON config file with these parameters")

    p = sub.add_parser("large-sieve", help="lhs/rhs ratios for random sign vectors")
    _add_common(p)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--Q1", type=float, required=True)
    p.add_argument("--Q2", type=float, required=True)
    p.add_argument("--vectors", type=int, default=1)

    p = sub.add_parser("mertens", help="ideal and prime reciprocal-norm sums")
    _add_common(p)
    p.add_argument("--R", type=int, required=True)

    p = sub.add_parser("cache", help="prime table cache management")
    cache_sub = p.add_subparsers(dest="cache_command", required=True)
    pc = cache_sub.add_parser("save")
    _add_common(pc)
    pc.add_argument("--max-norm", dest="max_norm", type=int, required=True)
    pc = cache_sub.add_parser("load")
    _add_common(pc)
    pc.add_argument("--max-norm", dest="max_norm", type=int, required=True)
    pc = cache_sub.add_parser("inspect")
    _add_common(pc, need_d=False)
    pc.add_argument("--path", required=True)

    return ap


def _cache_path(cfg: RunConfig, d: int, max_norm: int) -> str:
    cdir = default_cache_dir(cfg.cache_dir)
    os.makedirs(cdir, exist_ok=True)
    return os.path.join(cdir, f"primes_d{d}_n{max_norm}.qlod")


def _scan_config(args, require_g=False) -> tuple[lab.LodScanConfig, str, str]:
    """Merge --config file values with explicit flags (flags win)."""
    file_vals = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_vals = json.load(fh)

    def pick(flag, key, default=None):
        return flag if flag is not None else file_vals.get(key, default)

    f_spec = pick(args.f, "f_spec", "prime_indicator")
    g_spec = pick(getattr(args, "g", None), "g_spec", f_spec) if require_g else f_spec
    grid = _grid(args.Ngrid) if args.Ngrid else file_vals.get("N_grid", (50, 100))
    cfg = lab.LodScanConfig(
        d=args.d,
        theta=float(pick(args.theta, "theta", 0.4)),
        B=float(pick(args.B, "B", 0.0)),
        N_grid=tuple(int(n) for n in grid),
        A=float(pick(args.A, "A", 0.0)),
        f_spec=f_spec,
    )
    return cfg, f_spec, g_spec


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _dispatch(args)
    except UnsupportedRing as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QlodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    workers = getattr(args, "workers", None)
    if workers is None:
        workers = os.cpu_count() or 1
    cfg = RunConfig(
        command=args.command,
        d=getattr(args, "d", None),
        out=getattr(args, "out", None),
        format=getattr(args, "format", "csv"),
        seed=getattr(args, "seed", 0),
        workers=workers,
        cache_dir=getattr(args, "cache_dir", None),
    )
    cmd = args.command

    if cmd == "ring-info":
        ring = make_ring(args.d)
        cfg.params = {}
        info = {
            "d": ring.d,
            "disc": ring.disc,
            "w_K": ring.w_K,
            "omega": "(1+sqrt(d))/2" if ring.one_mod_four else "sqrt(d)",
            "zeta0": [ring.zeta0.x, ring.zeta0.y],
            "units": [[u.x, u.y] for u in ring.units],
        }
        _emit([json.dumps(info, sort_keys=True)], cfg)
        return 0

    if cmd == "enumerate":
        ring = make_ring(args.d)
        cfg.params = {"N": args.N, "yprime": args.yprime, "Y": args.Y, "b": args.b}
        from .regions import NormRegion

        region = NormRegion.from_params(ring, args.yprime, args.Y, args.N, args.b)
        lines = [f"# norms in [{region.lo_sq}, {region.hi_sq}] (N={args.N}, N^2={args.N**2})"]
        lines.append("x,y,norm")
        for xi in enumerate_region(region):
            lines.append(f"{xi.x},{xi.y},{xi.norm()}")
        _emit(lines, cfg)
        return 0

    if cmd == "count":
        ring = make_ring(args.d)
        cfg.params = {"N": args.N}
        print(count_region(a0(ring, args.N)))
        return 0

    if cmd == "density":
        ring = make_ring(args.d)
        cfg.params = {"N": args.N}
        print(repr(density_ratio(ring, args.N)))
        return 0

    if cmd == "sieve":
        ring = make_ring(args.d)
        cfg.params = {"max_norm": args.max_norm}
        table = sieve_primes(ring, args.max_norm)
        lines = [f"# {len(table)} prime classes, norm <= {args.max_norm}", "x,y,norm,split"]
        for pi, st in zip(table.primes, table.split_types):
            lines.append(f"{pi.x},{pi.y},{pi.norm()},{st}")
        _emit(lines, cfg)
        return 0

    if cmd == "factor":
        ring = make_ring(args.d)
        cfg.params = {"x": args.x, "y": args.y}
        xi = AlgInt(ring, args.x, args.y)
        table = sieve_primes(ring, max(xi.norm(), 2))
        from .sieve import factor as factor_fn

        fm = factor_fn(xi, table)
        parts = [f"unit=({fm.unit.x},{fm.unit.y})"]
        parts += [f"({p.x},{p.y})^{e}" for p, e in fm.factors]
        print(" * ".join(parts))
        return 0

    if cmd in ("chars", "conductors"):
        ring = make_ring(args.d)
        cfg.params = {"qx": args.qx, "qy": args.qy}
        m = Modulus(ring, AlgInt(ring, args.qx, args.qy))
        gens, orders = m.unit_group
        lines = [
            f"# q=({m.q.x},{m.q.y}) norm={m.norm} phi={m.phi} orders={list(orders)}"
        ]
        if cmd == "chars":
            lines.append("exponents,principal")
            for chi in m.characters:
                lines.append(f"\"{list(chi.exponents)}\",{int(chi.is_principal)}")
        else:
            lines.append("exponents,conductor_x,conductor_y,conductor_norm,primitive")
            for chi in m.characters:
                cond = chi.conductor
                lines.append(
                    f"\"{list(chi.exponents)}\",{cond.q.x},{cond.q.y},{cond.norm},"
                    f"{int(chi.is_primitive)}"
                )
        _emit(lines, cfg)
        return 0

    if cmd == "tabulate":
        ring = make_ring(args.d)
        cfg.params = {"f": args.f, "norm_bound": args.norm_bound}
        table = sieve_primes(ring, args.norm_bound)
        f = _build_fn(args.f, ring, args.norm_bound, table)
        save_csv(f, cfg.out or "/dev/stdout")
        return 0

    if cmd == "convolve":
        ring = make_ring(args.d)
        cfg.params = {"f": args.f, "g": args.g, "norm_bound": args.norm_bound}
        table = sieve_primes(ring, args.norm_bound)
        f = _build_fn(args.f, ring, args.norm_bound, table)
        g = f if args.g == args.f else _build_fn(args.g, ring, args.norm_bound, table)
        h = convolve(f, g)
        save_csv(h, cfg.out or "/dev/stdout")
        return 0

    if cmd == "lod-scan":
        scan_cfg, f_spec, _ = _scan_config(args)
        cfg.params = asdict(scan_cfg)
        ring = make_ring(args.d)
        bound = max(scan_cfg.N_grid) ** 2
        table = sieve_primes(ring, bound)
        f = _build_fn(f_spec, ring, bound, table)
        tables = lab.lod_scan(scan_cfg, f, workers=cfg.workers)
        if cfg.out:
            lab.write_lod_csv(tables, scan_cfg, cfg.out)
        for t in tables:
            flag = " (degenerate Q)" if t.degenerate else ""
            print(
                f"N={t.n} N^2={t.n**2} Q={repr(t.q_bound)} count={t.count} "
                f"E={repr(t.aggregate)} E/count={repr(t.normalized)}{flag}"
            )
        return 0

    if cmd == "sw-check":
        ring = make_ring(args.d)
        cfg.params = {"f": args.f, "N": args.N, "D": args.D, "bound_power": args.bound_power}
        bound = int(args.N) ** 2
        table = sieve_primes(ring, bound)
        f = _build_fn(args.f, ring, bound, table)
        rep = lab.sw_check(f, args.N, args.D, args.bound_power)
        lines = [
            f"# N={rep.n} D={rep.d_power} bound_power={rep.bound_power} "
            f"modulus_cap={repr(rep.modulus_cap)}",
            "q_x,q_y,q_norm,exponents,abs_sum,scaled",
        ]
        for row in rep.rows:
            lines.append(
                f"{row['q_x']},{row['q_y']},{row['q_norm']},\"{list(row['exponents'])}\","
                f"{repr(row['abs_sum'])},{repr(row['scaled'])}"
            )
        lines.append(f"# max_scaled={repr(rep.max_scaled)}")
        _emit(lines, cfg)
        return 0

    if cmd == "conv-experiment":
        scan_cfg, f_spec, g_spec = _scan_config(args, require_g=True)
        cfg.params = {**asdict(scan_cfg), "g_spec": g_spec}
        ring = make_ring(args.d)
        bound = max(scan_cfg.N_grid) ** 2
        table = sieve_primes(ring, bound)
        f = _build_fn(f_spec, ring, bound, table)
        g = f if g_spec == f_spec else _build_fn(g_spec, ring, bound, table)
        report = lab.convolution_experiment(f, g, scan_cfg, workers=cfg.workers)
        if cfg.out:
            lab.write_conv_csv(report, cfg.out)
        for row in report.rows:
            print(
                f"N={row['N']} E_f={repr(row['E_f_norm'])} E_g={repr(row['E_g_norm'])} "
                f"E_conv={repr(row['E_conv_norm'])}"
            )
        print(f"decaying: {report.decaying}")
        return 0

    if cmd == "large-sieve":
        ring = make_ring(args.d)
        cfg.params = {"N": args.N, "Q1": args.Q1, "Q2": args.Q2, "vectors": args.vectors}
        region = a0(ring, args.N)
        els = list(enumerate_region(region))
        rng = np.random.default_rng(cfg.seed)
        mat = rng.choice([-1.0, 1.0], size=(args.vectors, len(els)))
        results = lab.large_sieve_ratios(mat, els, args.Q1, args.Q2, region)
        lines = [f"# {len(els)} elements, moduli norm in ({args.Q1}, {args.Q2}]"]
        lines.append("vector,lhs,rhs,ratio")
        for i, (l, r, ratio) in enumerate(results):
            lines.append(f"{i},{repr(l)},{repr(r)},{repr(ratio)}")
        lines.append(f"# max_ratio={repr(max(r for _, _, r in results))}")
        _emit(lines, cfg)
        return 0

    if cmd == "mertens":
        ring = make_ring(args.d)
        cfg.params = {"R": args.R}
        rep = lab.mertens_sums(ring, args.R)
        print(
            f"R={rep.r} ideal_sum={repr(rep.ideal_sum)} prime_sum={repr(rep.prime_sum)} "
            f"ideal_ratio={repr(rep.ideal_ratio)} prime_ratio={repr(rep.prime_ratio)}"
        )
        return 0

    if cmd == "cache":
        if args.cache_command == "inspect":
            info = cache_inspect(args.path)
            print(json.dumps(info, sort_keys=True))
            return 0
        ring = make_ring(args.d)
        path = _cache_path(cfg, args.d, args.max_norm)
        if args.cache_command == "save":
            table = sieve_primes(ring, args.max_norm)
            cache_save(table, path)
            print(f"saved {len(table)} prime classes to {path}")
        else:
            table = cache_load(ring, path)
            print(
                f"loaded {len(table)} prime classes (d={table.ring.d}, "
                f"max_norm={table.max_norm}) from {path}"
            )
        return 0

    raise AssertionError(f"unhandled command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
