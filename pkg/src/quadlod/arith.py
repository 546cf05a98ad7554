"""Unit-invariant arithmetic functions on O_K and their Dirichlet convolution.

Functions are dense tables over canonical associate representatives, so
f(u * xi) = f(xi) holds by construction.  Convolution runs as a product sweep
over class pairs (delta, m) with norm(delta) * norm(m) <= bound, which visits
exactly sum-of-tau(a) pairs, the same count as per-class divisor enumeration.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

from .errors import RingMismatch, TableTooSmall
from .rings import AlgInt, RingDescriptor, canonical_associate, make_ring
from .regions import canonical_classes, element_arrays
from .sieve import FactorSieve, PrimeTable

BUILTIN_NAMES = ("one", "moebius", "tau", "log_norm", "lambda", "prime_indicator")
_ALIASES = {"prime": "prime_indicator", "mu": "moebius", "log": "log_norm"}


@dataclass
class ArithFn:
    """A complex-valued function on canonical classes of norm <= norm_bound."""

    ring: RingDescriptor
    norm_bound: int
    values: dict[tuple[int, int], complex]
    name: str

    def __call__(self, xi: AlgInt) -> complex:
        can = canonical_associate(xi)
        try:
            return self.values[(can.x, can.y)]
        except KeyError:
            raise TableTooSmall(
                f"{self.name} tabulated to norm {self.norm_bound}, asked at {xi.norm()}"
            ) from None

    def classes(self):
        """(coords, value) pairs in (norm, x, y) order."""
        return self.values.items()


def tabulate(
    builtin: str | Callable[[AlgInt], complex],
    ring: RingDescriptor,
    norm_bound: int,
    table: PrimeTable | None = None,
) -> ArithFn:
    """Tabulate a named builtin (or a callback) on all classes up to norm_bound.

    The factorization-based builtins (moebius, tau, lambda, prime_indicator)
    need a PrimeTable covering norm_bound.
    """
    classes = canonical_classes(ring, norm_bound)
    name = builtin if isinstance(builtin, str) else getattr(builtin, "__name__", "custom")
    name = _ALIASES.get(name, name)
    values: dict[tuple[int, int], complex] = {}
    if not isinstance(builtin, str):
        for c in classes:
            values[(c.x, c.y)] = complex(builtin(c))
        return ArithFn(ring, norm_bound, values, name)
    if name == "one":
        for c in classes:
            values[(c.x, c.y)] = 1 + 0j
    elif name == "log_norm":
        for c in classes:
            values[(c.x, c.y)] = complex(math.log(c.norm()))
    elif name in ("moebius", "tau", "lambda"):
        sieve = _factor_sieve(ring, norm_bound, table)
        for c in classes:
            fm = sieve.factor(c)
            if name == "moebius":
                if any(e > 1 for _, e in fm.factors):
                    v = 0j
                else:
                    v = complex((-1) ** len(fm.factors))
            elif name == "tau":
                t = 1
                for _, e in fm.factors:
                    t *= e + 1
                v = complex(t)
            else:  # lambda
                if len(fm.factors) == 1:
                    v = complex(math.log(fm.factors[0][0].norm()))
                else:
                    v = 0j
            values[(c.x, c.y)] = v
    elif name == "prime_indicator":
        if table is None or table.max_norm < norm_bound:
            raise TableTooSmall("prime_indicator needs a covering PrimeTable")
        prime_set = {
            (p.x, p.y) for p in table.primes if p.norm() <= norm_bound
        }
        for c in classes:
            values[(c.x, c.y)] = 1 + 0j if (c.x, c.y) in prime_set else 0j
    else:
        raise ValueError(f"unknown builtin {builtin!r}; choose from {BUILTIN_NAMES}")
    return ArithFn(ring, norm_bound, values, name)


def _factor_sieve(ring, norm_bound, table):
    if table is None or table.max_norm < norm_bound:
        raise TableTooSmall("builtin needs a PrimeTable covering norm_bound")
    return FactorSieve(table, norm_bound)


def convolve(f: ArithFn, g: ArithFn) -> ArithFn:
    """Dirichlet convolution (f*g)(a) = sum over divisor pairs d*m = a."""
    if f.ring.d != g.ring.d:
        raise RingMismatch("convolution operands in different rings")
    ring = f.ring
    bound = min(f.norm_bound, g.norm_bound)
    out: dict[tuple[int, int], complex] = {
        (c.x, c.y): 0j for c in canonical_classes(ring, bound)
    }
    g_classes = canonical_classes(ring, bound)
    g_norms = [c.norm() for c in g_classes]
    for (dx, dy), fv in f.values.items():
        if fv == 0:
            continue
        delta = AlgInt(ring, dx, dy)
        dn = delta.norm()
        if dn > bound:
            continue
        cap = bound // dn
        for m, mn in zip(g_classes, g_norms):
            if mn > cap:
                break
            gv = g.values[(m.x, m.y)]
            if gv == 0:
                continue
            prod = canonical_associate(delta * m)
            out[(prod.x, prod.y)] += fv * gv
    return ArithFn(ring, bound, out, f"({f.name})*({g.name})")


def add_pointwise(f: ArithFn, g: ArithFn) -> ArithFn:
    if f.ring.d != g.ring.d:
        raise RingMismatch("operands in different rings")
    bound = min(f.norm_bound, g.norm_bound)
    out = {
        (c.x, c.y): f.values[(c.x, c.y)] + g.values[(c.x, c.y)]
        for c in canonical_classes(f.ring, bound)
    }
    return ArithFn(f.ring, bound, out, f"({f.name})+({g.name})")


def dirichlet_series(f: ArithFn, s: complex, trunc_norm: int) -> complex:
    """Truncated sum over classes of f(a) / norm(a)^s."""
    if trunc_norm > f.norm_bound:
        raise TableTooSmall(f"trunc {trunc_norm} beyond table {f.norm_bound}")
    total = 0j
    for c in canonical_classes(f.ring, trunc_norm):
        v = f.values[(c.x, c.y)]
        if v == 0:
            continue
        total += v * c.norm() ** (-s)
    return total


def weighted_log_sum(f: ArithFn, n: float, k: int) -> complex:
    """Sum over elements w of A0(N) of f(w) * log^k(N^2 / norm(w))."""
    from .regions import a0

    region = a0(f.ring, n)
    if region.hi_sq > f.norm_bound:
        raise TableTooSmall(f"N^2 = {region.hi_sq} beyond table {f.norm_bound}")
    xs, ys, norms = element_arrays(f.ring.d, 1, region.hi_sq)
    n_sq = float(region.hi_sq)
    total = 0j
    ring = f.ring
    for x, y, nm in zip(xs.tolist(), ys.tolist(), norms.tolist()):
        can = canonical_associate(AlgInt(ring, x, y))
        v = f.values[(can.x, can.y)]
        if v == 0:
            continue
        total += v * math.log(n_sq / nm) ** k
    return total


def unit_fold_check(f: ArithFn, n: float) -> tuple[complex, complex]:
    """Both sides of: sum of f over elements of A0(N) == w_K * class sum."""
    from .regions import a0

    region = a0(f.ring, n)
    if region.hi_sq > f.norm_bound:
        raise TableTooSmall(f"N^2 = {region.hi_sq} beyond table {f.norm_bound}")
    xs, ys, _ = element_arrays(f.ring.d, 1, region.hi_sq)
    ring = f.ring
    el_sum = 0j
    for x, y in zip(xs.tolist(), ys.tolist()):
        can = canonical_associate(AlgInt(ring, x, y))
        el_sum += f.values[(can.x, can.y)]
    cls_sum = 0j
    for c in canonical_classes(ring, region.hi_sq):
        cls_sum += f.values[(c.x, c.y)]
    return el_sum, ring.w_K * cls_sum


def growth_ratio(f: ArithFn, table: PrimeTable, c_power: float = 2.0) -> float:
    """max |f(a)| / tau(a)^C over the table; the S-W growth diagnostic."""
    tau = tabulate("tau", f.ring, f.norm_bound, table)
    worst = 0.0
    for coords, v in f.values.items():
        t = tau.values[coords].real
        worst = max(worst, abs(v) / t**c_power)
    return worst


def save_csv(f: ArithFn, path) -> None:
    """Columns x, y, norm, re, im; header row carries d, norm_bound, name."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# d={f.ring.d} norm_bound={f.norm_bound} name={f.name}\n")
        w = csv.writer(fh)
        w.writerow(["x", "y", "norm", "re", "im"])
        for (x, y), v in f.values.items():
            w.writerow([x, y, AlgInt(f.ring, x, y).norm(), repr(v.real), repr(v.imag)])


def load_csv(path) -> ArithFn:
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise ValueError("missing metadata comment line")
        meta = dict(kv.split("=", 1) for kv in header[1:].split())
        ring = make_ring(int(meta["d"]))
        bound = int(meta["norm_bound"])
        rd = csv.reader(fh)
        next(rd)  # column header
        values = {}
        for row in rd:
            x, y = int(row[0]), int(row[1])
            values[(x, y)] = complex(float(row[3]), float(row[4]))
    return ArithFn(ring, bound, values, meta.get("name", "csv"))
