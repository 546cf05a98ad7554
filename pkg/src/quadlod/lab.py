"""Progression error terms, their exact max-over-M sweeps, and the lemma labs.

The error term for a modulus q, coprime residue gamma and cut M is

    eps(M) = sum of f over elements of A0(M) congruent to gamma (mod q)
             - (1/phi(q)) * sum of f over elements of A0(M) coprime to q,

summed over elements with f evaluated at canonical representatives (the
congruence is not unit-invariant, so the element-level reading is the
self-consistent one).  As a function of M it is a step function that only
changes when floor(M^2) crosses the norm of an element carrying a nonzero
coprime contribution, so the exact maximum over all real M <= N is found by
sweeping those breakpoints with running per-class accumulators.
"""

from __future__ import annotations

import json
import math
import multiprocessing
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import ArithFn, convolve, tabulate
from .characters import DirichletCharacter, Modulus
from .errors import (
    EmptyModulusRange,
    NotCoprime,
    PrincipalCharacter,
    TableTooSmall,
    UnsupportedWeight,
)
from .regions import (
    NormRegion,
    a0,
    canonical_classes,
    canonical_coords,
    count_region,
    element_arrays,
)
from .rings import AlgInt, RingDescriptor, make_ring
from .sieve import sieve_primes


def _floor_sq(m: float) -> int:
    q = Fraction(m) ** 2
    return q.numerator // q.denominator


def _fvals(f: ArithFn, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """f at the canonical representative of each element, as complex128."""
    cxs, cys = canonical_coords(f.ring, xs, ys)
    vals = f.values
    return np.array(
        [vals[key] for key in zip(cxs.tolist(), cys.tolist())], dtype=np.complex128
    )


def _rids(m: Modulus, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    a, b, c = m.hnf_a, m.hnf_b, m.hnf_c
    j = np.mod(ys, c)
    k = (ys - j) // c
    return np.mod(xs - k * b, a) + a * j


def _coprime_index(m: Modulus) -> np.ndarray:
    cop = np.full(m.norm, -1, dtype=np.int64)
    for i, r in enumerate(m.unit_rids):
        cop[r] = i
    return cop


def epsilon(f: ArithFn, m_cut: float, m: Modulus, gamma: AlgInt) -> complex:
    """The progression error at a single cut M."""
    hi = _floor_sq(m_cut)
    if hi > f.norm_bound:
        raise TableTooSmall(f"M^2 = {hi} beyond table {f.norm_bound}")
    if not m.coprime(gamma):
        raise NotCoprime(f"gamma={gamma} shares a divisor with q={m.q}")
    if hi < 1:
        return 0j
    xs, ys, _ = element_arrays(f.ring.d, 1, hi)
    fv = _fvals(f, xs, ys)
    rid = _rids(m, xs, ys)
    g_rid = m.rid(gamma)
    in_class = rid == g_rid
    if m.phi == 1:
        return 0j  # the single coprime class equals the coprime set
    cop = _coprime_index(m)[rid] >= 0
    a_sum = fv[in_class].sum()
    b_sum = fv[cop].sum()
    # componentwise division: complex/int rounds differently across runtimes
    return complex(
        float(a_sum.real) - float(b_sum.real) / m.phi,
        float(a_sum.imag) - float(b_sum.imag) / m.phi,
    )


@dataclass
class SweepResult:
    max_abs: float
    max_eps: complex
    argmax_norm: int  # squared-norm breakpoint where the max is first attained
    gamma_x: int
    gamma_y: int


def epsilon_sweep(f: ArithFn, n: float, m: Modulus) -> SweepResult:
    """Exact max over real M <= N and coprime gamma of |eps(M; q, gamma; f)|."""
    hi = _floor_sq(n)
    if hi > f.norm_bound:
        raise TableTooSmall(f"N^2 = {hi} beyond table {f.norm_bound}")
    xs, ys, norms = element_arrays(f.ring.d, 1, hi)
    fv = _fvals(f, xs, ys)
    return _sweep_arrays(m, xs, ys, norms, fv)


def _sweep_arrays(m: Modulus, xs, ys, norms, fv) -> SweepResult:
    gx, gy = m.rid_coords(m.unit_rids[0] if m.norm > 1 else 0)
    if m.phi == 1:
        return SweepResult(0.0, 0j, 0, gx, gy)
    rid = _rids(m, xs, ys)
    cid = _coprime_index(m)[rid]
    active = (cid >= 0) & (fv != 0)
    idx = np.flatnonzero(active)
    if idx.size == 0:
        return SweepResult(0.0, 0j, 0, gx, gy)
    lvn = norms[idx]
    starts = np.flatnonzero(np.r_[True, lvn[1:] != lvn[:-1]])
    ends = np.r_[starts[1:], np.array([lvn.size])]
    phi = m.phi
    acc = np.zeros(phi, dtype=np.complex128)
    total = 0j
    best_sq = 0.0  # squared magnitudes compare exactly for integer-valued f
    best_eps = 0j
    best_norm = 0
    best_cid = 0
    for s, e in zip(starts.tolist(), ends.tolist()):
        sel = idx[s:e]
        np.add.at(acc, cid[sel], fv[sel])
        total += fv[sel].sum()
        # componentwise subtraction: scalar float division is IEEE-unambiguous,
        # complex division by an integer is not identical across runtimes
        dr = acc.real - float(total.real) / phi
        di = acc.imag - float(total.imag) / phi
        sq = dr * dr + di * di  # plain multiplies; exact for integer-valued f
        i_arg = int(np.argmax(sq))
        mx = float(sq[i_arg])
        if mx > best_sq:
            best_sq = mx
            best_eps = complex(dr[i_arg], di[i_arg])
            best_norm = int(lvn[s])
            best_cid = i_arg
    gx, gy = m.rid_coords(m.unit_rids[best_cid])
    return SweepResult(math.sqrt(best_sq), best_eps, best_norm, gx, gy)


# -- level-of-distribution scans -----------------------------------------


@dataclass(frozen=True)
class LodScanConfig:
    """Parameters of a scan: Q(N) = count(A0(N))^theta / (log N)^B."""

    d: int
    theta: float
    B: float
    N_grid: tuple[int, ...]
    A: float = 0.0
    f_spec: str = "one"

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ValueError("theta must lie in (0, 1]")
        if self.B < 0:
            raise ValueError("B must be >= 0")
        grid = tuple(self.N_grid)
        object.__setattr__(self, "N_grid", grid)
        if any(n2 <= n1 for n1, n2 in zip(grid, grid[1:])) or not grid:
            raise ValueError("N_grid must be nonempty and strictly increasing")
        if min(grid) <= 1:
            raise ValueError("grid values must exceed 1")

    def q_bound(self, count: int, n: float) -> float:
        return count**self.theta / math.log(n) ** self.B


@dataclass
class ModulusRecord:
    q_x: int
    q_y: int
    q_norm: int
    phi: int
    max_abs: float
    max_eps: complex
    argmax_norm: int
    gamma_x: int
    gamma_y: int


@dataclass
class LodTable:
    n: float
    q_bound: float
    count: int
    records: list[ModulusRecord] = field(default_factory=list)
    degenerate: bool = False

    @property
    def aggregate(self) -> float:
        return math.fsum(r.max_abs for r in self.records)

    @property
    def normalized(self) -> float:
        return self.aggregate / self.count if self.count else 0.0


_SWEEP_CTX: dict = {}


def _sweep_task(q_coords: tuple[int, int]) -> ModulusRecord:
    ctx = _SWEEP_CTX
    ring = make_ring(ctx["d"])
    m = Modulus(ring, AlgInt(ring, *q_coords))
    res = _sweep_arrays(m, ctx["xs"], ctx["ys"], ctx["norms"], ctx["fv"])
    return ModulusRecord(
        q_coords[0], q_coords[1], m.norm, m.phi,
        res.max_abs, res.max_eps, res.argmax_norm, res.gamma_x, res.gamma_y,
    )


def lod_scan(
    cfg: LodScanConfig, f: ArithFn | None = None, workers: int = 1
) -> list[LodTable]:
    """Run the modulus sweep for every N in the grid and aggregate E(N, Q).

    Moduli run over one canonical associate per class with 2 <= norm(q) <= Q.
    Parallelism is across moduli; records are assembled in (norm, x, y) order
    regardless of worker count, so results are identical for any `workers`.
    """
    global _SWEEP_CTX
    ring = make_ring(cfg.d)
    max_hi = _floor_sq(max(cfg.N_grid))
    if f is None:
        table = sieve_primes(ring, max_hi)
        f = tabulate(cfg.f_spec, ring, max_hi, table)
    if f.norm_bound < max_hi:
        raise TableTooSmall(f"f covers norm {f.norm_bound}, grid needs {max_hi}")
    out = []
    for n in cfg.N_grid:
        region = a0(ring, n)
        cnt = count_region(region)
        q_bound = cfg.q_bound(cnt, n)
        moduli = [
            q for q in canonical_classes(ring, int(q_bound)) if q.norm() >= 2
        ] if q_bound >= 2 else []
        tab = LodTable(n, q_bound, cnt, degenerate=not moduli)
        if moduli:
            xs, ys, norms = element_arrays(ring.d, 1, region.hi_sq)
            fv = _fvals(f, xs, ys)
            _SWEEP_CTX = {"d": ring.d, "xs": xs, "ys": ys, "norms": norms, "fv": fv}
            coords = [(q.x, q.y) for q in moduli]
            if workers > 1:
                mp = multiprocessing.get_context("fork")
                with mp.Pool(workers) as pool:
                    tab.records = pool.map(
                        _sweep_task, coords, chunksize=max(1, len(coords) // (4 * workers))
                    )
            else:
                tab.records = [_sweep_task(qc) for qc in coords]
            _SWEEP_CTX = {}
        out.append(tab)
    return out


# -- Siegel-Walfisz sums ---------------------------------------------------


def sw_sum(f: ArithFn, n: float, chi: DirichletCharacter) -> complex:
    """Character-twisted sum of f over the elements of A0(N)."""
    hi = _floor_sq(n)
    if hi > f.norm_bound:
        raise TableTooSmall(f"N^2 = {hi} beyond table {f.norm_bound}")
    m = chi.modulus
    xs, ys, _ = element_arrays(f.ring.d, 1, hi)
    fv = _fvals(f, xs, ys)
    rid = _rids(m, xs, ys)
    cid = _coprime_index(m)[rid] if m.norm > 1 else np.zeros(len(rid), dtype=np.int64)
    table = np.array(
        [complex(v) for v in (chi.value_of_rid(r) for r in m.unit_rids)],
        dtype=np.complex128,
    )
    chi_vals = np.where(cid >= 0, table[np.maximum(cid, 0)], 0j)
    return complex((fv * chi_vals).sum())


def sw_term(
    f: ArithFn, n: float, chi: DirichletCharacter, bound_power: float
) -> tuple[complex, float]:
    """(twisted sum, |sum| * (log N)^bound_power / count); non-principal only."""
    if chi.is_principal:
        raise PrincipalCharacter("the cancellation bound needs a non-principal chi")
    s = sw_sum(f, n, chi)
    cnt = count_region(a0(f.ring, n))
    return s, abs(s) * math.log(n) ** bound_power / cnt


@dataclass
class SWReport:
    n: float
    d_power: float
    bound_power: float
    modulus_cap: float
    rows: list[dict]
    max_scaled: float


def sw_check(
    f: ArithFn, n: float, d_power: float, bound_power: float | None = None
) -> SWReport:
    """Scan all moduli of norm <= (log N)^D and all non-principal characters.

    The scaled column is |sum| * (log N)^bound_power / |A0(N)|; bound_power
    defaults to 3*D but both exponents are independent knobs.
    """
    if bound_power is None:
        bound_power = 3.0 * d_power
    ring = f.ring
    cap = math.log(n) ** d_power
    rows = []
    max_scaled = 0.0
    for q in canonical_classes(ring, int(cap)):
        if q.norm() < 2:
            continue
        m = Modulus(ring, q)
        for chi in m.characters:
            if chi.is_principal:
                continue
            s, scaled = sw_term(f, n, chi, bound_power)
            rows.append(
                {
                    "q_x": q.x, "q_y": q.y, "q_norm": q.norm(),
                    "exponents": chi.exponents,
                    "abs_sum": abs(s), "scaled": scaled,
                }
            )
            max_scaled = max(max_scaled, scaled)
    return SWReport(n, d_power, bound_power, cap, rows, max_scaled)


# -- convolution experiment ------------------------------------------------


@dataclass
class ConvolutionReport:
    config: LodScanConfig
    rows: list[dict]
    decaying: dict[str, bool]


def convolution_experiment(
    f: ArithFn, g: ArithFn, cfg: LodScanConfig, workers: int = 1
) -> ConvolutionReport:
    """Side-by-side normalized E(N, Q) for f, g and f*g on one grid."""
    h = convolve(f, g)
    scans_f = lod_scan(cfg, f, workers)
    scans_g = scans_f if g is f else lod_scan(cfg, g, workers)
    scans_h = lod_scan(cfg, h, workers)
    rows = []
    for tf, tg, th in zip(scans_f, scans_g, scans_h):
        rows.append(
            {
                "N": tf.n,
                "E_f_norm": tf.normalized,
                "E_g_norm": tg.normalized,
                "E_conv_norm": th.normalized,
            }
        )
    decaying = {
        key: all(a[key] > b[key] for a, b in zip(rows, rows[1:]))
        for key in ("E_f_norm", "E_g_norm", "E_conv_norm")
    }
    return ConvolutionReport(cfg, rows, decaying)


# -- large sieve -----------------------------------------------------------


def _check_weight(weight: Sequence[tuple[float, float]]):
    xs = [w[0] for w in weight]
    ys = [w[1] for w in weight]
    if len(weight) < 2 or any(b <= a for a, b in zip(xs, xs[1:])):
        raise UnsupportedWeight("weight knots must have strictly increasing x")
    if any(v <= 0 for v in ys) or any(b > a for a, b in zip(ys, ys[1:])):
        raise UnsupportedWeight("weight must be positive and non-increasing")


def _weight_eval(weight, x: float) -> float:
    xs = [w[0] for w in weight]
    ys = [w[1] for w in weight]
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    for (x0, y0), (x1, y1) in zip(weight, weight[1:]):
        if x0 <= x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise AssertionError


def large_sieve_ratios(
    coeff_matrix: np.ndarray,
    elements: list[AlgInt],
    q1: float,
    q2: float,
    region: NormRegion,
    weight: Sequence[tuple[float, float]] | None = None,
) -> list[tuple[float, float, float]]:
    """(lhs, rhs, ratio) per coefficient vector, sharing character machinery.

    Default weight None is the 1/x specialization: lhs sums (1/phi(q)) times
    the squared primitive character sums, rhs = (|A0(N)|/Q1 + Q2) * sum|c|^2.
    A tabulated weight w switches to the general form with factor
    w(|q|)*|q|/phi(q) and rhs = (w(Q1)(Q1^2 + |A0(N)|) + int x w(x) dx) * sum|c|^2.
    """
    if not q1 < q2:
        raise EmptyModulusRange(f"need Q1 < Q2, got {q1} >= {q2}")
    if weight is not None:
        _check_weight(weight)
    ring = region.ring
    for xi in elements:
        if not region.contains(xi):
            raise ValueError(f"coefficient support {xi} outside the region")
    coeff_matrix = np.asarray(coeff_matrix, dtype=np.complex128)
    if coeff_matrix.ndim == 1:
        coeff_matrix = coeff_matrix[None, :]
    n_vec = coeff_matrix.shape[0]
    xs = np.array([z.x for z in elements], dtype=np.int64)
    ys = np.array([z.y for z in elements], dtype=np.int64)
    lhs = np.zeros(n_vec)
    for q in canonical_classes(ring, int(q2)):
        nq = q.norm()
        if nq <= q1 or nq < 2:
            continue
        m = Modulus(ring, q)
        prims = m.primitive_characters()
        if not prims:
            continue
        p_mat = np.exp(2j * np.pi * m.character_phase_matrix(prims))  # (n_prim, phi)
        cid = _coprime_index(m)[_rids(m, xs, ys)]
        v = p_mat[:, np.maximum(cid, 0)]
        v[:, cid < 0] = 0
        s = v @ coeff_matrix.T  # (n_prim, n_vec)
        contrib = (np.abs(s) ** 2).sum(axis=0)
        factor = (
            1.0 / m.phi if weight is None else _weight_eval(weight, nq) * nq / m.phi
        )
        lhs += factor * contrib
    c_sq = (np.abs(coeff_matrix) ** 2).sum(axis=1)
    cnt = count_region(a0(ring, region.n))
    if weight is None:
        rhs_factor = cnt / q1 + q2
    else:
        grid = sorted({q1, q2, *(x for x, _ in weight if q1 < x < q2)})
        integral = 0.0
        for x0, x1 in zip(grid, grid[1:]):
            y0 = x0 * _weight_eval(weight, x0)
            y1 = x1 * _weight_eval(weight, x1)
            integral += 0.5 * (y0 + y1) * (x1 - x0)
        rhs_factor = _weight_eval(weight, q1) * (q1 * q1 + cnt) + integral
    out = []
    for i in range(n_vec):
        rhs = rhs_factor * float(c_sq[i])
        l = float(lhs[i])
        out.append((l, rhs, l / rhs if rhs > 0 else 0.0))
    return out


def large_sieve_ratio(
    coeffs: dict[AlgInt, complex],
    q1: float,
    q2: float,
    region: NormRegion,
    weight: Sequence[tuple[float, float]] | None = None,
) -> tuple[float, float, float]:
    """Single-vector form of large_sieve_ratios."""
    elements = sorted(coeffs, key=lambda z: (z.norm(), z.x, z.y))
    vec = np.array([coeffs[z] for z in elements], dtype=np.complex128)
    return large_sieve_ratios(vec, elements, q1, q2, region, weight)[0]


# -- Mertens sums ----------------------------------------------------------


@dataclass
class MertensReport:
    r: int
    ideal_sum: float
    prime_sum: float
    ideal_ratio: float
    prime_ratio: float


def mertens_sums(ring: RingDescriptor, r: int) -> MertensReport:
    """sum 1/norm over ideal classes and prime classes of norm <= R.

    R = 2 is allowed (its log-log ratio is negative and only the sums are
    meaningful there).
    """
    if r < 2:
        raise ValueError("R must be >= 2")
    ideal_sum = math.fsum(1.0 / c.norm() for c in canonical_classes(ring, r))
    table = sieve_primes(ring, r)
    prime_sum = math.fsum(1.0 / p.norm() for p in table.primes)
    return MertensReport(
        r,
        ideal_sum,
        prime_sum,
        ideal_sum / math.log(r),
        prime_sum / math.log(math.log(r)),
    )


# -- CSV emission ----------------------------------------------------------


def config_json(cfg) -> str:
    out = asdict(cfg)
    out["version"] = 1
    return json.dumps(out, sort_keys=True, separators=(",", ":"))


def write_lod_csv(tables: list[LodTable], cfg: LodScanConfig, path) -> None:
    """Per-modulus rows plus one aggregate row per N."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# config: {config_json(cfg)}\n")
        fh.write(
            "N,Q,q_x,q_y,q_norm,phi,max_eps_re,max_eps_im,max_eps_abs,"
            "argmax_M,argmax_gamma_x,argmax_gamma_y\n"
        )
        for tab in tables:
            for rec in tab.records:
                fh.write(
                    f"{repr(float(tab.n))},{repr(tab.q_bound)},{rec.q_x},{rec.q_y},"
                    f"{rec.q_norm},{rec.phi},{repr(rec.max_eps.real)},"
                    f"{repr(rec.max_eps.imag)},{repr(rec.max_abs)},"
                    f"{repr(math.sqrt(rec.argmax_norm))},{rec.gamma_x},{rec.gamma_y}\n"
                )
            fh.write(
                f"{repr(float(tab.n))},{repr(tab.q_bound)},,,aggregate,{tab.count},,,"
                f"{repr(tab.aggregate)},,,\n"
            )


def write_conv_csv(report: ConvolutionReport, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# config: {config_json(report.config)}\n")
        fh.write("N,E_f_norm,E_g_norm,E_conv_norm\n")
        for row in report.rows:
            fh.write(
                f"{repr(float(row['N']))},{repr(row['E_f_norm'])},"
                f"{repr(row['E_g_norm'])},{repr(row['E_conv_norm'])}\n"
            )
