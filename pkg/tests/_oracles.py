"""Independent brute-force oracles shared by the test modules.

These deliberately avoid the library's optimized code paths: membership by
double loops over coordinates, divisors by exhaustive norm solving, maxima by
fresh per-breakpoint summation.
"""

from __future__ import annotations

import math

import numpy as np

from quadlod.rings import AlgInt, canonical_associate, divide_exact


def _coordinate_box(ring, bound):
    # |y| <= sqrt(4*bound/|D|); |x| <= sqrt(bound) + |y| covers both conventions
    yspan = math.isqrt(4 * bound // abs(ring.disc)) + 2
    xspan = math.isqrt(bound) + yspan + 2
    return xspan, yspan


def brute_region_count(ring, lo_sq, hi_sq):
    """Count lattice points with lo_sq <= norm <= hi_sq by a double loop."""
    xspan, yspan = _coordinate_box(ring, hi_sq)
    n = 0
    for x in range(-xspan, xspan + 1):
        for y in range(-yspan, yspan + 1):
            if lo_sq <= AlgInt(ring, x, y).norm() <= hi_sq:
                n += 1
    return n


def brute_norm_solutions(ring, m):
    """Canonical classes of norm exactly m, by scanning a coordinate box."""
    xspan, yspan = _coordinate_box(ring, m)
    out = set()
    for x in range(-xspan, xspan + 1):
        for y in range(-yspan, yspan + 1):
            z = AlgInt(ring, x, y)
            if z.norm() == m:
                c = canonical_associate(z)
                out.add((c.x, c.y))
    return sorted(out)


def brute_common_divisor(ring, alpha, beta):
    """Max-norm common divisor via divisors of gcd of the rational norms."""
    gn = math.gcd(alpha.norm(), beta.norm())
    best = ring.one()
    for m in range(1, gn + 1):
        if gn % m:
            continue
        for cx, cy in brute_divisor_candidates(ring, m):
            cand = AlgInt(ring, cx, cy)
            if divide_exact(alpha, cand) is not None and divide_exact(beta, cand) is not None:
                if cand.norm() > best.norm():
                    best = cand
    return canonical_associate(best)


def brute_divisor_candidates(ring, m):
    """Canonical classes of norm m, found by the exact norm-form solve."""
    out = []
    ymax = math.isqrt(4 * m // abs(ring.disc)) + 1
    seen = set()
    for y in range(-ymax, ymax + 1):
        if ring.one_mod_four:
            r = 4 * m + ring.d * y * y
            if r < 0:
                continue
            s = math.isqrt(r)
            if s * s != r:
                continue
            for sv in {s, -s}:
                if (sv - y) % 2 == 0:
                    c = canonical_associate(AlgInt(ring, (sv - y) // 2, y))
                    if (c.x, c.y) not in seen:
                        seen.add((c.x, c.y))
                        out.append((c.x, c.y))
        else:
            r = m + ring.d * y * y
            if r < 0:
                continue
            s = math.isqrt(r)
            if s * s != r:
                continue
            for sv in {s, -s}:
                c = canonical_associate(AlgInt(ring, sv, y))
                if (c.x, c.y) not in seen:
                    seen.add((c.x, c.y))
                    out.append((c.x, c.y))
    return out


def brute_is_prime(ring, xi, classes_by_norm):
    """No canonical divisor class of norm in [2, norm) divides xi."""
    n = xi.norm()
    for m in range(2, n):
        if n % m:
            continue
        for coords in classes_by_norm.get(m, ()):
            if divide_exact(xi, AlgInt(ring, *coords)) is not None:
                return False
    return True


def cumsum_sweep_max(m, xs, ys, norms, fv):
    """Max |eps| over breakpoints and coprime classes via cumulative sums.

    Independent of the library's running-accumulator sweep: builds one
    cumulative series per residue class with numpy cumsum, then evaluates
    every present norm level.  Division is componentwise like the library.
    """
    from quadlod.lab import _coprime_index, _rids

    phi = m.phi
    if phi == 1:
        return 0.0
    rid = _rids(m, xs, ys)
    cid = _coprime_index(m)[rid]
    levels, level_idx = np.unique(norms, return_inverse=True)
    n_lv = len(levels)
    per_class = np.zeros((phi, n_lv), dtype=np.complex128)
    for i in range(len(xs)):
        c = cid[i]
        if c >= 0:
            per_class[c, level_idx[i]] += fv[i]
    cums = np.cumsum(per_class, axis=1)
    totals = cums.sum(axis=0)
    best_sq = 0.0
    for j in range(n_lv):
        tr = float(totals[j].real) / phi
        ti = float(totals[j].imag) / phi
        for c in range(phi):
            er = float(cums[c, j].real) - tr
            ei = float(cums[c, j].imag) - ti
            sq = er * er + ei * ei
            if sq > best_sq:
                best_sq = sq
    return math.sqrt(best_sq)
