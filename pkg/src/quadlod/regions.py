"""Annulus sets of algebraic integers selected by exact squared-norm bounds.

A region holds integer bounds lo_sq <= norm(xi) <= hi_sq, derived once from the
real parameters (Y', Y, N, b) by exact rational squaring, so every membership
test afterwards is an integer comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import BoundsTooLarge
from .rings import AlgInt, RingDescriptor, make_ring

# Memory guard: enumeration materializes ~pi*hi_sq coordinates.
DEFAULT_GUARD = 1 << 24


@dataclass(frozen=True)
class NormRegion:
    ring: RingDescriptor
    lo_sq: int
    hi_sq: int
    # original real parameters, kept for reporting
    y_prime: float = 1.0
    y_shift: float = 0.0
    n: float = 1.0
    b: float = 1.0

    @staticmethod
    def from_params(
        ring: RingDescriptor, y_prime: float, y_shift: float, n: float, b: float = 1.0
    ) -> NormRegion:
        """Region Y' <= |embedding| <= Y + N^b, squared exactly before rounding."""
        lo = Fraction(y_prime) ** 2
        hi_radius = Fraction(y_shift) + _pow_exact(n, b)
        hi = hi_radius * hi_radius
        return NormRegion(
            ring, _ceil_frac(lo), _floor_frac(hi), y_prime, y_shift, n, b
        )

    @staticmethod
    def from_radii(ring: RingDescriptor, lo_radius: float, hi_radius: float) -> NormRegion:
        """Region lo <= |embedding| <= hi; the two-argument annulus convention."""
        lo = Fraction(lo_radius) ** 2
        hi = Fraction(hi_radius) ** 2
        return NormRegion(
            ring, _ceil_frac(lo), _floor_frac(hi),
            lo_radius, lo_radius, hi_radius - lo_radius, 1.0,
        )

    def contains(self, xi: AlgInt) -> bool:
        if xi.is_zero():
            return False
        return max(self.lo_sq, 1) <= xi.norm() <= self.hi_sq


def a0(ring: RingDescriptor, n: float) -> NormRegion:
    """The basic set 1 <= norm(xi) <= N^2."""
    return NormRegion.from_params(ring, 1.0, 0.0, n, 1.0)


def _pow_exact(n: float, b: float) -> Fraction:
    if float(b).is_integer():
        return Fraction(n) ** int(b)
    return Fraction(math.pow(n, b))


def _floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _y_max(ring: RingDescriptor, hi_sq: int) -> int:
    # |y| <= sqrt(4*hi_sq/|D_K|), tightened to the exact integer bound
    y = math.isqrt(4 * hi_sq // abs(ring.disc))
    while (y + 1) * (y + 1) * abs(ring.disc) <= 4 * hi_sq:
        y += 1
    while y * y * abs(ring.disc) > 4 * hi_sq:
        y -= 1
    return y


def _x_interval(ring: RingDescriptor, y: int, bound: int) -> tuple[int, int] | None:
    """Integer x with norm(x + y*omega) <= bound, as a closed interval."""
    if bound < 0:
        return None
    if ring.one_mod_four:
        # (2x + y)^2 <= 4*bound - |d|*y^2
        r = 4 * bound + ring.d * y * y
        if r < 0:
            return None
        s = math.isqrt(r)
        # x in [ceil((-s-y)/2), floor((s-y)/2)]; floor division handles signs
        return (-((s + y) // 2), (s - y) // 2)
    r = bound + ring.d * y * y
    if r < 0:
        return None
    s = math.isqrt(r)
    return (-s, s)


def count_region(region: NormRegion, guard: int = DEFAULT_GUARD) -> int:
    """Number of elements in the region, without materializing them."""
    lo = max(region.lo_sq, 1)
    hi = region.hi_sq
    if hi < lo:
        return 0
    if hi > guard:
        raise BoundsTooLarge(f"hi_sq={hi} exceeds guard={guard}")
    ring = region.ring
    total = 0
    for y in range(-_y_max(ring, hi), _y_max(ring, hi) + 1):
        outer = _x_interval(ring, y, hi)
        if outer is None:
            continue
        total += outer[1] - outer[0] + 1
        inner = _x_interval(ring, y, lo - 1)
        if inner is not None:
            total -= inner[1] - inner[0] + 1
    # the two disc counts both include the zero element, which cancels,
    # except when lo == 1 where the inner disc is exactly {0}
    return total


def element_arrays(
    ring_d: int, lo_sq: int, hi_sq: int, guard: int = DEFAULT_GUARD
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(xs, ys, norms) of all elements in the annulus, sorted by (norm, x, y).

    This is the single source of truth for enumeration order; the AlgInt
    stream and the vectorized scans both read from it.
    """
    return _element_arrays_cached(ring_d, max(lo_sq, 1), hi_sq, guard)


@lru_cache(maxsize=8)
def _element_arrays_cached(ring_d, lo, hi, guard):
    ring = make_ring(ring_d)
    if hi > guard:
        raise BoundsTooLarge(f"hi_sq={hi} exceeds guard={guard}")
    xs_parts: list[np.ndarray] = []
    ys_parts: list[np.ndarray] = []
    if hi >= lo:
        for y in range(-_y_max(ring, hi), _y_max(ring, hi) + 1):
            outer = _x_interval(ring, y, hi)
            if outer is None:
                continue
            inner = _x_interval(ring, y, lo - 1)
            if inner is None:
                spans = [outer]
            else:
                spans = [(outer[0], inner[0] - 1), (inner[1] + 1, outer[1])]
            for a, b in spans:
                if b < a:
                    continue
                xs_parts.append(np.arange(a, b + 1, dtype=np.int64))
                ys_parts.append(np.full(b - a + 1, y, dtype=np.int64))
    if not xs_parts:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    xs = np.concatenate(xs_parts)
    ys = np.concatenate(ys_parts)
    if ring.one_mod_four:
        norms = xs * xs + xs * ys + ys * ys * ((1 - ring.d) // 4)
    else:
        norms = xs * xs - ring.d * ys * ys
    order = np.lexsort((ys, xs, norms))
    xs, ys, norms = xs[order], ys[order], norms[order]
    xs.setflags(write=False)
    ys.setflags(write=False)
    norms.setflags(write=False)
    return xs, ys, norms


def enumerate_region(region: NormRegion, guard: int = DEFAULT_GUARD) -> Iterator[AlgInt]:
    """Yield the region's elements exactly once, sorted by (norm, x, y)."""
    xs, ys, _ = element_arrays(region.ring.d, region.lo_sq, region.hi_sq, guard)
    ring = region.ring
    for x, y in zip(xs.tolist(), ys.tolist()):
        yield AlgInt(ring, x, y)


def canonical_classes(
    ring: RingDescriptor, max_norm: int, guard: int = DEFAULT_GUARD
) -> list[AlgInt]:
    """Canonical associate representatives of norm 1..max_norm, sorted."""
    xs, ys, _ = element_arrays(ring.d, 1, max_norm, guard)
    cxs, cys = canonical_coords(ring, xs, ys)
    keep = (cxs == xs) & (cys == ys)
    return [AlgInt(ring, x, y) for x, y in zip(xs[keep].tolist(), ys[keep].tolist())]


def canonical_coords(
    ring: RingDescriptor, xs: np.ndarray, ys: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized canonical-associate coordinates (zero maps to itself)."""
    cx = xs.copy()
    cy = ys.copy()
    if ring.w_K == 2:
        flip = (cy < 0) | ((cy == 0) & (cx < 0))
        cx[flip] = -cx[flip]
        cy[flip] = -cy[flip]
        return cx, cy
    nonzero = (cx != 0) | (cy != 0)
    for _ in range(ring.w_K - 1):
        out = (cx > 0) & (cy >= 0)
        rot = nonzero & ~out
        if not rot.any():
            break
        rx, ry = cx[rot], cy[rot]
        if ring.d == -1:
            cx[rot], cy[rot] = -ry, rx  # multiply by i
        else:
            cx[rot], cy[rot] = -ry, rx + ry  # multiply by omega (d = -3)
    return cx, cy


def density_ratio(ring: RingDescriptor, n: float, guard: int = DEFAULT_GUARD) -> float:
    """count(A0(N)) over the lattice-point model 2*pi*N^2/sqrt(|D_K|)."""
    cnt = count_region(a0(ring, n), guard)
    return cnt / (2.0 * math.pi * n * n / math.sqrt(abs(ring.disc)))
