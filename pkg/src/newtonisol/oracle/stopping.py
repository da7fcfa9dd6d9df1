"""The stopping function ``G`` over the real line and its integrals.

Every smooth piece of the integrands here has the form ``w / |x - gamma|``
for a fixed point ``gamma`` and weight ``w``.  Breakpoints (pairwise
bisectors and the ends of the intervals ``J_alpha``) are located exactly
or to about 80 significant bits; each piece is integrated by adaptive Simpson in the
coordinate ``u = x - Re(gamma)`` so that tiny separations survive floating
point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Optional

from ..arith import Interval, to_fraction
from .roots import Point
from .separation import _points


class Unbounded(ValueError):
    pass


_SQRT_BITS = 80


def _sqrt_fraction(x: Fraction) -> Fraction:
    """Square root of ``x >= 0`` truncated to about ``_SQRT_BITS`` significant bits."""
    if x == 0:
        return Fraction(0)
    mag = x.numerator.bit_length() - x.denominator.bit_length()
    b = max(0, _SQRT_BITS - mag // 2)
    return Fraction(math.isqrt((x.numerator << 2 * b) // x.denominator), 1 << b)


def _nearest_two(pts: list[Point], x: Fraction) -> tuple[int, Optional[int], list[Fraction]]:
    d2 = [p.dist2_real(x) for p in pts]
    # ties go to the point with the smaller coordinate
    order = sorted(range(len(pts)), key=lambda i: (d2[i], pts[i].re, pts[i].im))
    return order[0], (order[1] if len(order) > 1 else None), d2


def _j_radius(pts: list[Point], i: int) -> Optional[Fraction]:
    """``d_2(alpha, V) / 2`` for a real root ``alpha = pts[i]``."""
    others = [pts[i].dist2(q) for j, q in enumerate(pts) if j != i]
    if not others:
        return None
    return _sqrt_fraction(min(others)) / 2


def _stopping_piece(pts: list[Point], jr: dict, x: Fraction) -> tuple[int, int]:
    """``(w, j)`` with ``G = w / |x - pts[j]|`` near ``x``."""
    a, b, _ = _nearest_two(pts, x)
    r = jr.get(a)
    if pts[a].is_real and r is not None and abs(x - pts[a].re) < r:
        return 2, b
    return 1, a


def stopping_function(roots, x) -> float:
    """``G(x)``: ``2/d_2(x, V)`` inside the open ``J_alpha`` of a real owner
    ``alpha``, ``1/d(x, V)`` elsewhere.

    With a single root there is no ``J_alpha`` and ``G`` is infinite at a
    real root.
    """
    pts = _points(roots)
    if not pts:
        raise ValueError("empty root set")
    x = to_fraction(x)
    jr = {i: _j_radius(pts, i) for i, p in enumerate(pts) if p.is_real}
    w, j = _stopping_piece(pts, jr, x)
    d2 = pts[j].dist2_real(x)
    if d2 == 0:
        return math.inf
    return w / math.sqrt(d2)


# ---------------------------------------------------------------------------
# quadrature


def _simpson(g: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    """Adaptive Simpson on ``[a, b]``; returns ``(value, error estimate)``."""
    if a == b:
        return 0.0, 0.0
    fa, fm, fb = g(a), g((a + b) / 2), g(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total, err = 0.0, 0.0
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = (a + b) / 2
        lm, rm = (a + m) / 2, (m + b) / 2
        flm, frm = g(lm), g(rm)
        left = (m - a) / 6 * (fa + 4 * flm + fm)
        right = (b - m) / 6 * (fm + 4 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15 * tol or depth >= 60:
            total += left + right + delta / 15
            err += abs(delta) / 15
        else:
            stack.append((a, m, fa, flm, fm, left, tol / 2, depth + 1))
            stack.append((m, b, fm, frm, fb, right, tol / 2, depth + 1))
    return total, err


def _inv_dist_piece(gamma: Point, w: int, lo: Fraction, hi: Fraction, rel: float) -> tuple[float, float]:
    c = gamma.re
    ul, uh = float(lo - c), float(hi - c)
    im2 = float(gamma.im) ** 2
    if ul < 0 < uh and im2 == 0:
        raise Unbounded("integrand is unbounded on the region")
    if im2 == 0 and (ul == 0 or uh == 0):
        raise Unbounded("integrand is unbounded on the region")
    g = lambda u: w / math.sqrt(u * u + im2)
    # scale tolerance with a cheap upper estimate of the piece
    rough = w * closed_form_inv_dist(gamma, lo, hi)
    return _simpson(g, ul, uh, max(rough, 1e-300) * rel)


def closed_form_inv_dist(gamma: Point, r, s) -> float:
    """``integral_r^s dx / |x - gamma|`` in closed form (``gamma`` off ``(r, s)`` if real)."""
    r, s = to_fraction(r), to_fraction(s)
    ul, uh = float(r - gamma.re), float(s - gamma.re)
    if gamma.is_real:
        if ul < 0 < uh:
            return math.inf
        if ul >= 0:
            return math.log(uh / ul) if ul > 0 else math.inf
        return math.log(ul / uh) if uh < 0 else math.inf
    b = abs(float(gamma.im))
    return math.asinh(uh / b) - math.asinh(ul / b)


def _normalize_region(region) -> list[tuple[Fraction, Fraction]]:
    out = []
    for I in region:
        if isinstance(I, Interval):
            lo, hi = I.as_fractions()
        else:
            lo, hi = to_fraction(I[0]), to_fraction(I[1])
        if lo < hi:
            out.append((lo, hi))
    out.sort()
    merged: list[tuple[Fraction, Fraction]] = []
    for lo, hi in out:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return merged


def _bisectors(pts: list[Point]) -> list[Fraction]:
    out = set()
    for p, q in combinations(pts, 2):
        if p.re != q.re:
            # |x - p|^2 = |x - q|^2 on the real line
            out.add(((q.re ** 2 + q.im ** 2) - (p.re ** 2 + p.im ** 2)) / (2 * (q.re - p.re)))
    return sorted(out)


def _piecewise(pts, region, breakpoints, piece_at, rel) -> tuple[float, float]:
    total, err = 0.0, 0.0
    bps = sorted(set(breakpoints))
    for lo, hi in region:
        cuts = [lo] + [b for b in bps if lo < b < hi] + [hi]
        for a, b in zip(cuts, cuts[1:]):
            w, j = piece_at((a + b) / 2)
            v, e = _inv_dist_piece(pts[j], w, a, b, rel)
            total += v
            err += e
    return total, err


def subtract_intervals(region, holes) -> list[tuple[Fraction, Fraction]]:
    """``region`` minus the closed ``holes`` (both lists of pairs)."""
    out = _normalize_region(region)
    for hlo, hhi in _normalize_region(holes):
        nxt = []
        for lo, hi in out:
            if hhi <= lo or hi <= hlo:
                nxt.append((lo, hi))
                continue
            if lo < hlo:
                nxt.append((lo, hlo))
            if hhi < hi:
                nxt.append((hhi, hi))
        out = nxt
    return out


def charge_integral(roots, region: Iterable, rel: float = 1e-6) -> tuple[float, float]:
    """``integral of G`` over the union of ``region`` with an error estimate.

    The error estimate sums the adaptive Simpson estimates of each piece;
    the default target is far below the 1e-3 relative accuracy needed by
    the tree-size checks.
    """
    pts = _points(roots)
    reg = _normalize_region(region)
    if not reg:
        return 0.0, 0.0
    jr = {i: _j_radius(pts, i) for i, p in enumerate(pts) if p.is_real}
    bps = _bisectors(pts)
    for i, r in jr.items():
        if r is not None:
            bps += [pts[i].re - r, pts[i].re + r]
    return _piecewise(pts, reg, bps, lambda x: _stopping_piece(pts, jr, x), rel)


def dense_integral(points, rel: float = 1e-6) -> float:
    """``integral dx / d(x, P)`` over ``(2 D_P on the real line)`` minus the
    closed ``J_p = [p +- sigma_p / 2]`` of the real points."""
    pts = _points(points)
    n = len(pts)
    mre = sum((p.re for p in pts), Fraction(0)) / n
    r = _sqrt_fraction(max(p.dist2_real(mre) for p in pts))
    holes = []
    for i, p in enumerate(pts):
        if p.is_real:
            s = _sqrt_fraction(min(p.dist2(q) for j, q in enumerate(pts) if j != i))
            holes.append((p.re - s / 2, p.re + s / 2))
    region = subtract_intervals([(mre - 2 * r, mre + 2 * r)], holes)

    def piece_at(x):
        a, _, _ = _nearest_two(pts, x)
        return 1, a

    value, _ = _piecewise(pts, region, _bisectors(pts), piece_at, rel)
    return value
