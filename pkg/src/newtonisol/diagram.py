"""Newton diagrams of shifted polynomials and certified cluster detection.

For a point ``z`` the diagram is the lower convex hull of the points
``(i, -log|f_i(z)|)`` where ``f_i(z) = f^(i)(z)/i!``.  The hull slopes give
the scale factors ``rho_k``; ``Delta_k = rho_{k+1}/rho_k``.  A large
deviation certifies a cluster of ``k`` roots near ``z``.

Every ``rho_k`` is an irrational ``d``-th root of an exact rational, so the
diagram hands out dyadic enclosures.  Threshold decisions are one-sided:
the enclosure is tried first, then refined, then settled by an exact
integer cross-power comparison, so every decision terminates with a
certified answer.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import gmpy2

from .arith import Dyadic, to_fraction
from .poly import Polynomial

#: rational upper bound on c0 = 27 * 6 * e**6 = 65355.46...
C0_THRESHOLD = Fraction(65356)
#: float value of c0, for oracle geometry only (never used for certification)
C0 = 27 * 6 * math.exp(6)
#: deviation that certifies a root cluster
CLUSTER_THRESHOLD = Fraction(27)

#: default enclosure precision: relative width below 2**-6
DEFAULT_BITS = 7
_REFINE_BITS = (16, 40, 96, 256)
#: cap on the enclosure precision tried before falling back to exact comparison
MAX_REFINE_BITS = int(os.environ.get("NEWTONISOL_MAX_BITS", "96"))


def _ladder() -> tuple:
    return (DEFAULT_BITS,) + tuple(b for b in _REFINE_BITS if b <= MAX_REFINE_BITS)

INF = math.inf


class DegenerateDiagram(ValueError):
    """The shifted polynomial has fewer than two nonzero coefficients."""


class NotCertified(ValueError):
    """A certificate was requested at a point where the deviation is too small."""


class Undefined(ValueError):
    """An alpha-theory quantity is undefined because ``f^(k)(z) = 0``."""


def log2_fraction(x: Fraction) -> float:
    """Approximate ``log2(x)`` for a positive rational of any size."""
    p, q = x.numerator, x.denominator
    bp, bq = p.bit_length(), q.bit_length()
    sp, sq = max(bp - 60, 0), max(bq - 60, 0)
    return math.log2(p >> sp) + sp - math.log2(q >> sq) - sq


def root_bounds(r: Fraction, d: int, bits: int = DEFAULT_BITS) -> tuple[Dyadic, Dyadic]:
    """Dyadic ``lo <= r**(1/d) <= hi`` with ``hi/lo <= 1 + 2**-bits``."""
    if r == 0:
        z = Dyadic(0)
        return z, z
    p, q = r.numerator, r.denominator
    s = bits + 2 - math.floor(log2_fraction(r) / d)
    while True:
        sh = s * d
        if sh >= 0:
            num, den = p << sh, q
        else:
            num, den = p, q << -sh
        N, rem = divmod(num, den)
        t, exact = gmpy2.iroot(gmpy2.mpz(N), d)
        t = int(t)
        if t.bit_length() <= bits:
            s += bits + 1 - t.bit_length()
            continue
        lo = Dyadic(t, -s)
        hi = lo if (exact and rem == 0) else Dyadic(t + 1, -s)
        return lo, hi


def _root_cmp(r: Fraction, d: int, x: Fraction) -> int:
    """Sign of ``r**(1/d) - x`` (exact; ``x >= 0``)."""
    rhs = x ** d
    return (r > rhs) - (r < rhs)


def _root_ratio_cmp(r2: Fraction, d2: int, r1: Fraction, d1: int, t: Fraction) -> int:
    """Sign of ``r2**(1/d2) - t * r1**(1/d1)`` for nonnegative inputs (exact)."""
    lhs = r2 ** d1
    rhs = t ** (d1 * d2) * r1 ** d2
    return (lhs > rhs) - (lhs < rhs)


def _hull_keep(a0, a1, a2, x0, x1, x2, l0, l1, l2) -> bool:
    """True if point 1 lies strictly below the segment from point 0 to point 2.

    Points are ``(x, -log a)``.  Decided in floating point when clear,
    otherwise by comparing ``(a0/a1)**(x2-x1)`` with ``(a1/a2)**(x1-x0)``.
    """
    lhs = (l0 - l1) * (x2 - x1)
    rhs = (l1 - l2) * (x1 - x0)
    scale = abs(lhs) + abs(rhs) + 1.0
    if rhs - lhs > 1e-9 * scale:
        return True
    if lhs - rhs > 1e-9 * scale:
        return False
    return (a0 / a1) ** (x2 - x1) < (a1 / a2) ** (x1 - x0)


class NewtonDiagram:
    """Lower hull of ``(i, -log m_i)`` over the nonzero magnitudes ``m_i``.

    ``magnitudes[i]`` is ``|f_i(z)|`` up to a common positive factor.
    ``rho_bounds[k]`` is a dyadic enclosure of ``rho_k`` for ``1 <= k <= n``;
    entry ``n + 1`` is the infinite sentinel.
    """

    def __init__(self, magnitudes: Sequence, point=None):
        mags = [abs(to_fraction(m)) for m in magnitudes]
        while mags and mags[-1] == 0:
            mags.pop()
        support = [i for i, m in enumerate(mags) if m]
        if len(support) < 2:
            raise DegenerateDiagram("diagram needs at least two nonzero coefficients")
        self.point = point
        self.magnitudes = tuple(mags)
        self.n = len(mags) - 1
        logs = {i: log2_fraction(mags[i]) for i in support}
        hull: list[int] = []
        for i in support:
            while len(hull) >= 2:
                i0, i1 = hull[-2], hull[-1]
                if _hull_keep(mags[i0], mags[i1], mags[i], i0, i1, i, logs[i0], logs[i1], logs[i]):
                    break
                hull.pop()
            hull.append(i)
        self.hull_indices = tuple(hull)
        self._vertex_set = frozenset(hull)
        # edge_of[k] = (i, j): hull edge covering [k-1, k]; None means rho_k = 0
        edge_of: list[Optional[tuple[int, int]]] = [None] * (self.n + 1)
        for i, j in zip(hull, hull[1:]):
            for k in range(i + 1, j + 1):
                edge_of[k] = (i, j)
        self._edge_of = edge_of
        self._edge_cache: dict[tuple[int, int, int], tuple[Dyadic, Dyadic]] = {}
        self.rho_bounds = [None] + [self.rho(k) for k in range(1, self.n + 1)] + [(INF, INF)]

    def __repr__(self):
        return f"NewtonDiagram(n={self.n}, hull={list(self.hull_indices)})"

    # -- exact data -------------------------------------------------------

    def is_vertex(self, k: int) -> bool:
        return k in self._vertex_set

    def rho_exact(self, k: int) -> Optional[tuple[Fraction, int]]:
        """``(r, d)`` with ``rho_k = r**(1/d)``; ``None`` when ``rho_k = 0``."""
        e = self._edge_of[k]
        if e is None:
            return None
        i, j = e
        return self.magnitudes[i] / self.magnitudes[j], j - i

    def heights(self) -> list[float]:
        """Diagram heights ``y_k`` in natural-log units (diagnostics only)."""
        def y(i):
            return -math.log(2) * log2_fraction(self.magnitudes[i])

        ys = []
        for k in range(self.n + 1):
            if k < self.hull_indices[0]:
                ys.append(INF)
            elif k in self._vertex_set:
                ys.append(y(k))
            else:
                i, j = self._edge_of[k]
                ys.append(y(i) + (y(j) - y(i)) * (k - i) / (j - i))
        return ys

    # -- enclosures -------------------------------------------------------

    def rho(self, k: int, bits: int = DEFAULT_BITS) -> tuple:
        """Dyadic enclosure ``(lo, hi)`` of ``rho_k``; ``(inf, inf)`` for ``k = n+1``."""
        if k == self.n + 1:
            return INF, INF
        if not 1 <= k <= self.n:
            raise IndexError(f"rho index {k} outside 1..{self.n + 1}")
        e = self._edge_of[k]
        if e is None:
            z = Dyadic(0)
            return z, z
        key = (e[0], e[1], bits)
        got = self._edge_cache.get(key)
        if got is None:
            r, d = self.rho_exact(k)
            got = root_bounds(r, d, bits)
            self._edge_cache[key] = got
        return got

    def rho_lo(self, k: int, bits: int = DEFAULT_BITS) -> Fraction:
        lo = self.rho(k, bits)[0]
        return lo if lo == INF else lo.to_fraction()

    def rho_hi(self, k: int, bits: int = DEFAULT_BITS) -> Fraction:
        hi = self.rho(k, bits)[1]
        return hi if hi == INF else hi.to_fraction()

    def compare_rho(self, k: int, x) -> int:
        """Certified sign of ``rho_k - x``."""
        x = to_fraction(x)
        if k == self.n + 1:
            return 1
        for bits in _ladder():
            lo, hi = self.rho(k, bits)
            lo, hi = lo.to_fraction(), hi.to_fraction()
            if lo > x:
                return 1
            if hi < x:
                return -1
            if lo == hi == x:
                return 0
        ex = self.rho_exact(k)
        if ex is None:
            return (0 > x) - (0 < x)
        return _root_cmp(ex[0], ex[1], x)

    def deviation(self, k: int, bits: int = DEFAULT_BITS) -> tuple:
        """Enclosure ``(lo, hi)`` of ``Delta_k = rho_{k+1}/rho_k`` as rationals."""
        if not 0 < k < self.n:
            raise IndexError(f"deviation index {k} outside 1..{self.n - 1}")
        lo1, hi1 = self.rho(k, bits)
        lo2, hi2 = self.rho(k + 1, bits)
        if hi1 == 0:
            return INF, INF
        lo = lo2.to_fraction() / hi1.to_fraction()
        hi = INF if lo1 == 0 else hi2.to_fraction() / lo1.to_fraction()
        return lo, hi

    def deviation_at_least(self, k: int, t) -> bool:
        """Certified test ``Delta_k >= t``."""
        t = to_fraction(t)
        for bits in _ladder():
            lo, hi = self.deviation(k, bits)
            if lo >= t:
                return True
            if hi < t:
                return False
        e1, e2 = self.rho_exact(k), self.rho_exact(k + 1)
        if e1 is None:
            return True
        return _root_ratio_cmp(e2[0], e2[1], e1[0], e1[1], t) >= 0

    def certified_deviation_lower(self, k: int, t) -> Optional[Fraction]:
        """A certified lower bound on ``Delta_k`` that is ``>= t``, or ``None``
        if ``Delta_k < t``."""
        t = to_fraction(t)
        if not self.deviation_at_least(k, t):
            return None
        best = t
        for bits in _ladder():
            lo = self.deviation(k, bits)[0]
            if lo >= t:
                best = lo
                break
        return best


def _dyadic_floor(x: Fraction, bits: int = 64) -> Dyadic:
    """Dyadic lower bound on ``x > 0`` with about ``bits`` significant bits."""
    if x <= 0:
        return Dyadic(0)
    s = bits - math.floor(log2_fraction(x))
    return Dyadic.round(x, s, "floor")


def _dyadic_ceil(x: Fraction, bits: int = 64) -> Dyadic:
    if x <= 0:
        return Dyadic(0)
    s = bits - math.floor(log2_fraction(x))
    return Dyadic.round(x, s, "ceil")


@lru_cache(maxsize=8192)
def _diagram_cached(f: Polynomial, z: Fraction) -> NewtonDiagram:
    return NewtonDiagram(f.shifted_magnitudes(z), point=z)


def build_diagram(f: Polynomial, z) -> NewtonDiagram:
    """Newton diagram of ``f(x + z)``.

    The magnitudes are those of the exact Taylor coefficients ``f_i(z)``
    up to a common positive factor.
    """
    return _diagram_cached(f, to_fraction(z))


def deviation(d: NewtonDiagram, k: int) -> tuple:
    return d.deviation(k)


@dataclass(frozen=True)
class AdmissibleValue:
    """A cluster size ``k`` with ``Delta_k`` certified above the c0 threshold."""

    k: int
    delta_lower_bound: Fraction
    inclusion_radius_hi: Dyadic  # upper bound on 3 rho_k
    exclusion_radius_lo: Dyadic  # lower bound on rho_{k+1} / 3

    def __post_init__(self):
        if self.delta_lower_bound < C0_THRESHOLD:
            raise ValueError("admissible value below the c0 threshold")


def admissible_from_diagram(d: NewtonDiagram, threshold=C0_THRESHOLD) -> list[AdmissibleValue]:
    out = []
    for k in d.hull_indices:
        if not 2 <= k < d.n:
            continue
        lower = d.certified_deviation_lower(k, threshold)
        if lower is None:
            continue
        out.append(admissible_value(d, k, lower))
    return out


def admissible_value(d: NewtonDiagram, k: int, lower: Fraction) -> AdmissibleValue:
    inner = 3 * d.rho(k)[1]
    outer = _dyadic_floor(d.rho_lo(k + 1) / 3)
    return AdmissibleValue(k, lower, inner, outer)


def admissible_values(f: Polynomial, z) -> list[AdmissibleValue]:
    """All hull vertices ``2 <= k < n`` with ``Delta_k(z)`` certified ``>= C0_THRESHOLD``."""
    try:
        d = build_diagram(f, z)
    except DegenerateDiagram:
        return []
    return admissible_from_diagram(d)


@dataclass(frozen=True)
class ClusterCertificate:
    count: int
    center: Dyadic
    inner_radius: Dyadic  # 3 rho_k^hi: contains exactly `count` roots
    outer_radius: Dyadic  # rho_{k+1}^lo / 3: contains the same roots


def cluster_certificate(f: Polynomial, z, k: int) -> ClusterCertificate:
    """Certify exactly ``k`` roots in both ``D(z, 3 rho_k)`` and ``D(z, rho_{k+1}/3)``."""
    d = build_diagram(f, z)
    if not 0 < k < d.n or not d.deviation_at_least(k, CLUSTER_THRESHOLD):
        raise NotCertified(f"Delta_{k} is not certified >= 27 at {z}")
    inner = 3 * d.rho(k)[1]
    outer = _dyadic_floor(d.rho_lo(k + 1) / 3)
    return ClusterCertificate(k, Dyadic.coerce(z), inner, outer)


@dataclass(frozen=True)
class AlphaQuantities:
    beta: Fraction
    gamma_upper: Fraction
    alpha_upper: Fraction


def alpha_theory_quantities(f: Polynomial, z, k: int, bits: int = 24) -> AlphaQuantities:
    """``beta_k`` exactly, and upper bounds on ``gamma_k`` and ``alpha_k``
    for Newton's method on ``f^(k-1)`` at ``z``."""
    z = to_fraction(z)
    n = f.degree
    fk = f.derivative(k).eval(z) if k <= n else Fraction(0)
    if fk == 0:
        raise Undefined(f"f^({k}) vanishes at {z}")
    beta = abs(f.derivative(k - 1).eval(z) / fk)
    shifted = f.taylor_shift(z).coeffs  # shifted[m] = f_m(z) = f^(m)(z)/m!
    gamma = Fraction(0)
    for j in range(1, n - k + 1):
        # |f^(k+j)(z) / ((j+1)! f^(k)(z))| = |f_{k+j}| (k+j)! / ((j+1)! k! |f_k|)
        num = abs(shifted[k + j]) * math.factorial(k + j)
        if num == 0:
            continue
        r = num / (math.factorial(j + 1) * math.factorial(k) * abs(shifted[k]))
        hi = root_bounds(r, j, bits)[1].to_fraction()
        gamma = max(gamma, hi)
    return AlphaQuantities(beta, gamma, beta * gamma)


def pellet_test(f: Polynomial, z, k: int, r) -> bool:
    """Exact Pellet test ``|a_k| r**k > sum_{i != k} |a_i| r**i`` on ``f(x + z)``.

    When true, ``D(z, r)`` contains exactly ``k`` roots of ``f``.
    """
    mags = f.shifted_magnitudes(z)
    r = to_fraction(r)
    lhs = mags[k] * r ** k
    rhs = sum(m * r ** i for i, m in enumerate(mags) if i != k)
    return lhs > rhs
