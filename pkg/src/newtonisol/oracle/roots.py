"""Root sets closed under conjugation, and the polynomial families used in tests
and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from ..arith import to_fraction
from ..poly import Polynomial


@dataclass(frozen=True)
class Point:
    re: Fraction
    im: Fraction = Fraction(0)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conj(self) -> "Point":
        return Point(self.re, -self.im)

    def dist2(self, other: "Point") -> Fraction:
        return (self.re - other.re) ** 2 + (self.im - other.im) ** 2

    def dist2_real(self, x: Fraction) -> Fraction:
        return (self.re - x) ** 2 + self.im ** 2

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.is_real:
            return str(self.re)
        return f"{self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i"


class RootSet:
    """A finite set of distinct complex points closed under conjugation."""

    def __init__(self, points: Iterable):
        pts = []
        for p in points:
            if not isinstance(p, Point):
                if isinstance(p, tuple):
                    p = Point(to_fraction(p[0]), to_fraction(p[1]))
                elif isinstance(p, complex):
                    p = Point(Fraction(p.real), Fraction(p.imag))
                else:
                    p = Point(to_fraction(p))
            pts.append(p)
        if len(set(pts)) != len(pts):
            raise ValueError("root set has repeated points")
        s = set(pts)
        if any(p.conj() not in s for p in pts):
            raise ValueError("root set is not closed under conjugation")
        self.points: tuple[Point, ...] = tuple(sorted(pts, key=lambda p: (p.re, p.im)))

    @classmethod
    def of(cls, reals: Iterable = (), pairs: Iterable = ()) -> "RootSet":
        """Real roots plus conjugate pairs ``re +- im i`` given as ``(re, im)``."""
        pts = [Point(to_fraction(r)) for r in reals]
        for re, im in pairs:
            re, im = to_fraction(re), abs(to_fraction(im))
            if im == 0:
                raise ValueError("conjugate pair needs nonzero imaginary part")
            pts += [Point(re, im), Point(re, -im)]
        return cls(pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"RootSet([{', '.join(map(str, self.points))}])"

    @property
    def reals(self) -> list[Fraction]:
        return [p.re for p in self.points if p.is_real]

    def units(self) -> list[tuple[int, ...]]:
        """Index groups that must stay together: real points and conjugate pairs."""
        index = {p: i for i, p in enumerate(self.points)}
        out = []
        for i, p in enumerate(self.points):
            if p.is_real:
                out.append((i,))
            elif p.im > 0:
                out.append((i, index[p.conj()]))
        return out

    def polynomial(self) -> Polynomial:
        f = Polynomial([1])
        for p in self.points:
            if p.is_real:
                f = f * Polynomial([-p.re, 1])
            elif p.im > 0:
                f = f * Polynomial([p.re ** 2 + p.im ** 2, -2 * p.re, 1])
        return f

    def count_in_disc(self, center, radius, closed: bool = False) -> int:
        """Roots with ``|p - center| < radius`` (or ``<=`` when ``closed``)."""
        c = to_fraction(center)
        r2 = to_fraction(radius) ** 2
        if closed:
            return sum(1 for p in self.points if p.dist2_real(c) <= r2)
        return sum(1 for p in self.points if p.dist2_real(c) < r2)

    def sorted_distances2(self, x) -> list[Fraction]:
        x = to_fraction(x)
        return sorted(p.dist2_real(x) for p in self.points)


# ---------------------------------------------------------------------------
# generators


def mignotte(n: int, L: int) -> Polynomial:
    """``x**n - 2 (2**L x - 1)**2``."""
    if n < 3 or L < 1:
        raise ValueError("mignotte needs n >= 3 and L >= 1")
    return Polynomial([0] * n + [1]) - 2 * Polynomial([-1, 1 << L]) ** 2


def nested_clusters(depth: int, ratio: int = 2 ** 40, center=0) -> tuple[Polynomial, RootSet]:
    """Roots ``c + 1, c + s, ..., c + s**depth, c - s**depth`` with ``s = 1/ratio``.

    Each tail ``{s**j, ..., s**depth, -s**depth}`` is a cluster, giving a
    chain of ``depth`` nested clusters.
    """
    if depth < 1 or ratio < 4:
        raise ValueError("nested_clusters needs depth >= 1 and ratio >= 4")
    c = to_fraction(center)
    s = Fraction(1, ratio)
    reals = [c + s ** j for j in range(depth + 1)] + [c - s ** depth]
    rs = RootSet.of(reals)
    return rs.polynomial(), rs


def from_roots(roots: RootSet) -> tuple[Polynomial, RootSet]:
    return roots.polynomial(), roots


def chebyshev_like(n: int) -> Polynomial:
    """The Chebyshev polynomial ``T_n``: ``n`` simple roots in ``(-1, 1)``."""
    if n < 2:
        raise ValueError("chebyshev_like needs n >= 2")
    t0, t1 = Polynomial([1]), Polynomial([0, 1])
    x2 = Polynomial([0, 2])
    for _ in range(n - 1):
        t0, t1 = t1, x2 * t1 - t0
    return t1


def random_int(n: int, L: int, seed: int = 0) -> Polynomial:
    """Square-free degree-``n`` polynomial with integer coefficients in ``[-2**L, 2**L]``."""
    if n < 2 or L < 1:
        raise ValueError("random_int needs n >= 2 and L >= 1")
    rng = random.Random(seed)
    bound = 1 << L
    while True:
        cs = [rng.randint(-bound, bound) for _ in range(n)]
        lead = 0
        while lead == 0:
            lead = rng.randint(-bound, bound)
        f = Polynomial(cs + [lead])
        if f.coeffs[0] != 0 and f.is_square_free():
            return f


def random_rootset(rng: random.Random, n: int, scales: Optional[list[int]] = None,
                   complex_fraction: float = 0.3) -> RootSet:
    """Random conjugate-closed set of ``n`` dyadic points of mixed scales.

    Points are drawn as ``m * 2**-e`` with ``e`` picked from ``scales``; a
    point is occasionally placed next to an earlier one to plant a cluster.
    """
    scales = scales or [0, 2, 6, 12, 24]
    pts: list[Point] = []
    seen: set[Point] = set()

    def draw() -> Fraction:
        e = rng.choice(scales)
        return Fraction(rng.randint(-64, 64), 1 << e) + Fraction(rng.randint(-8, 8), 1 << rng.choice(scales))

    while len(pts) < n:
        if pts and rng.random() < 0.35:
            base = rng.choice(pts)
            e = rng.choice(scales) + rng.randint(8, 30)
            q = Point(base.re + Fraction(rng.choice([-1, 1]) * rng.randint(1, 7), 1 << e))
        else:
            q = Point(draw())
        if n - len(pts) >= 2 and rng.random() < complex_fraction:
            im = abs(draw()) or Fraction(1, 1 << rng.choice(scales))
            cand = [Point(q.re, im), Point(q.re, -im)]
        else:
            cand = [q]
        if any(c in seen for c in cand):
            continue
        pts += cand
        seen.update(cand)
    return RootSet(pts)

