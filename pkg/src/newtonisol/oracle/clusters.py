"""Exact cluster trees of known root sets.

A subset ``C`` (size >= 2) is a cluster when the closed disc of radius
``3 r_C`` about its centroid holds no other root.  Geometry is exact:
squared distances are Fractions and square roots are only taken for
reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..diagram import C0
from .roots import Point, RootSet

ORACLE_SCALE = 20
#: the constant pinning I_C = [m_C +- 20 k r_C]
INCLUSION_FACTOR = 20


class OracleScale(ValueError):
    pass


def ssc_threshold(n: int) -> float:
    return 16 * C0 * 72 * n ** 3


def _centroid(points: list[Point]) -> Fraction:
    # conjugate-closed sets have a real centroid
    return sum((p.re for p in points), Fraction(0)) / len(points)


def _radius2(points: list[Point], m: Fraction) -> Fraction:
    return max(p.dist2_real(m) for p in points)


def _is_cluster(members: frozenset, pts: tuple, closed: bool = True) -> tuple[bool, Fraction, Fraction]:
    sel = [pts[i] for i in members]
    m = _centroid(sel)
    r2 = _radius2(sel, m)
    lim = 9 * r2
    for i, p in enumerate(pts):
        if i in members:
            continue
        d2 = p.dist2_real(m)
        if d2 < lim or (closed and d2 == lim):
            return False, m, r2
    return True, m, r2


@dataclass
class ClusterNode:
    members: frozenset
    center: Fraction  # m_C
    radius2: Fraction  # r_C**2
    outer2: Optional[Fraction]  # R_C**2, None for the whole root set
    n: int
    children: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius2)

    @property
    def outer(self) -> float:
        return math.inf if self.outer2 is None else math.sqrt(self.outer2)

    @property
    def ratio(self) -> float:
        """``R_C / r_C``."""
        if self.outer2 is None:
            return math.inf
        if self.radius2 == 0:
            return math.inf
        return math.sqrt(self.outer2 / self.radius2)

    @property
    def is_ssc(self) -> bool:
        return self.size >= 2 and self.outer2 is not None and self.ratio > ssc_threshold(self.n)

    def inclusion_interval(self) -> tuple[float, float]:
        """``I_C``: ``[m +- 20 k r]`` for an ssc, ``[m +- r]`` otherwise."""
        m = float(self.center)
        h = (INCLUSION_FACTOR * self.size if self.is_ssc else 1) * self.radius
        return m - h, m + h

    def newton_interval(self) -> tuple[float, float]:
        """``𝓘_C``: ``[m +- R/(8 c0 n**2)]`` for an ssc, ``2 I_C`` otherwise."""
        m = float(self.center)
        if self.is_ssc:
            h = self.outer / (8 * C0 * self.n ** 2)
        else:
            h = 2 * self.radius
        return m - h, m + h

    def annulus(self) -> list[tuple[float, float]]:
        """Real trace of ``A_C = 𝓘_C minus I_C`` (empty unless ssc)."""
        if not self.is_ssc:
            return []
        (a, b), (c, d) = self.newton_interval(), self.inclusion_interval()
        return [(a, c), (d, b)] if a < c and d < b else []

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def __repr__(self):
        return f"ClusterNode(size={self.size}, m={float(self.center):.6g}, r={self.radius:.3g}, R={self.outer:.3g})"


@dataclass
class ClusterTree:
    roots: RootSet
    root: ClusterNode

    def nodes(self) -> list[ClusterNode]:
        return list(self.root.walk())

    def clusters(self) -> list[ClusterNode]:
        """Nontrivial clusters (size >= 2), the whole root set included."""
        return [c for c in self.nodes() if c.size >= 2]

    def ssc(self) -> list[ClusterNode]:
        return [c for c in self.nodes() if c.is_ssc]

    def member_sets(self) -> set[frozenset]:
        return {c.members for c in self.clusters()}


def enumerate_clusters(roots: RootSet) -> set[frozenset]:
    """All nontrivial clusters, found among nearest-neighbour prefixes.

    If ``C`` is a cluster and ``p`` is in ``C``, members are within ``2 r_C``
    of ``p`` and non-members are farther than ``2 r_C``, so ``C`` is a prefix
    of the other roots ordered by distance to ``p``.  Checking every such
    prefix therefore finds every cluster.
    """
    pts = roots.points
    n = len(pts)
    found: set[frozenset] = set()
    if n >= 2:
        found.add(frozenset(range(n)))
    for i, p in enumerate(pts):
        order = sorted(range(n), key=lambda j: pts[j].dist2(p))
        d = [pts[j].dist2(p) for j in order]
        for size in range(2, n):
            if d[size] == d[size - 1]:
                continue  # not separated from the next point
            members = frozenset(order[:size])
            if members in found:
                continue
            if any(pts[j].conj() not in {pts[t] for t in members} for j in members):
                continue
            ok, _, _ = _is_cluster(members, pts)
            if ok:
                found.add(members)
    return found


def enumerate_clusters_bruteforce(roots: RootSet) -> set[frozenset]:
    """Same as :func:`enumerate_clusters`, by trying every conjugate-closed subset."""
    pts = roots.points
    units = roots.units()
    found = set()
    for mask in range(1, 1 << len(units)):
        members = frozenset(i for b, u in enumerate(units) if mask >> b & 1 for i in u)
        if len(members) < 2:
            continue
        if len(members) == len(pts) or _is_cluster(members, pts)[0]:
            found.add(members)
    return found


def cluster_tree(roots: RootSet) -> ClusterTree:
    """The cluster tree: nodes are clusters and single roots, ordered by inclusion."""
    if len(roots) > ORACLE_SCALE:
        raise OracleScale(f"{len(roots)} roots exceed the oracle scale {ORACLE_SCALE}")
    if len(roots) < 1:
        raise ValueError("empty root set")
    pts = roots.points
    n = len(pts)
    sets = enumerate_clusters(roots) | {frozenset([i]) for i in range(n)}
    ordered = sorted(sets, key=len)
    # laminarity
    for a in ordered:
        for b in ordered:
            if len(a) <= len(b) and a & b and not a <= b:
                raise AssertionError(f"clusters {set(a)} and {set(b)} overlap without nesting")
    nodes = {}
    for s in ordered:
        sel = [pts[i] for i in s]
        m = _centroid(sel)
        r2 = _radius2(sel, m)
        others = [pts[i].dist2_real(m) for i in range(n) if i not in s]
        nodes[s] = ClusterNode(s, m, r2, min(others) if others else None, n)
    full = frozenset(range(n))
    for s in ordered:
        if s == full:
            continue
        parent = min((t for t in ordered if s < t), key=len)
        nodes[parent].children.append(nodes[s])
    for node in nodes.values():
        node.children.sort(key=lambda c: (min(pts[i].re for i in c.members), -c.size))
    return ClusterTree(roots, nodes[full])

