"""Dense pointsets and their bottom-up separation tree."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .roots import Point, RootSet


class NotDense(ValueError):
    pass


def _points(points) -> list[Point]:
    if isinstance(points, RootSet):
        return list(points.points)
    return [p if isinstance(p, Point) else Point(Fraction(p)) for p in points]


def _subset_is_cluster(sel: list[Point], others: list[Point]) -> bool:
    """Exact test: the closed disc of radius ``3 r_S`` about the centroid misses ``others``."""
    k = len(sel)
    mre = sum((p.re for p in sel), Fraction(0)) / k
    mim = sum((p.im for p in sel), Fraction(0)) / k
    r2 = max((p.re - mre) ** 2 + (p.im - mim) ** 2 for p in sel)
    return all((q.re - mre) ** 2 + (q.im - mim) ** 2 > 9 * r2 for q in others)


def cluster_subsets(points, method: str = "enumerate") -> list[frozenset]:
    """Proper subsets ``S`` with ``|S| >= 2`` that form a cluster (density witnesses).

    ``"enumerate"`` checks all subsets, in floating point with an exact
    re-check of near ties; ``"prefix"`` checks nearest-neighbour prefixes
    exactly, which is enough because a cluster is such a prefix around
    each of its members.
    """
    pts = _points(points)
    n = len(pts)
    if method == "prefix":
        out = set()
        for i, p in enumerate(pts):
            order = sorted(range(n), key=lambda j: pts[j].dist2(p))
            d = [pts[j].dist2(p) for j in order]
            for size in range(2, n):
                if d[size] == d[size - 1]:
                    continue
                S = frozenset(order[:size])
                if S not in out and _subset_is_cluster([pts[j] for j in S], [pts[j] for j in order[size:]]):
                    out.add(S)
        return sorted(out, key=lambda s: (len(s), sorted(s)))
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    if n < 3:
        return []
    re = np.array([float(p.re) for p in pts])
    im = np.array([float(p.im) for p in pts])
    masks = np.arange(1, (1 << n) - 1, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    size = bits.sum(axis=1)
    keep = size >= 2
    masks, bits, size = masks[keep], bits[keep], size[keep]
    mre = (bits * re).sum(axis=1) / size
    mim = (bits * im).sum(axis=1) / size
    d2 = (re[None, :] - mre[:, None]) ** 2 + (im[None, :] - mim[:, None]) ** 2
    r2 = np.where(bits, d2, -np.inf).max(axis=1)
    other = np.where(bits, np.inf, d2).min(axis=1)
    lim = 9 * r2
    tol = 1e-9 * np.maximum(lim, other) + 1e-300
    sure = other > lim + tol
    near = np.abs(other - lim) <= tol
    out = []
    for idx in np.nonzero(sure | near)[0]:
        S = frozenset(int(j) for j in np.nonzero(bits[idx])[0])
        if near[idx] and not sure[idx]:
            if not _subset_is_cluster([pts[j] for j in S], [pts[j] for j in range(n) if j not in S]):
                continue
        out.append(S)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def is_dense(points, method: str = "enumerate") -> bool:
    return not cluster_subsets(points, method)


@dataclass
class SepNode:
    members: frozenset
    sigma2: Fraction  # sigma_u**2 (for a leaf: squared distance to its nearest neighbour)
    children: list = field(default_factory=list)
    center: tuple = (Fraction(0), Fraction(0))
    radius2: Fraction = Fraction(0)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def nu(self) -> int:
        return len(self.children)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class SeparationTree:
    points: list
    root: SepNode
    rounds: list  # per merge round: (sigma2, number of new nodes, largest child count)

    def internal(self) -> list[SepNode]:
        return [u for u in self.root.walk() if not u.is_leaf]

    def nodes(self) -> list[SepNode]:
        return list(self.root.walk())


def _disc(pts: list[Point], members) -> tuple[tuple, Fraction]:
    sel = [pts[i] for i in members]
    k = len(sel)
    mre = sum((p.re for p in sel), Fraction(0)) / k
    mim = sum((p.im for p in sel), Fraction(0)) / k
    r2 = max((p.re - mre) ** 2 + (p.im - mim) ** 2 for p in sel)
    return (mre, mim), r2


def _sep2(pts, A, B) -> Fraction:
    return min(pts[i].dist2(pts[j]) for i in A for j in B)


def build_separation_tree(points, check_density: bool = True) -> SeparationTree:
    """Merge components whose discs of radius ``sigma/2`` touch, with ``sigma``
    the current minimum separation, until one component remains."""
    pts = _points(points)
    n = len(pts)
    if n < 2:
        raise ValueError("need at least two points")
    if check_density:
        bad = cluster_subsets(pts)
        if bad:
            raise NotDense(f"subset {sorted(bad[0])} forms a cluster")
    comps: list[SepNode] = []
    for i, p in enumerate(pts):
        s2 = min(p.dist2(q) for j, q in enumerate(pts) if j != i)
        comps.append(SepNode(frozenset([i]), s2, [], (p.re, p.im), Fraction(0)))
    rounds = []
    while len(comps) > 1:
        sigma2 = min(_sep2(pts, a.members, b.members) for a, b in combinations(comps, 2))
        parent = list(range(len(comps)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (ia, a), (ib, b) in combinations(enumerate(comps), 2):
            if _sep2(pts, a.members, b.members) == sigma2:
                parent[find(ia)] = find(ib)
        groups: dict[int, list[SepNode]] = {}
        for i, c in enumerate(comps):
            groups.setdefault(find(i), []).append(c)
        new = []
        made, widest = 0, 0
        for g in groups.values():
            if len(g) == 1:
                new.append(g[0])
                continue
            members = frozenset().union(*(c.members for c in g))
            center, r2 = _disc(pts, members)
            g.sort(key=lambda c: min((pts[i].re, pts[i].im) for i in c.members))
            new.append(SepNode(members, sigma2, g, center, r2))
            made += 1
            widest = max(widest, len(g))
        rounds.append((sigma2, made, widest))
        comps = new
    return SeparationTree(pts, comps[0], rounds)


def check_properties(tree: SeparationTree) -> list[str]:
    """Violations of P1 to P5, as readable strings (empty when all hold)."""
    pts = tree.points
    n = len(pts)
    everyone = frozenset(range(n))
    bad = []
    for u in tree.internal():
        if u.nu < 2:
            bad.append(f"P4: node {sorted(u.members)} has {u.nu} children")
        # P2: r_u <= |G_u| sigma_u
        if u.radius2 > len(u.members) ** 2 * u.sigma2:
            bad.append(f"P2: node {sorted(u.members)}")
        for v in u.children:
            rest = everyone - v.members
            s2 = _sep2(pts, v.members, rest)
            if s2 < u.sigma2:
                bad.append(f"P1 lower: child {sorted(v.members)} of {sorted(u.members)}")
            if not v.is_leaf and s2 > 9 * v.radius2:
                bad.append(f"P1 upper: child {sorted(v.members)}")
            if v.is_leaf and v.sigma2 != u.sigma2:
                bad.append(f"P3: leaf {sorted(v.members)} of {sorted(u.members)}")
    for sigma2, made, widest in tree.rounds:
        if made < 1 or widest < 2:
            bad.append("P4: a merge round created no node with two children")
    if len(tree.nodes()) > 2 * n - 1:
        bad.append("P4: more than 2|P| - 1 nodes")
    if tree.root.members != everyone:
        bad.append("P5: root component is not P")
    return bad
