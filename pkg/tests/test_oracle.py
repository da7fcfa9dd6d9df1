import math
import random
from fractions import Fraction

import mpmath
import pytest

from newtonisol import Polynomial
from newtonisol.oracle import (
    NotDense,
    OracleScale,
    Point,
    RootSet,
    Unbounded,
    build_separation_tree,
    charge_integral,
    check_properties,
    closed_form_inv_dist,
    cluster_tree,
    from_roots,
    mignotte,
    nested_clusters,
    random_rootset,
    ssc_threshold,
    stopping_function,
)
from newtonisol.oracle.clusters import enumerate_clusters, enumerate_clusters_bruteforce
from newtonisol.oracle.separation import cluster_subsets, is_dense

EPS = Fraction(1, 2 ** 20)


# -- cluster trees -------------------------------------------------------------


def test_cluster_tree_small_cluster():
    rs = RootSet.of([0, EPS, 1])
    tree = cluster_tree(rs)
    assert tree.member_sets() == {frozenset({0, 1, 2}), frozenset({0, 1})}
    kids = tree.root.children
    assert [c.size for c in kids] == [2, 1]


def test_cluster_tree_trivial():
    tree = cluster_tree(RootSet.of([-1, 1]))
    assert tree.member_sets() == {frozenset({0, 1})}
    assert [c.size for c in tree.root.children] == [1, 1]


def test_cluster_tree_ssc_example():
    rs = RootSet.of([-EPS, EPS, 2 ** 20])
    tree = cluster_tree(rs)
    (C,) = tree.ssc()
    assert C.members == frozenset({0, 1})
    assert 2e9 < ssc_threshold(3) < 2.1e9 < C.ratio
    assert C.ratio == pytest.approx(2.0 ** 40)


def test_cluster_tree_scale_limit():
    with pytest.raises(OracleScale):
        cluster_tree(RootSet.of(range(21)))


def test_prefix_enumeration_matches_brute_force():
    rng = random.Random(41)
    for _ in range(150):
        rs = random_rootset(rng, rng.randint(2, 9))
        assert enumerate_clusters(rs) == enumerate_clusters_bruteforce(rs)


def test_cluster_tree_laminar_and_consistent():
    rng = random.Random(42)
    for _ in range(80):
        rs = random_rootset(rng, rng.randint(2, 10))
        tree = cluster_tree(rs)
        sets = [c.members for c in tree.nodes()]
        for a in sets:
            for b in sets:
                assert not (a & b) or a <= b or b <= a
        for node in tree.nodes():
            if node.children:
                assert frozenset().union(*(c.members for c in node.children)) == node.members


def test_ssc_geometry():
    for depth in (1, 2, 3):
        _, rs = nested_clusters(depth)
        tree = cluster_tree(rs)
        assert tree.ssc()
        for C in tree.ssc():
            a, b = C.inclusion_interval()
            c, d = C.newton_interval()
            assert c < a < b < d
            pieces = C.annulus()
            assert len(pieces) == 2 and all(lo < hi for lo, hi in pieces)
            # the annulus holds no root
            for lo, hi in pieces:
                assert not any(lo < float(x) < hi for x in rs.reals)


# -- separation trees ----------------------------------------------------------


def test_separation_tree_example():
    tree = build_separation_tree([0, 1, 2, 4])
    root = tree.root
    assert root.sigma2 == 4
    sizes = sorted(len(c.members) for c in root.children)
    assert sizes == [1, 3]
    inner = next(c for c in root.children if len(c.members) == 3)
    assert inner.sigma2 == 1 and inner.nu == 3
    assert check_properties(tree) == []


def test_separation_tree_pair():
    tree = build_separation_tree([0, 1])
    assert tree.root.sigma2 == 1 and tree.root.nu == 2
    assert check_properties(tree) == []


def test_separation_tree_rejects_sparse():
    with pytest.raises(NotDense):
        build_separation_tree([0, 1, 2, 10])
    assert cluster_subsets([0, 1, 2, 10]) == [frozenset({0, 1, 2})]


def _random_dense(rng, n):
    while True:
        pts = set()
        while len(pts) < n:
            x = Fraction(rng.randint(-40, 40), 8)
            if n - len(pts) >= 2 and rng.random() < 0.3:
                y = Fraction(rng.randint(1, 16), 8)
                pts |= {Point(x, y), Point(x, -y)}
            else:
                pts.add(Point(x))
        pts = sorted(pts, key=lambda p: (p.re, p.im))
        if len(pts) == n and is_dense(pts, "prefix"):
            return pts


def test_density_methods_agree():
    rng = random.Random(43)
    for _ in range(60):
        n = rng.randint(3, 10)
        pts = [Point(Fraction(rng.randint(-64, 64), 4)) for _ in range(n)]
        pts = list(dict.fromkeys(pts))
        assert cluster_subsets(pts, "enumerate") == cluster_subsets(pts, "prefix")


def _sep_upper_ratio2(tree):
    """Largest (sep(G_v, rest) / r_v)^2 over internal non-root nodes."""
    pts = tree.points
    everyone = frozenset(range(len(pts)))
    worst = Fraction(0)
    for u in tree.internal():
        for v in u.children:
            if v.is_leaf:
                continue
            s2 = min(pts[i].dist2(pts[j]) for i in v.members for j in everyone - v.members)
            worst = max(worst, s2 / v.radius2)
    return worst


def test_separation_upper_bound_four_radii():
    """Density gives a point of P outside G_v within 3 r_v of the centre, so the
    separation from G_v is at most 4 r_v."""
    rng = random.Random(44)
    for _ in range(40):
        tree = build_separation_tree(_random_dense(rng, rng.randint(3, 10)))
        assert _sep_upper_ratio2(tree) <= 16


def test_separation_upper_bound_three_radii_on_real_sets():
    rng = random.Random(45)
    for _ in range(40):
        n = rng.randint(3, 10)
        while True:
            # jittered unit lattice: dense most of the time
            pts = [Point(i + Fraction(rng.randint(0, 3), 8)) for i in range(n)]
            if len(pts) >= 3 and is_dense(pts, "prefix"):
                break
        tree = build_separation_tree(pts)
        assert _sep_upper_ratio2(tree) <= 9
        assert check_properties(tree) == []


def test_three_radii_fails_with_conjugate_pair():
    # G_v = {-3/2 +- 3/4 i} has r_v = 3/4; the nearest other point 3/4 is at sqrt(90)/4 > 9/4
    pts = [Point(Fraction(-3, 2), Fraction(3, 4)), Point(Fraction(-3, 2), Fraction(-3, 4)), Point(Fraction(3, 4))]
    assert is_dense(pts, "prefix")
    v = frozenset({0, 1})
    r2 = Fraction(9, 16)
    s2 = min(pts[i].dist2(pts[2]) for i in v)
    assert s2 == Fraction(90, 16)
    assert 9 * r2 < s2 <= 16 * r2


# -- stopping function and integrals ------------------------------------------------


def test_stopping_function_examples():
    assert stopping_function(RootSet.of([0], [(0, 1)]), 0) == pytest.approx(2)
    assert stopping_function(RootSet.of([0]), 5) == pytest.approx(Fraction(1, 5))
    assert stopping_function(RootSet.of([-1, 1]), 0) == pytest.approx(1)
    assert stopping_function(RootSet.of([0]), 0) == math.inf


def test_charge_integral_examples():
    v, err = charge_integral(RootSet.of([0], [(0, 1)]), [(Fraction(-1, 2), Fraction(1, 2))])
    assert abs(v - 4 * math.asinh(0.5)) <= 1e-3 * v and err <= 1e-3 * v
    v, _ = charge_integral(RootSet.of([0]), [(1, 2)])
    assert v == pytest.approx(math.log(2), rel=1e-6)
    assert charge_integral(RootSet.of([0]), []) == (0.0, 0.0)
    with pytest.raises(Unbounded):
        charge_integral(RootSet.of([0]), [(-1, 1)])


def test_charge_integral_matches_mpmath():
    rng = random.Random(46)
    for _ in range(8):
        rs = random_rootset(rng, rng.randint(2, 6), scales=[0, 2])
        reals = sorted(rs.reals)
        lo = min(reals + [Fraction(0)]) - 4
        hi = max(reals + [Fraction(0)]) + 4
        # integrate on a gap between two consecutive real roots, away from both
        cuts = [lo] + reals + [hi]
        i = rng.randrange(len(cuts) - 1)
        a, b = cuts[i], cuts[i + 1]
        a, b = a + (b - a) / 8, b - (b - a) / 8
        value, _ = charge_integral(rs, [(a, b)])
        g = lambda t: stopping_function(rs, Fraction(float(t)))
        # short pieces keep quad accurate across the kinks of G
        grid = [mpmath.mpf(float(a)) + (mpmath.mpf(float(b - a)) * k) / 16 for k in range(17)]
        with mpmath.workdps(15):
            want = mpmath.quad(g, grid)
        assert value == pytest.approx(float(want), rel=2e-3)


def test_inverse_distance_integral_bound_complex():
    """For non-real gamma: integral over [r, s] of dx/|gamma - x| <= 2 ln(max dist / |Im gamma|) + 2 ln 3."""
    rng = random.Random(47)
    for _ in range(300):
        g = Point(Fraction(rng.randint(-100, 100), 8), Fraction(rng.randint(1, 64), 1 << rng.randint(0, 12)))
        r = Fraction(rng.randint(-400, 400), 8)
        s = r + Fraction(rng.randint(1, 400), 8)
        with mpmath.workdps(30):
            value = mpmath.quad(lambda x: 1 / mpmath.sqrt((x - mp(g.re)) ** 2 + mp(g.im) ** 2), [mp(r), mp(g.re), mp(s)] if r < g.re < s else [mp(r), mp(s)])
        assert float(value) == pytest.approx(closed_form_inv_dist(g, r, s), rel=1e-9)
        far = max(math.sqrt(g.dist2_real(r)), math.sqrt(g.dist2_real(s)))
        assert float(value) <= 2 * math.log(far / float(g.im)) + 2 * math.log(3)


def mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


# -- generators -------------------------------------------------------------------


def test_generator_examples():
    x = Polynomial([0, 1])
    assert mignotte(16, 16) == x ** 16 - 2 * (Polynomial([-1, 2 ** 16])) ** 2
    f, rs = from_roots(RootSet.of([1, 2, 3]))
    assert f == Polynomial([-6, 11, -6, 1]) and len(rs) == 3
    f, _ = from_roots(RootSet.of([-EPS, EPS, 2 ** 20]))
    assert f == Polynomial([EPS, -EPS ** 2, -(2 ** 20), 1])
    with pytest.raises(ValueError):
        mignotte(2, 4)
