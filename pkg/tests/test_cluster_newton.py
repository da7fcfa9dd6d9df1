import math
import random
from fractions import Fraction

import pytest

from newtonisol import Interval, Polynomial, newton_incl_exc, smallest_admissible
from newtonisol.arith import Dyadic
from newtonisol.cluster_newton import MAX_NEWTON_STEPS, _floor_log2, _guard_holds, approximate_zero_check
from newtonisol.diagram import C0_THRESHOLD, CLUSTER_THRESHOLD, NotCertified, admissible_values, build_diagram
from newtonisol.oracle import cluster_tree, nested_clusters
from newtonisol.predicates import sturm_count_open

EPS = Fraction(1, 2 ** 20)
MIG = Polynomial([EPS, -EPS ** 2, -Fraction(2 ** 20), 1])  # roots +-2^-20, 2^20
QUARTER = Interval.of(Fraction(-1, 4), Fraction(1, 4))


def test_smallest_admissible_examples():
    v = smallest_admissible(MIG, 0, QUARTER)
    assert v is not None and v.k == 2
    assert v.exclusion_radius_lo.to_fraction() > Fraction(1, 4)
    for p in (-2, 0, 1):
        assert smallest_admissible(Polynomial([-1, 0, 1]), p, Interval.of(-2, 2)) is None


def test_smallest_admissible_skips_subclusters():
    f, rs = nested_clusters(2)  # clusters {+-s^2} and {s, +-s^2}, s = 2^-40
    sizes = sorted(c.size for c in cluster_tree(rs).clusters() if c.size < len(rs))
    assert sizes == [2, 3]
    I = Interval.of(-EPS, EPS)
    assert w_exceeds(I, 72 * 3 * Fraction(1, 2 ** 40))
    v = smallest_admissible(f, 0, I)
    assert v is not None and v.k == 3
    # a tiny interval sees the inner pair
    tiny = Interval.of(-Fraction(1, 2 ** 100), Fraction(1, 2 ** 100))
    assert smallest_admissible(f, 0, tiny).k == 2


def w_exceeds(I: Interval, x: Fraction) -> bool:
    return I.width.to_fraction() > x


def test_newton_success_example():
    out = newton_incl_exc(MIG, QUARTER)
    assert out.success and out.k == 2
    J = out.interval
    assert J.contains_open(EPS) and J.contains_open(-EPS)
    assert J.width.to_fraction() <= 36 * 2 * EPS
    assert J.width.to_fraction() < QUARTER.width.to_fraction() / 2
    assert 1 <= out.iterations <= 6


def test_newton_failure_examples():
    assert not newton_incl_exc(Polynomial([-6, 11, -6, 1]), Interval.of(0, 4)).success
    assert not newton_incl_exc(Polynomial([-1, 0, 1]), Interval.of(-2, 2)).success
    with pytest.raises(ValueError):
        newton_incl_exc(MIG, Interval.of(1, 1))


def test_newton_is_deterministic():
    a = newton_incl_exc(MIG, QUARTER)
    b = newton_incl_exc(MIG, QUARTER)
    assert a == b


def test_newton_keeps_roots_of_I():
    f, rs = nested_clusters(3)
    rng = random.Random(8)
    successes = 0
    for _ in range(40):
        e = rng.randint(4, 130)
        a = Fraction(rng.randint(-8, 0), 1 << e)
        b = Fraction(rng.randint(1, 8), 1 << e)
        I = Interval.of(a, b)
        out = newton_incl_exc(f, I)
        if not out.success:
            continue
        successes += 1
        J = out.interval
        assert J.width.to_fraction() < I.width.to_fraction() / 2
        lo, hi = I.as_fractions()
        for x in rs.reals:
            if lo <= x <= hi:
                assert J.contains_open(x)
        # no root of f in I escapes J
        inside_I = sturm_count_open(f, I) + sum(f.sign_at(p) == 0 for p in (I.lo, I.hi))
        common = I.intersection(J)
        assert common is not None
        assert sturm_count_open(f, common) + sum(f.sign_at(p) == 0 for p in (common.lo, common.hi)) == inside_I
    assert successes >= 10


def test_floor_log2():
    for x in (Fraction(1), Fraction(3, 4), Fraction(1, 1024), Fraction(1025, 1024), Fraction(7, 3), Fraction(2 ** 70 - 1)):
        e = _floor_log2(x)
        assert Fraction(2) ** e <= x < Fraction(2) ** (e + 1)
    assert _floor_log2(Fraction(1, 3)) == -2


def test_guard_matches_direct_formula():
    for i in range(1, 7):
        bound = Fraction(2) ** (5 - 2 ** i)
        for r in (bound / 2, bound, bound * 2):
            assert _guard_holds(r, Fraction(1), i) == (r <= bound)


def test_approximate_zero_examples():
    rep = approximate_zero_check(MIG, 0, 2)
    assert rep.holds
    assert all(abs(p) <= rep.radius for p in rep.iterates)
    # one Newton step later the deviation is still large
    z1 = Dyadic.round(rep.iterates[1], 200, "nearest")
    assert build_diagram(MIG, z1).deviation_at_least(2, CLUSTER_THRESHOLD)
    with pytest.raises(NotCertified):
        approximate_zero_check(Polynomial([-6, 11, -6, 1]), 0, 2)


def test_admissible_near_separated_cluster():
    """Points within R/(8 c0 n^2) of an ssc centre certify Delta_k >= c0 with k = |C|."""
    rng = random.Random(9)
    sampled = 0
    for depth in (1, 2, 3):
        f, rs = nested_clusters(depth)
        n = f.degree
        for C in cluster_tree(rs).ssc():
            rad = math.sqrt(C.outer2 / (8 * C0_THRESHOLD * n * n) ** 2)
            for _ in range(10):
                x = float(C.center) + rng.uniform(-1, 1) * rad
                z = Fraction(round(x * 2 ** 200), 2 ** 200)
                assert (z - C.center) ** 2 <= C.outer2 / (8 * C0_THRESHOLD * n * n) ** 2
                assert C.size in [v.k for v in admissible_values(f, z)]
                sampled += 1
    assert sampled == 60


def test_iteration_cap_constant():
    assert MAX_NEWTON_STEPS == 64
