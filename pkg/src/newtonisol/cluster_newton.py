"""The Newton inclusion/exclusion test for root clusters.

Given an interval ``I = [a, b]``, look for one cluster of ``k >= 2`` roots
that is visible with the same admissible value from ``a``, ``m(I)`` and
``b``, then run Newton's method on ``f^(k-1)`` while ``rho_k`` keeps
shrinking doubly exponentially.  Success returns an interval ``J`` with
``w(J) < w(I)/2`` that holds every root of ``f`` lying in ``I``.

Iterates are rounded to dyadics; the result is re-certified at the point
it is built from, so its correctness never depends on the rounding history.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import Dyadic, Interval, to_fraction
from .diagram import (
    C0_THRESHOLD,
    CLUSTER_THRESHOLD,
    AdmissibleValue,
    DegenerateDiagram,
    NewtonDiagram,
    NotCertified,
    _dyadic_floor,
    admissible_value,
    build_diagram,
)
from .poly import Polynomial

MAX_NEWTON_STEPS = 64
#: iterate rounding error is at most rho_k(z_i) * 2**-ROUNDING_BITS
ROUNDING_BITS = 10


class Status(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"


@dataclass(frozen=True)
class NewtonOutcome:
    status: Status
    interval: Optional[Interval] = None  # J
    k: Optional[int] = None
    iterations: int = 0
    final_point: Optional[Dyadic] = None  # center of J
    exclusion_radius: Optional[Dyadic] = None  # lower bound on rho_{k+1}(m(J)) / 3
    reason: str = ""
    iterates: tuple = field(default=(), repr=False)

    @property
    def success(self) -> bool:
        return self.status is Status.SUCCESS


def _fail(reason: str, iterations: int = 0, iterates=()) -> NewtonOutcome:
    return NewtonOutcome(Status.FAILURE, iterations=iterations, reason=reason, iterates=tuple(iterates))


def _diagram(f: Polynomial, p) -> Optional[NewtonDiagram]:
    try:
        return build_diagram(f, p)
    except DegenerateDiagram:
        return None


def smallest_admissible(f: Polynomial, p, I: Interval) -> Optional[AdmissibleValue]:
    """Smallest hull vertex ``k >= 2`` with ``Delta_k(p) >= c0`` and
    ``I`` inside ``D(p, rho_{k+1}(p)/3)``.

    Both conditions are decided with certified comparisons.  ``None`` if no
    such ``k`` exists.
    """
    d = _diagram(f, p)
    if d is None:
        return None
    pf = to_fraction(p)
    lo, hi = I.as_fractions()
    reach = max(pf - lo, hi - pf)  # I within the disc iff reach < rho_{k+1}/3
    for k in d.hull_indices:
        if not 2 <= k < d.n:
            continue
        if d.compare_rho(k + 1, 3 * reach) <= 0:
            continue
        lower = d.certified_deviation_lower(k, C0_THRESHOLD)
        if lower is None:
            continue
        return admissible_value(d, k, lower)
    return None


def _guard_holds(rho_lo_i: Fraction, rho_hi_0: Fraction, i: int) -> bool:
    """``rho_lo_i <= 2**(5 - 2**i) * rho_hi_0`` decided exactly."""
    t = (1 << i) - 5  # need rho_lo_i * 2**t <= rho_hi_0
    if t <= 0:
        return rho_lo_i <= rho_hi_0 * (1 << -t)
    r = rho_lo_i / rho_hi_0
    if r == 0:
        return True
    if t > r.denominator.bit_length() + 1:
        return False
    return r.numerator << t <= r.denominator


def newton_incl_exc(f: Polynomial, I: Interval, keep_iterates: bool = False) -> NewtonOutcome:
    """Run the cluster Newton test on ``I``; see the module docstring."""
    if not I.lo < I.hi:
        raise ValueError("Newton test needs an interval of positive width")
    a, b = I.lo, I.hi
    m = I.midpoint
    # step 2
    adm = {}
    for p in (a, m, b):
        v = smallest_admissible(f, p, I)
        if v is None:
            return _fail(f"no admissible value at {p}")
        adm[p] = v
    ka, km, kb = adm[a].k, adm[m].k, adm[b].k
    if not ka == km == kb:
        return _fail("admissible values differ")
    k = km
    # step 3: inclusion discs inside D(m, rho_{k+1}(m)/3)
    dm = build_diagram(f, m)
    mf = m.to_fraction()
    for p in (a, m, b):
        reach = abs(p.to_fraction() - mf) + adm[p].inclusion_radius_hi.to_fraction()
        if dm.compare_rho(k + 1, 3 * reach) <= 0:
            return _fail("inclusion discs not nested")
    # step 4: Newton on g = f^(k-1)
    g = f.derivative(k - 1)
    gp = f.derivative(k)
    z = m
    rho0_hi = dm.rho_hi(k)
    iterates = [z]
    i = 0
    d_prev, z_prev = dm, z
    while True:
        if i >= MAX_NEWTON_STEPS:
            return _fail("iteration cap reached", i, iterates)
        zf = z.to_fraction()
        gpz = gp.eval(zf)
        if gpz == 0:
            return _fail("g'(z) = 0", i, iterates)
        d_cur = _diagram(f, z)
        if d_cur is None:
            return _fail("degenerate diagram", i, iterates)
        rho_lo = d_cur.rho_lo(k)
        if rho_lo == 0:
            return _fail("rho_k vanished", i, iterates)
        nxt = zf - g.eval(zf) / gpz
        bits = ROUNDING_BITS - _floor_log2(rho_lo)
        z_next = Dyadic.round(nxt, bits, "nearest")
        i += 1
        d_next = _diagram(f, z_next)
        if d_next is None:
            return _fail("degenerate diagram", i, iterates)
        iterates.append(z_next)
        z_prev, d_prev = z, d_cur
        z = z_next
        if not _guard_holds(d_next.rho_lo(k), rho0_hi, i):
            break
    # J from the last iterate that satisfied the guard
    zc, dc = z_prev, d_prev
    outcome = _finish(f, I, k, zc, dc, dm, mf, i, iterates)
    return outcome if keep_iterates else _strip(outcome)


def _finish(f, I, k, zc, dc, dm, mf, i, iterates) -> NewtonOutcome:
    if not dc.deviation_at_least(k, CLUSTER_THRESHOLD):
        return _fail("Delta_k not certified >= 27 at the final point", i, iterates)
    radius = 3 * dc.rho(k)[1]
    J = Interval(zc - radius, zc + radius)
    if not J.width.to_fraction() < I.width.to_fraction() / 2:
        return _fail("no shrinkage", i, iterates)
    # J's cluster is the cluster of m: J inside D(m, rho_{k+1}(m)/3)
    reach = abs(zc.to_fraction() - mf) + radius.to_fraction()
    if dm.compare_rho(k + 1, 3 * reach) <= 0:
        return _fail("final disc escapes the exclusion disc of m", i, iterates)
    excl = _dyadic_floor(dc.rho_lo(k + 1) / 3)
    if not radius < excl:
        return _fail("inclusion disc not inside the exclusion disc at the final point", i, iterates)
    return NewtonOutcome(Status.SUCCESS, J, k, i, zc, excl, "", tuple(iterates))


def _strip(o: NewtonOutcome) -> NewtonOutcome:
    if not o.iterates:
        return o
    return NewtonOutcome(o.status, o.interval, o.k, o.iterations, o.final_point,
                         o.exclusion_radius, o.reason, ())


def _floor_log2(x: Fraction) -> int:
    """``floor(log2(x))`` for ``x > 0``."""
    p, q = x.numerator, x.denominator
    e = p.bit_length() - q.bit_length()
    if (p << max(0, -e)) < (q << max(0, e)):
        e -= 1
    return e


@dataclass(frozen=True)
class ApproximateZeroReport:
    holds: bool
    radius: Fraction  # 3 rho_k(z) / (2k), upper bound
    iterates: tuple
    errors: tuple  # |z_i - z*| for a high-accuracy z*


def approximate_zero_check(f: Polynomial, z, k: int, steps: int = 4) -> ApproximateZeroReport:
    """Check that ``z`` behaves as an approximate zero of ``f^(k-1)``.

    Runs exact Newton steps from ``z`` and verifies the iterates stay in
    ``D(z, 3 rho_k(z)/(2k))`` and that the error to the limit point
    ``z*`` obeys ``|z_i - z*| <= 2**(1 - 2**i) |z - z*|``.
    """
    d = build_diagram(f, z)
    if not 2 <= k < d.n or not d.deviation_at_least(k, C0_THRESHOLD):
        raise NotCertified(f"Delta_{k} is not certified >= c0 at {z}")
    g = f.derivative(k - 1)
    gp = f.derivative(k)
    zf = to_fraction(z)
    radius = 3 * d.rho_hi(k) / (2 * k)
    pts = [zf]
    x = zf
    for _ in range(steps):
        gpx = gp.eval(x)
        if gpx == 0:
            break
        x = x - g.eval(x) / gpx
        pts.append(x)
    # a refined limit point
    zstar = pts[-1]
    for _ in range(2):
        gpx = gp.eval(zstar)
        if gpx == 0:
            break
        zstar = zstar - g.eval(zstar) / gpx
    errs = tuple(abs(p - zstar) for p in pts)
    holds = all(abs(p - zf) <= radius for p in pts) and abs(zstar - zf) <= radius
    e0 = errs[0]
    for i, e in enumerate(errs):
        if i == 0 or e0 == 0:
            continue
        if i >= 5:
            break
        if e > Fraction(2) ** (1 - 2 ** i) * e0 * (1 + Fraction(1, 100)):
            holds = False
    return ApproximateZeroReport(holds, radius, tuple(pts), errs)
