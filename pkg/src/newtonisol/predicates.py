"""Exclusion (C0) and inclusion (C1) predicates on open intervals.

Three interchangeable predicates share one call signature,
``predicate(f, I) -> PredicateOutcome``:

* Descartes' rule of signs on the Moebius transform of ``f`` (default),
* Sturm sequences (exact root counts, also the test oracle),
* the centered-form ``Eval`` test.

All of them look at the OPEN interval ``(lo, hi)``; roots sitting exactly
on a dyadic endpoint are the driver's business (``endpoint_root_check``).
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .arith import Interval, to_fraction
from .poly import Polynomial, int_eval_scaled, int_sign_at, int_taylor_shift, sign_variations


@dataclass(frozen=True)
class PredicateOutcome:
    c0: bool
    c1: bool
    count: Optional[int] = None  # variation count (Descartes) or root count (Sturm)
    kind: str = ""

    @property
    def decided(self) -> bool:
        return self.c0 or self.c1


def _endpoints(I) -> tuple[Fraction, Fraction]:
    if isinstance(I, Interval):
        return I.as_fractions()
    a, b = I
    return to_fraction(a), to_fraction(b)


# ---------------------------------------------------------------------------
# Descartes


def descartes_transform(F: list[int], a: Fraction, b: Fraction) -> list[int]:
    """Integer coefficients of ``(x+1)**n F((a + b x)/(x + 1))`` up to a positive factor.

    Positive roots of the result correspond to roots of ``F`` in ``(a, b)``.
    """
    n = len(F) - 1
    Q = math.lcm(a.denominator, b.denominator)
    A, B = int(a * Q), int(b * Q)
    # G(y) = Q**n F(y / Q), then G(A + (B - A) x)
    if Q & (Q - 1) == 0:
        s = Q.bit_length() - 1
        G = [c << (s * (n - i)) for i, c in enumerate(F)]
    else:
        G = [c * Q ** (n - i) for i, c in enumerate(F)]
    G = int_taylor_shift(G, A)
    w = B - A
    wp = 1
    for i in range(n + 1):
        G[i] *= wp
        wp *= w
    # reverse then shift by one: (x+1)**n G(1/(x+1))
    G.reverse()
    return int_taylor_shift(G, 1)


def descartes_count(f: Polynomial, I) -> int:
    """Sign variations of the Moebius transform of ``f`` onto the open interval.

    Upper-bounds the number of roots in ``(lo, hi)`` and has the same parity.
    """
    a, b = _endpoints(I)
    if not a < b:
        raise ValueError("Descartes test needs an interval of positive width")
    _, F = f.primitive()
    return sign_variations(descartes_transform(F, a, b))


def descartes_predicate(f: Polynomial, I) -> PredicateOutcome:
    v = descartes_count(f, I)
    return PredicateOutcome(v == 0, v == 1, v, "descartes")


# ---------------------------------------------------------------------------
# Sturm


class SturmSequence:
    """Signed remainder sequence ``f, f', -rem(f, f'), ...`` over the integers.

    Each member is kept primitive with a positive rescaling, which leaves
    every sign (and so every variation count) unchanged.
    """

    def __init__(self, f: Polynomial):
        if f.degree < 1:
            raise ValueError("Sturm sequence needs degree >= 1")
        _, F = f.primitive()
        chain = [F, _primitive_pos([c * i for i, c in enumerate(F)][1:])]
        while len(chain[-1]) > 1:
            r = _pseudo_rem_signed(chain[-2], chain[-1])
            if not any(r):
                break
            chain.append(_primitive_pos([-c for c in r]))
        self.chain = chain
        self.polynomial = f

    def __len__(self):
        return len(self.chain)

    @property
    def polys(self) -> list[Polynomial]:
        return [Polynomial(c) for c in self.chain]

    def last_is_constant(self) -> bool:
        return len(self.chain[-1]) == 1

    def variations(self, x) -> int:
        x = to_fraction(x)
        p, q = x.numerator, x.denominator
        return sign_variations(int_eval_scaled(c, p, q) for c in self.chain)

    def count(self, a, b) -> int:
        """Number of distinct real roots in the half-open interval ``(a, b]``."""
        return self.variations(a) - self.variations(b)

    def count_open(self, a, b) -> int:
        a, b = to_fraction(a), to_fraction(b)
        if not a < b:
            return 0
        c = self.count(a, b)
        if int_sign_at(self.chain[0], b) == 0:
            c -= 1
        return c

    def count_closed(self, a, b) -> int:
        a, b = to_fraction(a), to_fraction(b)
        c = self.count(a, b) if a < b else 0
        if int_sign_at(self.chain[0], a) == 0:
            c += 1
        return c


def _primitive_pos(cs: list[int]) -> list[int]:
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    g = math.gcd(*cs) if cs else 1
    if g > 1:
        cs = [c // g for c in cs]
    return cs


def _pseudo_rem_signed(A: list[int], B: list[int]) -> list[int]:
    """``|lc(B)|**(deg A - deg B + 1) * rem(A, B)``: a positive multiple of the remainder."""
    r = list(A)
    m = len(B) - 1
    lc = B[-1]
    alc = abs(lc)
    sgn = 1 if lc > 0 else -1
    for i in range(len(r) - 1 - m, -1, -1):
        c = r[i + m]
        # r := |lc| r - sgn c x^i B  keeps the scaling factor positive
        r = [alc * x for x in r]
        if c:
            for j, bj in enumerate(B):
                r[i + j] -= sgn * c * bj
        r.pop()
    return r or [0]


_sturm_cache: "weakref.WeakKeyDictionary[Polynomial, SturmSequence]" = weakref.WeakKeyDictionary()


def sturm_sequence(f: Polynomial) -> SturmSequence:
    s = _sturm_cache.get(f)
    if s is None:
        s = SturmSequence(f)
        _sturm_cache[f] = s
    return s


def sturm_count(f: Polynomial, I) -> int:
    """Exact number of distinct real roots in ``(lo, hi]``."""
    a, b = _endpoints(I)
    return sturm_sequence(f).count(a, b)


def sturm_count_open(f: Polynomial, I) -> int:
    a, b = _endpoints(I)
    return sturm_sequence(f).count_open(a, b)


def sturm_predicate(f: Polynomial, I) -> PredicateOutcome:
    c = sturm_count_open(f, I)
    return PredicateOutcome(c == 0, c == 1, c, "sturm")


# ---------------------------------------------------------------------------
# Eval


def _centered_dominates(g: Polynomial, m: Fraction, h: Fraction) -> bool:
    """``|g(m)| > sum_{j>=1} |g_j(m)| h**j`` (centered-form exclusion of zeros of g)."""
    c = g.taylor_shift(m).coeffs
    if not c:
        return False
    tail = Fraction(0)
    hp = Fraction(1)
    for cj in c[1:]:
        hp *= h
        tail += abs(cj) * hp
    return abs(c[0]) > tail


def eval_test(f: Polynomial, I) -> PredicateOutcome:
    """Centered-form interval test.

    C0 when ``|f(m)|`` beats the Taylor remainder bound on ``I``.  C1 when
    the same test certifies ``f'`` has no zero on ``I`` (so ``f`` is
    monotone) and ``f`` changes sign strictly between the endpoints.  A
    monotone ``f`` without a strict sign change has no root in the open
    interval, which is reported as C0.
    """
    a, b = _endpoints(I)
    m = (a + b) / 2
    h = (b - a) / 2
    if _centered_dominates(f, m, h):
        return PredicateOutcome(True, False, None, "eval")
    if f.degree >= 1 and _centered_dominates(f.derivative(), m, h):
        sa, sb = f.sign_at(a), f.sign_at(b)
        if sa * sb < 0:
            return PredicateOutcome(False, True, None, "eval")
        return PredicateOutcome(True, False, None, "eval")
    return PredicateOutcome(False, False, None, "eval")


def eval_predicate(f: Polynomial, I) -> PredicateOutcome:
    return eval_test(f, I)


# ---------------------------------------------------------------------------


def endpoint_root_check(f: Polynomial, p) -> bool:
    """True iff ``f(p) = 0`` exactly."""
    return f.sign_at(p) == 0


PREDICATES = {
    "descartes": descartes_predicate,
    "sturm": sturm_predicate,
    "eval": eval_predicate,
}


def get_predicate(name_or_fn: Union[str, callable]):
    if callable(name_or_fn):
        return name_or_fn
    try:
        return PREDICATES[name_or_fn]
    except KeyError:
        raise ValueError(f"unknown predicate {name_or_fn!r}; choose from {sorted(PREDICATES)}") from None
