"""Deterministic test corpus shared by the acceptance tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from newtonisol import Interval, Polynomial, Tag, isolate_newton, isolate_plain
from newtonisol.isolator import auto_interval
from newtonisol.oracle import RootSet, from_roots, mignotte, random_int, random_rootset
from newtonisol.predicates import sturm_count_open

FROM_ROOTS_COUNT = 300
MIGNOTTE_N = (8, 16, 32)
MIGNOTTE_L = (8, 16, 24, 32, 40, 48, 56, 64)
RANDOM_SHAPES = [(n, L) for n in (4, 6, 8, 10, 12, 16, 20, 24, 32) for L in (8, 16, 32, 64)]
RANDOM_PER_SHAPE = 5
RANDOM_BIG = [(48, 32), (48, 64), (64, 16), (64, 64)]


@dataclass
class Instance:
    name: str
    f: Polynomial
    I0: Interval
    roots: Optional[RootSet] = None  # known roots, when built from them


@dataclass
class Result:
    inst: Instance
    newton_part: object
    newton_stats: object
    truth_part: object
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)


def from_roots_instances(count: int = FROM_ROOTS_COUNT) -> list[Instance]:
    out = []
    for seed in range(count):
        rng = random.Random(1000 + seed)
        n = 2 + seed % 11
        f, rs = from_roots(random_rootset(rng, n))
        out.append(Instance(f"from_roots[{seed}] n={n}", f, auto_interval(f), rs))
    return out


def mignotte_instances() -> list[Instance]:
    out = []
    for n in MIGNOTTE_N:
        for L in MIGNOTTE_L:
            f = mignotte(n, L)
            out.append(Instance(f"mignotte({n},{L})", f, auto_interval(f)))
    return out


def random_int_instances() -> list[Instance]:
    out = []
    seed = 0
    for n, L in RANDOM_SHAPES:
        for _ in range(RANDOM_PER_SHAPE):
            f = random_int(n, L, seed)
            out.append(Instance(f"random_int({n},{L},seed={seed})", f, auto_interval(f)))
            seed += 1
    for n, L in RANDOM_BIG:
        f = random_int(n, L, seed)
        out.append(Instance(f"random_int({n},{L},seed={seed})", f, auto_interval(f)))
        seed += 1
    return out


def full_corpus() -> list[Instance]:
    return from_roots_instances() + mignotte_instances() + random_int_instances()


def run_instance(inst: Instance) -> Result:
    import time

    t = time.perf_counter()
    part, stats = isolate_newton(inst.f, inst.I0)
    truth, _ = isolate_plain(inst.f, inst.I0, predicate="sturm")
    return Result(inst, part, stats, truth, time.perf_counter() - t)


# ---------------------------------------------------------------------------
# matching reported intervals against ground truth


def root_intervals(part) -> list[Interval]:
    return [e.interval for e in part.entries if e.tag in (Tag.ISOLATING, Tag.EXACT)]


def shares_root(f: Polynomial, A: Interval, B: Interval) -> bool:
    """Whether the root of ``A`` (open, or a point) is also the root of ``B``.

    Both intervals are assumed to hold exactly one root (in the open
    interior, or at the point for degenerate ones).
    """
    if A.is_point() and B.is_point():
        return A.lo == B.lo
    if A.is_point():
        return B.contains_open(A.lo)
    if B.is_point():
        return A.contains_open(B.lo)
    lo, hi = max(A.lo, B.lo), min(A.hi, B.hi)
    if not lo < hi:
        return False
    return sturm_count_open(f, Interval(lo, hi)) == 1


def mismatches(f: Polynomial, reported: list[Interval], truth: list[Interval]) -> list[str]:
    """Problems with the bijection ``truth root -> reported interval``."""
    bad = []
    if len(reported) != len(truth):
        bad.append(f"count {len(reported)} != {len(truth)}")
    used = [0] * len(reported)
    for T in truth:
        hits = [i for i, R in enumerate(reported) if shares_root(f, T, R)]
        if len(hits) != 1:
            bad.append(f"truth interval {T} matched {len(hits)} reported intervals")
        for i in hits:
            used[i] += 1
    for i, u in enumerate(used):
        if u != 1:
            bad.append(f"reported interval {reported[i]} holds {u} truth roots")
    return bad


def known_root_mismatches(rs: RootSet, reported: list[Interval], I0: Interval) -> list[str]:
    """Check reported intervals against the exactly known real roots in ``I0``."""
    lo, hi = I0.as_fractions()
    reals = [x for x in rs.reals if lo <= x <= hi]
    bad = []
    if len(reals) != len(reported):
        bad.append(f"{len(reported)} intervals for {len(reals)} known real roots")
    for x in reals:
        hits = 0
        for R in reported:
            a, b = R.as_fractions()
            if (R.is_point() and a == x) or (a < x < b):
                hits += 1
        if hits != 1:
            bad.append(f"known root {x} lies in {hits} intervals")
    return bad
