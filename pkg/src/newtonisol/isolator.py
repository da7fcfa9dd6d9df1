"""Subdivision drivers: the plain bisection isolator and the Newton-accelerated one.

Both return a :class:`RootPartition` of ``I0`` together with
:class:`IsolationStats`.  Predicates look at open intervals; every
subdivision point and every new endpoint is checked for an exact root,
which is reported as a singleton.
"""

from __future__ import annotations

import enum
from collections import Counter, deque
from dataclasses import dataclass, field

from .arith import Dyadic, Interval
from .cluster_newton import newton_incl_exc
from .poly import DegreeError, NonSquareFree, Polynomial, cauchy_bound
from .predicates import endpoint_root_check, get_predicate, sturm_count_open


class Tag(str, enum.Enum):
    EXCLUDED = "excluded"
    ISOLATING = "isolating"
    EXACT = "exact"


@dataclass(frozen=True)
class PartitionEntry:
    interval: Interval
    tag: Tag

    def to_json(self) -> dict:
        return {"interval": self.interval.to_json(), "tag": self.tag.value}

    @classmethod
    def from_json(cls, data) -> "PartitionEntry":
        return cls(Interval.from_json(data["interval"]), Tag(data["tag"]))


@dataclass(frozen=True)
class RemovedRegion:
    """Part of a disc trace dropped from the queue in the annulus step.

    ``annulus`` lists the open pieces of the trace outside ``cluster``;
    the roots of the trace all lie in ``cluster`` (the unclipped ``J``).
    """

    trace: Interval
    cluster: Interval
    annulus: tuple
    depth: int = 0
    level: int = 0  # index of the level run in IsolationStats.levels

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "level": self.level,
            "trace": self.trace.to_json(),
            "cluster": self.cluster.to_json(),
            "annulus": [a.to_json() for a in self.annulus],
        }


@dataclass
class RootPartition:
    domain: Interval
    entries: list = field(default_factory=list)
    removed: list = field(default_factory=list)

    def of_tag(self, tag: Tag) -> list[Interval]:
        return [e.interval for e in self.entries if e.tag is tag]

    @property
    def isolating(self) -> list[Interval]:
        return self.of_tag(Tag.ISOLATING)

    @property
    def exact_roots(self) -> list[Dyadic]:
        return [e.interval.lo for e in self.entries if e.tag is Tag.EXACT]

    def sorted(self) -> "RootPartition":
        key = lambda e: (e.interval.lo, e.interval.hi, e.tag.value)
        return RootPartition(self.domain, sorted(self.entries, key=key), list(self.removed))

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "entries": [e.to_json() for e in self.entries],
            "removed": [r.to_json() for r in self.removed],
        }

    @classmethod
    def from_json(cls, data) -> "RootPartition":
        return cls(
            Interval.from_json(data["domain"]),
            [PartitionEntry.from_json(e) for e in data["entries"]],
            [],
        )


@dataclass
class LevelStats:
    depth: int
    nodes: int = 0
    internal: int = 0
    leaves: int = 0


@dataclass
class IsolationStats:
    tree_leaves: int = 0
    tree_nodes: int = 0
    predicate_calls: Counter = field(default_factory=Counter)
    newton_calls: int = 0
    newton_successes: int = 0
    newton_iterations_total: int = 0
    recursion_depth: int = 0
    max_queue: int = 0
    levels: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "tree_leaves": self.tree_leaves,
            "tree_nodes": self.tree_nodes,
            "predicate_calls": dict(sorted(self.predicate_calls.items())),
            "newton_calls": self.newton_calls,
            "newton_successes": self.newton_successes,
            "newton_iterations_total": self.newton_iterations_total,
            "recursion_depth": self.recursion_depth,
            "max_queue": self.max_queue,
        }


@dataclass(frozen=True)
class PhiEntry:
    J: Interval  # clipped to the level's domain
    k: int
    full: Interval  # unclipped J
    center: Dyadic
    exclusion_radius: Dyadic


# ---------------------------------------------------------------------------


def subtract_disc_trace(I: Interval, center, radius_lo) -> list[Interval]:
    """``I`` minus the open interval ``(center - radius_lo, center + radius_lo)``.

    Pieces of zero width are dropped.
    """
    center, radius_lo = Dyadic.coerce(center), Dyadic.coerce(radius_lo)
    lo, hi = center - radius_lo, center + radius_lo
    if not (lo < I.hi and I.lo < hi):
        return [I]
    out = []
    if I.lo < lo:
        out.append(Interval(I.lo, lo))
    if hi < I.hi:
        out.append(Interval(hi, I.hi))
    return out


def auto_interval(f: Polynomial) -> Interval:
    """Cauchy-bound interval ``[-B, B]`` rounded outward to integers."""
    B = Dyadic.round(cauchy_bound(f), 0, "ceil")
    return Interval(-B, B)


def prepare(f: Polynomial, auto_squarefree: bool = False) -> Polynomial:
    if f.degree < 2:
        raise DegreeError(f"degree {f.degree} < 2")
    if not f.is_square_free():
        if not auto_squarefree:
            raise NonSquareFree("polynomial is not square-free")
        f = f.square_free_part()
        if f.degree < 1:
            raise DegreeError("square-free part is constant")
    return f


class _Run:
    """Mutable state shared by one isolation run across recursion levels."""

    def __init__(self, f, predicate, use_newton, dfs, max_depth):
        self.f = f
        self.predicate = get_predicate(predicate)
        self.pred_name = predicate if isinstance(predicate, str) else getattr(predicate, "__name__", "custom")
        self.use_newton = use_newton
        self.dfs = dfs
        self.max_depth = max_depth
        self.stats = IsolationStats()
        self.entries: list[PartitionEntry] = []
        self.removed: list[RemovedRegion] = []
        self.exact: dict[Dyadic, None] = {}

    def check_point(self, p: Dyadic) -> None:
        if p not in self.exact and endpoint_root_check(self.f, p):
            self.exact[p] = None

    def level(self, I0: Interval, depth: int) -> None:
        st = self.stats
        st.recursion_depth = max(st.recursion_depth, depth)
        if depth > self.max_depth:
            raise AssertionError(f"recursion depth {depth} exceeds {self.max_depth}")
        lv = LevelStats(depth)
        st.levels.append(lv)
        self.check_point(I0.lo)
        self.check_point(I0.hi)
        Q: deque[Interval] = deque()
        if I0.is_point():
            return
        if depth > 0:
            lv.nodes += 1
            lv.internal += 1
            m = I0.midpoint
            self.check_point(m)
            Q.extend(I0.split())
        else:
            Q.append(I0)
        level_entries: list[int] = []  # indices into self.entries created on this level
        phi: list[PhiEntry] = []
        f = self.f
        while Q:
            st.max_queue = max(st.max_queue, len(Q))
            I = Q.pop() if self.dfs else Q.popleft()
            lv.nodes += 1
            out = self.predicate(f, I)
            st.predicate_calls[self.pred_name] += 1
            if out.c0 or out.c1:
                lv.leaves += 1
                level_entries.append(len(self.entries))
                self.entries.append(PartitionEntry(I, Tag.EXCLUDED if out.c0 else Tag.ISOLATING))
                continue
            if self.use_newton:
                st.newton_calls += 1
                st.predicate_calls["newton"] += 1
                res = newton_incl_exc(f, I)
                if res.success:
                    st.newton_successes += 1
                    st.newton_iterations_total += res.iterations
                    lv.leaves += 1
                    self._accept(I0, I, res, phi, Q, lv, level_entries)
                    continue
            lv.internal += 1
            m = I.midpoint
            self.check_point(m)
            a, b = I.split()
            Q.extend((a, b))
        for e in phi:
            if e.J.lo < e.J.hi:
                self.level(e.J, depth + 1)

    def _accept(self, I0, I, res, phi, Q, lv, level_entries) -> None:
        J_full = res.interval
        z, r = res.final_point, res.exclusion_radius
        J = J_full.intersection(I0)
        if J is None:
            return  # step 2.b: roots of I lie in J, which misses I0
        for e in phi:
            if J.intersects(e.J):
                if _inside_disc(J_full, e.center, e.exclusion_radius):
                    return  # same cluster as an earlier entry
                # overlap without a certified common cluster: subdivide instead
                lv.leaves -= 1
                lv.internal += 1
                self.check_point(I.midpoint)
                Q.extend(I.split())
                return
        # step 2.c on the queue
        lo, hi = z - r, z + r
        self.check_point(lo)
        self.check_point(hi)
        newQ = deque()
        for Ip in Q:
            pieces = subtract_disc_trace(Ip, z, r)
            if len(pieces) == 2:
                lv.nodes += 1
                lv.internal += 1
            elif not pieces:
                lv.nodes += 1
                lv.leaves += 1
            newQ.extend(pieces)
        Q.clear()
        Q.extend(newQ)
        # and on partition entries already emitted on this level
        for idx in list(level_entries):
            e = self.entries[idx]
            if e is None or e.interval.lo >= hi or e.interval.hi <= lo:
                continue
            pieces = subtract_disc_trace(e.interval, z, r)
            replacement = [PartitionEntry(p, self._retag(e.tag, p)) for p in pieces]
            self.entries[idx] = None
            for p in replacement:
                level_entries.append(len(self.entries))
                self.entries.append(p)
        trace = Interval(lo, hi).intersection(I0)
        if trace is not None:
            ann = []
            if trace.lo < J_full.lo:
                ann.append(Interval(trace.lo, min(J_full.lo, trace.hi)))
            if J_full.hi < trace.hi:
                ann.append(Interval(max(J_full.hi, trace.lo), trace.hi))
            # recursion runs after a level's queue drains, so this level is the last one
            level = len(self.stats.levels) - 1
            self.removed.append(RemovedRegion(trace, J_full, tuple(ann), lv.depth, level))
        self.check_point(J.lo)
        self.check_point(J.hi)
        phi.append(PhiEntry(J, res.k, J_full, z, r))

    def _retag(self, tag: Tag, piece: Interval) -> Tag:
        # piece of an interval holding at most one root in its interior
        if tag is Tag.EXCLUDED:
            return tag
        sa, sb = self.f.sign_at(piece.lo), self.f.sign_at(piece.hi)
        if sa * sb == 0:
            return Tag.ISOLATING if sturm_count_open(self.f, piece) == 1 else Tag.EXCLUDED
        return Tag.ISOLATING if sa * sb < 0 else Tag.EXCLUDED

    def partition(self, I0: Interval) -> RootPartition:
        entries = [e for e in self.entries if e is not None]
        # a point found at one level may be the root of an isolating interval
        # built later inside a cluster; keep a single report for it
        iso = [e.interval for e in entries if e.tag is Tag.ISOLATING]
        entries += [
            PartitionEntry(Interval(p, p), Tag.EXACT)
            for p in self.exact
            if not any(J.contains_open(p) for J in iso)
        ]
        st = self.stats
        st.tree_nodes = sum(lv.nodes for lv in st.levels)
        st.tree_leaves = sum(lv.leaves for lv in st.levels)
        return RootPartition(I0, entries, list(self.removed)).sorted()


def _inside_disc(J: Interval, center: Dyadic, radius: Dyadic) -> bool:
    return center - radius < J.lo and J.hi < center + radius


def _run(f, I0, predicate, use_newton, dfs, auto_squarefree):
    f = prepare(f, auto_squarefree)
    if I0 is None:
        I0 = auto_interval(f)
    elif not isinstance(I0, Interval):
        I0 = Interval.of(*I0)
    run = _Run(f, predicate, use_newton, dfs, max_depth=max(1, f.degree - 1))
    run.level(I0, 0)
    return run.partition(I0), run.stats


def isolate_plain(f: Polynomial, I0=None, predicate="descartes", dfs: bool = False,
                  auto_squarefree: bool = False):
    """Bisection driven by ``predicate`` alone."""
    return _run(f, I0, predicate, False, dfs, auto_squarefree)


def isolate_newton(f: Polynomial, I0=None, predicate="descartes", dfs: bool = False,
                   auto_squarefree: bool = False):
    """Bisection with the cluster Newton step, annulus trimming and recursion
    into detected clusters."""
    return _run(f, I0, predicate, True, dfs, auto_squarefree)


def partition_to_isolating(f: Polynomial, partition: RootPartition) -> list[Interval]:
    """Intervals certified to hold exactly one root, plus exact-root singletons.

    An isolating interval is confirmed by a strict sign change at its
    endpoints; when an endpoint is itself a root, a Sturm count is used.
    """
    out = []
    for e in partition.entries:
        if e.tag is Tag.EXACT:
            out.append(e.interval)
        elif e.tag is Tag.ISOLATING:
            sa, sb = f.sign_at(e.interval.lo), f.sign_at(e.interval.hi)
            if sa * sb < 0 or (sa * sb == 0 and sturm_count_open(f, e.interval) == 1):
                out.append(e.interval)
    return sorted(out, key=lambda I: (I.lo, I.hi))
