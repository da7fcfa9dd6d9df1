"""Real root isolation for square-free polynomials: bisection with exclusion and
inclusion predicates, accelerated by Newton steps towards root clusters
detected on the Newton diagram."""

from .arith import Dyadic, Interval
from .cluster_newton import NewtonOutcome, newton_incl_exc, smallest_admissible
from .diagram import NewtonDiagram, admissible_values, build_diagram
from .isolator import (
    IsolationStats,
    RootPartition,
    Tag,
    isolate_newton,
    isolate_plain,
    partition_to_isolating,
    subtract_disc_trace,
)
from .poly import DegreeError, NonSquareFree, Polynomial

__version__ = "0.1.0"
