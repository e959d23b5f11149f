"""Connected components of lower level sets and the level-sweep audit.

A lower level set of the constrained problem is a finite union of sublevel
sets of convex quadratics, one per size-s support; each piece is connected
(an ellipsoid under full rank, a convex set in general) and two pieces meet
exactly on their common coordinate subspace, where the intersection is again
such a sublevel set.  Components of the union therefore equal components of
the pairwise-intersection graph over size-s supports, which union-find counts
exactly, with no sampling.

The sweep walks the distinct stationary values in increasing order,
evaluates the component count on each open interval between them, and audits
the observed jumps against the admissible cell-attachment ranges: a minimizer
crossing must create exactly one component, a saddle crossing may merge away
between zero and ``n - s`` components, and lower-order crossings change
nothing.  Tied values are audited jointly by summing the per-point ranges.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import solve_normal_equations
from .model import Instance, Support, objective, validate_instance
from .stationarity import PointKind
from .enumeration import VALUE_TIE_REL, LandscapeReport
from .util import run_mapped

# Values within this relative band of the level still count as inside it.
LEVEL_BAND_REL = 1e-12


@dataclass(frozen=True, eq=False)
class SupportSubspace:
    """Minimum of the objective over the coordinate subspace of one support."""

    support: Support
    min_value: float
    argmin: np.ndarray
    full_rank: bool


@dataclass
class LevelSetGraph:
    """Intersection graph of the support pieces present at one level."""

    level: float
    nodes: list[Support]
    edges: list[tuple[Support, Support]]
    q: int


@dataclass
class SweepInterval:
    lo: float
    hi: float
    q: int


@dataclass
class Transition:
    value: float
    kinds: list[PointKind]
    delta: int
    admissible_lo: int
    admissible_hi: int
    admissible: bool


@dataclass
class TransitionAudit:
    applicable: bool
    transitions: list[Transition]
    all_admissible: bool | None


@dataclass
class SweepResult:
    intervals: list[SweepInterval]
    audit: TransitionAudit

    def to_dict(self) -> dict:
        return {
            "intervals": [
                {"interval": [iv.lo, iv.hi], "q": iv.q} for iv in self.intervals
            ],
            "transitions": [
                {
                    "value": t.value,
                    "kind": ",".join(k.value for k in t.kinds),
                    "delta": t.delta,
                    "admissible": t.admissible,
                }
                for t in self.audit.transitions
            ],
            "applicable": self.audit.applicable,
        }


def _within_level(value: float, level: float) -> bool:
    return value <= level + LEVEL_BAND_REL * (1.0 + abs(level))


def subspace_min(inst: Instance, support: Support) -> SupportSubspace:
    """Least-squares minimum of the objective over one coordinate subspace."""
    support = tuple(sorted(int(i) for i in support))
    if len(support) > inst.s or any(not 0 <= i < inst.n for i in support):
        raise ValidationError(f"support {support} out of range for n={inst.n}, s={inst.s}")
    z, full_rank = solve_normal_equations(inst.A[:, list(support)], inst.b, inst.tol.rank_tol)
    x = np.zeros(inst.n)
    x[list(support)] = z
    return SupportSubspace(
        support=support,
        min_value=objective(inst, x),
        argmin=x,
        full_rank=full_rank,
    )


def support_min_table(inst: Instance, *, threads: int = 1) -> dict[Support, SupportSubspace]:
    """Subspace minima for every support of size at most s, keyed by support."""
    from .enumeration import enumerate_supports

    supports = list(enumerate_supports(inst.n, inst.s))
    results = run_mapped(lambda S: subspace_min(inst, S), supports, threads)
    return dict(zip(supports, results))


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.components = size

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri
            self.components -= 1


def component_count(
    inst: Instance,
    level: float,
    *,
    table: dict[Support, SupportSubspace] | None = None,
) -> LevelSetGraph:
    """Exact number of connected components of the lower level set.

    Nodes are the size-s supports whose subspace minimum lies at or below the
    level; an edge joins two supports when the minimum over their common
    subspace does too.
    """
    validate_instance(inst)
    if table is None:
        table = support_min_table(inst)
    nodes = [
        S
        for S in itertools.combinations(range(inst.n), inst.s)
        if _within_level(table[S].min_value, level)
    ]
    index = {S: i for i, S in enumerate(nodes)}
    uf = _UnionFind(len(nodes))
    edges: list[tuple[Support, Support]] = []
    for S, T in itertools.combinations(nodes, 2):
        shared = tuple(sorted(set(S) & set(T)))
        if _within_level(table[shared].min_value, level):
            edges.append((S, T))
            uf.union(index[S], index[T])
    return LevelSetGraph(level=level, nodes=nodes, edges=edges, q=uf.components)


_ADMISSIBLE_RANGE = {
    PointKind.LOCAL_MINIMIZER: lambda n, s: (1, 1),
    PointKind.SADDLE_POINT: lambda n, s: (-(n - s), 0),
    PointKind.LOWER_ORDER: lambda n, s: (0, 0),
}


def _group_values(points) -> list[tuple[float, list[PointKind]]]:
    ordered = sorted(points, key=lambda p: p.value)
    groups: list[tuple[float, list[PointKind]]] = []
    for p in ordered:
        if groups and abs(p.value - groups[-1][0]) <= VALUE_TIE_REL * (
            1.0 + max(abs(p.value), abs(groups[-1][0]))
        ):
            groups[-1][1].append(p.kind)
        else:
            groups.append((p.value, [p.kind]))
    return groups


def sweep_levels(inst: Instance, report: LandscapeReport, *, threads: int = 1) -> SweepResult:
    """Component counts between stationary values plus the transition audit.

    The audit is flagged not applicable when the report contains degenerate
    points or a continuum certificate; the interval counts are still emitted.
    """
    validate_instance(inst)
    table = support_min_table(inst, threads=threads)
    groups = _group_values(report.points)
    if not groups:
        return SweepResult(intervals=[], audit=TransitionAudit(True, [], True))

    bounds = [groups[0][0] - 1.0] + [v for v, _ in groups] + [groups[-1][0] + 1.0]
    counts = [
        component_count(inst, 0.5 * (lo + hi), table=table).q
        for lo, hi in zip(bounds, bounds[1:])
    ]
    intervals = [
        SweepInterval(lo=lo, hi=hi, q=q) for (lo, hi), q in zip(zip(bounds, bounds[1:]), counts)
    ]

    applicable = report.degenerate == 0 and not report.continuum_detected
    if not applicable:
        return SweepResult(intervals=intervals, audit=TransitionAudit(False, [], None))

    transitions: list[Transition] = []
    for i, (value, kinds) in enumerate(groups):
        delta = counts[i + 1] - counts[i]
        lo = sum(_ADMISSIBLE_RANGE[k](inst.n, inst.s)[0] for k in kinds)
        hi = sum(_ADMISSIBLE_RANGE[k](inst.n, inst.s)[1] for k in kinds)
        transitions.append(
            Transition(
                value=value,
                kinds=list(kinds),
                delta=delta,
                admissible_lo=lo,
                admissible_hi=hi,
                admissible=lo <= delta <= hi,
            )
        )
    return SweepResult(
        intervals=intervals,
        audit=TransitionAudit(
            applicable=True,
            transitions=transitions,
            all_admissible=all(t.admissible for t in transitions),
        ),
    )
