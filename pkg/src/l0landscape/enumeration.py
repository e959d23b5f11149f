"""Exhaustive M-stationary-point enumeration and landscape reporting.

Every support of size at most ``s`` is solved by least squares on its column
submatrix; each solution is M-stationary by construction because its gradient
vanishes on the solved support, which contains the solution's own support.
Solutions found through different supersets of the same support collapse to a
single record.  Rank-deficient solves certify a continuum of stationary
points; the minimum-norm representative is kept and reported as degenerate.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

import numpy as np

from .errors import ValidationError
from .linalg import numerical_rank, solve_normal_equations
from .model import (
    Instance,
    FeasiblePoint,
    Support,
    ToleranceConfig,
    instance_to_dict,
    support_of,
    validate_instance,
)
from .stationarity import PointKind, StationaryPoint, classify
from .util import run_mapped, rng_for

logger = logging.getLogger(__name__)

# Relative tolerance for detecting ties among stationary values.
VALUE_TIE_REL = 1e-9


@dataclass
class LandscapeReport:
    """Full enumeration result for one instance.

    ``r`` counts local minimizers, ``r1`` saddle points.  The Morse relation
    compares ``morse_lhs = (n - s) * r1`` against ``morse_rhs = r - 1``; it is
    guaranteed only when the matrix is s-regular, all points are nondegenerate,
    and stationary values are pairwise distinct, so ``hypothesis_violated``
    records whenever any of that fails (the verdict is still computed).
    """

    points: list[StationaryPoint]
    r: int
    r1: int
    lower_order: int
    degenerate: int
    s_regular: bool
    s_regularity_witness: Support | None
    morse_lhs: int
    morse_rhs: int
    morse_holds: bool
    continuum_detected: bool
    hypothesis_violated: bool

    def to_dict(self) -> dict:
        return {
            "points": [_point_to_dict(p) for p in self.points],
            "r": self.r,
            "r1": self.r1,
            "lower_order": self.lower_order,
            "degenerate": self.degenerate,
            "s_regular": self.s_regular,
            "s_regularity_witness": _support_to_json(self.s_regularity_witness),
            "morse_lhs": self.morse_lhs,
            "morse_rhs": self.morse_rhs,
            "morse_holds": self.morse_holds,
            "continuum_detected": self.continuum_detected,
            "hypothesis_violated": self.hypothesis_violated,
        }


@dataclass
class GenericityReport:
    """Monte-Carlo outcome over random Gaussian data."""

    trials: int
    all_nondegenerate_fraction: float
    minimizers_active_fraction: float
    s_regular_fraction: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "all_nondegenerate_fraction": self.all_nondegenerate_fraction,
            "minimizers_active_fraction": self.minimizers_active_fraction,
            "s_regular_fraction": self.s_regular_fraction,
            "seed": self.seed,
        }


def _support_to_json(support: Support | None) -> list[int] | None:
    if support is None:
        return None
    return [i + 1 for i in support]


def _point_to_dict(p: StationaryPoint) -> dict:
    return {
        "x": [float(v) for v in p.point.x],
        "support": _support_to_json(p.point.support),
        "kind": p.kind.value,
        "value": p.value,
        "nd1": p.cert.nd1_holds,
        "nd2": p.cert.nd2_holds,
        "nd1_near_degenerate": p.cert.nd1_near_degenerate,
    }


def enumerate_supports(n: int, s: int) -> Iterator[Support]:
    """All subsets of {0, ..., n-1} with at most s elements, in (size, lex) order."""
    if not 0 <= s <= n:
        raise ValidationError(f"need 0 <= s <= n, got n={n}, s={s}")
    for k in range(s + 1):
        yield from itertools.combinations(range(n), k)


def check_s_regularity(A, s: int, rank_tol: float) -> tuple[bool, Support | None]:
    """Whether every size-s column subset has rank s; returns the first failure."""
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    if not 0 <= s <= min(m, n):
        raise ValidationError(f"need 0 <= s <= min(m, n), got s={s} for shape {A.shape}")
    for subset in itertools.combinations(range(n), s):
        if numerical_rank(A[:, subset], rank_tol) < s:
            return False, subset
    return True, None


def _solve_support(inst: Instance, support: Support) -> tuple[np.ndarray, bool]:
    z, full_rank = solve_normal_equations(inst.A[:, list(support)], inst.b, inst.tol.rank_tol)
    x = np.zeros(inst.n)
    x[list(support)] = z
    return x, full_rank


def _values_tied(values: list[float]) -> bool:
    ordered = sorted(values)
    for a, b in zip(ordered, ordered[1:]):
        if abs(b - a) <= VALUE_TIE_REL * (1.0 + max(abs(a), abs(b))):
            return True
    return False


def enumerate_stationary(
    inst: Instance,
    *,
    supports: Iterable[Support] | None = None,
    threads: int = 1,
) -> LandscapeReport:
    """Enumerate, deduplicate, and classify every M-stationary point.

    The result is deterministic and independent of the order in which
    supports are streamed: deduplication keys on the canonical support of
    each solution and the final list is sorted by (value, support).
    """
    validate_instance(inst)
    zero_tol = inst.tol.zero_tol
    if supports is None:
        support_list = list(enumerate_supports(inst.n, inst.s))
    else:
        support_list = []
        for S in supports:
            S = tuple(sorted(int(i) for i in S))
            if len(S) > inst.s or any(not 0 <= i < inst.n for i in S):
                raise ValidationError(f"support {S} is out of range for n={inst.n}, s={inst.s}")
            support_list.append(S)

    solved = run_mapped(lambda S: _solve_support(inst, S), support_list, threads)
    solves: dict[Support, tuple[np.ndarray, bool]] = dict(zip(support_list, solved))

    def solve_at(S: Support) -> tuple[np.ndarray, bool]:
        if S not in solves:
            solves[S] = _solve_support(inst, S)
        return solves[S]

    # Group solutions by the canonical support of the solution itself.
    clusters: dict[Support, bool] = {}
    for S in sorted(solves):
        x, full_rank = solves[S]
        T = support_of(x, zero_tol)
        clusters[T] = clusters.get(T, False) or not full_rank

    # Each cluster's representative is the solve on its own canonical support,
    # chased to a fixpoint so the reported vector is exactly zero off-support.
    finals: dict[Support, dict] = {}
    for T in sorted(clusters):
        U = T
        for _ in range(inst.n + 1):
            x_U, full_U = solve_at(U)
            V = support_of(x_U, zero_tol)
            if V == U:
                break
            U = V
        entry = finals.setdefault(U, {"x": x_U, "deficient": False})
        entry["deficient"] = entry["deficient"] or clusters[T] or not full_U

    records = [(U, finals[U]["x"], finals[U]["deficient"]) for U in sorted(finals)]

    # Merge any residual near-duplicates within the point-identity radius,
    # preferring the representative with the smaller support.
    records.sort(key=lambda rec: (len(rec[0]), rec[0]))
    kept: list[tuple[Support, np.ndarray, bool]] = []
    for U, x, deficient in records:
        merged = False
        for i, (U_k, x_k, def_k) in enumerate(kept):
            if np.max(np.abs(x - x_k)) <= inst.tol.dedupe_tol:
                kept[i] = (U_k, x_k, def_k or deficient)
                merged = True
                break
        if not merged:
            kept.append((U, x, deficient))

    points: list[StationaryPoint] = []
    continuum = False
    for _, x, deficient in kept:
        sp = classify(inst, FeasiblePoint.from_vector(x, zero_tol))
        if deficient:
            continuum = True
            if sp.kind is not PointKind.DEGENERATE:
                sp = replace(sp, kind=PointKind.DEGENERATE)
        points.append(sp)
    points.sort(key=lambda p: (p.value, p.point.support))

    r = sum(p.kind is PointKind.LOCAL_MINIMIZER for p in points)
    r1 = sum(p.kind is PointKind.SADDLE_POINT for p in points)
    lower = sum(p.kind is PointKind.LOWER_ORDER for p in points)
    degen = sum(p.kind is PointKind.DEGENERATE for p in points)
    s_regular, witness = check_s_regularity(inst.A, inst.s, inst.tol.rank_tol)
    lhs = (inst.n - inst.s) * r1
    rhs = r - 1
    ties = _values_tied([p.value for p in points])
    return LandscapeReport(
        points=points,
        r=r,
        r1=r1,
        lower_order=lower,
        degenerate=degen,
        s_regular=s_regular,
        s_regularity_witness=witness,
        morse_lhs=lhs,
        morse_rhs=rhs,
        morse_holds=lhs >= rhs,
        continuum_detected=continuum,
        hypothesis_violated=(not s_regular) or continuum or degen > 0 or ties,
    )


def run_genericity_experiment(
    m: int,
    n: int,
    s: int,
    trials: int,
    seed: int,
    *,
    tol: ToleranceConfig | None = None,
    threads: int = 1,
) -> GenericityReport:
    """Sample seeded Gaussian data and measure how often nondegeneracy holds.

    Per trial: draws (A, b) with independent standard-normal entries from a
    generator derived deterministically from (seed, trial index), enumerates
    the landscape, and records whether (a) every point is nondegenerate,
    (b) no full-support point is degenerate, and (c) A is s-regular.  Any
    failing trial is logged with its instance data for inspection.
    """
    validate_instance(Instance.from_arrays(np.zeros((m, n)), np.zeros(m), s, tol))
    if trials < 0:
        raise ValidationError(f"trials must be nonnegative, got {trials}")
    if seed < 0:
        raise ValidationError(f"seed must be nonnegative, got {seed}")

    def one_trial(t: int) -> tuple[bool, bool, bool]:
        rng = rng_for(seed, t)
        A = rng.standard_normal((m, n))
        b = rng.standard_normal(m)
        inst = Instance.from_arrays(A, b, s, tol)
        rep = enumerate_stationary(inst)
        all_nondeg = rep.degenerate == 0 and not rep.continuum_detected
        active = not any(
            p.kind is PointKind.DEGENERATE and len(p.point.support) == s for p in rep.points
        )
        if not (all_nondeg and active and rep.s_regular):
            logger.warning(
                "genericity failure at trial %d (all_nondegenerate=%s, "
                "minimizers_active=%s, s_regular=%s): %s",
                t,
                all_nondeg,
                active,
                rep.s_regular,
                json.dumps(instance_to_dict(inst)),
            )
        return all_nondeg, active, rep.s_regular

    outcomes = run_mapped(one_trial, range(trials), threads)
    if trials == 0:
        return GenericityReport(0, 1.0, 1.0, 1.0, seed)
    return GenericityReport(
        trials=trials,
        all_nondegenerate_fraction=sum(a for a, _, _ in outcomes) / trials,
        minimizers_active_fraction=sum(b for _, b, _ in outcomes) / trials,
        s_regular_fraction=sum(c for _, _, c in outcomes) / trials,
        seed=seed,
    )
