"""Pointwise tests: M-stationarity, nondegeneracy certificates, classification.

A feasible point is M-stationary when the gradient ``A.T (A x - b)`` vanishes
on its support.  Nondegeneracy combines two conditions:

ND1
    whenever the sparsity constraint is inactive (``||x||_0 < s``), every
    gradient entry on the off-support indices is bounded away from zero;
ND2
    the sensing matrix restricted to the support columns has full column rank.

Nondegenerate points are classified by their sparsity level: full support
means local minimizer, support size ``s - 1`` means saddle point, anything
smaller is a lower-order stationary point.  Points failing ND1 or ND2 are
reported as degenerate without attempting a minimizer/saddle label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatchError,
    InfeasiblePointError,
    NotStationaryError,
    RankDeficiencyError,
)
from .linalg import numerical_rank, pseudoinverse_apply
from .model import FeasiblePoint, Instance, complement_of, objective


class PointKind(str, Enum):
    LOCAL_MINIMIZER = "LocalMinimizer"
    SADDLE_POINT = "SaddlePoint"
    LOWER_ORDER = "LowerOrderStationary"
    DEGENERATE = "DegeneratePoint"


@dataclass(frozen=True, eq=False)
class NondegeneracyCertificate:
    """Outcome of the ND1/ND2 checks at one M-stationary point.

    ``nd1_vector`` holds the gradient entries on the off-support indices in
    increasing index order; it is empty (and ``nd1_min_abs`` infinite) when
    the sparsity constraint is active, in which case ND1 holds vacuously.
    ``nd1_near_degenerate`` warns that the smallest off-support gradient
    magnitude fell into ``(0, stat_tol]``: ND1 is reported as failed, but the
    failure is within numerical noise of a pass.
    """

    nd1_holds: bool
    nd1_vector: np.ndarray
    nd1_min_abs: float
    nd1_near_degenerate: bool
    nd2_holds: bool
    support_rank: int

    @property
    def nondegenerate(self) -> bool:
        return self.nd1_holds and self.nd2_holds


@dataclass(frozen=True, eq=False)
class StationaryPoint:
    """An M-stationary point with its certificate and classification."""

    point: FeasiblePoint
    value: float
    stationarity_residual: float
    cert: NondegeneracyCertificate
    kind: PointKind


@dataclass(frozen=True)
class CellAttachment:
    """Number and dimension of cells glued when a level sweep crosses a point."""

    cell_count: int
    cell_dim: int


def gradient(inst: Instance, x) -> np.ndarray:
    """Gradient ``A.T (A x - b)`` of the objective at ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.n,):
        raise DimensionMismatchError(f"x must have length {inst.n}, got shape {x.shape}")
    return inst.A.T @ (inst.A @ x - inst.b)


def stationarity_residual(inst: Instance, point: FeasiblePoint) -> float:
    """Max-norm of the gradient restricted to the support (0 for empty support)."""
    if len(point.support) > inst.s:
        raise InfeasiblePointError(
            f"point has {len(point.support)} nonzeros but s={inst.s}"
        )
    if not point.support:
        return 0.0
    g = gradient(inst, point.x)
    return float(np.max(np.abs(g[list(point.support)])))


def is_m_stationary(inst: Instance, point: FeasiblePoint) -> bool:
    """Whether the gradient vanishes on the support, up to ``stat_tol``."""
    return stationarity_residual(inst, point) <= inst.tol.stat_tol


def _require_stationary(inst: Instance, point: FeasiblePoint) -> float:
    resid = stationarity_residual(inst, point)
    if resid > inst.tol.stat_tol:
        raise NotStationaryError(
            f"stationarity residual {resid:.3e} exceeds stat_tol {inst.tol.stat_tol:.3e}"
        )
    return resid


def nd1_vector_direct(inst: Instance, point: FeasiblePoint) -> np.ndarray:
    """Gradient entries on the off-support indices, in increasing index order.

    The vector is returned for any stationarity level; ND1 only constrains it
    when the sparsity constraint is inactive, and :func:`certify` stores an
    empty vector in that vacuous case.
    """
    _require_stationary(inst, point)
    comp = complement_of(point.support, inst.n)
    g = gradient(inst, point.x)
    return g[list(comp)]


def nd1_vector_projection(inst: Instance, point: FeasiblePoint) -> np.ndarray:
    """ND1 vector via the orthogonal projector onto the support column span.

    Writes the stationary point in closed form and substitutes, giving
    ``-((I - A_S A_S^+) A_{S^c}).T b`` with ``S`` the support.  Agrees with
    :func:`nd1_vector_direct` entrywise whenever ``A_S`` has full column rank;
    for an empty support the projector is the zero map and the expression
    reduces to ``-A.T b`` on all indices.
    """
    _require_stationary(inst, point)
    S = list(point.support)
    comp = complement_of(point.support, inst.n)
    A_S = inst.A[:, S]
    if numerical_rank(A_S, inst.tol.rank_tol) < len(S):
        raise RankDeficiencyError(
            f"support columns {point.support} are numerically rank deficient"
        )
    projected_b = A_S @ pseudoinverse_apply(A_S, inst.b)
    return -(inst.A[:, list(comp)].T @ (inst.b - projected_b))


def certify(inst: Instance, point: FeasiblePoint) -> NondegeneracyCertificate:
    """Evaluate ND1 and ND2 at an M-stationary point.

    ND1 uses a strict threshold: entries must exceed ``stat_tol`` in absolute
    value.  A smallest magnitude in ``(0, stat_tol]`` is a failure with the
    near-degenerate warning set, since floating point cannot certify exact
    nonvanishing.
    """
    _require_stationary(inst, point)
    k = len(point.support)
    support_rank = numerical_rank(inst.A[:, list(point.support)], inst.tol.rank_tol)
    nd2 = support_rank == k
    if k == inst.s:
        return NondegeneracyCertificate(
            nd1_holds=True,
            nd1_vector=np.zeros(0),
            nd1_min_abs=math.inf,
            nd1_near_degenerate=False,
            nd2_holds=nd2,
            support_rank=support_rank,
        )
    vec = nd1_vector_direct(inst, point)
    min_abs = float(np.min(np.abs(vec)))
    nd1 = min_abs > inst.tol.stat_tol
    return NondegeneracyCertificate(
        nd1_holds=nd1,
        nd1_vector=vec,
        nd1_min_abs=min_abs,
        nd1_near_degenerate=(not nd1) and min_abs > 0.0,
        nd2_holds=nd2,
        support_rank=support_rank,
    )


def classify(inst: Instance, point: FeasiblePoint) -> StationaryPoint:
    """Classify an M-stationary point by nondegeneracy and sparsity level."""
    resid = _require_stationary(inst, point)
    cert = certify(inst, point)
    k = len(point.support)
    if not cert.nondegenerate:
        kind = PointKind.DEGENERATE
    elif k == inst.s:
        kind = PointKind.LOCAL_MINIMIZER
    elif k == inst.s - 1:
        kind = PointKind.SADDLE_POINT
    else:
        kind = PointKind.LOWER_ORDER
    return StationaryPoint(
        point=point,
        value=objective(inst, point.x),
        stationarity_residual=resid,
        cert=cert,
        kind=kind,
    )


def cell_attachment(n: int, s: int, k: int) -> CellAttachment:
    """Cells attached when crossing a stationary value at sparsity level ``k``.

    Crossing a point with ``k`` nonzeros attaches ``C(n - k - 1, s - k)``
    cells of dimension ``s - k``; a full-support point attaches a single
    zero-dimensional cell, which is what creates a new component.
    """
    if not (isinstance(n, int) and isinstance(s, int) and isinstance(k, int)):
        raise ValueError("n, s, k must be integers")
    if not 0 <= k <= s <= n - 1:
        raise ValueError(f"arguments must satisfy 0 <= k <= s <= n-1, got n={n}, s={s}, k={k}")
    return CellAttachment(cell_count=math.comb(n - k - 1, s - k), cell_dim=s - k)
