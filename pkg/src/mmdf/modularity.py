"""Fuzzy weighted modularity for signed/weighted graphs with soft
partitions, and community-count selection by scanning it.

The score splits the adjacency into positive and negative parts,
evaluates a soft (membership-inner-product) modularity on each, and
combines them weighted by their shares of the total edge mass. For
hard partitions on nonnegative graphs it reduces to the classical
Newman-Girvan modularity; for soft partitions on nonnegative graphs,
to fuzzy modularity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dfsp import EstimationError, dfsp, validate_memberships
from .graph import WeightedGraph, sign_split

__all__ = [
    "ModularityValue",
    "KScanPoint",
    "KScanResult",
    "fuzzy_weighted_modularity",
    "estimate_k",
    "DEFAULT_K_MAX",
]


@dataclass(frozen=True)
class ModularityValue:
    """Combined score q plus its positive/negative components.

    q == pos_weight * q_pos - neg_weight * q_neg exactly (computed as
    that expression). pos_weight + neg_weight == 1 whenever the graph
    has any edge mass.
    """

    q: float
    q_pos: float
    q_neg: float
    pos_weight: float
    neg_weight: float


def _soft_modularity(part: np.ndarray, degrees: np.ndarray, mass: float, m: np.ndarray) -> float:
    # sum_ij (part_ij - d_i d_j / 2m) <m_i, m_j>, including i == j as the
    # null-model diagonal (part's diagonal is zero by construction)
    two_m = 2.0 * mass
    edge_term = float(np.einsum("ij,ij->", part @ m, m))
    null_term = float(np.square(degrees @ m).sum()) / two_m
    return (edge_term - null_term) / two_m


def fuzzy_weighted_modularity(g: WeightedGraph, memberships: np.ndarray) -> ModularityValue:
    """Score a soft partition of a weighted (possibly signed) graph.

    memberships must have one probability-vector row per node of g.
    With a single community the positive and negative sums cancel
    identically, so the score is returned as exact zero. An entirely
    empty graph scores zero as well.
    """
    m = np.asarray(memberships, dtype=float)
    if m.ndim != 2 or m.shape[0] != g.n:
        raise ValueError(
            f"membership shape {m.shape} does not match graph with {g.n} nodes"
        )
    validate_memberships(m)
    split = sign_split(g)
    total = 2.0 * split.pos_mass + 2.0 * split.neg_mass
    if total == 0.0:
        return ModularityValue(q=0.0, q_pos=0.0, q_neg=0.0, pos_weight=0.0, neg_weight=0.0)
    pos_weight = 2.0 * split.pos_mass / total
    neg_weight = 2.0 * split.neg_mass / total
    if m.shape[1] == 1:
        # single-community null: both double sums vanish identically
        return ModularityValue(0.0, 0.0, 0.0, pos_weight, neg_weight)
    q_pos = 0.0
    if split.pos_mass > 0:
        q_pos = _soft_modularity(split.pos, split.pos_degrees, split.pos_mass, m)
    q_neg = 0.0
    if split.neg_mass > 0:
        q_neg = _soft_modularity(split.neg, split.neg_degrees, split.neg_mass, m)
    q = pos_weight * q_pos - neg_weight * q_neg
    return ModularityValue(q=q, q_pos=q_pos, q_neg=q_neg, pos_weight=pos_weight, neg_weight=neg_weight)


DEFAULT_K_MAX = 15


@dataclass(frozen=True)
class KScanPoint:
    k: int
    modularity: ModularityValue | None
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.modularity is not None


@dataclass(frozen=True)
class KScanResult:
    """Community-count scan: the score curve and its argmax."""

    best_k: int
    curve: tuple[KScanPoint, ...]
    k_max: int

    def curve_rows(self) -> list[tuple[int, float | None]]:
        return [(p.k, p.modularity.q if p.ok else None) for p in self.curve]

    def summary(self) -> dict:
        return {
            "best_k": self.best_k,
            "k_max": self.k_max,
            "failures": {p.k: p.failure for p in self.curve if not p.ok},
        }


def estimate_k(
    g: WeightedGraph,
    k_max: int | None = None,
    stop_when_decreasing: bool = False,
) -> KScanResult:
    """Pick the community count maximizing fuzzy weighted modularity.

    Runs the membership estimator for k = 1..k_max, scores each result,
    and returns the k of the largest score (smallest k on ties).
    Estimation failures at individual k are recorded on the curve and
    skipped; only if every k fails is an EstimationError raised. With
    stop_when_decreasing the scan stops at the first k whose score does
    not improve on its predecessor's; the default scans the full range
    because score curves are routinely non-monotone.
    """
    if k_max is None:
        k_max = min(DEFAULT_K_MAX, g.n - 1)
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    points: list[KScanPoint] = []
    previous_q: float | None = None
    for k in range(1, k_max + 1):
        try:
            report = dfsp(g.weights, k)
        except EstimationError as exc:
            points.append(KScanPoint(k=k, modularity=None, failure=f"{exc.stage}: {exc}"))
            continue
        value = fuzzy_weighted_modularity(g, report.memberships)
        points.append(KScanPoint(k=k, modularity=value))
        if stop_when_decreasing and previous_q is not None and value.q <= previous_q:
            break
        previous_q = value.q
    successes = [p for p in points if p.ok]
    if not successes:
        raise EstimationError("scan", f"estimation failed for every k in 1..{k_max}")
    best = max(successes, key=lambda p: (p.modularity.q, -p.k))
    return KScanResult(best_k=best.k, curve=tuple(points), k_max=k_max)
