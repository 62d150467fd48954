"""Finite diagnostics for the uniqueness theory: boundedness functionals,
curvature lower bounds, intrinsic vertex metrics with their lift to all
simplices, degree path metric, ball probes, and path-product partial sums.

Everything here reports evidence computed on the materialized complex; none
of it claims anything about the untruncated family.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import Simplex, SimplicialComplex, WeightAssignment
from .operators import OrientationAssignment
from .laplacian import symmetrize_to_euclidean, up_laplacian
from .schrodinger import SchrodingerData, forman_curvature, schrodinger_data

LAMBDA = {"up": 1.0, "down": 0.5}


@dataclass(frozen=True)
class BoundednessReport:
    sup_gamma_over_m: float
    sup_dim_weighted: float
    derived_norm_bound: float
    lambda_max_up: float
    verdict: str


def boundedness_report(complex_: SimplicialComplex, weights: WeightAssignment,
                       orientation: OrientationAssignment) -> BoundednessReport:
    """Suprema of the degree functionals plus the derived norm bound.

    The bound 2 sup (dim+2) gamma_up / m dominates the largest up-Laplacian
    eigenvalue on every finite complex and is cross-checked against it.
    """
    sup_ratio = 0.0
    sup_dim = 0.0
    sup_bound = 0.0
    for tau in complex_.simplices():
        gamma = sum(weights(s) for s in complex_.cofaces(tau))
        r = gamma / weights(tau)
        sup_ratio = max(sup_ratio, r)
        sup_dim = max(sup_dim, (tau.dim + 1) * r)
        sup_bound = max(sup_bound, (tau.dim + 2) * r)
    lam = 0.0
    for k in sorted(complex_.levels):
        if not complex_.level(k):
            continue
        sym = symmetrize_to_euclidean(up_laplacian(complex_, weights, orientation, k),
                                      weights)
        if sym.size:
            lam = max(lam, float(np.linalg.eigvalsh(sym)[-1]))
    return BoundednessReport(sup_gamma_over_m=sup_ratio, sup_dim_weighted=sup_dim,
                             derived_norm_bound=2.0 * sup_bound, lambda_max_up=lam,
                             verdict="bounded on materialized data")


@dataclass(frozen=True)
class CurvatureReport:
    inf_forman: float
    inf_weight: float
    verdict: str


def curvature_criterion(complex_: SimplicialComplex, weights: WeightAssignment,
                        orientation: OrientationAssignment) -> CurvatureReport:
    """Infima of the curvature and the weight over the materialized simplices;
    evidence for the uniform-positivity + curvature-bounded-below hypotheses,
    never a proof for an infinite family."""
    curv = forman_curvature(complex_, weights, orientation)
    inf_forman = min(curv.values())
    inf_weight = min(weights(s) for s in complex_.simplices())
    return CurvatureReport(inf_forman=inf_forman, inf_weight=inf_weight,
                           verdict="hypotheses hold on sample")


def family_trend(values: Sequence[float]) -> str:
    """Coarse monotone-trend label for a profile over growing truncations."""
    if len(values) < 2:
        return "insufficient data"
    if values[-1] > 2.0 * values[0]:
        return "growing"
    if values[-1] < 0.5 * values[0]:
        return "shrinking"
    return "stable"


@dataclass(eq=False)
class MetricWeights:
    """Edge weights of the vertex path metric for one flavor.

    Keys are sorted vertex pairs of the 1-skeleton; a pair with no usable
    witness simplex carries math.inf.  The hodge flavor is the pointwise
    minimum of the other two scaled by 1/sqrt(2).
    """

    flavor: str
    edge_weights: dict[tuple[int, int], float]
    vertices: tuple[int, ...]

    def neighbors(self, v: int) -> Iterable[tuple[int, float]]:
        for (a, b), w in self.edge_weights.items():
            if a == v:
                yield b, w
            elif b == v:
                yield a, w


def _row_mean(data: SchrodingerData, weights: WeightAssignment, tau: Simplex) -> float:
    return data.row_sum(tau) / weights(tau)


def metric_weights(complex_: SimplicialComplex, weights: WeightAssignment,
                   orientation: OrientationAssignment, flavor: str) -> MetricWeights:
    """Per-edge weight: scale times the inf over simplices meeting either
    endpoint of (coupling row sum / weight) ** -1/2.

    Simplices with an empty coupling row contribute +inf and drop out of the
    inf.  The scale is 1 for the up flavor and 1/2 for down; the hodge
    weights are composed from the other two.
    """
    if flavor == "hodge":
        up = metric_weights(complex_, weights, orientation, "up")
        down = metric_weights(complex_, weights, orientation, "down")
        combined = {pair: min(up.edge_weights[pair], down.edge_weights[pair]) / math.sqrt(2.0)
                    for pair in up.edge_weights}
        return MetricWeights(flavor="hodge", edge_weights=combined, vertices=up.vertices)
    if flavor not in LAMBDA:
        raise ValueError(f"unknown flavor {flavor!r}")
    data = schrodinger_data(complex_, weights, orientation, flavor)
    touching: dict[int, list[Simplex]] = {}
    for tau in complex_.simplices():
        for v in tau.vertices:
            touching.setdefault(v, []).append(tau)
    out: dict[tuple[int, int], float] = {}
    for a, b in complex_.skeleton_edges():
        best = math.inf
        seen = set()
        for tau in touching.get(a, []) + touching.get(b, []):
            if tau in seen:
                continue
            seen.add(tau)
            mean = _row_mean(data, weights, tau)
            if mean > 0.0:
                best = min(best, mean ** -0.5)
        out[(a, b)] = LAMBDA[flavor] * best
    vertices = tuple(v.vertices[0] for v in complex_.vertices)
    return MetricWeights(flavor=flavor, edge_weights=out, vertices=vertices)


def _dijkstra(mw: MetricWeights, source: int) -> dict[int, float]:
    dist = {source: 0.0}
    done: set[int] = set()
    heap: list[tuple[float, int]] = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for nb, w in mw.neighbors(v):
            if not math.isfinite(w):
                continue
            nd = d + w
            if nd < dist.get(nb, math.inf):
                dist[nb] = nd
                heapq.heappush(heap, (nd, nb))
    return dist


def path_metric(mw: MetricWeights, v: int, v2: int) -> float:
    """Shortest-path value between two vertices; +inf when disconnected."""
    if v == v2:
        return 0.0
    return _dijkstra(mw, v).get(v2, math.inf)


def all_pairs_distances(mw: MetricWeights) -> dict[int, dict[int, float]]:
    return {v: _dijkstra(mw, v) for v in mw.vertices}


def hausdorff_lift(mw: MetricWeights, tau: Simplex, other: Simplex,
                   dist: dict[int, dict[int, float]] | None = None) -> float:
    """Two-sided max-min lift of the vertex metric to simplex pairs."""
    if tau == other:
        return 0.0
    if dist is None:
        dist = all_pairs_distances(mw)

    def one_side(src: Simplex, dst: Simplex) -> float:
        worst = 0.0
        for v in src.vertices:
            row = dist.get(v, {})
            best = min((row.get(v2, math.inf) for v2 in dst.vertices),
                       default=math.inf)
            worst = max(worst, best)
        return worst

    return max(one_side(tau, other), one_side(other, tau))


@dataclass(frozen=True)
class IntrinsicReport:
    flavor: str
    max_row_ratio: float
    witness: Simplex | None


def intrinsic_check(complex_: SimplicialComplex, weights: WeightAssignment,
                    orientation: OrientationAssignment, flavor: str) -> IntrinsicReport:
    """Max over simplices of (coupling-weighted squared lifted distance) / weight.

    At most 1 when the lifted path metric is intrinsic for the flavor's
    coupling graph, which holds on finite complexes without the empty
    simplex (with it, vertex pairs are coupled through the bottom level
    while the path metric only sees the 1-skeleton).
    """
    data = schrodinger_data(complex_, weights, orientation, flavor)
    mw = metric_weights(complex_, weights, orientation, flavor)
    dist = all_pairs_distances(mw)
    worst = 0.0
    witness = None
    for tau in complex_.simplices():
        total = 0.0
        for other, b, _ in data.row(tau):
            if tau.dim < 0 or other.dim < 0:
                continue
            d = hausdorff_lift(mw, tau, other, dist)
            total += b * d * d
        ratio = total / weights(tau)
        if ratio > worst:
            worst = ratio
            witness = tau
    return IntrinsicReport(flavor=flavor, max_row_ratio=worst, witness=witness)


def degree_path_metric(complex_: SimplicialComplex, v: int, v2: int) -> float:
    """Path metric whose hop cost is max(deg, deg') ** -1/2 on the 1-skeleton."""
    degrees: dict[int, int] = {}
    for a, b in complex_.skeleton_edges():
        degrees[a] = degrees.get(a, 0) + 1
        degrees[b] = degrees.get(b, 0) + 1
    ew = {}
    for a, b in complex_.skeleton_edges():
        ew[(a, b)] = max(degrees[a], degrees[b]) ** -0.5
    vertices = tuple(x.vertices[0] for x in complex_.vertices)
    return path_metric(MetricWeights("degree", ew, vertices), v, v2)


@dataclass(frozen=True)
class BallProbe:
    count: int
    expansions: int
    budget_exceeded: bool


def ball_probe(neighbors: Callable[[int], Iterable[tuple[int, float]]],
               root: int, radius: float, budget: int = 10 ** 6) -> BallProbe:
    """Count vertices within ``radius`` of ``root`` by frontier expansion.

    ``neighbors`` may yield endless streams (non-locally-finite skeletons);
    the probe charges one unit of budget per examined neighbor and flags
    ``budget_exceeded`` when it runs out, reporting the vertices discovered
    within radius so far (a lower bound that keeps growing with budget).
    Evidence only: a successful count never proves ball finiteness of the
    untruncated family.
    """
    dist = {root: 0.0}
    done: set[int] = set()
    heap: list[tuple[float, int]] = [(0.0, root)]
    spent = 0

    def count() -> int:
        return sum(1 for d in dist.values() if d <= radius)

    while heap:
        d, v = heapq.heappop(heap)
        if v in done or d > radius:
            continue
        done.add(v)
        for nb, w in neighbors(v):
            spent += 1
            if spent > budget:
                return BallProbe(count=count(), expansions=spent, budget_exceeded=True)
            nd = d + w
            if nd <= radius and nd < dist.get(nb, math.inf):
                dist[nb] = nd
                heapq.heappush(heap, (nd, nb))
    return BallProbe(count=count(), expansions=spent, budget_exceeded=False)


def skeleton_neighbors(mw: MetricWeights) -> Callable[[int], list[tuple[int, float]]]:
    """Adapter turning metric weights into a neighbor function for ball_probe."""
    table: dict[int, list[tuple[int, float]]] = {}
    for (a, b), w in mw.edge_weights.items():
        table.setdefault(a, []).append((b, w))
        table.setdefault(b, []).append((a, w))
    return lambda v: table.get(v, [])


@dataclass(frozen=True)
class PathDiagnostic:
    path: tuple[Simplex, ...]
    alpha: float
    partial_sums: tuple[float, ...]


def path_product_sums(complex_: SimplicialComplex, weights: WeightAssignment,
                      orientation: OrientationAssignment, flavor: str,
                      path: Sequence[Simplex], alpha: float) -> PathDiagnostic:
    """Partial sums of the weighted squared products along a coupling path.

    Term n is m(tau_n) times the squared product over j < n of
    1 + (potential(tau_j) - alpha m(tau_j)) / (coupling row sum of tau_j).
    Consecutive path elements must be coupled and every denominator must be
    positive; violations reject with the offending index.
    """
    data = schrodinger_data(complex_, weights, orientation, flavor)
    path = tuple(path)
    for i, tau in enumerate(path):
        if tau not in complex_:
            raise ValueError(f"path element {i} not in complex: {tau}")
        if data.degree[tau] - data.potential[tau] <= 0.0:
            raise ValueError(f"zero coupling row at path index {i}: an isolated "
                             "simplex cannot extend a path")
    for i in range(len(path) - 1):
        if data.coupling.get(_ordered(path[i], path[i + 1]), 0.0) <= 0.0:
            raise ValueError(f"path elements {i} and {i + 1} are not coupled")
    sums = []
    product = 1.0
    total = 0.0
    for n in range(1, len(path)):
        j = n - 1
        denom = data.degree[path[j]] - data.potential[path[j]]
        factor = 1.0 + (data.potential[path[j]] - alpha * weights(path[j])) / denom
        product *= factor * factor
        total += weights(path[n]) * product
        sums.append(total)
    return PathDiagnostic(path=path, alpha=alpha, partial_sums=tuple(sums))


def _ordered(a: Simplex, b: Simplex) -> tuple[Simplex, Simplex]:
    return (a, b) if a.sort_key() <= b.sort_key() else (b, a)
