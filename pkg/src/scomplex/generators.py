"""Built-in complex families and weight schemes, including the wheel-of-triangles
counterexample family whose boundary operator fails to square to zero in the limit."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import sqrt
from typing import Iterable, Iterator, Mapping

from .core import (EMPTY, GradedFunction, Simplex, SimplicialComplex,
                   WeightAssignment, build_complex, normalizing_weights, simplex)
from .laplacian import Truncation, truncate_by_distance
from .operators import OrientationAssignment

__all__ = [
    "FanFamily", "fan", "fan_truncation", "FanSkeleton",
    "clique_complex", "random_complex", "full_simplex", "cycle_complex",
    "normalizing_weights", "constant_diagonal_weights", "ConstantDiagonalResult",
]


@dataclass(eq=False)
class FanFamily:
    """Truncation of the infinite triangle fan {0, n, n+1}, n >= 1.

    ``omega0`` is the distinguished mixed-grading function (vertex 0 plus a
    1/n^2 profile on the triangles).  ``d_omega0`` carries the boundary of
    omega0 *in the full infinite family*, restricted to the truncation: the
    interior values agree with a direct in-truncation computation, while the
    frontier edge {0, N+1} keeps its family value 0 (in the truncation alone
    the missing outer triangle would leave -(N+1)^2 there).
    """

    n: int
    complex: SimplicialComplex
    weights: WeightAssignment
    orientation: OrientationAssignment
    omega0: GradedFunction
    d_omega0: GradedFunction

    @property
    def frontier_edge(self) -> Simplex:
        return simplex(0, self.n + 1)


def _fan_simplices(n: int):
    triangles = [simplex(0, i, i + 1) for i in range(1, n + 1)]
    spokes = [simplex(0, i) for i in range(1, n + 2)]
    rim = [simplex(i, i + 1) for i in range(1, n + 1)]
    vertices = [simplex(i) for i in range(0, n + 2)]
    return vertices, spokes, rim, triangles


def _fan_weights(n: int) -> dict[Simplex, float]:
    w: dict[Simplex, float] = {}
    vertices, spokes, rim, triangles = _fan_simplices(n)
    for v in vertices:
        w[v] = 1.0
    for i, e in enumerate(spokes, start=1):
        w[e] = 1.0 / i ** 2
    for i, e in enumerate(rim, start=1):
        w[e] = float(i ** 2)
    for i, t in enumerate(triangles, start=1):
        w[t] = float(i ** 2)
    return w


def _fan_orientation(n: int) -> OrientationAssignment:
    signs: dict[tuple[Simplex, Simplex], int] = {}
    vertices, spokes, rim, triangles = _fan_simplices(n)
    for e in spokes + rim:
        lo, hi = e.vertices
        signs[(simplex(lo), e)] = 1
        signs[(simplex(hi), e)] = -1
    for i, t in enumerate(triangles, start=1):
        signs[(simplex(0, i), t)] = 1
        signs[(simplex(i, i + 1), t)] = 1
        signs[(simplex(0, i + 1), t)] = -1
    return OrientationAssignment(mode="explicit", explicit_signs=signs)


def fan(n: int) -> FanFamily:
    """Truncation at index ``n`` of the triangle-fan family, with its explicit
    orientation and exact family weights; the empty simplex is excluded for
    every ``n`` because the full family has infinite vertex mass."""
    if n < 1:
        raise ValueError("fan truncation needs n >= 1")
    triangles = [[0, i, i + 1] for i in range(1, n + 1)]
    complex_, weights = build_complex(triangles, weight_spec=_fan_weights(n),
                                      empty_policy="exclude")
    orient = _fan_orientation(n)
    orient.validate(complex_)
    omega0 = GradedFunction({simplex(0): 1.0})
    for i in range(1, n + 1):
        omega0.values[simplex(0, i, i + 1)] = 1.0 / i ** 2
    d_omega0 = GradedFunction({simplex(0, 1): 1.0})
    for i in range(1, n + 1):
        d_omega0.values[simplex(i, i + 1)] = 1.0 / i ** 2
    return FanFamily(n=n, complex=complex_, weights=weights, orientation=orient,
                     omega0=omega0, d_omega0=d_omega0)


def fan_truncation(n: int) -> Truncation:
    """The fan at index ``n`` as the inner part of the fan at index ``n + 1``.

    The halo is the single outer layer the ambient family adds: the next
    spoke, the next rim edge, and the next triangle.  This is the finite
    stand-in for the infinite family's view of the truncation boundary.
    """
    inner = fan(n)
    ambient = fan(n + 1)
    inner_set = set(inner.complex.simplices())
    halo = []
    for s in ambient.complex.simplices():
        if s in inner_set:
            continue
        if any(f in inner_set for f in ambient.complex.faces(s)):
            halo.append(s)
    return Truncation(ambient=ambient.complex, weights=ambient.weights,
                      orientation=ambient.orientation,
                      inner=frozenset(inner_set), halo=frozenset(halo),
                      label=f"fan[{n}] in fan[{n + 1}]")


class FanSkeleton:
    """Lazy 1-skeleton of the infinite fan for metric-ball probes.

    ``neighbors`` yields (vertex, hop weight 1.0) pairs; the hub vertex 0
    has an endless neighbor stream, so radius probes around it are expected
    to exhaust their budget.
    """

    def neighbors(self, v: int) -> Iterator[tuple[int, float]]:
        if v == 0:
            i = 1
            while True:
                yield i, 1.0
                i += 1
        else:
            yield 0, 1.0
            if v >= 2:
                yield v - 1, 1.0
            yield v + 1, 1.0


def clique_complex(edges: Iterable[tuple[int, int]], max_dim: int,
                   vertices: Iterable[int] | None = None,
                   include_empty: bool = False) -> SimplicialComplex:
    """Complex of all cliques of a simple graph up to ``max_dim`` + 1 vertices."""
    vs = set(vertices or ())
    adj: dict[int, set[int]] = {v: set() for v in vs}
    for a, b in edges:
        if a == b:
            raise ValueError(f"loop edge ({a},{b}) not allowed")
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
        vs.update((a, b))
    cliques: list[tuple[int, ...]] = [(v,) for v in sorted(vs)]
    out = set(cliques)
    current = cliques
    for _ in range(max_dim):
        nxt = []
        for c in current:
            common = set.intersection(*(adj[v] for v in c)) if c else set()
            for v in sorted(common):
                if v > c[-1]:
                    nxt.append(c + (v,))
        out.update(nxt)
        current = nxt
        if not current:
            break
    return SimplicialComplex.from_simplices((Simplex(c) for c in out),
                                            includes_empty=include_empty)


def random_complex(n_vertices: int, edge_prob: float, max_dim: int, seed: int,
                   include_empty: bool = False) -> SimplicialComplex:
    """Clique complex of a seeded Erdos-Renyi-style graph; deterministic per seed."""
    if n_vertices > 64:
        raise ValueError("random complexes are desk scale: n_vertices <= 64")
    rng = random.Random(seed)
    edges = [(a, b) for a, b in itertools.combinations(range(n_vertices), 2)
             if rng.random() < edge_prob]
    return clique_complex(edges, max_dim, vertices=range(n_vertices),
                          include_empty=include_empty)


def full_simplex(n_vertices: int, include_empty: bool = False) -> SimplicialComplex:
    """Closure of the single simplex on vertices 0..n_vertices-1."""
    return SimplicialComplex.from_simplices(
        (Simplex(c) for r in range(1, n_vertices + 1)
         for c in itertools.combinations(range(n_vertices), r)),
        includes_empty=include_empty)


def cycle_complex(n_vertices: int, include_empty: bool = False) -> SimplicialComplex:
    """Hollow polygon on n >= 3 vertices."""
    if n_vertices < 3:
        raise ValueError("cycle needs at least 3 vertices")
    edges = [simplex(i, (i + 1) % n_vertices) for i in range(n_vertices)]
    vertices = [simplex(i) for i in range(n_vertices)]
    return SimplicialComplex.from_simplices(vertices + edges,
                                            includes_empty=include_empty)


@dataclass(frozen=True)
class ConstantDiagonalResult:
    feasible: bool
    weights: dict[Simplex, float] | None
    infeasible_at: tuple[tuple[Simplex, float], ...]
    root: str


def constant_diagonal_weights(complex_: SimplicialComplex, weights: WeightAssignment,
                              k: int, root: str = "larger") -> ConstantDiagonalResult:
    """Level-k weights that pin the full Laplacian's diagonal at 1.

    With A = sum of reciprocal face weights and B = sum of coface weights the
    level-k weight must solve m^2 A - m + B = 0, solvable in positive reals
    iff 4AB <= 1.  The default is the larger root, the branch continuous in
    B at B = 0 (where it degenerates to 1/A); ``root="smaller"`` opts into
    the other branch.
    """
    if root not in ("larger", "smaller"):
        raise ValueError(f"root must be 'larger' or 'smaller', got {root!r}")
    solved: dict[Simplex, float] = {}
    bad: list[tuple[Simplex, float]] = []
    for tau in complex_.level(k):
        a = sum(1.0 / weights(rho) for rho in complex_.faces(tau))
        b = sum(weights(sigma) for sigma in complex_.cofaces(tau))
        if a == 0.0:
            if b > 0.0:
                solved[tau] = b
            else:
                bad.append((tau, 0.0))
            continue
        if b == 0.0:
            solved[tau] = 1.0 / a
            continue
        q = 4.0 * a * b
        if q > 1.0:
            bad.append((tau, q))
            continue
        disc = sqrt(1.0 - q)
        solved[tau] = (1.0 + disc) / (2.0 * a) if root == "larger" else (1.0 - disc) / (2.0 * a)
    if bad:
        return ConstantDiagonalResult(False, None, tuple(bad), root)
    return ConstantDiagonalResult(True, solved, (), root)
