"""Weighted simplicial complexes: simplices, downward closures, weights, adjacency."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union


@functools.total_ordering
@dataclass(frozen=True)
class Simplex:
    """A simplex as its strictly increasing vertex tuple; the empty tuple is the empty simplex."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        vs = tuple(self.vertices)
        object.__setattr__(self, "vertices", vs)
        if any(v < 0 for v in vs):
            raise ValueError(f"vertex ids must be non-negative: {vs}")
        if any(a >= b for a, b in zip(vs, vs[1:])):
            raise ValueError(f"vertices must be strictly increasing: {vs}")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> list["Simplex"]:
        """Codimension-1 faces (a vertex has the empty simplex as its only face)."""
        if self.dim < 0:
            return []
        return [Simplex(self.vertices[:i] + self.vertices[i + 1:])
                for i in range(len(self.vertices))]

    def contains(self, other: "Simplex") -> bool:
        return set(other.vertices) <= set(self.vertices)

    def union(self, other: "Simplex") -> "Simplex":
        return Simplex(tuple(sorted(set(self.vertices) | set(other.vertices))))

    def intersection(self, other: "Simplex") -> "Simplex":
        return Simplex(tuple(sorted(set(self.vertices) & set(other.vertices))))

    def key(self) -> str:
        return ",".join(str(v) for v in self.vertices)

    def sort_key(self) -> tuple:
        return (self.dim, self.vertices)

    def __lt__(self, other: "Simplex") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Simplex({list(self.vertices)})"


EMPTY = Simplex(())


def simplex(*vertices: int) -> Simplex:
    """Build a simplex from vertex ids in any order."""
    return Simplex(tuple(sorted(vertices)))


def is_face(tau: Simplex, sigma: Simplex) -> bool:
    """True iff tau is a codimension-1 face of sigma."""
    return sigma.dim == tau.dim + 1 and sigma.contains(tau)


@dataclass(eq=False)
class SimplicialComplex:
    """Finite downward-closed simplex store with face/coface indices.

    Instances are immutable after construction and safe for concurrent
    read access.  The empty simplex is kept explicitly when present.
    """

    levels: dict[int, tuple[Simplex, ...]]
    includes_empty: bool
    face_index: dict[Simplex, tuple[Simplex, ...]] = field(repr=False)
    coface_index: dict[Simplex, tuple[Simplex, ...]] = field(repr=False)

    @classmethod
    def from_simplices(cls, simplices: Iterable[Simplex],
                       includes_empty: bool) -> "SimplicialComplex":
        pool = set(simplices)
        if includes_empty:
            pool.add(EMPTY)
        else:
            pool.discard(EMPTY)
        levels: dict[int, list[Simplex]] = {}
        for s in pool:
            levels.setdefault(s.dim, []).append(s)
        sorted_levels = {k: tuple(sorted(v)) for k, v in sorted(levels.items())}
        face_index: dict[Simplex, tuple[Simplex, ...]] = {}
        coface_map: dict[Simplex, list[Simplex]] = {s: [] for s in pool}
        for s in sorted(pool):
            fs = tuple(f for f in sorted(s.faces()) if f in pool)
            face_index[s] = fs
            for f in fs:
                coface_map[f].append(s)
        coface_index = {s: tuple(sorted(v)) for s, v in coface_map.items()}
        return cls(levels=sorted_levels, includes_empty=includes_empty,
                   face_index=face_index, coface_index=coface_index)

    def simplices(self) -> Iterator[Simplex]:
        for k in sorted(self.levels):
            yield from self.levels[k]

    def level(self, k: int) -> tuple[Simplex, ...]:
        return self.levels.get(k, ())

    def __contains__(self, s: Simplex) -> bool:
        return s in self.face_index

    def __len__(self) -> int:
        return len(self.face_index)

    @property
    def dim(self) -> int:
        return max(self.levels) if self.levels else -1

    @property
    def vertices(self) -> tuple[Simplex, ...]:
        return self.level(0)

    def faces(self, s: Simplex) -> tuple[Simplex, ...]:
        if s not in self.face_index:
            raise KeyError(f"simplex not in complex: {s}")
        return self.face_index[s]

    def cofaces(self, s: Simplex) -> tuple[Simplex, ...]:
        if s not in self.coface_index:
            raise KeyError(f"simplex not in complex: {s}")
        return self.coface_index[s]

    def maximal_simplices(self) -> list[Simplex]:
        return [s for s in self.simplices() if not self.coface_index[s]]

    def skeleton_edges(self) -> list[tuple[int, int]]:
        """Vertex pairs of the 1-skeleton."""
        return [(e.vertices[0], e.vertices[1]) for e in self.level(1)]


def downward_closure(maximal: Iterable[Iterable[int]]) -> set[Simplex]:
    """All non-empty subsets of the given vertex sets."""
    out: set[Simplex] = set()
    for m in maximal:
        vs = tuple(sorted(set(m)))
        if not vs:
            raise ValueError("maximal simplices must be non-empty vertex lists")
        for r in range(1, len(vs) + 1):
            for combo in itertools.combinations(vs, r):
                out.add(Simplex(combo))
    return out


@dataclass(eq=False)
class WeightAssignment:
    """Strictly positive weight per simplex plus the scheme it came from."""

    weights: dict[Simplex, float]
    scheme: str = "explicit"

    def __post_init__(self):
        for s, w in self.weights.items():
            if not (w > 0) or not math.isfinite(w):
                raise ValueError(f"weight must be positive and finite: m({s}) = {w}")

    def __call__(self, s: Simplex) -> float:
        return self.weights[s]

    def __contains__(self, s: Simplex) -> bool:
        return s in self.weights

    def total(self, simplices: Iterable[Simplex]) -> float:
        return sum(self.weights[s] for s in simplices)


WeightSpec = Union[str, Mapping[Simplex, float], WeightAssignment]


def normalizing_weights(complex_: SimplicialComplex,
                        top_weights: Mapping[Simplex, float] | None = None,
                        ) -> WeightAssignment:
    """Weights where every non-maximal simplex carries the sum of its coface weights.

    ``top_weights`` assigns the free values on maximal simplices (default 1.0).
    With these weights the coface-weight sum of any non-maximal simplex equals
    its own weight, which pins the diagonal of the up-Laplacian at 1.
    """
    weights: dict[Simplex, float] = {}
    maximal = set(complex_.maximal_simplices())
    if top_weights is not None:
        missing = [s for s in maximal if s not in top_weights]
        if missing:
            raise ValueError(f"missing top weight for maximal simplices: {missing}")
    for k in sorted(complex_.levels, reverse=True):
        for s in complex_.level(k):
            if s in maximal:
                weights[s] = float(top_weights[s]) if top_weights is not None else 1.0
            else:
                weights[s] = sum(weights[c] for c in complex_.cofaces(s))
    return WeightAssignment(weights, scheme="normalizing")


def build_complex(maximal_simplices: Iterable[Iterable[int]],
                  weight_spec: WeightSpec = "combinatorial",
                  empty_policy: str = "auto",
                  empty_weight: float = 1.0,
                  ) -> tuple[SimplicialComplex, WeightAssignment]:
    """Downward closure of the given maximal simplices plus a weight assignment.

    ``empty_policy`` is one of ``auto`` / ``include`` / ``exclude``.  Under
    ``auto`` the empty simplex is included exactly when the total vertex
    weight is finite, which is always the case for a finite closure.
    """
    maximal = list(maximal_simplices)
    if not maximal:
        raise ValueError("need at least one maximal simplex")
    if empty_policy not in ("auto", "include", "exclude"):
        raise ValueError(f"unknown empty_policy: {empty_policy!r}")
    closure = downward_closure(maximal)
    include_empty = empty_policy in ("auto", "include")
    complex_ = SimplicialComplex.from_simplices(closure, includes_empty=include_empty)

    if isinstance(weight_spec, WeightAssignment):
        weights = weight_spec
        _check_weight_cover(complex_, weights.weights)
    elif isinstance(weight_spec, str):
        if weight_spec == "combinatorial":
            w = {s: 1.0 for s in complex_.simplices()}
            if include_empty:
                w[EMPTY] = float(empty_weight)
            weights = WeightAssignment(w, scheme="combinatorial")
        elif weight_spec == "normalizing":
            weights = normalizing_weights(complex_)
        else:
            raise ValueError(f"unknown weight scheme: {weight_spec!r}")
    else:
        w = {s: float(v) for s, v in weight_spec.items()}
        for s in w:
            if s not in complex_:
                raise ValueError(f"weight given for a simplex not in the closure: {s}")
        if include_empty and EMPTY not in w:
            w[EMPTY] = float(empty_weight)
        _check_weight_cover(complex_, w)
        weights = WeightAssignment(w, scheme="explicit")
    return complex_, weights


def _check_weight_cover(complex_: SimplicialComplex, w: Mapping[Simplex, float]):
    missing = [s for s in complex_.simplices() if s not in w]
    if missing:
        raise ValueError(f"missing weights for {len(missing)} simplices, e.g. {missing[0]}")


def cofaces(complex_: SimplicialComplex, tau: Simplex) -> list[Simplex]:
    """Cofaces of ``tau`` in canonical order; rejects simplices outside the complex."""
    return list(complex_.cofaces(tau))


@dataclass(eq=False)
class GradedFunction:
    """Sparse real-valued function on the simplex set; absent keys mean 0."""

    values: dict[Simplex, float] = field(default_factory=dict)

    def __call__(self, s: Simplex) -> float:
        return self.values.get(s, 0.0)

    def support(self) -> list[Simplex]:
        return sorted(s for s, v in self.values.items() if v != 0.0)

    def restrict(self, k: int) -> "GradedFunction":
        return GradedFunction({s: v for s, v in self.values.items() if s.dim == k})

    def __add__(self, other: "GradedFunction") -> "GradedFunction":
        out = dict(self.values)
        for s, v in other.values.items():
            out[s] = out.get(s, 0.0) + v
        return GradedFunction(out)

    def __rmul__(self, a: float) -> "GradedFunction":
        return GradedFunction({s: a * v for s, v in self.values.items()})

    def __sub__(self, other: "GradedFunction") -> "GradedFunction":
        return self + (-1.0) * other


def indicator(s: Simplex) -> GradedFunction:
    return GradedFunction({s: 1.0})


def inner(weights: WeightAssignment, f: GradedFunction, g: GradedFunction) -> float:
    """m-weighted inner product over the common support."""
    keys = set(f.values) & set(g.values)
    return sum(weights(s) * f.values[s] * g.values[s] for s in keys)


def norm(weights: WeightAssignment, f: GradedFunction) -> float:
    return math.sqrt(max(inner(weights, f, f), 0.0))


@dataclass(frozen=True)
class SummabilityRecord:
    """Coface-weight sums at one simplex; evidence only, never a convergence proof."""

    coface_sum: float
    coface_count: int
    strong_sum: float
    strong_count: int
    last_increment: float
    truncated: bool


def check_local_summability(complex_: SimplicialComplex, weights: WeightAssignment,
                            budget: int | None = None,
                            ) -> dict[Simplex, SummabilityRecord]:
    """Per-simplex coface-weight sums and the two-step (strong) variant.

    On a finite complex the sums are exact.  ``budget`` caps the number of
    coface terms accumulated per simplex so that profiles of generated
    families stay cheap; a capped record is flagged ``truncated``.
    """
    out: dict[Simplex, SummabilityRecord] = {}
    for tau in complex_.simplices():
        cf = complex_.cofaces(tau)
        truncated = budget is not None and len(cf) > budget
        use = cf[:budget] if truncated else cf
        total = 0.0
        last = 0.0
        for s in use:
            last = weights(s)
            total += last
        strong = 0.0
        n_strong = 0
        for mid in use:
            for s in complex_.cofaces(mid):
                strong += weights(s)
                n_strong += 1
        out[tau] = SummabilityRecord(coface_sum=total, coface_count=len(use),
                                     strong_sum=strong, strong_count=n_strong,
                                     last_increment=last, truncated=truncated)
    return out


@dataclass(frozen=True)
class BalanceReport:
    sup_ratio: float
    witness: tuple[Simplex, Simplex] | None


def is_balanced(complex_: SimplicialComplex, weights: WeightAssignment) -> BalanceReport:
    """sup over face/coface pairs of m(coface)/m(face); 0.0 when no pair exists."""
    best = 0.0
    witness = None
    for tau in complex_.simplices():
        for sigma in complex_.cofaces(tau):
            r = weights(sigma) / weights(tau)
            if r > best:
                best = r
                witness = (tau, sigma)
    return BalanceReport(sup_ratio=best, witness=witness)
