"""Bridge between functions on simplices and alternating forms on oriented
simplices: a parity-tracking sign, the unitary identification, and the
classical alternating-sum coboundary recovered through it."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import GradedFunction, Simplex, SimplicialComplex, WeightAssignment
from .operators import OrientationAssignment, apply_coboundary


def permutation_parity(sequence: tuple[int, ...]) -> int:
    """0 for an even permutation relative to ascending order, 1 for odd."""
    inv = 0
    for i in range(len(sequence)):
        for j in range(i + 1, len(sequence)):
            if sequence[i] > sequence[j]:
                inv += 1
    return inv % 2


@dataclass(frozen=True)
class OrientedSimplex:
    """An ordering of distinct vertex ids; equal iff same parity class."""

    sequence: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.sequence)) != len(self.sequence):
            raise ValueError(f"oriented simplex needs distinct vertices: {self.sequence}")

    @property
    def underlying(self) -> Simplex:
        return Simplex(tuple(sorted(self.sequence)))

    @property
    def parity(self) -> int:
        return permutation_parity(self.sequence)

    def reversed_class(self) -> "OrientedSimplex":
        if len(self.sequence) < 2:
            return self
        s = self.sequence
        return OrientedSimplex((s[1], s[0]) + s[2:])

    def __eq__(self, other) -> bool:
        return (isinstance(other, OrientedSimplex)
                and self.underlying == other.underlying
                and self.parity == other.parity)

    def __hash__(self) -> int:
        return hash((self.underlying, self.parity))


def oriented_sign(orient: OrientationAssignment, sequence: tuple[int, ...]) -> int:
    """Product of incidence signs along the prefix chain of the ordering.

    Alternating in the ordering, hence constant on parity classes; +1 on
    vertices and the empty simplex (empty product).
    """
    sign = 1
    prev = Simplex(())
    for i in range(1, len(sequence) + 1):
        cur = Simplex(tuple(sorted(sequence[:i])))
        if i >= 2:
            sign *= orient.sign(prev, cur)
        prev = cur
    return sign


@dataclass(eq=False)
class AlternatingForm:
    """Alternating form stored through its value on the ascending representative."""

    values: dict[Simplex, float] = field(default_factory=dict)

    def evaluate(self, oriented: OrientedSimplex) -> float:
        base = self.values.get(oriented.underlying, 0.0)
        return base if oriented.parity == 0 else -base


def to_function(orient: OrientationAssignment, form: AlternatingForm) -> GradedFunction:
    """Unitary map to plain functions: multiply by the chain sign of the
    ascending representative."""
    return GradedFunction({tau: oriented_sign(orient, tau.vertices) * v
                           for tau, v in form.values.items()})


def from_function(orient: OrientationAssignment, f: GradedFunction) -> AlternatingForm:
    """Inverse of ``to_function`` (the chain sign squares to one)."""
    return AlternatingForm({tau: oriented_sign(orient, tau.vertices) * v
                            for tau, v in f.values.items()})


def classical_coboundary(form: AlternatingForm, sequence: tuple[int, ...]) -> float:
    """Alternating vertex-omission sum of the form at the given ordering."""
    total = 0.0
    for j in range(len(sequence)):
        sub = OrientedSimplex(sequence[:j] + sequence[j + 1:])
        total += (-1.0) ** j * form.evaluate(sub)
    return total


def conjugated_coboundary(complex_: SimplicialComplex, orient: OrientationAssignment,
                          form: AlternatingForm, sequence: tuple[int, ...]) -> float:
    """(-1)^k times the function-side coboundary pulled back through the bridge."""
    f = to_function(orient, form)
    df = apply_coboundary(complex_, orient, f)
    oriented = OrientedSimplex(sequence)
    k = oriented.underlying.dim
    h = oriented_sign(orient, sequence)
    return (-1.0) ** k * h * df(oriented.underlying)


def bridge_residual(complex_: SimplicialComplex, orient: OrientationAssignment,
                    form: AlternatingForm, sequence: tuple[int, ...]) -> float:
    """|classical alternating sum - conjugated coboundary| at one ordering."""
    return abs(classical_coboundary(form, sequence)
               - conjugated_coboundary(complex_, orient, form, sequence))


def oriented_norm_squared(complex_: SimplicialComplex, weights: WeightAssignment,
                          form: AlternatingForm) -> float:
    """Squared norm over oriented simplices with half weight per class.

    Simplices of dimension >= 1 contribute both parity classes at half the
    simplex weight each; vertices and the empty simplex have a single class
    at full weight.
    """
    total = 0.0
    for tau in complex_.simplices():
        v = form.values.get(tau, 0.0)
        if tau.dim >= 1:
            total += 2.0 * (weights(tau) / 2.0) * v * v
        else:
            total += weights(tau) * v * v
    return total
