"""Signed graph-operator representation of the Laplacians.

Every Laplacian flavor can be written as a signed Schrodinger operator on
the simplex set: a symmetric nonnegative coupling between equal-dimension
simplices, a sign in {-1, +1} on each coupled pair, and a potential on the
diagonal.  The coupling/sign pair is read off the cross terms of the energy
form on indicators, which makes the representation match the composed
operators exactly; the potential is the indicator energy minus the coupling
row sum.  The full-Laplacian potential divided by the weight is the Forman
curvature.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass

import numpy as np

from .core import (GradedFunction, Simplex, SimplicialComplex, WeightAssignment,
                   inner, norm)
from .operators import (OrientationAssignment, apply_boundary, apply_coboundary,
                        random_graded_function)

# Relative tolerance under which an exactly cancelling hodge coupling is dropped.
CANCEL_RTOL = 1e-14

PairKey = tuple[Simplex, Simplex]


def _pair(a: Simplex, b: Simplex) -> PairKey:
    return (a, b) if a.sort_key() <= b.sort_key() else (b, a)


@dataclass(eq=False)
class SchrodingerData:
    """Coupling b, sign o, potential c and indicator energy for one flavor.

    ``coupling``/``sign`` are keyed by unordered simplex pairs (stored once,
    in canonical order).  ``degree`` holds the energy of each indicator
    function; ``potential`` equals degree minus the coupling row sum, so the
    identity degree - potential = row sum >= 0 holds by construction.
    """

    flavor: str
    complex: SimplicialComplex
    coupling: dict[PairKey, float]
    sign: dict[PairKey, int]
    potential: dict[Simplex, float]
    degree: dict[Simplex, float]
    neighbors: dict[Simplex, tuple[Simplex, ...]]

    def row(self, tau: Simplex):
        """(tau', coupling, sign) triples over the coupled neighbors of tau."""
        for other in self.neighbors.get(tau, ()):
            key = _pair(tau, other)
            yield other, self.coupling[key], self.sign[key]

    def row_sum(self, tau: Simplex) -> float:
        return sum(self.coupling[_pair(tau, o)] for o in self.neighbors.get(tau, ()))


def _cross_terms_up(complex_: SimplicialComplex, weights: WeightAssignment,
                    orientation: OrientationAssignment) -> dict[PairKey, float]:
    q: dict[PairKey, float] = {}
    for sigma in complex_.simplices():
        faces = complex_.faces(sigma)
        m = weights(sigma)
        for i in range(len(faces)):
            si = orientation.sign(faces[i], sigma)
            for j in range(i + 1, len(faces)):
                sj = orientation.sign(faces[j], sigma)
                key = _pair(faces[i], faces[j])
                q[key] = q.get(key, 0.0) + m * si * sj
    return q


def _cross_terms_down(complex_: SimplicialComplex, weights: WeightAssignment,
                      orientation: OrientationAssignment) -> dict[PairKey, float]:
    q: dict[PairKey, float] = {}
    for rho in complex_.simplices():
        cof = complex_.cofaces(rho)
        inv_m = 1.0 / weights(rho)
        for i in range(len(cof)):
            si = orientation.sign(rho, cof[i]) * weights(cof[i])
            for j in range(i + 1, len(cof)):
                sj = orientation.sign(rho, cof[j]) * weights(cof[j])
                key = _pair(cof[i], cof[j])
                q[key] = q.get(key, 0.0) + si * sj * inv_m
    return q


def _degree(complex_: SimplicialComplex, weights: WeightAssignment,
            flavor: str) -> dict[Simplex, float]:
    out: dict[Simplex, float] = {}
    for tau in complex_.simplices():
        up = sum(weights(s) for s in complex_.cofaces(tau))
        down = sum(weights(tau) ** 2 / weights(r) for r in complex_.faces(tau))
        out[tau] = {"up": up, "down": down, "hodge": up + down}[flavor]
    return out


@functools.lru_cache(maxsize=64)
def _schrodinger_cached(complex_: SimplicialComplex, weights: WeightAssignment,
                        orientation: OrientationAssignment, flavor: str) -> SchrodingerData:
    if flavor == "up":
        q = _cross_terms_up(complex_, weights, orientation)
    elif flavor == "down":
        q = _cross_terms_down(complex_, weights, orientation)
    elif flavor == "hodge":
        q = _cross_terms_up(complex_, weights, orientation)
        q_down = _cross_terms_down(complex_, weights, orientation)
        for key, v in q_down.items():
            if key in q:
                merged = q[key] + v
                if abs(merged) <= CANCEL_RTOL * max(abs(q[key]), abs(v)):
                    del q[key]
                else:
                    q[key] = merged
            else:
                q[key] = v
    else:
        raise ValueError(f"unknown flavor {flavor!r}")

    coupling = {k: abs(v) for k, v in q.items() if v != 0.0}
    sign = {k: (-1 if q[k] > 0 else 1) for k in coupling}
    neighbors_map: dict[Simplex, list[Simplex]] = {}
    for a, b in coupling:
        neighbors_map.setdefault(a, []).append(b)
        neighbors_map.setdefault(b, []).append(a)
    neighbors = {s: tuple(sorted(v)) for s, v in neighbors_map.items()}
    degree = _degree(complex_, weights, flavor)
    potential = {}
    for tau in complex_.simplices():
        row = sum(coupling[_pair(tau, o)] for o in neighbors.get(tau, ()))
        potential[tau] = degree[tau] - row
    return SchrodingerData(flavor=flavor, complex=complex_, coupling=coupling,
                           sign=sign, potential=potential, degree=degree,
                           neighbors=neighbors)


def schrodinger_data(complex_: SimplicialComplex, weights: WeightAssignment,
                     orientation: OrientationAssignment, flavor: str) -> SchrodingerData:
    """Signed-operator data for one flavor; cached per (complex, weights,
    orientation) instance and invalidated only by rebuilding those."""
    return _schrodinger_cached(complex_, weights, orientation, flavor)


def closed_form_coupling(complex_: SimplicialComplex, weights: WeightAssignment,
                         tau: Simplex, other: Simplex, flavor: str) -> float:
    """Coupling magnitudes from the union/intersection closed forms.

    up: weight of the common coface; down: product of weights over the weight
    of the common face; hodge: absolute difference of the two.  Used as an
    independent cross-check of the cross-term assembly.
    """
    up = 0.0
    union = set(tau.vertices) | set(other.vertices)
    if len(union) == len(tau.vertices) + 1 and tau != other:
        u = Simplex(tuple(sorted(union)))
        if u in complex_:
            up = weights(u)
    down = 0.0
    if tau.dim == other.dim and tau != other:
        cap = tau.intersection(other)
        if cap.dim == tau.dim - 1 and cap in complex_:
            down = weights(tau) * weights(other) / weights(cap)
    return {"up": up, "down": down, "hodge": abs(down - up)}[flavor]


def apply_schrodinger(data: SchrodingerData, weights: WeightAssignment,
                      omega: GradedFunction) -> GradedFunction:
    """Pointwise action: coupling differences plus the potential term."""
    out: dict[Simplex, float] = {}
    for tau in data.complex.simplices():
        val = data.potential[tau] * omega(tau)
        for other, b, o in data.row(tau):
            val += b * (omega(tau) - o * omega(other))
        v = val / weights(tau)
        if v != 0.0:
            out[tau] = v
    return GradedFunction(out)


def operator_matrix(data: SchrodingerData, weights: WeightAssignment,
                    keys: tuple[Simplex, ...] | None = None) -> np.ndarray:
    """Dense matrix of the signed operator over the given key order."""
    if keys is None:
        keys = tuple(data.complex.simplices())
    pos = {s: i for i, s in enumerate(keys)}
    a = np.zeros((len(keys), len(keys)))
    for i, tau in enumerate(keys):
        a[i, i] = data.degree[tau] / weights(tau)
        for other, b, o in data.row(tau):
            j = pos.get(other)
            if j is not None:
                a[i, j] = -b * o / weights(tau)
    return a


def quadratic_form_via_boc(data: SchrodingerData, weights: WeightAssignment,
                           omega: GradedFunction) -> float:
    """Energy from the coupling/sign/potential data alone."""
    total = 0.0
    for (a, b), coup in data.coupling.items():
        o = data.sign[(a, b)]
        total += coup * (omega(a) - o * omega(b)) ** 2
    for tau, c in data.potential.items():
        v = omega(tau)
        if v != 0.0:
            total += c * v * v
    return total


def direct_energy(complex_: SimplicialComplex, weights: WeightAssignment,
                  orientation: OrientationAssignment, omega: GradedFunction,
                  flavor: str) -> float:
    """Energy computed through the raising/lowering operators themselves."""
    if flavor == "up":
        img = apply_coboundary(complex_, orientation, omega)
    elif flavor == "down":
        img = apply_boundary(complex_, weights, orientation, omega)
    elif flavor == "hodge":
        img = apply_coboundary(complex_, orientation, omega) \
            + apply_boundary(complex_, weights, orientation, omega)
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return inner(weights, img, img)


def forman_curvature(complex_: SimplicialComplex, weights: WeightAssignment,
                     orientation: OrientationAssignment) -> dict[Simplex, float]:
    """Potential of the full-Laplacian representation over the weight."""
    data = schrodinger_data(complex_, weights, orientation, "hodge")
    return {tau: data.potential[tau] / weights(tau) for tau in complex_.simplices()}


def forman_curvature_combinatorial(complex_: SimplicialComplex) -> dict[Simplex, float]:
    """Closed combinatorial form of the curvature for unit weights:
    2(k+1) + (k+2)#cofaces - sum over faces of their coface counts.

    The count form treats the empty simplex as the shared face of every
    vertex pair, so it reproduces the general formula at dimension 0 only
    on complexes that include the empty simplex.
    """
    out: dict[Simplex, float] = {}
    for tau in complex_.simplices():
        k = tau.dim
        ncof = len(complex_.cofaces(tau))
        spill = sum(len(complex_.cofaces(rho)) for rho in complex_.faces(tau))
        out[tau] = 2.0 * (k + 1) + (k + 2.0) * ncof - spill
    return out


def row_l2_norm(data: SchrodingerData, weights: WeightAssignment,
                tau: Simplex) -> float:
    """Squared weighted norm of the coupling row scaled by the weights,
    sum of coupling(tau, .)^2 / m(.); finiteness for every tau is the
    compactly-supported-domain criterion."""
    return sum(b * b / weights(other) for other, b, _ in data.row(tau))


def green_symmetry_residual(data: SchrodingerData, weights: WeightAssignment,
                            trials: int = 10, seed: int = 0) -> float:
    """Max |<H omega, eta> - <omega, H eta>| over random pairs."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        omega = random_graded_function(data.complex, rng)
        eta = random_graded_function(data.complex, rng)
        h_omega = apply_schrodinger(data, weights, omega)
        h_eta = apply_schrodinger(data, weights, eta)
        worst = max(worst, abs(inner(weights, h_omega, eta) - inner(weights, omega, h_eta)))
    return worst
