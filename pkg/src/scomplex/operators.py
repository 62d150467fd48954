"""Orientation signs, coboundary/boundary matrices, and exact-identity checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .core import (EMPTY, GradedFunction, Simplex, SimplicialComplex,
                   WeightAssignment, inner)


@dataclass(eq=False)
class OrientationAssignment:
    """Incidence sign between a face and a coface.

    ``lexicographic`` mode: for sigma = {v_1 < ... < v_{k+1}} and
    tau = sigma minus its j-th vertex the sign is (-1)**(j+1).
    ``explicit`` mode reads the sign from a stored (face, coface) table and
    rejects missing pairs.  ``validate`` checks the two-path cancellation
    that makes the squared coboundary vanish.
    """

    mode: str = "lexicographic"
    explicit_signs: dict[tuple[Simplex, Simplex], int] = field(default_factory=dict)

    def sign(self, tau: Simplex, sigma: Simplex) -> int:
        """The sign of the pair, 0 unless tau is a codim-1 face of sigma."""
        if sigma.dim != tau.dim + 1 or not sigma.contains(tau):
            return 0
        if self.mode == "lexicographic":
            missing = (set(sigma.vertices) - set(tau.vertices)).pop()
            j = sigma.vertices.index(missing) + 1
            return -1 if j % 2 == 0 else 1
        if self.mode == "explicit":
            try:
                return self.explicit_signs[(tau, sigma)]
            except KeyError:
                raise KeyError(f"no explicit sign stored for pair ({tau}, {sigma})")
        raise ValueError(f"unknown orientation mode: {self.mode!r}")

    def validate(self, complex_: SimplicialComplex) -> None:
        """Check theta(rho,tau)theta(tau,sigma) + theta(rho,tau')theta(tau',sigma) = 0."""
        for sigma in complex_.simplices():
            for rho_set in _codim2_faces(complex_, sigma):
                total = 0
                for tau in complex_.faces(sigma):
                    if tau.contains(rho_set):
                        total += self.sign(rho_set, tau) * self.sign(tau, sigma)
                if total != 0:
                    raise ValueError(
                        f"orientation breaks two-path cancellation at ({rho_set}, {sigma})")


def _codim2_faces(complex_: SimplicialComplex, sigma: Simplex) -> set[Simplex]:
    out: set[Simplex] = set()
    for tau in complex_.faces(sigma):
        out.update(complex_.faces(tau))
    return out


def theta(orient: OrientationAssignment, tau: Simplex, sigma: Simplex) -> int:
    return orient.sign(tau, sigma)


@dataclass(eq=False)
class LevelOperator:
    """Sparse real matrix indexed by simplices.

    Rows/cols are canonical simplex lists; entries live in a dict keyed by
    (row position, col position).  Structural gradings are ints, or the
    string "mixed" for operators crossing levels.
    """

    rows: tuple[Simplex, ...]
    cols: tuple[Simplex, ...]
    entries: dict[tuple[int, int], float]
    source_dim: int | str
    target_dim: int | str
    convention: str = "formal"

    def to_dense(self) -> np.ndarray:
        a = np.zeros((len(self.rows), len(self.cols)))
        for (i, j), v in self.entries.items():
            a[i, j] = v
        return a

    def apply(self, omega: GradedFunction) -> GradedFunction:
        col_pos = {s: j for j, s in enumerate(self.cols)}
        out: dict[Simplex, float] = {}
        x = {col_pos[s]: v for s, v in omega.values.items() if s in col_pos}
        for (i, j), a in self.entries.items():
            if j in x and a != 0.0:
                r = self.rows[i]
                out[r] = out.get(r, 0.0) + a * x[j]
        return GradedFunction(out)

    def triplets(self):
        for (i, j), v in sorted(self.entries.items()):
            yield self.rows[i], self.cols[j], v

    def frobenius(self) -> float:
        return float(np.sqrt(sum(v * v for v in self.entries.values())))


def _operator_from_dense(a: np.ndarray, rows, cols, source_dim, target_dim,
                         convention="formal") -> LevelOperator:
    entries = {(i, j): float(a[i, j])
               for i in range(a.shape[0]) for j in range(a.shape[1]) if a[i, j] != 0.0}
    return LevelOperator(rows=tuple(rows), cols=tuple(cols), entries=entries,
                         source_dim=source_dim, target_dim=target_dim,
                         convention=convention)


def coboundary_matrix(complex_: SimplicialComplex, weights: WeightAssignment,
                      orient: OrientationAssignment, k: int) -> LevelOperator:
    """Signed incidence matrix from level k to level k+1 (weight independent)."""
    cols = complex_.level(k)
    rows = complex_.level(k + 1)
    col_pos = {s: j for j, s in enumerate(cols)}
    entries: dict[tuple[int, int], float] = {}
    for i, sigma in enumerate(rows):
        for tau in complex_.faces(sigma):
            entries[(i, col_pos[tau])] = float(orient.sign(tau, sigma))
    return LevelOperator(rows=rows, cols=cols, entries=entries,
                         source_dim=k, target_dim=k + 1)


def boundary_matrix(complex_: SimplicialComplex, weights: WeightAssignment,
                    orient: OrientationAssignment, k: int) -> LevelOperator:
    """Weighted transpose of the coboundary: entry (rho, tau) = m(tau) theta(rho, tau) / m(rho).

    Maps level k+1 to level k.  With the empty simplex absent the map from
    vertex functions is the (0 x n) zero operator.
    """
    cols = complex_.level(k + 1)
    rows = complex_.level(k)
    row_pos = {s: i for i, s in enumerate(rows)}
    entries: dict[tuple[int, int], float] = {}
    for j, tau in enumerate(cols):
        for rho in complex_.faces(tau):
            entries[(row_pos[rho], j)] = weights(tau) * orient.sign(rho, tau) / weights(rho)
    return LevelOperator(rows=rows, cols=cols, entries=entries,
                         source_dim=k + 1, target_dim=k)


def apply_operator(op: LevelOperator, omega: GradedFunction) -> GradedFunction:
    return op.apply(omega)


def apply_coboundary(complex_: SimplicialComplex, orient: OrientationAssignment,
                     omega: GradedFunction) -> GradedFunction:
    """Coboundary of a mixed-grading function."""
    out: dict[Simplex, float] = {}
    for tau, v in omega.values.items():
        if v == 0.0:
            continue
        for sigma in complex_.cofaces(tau):
            out[sigma] = out.get(sigma, 0.0) + v * orient.sign(tau, sigma)
    return GradedFunction({k: v for k, v in out.items() if v != 0.0})


def apply_boundary(complex_: SimplicialComplex, weights: WeightAssignment,
                   orient: OrientationAssignment, omega: GradedFunction) -> GradedFunction:
    """Boundary of a mixed-grading function (values on faces present in the complex)."""
    out: dict[Simplex, float] = {}
    for tau, v in omega.values.items():
        if v == 0.0:
            continue
        for rho in complex_.faces(tau):
            out[rho] = out.get(rho, 0.0) + weights(tau) * v * orient.sign(rho, tau) / weights(rho)
    return GradedFunction({k: v for k, v in out.items() if v != 0.0})


def random_graded_function(complex_: SimplicialComplex, rng: random.Random,
                           density: float = 0.5) -> GradedFunction:
    values = {s: rng.uniform(-1.0, 1.0)
              for s in complex_.simplices() if rng.random() < density}
    return GradedFunction(values)


def verify_stokes(complex_: SimplicialComplex, weights: WeightAssignment,
                  orient: OrientationAssignment, trials: int = 20,
                  seed: int = 0) -> dict[str, float]:
    """Max residuals of the adjointness identity and both Green variants over
    random pairs, each scaled by its operand magnitude.

    Checks <d omega, eta>_m = <omega, delta eta>_m together with
    <delta d omega, eta>_m = <d omega, d eta>_m and
    <d delta omega, eta>_m = <delta omega, delta eta>_m, where delta raises
    and d lowers the grading.  All three are exact on finite complexes.
    """
    rng = random.Random(seed)

    def rel_gap(lhs: float, rhs: float) -> float:
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)

    res_stokes = 0.0
    res_green_a = 0.0
    res_green_b = 0.0
    for _ in range(trials):
        omega = random_graded_function(complex_, rng)
        eta = random_graded_function(complex_, rng)
        d_omega = apply_boundary(complex_, weights, orient, omega)
        cb_eta = apply_coboundary(complex_, orient, eta)
        res_stokes = max(res_stokes, rel_gap(inner(weights, d_omega, eta),
                                             inner(weights, omega, cb_eta)))
        # Green (a): energy form of the down operator.
        cb_d_omega = apply_coboundary(complex_, orient, d_omega)
        d_eta = apply_boundary(complex_, weights, orient, eta)
        res_green_a = max(res_green_a, rel_gap(inner(weights, cb_d_omega, eta),
                                               inner(weights, d_omega, d_eta)))
        # Green (b): energy form of the up operator.
        cb_omega = apply_coboundary(complex_, orient, omega)
        d_cb_omega = apply_boundary(complex_, weights, orient, cb_omega)
        res_green_b = max(res_green_b, rel_gap(inner(weights, d_cb_omega, eta),
                                               inner(weights, cb_omega, cb_eta)))
    return {"stokes": res_stokes, "green_down": res_green_a, "green_up": res_green_b}


def verify_dd_zero(complex_: SimplicialComplex, weights: WeightAssignment,
                   orient: OrientationAssignment) -> dict[str, float]:
    """Frobenius norms of the squared coboundary and squared boundary across all levels."""
    dd = 0.0
    pp = 0.0
    kmin = -1 if complex_.includes_empty else 0
    for k in range(kmin, complex_.dim + 1):
        d_k = coboundary_matrix(complex_, weights, orient, k).to_dense()
        d_k1 = coboundary_matrix(complex_, weights, orient, k + 1).to_dense()
        if d_k.size and d_k1.size:
            dd = max(dd, float(np.linalg.norm(d_k1 @ d_k)))
        b_k = boundary_matrix(complex_, weights, orient, k).to_dense()
        b_km1 = boundary_matrix(complex_, weights, orient, k - 1).to_dense()
        if b_k.size and b_km1.size:
            pp = max(pp, float(np.linalg.norm(b_km1 @ b_k)))
    return {"dd_residual": dd, "pp_residual": pp}


def weight_diagonal(complex_: SimplicialComplex, weights: WeightAssignment,
                    k: int) -> np.ndarray:
    return np.array([weights(s) for s in complex_.level(k)])
