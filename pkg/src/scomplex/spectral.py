"""Eigensolving, spectrum comparison mod zero, Hodge decomposition, Betti
numbers, and the spectral-identity verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (GradedFunction, Simplex, SimplicialComplex, WeightAssignment)
from .operators import OrientationAssignment, boundary_matrix, coboundary_matrix
from .laplacian import (LaplacianSpec, Truncation, assemble, hodge_laplacian,
                        symmetrize_to_euclidean, up_laplacian, down_laplacian)
from .schrodinger import schrodinger_data

DEFAULT_ZERO_REL = 1e-8
DEFAULT_MATCH_ABS = 1e-9
DEFAULT_MATCH_REL = 1e-9


@dataclass(eq=False)
class Spectrum:
    """Ascending eigenvalues with multiplicity plus the kernel threshold used."""

    eigenvalues: np.ndarray
    source: str = ""
    zero_threshold: float = 0.0
    vectors: np.ndarray | None = field(default=None, repr=False)

    def nonzero(self) -> np.ndarray:
        return self.eigenvalues[self.eigenvalues > self.zero_threshold]

    def zero_dim(self) -> int:
        return int(np.sum(self.eigenvalues <= self.zero_threshold))

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1]) if self.eigenvalues.size else 0.0

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0]) if self.eigenvalues.size else 0.0


def _zero_threshold(values: np.ndarray, zero_eps: float | None) -> float:
    if zero_eps is not None:
        return zero_eps
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    return DEFAULT_ZERO_REL * max(scale, 1.0)


def eigen(matrix: np.ndarray, tol: float = 1e-9,
          zero_eps: float | None = None, source: str = "") -> Spectrum:
    """Full symmetric eigendecomposition with a residual contract.

    Rejects inputs that are asymmetric beyond 1e-10 relative; every returned
    pair satisfies ||A v - lambda v|| <= tol ||A||.
    """
    a = np.asarray(matrix, dtype=float)
    if a.size == 0:
        return Spectrum(np.zeros(0), source=source, zero_threshold=0.0,
                        vectors=np.zeros((0, 0)))
    scale = max(float(np.linalg.norm(a)), 1e-300)
    if float(np.linalg.norm(a - a.T)) > 1e-10 * max(scale, 1.0):
        raise ValueError("eigen needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    vals, vecs = np.linalg.eigh(a)
    worst = float(np.max(np.linalg.norm(a @ vecs - vecs * vals, axis=0)))
    if worst > tol * max(scale, 1.0):
        raise ArithmeticError(f"eigensolver residual {worst:.3e} exceeds contract")
    return Spectrum(vals, source=source, zero_threshold=_zero_threshold(vals, zero_eps),
                    vectors=vecs)


def level_spectrum(complex_or_trunc, spec: LaplacianSpec,
                   weights: WeightAssignment | None = None,
                   orientation: OrientationAssignment | None = None,
                   zero_eps: float | None = None) -> Spectrum:
    """Spectrum of an assembled Laplacian, via similarity to a symmetric matrix."""
    op = assemble(complex_or_trunc, spec, weights, orientation)
    if isinstance(complex_or_trunc, Truncation):
        w = complex_or_trunc.weights
    else:
        w = weights
    sym = symmetrize_to_euclidean(op, w)
    label = f"{spec.flavor}[k={spec.dim},bc={spec.bc}]"
    return eigen(sym, zero_eps=zero_eps, source=label)


@dataclass(frozen=True)
class MatchReport:
    matched: bool
    max_pair_gap: float
    n_left: int
    n_right: int


def compare_mod_zero(s1: Spectrum, s2: Spectrum,
                     zero_eps: float | None = None,
                     match_eps: float | None = None) -> MatchReport:
    """Greedy ascending pairing of the two spectra with kernels dropped."""
    z1 = s1.zero_threshold if zero_eps is None else zero_eps
    z2 = s2.zero_threshold if zero_eps is None else zero_eps
    z = max(z1, z2)
    a = s1.eigenvalues[s1.eigenvalues > z]
    b = s2.eigenvalues[s2.eigenvalues > z]
    if len(a) != len(b):
        return MatchReport(False, float("inf"), len(a), len(b))
    if len(a) == 0:
        return MatchReport(True, 0.0, 0, 0)
    gaps = np.abs(a - b)
    if match_eps is not None:
        limit = match_eps * np.ones_like(a)
    else:
        limit = DEFAULT_MATCH_ABS + DEFAULT_MATCH_REL * np.maximum(np.abs(a), np.abs(b))
    return MatchReport(bool(np.all(gaps <= limit)), float(np.max(gaps)), len(a), len(b))


def _weighted_basis(complex_, weights, keys, matrix_cols_keys, dense):
    """sqrt(M)-scaled column space of a level operator, as a dense matrix."""
    m = np.sqrt(np.array([weights(s) for s in keys]))
    return dense * m[:, None] if dense.size else dense


@dataclass(eq=False)
class HodgeSplit:
    """Harmonic / image-of-raising / image-of-lowering parts of a level function."""

    harmonic: GradedFunction
    exact: GradedFunction
    coexact: GradedFunction
    residual: float
    max_cross_inner: float


def hodge_decompose(complex_: SimplicialComplex, weights: WeightAssignment,
                    orientation: OrientationAssignment, omega: GradedFunction,
                    k: int, zero_eps: float | None = None) -> HodgeSplit:
    """Orthogonal split of a level-k function in the weighted inner product.

    The exact part is the projection onto the column space of the coboundary
    from below, the coexact part onto the column space of the boundary from
    above, and the harmonic part onto the numerical kernel of the full
    Laplacian; on a finite complex the three reassemble the input.
    """
    keys = complex_.level(k)
    if not keys:
        raise ValueError(f"no simplices at level {k}")
    m_root = np.sqrt(np.array([weights(s) for s in keys]))
    x = np.array([omega(s) for s in keys]) * m_root

    d_below = coboundary_matrix(complex_, weights, orientation, k - 1).to_dense()
    b_above = boundary_matrix(complex_, weights, orientation, k).to_dense()
    basis_exact = d_below * m_root[:, None] if d_below.size else np.zeros((len(keys), 0))
    basis_coexact = b_above * m_root[:, None] if b_above.size else np.zeros((len(keys), 0))

    sym = symmetrize_to_euclidean(hodge_laplacian(complex_, weights, orientation, k),
                                  weights)
    spec = eigen(sym, zero_eps=zero_eps, source=f"hodge[k={k}]")
    kernel = spec.vectors[:, spec.eigenvalues <= spec.zero_threshold]

    def project(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
        if basis.size == 0:
            return np.zeros_like(v)
        coef, *_ = np.linalg.lstsq(basis, v, rcond=None)
        return basis @ coef

    e = project(basis_exact, x)
    c = project(basis_coexact, x)
    h = kernel @ (kernel.T @ x)

    def back(v: np.ndarray) -> GradedFunction:
        return GradedFunction({s: float(v[i] / m_root[i]) for i, s in enumerate(keys)
                               if v[i] != 0.0})

    norm_x = float(np.linalg.norm(x))
    residual = float(np.linalg.norm(x - (e + c + h))) / max(norm_x, 1e-300)
    pairs = [(e, c), (e, h), (c, h)]
    cross = 0.0
    for u, v in pairs:
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if nu > 0 and nv > 0:
            cross = max(cross, abs(float(u @ v)) / (nu * nv))
    return HodgeSplit(harmonic=back(h), exact=back(e), coexact=back(c),
                      residual=residual, max_cross_inner=cross)


def betti(complex_: SimplicialComplex, weights: WeightAssignment,
          orientation: OrientationAssignment, k: int,
          mode: str = "kernel_dim", zero_eps: float | None = None) -> int:
    """Dimension of the level-k harmonic space.

    Computed both as the numerical kernel dimension of the full Laplacian
    and as dim ker(coboundary_k) - rank(coboundary_{k-1}); a mismatch means
    the kernel threshold is misconfigured and raises.
    """
    if mode not in ("kernel_dim", "rank_quotient"):
        raise ValueError(f"unknown mode {mode!r}")
    sym = symmetrize_to_euclidean(hodge_laplacian(complex_, weights, orientation, k),
                                  weights)
    spec = eigen(sym, zero_eps=zero_eps, source=f"hodge[k={k}]")
    kernel_dim = spec.zero_dim()

    d_k = coboundary_matrix(complex_, weights, orientation, k).to_dense()
    d_below = coboundary_matrix(complex_, weights, orientation, k - 1).to_dense()
    n_k = len(complex_.level(k))
    rank_k = int(np.linalg.matrix_rank(d_k)) if d_k.size else 0
    rank_below = int(np.linalg.matrix_rank(d_below)) if d_below.size else 0
    rank_quotient = n_k - rank_k - rank_below
    if kernel_dim != rank_quotient:
        raise ArithmeticError(
            f"harmonic dimension mismatch at k={k}: kernel {kernel_dim} vs "
            f"rank quotient {rank_quotient}; adjust the zero threshold")
    return kernel_dim if mode == "kernel_dim" else rank_quotient


@dataclass(frozen=True)
class IdentityReport:
    k: int
    up_vs_down_above: MatchReport
    hodge_vs_union: MatchReport
    zero_propagates: bool
    note: str = ""

    @property
    def passed(self) -> bool:
        return (self.up_vs_down_above.matched and self.hodge_vs_union.matched
                and self.zero_propagates)


def _union_spectrum(a: Spectrum, b: Spectrum) -> Spectrum:
    vals = np.sort(np.concatenate([a.nonzero(), b.nonzero()]))
    return Spectrum(vals, source="union", zero_threshold=max(a.zero_threshold,
                                                             b.zero_threshold))


def verify_spectrum_identities(complex_: SimplicialComplex, weights: WeightAssignment,
                               orientation: OrientationAssignment,
                               ks: list[int] | None = None,
                               zero_eps: float | None = None,
                               match_eps: float | None = None) -> list[IdentityReport]:
    """Per-level spectral identities on a finite complex.

    (i) nonzero spectrum of the up Laplacian at k equals that of the down
    Laplacian at k+1; (ii) the nonzero full-Laplacian spectrum at k is the
    multiset union of the up and down nonzero spectra at k; (iii) a kernel
    of the full Laplacian forces kernels of both parts.
    """
    if ks is None:
        kmin = -1 if complex_.includes_empty else 0
        ks = list(range(kmin, complex_.dim + 1))
    out = []
    for k in ks:
        def spec_of(flavor, kk):
            keys = complex_.level(kk)
            if not keys:
                return Spectrum(np.zeros(0))
            fn = {"up": up_laplacian, "down": down_laplacian,
                  "hodge": hodge_laplacian}[flavor]
            sym = symmetrize_to_euclidean(fn(complex_, weights, orientation, kk), weights)
            return eigen(sym, zero_eps=zero_eps, source=f"{flavor}[{kk}]")

        s_up = spec_of("up", k)
        s_down_above = spec_of("down", k + 1)
        s_down = spec_of("down", k)
        s_hodge = spec_of("hodge", k)
        rep_i = compare_mod_zero(s_up, s_down_above, zero_eps=zero_eps,
                                 match_eps=match_eps)
        rep_ii = compare_mod_zero(s_hodge, _union_spectrum(s_up, s_down),
                                  zero_eps=zero_eps, match_eps=match_eps)
        if s_hodge.eigenvalues.size and s_hodge.zero_dim() > 0:
            zero_prop = s_up.zero_dim() > 0 and s_down.zero_dim() > 0
        else:
            zero_prop = True
        out.append(IdentityReport(k=k, up_vs_down_above=rep_i,
                                  hodge_vs_union=rep_ii, zero_propagates=zero_prop))
    return out


def verify_truncation_pairings(trunc: Truncation, ks: list[int] | None = None,
                               zero_eps: float | None = None,
                               match_eps: float | None = None) -> list[dict]:
    """Exact cross-convention pairings on a truncation.

    The nonzero spectrum of the Dirichlet up Laplacian at k matches the
    Neumann down Laplacian at k+1, and the Neumann up matches the Dirichlet
    down; the report records which convention pair was compared.
    """
    if ks is None:
        ks = list(range(0, trunc.max_inner_dim))
    out = []
    for k in ks:
        s_up_d = level_spectrum(trunc, LaplacianSpec("up", "dirichlet", k),
                                zero_eps=zero_eps)
        s_down_n = level_spectrum(trunc, LaplacianSpec("down", "neumann", k + 1),
                                  zero_eps=zero_eps)
        s_up_n = level_spectrum(trunc, LaplacianSpec("up", "neumann", k),
                                zero_eps=zero_eps)
        s_down_d = level_spectrum(trunc, LaplacianSpec("down", "dirichlet", k + 1),
                                  zero_eps=zero_eps)
        out.append({
            "k": k,
            "dirichlet_up_vs_neumann_down": compare_mod_zero(
                s_up_d, s_down_n, zero_eps=zero_eps, match_eps=match_eps),
            "neumann_up_vs_dirichlet_down": compare_mod_zero(
                s_up_n, s_down_d, zero_eps=zero_eps, match_eps=match_eps),
            "note": "pairings cross the boundary-condition conventions",
        })
    return out


@dataclass(frozen=True)
class NormalizingReport:
    k: int
    flavor: str
    min_eig: float
    max_eig: float
    bound: float
    bound_ok: bool
    action_checked: bool
    action_dev: float
    note: str = ""


def normalizing_bound_check(complex_: SimplicialComplex, weights: WeightAssignment,
                            orientation: OrientationAssignment,
                            tol: float = 1e-9) -> list[NormalizingReport]:
    """Spectral inclusion sigma(level k) in [0, k+2] for coface-sum weights.

    Where every level-k simplex has a coface the up Laplacian additionally
    acts as identity minus the sign-weighted coupling over the weight, so
    its diagonal is checked to be exactly 1.
    """
    if weights.scheme != "normalizing":
        raise ValueError("bound check needs weights built by the coface-sum recursion")
    out = []
    data_up = schrodinger_data(complex_, weights, orientation, "up")
    for k in sorted(complex_.levels):
        keys = complex_.level(k)
        for flavor, fn in (("up", up_laplacian), ("down", down_laplacian),
                           ("hodge", hodge_laplacian)):
            sym = symmetrize_to_euclidean(fn(complex_, weights, orientation, k), weights)
            spec = eigen(sym, source=f"{flavor}[{k}]")
            bound = float(k + 2)
            ok = spec.min >= -tol and spec.max <= bound + tol
            action_checked = False
            action_dev = 0.0
            note = ""
            if flavor == "up":
                if all(complex_.cofaces(s) for s in keys):
                    a = fn(complex_, weights, orientation, k).to_dense()
                    expected = np.eye(len(keys))
                    pos = {s: i for i, s in enumerate(keys)}
                    for i, tau in enumerate(keys):
                        for other, b, o in data_up.row(tau):
                            j = pos.get(other)
                            if j is not None:
                                expected[i, j] -= b * o / weights(tau)
                    action_dev = float(np.abs(a - expected).max()) if len(keys) else 0.0
                    action_checked = True
                else:
                    note = "skipped action form: some level simplices have no coface"
            out.append(NormalizingReport(k=k, flavor=flavor, min_eig=spec.min,
                                         max_eig=spec.max, bound=bound, bound_ok=ok,
                                         action_checked=action_checked,
                                         action_dev=action_dev, note=note))
    return out
