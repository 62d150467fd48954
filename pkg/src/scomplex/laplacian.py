"""Up/down/Hodge Laplacians, the mixed-grading first-order operator, and
Dirichlet/Neumann truncation conventions for generated families."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import EMPTY, Simplex, SimplicialComplex, WeightAssignment
from .operators import (LevelOperator, OrientationAssignment, boundary_matrix,
                        coboundary_matrix, _operator_from_dense)
from . import schrodinger as _schrodinger

FLAVORS = ("up", "down", "hodge", "gauss_bonnet", "sigma", "sigma_prime")


@dataclass(frozen=True)
class LaplacianSpec:
    """What to assemble: flavor, boundary-condition convention, level."""

    flavor: str
    bc: str = "intrinsic"
    dim: int | None = None

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.bc not in ("intrinsic", "dirichlet", "neumann"):
            raise ValueError(f"unknown bc {self.bc!r}")


@dataclass(eq=False)
class Truncation:
    """A finite window into a larger complex.

    ``inner`` is a downward-closed finite subcomplex of ``ambient``; ``halo``
    holds the ambient cofaces of inner simplices that are not themselves
    inner.  Dirichlet-style assemblies measure the energy of inner-supported
    functions inside the ambient complex (one coface layer is exactly what
    that energy sees), Neumann-style assemblies stay inside the window.
    """

    ambient: SimplicialComplex
    weights: WeightAssignment
    orientation: OrientationAssignment
    inner: frozenset[Simplex]
    halo: frozenset[Simplex]
    label: str = ""

    def __post_init__(self):
        if not self.inner:
            raise ValueError("truncation has an empty inner set")
        for s in self.inner:
            if s not in self.ambient:
                raise ValueError(f"inner simplex not in ambient complex: {s}")
            for f in self.ambient.faces(s):
                if f not in self.inner:
                    raise ValueError(f"inner set is not downward closed at {s} / {f}")
        for s in self.halo:
            if not any(f in self.inner for f in self.ambient.faces(s)):
                raise ValueError(f"halo simplex without inner face: {s}")

    def inner_level(self, k: int) -> tuple[Simplex, ...]:
        return tuple(s for s in self.ambient.level(k) if s in self.inner)

    def extended_level(self, k: int) -> tuple[Simplex, ...]:
        return tuple(s for s in self.ambient.level(k)
                     if s in self.inner or s in self.halo)

    def inner_complex(self) -> SimplicialComplex:
        return SimplicialComplex.from_simplices(self.inner,
                                                includes_empty=EMPTY in self.inner)

    @property
    def max_inner_dim(self) -> int:
        return max(s.dim for s in self.inner)


def truncate_by_distance(complex_: SimplicialComplex, weights: WeightAssignment,
                         orientation: OrientationAssignment, root: int,
                         radius: int) -> Truncation:
    """Window of all simplices whose vertices sit within graph distance
    ``radius`` of ``root`` on the 1-skeleton."""
    root_s = Simplex((root,))
    if root_s not in complex_:
        raise ValueError(f"root vertex {root} not in complex")
    dist = {root: 0}
    queue = deque([root])
    adj: dict[int, set[int]] = {}
    for a, b in complex_.skeleton_edges():
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    while queue:
        v = queue.popleft()
        if dist[v] >= radius:
            continue
        for w in adj.get(v, ()):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    inner = frozenset(s for s in complex_.simplices()
                      if s.dim < 0 or all(v in dist for v in s.vertices))
    if not inner:
        raise ValueError("truncation radius produced an empty inner set")
    halo = frozenset(s for s in complex_.simplices() if s not in inner
                     and any(f in inner for f in complex_.faces(s)))
    return Truncation(ambient=complex_, weights=weights, orientation=orientation,
                      inner=inner, halo=halo, label=f"ball({root}, {radius})")


def _coboundary_block(weights, orientation, cols, rows) -> np.ndarray:
    col_pos = {s: j for j, s in enumerate(cols)}
    a = np.zeros((len(rows), len(cols)))
    for i, sigma in enumerate(rows):
        for tau in sigma.faces():
            j = col_pos.get(tau)
            if j is not None:
                a[i, j] = orientation.sign(tau, sigma)
    return a


def _up_from_incidence(d: np.ndarray, m_src: np.ndarray, m_dst: np.ndarray) -> np.ndarray:
    """T*T on the source level of a coboundary block d: source -> destination."""
    if d.size == 0:
        return np.zeros((len(m_src), len(m_src)))
    return (d.T * m_dst) @ d / m_src[:, None]


def _down_from_incidence(d: np.ndarray, m_src: np.ndarray, m_dst: np.ndarray) -> np.ndarray:
    """TT* on the destination level of a coboundary block d: source -> destination."""
    if d.size == 0:
        return np.zeros((len(m_dst), len(m_dst)))
    return (d / m_src[None, :]) @ (d.T * m_dst[None, :])


def up_laplacian(complex_, weights, orientation, k: int) -> LevelOperator:
    d = coboundary_matrix(complex_, weights, orientation, k)
    b = boundary_matrix(complex_, weights, orientation, k)
    dense = b.to_dense() @ d.to_dense()
    keys = complex_.level(k)
    return _operator_from_dense(dense, keys, keys, k, k, convention="intrinsic")


def down_laplacian(complex_, weights, orientation, k: int) -> LevelOperator:
    d = coboundary_matrix(complex_, weights, orientation, k - 1)
    b = boundary_matrix(complex_, weights, orientation, k - 1)
    dense = d.to_dense() @ b.to_dense()
    keys = complex_.level(k)
    if not keys:
        dense = np.zeros((0, 0))
    return _operator_from_dense(dense, keys, keys, k, k, convention="intrinsic")


def hodge_laplacian(complex_, weights, orientation, k: int) -> LevelOperator:
    up = up_laplacian(complex_, weights, orientation, k)
    down = down_laplacian(complex_, weights, orientation, k)
    keys = complex_.level(k)
    return _operator_from_dense(up.to_dense() + down.to_dense(), keys, keys, k, k,
                                convention="intrinsic")


def gauss_bonnet_operator(complex_, weights, orientation) -> LevelOperator:
    """The mixed-grading sum of coboundary and boundary on the whole complex."""
    keys = tuple(complex_.simplices())
    pos = {s: i for i, s in enumerate(keys)}
    a = np.zeros((len(keys), len(keys)))
    for sigma in keys:
        for tau in complex_.faces(sigma):
            a[pos[sigma], pos[tau]] += orientation.sign(tau, sigma)
            a[pos[tau], pos[sigma]] += weights(sigma) * orientation.sign(tau, sigma) / weights(tau)
    return _operator_from_dense(a, keys, keys, "mixed", "mixed", convention="intrinsic")


def assemble(target, spec: LaplacianSpec,
             weights: WeightAssignment | None = None,
             orientation: OrientationAssignment | None = None) -> LevelOperator:
    """Assemble the requested Laplacian.

    ``target`` is either a SimplicialComplex (then ``weights`` and
    ``orientation`` are required and the convention is intrinsic) or a
    Truncation carrying its own data.  On truncations the conventions pair
    up as adjoints: the Dirichlet coboundary maps inner functions into the
    ambient complex and the Neumann one stays inside, so

      up/dirichlet    sees the halo coface layer (inner index set),
      up/neumann      is intrinsic to the window,
      down/dirichlet  is intrinsic to the window (adjoint pair of up/neumann),
      down/neumann    is the halo-extended partner of up/dirichlet and is
                      indexed by inner plus halo level simplices,
      hodge/neumann   = sigma       = up/neumann + down/dirichlet,
      hodge/dirichlet = sigma_prime = up/dirichlet + down/dirichlet.

    All assembled operators are positive semidefinite in the weighted inner
    product.
    """
    if isinstance(target, Truncation):
        return _assemble_truncated(target, spec)
    if weights is None or orientation is None:
        raise ValueError("finite-complex assembly needs weights and orientation")
    if spec.flavor in ("sigma", "sigma_prime"):
        raise ValueError("sigma flavors need truncation data; on a finite complex "
                         "they coincide with the hodge flavor")
    if spec.flavor == "gauss_bonnet":
        return gauss_bonnet_operator(target, weights, orientation)
    if spec.dim is None:
        raise ValueError("level flavors need spec.dim")
    fn = {"up": up_laplacian, "down": down_laplacian, "hodge": hodge_laplacian}[spec.flavor]
    return fn(target, weights, orientation, spec.dim)


def _assemble_truncated(trunc: Truncation, spec: LaplacianSpec) -> LevelOperator:
    bc = spec.bc if spec.bc != "intrinsic" else "neumann"
    w = trunc.weights
    orientation = trunc.orientation
    if spec.flavor == "gauss_bonnet":
        if bc == "dirichlet":
            raise ValueError("the mixed-grading operator is only assembled in the "
                             "Neumann (window-intrinsic) convention")
        return gauss_bonnet_operator(trunc.inner_complex(), w, orientation)
    k = spec.dim
    if k is None:
        raise ValueError("level flavors need spec.dim")
    inner_k = trunc.inner_level(k)
    m_of = lambda keys: np.array([w(s) for s in keys])

    def up_dirichlet() -> np.ndarray:
        rows = trunc.extended_level(k + 1)
        d = _coboundary_block(w, orientation, inner_k, rows)
        return _up_from_incidence(d, m_of(inner_k), m_of(rows))

    def up_neumann() -> np.ndarray:
        rows = trunc.inner_level(k + 1)
        d = _coboundary_block(w, orientation, inner_k, rows)
        return _up_from_incidence(d, m_of(inner_k), m_of(rows))

    def down_dirichlet() -> np.ndarray:
        cols = trunc.inner_level(k - 1)
        if not cols:
            return np.zeros((len(inner_k), len(inner_k)))
        d = _coboundary_block(w, orientation, cols, inner_k)
        return _down_from_incidence(d, m_of(cols), m_of(inner_k))

    if spec.flavor == "up":
        dense = up_dirichlet() if bc == "dirichlet" else up_neumann()
        return _operator_from_dense(dense, inner_k, inner_k, k, k, convention=bc)
    if spec.flavor == "down":
        if bc == "dirichlet":
            dense = down_dirichlet()
            return _operator_from_dense(dense, inner_k, inner_k, k, k, convention=bc)
        rows = trunc.extended_level(k)
        cols = trunc.inner_level(k - 1)
        if cols:
            d = _coboundary_block(w, orientation, cols, rows)
            dense = _down_from_incidence(d, m_of(cols), m_of(rows))
        else:
            dense = np.zeros((len(rows), len(rows)))
        return _operator_from_dense(dense, rows, rows, k, k, convention=bc)
    if spec.flavor in ("hodge", "sigma", "sigma_prime"):
        if spec.flavor == "sigma":
            up_part = up_neumann()
        elif spec.flavor == "sigma_prime":
            up_part = up_dirichlet()
        else:
            up_part = up_dirichlet() if bc == "dirichlet" else up_neumann()
        dense = up_part + down_dirichlet()
        return _operator_from_dense(dense, inner_k, inner_k, k, k, convention=bc)
    raise ValueError(spec.flavor)


def dn_form_gap(trunc: Truncation, flavor: str, k: int) -> float:
    """Smallest eigenvalue of (Dirichlet - Neumann) on the common inner index set.

    Nonnegative means the halo layer only adds energy.  For the down flavor
    the halo-extended Neumann operator is compressed back to the inner set,
    where the two conventions agree exactly.
    """
    a_d = assemble(trunc, LaplacianSpec(flavor, "dirichlet", k)).to_dense()
    op_n = assemble(trunc, LaplacianSpec(flavor, "neumann", k))
    if flavor == "down":
        inner_k = trunc.inner_level(k)
        pos = {s: i for i, s in enumerate(op_n.rows)}
        idx = [pos[s] for s in inner_k]
        a_n = op_n.to_dense()[np.ix_(idx, idx)]
    else:
        a_n = op_n.to_dense()
    diff = a_d - a_n
    w = trunc.weights
    keys = trunc.inner_level(k)
    m = np.array([w(s) for s in keys])
    sym = (np.sqrt(m)[:, None] * diff) / np.sqrt(m)[None, :]
    sym = 0.5 * (sym + sym.T)
    if sym.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(sym)[0])


def symmetrize_to_euclidean(op: LevelOperator, weights: WeightAssignment,
                            tol: float = 1e-12) -> np.ndarray:
    """Conjugate an m-self-adjoint operator by sqrt(M) into an ordinary
    symmetric matrix with the same spectrum; asymmetry beyond ``tol``
    signals an assembly bug and raises."""
    if op.rows != op.cols:
        raise ValueError("symmetrization needs a square, identically indexed operator")
    a = op.to_dense()
    m = np.array([weights(s) for s in op.rows])
    root = np.sqrt(m)
    s = (root[:, None] * a) / root[None, :]
    scale = max(float(np.linalg.norm(s)), 1.0)
    gap = float(np.linalg.norm(s - s.T))
    if gap > tol * scale:
        raise ValueError(f"operator is not m-self-adjoint: asymmetry {gap:.3e} "
                         f"exceeds {tol:.1e} x scale")
    return 0.5 * (s + s.T)


def gauss_bonnet_square_check(complex_: SimplicialComplex, weights: WeightAssignment,
                              orientation: OrientationAssignment) -> dict[str, float]:
    """Residuals of (first-order operator)^2 against the full Laplacian.

    Compared once against the signed-coefficient assembly of the full
    Laplacian and once against the sum of the composed up and down parts;
    both vanish on finite complexes.
    """
    gb = gauss_bonnet_operator(complex_, weights, orientation)
    keys = gb.rows
    pos = {s: i for i, s in enumerate(keys)}
    sq = gb.to_dense() @ gb.to_dense()

    data = _schrodinger.schrodinger_data(complex_, weights, orientation, "hodge")
    h_boc = _schrodinger.operator_matrix(data, weights, keys)

    comp = np.zeros_like(sq)
    kmin = -1 if complex_.includes_empty else 0
    for k in range(kmin, complex_.dim + 1):
        lk = complex_.level(k)
        if not lk:
            continue
        idx = [pos[s] for s in lk]
        up = up_laplacian(complex_, weights, orientation, k).to_dense()
        down = down_laplacian(complex_, weights, orientation, k).to_dense()
        comp[np.ix_(idx, idx)] = up + down
    scale = max(float(np.linalg.norm(sq)), 1.0)
    return {"square_vs_coefficients": float(np.linalg.norm(sq - h_boc)) / scale,
            "square_vs_composition": float(np.linalg.norm(sq - comp)) / scale}
