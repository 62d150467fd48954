import numpy as np
import pytest

from scomplex.core import GradedFunction, build_complex, indicator, inner, simplex
from scomplex.generators import fan
from scomplex.operators import (LevelOperator, OrientationAssignment, apply_boundary,
                                apply_coboundary, boundary_matrix, coboundary_matrix,
                                theta, verify_dd_zero, verify_stokes)

from conftest import LEX, combinatorial, random_weights


def test_theta_lexicographic_values():
    tri = simplex(0, 1, 2)
    assert theta(LEX, simplex(1, 2), tri) == 1    # removed first vertex
    assert theta(LEX, simplex(0, 1), tri) == 1    # removed third vertex
    assert theta(LEX, simplex(0, 2), tri) == -1   # removed second vertex
    assert theta(LEX, simplex(0), simplex(0, 1)) == -1
    assert theta(LEX, simplex(1), simplex(0, 1)) == 1
    assert theta(LEX, simplex(0), tri) == 0       # not a codim-1 face
    assert theta(LEX, simplex(3), simplex(0, 1)) == 0


def test_theta_explicit_missing_pair_rejected():
    orient = OrientationAssignment(mode="explicit", explicit_signs={})
    with pytest.raises(KeyError):
        orient.sign(simplex(0), simplex(0, 1))


def test_orientation_validation_rejects_bad_signs(solid_triangle):
    c, _ = solid_triangle
    signs = {}
    for s in c.simplices():
        for f in c.faces(s):
            signs[(f, s)] = 1  # all +1 breaks the two-path cancellation
    bad = OrientationAssignment(mode="explicit", explicit_signs=signs)
    with pytest.raises(ValueError):
        bad.validate(c)
    LEX.validate(c)


def test_fan_orientation_matches_family_table():
    fam = fan(4)
    th = fam.orientation.sign
    for n in range(1, 5):
        t = simplex(0, n, n + 1)
        assert th(simplex(0, n), t) == 1
        assert th(simplex(n, n + 1), t) == 1
        assert th(simplex(0, n + 1), t) == -1
    assert th(simplex(1), simplex(1, 2)) == 1
    assert th(simplex(2), simplex(1, 2)) == -1
    fam.orientation.validate(fam.complex)


def test_coboundary_single_edge(edge):
    c, w = edge
    d0 = coboundary_matrix(c, w, LEX, 0)
    assert d0.to_dense().tolist() == [[-1.0, 1.0]]
    f = d0.apply(GradedFunction({simplex(0): 2.0, simplex(1): 5.0}))
    assert f(simplex(0, 1)) == 3.0


def test_coboundary_rank_hollow_triangle(hollow_triangle):
    c, w = hollow_triangle
    d0 = coboundary_matrix(c, w, LEX, 0).to_dense()
    assert d0.shape == (3, 3)
    assert np.linalg.matrix_rank(d0) == 2


def test_coboundary_weight_independent(solid_triangle):
    c, w = solid_triangle
    w2 = random_weights(c, seed=11)
    a = coboundary_matrix(c, w, LEX, 1).to_dense()
    b = coboundary_matrix(c, w2, LEX, 1).to_dense()
    assert np.array_equal(a, b)


def test_boundary_is_weighted_transpose(corpus):
    for label, c, w, orient in corpus:
        wr = random_weights(c, seed=5)
        for k in sorted(c.levels):
            d = coboundary_matrix(c, wr, orient, k).to_dense()
            b = boundary_matrix(c, wr, orient, k).to_dense()
            if d.size == 0:
                continue
            m_k = np.array([wr(s) for s in c.level(k)])
            m_k1 = np.array([wr(s) for s in c.level(k + 1)])
            expected = (d.T * m_k1) / m_k[:, None]
            assert np.abs(b - expected).max() <= 1e-14, label


def test_boundary_single_edge_no_empty(edge):
    c, w = edge
    b0 = boundary_matrix(c, w, LEX, 0)
    assert b0.to_dense().tolist() == [[-1.0], [1.0]]
    # without the empty simplex the boundary of vertex functions is the zero map
    bm1 = boundary_matrix(c, w, LEX, -1)
    assert bm1.to_dense().shape == (0, 2)
    assert apply_boundary(c, w, LEX, indicator(simplex(0))).values == {}


def test_boundary_to_empty_simplex():
    c, w = build_complex([[0, 1]], "combinatorial", empty_policy="include")
    bm1 = boundary_matrix(c, w, LEX, -1).to_dense()
    assert bm1.tolist() == [[1.0, 1.0]]


def test_apply_zero_and_indicator(edge):
    c, w = edge
    d0 = coboundary_matrix(c, w, LEX, 0)
    assert d0.apply(GradedFunction({})).values == {}
    out = d0.apply(indicator(simplex(0)))
    assert out(simplex(0, 1)) == -1.0


def test_fan_boundary_of_omega0_interior_matches_family_values():
    fam = fan(6)
    direct = apply_boundary(fam.complex, fam.weights, fam.orientation, fam.omega0)
    # interior spokes vanish, spoke 1 carries 1, rim edges carry 1/n^2
    assert direct(simplex(0, 1)) == pytest.approx(1.0, abs=1e-15)
    for n in range(2, 7):
        assert direct(simplex(0, n)) == pytest.approx(0.0, abs=1e-15)
    for n in range(1, 7):
        assert direct(simplex(n, n + 1)) == pytest.approx(1.0 / n ** 2, abs=1e-15)
    # the frontier spoke is the only place the truncation differs from the family
    assert direct(fam.frontier_edge) == pytest.approx(-49.0)
    assert fam.d_omega0(fam.frontier_edge) == 0.0
    for s, v in fam.d_omega0.values.items():
        if s != fam.frontier_edge:
            assert direct(s) == pytest.approx(v, abs=1e-15)


def test_fan_boundary_squared_on_family_values():
    for n in (1, 5):
        fam = fan(n)
        dd = apply_boundary(fam.complex, fam.weights, fam.orientation, fam.d_omega0)
        assert dd(simplex(0)) == pytest.approx(1.0, abs=1e-15)
    # under the default orientation only the magnitude survives
    fam = fan(4)
    d_family = GradedFunction({simplex(0, 1): 1.0})
    for i in range(1, 5):
        d_family.values[simplex(i, i + 1)] = 1.0 / i ** 2
    dd_lex = apply_boundary(fam.complex, fam.weights, LEX, d_family)
    assert abs(dd_lex(simplex(0))) == pytest.approx(1.0, abs=1e-15)
    assert dd_lex(simplex(0)) == pytest.approx(-1.0, abs=1e-15)


def test_stokes_and_green_residuals(corpus):
    for label, c, w, orient in corpus:
        res = verify_stokes(c, w, orient, trials=8, seed=2)
        assert max(res.values()) <= 1e-12, (label, res)
    # weighted variant
    c, _ = combinatorial([[0, 1, 2, 3]])
    wr = random_weights(c, seed=9)
    res = verify_stokes(c, wr, LEX, trials=8, seed=3)
    assert max(res.values()) <= 1e-12


def test_stokes_hand_example(solid_triangle):
    c, w = solid_triangle
    omega = indicator(simplex(0, 1, 2))
    eta = indicator(simplex(0, 1))
    lhs = inner(w, apply_boundary(c, w, LEX, omega), eta)
    rhs = inner(w, omega, apply_coboundary(c, LEX, eta))
    assert lhs == rhs == 1.0


def test_dd_zero(corpus):
    for label, c, w, orient in corpus:
        res = verify_dd_zero(c, w, orient)
        assert res["dd_residual"] == 0.0, label
        assert res["pp_residual"] <= 1e-12, label


def test_dd_zero_with_empty_simplex():
    c, w = build_complex([[0, 1], [1, 2], [0, 2]], "combinatorial",
                         empty_policy="include")
    res = verify_dd_zero(c, w, LEX)
    assert res["dd_residual"] == 0.0
    assert res["pp_residual"] <= 1e-12


def test_two_path_cancellation_exhaustive(tetra):
    c, _ = tetra
    for sigma in c.simplices():
        if sigma.dim < 1:
            continue
        for tau in c.faces(sigma):
            for rho in c.faces(tau):
                if rho.dim < 0:
                    continue
                mids = [t for t in c.cofaces(rho) if sigma.contains(t)]
                assert len(mids) == 2
                t1, t2 = mids
                assert (LEX.sign(rho, t1) * LEX.sign(t1, sigma)
                        + LEX.sign(rho, t2) * LEX.sign(t2, sigma)) == 0


def test_level_operator_triplets(edge):
    c, w = edge
    d0 = coboundary_matrix(c, w, LEX, 0)
    trips = list(d0.triplets())
    assert trips == [(simplex(0, 1), simplex(0), -1.0), (simplex(0, 1), simplex(1), 1.0)]
    assert d0.frobenius() == pytest.approx(np.sqrt(2.0))
