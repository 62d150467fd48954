import math
import random

import numpy as np
import pytest

from scomplex.core import (GradedFunction, build_complex, indicator, inner,
                           simplex)
from scomplex.generators import fan, random_complex
from scomplex.laplacian import (down_laplacian, hodge_laplacian, up_laplacian)
from scomplex.operators import apply_boundary, random_graded_function
from scomplex.schrodinger import (apply_schrodinger, closed_form_coupling,
                                  direct_energy, forman_curvature,
                                  forman_curvature_combinatorial,
                                  green_symmetry_residual, operator_matrix,
                                  quadratic_form_via_boc, row_l2_norm,
                                  schrodinger_data)

from conftest import LEX, combinatorial, random_weights


def _pair(a, b):
    return (a, b) if a.sort_key() <= b.sort_key() else (b, a)


def test_coupling_values_triangles(solid_triangle, hollow_triangle):
    cs, ws = solid_triangle
    e1, e2 = simplex(0, 1), simplex(0, 2)
    up = schrodinger_data(cs, ws, LEX, "up")
    down = schrodinger_data(cs, ws, LEX, "down")
    hodge = schrodinger_data(cs, ws, LEX, "hodge")
    assert up.coupling[_pair(e1, e2)] == 1.0
    assert down.coupling[_pair(e1, e2)] == 1.0
    assert _pair(e1, e2) not in hodge.coupling  # exact cancellation drops the entry

    ch, wh = hollow_triangle
    up_h = schrodinger_data(ch, wh, LEX, "up")
    down_h = schrodinger_data(ch, wh, LEX, "down")
    hodge_h = schrodinger_data(ch, wh, LEX, "hodge")
    assert _pair(e1, e2) not in up_h.coupling
    assert down_h.coupling[_pair(e1, e2)] == 1.0
    assert hodge_h.coupling[_pair(e1, e2)] == 1.0


def test_coupling_closed_forms_agree(corpus):
    for label, c, w, orient in corpus:
        wr = random_weights(c, seed=1)
        for flavor in ("up", "down", "hodge"):
            data = schrodinger_data(c, wr, orient, flavor)
            for (a, b), v in data.coupling.items():
                assert v == pytest.approx(
                    closed_form_coupling(c, wr, a, b, flavor), rel=1e-12), label
            # and simplices the closed form couples are present in the data
            for tau in c.simplices():
                for other in c.simplices():
                    if other <= tau or tau.dim != other.dim:
                        continue
                    cf = closed_form_coupling(c, wr, tau, other, flavor)
                    got = data.coupling.get(_pair(tau, other), 0.0)
                    assert got == pytest.approx(cf, rel=1e-12, abs=1e-15), label


def test_potential_up_closed_form(corpus):
    for label, c, w, orient in corpus:
        data = schrodinger_data(c, w, orient, "up")
        for tau in c.simplices():
            gamma = sum(w(s) for s in c.cofaces(tau))
            assert data.potential[tau] == pytest.approx(-tau.dim * gamma, abs=1e-12), label


def test_potential_down_closed_form(tetra):
    c, _ = tetra
    w = random_weights(c, seed=21)
    data = schrodinger_data(c, w, LEX, "down")
    for tau in c.simplices():
        expected = 0.0
        for rho in c.faces(tau):
            others = sum(w(t) for t in c.cofaces(rho) if t != tau)
            expected += (w(tau) / w(rho)) * (w(tau) - others)
        assert data.potential[tau] == pytest.approx(expected, rel=1e-12, abs=1e-12)


def _hodge_potential_printed(c, w, tau):
    """Face-anchored closed form; valid wherever every coupled pair shares a face."""
    first = sum(w(tau) ** 2 / w(rho) for rho in c.faces(tau))
    second = sum(w(s) for s in c.cofaces(tau))
    third = 0.0
    for rho in c.faces(tau):
        for other in c.cofaces(rho):
            if other == tau:
                continue
            union = set(tau.vertices) | set(other.vertices)
            common = 0.0
            if len(union) == tau.dim + 2:
                u = simplex(*union)
                if u in c:
                    common = w(u)
            third += abs(w(tau) * w(other) / w(rho) - common)
    return first + second - third


def test_hodge_potential_printed_formula():
    # with the empty simplex the face-anchored form holds at every dimension
    c, _ = build_complex([[0, 1, 2], [2, 3]], "combinatorial", empty_policy="include")
    w = random_weights(c, seed=13)
    data = schrodinger_data(c, w, LEX, "hodge")
    for tau in c.simplices():
        assert data.potential[tau] == pytest.approx(
            _hodge_potential_printed(c, w, tau), rel=1e-12, abs=1e-12)
    # without it the form still holds for dims >= 1
    c2, _ = build_complex([[0, 1, 2], [2, 3]], "combinatorial", empty_policy="exclude")
    w2 = random_weights(c2, seed=13)
    data2 = schrodinger_data(c2, w2, LEX, "hodge")
    for tau in c2.simplices():
        if tau.dim >= 1:
            assert data2.potential[tau] == pytest.approx(
                _hodge_potential_printed(c2, w2, tau), rel=1e-12, abs=1e-12)


def test_operator_matches_compositions(corpus):
    for label, c, w, orient in corpus:
        for flavor, fn in (("up", up_laplacian), ("down", down_laplacian),
                           ("hodge", hodge_laplacian)):
            data = schrodinger_data(c, w, orient, flavor)
            for k in sorted(c.levels):
                keys = c.level(k)
                if not keys:
                    continue
                composed = fn(c, w, orient, k).to_dense()
                boc = operator_matrix(data, w, keys)
                assert np.abs(composed - boc).max() <= 1e-12, (label, flavor, k)


def test_operator_matches_compositions_weighted(tetra):
    c, _ = tetra
    w = random_weights(c, seed=2)
    for flavor, fn in (("up", up_laplacian), ("down", down_laplacian),
                       ("hodge", hodge_laplacian)):
        data = schrodinger_data(c, w, LEX, flavor)
        for k in sorted(c.levels):
            keys = c.level(k)
            composed = fn(c, w, LEX, k).to_dense()
            scale = max(np.abs(composed).max(), 1.0)
            assert np.abs(composed - operator_matrix(data, w, keys)).max() \
                <= 1e-12 * scale, (flavor, k)


def test_apply_matches_matrix(solid_triangle):
    c, w = solid_triangle
    rng = random.Random(0)
    data = schrodinger_data(c, w, LEX, "hodge")
    omega = random_graded_function(c, rng, density=1.0)
    out = apply_schrodinger(data, w, omega)
    keys = tuple(c.simplices())
    mat = operator_matrix(data, w, keys)
    x = np.array([omega(s) for s in keys])
    expected = mat @ x
    got = np.array([out(s) for s in keys])
    assert np.abs(got - expected).max() <= 1e-12


def test_energy_form_identities(corpus):
    rng = random.Random(12)
    for label, c, w, orient in corpus:
        for flavor in ("up", "down", "hodge"):
            data = schrodinger_data(c, w, orient, flavor)
            for _ in range(4):
                omega = random_graded_function(c, rng)
                a = quadratic_form_via_boc(data, w, omega)
                b = direct_energy(c, w, orient, omega, flavor)
                norm2 = inner(w, omega, omega)
                assert abs(a - b) <= 1e-10 * max(norm2, 1.0), (label, flavor)
                # operator route
                h_omega = apply_schrodinger(data, w, omega)
                assert abs(inner(w, omega, h_omega) - b) <= 1e-10 * max(norm2, 1.0)


def test_indicator_energy_is_degree(corpus):
    for label, c, w, orient in corpus:
        for flavor in ("up", "down", "hodge"):
            data = schrodinger_data(c, w, orient, flavor)
            for tau in c.simplices():
                val = quadratic_form_via_boc(data, w, indicator(tau))
                assert val == pytest.approx(data.degree[tau], rel=1e-12, abs=1e-12)


def test_hollow_triangle_cycle_function(hollow_triangle):
    c, w = hollow_triangle
    omega = GradedFunction({simplex(0, 1): 1.0, simplex(0, 2): -1.0,
                            simplex(1, 2): 1.0})
    assert apply_boundary(c, w, LEX, omega).values == {}
    data = schrodinger_data(c, w, LEX, "down")
    assert quadratic_form_via_boc(data, w, omega) == pytest.approx(0.0, abs=1e-14)
    bumped = omega + indicator(simplex(0, 1))
    assert quadratic_form_via_boc(data, w, bumped) == pytest.approx(
        direct_energy(c, w, LEX, bumped, "down"), rel=1e-12)


def test_sign_cancellation_with_shared_face_and_coface(solid_triangle):
    c, w = solid_triangle
    up = schrodinger_data(c, w, LEX, "up")
    down = schrodinger_data(c, w, LEX, "down")
    edges = c.level(1)
    for i in range(3):
        for j in range(i + 1, 3):
            key = _pair(edges[i], edges[j])
            assert up.sign[key] == -down.sign[key]


def test_degree_minus_potential_is_row_sum(corpus):
    for label, c, w, orient in corpus:
        for flavor in ("up", "down", "hodge"):
            data = schrodinger_data(c, w, orient, flavor)
            for tau in c.simplices():
                row = data.row_sum(tau)
                assert row >= 0.0
                assert data.degree[tau] - data.potential[tau] == pytest.approx(
                    row, rel=1e-12, abs=1e-12)
                if not data.neighbors.get(tau):
                    assert row == 0.0


def test_green_symmetry(corpus):
    for label, c, w, orient in corpus:
        for flavor in ("up", "down", "hodge"):
            data = schrodinger_data(c, w, orient, flavor)
            assert green_symmetry_residual(data, w, trials=4, seed=1) <= 1e-10, label


def test_forman_values():
    ch, wh = combinatorial([[0, 1], [1, 2], [0, 2]])
    curv_h = forman_curvature(ch, wh, LEX)
    for e in ch.level(1):
        assert curv_h[e] == pytest.approx(0.0, abs=1e-14)
    cs, ws = combinatorial([[0, 1, 2]])
    curv_s = forman_curvature(cs, ws, LEX)
    for e in cs.level(1):
        assert curv_s[e] == pytest.approx(3.0, abs=1e-14)


def test_forman_combinatorial_closed_form():
    # the counting form needs the bottom level to see vertex-pair couplings
    for seed in range(6):
        c = random_complex(6, 0.5, 3, seed, include_empty=True)
        w = build_complex([list(s.vertices) for s in c.maximal_simplices()],
                          "combinatorial", empty_policy="include")[1]
        general = forman_curvature(c, w, LEX)
        counted = forman_curvature_combinatorial(c)
        for tau in c.simplices():
            assert general[tau] == pytest.approx(counted[tau], abs=1e-12), (seed, tau)
    # without the empty simplex it remains valid from dimension 1 up
    for seed in range(6):
        c = random_complex(6, 0.5, 3, seed)
        w = build_complex([list(s.vertices) for s in c.maximal_simplices()],
                          "combinatorial", empty_policy="exclude")[1]
        general = forman_curvature(c, w, LEX)
        counted = forman_curvature_combinatorial(c)
        for tau in c.simplices():
            if tau.dim >= 1:
                assert general[tau] == pytest.approx(counted[tau], abs=1e-12)


def test_forman_closed_form_examples(hollow_triangle, solid_triangle):
    ch, _ = hollow_triangle
    counted = forman_curvature_combinatorial(ch)
    assert counted[simplex(0, 1)] == 0.0  # 2*2 + 3*0 - (2+2)
    cs, _ = solid_triangle
    counted_s = forman_curvature_combinatorial(cs)
    assert counted_s[simplex(0, 1)] == 3.0  # 4 + 3*1 - 4


def test_row_l2_norm_isolated_and_fan():
    c, w = combinatorial([[0]])
    data = schrodinger_data(c, w, LEX, "up")
    assert row_l2_norm(data, w, simplex(0)) == 0.0
    # down-flavor profile of the first spoke stabilizes as the family grows
    values = []
    for n in (2, 4, 8, 16):
        fam = fan(n)
        data = schrodinger_data(fam.complex, fam.weights, fam.orientation, "down")
        expected = 1.0 + sum(1.0 / i ** 2 for i in range(2, n + 2))
        got = row_l2_norm(data, fam.weights, simplex(0, 1))
        assert got == pytest.approx(expected, rel=1e-12)
        values.append(got)
    increments = [b - a for a, b in zip(values, values[1:])]
    assert all(x > y for x, y in zip(increments, increments[1:]))
    assert values[-1] < 1.0 + (math.pi ** 2 / 6.0 - 1.0)


def test_row_l2_norm_locally_finite_is_finite(corpus):
    for label, c, w, orient in corpus:
        data = schrodinger_data(c, w, orient, "hodge")
        for tau in c.simplices():
            assert math.isfinite(row_l2_norm(data, w, tau))
