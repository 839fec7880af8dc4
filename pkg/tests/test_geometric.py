import math

import numpy as np
import pytest

from topquandle.geometric import (ComplexSphere, GeometryError, Grassmannian, ProjectiveSpace, SL2Quandle,
                                  Sphere, canonical_line, canonical_sl2, check_axioms, csphere_op,
                                  geometric_quandle, grass_op, orthonormalize, parse_phase, proj_op,
                                  projector, sl2_from_matrix, sl2_op, sl2_to_matrix, sphere_op)

PHASES = [math.pi, math.pi / 2, 2 * math.pi / 3]


def _cnormal(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_sphere_examples():
    a = np.array([0.0, 0.0, 1.0])
    b = np.array([math.sqrt(2) / 2, 0.0, math.sqrt(2) / 2])
    assert np.allclose(sphere_op(a, b), [1, 0, 0], atol=1e-12)
    assert np.allclose(sphere_op(a, [1.0, 0, 0]), -a)
    assert np.allclose(sphere_op(b, b), b)


def test_sphere_is_kei_and_unit():
    rng = np.random.default_rng(0)
    q = Sphere(4)
    a, b = q.random_points(rng, 1000), q.random_points(rng, 1000)
    ab = sphere_op(a, b)
    assert np.abs(np.linalg.norm(ab, axis=-1) - 1).max() < 1e-12
    assert np.abs(sphere_op(ab, b) - a).max() < 1e-12


@pytest.mark.parametrize("q", [Sphere(2), Sphere(3)] + [ComplexSphere(3, p) for p in PHASES]
                         + [ProjectiveSpace(3, p) for p in PHASES] + [Grassmannian(4, 2, p) for p in PHASES]
                         + [Grassmannian(5, 2, math.pi / 3), SL2Quandle()])
def test_axioms_on_random_triples(q):
    report = check_axioms(q, samples=10_000, seed=1)
    assert report["idempotence"] < 1e-10
    assert report["right_inverse"] < 1e-10
    assert report["self_distributivity"] < 1e-10


def test_q_one_is_identity():
    rng = np.random.default_rng(2)
    a, b = _cnormal(rng, 3), _cnormal(rng, 3)
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    assert np.allclose(csphere_op(a, b, 1), a)
    u = orthonormalize(_cnormal(rng, 4, 2))
    w = orthonormalize(_cnormal(rng, 4, 2))
    assert np.allclose(grass_op(u, w, 1), u)


def test_csphere_reduces_to_sphere():
    rng = np.random.default_rng(3)
    q = Sphere(3)
    a, b = q.random_points(rng, 50), q.random_points(rng, 50)
    assert np.abs(csphere_op(a, b, -1) - sphere_op(a, b)).max() < 1e-12


def test_grass_fixes_own_subspace():
    rng = np.random.default_rng(4)
    u = orthonormalize(_cnormal(rng, 4, 2))
    for phase in PHASES:
        assert np.abs(projector(grass_op(u, u, np.exp(1j * phase))) - projector(u)).max() < 1e-10


def test_reflection_conjugation_identity():
    # i_b(i_a(v)) = i_{i_b(a)}(i_b(v)) for the complex reflections
    rng = np.random.default_rng(5)
    for phase in PHASES:
        q = np.exp(1j * phase)
        cs = ComplexSphere(3, phase)
        a, b, v = (cs.random_points(rng, 200) for _ in range(3))
        lhs = cs._i(cs._i(v, a, q), b, q)
        rhs = cs._i(cs._i(v, b, q), cs._i(a, b, q), q)
        assert np.abs(lhs - rhs).max() < 1e-10
        g = Grassmannian(4, 2, phase)
        u, w = g.random_points(rng, 200), g.random_points(rng, 200)
        x = _cnormal(rng, 200, 4, 1)
        lhs = g._j(g._j(x, u, q), w, q)
        rhs = g._j(g._j(x, w, q), orthonormalize(g._j(u, w, q)), q)
        assert np.abs(lhs - rhs).max() < 1e-10


def test_inverse_uses_conjugate_q():
    rng = np.random.default_rng(6)
    cs = ComplexSphere(2, 2 * math.pi / 3)
    a, b = cs.random_points(rng, 100), cs.random_points(rng, 100)
    assert np.abs(cs._i(cs._i(a, b, cs.q), b, np.conj(cs.q)) - a).max() < 1e-12


def test_non_unit_q_rejected():
    with pytest.raises(GeometryError):
        csphere_op([1, 0], [0, 1], 0.5)
    with pytest.raises(GeometryError):
        grass_op(np.eye(3)[:, :1], np.eye(3)[:, 1:2], 1.1j)


def test_projective_canonical_form():
    rng = np.random.default_rng(7)
    v = _cnormal(rng, 3)
    c = canonical_line(v * np.exp(1.3j))
    assert abs(c[0].imag) < 1e-12 and c[0].real > 0
    assert np.allclose(c, canonical_line(v))
    la, lb = canonical_line(_cnormal(rng, 3)), canonical_line(_cnormal(rng, 3))
    out = proj_op(la, lb, 1j)
    assert abs(out[0].imag) < 1e-12 and np.allclose(out, canonical_line(out))


def test_sl2_examples():
    al, be = 0.3 - 0.2j, 1.1 + 0.4j
    one = np.array([1, 0], dtype=complex)
    h = np.array([al, be])
    assert np.allclose(canonical_sl2(sl2_op(one, h)), canonical_sl2([1 - al * be, -be ** 2]))
    twice = sl2_op(sl2_op(one, h), one)
    assert np.allclose(twice, canonical_sl2([1 - al * be - be ** 2, -be ** 2]))
    rng = np.random.default_rng(8)
    x = canonical_sl2(_cnormal(rng, 100, 2))
    assert np.abs(sl2_op(x, x) - x).max() < 1e-12


def test_sl2_matrix_oracle():
    rng = np.random.default_rng(9)
    x, y = _cnormal(rng, 10_000, 2), _cnormal(rng, 10_000, 2)
    mx, my = sl2_to_matrix(x), sl2_to_matrix(y)
    assert np.abs(sl2_to_matrix(sl2_op(x, y)) - np.linalg.inv(my) @ mx @ my).max() < 1e-10
    assert np.abs(np.linalg.det(mx) - 1).max() < 1e-12
    assert np.abs(np.trace(mx, axis1=-2, axis2=-1) - 2).max() < 1e-12
    back = sl2_from_matrix(mx)
    assert np.abs(sl2_to_matrix(back) - mx).max() < 1e-9


def test_sl2_matrix_examples():
    assert np.allclose(sl2_to_matrix([1, 0]), [[1, 0], [1, 1]])
    al = 0.7 + 0.2j
    assert np.allclose(sl2_to_matrix([al, 1]), [[1 - al, -1], [al ** 2, 1 + al]])


def test_sl2_canonical_rule():
    x = canonical_sl2(np.array([[-2 + 1j, 0.5], [0.1, -3j], [1j, -1j]]))
    assert x[0, 0].real > 0
    assert x[1, 1].imag > 0
    assert x[2, 0].imag > 0


def test_selectors():
    assert isinstance(geometric_quandle("sphere:2"), Sphere)
    cs = geometric_quandle("csphere:3:q=2pi/3")
    assert abs(cs.q - np.exp(2j * math.pi / 3)) < 1e-15
    assert geometric_quandle("grass:4:2:q=pi/2").dim == 8
    assert abs(geometric_quandle("proj:3").q + 1) < 1e-15
    assert isinstance(geometric_quandle("sl2"), SL2Quandle)
    assert parse_phase("-pi/2") == -math.pi / 2 and parse_phase("0.25") == 0.25
    q = geometric_quandle("sl2:r=5")
    assert q.radius == 5.0 and geometric_quandle(q.selector).radius == 5.0
    for bad in ["sphere", "grass:2:3", "cube:3", "csphere:2:q=foo", "csphere:2:pi", "sl2:r=-1", "sl2:5"]:
        with pytest.raises(GeometryError):
            geometric_quandle(bad)


def test_point_json_roundtrip():
    rng = np.random.default_rng(10)
    for sel in ["sphere:2", "csphere:2:q=pi/2", "grass:4:2", "sl2"]:
        q = geometric_quandle(sel)
        x = q.random_points(rng, 3)
        assert np.array_equal(q.point_from_json(q.point_to_json(x)), x)


def test_retraction_stays_on_manifold():
    rng = np.random.default_rng(11)
    for sel in ["sphere:2", "csphere:3:q=pi/2", "proj:3", "grass:4:2"]:
        q = geometric_quandle(sel)
        x = q.random_points(rng, 20)
        y = q.retract(x, q.tangent_basis(x), 0.1 * rng.standard_normal((20, q.dim)))
        if q.point_ndim == 2:
            gram = np.conj(np.swapaxes(y, -1, -2)) @ y
            assert np.abs(gram - np.eye(q.k)).max() < 1e-10
        else:
            assert np.abs(np.linalg.norm(y, axis=-1) - 1).max() < 1e-12
