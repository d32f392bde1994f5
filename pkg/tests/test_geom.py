import numpy as np
import pytest
from hypothesis import given, strategies as st

from attbasin import geom
from attbasin.errors import BadGains, NotSkew
from attbasin.geom import (TangentStateS2, attitude_error_vector, dist_ts2,
                           dist_tso3, exp_rot, hat, psi_s2, psi_so3,
                           tangent_project, vee)

E1, E2, E3 = np.eye(3)
G = np.diag([0.9, 1.0, 1.1])

finite_vec = st.lists(st.floats(-10, 10), min_size=3, max_size=3).map(np.array)


class TestHatVee:
    def test_zero(self):
        assert np.array_equal(hat(np.zeros(3)), np.zeros((3, 3)))
        assert np.array_equal(vee(np.zeros((3, 3))), np.zeros(3))

    def test_basis_identity(self):
        expected = np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=float)
        assert np.array_equal(hat(E1), expected)
        assert np.allclose(hat(E1) @ E2, E3)

    def test_self_cross_vanishes(self):
        v = np.array([1.0, 2.0, 3.0])
        assert np.allclose(hat(v) @ v, 0.0)

    @given(finite_vec, finite_vec)
    def test_hat_is_cross_product(self, v, y):
        assert np.allclose(hat(v) @ y, np.cross(v, y), atol=1e-13)

    @given(finite_vec)
    def test_vee_hat_roundtrip(self, v):
        assert np.allclose(vee(hat(v)), v, atol=1e-15)

    def test_vee_rejects_non_skew(self):
        with pytest.raises(NotSkew):
            vee(np.eye(3))


class TestExpRot:
    def test_zero_is_identity(self):
        assert np.allclose(exp_rot(np.zeros(3)), np.eye(3))

    def test_half_turn_about_e3(self):
        # paper's Fig. 4 attitude: exp(pi e3) = [-e1, -e2, e3]
        assert np.allclose(exp_rot(np.pi * E3), np.diag([-1.0, -1.0, 1.0]),
                           atol=1e-15)

    def test_quarter_turn(self):
        assert np.allclose(exp_rot(np.pi / 2 * E3) @ E1, E2, atol=1e-15)

    @given(finite_vec)
    def test_axis_fixed(self, v):
        assert np.allclose(exp_rot(v) @ v, v, atol=1e-12)

    @given(st.floats(0, 4 * np.pi), finite_vec)
    def test_rotation_invariants_up_to_4pi(self, theta, axis):
        n = np.linalg.norm(axis)
        if n < 1e-6:
            return
        r = exp_rot(theta * axis / n)
        assert np.linalg.norm(r.T @ r - np.eye(3)) <= 1e-10
        assert abs(np.linalg.det(r) - 1.0) <= 1e-10

    @given(finite_vec)
    def test_inverse_is_transpose(self, v):
        assert np.allclose(exp_rot(-v), exp_rot(v).T, atol=1e-14)

    def test_small_angle_branch(self):
        v = np.array([1e-10, -2e-10, 1e-10])
        r = exp_rot(v)
        assert np.allclose(r, np.eye(3) + hat(v), atol=1e-19)


class TestTangentProject:
    def test_examples(self):
        assert np.allclose(tangent_project(E3, E3), 0.0)
        assert np.allclose(tangent_project(E3, E1), E1)
        assert np.allclose(tangent_project(E3, np.ones(3)), [1, 1, 0])

    @given(finite_vec)
    def test_matches_minus_hat_squared(self, v):
        q = E3
        assert np.allclose(tangent_project(q, v), -hat(q) @ hat(q) @ v,
                           atol=1e-14)

    @given(finite_vec)
    def test_idempotent_and_tangent(self, v):
        q = np.array([1.0, 2.0, 2.0]) / 3.0
        p1 = tangent_project(q, v)
        assert abs(np.dot(p1, q)) <= 1e-13
        assert np.allclose(tangent_project(q, p1), p1, atol=1e-13)


class TestErrorFunctions:
    def test_psi_s2_examples(self):
        assert psi_s2(E3, E3) == 0.0
        assert psi_s2(-E3, E3) == pytest.approx(2.0)
        assert psi_s2(E1, E3) == pytest.approx(1.0)

    @given(finite_vec, finite_vec)
    def test_psi_s2_half_chord_identity(self, a, b):
        if np.linalg.norm(a) < 1e-6 or np.linalg.norm(b) < 1e-6:
            return
        q, qd = a / np.linalg.norm(a), b / np.linalg.norm(b)
        assert psi_s2(q, qd) == pytest.approx(1.0 - np.dot(q, qd), abs=1e-14)

    def test_psi_so3_examples(self):
        assert psi_so3(np.eye(3), np.eye(3), G) == 0.0
        assert psi_so3(exp_rot(np.pi * E1), np.eye(3), G) == pytest.approx(2.1)
        assert psi_so3(exp_rot(np.pi * E3), np.eye(3), G) == pytest.approx(1.9)

    def test_psi_so3_rejects_bad_weights(self):
        with pytest.raises(BadGains):
            psi_so3(np.eye(3), np.eye(3), np.ones((3, 3)))
        with pytest.raises(BadGains):
            psi_so3(np.eye(3), np.eye(3), np.diag([1.0, -1.0, 1.0]))

    def test_error_vector_vanishes_at_equilibria(self):
        assert np.allclose(attitude_error_vector(np.eye(3), np.eye(3), G), 0.0)
        for i in range(3):
            axis = np.zeros(3)
            axis[i] = np.pi
            r = exp_rot(axis)
            assert np.allclose(attitude_error_vector(r, np.eye(3), G), 0.0,
                               atol=1e-15)

    def test_error_vector_small_z_rotation(self):
        r = exp_rot(0.1 * E3)
        expected = 0.95 * np.sin(0.1) * E3
        assert np.allclose(attitude_error_vector(r, np.eye(3), G), expected,
                           atol=1e-12)


class TestDistances:
    def test_dist_ts2(self):
        a = TangentStateS2(E3, np.zeros(3))
        assert dist_ts2(a, a) == 0.0
        b = TangentStateS2(-E3, np.zeros(3))
        assert dist_ts2(a, b) == pytest.approx(np.sqrt(2.0))
        c = TangentStateS2(E3, 0.5 * E1)
        assert dist_ts2(a, c) == pytest.approx(0.5)

    def test_dist_tso3(self):
        a = geom.TangentStateSO3(np.eye(3), np.zeros(3))
        assert dist_tso3(a, a, G) == 0.0
        b = geom.TangentStateSO3(exp_rot(np.pi * E1), np.zeros(3))
        assert dist_tso3(b, a, G) == pytest.approx(np.sqrt(2.1))
        c = geom.TangentStateSO3(np.eye(3), E2)
        assert dist_tso3(c, a, G) == pytest.approx(1.0)


class TestConstructors:
    def test_unit_renormalizes_small_defect(self):
        q = E3 * (1.0 + 5e-12)
        s = TangentStateS2(q, np.zeros(3))
        assert np.linalg.norm(s.q) == pytest.approx(1.0, abs=1e-15)

    def test_unit_rejects_large_defect(self):
        with pytest.raises(ValueError):
            TangentStateS2(1.5 * E3, np.zeros(3))

    def test_tangency_rejected_when_gross(self):
        with pytest.raises(ValueError):
            TangentStateS2(E3, E3)

    def test_rotation_rejects_reflection(self):
        with pytest.raises(ValueError):
            geom.normalize_rotation(np.diag([1.0, 1.0, -1.0]))
