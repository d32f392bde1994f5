import numpy as np
import pytest

from attbasin import geom, models
from attbasin.geom import TangentStateS2, TangentStateSO3, exp_rot
from attbasin.models import (S2Params, SO3Params, equilibria, lyapunov_s2,
                             lyapunov_so3, params_from_config, parse_config,
                             s2_control_moment, s2_vector_field,
                             so3_control_moment, so3_reduced_moment,
                             so3_vector_field)

E1, E2, E3 = np.eye(3)


def random_s2_state(rng):
    q = rng.standard_normal(3)
    q /= np.linalg.norm(q)
    w = geom.tangent_project(q, rng.standard_normal(3))
    return TangentStateS2(q, w)


def random_so3_state(rng):
    r = exp_rot(rng.uniform(-np.pi, np.pi, 3))
    return TangentStateSO3(r, rng.standard_normal(3))


class TestParams:
    def test_defaults(self):
        p = S2Params()
        assert (p.m, p.l, p.g, p.kq, p.komega) == (1.0, 1.0, 9.81, 1.0, 1.0)
        assert np.array_equal(p.qd, E3)
        p3 = SO3Params()
        assert np.array_equal(p3.j_diag, [3.0, 2.0, 1.0])
        assert np.array_equal(np.diag(p3.G), [0.9, 1.0, 1.1])
        assert np.array_equal(p3.rho, [0.0, 0.0, 0.5])
        assert (p3.kR, p3.kOmega) == (1.0, 1.0)

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            S2Params(kq=-1.0)
        with pytest.raises(ValueError):
            S2Params(m=0.0)
        with pytest.raises(ValueError):
            SO3Params(J=np.ones((3, 3)))
        with pytest.raises(ValueError):
            SO3Params(G=np.diag([1.0, 0.0, 1.0]))
        with pytest.raises(ValueError):
            SO3Params(kOmega=-2.0)


class TestS2Dynamics:
    def test_field_at_hanging_equilibrium_is_zero(self):
        p = S2Params()
        s = TangentStateS2(-E3, np.zeros(3))
        dq, dw = s2_vector_field(s, p)
        assert np.array_equal(dq, np.zeros(3))
        assert np.allclose(dw, 0.0)

    def test_field_at_inverted_equilibrium_is_zero(self):
        p = S2Params()
        s = TangentStateS2(E3, np.zeros(3))
        dq, dw = s2_vector_field(s, p)
        assert np.allclose(dq, 0.0)
        assert np.allclose(dw, 0.0)

    def test_field_hand_value(self):
        # q = e1, w = 0: dw = -kq (qd x q) = -(e3 x e1) = -e2
        p = S2Params()
        s = TangentStateS2(E1, np.zeros(3))
        dq, dw = s2_vector_field(s, p)
        assert np.allclose(dq, 0.0)
        assert np.allclose(dw, -E2)

    def test_velocity_stays_tangent(self):
        # d/dt (q . w) = dq . w + q . dw must vanish identically
        rng = np.random.default_rng(7)
        p = S2Params(kq=2.5, komega=0.7)
        for _ in range(20):
            s = random_s2_state(rng)
            dq, dw = s2_vector_field(s, p)
            assert abs(np.dot(dq, s.omega) + np.dot(s.q, dw)) <= 1e-14

    def test_control_moment_cancels_gravity(self):
        # with gravity cancelled, m l^2 dw = u + m g l (q x e3)
        rng = np.random.default_rng(8)
        p = S2Params(m=2.0, l=0.5, g=9.81, kq=1.3, komega=0.4)
        ml2 = p.m * p.l**2
        for _ in range(10):
            s = random_s2_state(rng)
            u = s2_control_moment(s, p)
            _, dw = s2_vector_field(s, p)
            gravity = p.m * p.g * p.l * np.cross(s.q, E3)
            assert np.allclose(ml2 * dw, u + gravity, atol=1e-12)


class TestSO3Dynamics:
    def test_field_zero_at_all_equilibria(self):
        p = SO3Params()
        for s in equilibria("so3", p):
            dr, dw = so3_vector_field(s, p)
            assert np.allclose(dr, 0.0)
            assert np.allclose(dw, 0.0, atol=1e-15)

    def test_field_hand_value(self):
        # R = exp(0.1 e3), W = 0: dW = -kR J^-1 e_R = -0.95 sin(0.1) J^-1 e3
        p = SO3Params()
        s = TangentStateSO3(exp_rot(0.1 * E3), np.zeros(3))
        _, dw = so3_vector_field(s, p)
        assert np.allclose(dw, [0.0, 0.0, -0.95 * np.sin(0.1)], atol=1e-14)

    def test_gyroscopic_term(self):
        # R = I, W = e1 + e2: J dW = -W x JW - kOmega W with e_R = 0
        p = SO3Params()
        w = E1 + E2
        s = TangentStateSO3(np.eye(3), w)
        _, dw = so3_vector_field(s, p)
        expected = (-np.cross(w, p.j_diag * w) - w) / p.j_diag
        assert np.allclose(dw, expected, atol=1e-14)

    def test_control_moment_cancels_gravity(self):
        rng = np.random.default_rng(9)
        p = SO3Params()
        for _ in range(10):
            s = random_so3_state(rng)
            u = so3_control_moment(s, p)
            gravity = p.m * p.g * np.cross(p.rho, s.R.T @ E3)
            reduced = so3_reduced_moment(s.R, s.Omega, p)
            assert np.allclose(u + gravity, reduced, atol=1e-12)


class TestLyapunov:
    def test_values(self):
        p = S2Params()
        assert lyapunov_s2(TangentStateS2(E3, np.zeros(3)), p) == 0.0
        assert lyapunov_s2(TangentStateS2(-E3, np.zeros(3)), p) == pytest.approx(2.0)
        assert lyapunov_s2(TangentStateS2(E3, E1), p) == pytest.approx(0.5)
        p3 = SO3Params()
        assert lyapunov_so3(TangentStateSO3(np.eye(3), np.zeros(3)), p3) == 0.0
        assert lyapunov_so3(TangentStateSO3(np.eye(3), E1), p3) == pytest.approx(1.5)
        assert lyapunov_so3(
            TangentStateSO3(exp_rot(np.pi * E3), np.zeros(3)), p3
        ) == pytest.approx(1.9)

    def test_s2_dissipation_identity(self):
        # dV/dt = -komega |w|^2 along the flow
        rng = np.random.default_rng(10)
        p = S2Params(kq=1.7, komega=0.6)
        for _ in range(20):
            s = random_s2_state(rng)
            dq, dw = s2_vector_field(s, p)
            vdot = (np.dot(s.omega, dw)
                    - p.kq * np.dot(dq, p.qd))
            assert vdot == pytest.approx(
                -p.komega * np.dot(s.omega, s.omega), abs=1e-12)

    def test_so3_dissipation_identity(self):
        # dV/dt = -kOmega |W|^2 along the flow; dPsi/dt = e_R . W
        rng = np.random.default_rng(11)
        p = SO3Params()
        for _ in range(20):
            s = random_so3_state(rng)
            _, dw = so3_vector_field(s, p)
            e_r = geom.attitude_error_vector(s.R, p.Rd, p.G)
            vdot = (np.dot(s.Omega, p.j_diag * dw)
                    + p.kR * np.dot(e_r, s.Omega))
            assert vdot == pytest.approx(
                -p.kOmega * np.dot(s.Omega, s.Omega), abs=1e-12)


class TestEquilibria:
    def test_s2_pair(self):
        p = S2Params()
        eqs = equilibria("s2", p)
        assert len(eqs) == 2
        assert np.array_equal(eqs[0].q, E3)
        assert np.array_equal(eqs[1].q, -E3)

    def test_so3_four(self):
        p = SO3Params()
        eqs = equilibria("so3", p)
        assert len(eqs) == 4
        assert np.allclose(eqs[0].R, np.eye(3))
        assert np.allclose(eqs[1].R, np.diag([1.0, -1.0, -1.0]), atol=1e-15)
        assert np.allclose(eqs[2].R, np.diag([-1.0, 1.0, -1.0]), atol=1e-15)
        assert np.allclose(eqs[3].R, np.diag([-1.0, -1.0, 1.0]), atol=1e-15)

    def test_field_residual_below_1e12(self):
        for model, p in (("s2", S2Params()), ("so3", SO3Params())):
            for s in equilibria(model, p):
                if model == "s2":
                    dq, dw = s2_vector_field(s, p)
                else:
                    dq, dw = so3_vector_field(s, p)
                assert np.linalg.norm(dq) <= 1e-12
                assert np.linalg.norm(dw) <= 1e-12

    def test_rotated_desired(self):
        rd = exp_rot(0.3 * E1)
        p = SO3Params(Rd=rd)
        eqs = equilibria("so3", p)
        for s in eqs:
            _, dw = so3_vector_field(s, p)
            assert np.allclose(dw, 0.0, atol=1e-14)
        assert np.allclose(eqs[0].R, rd)


class TestConfig:
    def test_parse(self):
        cfg = parse_config("model = s2\nkq = 2.0  # gain\n\n# comment\nqd=0,0,-1\n")
        assert cfg == {"model": "s2", "kq": "2.0", "qd": "0,0,-1"}

    def test_parse_rejects_bad_line(self):
        with pytest.raises(ValueError):
            parse_config("no equals here")

    def test_s2_from_config(self):
        p = params_from_config({"model": "s2", "kq": "3.0", "qd": "0,0,-1"})
        assert isinstance(p, S2Params)
        assert p.kq == 3.0
        assert np.array_equal(p.qd, -E3)

    def test_so3_from_config(self):
        cfg = {"model": "so3", "J1": "4", "J2": "2", "J3": "1",
               "G1": "1", "G2": "1", "G3": "1", "kR": "2.5"}
        p = params_from_config(cfg)
        assert isinstance(p, SO3Params)
        assert np.array_equal(p.j_diag, [4.0, 2.0, 1.0])
        assert p.kR == 2.5

    def test_unknown_model(self):
        with pytest.raises(ValueError):
            params_from_config({"model": "se3"})
