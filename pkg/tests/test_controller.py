"""Control laws: factorizations, equivariance, baselines, estimator."""

import numpy as np
import pytest

from rigidform import (
    ContainmentViolation,
    ControllerConfig,
    Framework,
    RigidGraph,
    agent_control,
    conventional_control,
    maneuver_control,
    ppc_control,
    robust_conventional_control,
)
from rigidform.controller import expand_edge_weights
from conftest import random_rigid_framework, random_rotation, specs_for


def at_desired(fw):
    """Specs whose desired distances equal the framework's current lengths."""
    rel = fw.relative_positions()
    lengths = np.sqrt(np.einsum("km,km->k", rel, rel))
    return specs_for(fw, d=lengths)


class TestControllerConfig:
    def test_leader_required_iff_maneuver(self):
        with pytest.raises(ValueError, match="leader"):
            ControllerConfig(gains=1.0, variant="ppc_maneuver")
        with pytest.raises(ValueError, match="leader"):
            ControllerConfig(gains=1.0, variant="ppc", leader=2)
        ControllerConfig(gains=1.0, variant="ppc_maneuver", leader=0)

    def test_gains_positive(self):
        with pytest.raises(ValueError, match="positive"):
            ControllerConfig(gains=0.0)

    def test_unknown_variant(self):
        with pytest.raises(ValueError, match="variant"):
            ControllerConfig(variant="pid")


class TestPpcControl:
    def test_zero_errors_zero_input(self, rng):
        fw = random_rigid_framework(rng, m=3)
        specs, _ = at_desired(fw)
        u = ppc_control(fw, specs, 0.5, t=0.3)
        np.testing.assert_allclose(u, 0.0, atol=1e-15)

    def test_translation_invariance(self, rng):
        fw = random_rigid_framework(rng, m=2)
        specs, _ = specs_for(fw)
        shift = np.array([4.0, -7.0])
        moved = Framework(fw.graph, fw.positions + shift)
        np.testing.assert_allclose(ppc_control(moved, specs, 0.4, 0.1),
                                   ppc_control(fw, specs, 0.4, 0.1), atol=1e-12)

    def test_rotation_equivariance(self, rng):
        for _ in range(10):
            m = int(rng.integers(2, 4))
            fw = random_rigid_framework(rng, m=m)
            specs, _ = specs_for(fw)
            Q = random_rotation(rng, m)
            rotated = Framework(fw.graph, fw.positions @ Q.T)
            u = ppc_control(fw, specs, 0.7, 0.1).reshape(fw.n, m)
            u_rot = ppc_control(rotated, specs, 0.7, 0.1).reshape(fw.n, m)
            np.testing.assert_allclose(u_rot, u @ Q.T, atol=1e-10)

    def test_propagates_containment_violation(self, rng):
        fw = random_rigid_framework(rng, m=2)
        specs, d = specs_for(fw)
        # push one edge far outside its funnel by moving a vertex away
        pos = fw.positions.copy()
        pos[fw.graph.edges[0][0]] += 50.0
        blown = Framework(fw.graph, pos)
        with pytest.raises(ContainmentViolation) as exc_info:
            ppc_control(blown, specs, 0.5, 0.0)
        assert exc_info.value.edge in fw.graph.edges


class TestAgentControl:
    def _agent_inputs(self, fw, specs, gains, i):
        rel = {}
        spec_map = {}
        gain_map = {}
        for k, (a, b) in enumerate(fw.graph.edges):
            if i not in (a, b):
                continue
            j = b if a == i else a
            rel[j] = fw.positions[i] - fw.positions[j]
            spec_map[j] = specs[k]
            gain_map[j] = gains[k]
        return rel, spec_map, gain_map

    def test_zero_errors_zero_input(self, rng):
        fw = random_rigid_framework(rng, m=2)
        specs, _ = at_desired(fw)
        gains = np.full(fw.graph.l, 0.3)
        rel, sm, gm = self._agent_inputs(fw, specs, gains, 0)
        np.testing.assert_allclose(agent_control(0, rel, sm, gm, 0.5), 0.0, atol=1e-13)

    def test_stacking_reproduces_stacked_law(self, rng):
        for _ in range(10):
            m = int(rng.integers(2, 4))
            fw = random_rigid_framework(rng, m=m)
            specs, _ = specs_for(fw)
            gains = rng.uniform(0.1, 1.0, fw.graph.l)
            stacked = ppc_control(fw, specs, gains, 0.15)
            per_agent = np.concatenate([
                agent_control(i, *self._agent_inputs(fw, specs, gains, i), 0.15)
                for i in range(fw.n)])
            np.testing.assert_allclose(per_agent, stacked, atol=1e-12)

    def test_local_frame_measurement(self, rng):
        """Feeding relative positions expressed in a rotated local frame yields
        the rotated control: the law runs on on-board measurements alone."""
        fw = random_rigid_framework(rng, m=2)
        specs, _ = specs_for(fw)
        gains = np.full(fw.graph.l, 0.5)
        rel, sm, gm = self._agent_inputs(fw, specs, gains, 1)
        Q = random_rotation(rng, 2)
        rel_local = {j: Q.T @ v for j, v in rel.items()}
        u_global = agent_control(1, rel, sm, gm, 0.1)
        u_local = agent_control(1, rel_local, sm, gm, 0.1)
        np.testing.assert_allclose(u_local, Q.T @ u_global, atol=1e-12)


class TestManeuverControl:
    def test_zero_error_leader_injection(self, rng):
        fw = random_rigid_framework(rng, n=5, m=2)
        specs, _ = at_desired(fw)
        vd = lambda t: np.array([1.0, 0.0])
        u = maneuver_control(fw, specs, 0.2, leader=2, v_d=vd, t=0.0).reshape(5, 2)
        np.testing.assert_allclose(u[2], [5.0, 0.0], atol=1e-14)
        for i in (0, 1, 3, 4):
            np.testing.assert_allclose(u[i], 0.0, atol=1e-14)
        np.testing.assert_allclose(u.mean(axis=0), [1.0, 0.0], atol=1e-14)

    def test_block_average_equals_commanded_velocity(self, rng):
        for _ in range(50):
            m = int(rng.integers(2, 4))
            fw = random_rigid_framework(rng, m=m)
            specs, _ = specs_for(fw)
            gains = rng.uniform(0.05, 1.0, fw.graph.l)
            leader = int(rng.integers(fw.n))
            v = rng.uniform(-2, 2, m)
            u = maneuver_control(fw, specs, gains, leader, lambda t: v, 0.0)
            avg = u.reshape(fw.n, m).mean(axis=0)
            np.testing.assert_allclose(avg, v, atol=1e-12)

    def test_zero_velocity_reduces_to_acquisition(self, rng):
        fw = random_rigid_framework(rng, m=2)
        specs, _ = specs_for(fw)
        vd = lambda t: np.zeros(2)
        np.testing.assert_array_equal(
            maneuver_control(fw, specs, 0.3, leader=0, v_d=vd, t=0.1),
            ppc_control(fw, specs, 0.3, 0.1))

    def test_invalid_leader_rejected(self, rng):
        fw = random_rigid_framework(rng, n=4, m=2)
        specs, _ = specs_for(fw)
        with pytest.raises(ValueError, match="leader"):
            maneuver_control(fw, specs, 0.3, leader=9, v_d=lambda t: np.zeros(2), t=0.0)


class TestConventionalControl:
    def test_zero_errors_zero_input(self, rng):
        fw = random_rigid_framework(rng, m=2)
        rel = fw.relative_positions()
        d = np.sqrt(np.einsum("km,km->k", rel, rel))
        np.testing.assert_allclose(conventional_control(fw, d, 0.4), 0.0, atol=1e-14)

    def test_is_gradient_of_quarter_sum_of_squared_errors(self, rng):
        """The law equals -k times the gradient of (1/4) sum eta^2."""
        from rigidform import distance_errors
        step = 1e-6
        fw = random_rigid_framework(rng, m=2)
        d = np.sqrt((fw.relative_positions() ** 2).sum(axis=1)) * rng.uniform(0.8, 1.2, fw.graph.l)
        k = 0.7

        def potential(x):
            _, eta = distance_errors(Framework(fw.graph, x.reshape(fw.n, 2)), d)
            return 0.25 * float(np.sum(eta ** 2))

        x0 = fw.positions.reshape(-1)
        grad = np.zeros_like(x0)
        for a in range(x0.size):
            xp, xm = x0.copy(), x0.copy()
            xp[a] += step
            xm[a] -= step
            grad[a] = (potential(xp) - potential(xm)) / (2 * step)
        np.testing.assert_allclose(conventional_control(fw, d, k), -k * grad, atol=1e-5)

    def test_stretched_edge_moves_only_incident_agents(self):
        g = RigidGraph(3, ((0, 1), (0, 2), (1, 2)))
        pos = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
        fw = Framework(g, pos)
        d = np.array([0.8, 1.0, 1.0])  # first edge stretched relative to target
        u = conventional_control(fw, d, 1.0).reshape(3, 2)
        np.testing.assert_allclose(u[2], 0.0, atol=1e-14)
        np.testing.assert_allclose(u[0], -u[1], atol=1e-14)
        assert np.linalg.norm(u[0]) > 0


class TestRobustConventionalControl:
    def test_fixed_point_at_zero(self, rng):
        fw = random_rigid_framework(rng, m=2)
        rel = fw.relative_positions()
        d = np.sqrt(np.einsum("km,km->k", rel, rel))
        cfg = ControllerConfig(variant="robust_conventional", k=0.3)
        dhat = np.zeros(fw.n * 2)
        u, dhat_next = robust_conventional_control(fw, d, cfg, dhat, dt=0.01)
        np.testing.assert_allclose(u, 0.0, atol=1e-14)
        np.testing.assert_allclose(dhat_next, 0.0, atol=1e-14)

    def test_undecayed_estimator_grows_linearly(self, rng):
        fw = random_rigid_framework(rng, m=2)
        d = 0.9 * np.sqrt((fw.relative_positions() ** 2).sum(axis=1))
        cfg = ControllerConfig(variant="robust_conventional", k=0.3, theta=0.0, weights=1.5)
        from rigidform import distance_errors
        from rigidform.rigidity import rigidity_transpose_apply
        _, eta = distance_errors(fw, d)
        drive = expand_edge_weights(fw.graph, 1.5, 2) * np.abs(
            0.3 * rigidity_transpose_apply(fw, eta))
        dhat = np.zeros(fw.n * 2)
        dt = 0.05
        for _ in range(4):
            _, dhat = robust_conventional_control(fw, d, cfg, dhat, dt=dt)
        np.testing.assert_allclose(dhat, 4 * dt * drive, rtol=1e-12, atol=1e-15)

    def test_estimator_stays_nonnegative(self, rng):
        fw = random_rigid_framework(rng, m=2)
        d = rng.uniform(0.8, 1.2, fw.graph.l) * np.sqrt(
            (fw.relative_positions() ** 2).sum(axis=1))
        cfg = ControllerConfig(variant="robust_conventional", k=0.3, theta=0.5)
        dhat = np.zeros(fw.n * 2)
        for _ in range(50):
            _, dhat = robust_conventional_control(fw, d, cfg, dhat, dt=0.02)
            assert np.all(dhat >= 0.0)

    def test_uniform_weights_expand_uniformly(self, rng):
        fw = random_rigid_framework(rng, m=3)
        np.testing.assert_array_equal(expand_edge_weights(fw.graph, 1.5, 3),
                                      np.full(fw.n * 3, 1.5))


class TestEquivariance:
    """All four laws commute with rigid motions of the input positions."""

    def test_rigid_motion_equivariance(self, rng):
        for _ in range(10):
            m = int(rng.integers(2, 4))
            fw = random_rigid_framework(rng, m=m)
            specs, d = specs_for(fw)
            gains = rng.uniform(0.1, 0.8, fw.graph.l)
            Q = random_rotation(rng, m)
            c = rng.uniform(-3, 3, m)
            moved = Framework(fw.graph, fw.positions @ Q.T + c)
            leader = int(rng.integers(fw.n))
            v = rng.uniform(-1, 1, m)
            cfg = ControllerConfig(variant="robust_conventional", k=0.3)
            dhat = rng.uniform(0.0, 0.5, fw.n * m)

            def rot(u):
                return (u.reshape(fw.n, m) @ Q.T).reshape(-1)

            np.testing.assert_allclose(
                ppc_control(moved, specs, gains, 0.1),
                rot(ppc_control(fw, specs, gains, 0.1)), atol=1e-10)
            # the commanded velocity is rotated along with the positions
            np.testing.assert_allclose(
                maneuver_control(moved, specs, gains, leader, lambda t: Q @ v, 0.1),
                rot(maneuver_control(fw, specs, gains, leader, lambda t: v, 0.1)),
                atol=1e-10)
            np.testing.assert_allclose(
                conventional_control(moved, d, 0.4),
                rot(conventional_control(fw, d, 0.4)), atol=1e-10)
            # the estimator state is per agent axis: rotate it consistently
            u_moved, _ = robust_conventional_control(moved, d, cfg, np.zeros(fw.n * m), 0.01)
            u_base, _ = robust_conventional_control(fw, d, cfg, np.zeros(fw.n * m), 0.01)
            np.testing.assert_allclose(u_moved, rot(u_base), atol=1e-10)
