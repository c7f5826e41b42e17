"""Scenario schema, validation messages, builtins, round-trips."""

import json
import math

import numpy as np
import pytest

from rigidform import ScenarioError, builtin, builtin_names, load_scenario, save_scenario
from rigidform.scenario import scenario_from_jsonable, to_jsonable


class TestBuiltins:
    def test_names(self):
        assert builtin_names() == ("tetra_acquisition", "pentagon_case1", "pentagon_case2",
                                   "pentagon_case3", "pentagon_maneuver")

    def test_unknown_name(self):
        with pytest.raises(ScenarioError, match="unknown builtin"):
            builtin("hexagon")

    def test_tetra_parameters(self):
        sc = builtin("tetra_acquisition")
        assert sc.dimension == 3 and sc.n_agents == 4
        assert sc.edges == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
        np.testing.assert_allclose(sc.desired_distances, [2.5, 2.5, 2.5, 1.5, 1.5, 1.5])
        np.testing.assert_allclose(sc.gains, 0.1)
        np.testing.assert_allclose(sc.decay, 0.6)
        np.testing.assert_allclose(sc.rho_inf, 0.03)
        np.testing.assert_allclose(sc.rho0, 1.0)
        assert sc.mu == 0.12
        np.testing.assert_allclose(sc.mu_bar, 0.3)
        np.testing.assert_allclose(sc.mu_underbar, 0.3)
        np.testing.assert_allclose(sc.safety_radius, 0.2)
        np.testing.assert_allclose(sc.sensing_radius, 5.0)
        assert sc.sim.dt == 1e-3 and sc.sim.duration == 10.0
        # the realization reproduces the stated distances
        prep = sc.prepare()
        np.testing.assert_allclose(prep.desired_distances, sc.desired_distances, rtol=1e-12)

    def test_pentagon_cases_scale_disturbance(self):
        scales = [builtin(f"pentagon_case{i}").disturbance.scale for i in (1, 2, 3)]
        assert scales == [1.0, 2.0, 4.0]
        sc = builtin("pentagon_case1")
        np.testing.assert_allclose(sc.gains, 0.3)
        np.testing.assert_allclose(sc.decay, 1.0)
        assert sc.conventional.k == 0.3
        assert sc.conventional.epsilon == 0.01
        assert sc.conventional.theta == 0.01
        assert sc.conventional.weights == 1.5
        side = math.sqrt(2 * (1 - math.cos(2 * math.pi / 5)))
        diag = math.sqrt(2 * (1 + math.cos(math.pi / 5)))
        np.testing.assert_allclose(sc.desired_distances,
                                   [side, diag, diag, side, side, side, side], rtol=1e-12)

    def test_maneuver_configuration(self):
        sc = builtin("pentagon_maneuver")
        assert sc.variant == "ppc_maneuver"
        assert sc.leader == 4  # agent 5, 0-based
        np.testing.assert_allclose(sc.gains, 0.2)
        v = sc.centroid_velocity(0.7)
        np.testing.assert_allclose(v, [np.sin(0.35), np.cos(0.35)], rtol=1e-12)

    def test_all_builtins_validate(self):
        for name in builtin_names():
            builtin(name).prepare()


class TestJsonRoundTrip:
    @pytest.mark.parametrize("name", ["tetra_acquisition", "pentagon_case2", "pentagon_maneuver"])
    def test_jsonable_round_trip_identical(self, name):
        sc = builtin(name)
        data = to_jsonable(sc)
        again = to_jsonable(scenario_from_jsonable(json.loads(json.dumps(data))))
        assert again == data

    def test_file_round_trip(self, tmp_path):
        sc = builtin("pentagon_maneuver")
        path = tmp_path / "maneuver.json"
        save_scenario(sc, path)
        loaded = load_scenario(path)
        assert to_jsonable(loaded) == to_jsonable(sc)


class TestLoadingErrors:
    def test_parse_error_names_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "schema_version": 1,\n  "oops"\n}\n')
        with pytest.raises(ScenarioError, match=r"broken\.json:\d+:\d+: Expecting"):
            load_scenario(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="cannot read"):
            load_scenario(tmp_path / "nope.json")

    def test_unsupported_version(self):
        data = to_jsonable(builtin("tetra_acquisition"))
        data["schema_version"] = 99
        with pytest.raises(ScenarioError, match="schema_version"):
            scenario_from_jsonable(data)

    def test_missing_field_named(self):
        data = to_jsonable(builtin("tetra_acquisition"))
        del data["funnel"]["rho_inf"]
        with pytest.raises(ScenarioError, match=r"funnel\.rho_inf"):
            scenario_from_jsonable(data)

    def test_edge_vertex_out_of_range(self):
        data = to_jsonable(builtin("tetra_acquisition"))
        data["formation"]["edges"][0] = [1, 9]
        with pytest.raises(ScenarioError, match=r"formation\.edges\[0\]"):
            scenario_from_jsonable(data)

    def test_infeasible_distance_names_edge(self):
        data = to_jsonable(builtin("tetra_acquisition"))
        data["agents"]["sensing_radius"] = [1.0, 1.0, 1.0, 1.0]  # r_c too small for d=2.5
        sc = scenario_from_jsonable(data)
        with pytest.raises(ScenarioError, match=r"edge \(1,2\).*not feasible"):
            sc.prepare()

    def test_inconsistent_distances_vs_realization(self):
        data = to_jsonable(builtin("tetra_acquisition"))
        data["formation"]["desired_distances"][0] = 2.6
        sc = scenario_from_jsonable(data)
        with pytest.raises(ScenarioError, match="disagrees"):
            sc.prepare()

    def test_non_rigid_desired_framework(self):
        data = to_jsonable(builtin("pentagon_case1"))
        # collinear desired realization cannot be infinitesimally rigid
        data["formation"]["desired_positions"] = [[float(i), 0.0] for i in range(5)]
        data["formation"]["desired_distances"] = None
        sc = scenario_from_jsonable(data)
        with pytest.raises(ScenarioError, match="rigid"):
            sc.prepare()

    def test_maneuver_requires_leader(self):
        data = to_jsonable(builtin("pentagon_maneuver"))
        data["controller"]["leader"] = None
        with pytest.raises(ScenarioError, match="leader"):
            scenario_from_jsonable(data).prepare()


class TestOverridesAndGeneration:
    def test_disturbance_scale_override(self):
        sc = builtin("pentagon_case1").with_overrides(disturbance_scale=4.0)
        assert sc.disturbance.scale == 4.0
        assert builtin("pentagon_case1").disturbance.scale == 1.0

    def test_variant_override_drops_leader(self):
        sc = builtin("pentagon_maneuver").with_overrides(variant="conventional")
        assert sc.variant == "conventional" and sc.leader is None

    def test_variant_override_to_maneuver_needs_leader(self):
        with pytest.raises(ScenarioError, match="leader"):
            builtin("pentagon_case1").with_overrides(variant="ppc_maneuver")

    def test_generated_positions_deterministic(self):
        data = to_jsonable(builtin("pentagon_case1"))
        data["agents"]["initial_positions"] = None
        data["simulation"]["seed"] = 7
        data["simulation"]["initial_jitter"] = 0.05
        a = scenario_from_jsonable(data).prepare().initial_framework.positions
        b = scenario_from_jsonable(data).prepare().initial_framework.positions
        np.testing.assert_array_equal(a, b)
        assert np.abs(a - builtin("pentagon_case1").desired_positions).max() <= 0.05

    def test_generated_positions_require_seed(self):
        data = to_jsonable(builtin("pentagon_case1"))
        data["agents"]["initial_positions"] = None
        with pytest.raises(ScenarioError, match="seed"):
            scenario_from_jsonable(data).prepare()
